#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

/// Box constraints, termination rules and simplex coefficients for the
/// Nelder-Mead minimizer and the multi-start fit driver built on it.
struct OptimizerConfig {
    double lower_bound = 1e-12;
    double upper_bound = 10.0;
    int max_iterations = 10000;
    double x_tolerance = 1e-8;
    double f_tolerance = 1e-8;
    int restarts = 4;
    std::uint64_t seed = 0;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

inline void validate(const OptimizerConfig& config) {
    if (!(config.lower_bound > 0.0) || !(config.lower_bound < config.upper_bound))
        throw std::invalid_argument("OptimizerConfig: requires 0 < lower_bound < upper_bound");
    if (config.max_iterations < 1)
        throw std::invalid_argument("OptimizerConfig: max_iterations must be >= 1");
    if (config.restarts < 0) throw std::invalid_argument("OptimizerConfig: restarts must be >= 0");
    if (!(config.x_tolerance > 0.0) || !(config.f_tolerance > 0.0))
        throw std::invalid_argument("OptimizerConfig: tolerances must be > 0");
    if (!(config.reflection > 0.0) || !(config.expansion > 1.0) || !(config.contraction > 0.0) ||
        config.contraction >= 1.0 || !(config.shrink > 0.0) || config.shrink >= 1.0)
        throw std::invalid_argument("OptimizerConfig: simplex coefficients out of range");
}

template <typename Scalar>
struct NelderMeadResult {
    VectorX<Scalar> x;
    Scalar f{};
    int iterations = 0;
    bool converged = false;
};

/// Nelder-Mead simplex minimization over the box [lower_bound, upper_bound]^n.
/// Every trial vertex is clamped componentwise into the box before it is
/// evaluated, so the objective is never queried outside. Terminates when the
/// simplex diameter drops below x_tolerance and the value spread below
/// f_tolerance, or after max_iterations. Vertex ordering breaks value ties
/// by insertion order, which makes runs fully deterministic.
template <typename Objective, typename Derived>
NelderMeadResult<typename Derived::Scalar> nelder_mead(Objective&& objective,
                                                       const Eigen::MatrixBase<Derived>& x0_in,
                                                       const OptimizerConfig& config) {
    using Scalar = typename Derived::Scalar;
    using Vector = VectorX<Scalar>;
    validate(config);

    const Vector x0 = x0_in;
    const Eigen::Index n = x0.size();
    if (n < 1) throw std::invalid_argument("nelder_mead: empty start point");
    const Scalar lo = static_cast<Scalar>(config.lower_bound);
    const Scalar hi = static_cast<Scalar>(config.upper_bound);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(x0[i] >= lo) || !(x0[i] < hi))
            throw std::invalid_argument("nelder_mead: start point outside [lower_bound, upper_bound)");

    const auto clamp = [&](Vector v) {
        for (Eigen::Index i = 0; i < n; ++i) v[i] = std::min(std::max(v[i], lo), hi);
        return v;
    };
    const auto eval = [&](const Vector& v) { return static_cast<Scalar>(objective(v)); };

    struct Vertex {
        Vector x;
        Scalar f;
        std::uint64_t id;
    };
    std::uint64_t next_id = 0;
    std::vector<Vertex> simplex;
    simplex.reserve(static_cast<std::size_t>(n) + 1);

    const Scalar f0 = eval(x0);
    if (!std::isfinite(static_cast<double>(f0)))
        throw std::invalid_argument("nelder_mead: objective not finite at start point");
    simplex.push_back({x0, f0, next_id++});
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector v = x0;
        v[i] += std::max(Scalar(0.05) * std::abs(x0[i]), Scalar(0.01));
        v = clamp(std::move(v));
        simplex.push_back({v, eval(v), next_id++});
    }

    const auto order = [](const Vertex& a, const Vertex& b) {
        return a.f < b.f || (a.f == b.f && a.id < b.id);
    };
    std::stable_sort(simplex.begin(), simplex.end(), order);

    const auto replace_worst = [&](Vector x, Scalar f) {
        simplex.back() = Vertex{std::move(x), f, next_id++};
        std::stable_sort(simplex.begin(), simplex.end(), order);
    };

    int iterations = 0;
    bool converged = false;
    while (iterations < config.max_iterations) {
        // convergence: max vertex distance from best, and value spread
        Scalar diameter(0);
        for (std::size_t i = 1; i < simplex.size(); ++i)
            diameter = std::max(diameter,
                                (simplex[i].x - simplex.front().x).template lpNorm<Eigen::Infinity>());
        const Scalar spread = simplex.back().f - simplex.front().f;
        if (diameter < static_cast<Scalar>(config.x_tolerance) &&
            spread < static_cast<Scalar>(config.f_tolerance)) {
            converged = true;
            break;
        }
        ++iterations;

        Vector centroid = Vector::Zero(n);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i].x;
        centroid /= static_cast<Scalar>(n);

        const Vertex& worst = simplex.back();
        const Vector reflected =
            clamp(centroid + static_cast<Scalar>(config.reflection) * (centroid - worst.x));
        const Scalar f_reflected = eval(reflected);

        if (f_reflected < simplex.front().f) {
            const Vector expanded =
                clamp(centroid + static_cast<Scalar>(config.expansion) * (reflected - centroid));
            const Scalar f_expanded = eval(expanded);
            if (f_expanded < f_reflected)
                replace_worst(expanded, f_expanded);
            else
                replace_worst(reflected, f_reflected);
            continue;
        }
        if (f_reflected < simplex[simplex.size() - 2].f) {
            replace_worst(reflected, f_reflected);
            continue;
        }

        bool contracted = false;
        if (f_reflected < worst.f) {  // outside contraction
            const Vector point =
                clamp(centroid + static_cast<Scalar>(config.contraction) * (reflected - centroid));
            const Scalar f_point = eval(point);
            if (f_point <= f_reflected) {
                replace_worst(point, f_point);
                contracted = true;
            }
        } else {  // inside contraction
            const Vector point =
                clamp(centroid - static_cast<Scalar>(config.contraction) * (centroid - worst.x));
            const Scalar f_point = eval(point);
            if (f_point < worst.f) {
                replace_worst(point, f_point);
                contracted = true;
            }
        }
        if (contracted) continue;

        // shrink toward the best vertex, which itself stays put
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            simplex[i].x = clamp(simplex.front().x +
                                 static_cast<Scalar>(config.shrink) * (simplex[i].x - simplex.front().x));
            simplex[i].f = eval(simplex[i].x);
            simplex[i].id = next_id++;
        }
        std::stable_sort(simplex.begin(), simplex.end(), order);
    }

    return NelderMeadResult<Scalar>{simplex.front().x, simplex.front().f, iterations, converged};
}

}  // namespace hawkes
