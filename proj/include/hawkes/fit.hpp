#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/likelihood.hpp"
#include "hawkes/model.hpp"
#include "hawkes/nelder_mead.hpp"
#include "hawkes/random.hpp"

namespace hawkes {

enum class BoundHit { interior, at_lower, at_upper };

inline const char* to_string(BoundHit hit) {
    switch (hit) {
        case BoundHit::at_lower: return "lower";
        case BoundHit::at_upper: return "upper";
        default: return "interior";
    }
}

template <typename Scalar = double>
struct FitResult {
    HawkesModel<Scalar> model;
    Scalar neg_log_likelihood{};
    Scalar log_likelihood{};
    int iterations = 0;
    bool converged = false;
    std::vector<BoundHit> bound_hits;  // parameter-vector order
    int restarts_used = 0;
};

/// Maximum-likelihood fit: minimizes theta -> -log_likelihood(theta, events)
/// over the box with 1 + restarts Nelder-Mead starts. Start points are drawn
/// log-uniformly over [0.01, upper_bound / 2] from per-start streams derived
/// from the seed, so results do not depend on evaluation order and identical
/// inputs reproduce bit-identical output. Restarts run concurrently.
template <typename Scalar>
FitResult<Scalar> fit(const EventSequence<Scalar>& events, const OptimizerConfig& config) {
    validate(events);
    validate(config);
    const Eigen::Index m = events.dim();
    for (Eigen::Index k = 0; k < m; ++k)
        if (events.arrivals[static_cast<std::size_t>(k)].empty())
            throw std::invalid_argument(
                "fit: dimension " + std::to_string(k) +
                " has no events; its background rate would pin to the lower bound and the "
                "excitation columns feeding it are unidentifiable");

    const Eigen::Index n = param_count(m);
    const int starts = config.restarts + 1;
    const Scalar start_lo = std::max<Scalar>(Scalar(0.01), static_cast<Scalar>(config.lower_bound));
    const Scalar start_hi = static_cast<Scalar>(config.upper_bound) / Scalar(2);
    const Scalar log_lo = std::log(start_lo);
    const Scalar log_hi = std::log(start_hi);

    std::vector<VectorX<Scalar>> start_points(static_cast<std::size_t>(starts));
    for (int r = 0; r < starts; ++r) {
        std::mt19937_64 rng(split_seed(config.seed, static_cast<std::uint64_t>(r)));
        VectorX<Scalar> x0(n);
        for (Eigen::Index i = 0; i < n; ++i)
            x0[i] = std::exp(log_lo + (log_hi - log_lo) * static_cast<Scalar>(uniform01(rng)));
        start_points[static_cast<std::size_t>(r)] = std::move(x0);
    }

    const auto objective = [&events](const VectorX<Scalar>& theta) {
        return -log_likelihood(theta, events);
    };
    const auto run_start = [&](int r) -> NelderMeadResult<Scalar> {
        return nelder_mead(objective, start_points[static_cast<std::size_t>(r)], config);
    };

    std::vector<NelderMeadResult<Scalar>> runs(static_cast<std::size_t>(starts));
    std::vector<bool> ok(static_cast<std::size_t>(starts), false);
    {
        std::vector<std::future<NelderMeadResult<Scalar>>> futures;
        futures.reserve(static_cast<std::size_t>(starts));
        for (int r = 0; r < starts; ++r)
            futures.push_back(std::async(std::launch::async, run_start, r));
        for (int r = 0; r < starts; ++r) {
            try {
                runs[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
                ok[static_cast<std::size_t>(r)] =
                    std::isfinite(static_cast<double>(runs[static_cast<std::size_t>(r)].f));
            } catch (const std::invalid_argument&) {
                ok[static_cast<std::size_t>(r)] = false;  // non-finite objective at this start
            }
        }
    }

    int best = -1;
    for (int r = 0; r < starts; ++r) {
        if (!ok[static_cast<std::size_t>(r)]) continue;
        if (best < 0 || runs[static_cast<std::size_t>(r)].f < runs[static_cast<std::size_t>(best)].f)
            best = r;  // ties keep the lower start index
    }
    if (best < 0) throw std::runtime_error("fit: objective was non-finite at every start point");

    const NelderMeadResult<Scalar>& winner = runs[static_cast<std::size_t>(best)];
    FitResult<Scalar> result;
    result.model = from_param_vector(winner.x, m);
    result.neg_log_likelihood = winner.f;
    result.log_likelihood = -winner.f;
    result.iterations = winner.iterations;
    result.converged = winner.converged;
    result.restarts_used = starts - 1;
    result.bound_hits.resize(static_cast<std::size_t>(n), BoundHit::interior);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(static_cast<double>(winner.x[i]) - config.lower_bound) <= config.x_tolerance)
            result.bound_hits[static_cast<std::size_t>(i)] = BoundHit::at_lower;
        else if (std::abs(static_cast<double>(winner.x[i]) - config.upper_bound) <= config.x_tolerance)
            result.bound_hits[static_cast<std::size_t>(i)] = BoundHit::at_upper;
    }
    return result;
}

}  // namespace hawkes
