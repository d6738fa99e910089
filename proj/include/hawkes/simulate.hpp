#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/random.hpp"

namespace hawkes {

template <typename Scalar = double>
struct SimulationConfig {
    HawkesModel<Scalar> model;
    Scalar horizon{};
    std::uint64_t seed = 0;
};

/// Ogata thinning. The dominating rate is the total intensity taken just
/// after the most recent accepted or rejected candidate; between events the
/// intensity only decays, so that rate is a valid upper bound until the next
/// candidate. Candidates are accepted with probability lambda(t)/lambda_bar
/// and assigned to a dimension proportionally to its intensity.
template <typename Scalar>
EventSequence<Scalar> simulate(const SimulationConfig<Scalar>& config) {
    validate(config.model);
    if (!(config.horizon > Scalar(0)) || !std::isfinite(static_cast<double>(config.horizon)))
        throw std::invalid_argument("simulate: horizon must be finite and > 0");
    const Scalar rho = spectral_radius(branching_matrix(config.model));
    if (rho >= Scalar(1)) {
        std::ostringstream msg;
        msg << "simulate: explosive model refused (branching-matrix spectral radius " << rho
            << " >= 1)";
        throw std::invalid_argument(msg.str());
    }

    const Eigen::Index m = config.model.dim();
    const MatrixX<Scalar>& alpha = config.model.alpha;
    const MatrixX<Scalar>& beta = config.model.beta;
    std::mt19937_64 rng(config.seed);

    EventSequence<Scalar> events;
    events.horizon = config.horizon;
    events.arrivals.assign(static_cast<std::size_t>(m), {});

    // excitation(j,k): decayed kernel mass currently acting on j from past k-events
    MatrixX<Scalar> excitation = MatrixX<Scalar>::Zero(m, m);
    VectorX<Scalar> lambda = config.model.mu;
    Scalar t(0);

    while (true) {
        const Scalar lambda_bar = lambda.sum();
        const Scalar wait = static_cast<Scalar>(exponential_draw(rng, static_cast<double>(lambda_bar)));
        const Scalar candidate = t + wait;
        if (!(candidate <= config.horizon)) break;

        excitation = (excitation.array() * (-beta.array() * (candidate - t)).exp()).matrix();
        lambda = config.model.mu + excitation.rowwise().sum();
        t = candidate;

        const Scalar total = lambda.sum();
        if (static_cast<Scalar>(uniform01(rng)) * lambda_bar <= total) {
            Scalar pick = static_cast<Scalar>(uniform01(rng)) * total;
            Eigen::Index k = 0;
            for (; k + 1 < m; ++k) {
                pick -= lambda[k];
                if (pick <= Scalar(0)) break;
            }
            events.arrivals[static_cast<std::size_t>(k)].push_back(t);
            excitation.col(k) += alpha.col(k);
            lambda += alpha.col(k);
        }
    }
    return events;
}

/// Integrated intensity of dimension j over [0, t], in closed form:
///   mu_j t + sum_k sum over k-arrivals u <= t of
///   (alpha_jk / beta_jk) (1 - exp(-beta_jk (t - u)))
template <typename Scalar>
Scalar compensator(const HawkesModel<Scalar>& model, const EventSequence<Scalar>& events,
                   Eigen::Index j, Scalar t) {
    validate(model);
    validate(events);
    if (model.dim() != events.dim())
        throw std::invalid_argument("compensator: model and events dimension mismatch");
    if (j < 0 || j >= model.dim())
        throw std::out_of_range("compensator: dimension index out of range");
    if (!(t >= Scalar(0)) || t > events.horizon)
        throw std::invalid_argument("compensator: time outside [0, horizon]");

    const Eigen::Index m = model.dim();
    std::vector<Scalar> per_source(static_cast<std::size_t>(m), Scalar(0));
    for (Eigen::Index k = 0; k < m; ++k) {
        const Scalar a = model.alpha(j, k);
        const Scalar b = model.beta(j, k);
        Scalar mass(0);
        for (const Scalar& u : events.arrivals[static_cast<std::size_t>(k)]) {
            if (u > t) break;
            mass += Scalar(1) - std::exp(-b * (t - u));
        }
        per_source[static_cast<std::size_t>(k)] = (a / b) * mass;
    }
    return detail::sum_ascending(per_source) + model.mu[j] * t;
}

/// Time-rescaling residuals for dimension j: successive compensator
/// increments between the dimension's arrivals (the first interval starts
/// at 0). Under the data-generating model these are i.i.d. Exp(1).
template <typename Scalar>
std::vector<Scalar> compensator_transform(const HawkesModel<Scalar>& model,
                                          const EventSequence<Scalar>& events, Eigen::Index j) {
    validate(model);
    validate(events);
    if (model.dim() != events.dim())
        throw std::invalid_argument("compensator_transform: model and events dimension mismatch");
    if (j < 0 || j >= model.dim())
        throw std::out_of_range("compensator_transform: dimension index out of range");

    const auto& own = events.arrivals[static_cast<std::size_t>(j)];
    std::vector<Scalar> deltas;
    deltas.reserve(own.size());
    Scalar previous(0);
    for (const Scalar& t : own) {
        const Scalar value = compensator(model, events, j, t);
        deltas.push_back(value - previous);
        previous = value;
    }
    return deltas;
}

}  // namespace hawkes
