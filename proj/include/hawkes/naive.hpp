#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "hawkes/likelihood.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

/// Direct O(n^2) evaluation of the same log-likelihood as log_likelihood():
/// per arrival, the intensity is rebuilt by summing over the full history,
/// and the integral of the intensity is accumulated per kernel term in
/// closed form. Deliberately shares no code with compute_r_table; kept as
/// the reference implementation for equivalence testing.
template <typename Scalar>
Scalar naive_log_likelihood(const VectorX<Scalar>& theta, const EventSequence<Scalar>& events) {
    validate(events);
    const Eigen::Index m = events.dim();
    validate_theta(theta, m);

    const Eigen::Index mm = m * m;
    const auto alpha = [&](Eigen::Index j, Eigen::Index k) { return theta[j * m + k]; };
    const auto beta = [&](Eigen::Index j, Eigen::Index k) { return theta[mm + j * m + k]; };
    const auto mu = [&](Eigen::Index j) { return theta[2 * mm + j]; };
    const Scalar horizon = events.horizon;

    Scalar total(0);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (const Scalar& t : events.arrivals[static_cast<std::size_t>(j)]) {
            if (!(t < horizon)) continue;
            Scalar lam = mu(j);
            for (Eigen::Index k = 0; k < m; ++k)
                for (const Scalar& u : events.arrivals[static_cast<std::size_t>(k)]) {
                    if (!(u < t)) break;
                    lam += alpha(j, k) * std::exp(-beta(j, k) * (t - u));
                }
            total += std::log(lam);
        }
        total -= mu(j) * horizon;
        for (Eigen::Index k = 0; k < m; ++k)
            for (const Scalar& u : events.arrivals[static_cast<std::size_t>(k)])
                total -= (alpha(j, k) / beta(j, k)) * (Scalar(1) - std::exp(-beta(j, k) * (horizon - u)));
    }
    return total;
}

template <typename Scalar>
Scalar naive_log_likelihood(const HawkesModel<Scalar>& model, const EventSequence<Scalar>& events) {
    validate(model);
    return naive_log_likelihood(to_param_vector(model), events);
}

}  // namespace hawkes
