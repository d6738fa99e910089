#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

/// R table for one (target j, source l) pair: values[i] accumulates the
/// decayed contribution of source-l arrivals strictly before the i-th
/// target arrival, i = 0..n_j, with values[0] == 0.
template <typename Scalar>
using RTable = std::vector<Scalar>;

inline Eigen::Index param_count(Eigen::Index dim) { return 2 * dim * dim + dim; }

/// Flattens (alpha row-major, beta row-major, mu) into one vector of
/// length 2*m^2 + m.
template <typename Scalar>
VectorX<Scalar> to_param_vector(const HawkesModel<Scalar>& model) {
    const Eigen::Index m = model.dim();
    VectorX<Scalar> theta(param_count(m));
    Eigen::Index p = 0;
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k) theta[p++] = model.alpha(j, k);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k) theta[p++] = model.beta(j, k);
    for (Eigen::Index j = 0; j < m; ++j) theta[p++] = model.mu[j];
    return theta;
}

template <typename Scalar>
HawkesModel<Scalar> from_param_vector(const VectorX<Scalar>& theta, Eigen::Index dim) {
    if (dim < 1) throw std::invalid_argument("from_param_vector: dimension must be positive");
    if (theta.size() != param_count(dim))
        throw std::invalid_argument("from_param_vector: parameter vector has wrong length");
    HawkesModel<Scalar> model;
    model.mu.resize(dim);
    model.alpha.resize(dim, dim);
    model.beta.resize(dim, dim);
    Eigen::Index p = 0;
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index k = 0; k < dim; ++k) model.alpha(j, k) = theta[p++];
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index k = 0; k < dim; ++k) model.beta(j, k) = theta[p++];
    for (Eigen::Index j = 0; j < dim; ++j) model.mu[j] = theta[p++];
    return model;
}

/// Recursion over target-j arrivals t_1 <= ... <= t_n:
///   R(i) = exp(-beta_jl * (t_i - t_{i-1})) * R(i-1)
///          + sum over source-l arrivals u in [t_{i-1}, t_i) of exp(-beta_jl * (t_i - u))
/// with R(0) = 0 and t_0 := 0, so source arrivals before the first target
/// arrival are captured. The half-open window keeps arrivals exactly at
/// t_i out of R(i); they enter at the next strictly later target arrival.
template <typename Scalar>
RTable<Scalar> compute_r_table(const EventSequence<Scalar>& events, Eigen::Index j, Eigen::Index l,
                               Scalar beta_jl) {
    validate(events);
    if (j < 0 || j >= events.dim() || l < 0 || l >= events.dim())
        throw std::out_of_range("compute_r_table: dimension index out of range");
    if (!(beta_jl > Scalar(0)))
        throw std::invalid_argument("compute_r_table: beta must be > 0");

    const auto& target = events.arrivals[static_cast<std::size_t>(j)];
    const auto& source = events.arrivals[static_cast<std::size_t>(l)];
    RTable<Scalar> table(target.size() + 1, Scalar(0));

    Scalar prev = Scalar(0);
    std::size_t pos = 0;  // next unconsumed source arrival
    for (std::size_t i = 1; i <= target.size(); ++i) {
        const Scalar cur = target[i - 1];
        Scalar bracket(0);
        while (pos < source.size() && source[pos] < cur) {
            bracket += std::exp(-beta_jl * (cur - source[pos]));
            ++pos;
        }
        table[i] = std::exp(-beta_jl * (cur - prev)) * table[i - 1] + bracket;
        prev = cur;
    }
    return table;
}

template <typename Scalar>
void validate_theta(const VectorX<Scalar>& theta, Eigen::Index dim) {
    if (theta.size() != param_count(dim))
        throw std::domain_error("log_likelihood: parameter vector has wrong length");
    const Eigen::Index mm = dim * dim;
    for (Eigen::Index p = 0; p < theta.size(); ++p) {
        if (!std::isfinite(static_cast<double>(theta[p])))
            throw std::domain_error("log_likelihood: non-finite parameter");
        if (p < mm) {
            if (theta[p] < Scalar(0)) throw std::domain_error("log_likelihood: alpha must be >= 0");
        } else if (!(theta[p] > Scalar(0))) {
            throw std::domain_error(p < 2 * mm ? "log_likelihood: beta must be > 0"
                                               : "log_likelihood: mu must be > 0");
        }
    }
}

/// Exact log-likelihood of the exponential-kernel model on [0, horizon]:
///   sum_j [ -mu_j T
///           - sum_k (alpha_jk / beta_jk) * sum_i (1 - exp(-beta_jk (T - t_i^k)))
///           + sum over target arrivals t_i^j < T of
///             log(mu_j + sum_l alpha_jl R_jl(i)) ]
/// Linear in the event count per (j,l) pair via compute_r_table.
template <typename Scalar>
Scalar log_likelihood(const VectorX<Scalar>& theta, const EventSequence<Scalar>& events) {
    validate(events);
    const Eigen::Index m = events.dim();
    validate_theta(theta, m);
    const HawkesModel<Scalar> model = from_param_vector(theta, m);
    const Scalar horizon = events.horizon;

    std::vector<Scalar> block(static_cast<std::size_t>(m), Scalar(0));
    std::vector<Scalar> scratch(static_cast<std::size_t>(m), Scalar(0));
    std::vector<RTable<Scalar>> tables(static_cast<std::size_t>(m));

    for (Eigen::Index j = 0; j < m; ++j) {
        // compensator: mu_j T plus the closed-form kernel mass of every arrival
        for (Eigen::Index k = 0; k < m; ++k) {
            const Scalar b = model.beta(j, k);
            Scalar mass(0);
            for (const Scalar& u : events.arrivals[static_cast<std::size_t>(k)])
                mass += Scalar(1) - std::exp(-b * (horizon - u));
            scratch[static_cast<std::size_t>(k)] = (model.alpha(j, k) / b) * mass;
        }
        Scalar value = -model.mu[j] * horizon - detail::sum_ascending(scratch);

        for (Eigen::Index l = 0; l < m; ++l)
            tables[static_cast<std::size_t>(l)] = compute_r_table(events, j, l, model.beta(j, l));

        const auto& target = events.arrivals[static_cast<std::size_t>(j)];
        for (std::size_t i = 1; i <= target.size(); ++i) {
            if (!(target[i - 1] < horizon)) break;  // arrivals at T carry no log term
            for (Eigen::Index l = 0; l < m; ++l)
                scratch[static_cast<std::size_t>(l)] =
                    model.alpha(j, l) * tables[static_cast<std::size_t>(l)][i];
            value += std::log(model.mu[j] + detail::sum_ascending(scratch));
        }
        block[static_cast<std::size_t>(j)] = value;
    }
    return detail::sum_ascending(block);
}

template <typename Scalar>
Scalar log_likelihood(const HawkesModel<Scalar>& model, const EventSequence<Scalar>& events) {
    validate(model);
    return log_likelihood(to_param_vector(model), events);
}

}  // namespace hawkes
