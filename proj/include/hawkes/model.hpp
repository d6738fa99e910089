#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Parameters of an m-variate Hawkes process with kernel
/// alpha(j,k) * exp(-beta(j,k) * dt): entry (j,k) is the effect ON
/// dimension j FROM events in dimension k. Rates are per hour.
template <typename Scalar = double>
struct HawkesModel {
    VectorX<Scalar> mu;     // background intensities, > 0
    MatrixX<Scalar> alpha;  // excitation jumps, >= 0
    MatrixX<Scalar> beta;   // decay rates, > 0

    Eigen::Index dim() const { return mu.size(); }
};

/// Arrival times of an m-variate point process observed on [0, horizon].
/// Each per-dimension list is sorted non-decreasing; ties are allowed.
template <typename Scalar = double>
struct EventSequence {
    std::vector<std::vector<Scalar>> arrivals;
    Scalar horizon{};

    Eigen::Index dim() const { return static_cast<Eigen::Index>(arrivals.size()); }

    std::size_t total_events() const {
        std::size_t n = 0;
        for (const auto& a : arrivals) n += a.size();
        return n;
    }
};

template <typename Scalar>
void validate(const HawkesModel<Scalar>& model) {
    const Eigen::Index m = model.dim();
    if (m < 1) throw std::invalid_argument("HawkesModel: dimension must be positive");
    if (model.alpha.rows() != m || model.alpha.cols() != m)
        throw std::invalid_argument("HawkesModel: alpha must be dim x dim");
    if (model.beta.rows() != m || model.beta.cols() != m)
        throw std::invalid_argument("HawkesModel: beta must be dim x dim");
    for (Eigen::Index j = 0; j < m; ++j) {
        if (!std::isfinite(static_cast<double>(model.mu[j])) || !(model.mu[j] > Scalar(0)))
            throw std::invalid_argument("HawkesModel: mu entries must be finite and > 0");
        for (Eigen::Index k = 0; k < m; ++k) {
            if (!std::isfinite(static_cast<double>(model.alpha(j, k))) || model.alpha(j, k) < Scalar(0))
                throw std::invalid_argument("HawkesModel: alpha entries must be finite and >= 0");
            if (!std::isfinite(static_cast<double>(model.beta(j, k))) || !(model.beta(j, k) > Scalar(0)))
                throw std::invalid_argument("HawkesModel: beta entries must be finite and > 0");
        }
    }
}

template <typename Scalar>
void validate(const EventSequence<Scalar>& events) {
    if (events.dim() < 1)
        throw std::invalid_argument("EventSequence: at least one dimension required");
    if (!std::isfinite(static_cast<double>(events.horizon)) || !(events.horizon > Scalar(0)))
        throw std::invalid_argument("EventSequence: horizon must be finite and > 0");
    for (std::size_t k = 0; k < events.arrivals.size(); ++k) {
        const auto& a = events.arrivals[k];
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!std::isfinite(static_cast<double>(a[i])) || a[i] < Scalar(0) || a[i] > events.horizon)
                throw std::invalid_argument("EventSequence: arrival outside [0, horizon] in dimension " +
                                            std::to_string(k));
            if (i > 0 && a[i] < a[i - 1])
                throw std::invalid_argument("EventSequence: arrivals not sorted in dimension " +
                                            std::to_string(k));
        }
    }
}

namespace detail {

/// Sums the entries of a small scratch vector in ascending order. Keeps
/// accumulation order independent of how dimensions are labeled and adds
/// small terms first.
template <typename Scalar>
Scalar sum_ascending(std::vector<Scalar>& terms) {
    std::sort(terms.begin(), terms.end());
    Scalar total(0);
    for (const Scalar& t : terms) total += t;
    return total;
}

}  // namespace detail

/// Conditional intensity lambda_j(t) given the history strictly before t:
/// mu_j plus the decayed kernel contributions of all arrivals with
/// t_i < t. Left-continuous: an arrival exactly at t is excluded.
template <typename Scalar>
Scalar intensity(const HawkesModel<Scalar>& model, const EventSequence<Scalar>& events,
                 Eigen::Index j, Scalar t) {
    validate(model);
    validate(events);
    if (model.dim() != events.dim())
        throw std::invalid_argument("intensity: model and events dimension mismatch");
    if (j < 0 || j >= model.dim()) throw std::out_of_range("intensity: dimension index out of range");
    if (!(t >= Scalar(0)) || t > events.horizon)
        throw std::invalid_argument("intensity: query time outside [0, horizon]");

    const Eigen::Index m = model.dim();
    std::vector<Scalar> per_source(static_cast<std::size_t>(m), Scalar(0));
    for (Eigen::Index k = 0; k < m; ++k) {
        const Scalar a = model.alpha(j, k);
        const Scalar b = model.beta(j, k);
        Scalar s(0);
        for (const Scalar& u : events.arrivals[static_cast<std::size_t>(k)]) {
            if (!(u < t)) break;  // arrivals sorted
            s += std::exp(-b * (t - u));
        }
        per_source[static_cast<std::size_t>(k)] = a * s;
    }
    return detail::sum_ascending(per_source) + model.mu[j];
}

/// Matrix of expected direct offspring counts, entry (j,k) = alpha_jk / beta_jk.
template <typename Scalar>
MatrixX<Scalar> branching_matrix(const HawkesModel<Scalar>& model) {
    validate(model);
    return model.alpha.cwiseQuotient(model.beta);
}

template <typename Derived>
typename Derived::Scalar spectral_radius(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    MatrixX<Scalar> dense = m;
    if (dense.rows() != dense.cols())
        throw std::invalid_argument("spectral_radius: matrix must be square");
    Eigen::EigenSolver<MatrixX<Scalar>> solver(dense, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// A branching-matrix spectral radius >= 1 means the process is explosive
/// (each event spawns one or more offspring in expectation).
template <typename Scalar>
bool is_explosive(const HawkesModel<Scalar>& model) {
    return spectral_radius(branching_matrix(model)) >= Scalar(1);
}

/// N_k(t): number of arrivals in dimension k with t_i <= t.
template <typename Scalar>
std::size_t count_before(const EventSequence<Scalar>& events, Eigen::Index k, Scalar t) {
    validate(events);
    if (k < 0 || k >= events.dim())
        throw std::out_of_range("count_before: dimension index out of range");
    const auto& a = events.arrivals[static_cast<std::size_t>(k)];
    return static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), t) - a.begin());
}

}  // namespace hawkes
