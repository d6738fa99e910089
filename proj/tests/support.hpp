#pragma once

// Helpers shared by the unit and acceptance suites. The oracles here are
// deliberately written as direct translations of the definitions, with no
// code shared with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hawkes/model.hpp"
#include "hawkes/random.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * hawkes::uniform01(rng);
}

inline hawkes::HawkesModel<double> random_model(std::mt19937_64& rng, int m, double lo = 0.01,
                                                double hi = 10.0) {
    hawkes::HawkesModel<double> model;
    model.mu.resize(m);
    model.alpha.resize(m, m);
    model.beta.resize(m, m);
    for (int j = 0; j < m; ++j) {
        model.mu[j] = uniform(rng, lo, hi);
        for (int k = 0; k < m; ++k) {
            model.alpha(j, k) = uniform(rng, lo, hi);
            model.beta(j, k) = uniform(rng, lo, hi);
        }
    }
    return model;
}

/// Arbitrary sorted arrival times in [0, horizon]; optionally plants
/// duplicates and boundary arrivals so tie handling gets exercised.
inline hawkes::EventSequence<double> random_events(std::mt19937_64& rng, int m, int max_per_dim,
                                                   double horizon, bool with_edge_cases = false) {
    hawkes::EventSequence<double> events;
    events.horizon = horizon;
    for (int k = 0; k < m; ++k) {
        const int n = 1 + static_cast<int>(hawkes::uniform01(rng) * max_per_dim);
        std::vector<double> times;
        times.reserve(static_cast<std::size_t>(n) + 3);
        for (int i = 0; i < n; ++i) times.push_back(uniform(rng, 0.0, horizon));
        if (with_edge_cases) {
            if (!times.empty() && hawkes::uniform01(rng) < 0.5) times.push_back(times.front());
            if (hawkes::uniform01(rng) < 0.3) times.push_back(0.0);
            if (hawkes::uniform01(rng) < 0.3) times.push_back(horizon);
        }
        std::sort(times.begin(), times.end());
        events.arrivals.push_back(std::move(times));
    }
    return events;
}

/// Intensity by literal summation over the full history, independent of the
/// library implementation.
inline double brute_force_intensity(const hawkes::HawkesModel<double>& model,
                                    const hawkes::EventSequence<double>& events, int j, double t) {
    double lam = model.mu[j];
    for (int k = 0; k < model.dim(); ++k)
        for (double u : events.arrivals[static_cast<std::size_t>(k)])
            if (u < t) lam += model.alpha(j, k) * std::exp(-model.beta(j, k) * (t - u));
    return lam;
}

/// Composite Simpson rule on a smooth integrand.
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    return sum * h / 3.0;
}

/// One-sample Kolmogorov-Smirnov statistic against Exp(1).
inline double ks_statistic_exp1(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 1.0 - std::exp(-samples[i]);
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    return d;
}

/// Asymptotic Kolmogorov p-value with the small-sample correction
/// t = D (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double t = d * (sn + 0.12 + 0.11 / sn);
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-12) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace testsupport
