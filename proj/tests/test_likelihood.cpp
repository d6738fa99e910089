#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hawkes/likelihood.hpp"
#include "hawkes/model.hpp"
#include "hawkes/naive.hpp"
#include "support.hpp"

using hawkes::EventSequence;
using hawkes::HawkesModel;
using hawkes::MatrixX;
using hawkes::VectorX;

namespace {

EventSequence<double> make_events(std::vector<std::vector<double>> arrivals, double horizon) {
    EventSequence<double> events;
    events.arrivals = std::move(arrivals);
    events.horizon = horizon;
    return events;
}

/// Direct translation of the defining sum over source arrivals strictly
/// before the i-th target arrival; valid with or without tied times.
double r_direct_time_based(const EventSequence<double>& events, int j, int l, double beta,
                           std::size_t i) {
    const auto& target = events.arrivals[static_cast<std::size_t>(j)];
    const auto& source = events.arrivals[static_cast<std::size_t>(l)];
    double sum = 0.0;
    for (double u : source)
        if (u < target[i - 1]) sum += std::exp(-beta * (target[i - 1] - u));
    return sum;
}

}  // namespace

TEST_CASE("r table starts at exactly zero") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + static_cast<int>(hawkes::uniform01(rng) * 3.0);
        const auto events = testsupport::random_events(rng, m, 50, 20.0, true);
        const int j = static_cast<int>(hawkes::uniform01(rng) * m);
        const int l = static_cast<int>(hawkes::uniform01(rng) * m);
        const auto table = hawkes::compute_r_table(events, j, l, testsupport::uniform(rng, 0.1, 5.0));
        CHECK(table[0] == 0.0);
    }
}

TEST_CASE("r table self-excitation values on a three-arrival sequence") {
    const auto events = make_events({{1.0, 2.0, 3.0}}, 5.0);
    const auto table = hawkes::compute_r_table(events, 0, 0, 1.0);
    REQUIRE(table.size() == 4);
    CHECK(table[0] == 0.0);
    CHECK(table[1] == 0.0);
    CHECK(table[2] == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(table[3] == doctest::Approx(0.503214724408055).epsilon(1e-15));
}

TEST_CASE("r table cross-dimension value gathers source arrivals before the target") {
    const auto events = make_events({{2.0}, {0.5, 1.0}}, 5.0);
    const auto table = hawkes::compute_r_table(events, 0, 1, 1.0);
    REQUIRE(table.size() == 2);
    CHECK(table[1] == doctest::Approx(0.5910096013198721).epsilon(1e-15));
}

TEST_CASE("r table argument validation") {
    const auto events = make_events({{1.0}}, 5.0);
    CHECK_THROWS_AS(hawkes::compute_r_table(events, 1, 0, 1.0), std::out_of_range);
    CHECK_THROWS_AS(hawkes::compute_r_table(events, 0, 1, 1.0), std::out_of_range);
    CHECK_THROWS_AS(hawkes::compute_r_table(events, 0, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(hawkes::compute_r_table(events, 0, 0, -1.0), std::invalid_argument);
}

TEST_CASE("r table recursion equals the direct sums on random instances") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 1 + static_cast<int>(hawkes::uniform01(rng) * 3.0);
        const bool edge_cases = trial % 2 == 0;
        const auto events = testsupport::random_events(rng, m, 60, 15.0, edge_cases);
        const double beta = testsupport::uniform(rng, 0.05, 8.0);
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l) {
                const auto table = hawkes::compute_r_table(events, j, l, beta);
                const auto& target = events.arrivals[static_cast<std::size_t>(j)];
                for (std::size_t i = 1; i <= target.size(); ++i) {
                    CHECK(table[i] >= 0.0);
                    const double by_time = r_direct_time_based(events, j, l, beta, i);
                    CHECK(table[i] == doctest::Approx(by_time).epsilon(1e-12));
                }
                if (j == l && !edge_cases) {
                    // tie-free: the index-based form sum_{k<i} exp(-beta (t_i - t_k))
                    for (std::size_t i = 1; i <= target.size(); ++i) {
                        double direct = 0.0;
                        for (std::size_t k = 0; k + 1 < i; ++k)
                            direct += std::exp(-beta * (target[i - 1] - target[k]));
                        CHECK(table[i] == doctest::Approx(direct).epsilon(1e-12));
                    }
                }
            }
    }
}

TEST_CASE("parameter vector layout and round-trip") {
    HawkesModel<double> model;
    model.mu.resize(2);
    model.mu << 0.7, 1.3;
    model.alpha.resize(2, 2);
    model.alpha << 1.0, 2.0, 3.0, 4.0;
    model.beta.resize(2, 2);
    model.beta << 5.0, 6.0, 7.0, 8.0;

    const VectorX<double> theta = hawkes::to_param_vector(model);
    REQUIRE(theta.size() == hawkes::param_count(2));
    // (alpha row-major, beta row-major, mu)
    CHECK(theta[0] == 1.0);
    CHECK(theta[1] == 2.0);
    CHECK(theta[2] == 3.0);
    CHECK(theta[3] == 4.0);
    CHECK(theta[4] == 5.0);
    CHECK(theta[7] == 8.0);
    CHECK(theta[8] == 0.7);
    CHECK(theta[9] == 1.3);

    const auto back = hawkes::from_param_vector(theta, 2);
    CHECK(back.mu == model.mu);
    CHECK(back.alpha == model.alpha);
    CHECK(back.beta == model.beta);

    CHECK_THROWS_AS(hawkes::from_param_vector(theta, 3), std::invalid_argument);
}

TEST_CASE("log-likelihood of an empty sequence is exactly the background cost") {
    HawkesModel<double> model;
    model.mu = VectorX<double>::Constant(2, 1.0);
    model.alpha = MatrixX<double>::Constant(2, 2, 0.8);
    model.beta = MatrixX<double>::Constant(2, 2, 1.7);
    const auto events = make_events({{}, {}}, 3.0);
    CHECK(hawkes::log_likelihood(model, events) == -6.0);
    CHECK(hawkes::naive_log_likelihood(model, events) == -6.0);
}

TEST_CASE("log-likelihood with zero excitation is the Poisson value") {
    HawkesModel<double> model;
    model.mu = VectorX<double>::Constant(1, 1.0);
    model.alpha = MatrixX<double>::Constant(1, 1, 0.0);
    model.beta = MatrixX<double>::Constant(1, 1, 1.0);
    const auto events = make_events({{1.0}}, 2.0);
    CHECK(hawkes::log_likelihood(model, events) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(hawkes::naive_log_likelihood(model, events) == doctest::Approx(-2.0).epsilon(1e-15));

    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = 1 + static_cast<int>(hawkes::uniform01(rng) * 3.0);
        auto random = testsupport::random_model(rng, m);
        random.alpha.setZero();
        const double horizon = testsupport::uniform(rng, 5.0, 30.0);
        auto events = testsupport::random_events(rng, m, 80, horizon * 0.99, false);
        events.horizon = horizon;  // arrivals stay strictly inside

        double closed_form = 0.0;
        for (int j = 0; j < m; ++j)
            closed_form += -random.mu[j] * horizon +
                           static_cast<double>(events.arrivals[static_cast<std::size_t>(j)].size()) *
                               std::log(random.mu[j]);
        CHECK(hawkes::log_likelihood(random, events) == doctest::Approx(closed_form).epsilon(1e-12));
    }
}

TEST_CASE("recursive and naive log-likelihoods agree on randomized instances") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 1 + static_cast<int>(hawkes::uniform01(rng) * 3.0);
        const auto model = testsupport::random_model(rng, m);
        const double horizon = testsupport::uniform(rng, 2.0, 25.0);
        const auto events = testsupport::random_events(rng, m, 120, horizon, trial % 3 != 0);
        const VectorX<double> theta = hawkes::to_param_vector(model);
        const double recursive = hawkes::log_likelihood(theta, events);
        const double naive = hawkes::naive_log_likelihood(theta, events);
        CHECK(std::abs(recursive - naive) <= 1e-9 * (1.0 + std::abs(naive)));
    }
}

TEST_CASE("log-likelihood is exactly invariant under dimension relabeling") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = 3;
        const auto model = testsupport::random_model(rng, m);
        const auto events = testsupport::random_events(rng, m, 40, 12.0, true);

        std::vector<int> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);

        HawkesModel<double> permuted = model;
        EventSequence<double> permuted_events = events;
        for (int j = 0; j < m; ++j) {
            permuted.mu[perm[j]] = model.mu[j];
            permuted_events.arrivals[static_cast<std::size_t>(perm[j])] =
                events.arrivals[static_cast<std::size_t>(j)];
            for (int k = 0; k < m; ++k) {
                permuted.alpha(perm[j], perm[k]) = model.alpha(j, k);
                permuted.beta(perm[j], perm[k]) = model.beta(j, k);
            }
        }
        CHECK(hawkes::log_likelihood(model, events) ==
              hawkes::log_likelihood(permuted, permuted_events));
    }
}

TEST_CASE("appending a final event shifts the log-likelihood by its own term") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2;
        const auto model = testsupport::random_model(rng, m, 0.05, 4.0);
        const double horizon = 20.0;
        auto events = testsupport::random_events(rng, m, 30, 15.0, false);
        events.horizon = horizon;

        double latest = 0.0;
        for (const auto& a : events.arrivals)
            if (!a.empty()) latest = std::max(latest, a.back());
        const double t_new = testsupport::uniform(rng, latest + 0.01, horizon - 0.01);
        const int j = static_cast<int>(hawkes::uniform01(rng) * m);

        const double base = hawkes::log_likelihood(model, events);
        const double lambda_at_new = hawkes::intensity(model, events, j, t_new);
        double compensator_delta = 0.0;
        for (int jj = 0; jj < m; ++jj)
            compensator_delta += model.alpha(jj, j) / model.beta(jj, j) *
                                 (1.0 - std::exp(-model.beta(jj, j) * (horizon - t_new)));

        auto extended = events;
        extended.arrivals[static_cast<std::size_t>(j)].push_back(t_new);
        const double grown = hawkes::log_likelihood(model, extended);
        const double expected = base + std::log(lambda_at_new) - compensator_delta;
        CHECK(grown == doctest::Approx(expected).epsilon(1e-10));
        CHECK(hawkes::naive_log_likelihood(model, extended) ==
              doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("event terms match the direct intensity evaluation through the r tables") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 15; ++trial) {
        const int m = 2;
        const auto model = testsupport::random_model(rng, m, 0.05, 5.0);
        const auto events = testsupport::random_events(rng, m, 50, 10.0, false);
        for (int j = 0; j < m; ++j) {
            std::vector<hawkes::RTable<double>> tables;
            for (int l = 0; l < m; ++l)
                tables.push_back(hawkes::compute_r_table(events, j, l, model.beta(j, l)));
            const auto& target = events.arrivals[static_cast<std::size_t>(j)];
            for (std::size_t i = 1; i <= target.size(); ++i) {
                double cached = model.mu[j];
                for (int l = 0; l < m; ++l) cached += model.alpha(j, l) * tables[l][i];
                const double direct = hawkes::intensity(model, events, j, target[i - 1]);
                CHECK(cached == doctest::Approx(direct).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("an arrival exactly at the horizon carries no event term") {
    HawkesModel<double> model;
    model.mu = VectorX<double>::Constant(1, 2.0);
    model.alpha = MatrixX<double>::Constant(1, 1, 0.0);
    model.beta = MatrixX<double>::Constant(1, 1, 1.0);
    const double horizon = 4.0;
    const auto events = make_events({{1.0, horizon}}, horizon);
    // only the interior arrival contributes log(mu)
    const double expected = -2.0 * horizon + std::log(2.0);
    CHECK(hawkes::log_likelihood(model, events) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(hawkes::naive_log_likelihood(model, events) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("parameter domain errors") {
    const auto events = make_events({{1.0}}, 2.0);
    VectorX<double> theta(3);
    theta << 0.5, 1.0, 1.0;  // alpha, beta, mu
    CHECK_NOTHROW(hawkes::log_likelihood(theta, events));

    VectorX<double> bad = theta;
    bad[0] = -0.1;
    CHECK_THROWS_AS(hawkes::log_likelihood(bad, events), std::domain_error);
    CHECK_THROWS_AS(hawkes::naive_log_likelihood(bad, events), std::domain_error);
    bad = theta;
    bad[1] = 0.0;
    CHECK_THROWS_AS(hawkes::log_likelihood(bad, events), std::domain_error);
    bad = theta;
    bad[2] = 0.0;
    CHECK_THROWS_AS(hawkes::log_likelihood(bad, events), std::domain_error);
    CHECK_THROWS_AS(hawkes::log_likelihood(VectorX<double>::Ones(4), events), std::domain_error);
}
