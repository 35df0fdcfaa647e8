#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "eprsim/stats.hpp"

using namespace eprsim;

namespace {

double phi(double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

// Independent oracle for the normal CDF: Simpson's rule over [0, x].
double normal_cdf_oracle(double x) {
    const int n = 4000;
    const double h = x / n;
    double sum = phi(0.0) + phi(x);
    for (int i = 1; i < n; ++i) sum += phi(i * h) * (i % 2 ? 4.0 : 2.0);
    return 0.5 + sum * h / 3.0;
}

std::vector<std::uint64_t> draws(RandomStream stream, int n) {
    std::vector<std::uint64_t> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(stream.next_u64());
    return out;
}

}  // namespace

TEST_CASE("derive_stream is pure: same spec, identical first 1000 draws") {
    const StreamSpec spec{42, "unit/purity", 7};
    CHECK(draws(derive_stream(spec), 1000) == draws(derive_stream(spec), 1000));
}

TEST_CASE("derive_stream separates trial indices, labels, and seeds") {
    const StreamSpec base{42, "unit/distinct", 0};

    StreamSpec other_trial = base;
    other_trial.trial_index = 1;
    CHECK(draws(derive_stream(base), 1000) !=
          draws(derive_stream(other_trial), 1000));

    StreamSpec other_label = base;
    other_label.experiment_label = "unit/distinct2";
    CHECK(draws(derive_stream(base), 1000) !=
          draws(derive_stream(other_label), 1000));

    StreamSpec other_seed = base;
    other_seed.master_seed = 43;
    CHECK(draws(derive_stream(base), 1000) !=
          draws(derive_stream(other_seed), 1000));
}

TEST_CASE("no 128-bit prefix collisions across 10^6 consecutive trials") {
    constexpr std::uint64_t kStreams = 1000000;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> prefixes;
    prefixes.reserve(kStreams);
    for (std::uint64_t trial = 0; trial < kStreams; ++trial) {
        RandomStream s = derive_stream({12345, "unit/collision", trial});
        const std::uint64_t first = s.next_u64();
        prefixes.emplace_back(first, s.next_u64());
    }
    std::sort(prefixes.begin(), prefixes.end());
    CHECK(std::adjacent_find(prefixes.begin(), prefixes.end()) == prefixes.end());
}

TEST_CASE("uniform draws match the uniform-moment oracle") {
    constexpr int kDraws = 1000000;
    RandomStream stream = derive_stream({7, "unit/moments", 0});
    double sum = 0.0;
    bool in_range = true;
    for (int i = 0; i < kDraws; ++i) {
        const double u = stream.uniform();
        in_range = in_range && u >= 0.0 && u < 1.0;
        sum += u;
    }
    CHECK(in_range);
    // Uniform[0,1) has mean 1/2 and variance 1/12.
    const double tolerance = 5.0 * std::sqrt(1.0 / 12.0 / kDraws);
    CHECK(std::abs(sum / kDraws - 0.5) < tolerance);
}

TEST_CASE("uniform(lo, hi) stays inside the half-open range") {
    RandomStream stream = derive_stream({7, "unit/range", 0});
    for (int i = 0; i < 10000; ++i) {
        const double u = stream.uniform(2.0, 5.0);
        REQUIRE(u >= 2.0);
        REQUIRE(u < 5.0);
    }
}

TEST_CASE("correlation_from_counts: pinned examples") {
    const CorrelationEstimate anti = correlation_from_counts({0, 50, 50, 0});
    CHECK(anti.estimate == -1.0);
    CHECK(anti.stderr_ == 0.0);
    CHECK(anti.trials == 100);

    const CorrelationEstimate zero = correlation_from_counts({25, 25, 25, 25});
    CHECK(zero.estimate == 0.0);
    CHECK(zero.stderr_ == doctest::Approx(0.1).epsilon(1e-12));

    CHECK_THROWS_AS(correlation_from_counts({0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("correlation_from_counts reproduces (P + N - 4Q)/total") {
    // Counts laid out as (P-Q, Q, Q, N-Q): the bookkeeping identity in
    // product-mean form.
    const std::uint64_t P = 700, N = 300, Q = 150;
    const CorrelationEstimate est = correlation_from_counts({P - Q, Q, Q, N - Q});
    const double expected =
        static_cast<double>(P + N - 4 * Q) / static_cast<double>(P + N);
    CHECK(est.estimate == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("correlation estimate is invariant under the diagonal swap") {
    RandomStream stream = derive_stream({11, "unit/swap", 0});
    for (int i = 0; i < 200; ++i) {
        JointCounts counts{stream.next_u64() % 1000, stream.next_u64() % 1000,
                           stream.next_u64() % 1000, stream.next_u64() % 1000};
        if (counts.total() == 0) continue;
        const JointCounts swapped{counts.mm, counts.mp, counts.pm, counts.pp};
        const CorrelationEstimate a = correlation_from_counts(counts);
        const CorrelationEstimate b = correlation_from_counts(swapped);
        REQUIRE(a.estimate == b.estimate);
        REQUIRE(a.stderr_ == b.stderr_);
    }
}

TEST_CASE("stderr follows sqrt((1 - estimate^2)/trials)") {
    const CorrelationEstimate est = correlation_from_counts({70, 10, 5, 15});
    const double expected =
        std::sqrt((1.0 - est.estimate * est.estimate) / 100.0);
    CHECK(est.stderr_ == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("z_test matches the quadrature oracle for two-sided p-values") {
    for (double z : {0.5, 1.0, 1.96, 3.0}) {
        CorrelationEstimate est;
        est.estimate = z * 0.1;
        est.stderr_ = 0.1;
        est.trials = 100;
        const double oracle = 2.0 * (1.0 - normal_cdf_oracle(z));
        CHECK(z_test(est, 0.0) == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("z_test: |z| = 1.96 gives p near 0.05") {
    CorrelationEstimate est;
    est.estimate = 0.196;
    est.stderr_ = 0.1;
    est.trials = 100;
    CHECK(z_test(est, 0.0) == doctest::Approx(0.05).epsilon(2e-3));
}

TEST_CASE("z_test: estimate equal to expected gives p = 1") {
    CorrelationEstimate est;
    est.estimate = 0.25;
    est.stderr_ = 0.05;
    est.trials = 400;
    CHECK(z_test(est, 0.25) == 1.0);
}

TEST_CASE("z_test: degenerate stderr falls back to exact comparison") {
    CorrelationEstimate est;
    est.estimate = -1.0;
    est.stderr_ = 0.0;
    est.trials = 100;
    CHECK(z_test(est, -1.0) == 1.0);
    CHECK(z_test(est, 0.0) == 0.0);
}

TEST_CASE("z_test: -1/2 against 0 at N = 10^6 is far below 1e-6") {
    // Analytically z = 0.5 / sqrt(0.75/10^6) ~ 577.
    CorrelationEstimate est;
    est.estimate = -0.5;
    est.trials = 1000000;
    est.stderr_ = std::sqrt((1.0 - 0.25) / 1000000.0);
    CHECK(z_test(est, 0.0) < 1e-6);
}

TEST_CASE("wilson_interval: boundary counts pin the exact endpoint") {
    const Interval none = wilson_interval(0, 1000, 0.95);
    CHECK(none.lo == 0.0);
    CHECK(none.hi > 0.0);

    const Interval all = wilson_interval(1000, 1000, 0.95);
    CHECK(all.hi == 1.0);
    CHECK(all.lo < 1.0);
}

TEST_CASE("wilson_interval: (500, 1000, 95%) matches the score formula") {
    // Oracle: the Wilson formula evaluated from scratch.
    const double n = 1000.0, p_hat = 0.5;
    const double z = normal_quantile(0.975);
    const double z2 = z * z;
    const double centre = (p_hat + z2 / (2 * n)) / (1 + z2 / n);
    const double half =
        z * std::sqrt(p_hat * (1 - p_hat) / n + z2 / (4 * n * n)) / (1 + z2 / n);

    const Interval got = wilson_interval(500, 1000, 0.95);
    CHECK(got.lo == doctest::Approx(centre - half).epsilon(1e-12));
    CHECK(got.hi == doctest::Approx(centre + half).epsilon(1e-12));
    CHECK(got.lo == doctest::Approx(0.469).epsilon(1e-3));
    CHECK(got.hi == doctest::Approx(0.531).epsilon(1e-3));

    // Cross-check: close to the plain normal approximation at this n.
    const double wald_half = z * std::sqrt(p_hat * (1 - p_hat) / n);
    CHECK(got.lo == doctest::Approx(p_hat - wald_half).epsilon(2e-3));
    CHECK(got.hi == doctest::Approx(p_hat + wald_half).epsilon(2e-3));
}

TEST_CASE("wilson_interval brackets the sample proportion") {
    for (std::uint64_t s : {0ull, 1ull, 250ull, 777ull, 999ull, 1000ull}) {
        const Interval iv = wilson_interval(s, 1000, 0.95);
        const double p_hat = static_cast<double>(s) / 1000.0;
        REQUIRE(iv.lo <= p_hat);
        REQUIRE(iv.hi >= p_hat);
        REQUIRE(iv.lo >= 0.0);
        REQUIRE(iv.hi <= 1.0);
    }
}

TEST_CASE("wilson_interval rejects invalid input") {
    CHECK_THROWS_AS(wilson_interval(1, 0, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(5, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(5, 10, 1.0), std::invalid_argument);
}

TEST_CASE("normal_cdf matches the quadrature oracle") {
    for (double x = -3.0; x <= 3.0; x += 0.25) {
        CHECK(normal_cdf(x) == doctest::Approx(normal_cdf_oracle(x)).epsilon(1e-9));
    }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
    for (double x = -3.0; x <= 3.0; x += 0.25) {
        CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
    }
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("estimators are pure: repeated calls are identical") {
    const JointCounts counts{70, 10, 5, 15};
    const CorrelationEstimate a = correlation_from_counts(counts);
    const CorrelationEstimate b = correlation_from_counts(counts);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_ == b.stderr_);

    const Interval i1 = wilson_interval(321, 1000, 0.9);
    const Interval i2 = wilson_interval(321, 1000, 0.9);
    CHECK(i1.lo == i2.lo);
    CHECK(i1.hi == i2.hi);
}
