#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eprsim/experiments.hpp"

using namespace eprsim;

namespace {

constexpr double kPi = std::numbers::pi;

const Direction kZ{0.0, 0.0, 1.0};
const Direction kX{1.0, 0.0, 0.0};

RunOptions options_with(std::uint64_t trials, std::uint64_t seed = 1) {
    RunOptions options;
    options.trials = trials;
    options.seed = seed;
    options.threads = 1;
    return options;
}

bool same_counts(const JointCounts& a, const JointCounts& b) {
    return a.pp == b.pp && a.pm == b.pm && a.mp == b.mp && a.mm == b.mm;
}

}  // namespace

TEST_CASE("inequality settings are the planar 45-degree pair") {
    const Direction a = inequality_setting_a();
    const Direction b = inequality_setting_b();
    CHECK(angle_between(a, kZ) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    CHECK(angle_between(b, kZ) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
    CHECK(angle_between(a, b) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("run_inequality: counts are consistent and the identity is exact") {
    const InequalityReport report =
        run_inequality(options_with(100000), Assignment::PlusMinus);

    CHECK(report.trials == 100000);
    CHECK(report.counts.total() == report.trials);
    CHECK(report.alice_plus + report.alice_minus == report.trials);
    CHECK(report.alice_plus == report.counts.pp + report.counts.pm);
    CHECK(report.q_plus_minus == report.counts.pm);
    CHECK(report.q_symmetric ==
          static_cast<double>(report.counts.pm + report.counts.mp) / 2.0);

    // Sum of outcome products equals P + N - 4Q with the symmetric Q; an
    // integer identity, not an approximation.
    CHECK(report.identity_holds);
    CHECK(report.sum_of_products == report.identity_value);
    const long long direct =
        static_cast<long long>(report.counts.pp + report.counts.mm) -
        static_cast<long long>(report.counts.pm + report.counts.mp);
    CHECK(report.sum_of_products == direct);
}

TEST_CASE("run_inequality: bookkeeping constants and flip rates") {
    const InequalityReport report =
        run_inequality(options_with(100000), Assignment::PlusMinus);

    CHECK(report.required_q_fraction == 0.25);
    const double bound = std::sin(kPi / 8.0) * std::sin(kPi / 8.0);
    CHECK(report.paper_bound == doctest::Approx(bound).epsilon(1e-12));
    CHECK(report.paper_bound == doctest::Approx(0.146447).epsilon(1e-5));

    // Station flips happen at the consecutive-measurement law's rate.
    const double tol = 5.0 * std::sqrt(bound * (1.0 - bound) / 100000.0);
    CHECK(std::abs(report.alice_flip_rate - bound) < tol);
    CHECK(std::abs(report.bob_flip_rate - bound) < tol);

    // The local model needs a 37.5% symmetric-Q rate here, far above both
    // the zero-correlation requirement and the flip bound.
    CHECK(report.q_fraction > report.required_q_fraction);
    CHECK(report.required_q_fraction > report.paper_bound);
}

TEST_CASE("run_inequality: local model excluded, quantum reference near zero") {
    for (const Assignment assignment :
         {Assignment::PlusMinus, Assignment::MinusPlus}) {
        const InequalityReport report =
            run_inequality(options_with(1000000), assignment);

        CHECK(report.local_model_exact == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(report.quantum_expected == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(report.local.estimate - report.local_model_exact) <
              5.0 * report.local.stderr_);
        CHECK(std::abs(report.quantum.estimate) < 4.0 / std::sqrt(1000000.0));
        CHECK(report.p_value < 1e-6);
        CHECK(report.local_model_excluded);
        CHECK(report.z_score < -100.0);
    }
}

TEST_CASE("run_inequality: trial floor is enforced") {
    CHECK_THROWS_AS(run_inequality(options_with(100), Assignment::PlusMinus),
                    std::invalid_argument);
    RunOptions small = options_with(100);
    small.allow_small = true;
    CHECK_NOTHROW(run_inequality(small, Assignment::PlusMinus));
    RunOptions zero = options_with(0);
    zero.allow_small = true;
    CHECK_THROWS_AS(run_inequality(zero, Assignment::PlusMinus),
                    std::invalid_argument);
}

TEST_CASE("run_correlation_sweep: validates the grid") {
    const RunOptions options = options_with(10000);
    CHECK_THROWS_AS(run_correlation_sweep(ModelSpec::quantum(), {}, options),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        run_correlation_sweep(ModelSpec::quantum(), {0.5, 0.5}, options),
        std::invalid_argument);
    CHECK_THROWS_AS(
        run_correlation_sweep(ModelSpec::quantum(), {0.5, 0.2}, options),
        std::invalid_argument);
    CHECK_THROWS_AS(
        run_correlation_sweep(ModelSpec::quantum(), {-0.1, 0.5}, options),
        std::invalid_argument);
    CHECK_THROWS_AS(
        run_correlation_sweep(ModelSpec::quantum(), {0.5, 3.5}, options),
        std::invalid_argument);
}

TEST_CASE("run_correlation_sweep: exact columns and estimates per model") {
    const std::vector<double> grid = {0.0, kPi / 6.0, kPi / 3.0, kPi / 2.0,
                                      2.0 * kPi / 3.0, kPi};
    const RunOptions options = options_with(20000);

    SUBCASE("isotropic starts at -1/3") {
        const SweepReport report =
            run_correlation_sweep(ModelSpec::isotropic_opposite(), grid, options);
        CHECK(report.rows[0].model_exact ==
              doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
        CHECK(report.rows[0].quantum_exact == -1.0);
    }

    SUBCASE("nonlocal matches the quantum column everywhere") {
        const SweepReport report =
            run_correlation_sweep(ModelSpec::nonlocal_aligning(), grid, options);
        for (const SweepRow& row : report.rows) {
            CHECK(row.model_exact == row.quantum_exact);
        }
    }

    SUBCASE("sign model crosses zero at the right angle") {
        const SweepReport report =
            run_correlation_sweep(ModelSpec::deterministic_sign(), grid, options);
        CHECK(report.rows[3].model_exact == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(report.rows[0].model_exact == -1.0);
    }

    SUBCASE("every estimate is within five standard errors of its oracle") {
        for (const ModelSpec& spec :
             {ModelSpec::quantum(),
              ModelSpec::definite_aligned(kZ, Assignment::PlusMinus),
              ModelSpec::isotropic_opposite(), ModelSpec::nonlocal_aligning(),
              ModelSpec::deterministic_sign()}) {
            const SweepReport report = run_correlation_sweep(spec, grid, options);
            REQUIRE(report.rows.size() == grid.size());
            for (const SweepRow& row : report.rows) {
                REQUIRE(row.quantum_exact ==
                        doctest::Approx(-std::cos(row.angle)).epsilon(1e-12));
                if (row.estimate.stderr_ == 0.0) {
                    REQUIRE(row.estimate.estimate == row.model_exact);
                } else {
                    REQUIRE(std::abs(row.estimate.estimate - row.model_exact) <
                            5.0 * row.estimate.stderr_);
                }
            }
        }
    }
}

TEST_CASE("kink_slope: quantum is flat, the sign model keeps slope 2/pi") {
    for (const double epsilon : {0.1, 0.01, 0.001}) {
        CHECK(kink_slope(ModelSpec::deterministic_sign(), epsilon) ==
              doctest::Approx(2.0 / kPi).epsilon(1e-12));
    }
    CHECK(std::abs(kink_slope(ModelSpec::quantum(), 0.01)) < 0.02);

    // Forward difference of -cos at zero: (1 - cos(e))/e, about e/2.
    const double expected = (1.0 - std::cos(0.01)) / 0.01;
    CHECK(kink_slope(ModelSpec::quantum(), 0.01) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(kink_slope(ModelSpec::isotropic_opposite(), 0.01) ==
          doctest::Approx(expected / 3.0).epsilon(1e-12));
}

TEST_CASE("kink_slope: epsilon is validated") {
    CHECK_THROWS_AS(kink_slope(ModelSpec::quantum(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kink_slope(ModelSpec::quantum(), -0.01), std::invalid_argument);
    CHECK_THROWS_AS(kink_slope(ModelSpec::quantum(), 0.2), std::invalid_argument);
}

TEST_CASE("run_frame_ordering: generic settings diverge in history only") {
    const FrameReport report = run_frame_ordering(
        Direction::planar(0.0), Direction::planar(kPi / 3.0), options_with(100000));

    CHECK(report.trials == 100000);
    CHECK(report.alice_first.total() == report.trials);
    CHECK(report.bob_first.total() == report.trials);
    CHECK(report.cells_within_tolerance);
    CHECK(report.max_cell_deviation < report.cell_tolerance);
    CHECK(report.history_divergence > 0.1);

    const double bound = 4.0 / std::sqrt(100000.0);
    CHECK(std::abs(report.correlation_alice_first.estimate - (-0.5)) < bound);
    CHECK(std::abs(report.correlation_bob_first.estimate - (-0.5)) < bound);
    CHECK(report.correlation_alice_first.exact == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("run_frame_ordering: equal settings anticorrelate in both orderings") {
    const FrameReport report = run_frame_ordering(kZ, kZ, options_with(20000));
    CHECK(report.alice_first.pp == 0);
    CHECK(report.alice_first.mm == 0);
    CHECK(report.bob_first.pp == 0);
    CHECK(report.bob_first.mm == 0);
    CHECK(report.correlation_alice_first.estimate == -1.0);
    CHECK(report.correlation_bob_first.estimate == -1.0);
    CHECK(report.cells_within_tolerance);
}

TEST_CASE("run_frame_ordering: rejects other model kinds") {
    CHECK_THROWS_AS(run_frame_ordering(ModelSpec::quantum(), kZ, kX,
                                       options_with(20000)),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        run_frame_ordering(ModelSpec::deterministic_sign(), kZ, kX,
                           options_with(20000)),
        std::invalid_argument);
}

TEST_CASE("run_nonsignaling_check: every model has a setting-free marginal") {
    const Direction a = Direction::planar(0.0);
    const Direction b1 = Direction::planar(kPi / 3.0);
    const Direction b2 = Direction::planar(2.0 * kPi / 3.0);
    for (const ModelSpec& spec :
         {ModelSpec::quantum(),
          ModelSpec::definite_aligned(kZ, Assignment::PlusMinus),
          ModelSpec::isotropic_opposite(), ModelSpec::nonlocal_aligning(),
          ModelSpec::deterministic_sign()}) {
        const NonsignalingReport report = run_nonsignaling_check(
            spec, a, b1, b2, Ordering::AliceFirst, options_with(100000));
        INFO("model=", model_name(spec.kind));
        REQUIRE(report.statistically_zero);
        REQUIRE(report.abs_difference < report.tolerance);
        REQUIRE(report.tolerance ==
                doctest::Approx(5.0 * std::sqrt(0.25 / 100000.0)).epsilon(1e-12));
    }
}

TEST_CASE("run_nonsignaling_check: local models are bitwise setting-free") {
    const Direction a = Direction::planar(kPi / 4.0);
    const Direction b1 = Direction::planar(kPi / 3.0);
    const Direction b2 = Direction::planar(2.0 * kPi / 3.0);
    for (const ModelSpec& spec :
         {ModelSpec::definite_aligned(kZ, Assignment::PlusMinus),
          ModelSpec::isotropic_opposite(), ModelSpec::deterministic_sign()}) {
        const NonsignalingReport report = run_nonsignaling_check(
            spec, a, b1, b2, Ordering::AliceFirst, options_with(50000));
        INFO("model=", model_name(spec.kind));
        REQUIRE(report.bitwise_identical);
        REQUIRE(report.abs_difference == 0.0);
    }
}

TEST_CASE("run_nonsignaling_check: nonlocal model, Alice measuring first") {
    // Alice measures before any remote influence exists, so her outcome
    // stream cannot depend on b even bitwise.
    const NonsignalingReport report = run_nonsignaling_check(
        ModelSpec::nonlocal_aligning(), Direction::planar(0.0),
        Direction::planar(kPi / 3.0), Direction::planar(2.0 * kPi / 3.0),
        Ordering::AliceFirst, options_with(50000));
    CHECK(report.bitwise_identical);
    CHECK(report.abs_difference == 0.0);
}

TEST_CASE("run_nonsignaling_check: nonlocal model, Bob measuring first") {
    // Hidden per-trial outcomes change with the remote setting, but the
    // marginal stays statistically flat: parameter independence survives.
    const NonsignalingReport report = run_nonsignaling_check(
        ModelSpec::nonlocal_aligning(), Direction::planar(0.0),
        Direction::planar(kPi / 3.0), Direction::planar(2.0 * kPi / 3.0),
        Ordering::BobFirst, options_with(100000));
    CHECK(report.statistically_zero);
    CHECK_FALSE(report.bitwise_identical);
}

TEST_CASE("run_superposition_contrast: mixture -1/2 against singlet 0") {
    const ContrastReport report = run_superposition_contrast(options_with(100000));
    CHECK(report.mixture.exact.has_value());
    CHECK(report.singlet.exact.has_value());
    CHECK(*report.mixture.exact == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(*report.singlet.exact == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(report.mixture.estimate - *report.mixture.exact) <
          5.0 * report.mixture.stderr_);
    CHECK(std::abs(report.singlet.estimate) < 4.0 / std::sqrt(100000.0));
}

TEST_CASE("run_superposition_contrast: equal settings split the two states") {
    // Along the hidden axis the mixture keeps up with the singlet...
    const ContrastReport on_axis =
        run_superposition_contrast(options_with(20000), kZ, kZ);
    CHECK(on_axis.mixture.estimate == -1.0);
    CHECK(*on_axis.mixture.exact == -1.0);
    CHECK(on_axis.singlet.estimate == -1.0);
    CHECK(*on_axis.singlet.exact == -1.0);

    // ...but at equal settings orthogonal to it, the entangled state keeps
    // perfect anticorrelation while the mixture decorrelates entirely.
    const ContrastReport off_axis =
        run_superposition_contrast(options_with(20000), kX, kX);
    CHECK(*off_axis.mixture.exact == 0.0);
    CHECK(*off_axis.singlet.exact == -1.0);
    CHECK(off_axis.singlet.estimate == -1.0);
    CHECK(std::abs(off_axis.mixture.estimate) < 5.0 * off_axis.mixture.stderr_);
}

TEST_CASE("reports are bitwise reproducible across thread counts") {
    RunOptions one = options_with(70000, 9);
    RunOptions four = one;
    four.threads = 4;

    const InequalityReport i1 = run_inequality(one, Assignment::PlusMinus);
    const InequalityReport i4 = run_inequality(four, Assignment::PlusMinus);
    CHECK(same_counts(i1.counts, i4.counts));
    CHECK(i1.local.estimate == i4.local.estimate);
    CHECK(i1.quantum.estimate == i4.quantum.estimate);
    CHECK(i1.p_value == i4.p_value);

    const FrameReport f1 = run_frame_ordering(kZ, Direction::planar(1.0), one);
    const FrameReport f4 = run_frame_ordering(kZ, Direction::planar(1.0), four);
    CHECK(same_counts(f1.alice_first, f4.alice_first));
    CHECK(same_counts(f1.bob_first, f4.bob_first));
    CHECK(f1.history_divergence == f4.history_divergence);

    const SweepReport s1 = run_correlation_sweep(ModelSpec::isotropic_opposite(),
                                                 {0.0, kPi / 2.0, kPi}, one);
    const SweepReport s4 = run_correlation_sweep(ModelSpec::isotropic_opposite(),
                                                 {0.0, kPi / 2.0, kPi}, four);
    for (std::size_t i = 0; i < s1.rows.size(); ++i) {
        CHECK(s1.rows[i].estimate.estimate == s4.rows[i].estimate.estimate);
    }
}

TEST_CASE("identical options give identical reports") {
    const RunOptions options = options_with(20000, 77);
    const InequalityReport a = run_inequality(options, Assignment::MinusPlus);
    const InequalityReport b = run_inequality(options, Assignment::MinusPlus);
    CHECK(same_counts(a.counts, b.counts));
    CHECK(a.p_value == b.p_value);
    CHECK(a.alice_flips == b.alice_flips);
    CHECK(a.bob_flips == b.bob_flips);
}
