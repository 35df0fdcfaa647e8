#pragma once

#include <cstdint>
#include <vector>

#include "eprsim/models.hpp"
#include "eprsim/spin_core.hpp"
#include "eprsim/stats.hpp"

namespace eprsim {

/// Shared execution knobs. threads == 0 selects the hardware count.
/// Trials are split into fixed-size chunks with per-trial derived streams
/// and merged in chunk order, so results are byte-identical for any thread
/// count.
struct RunOptions {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool allow_small = false;  // lift the 10^4 trial floor (tests only)
};

/// The orthogonal-45-degree inequality experiment: the local
/// definite-aligned model against the quantum zero-correlation requirement.
///
/// Counting conventions: alice_plus (P) and alice_minus (N) partition the
/// trials by Alice's outcome; q_plus_minus is the raw (+,-) count; the
/// identity "sum of products = P + N - 4Q" is evaluated under the symmetric
/// reading Q = (n_pm + n_mp)/2, with all four raw joint counts kept for
/// audit. Q must reach a 25% rate for zero correlation, while the
/// consecutive-measurement law caps station-level flips at sin^2(pi/8).
struct InequalityReport {
    std::uint64_t trials = 0;
    JointCounts counts;
    std::uint64_t alice_plus = 0;     // P
    std::uint64_t alice_minus = 0;    // N
    std::uint64_t q_plus_minus = 0;   // raw (+,-) count
    double q_symmetric = 0.0;         // (n_pm + n_mp)/2
    double q_fraction = 0.0;          // q_symmetric / trials
    double required_q_fraction = 0.0; // 0.25 for zero correlation
    double paper_bound = 0.0;         // sin^2(pi/8)
    std::uint64_t alice_flips = 0;    // outcomes differing from the
    std::uint64_t bob_flips = 0;      // predetermined station value
    double alice_flip_rate = 0.0;
    double bob_flip_rate = 0.0;
    long long sum_of_products = 0;
    long long identity_value = 0;  // P + N - 4*Q_symmetric
    bool identity_holds = false;
    CorrelationEstimate local;    // exact: model closed form (-1/2)
    CorrelationEstimate quantum;  // exact: 0 at orthogonal settings
    double local_model_exact = 0.0;
    double quantum_expected = 0.0;
    double z_score = 0.0;  // local estimate against quantum_expected
    double p_value = 0.0;
    bool local_model_excluded = false;  // p_value < 1e-6
};

struct SweepRow {
    double angle = 0.0;  // radians between the planar settings
    CorrelationEstimate estimate;
    double model_exact = 0.0;
    double quantum_exact = 0.0;  // -cos(angle)
};

struct SweepReport {
    ModelKind model = ModelKind::Quantum;
    std::uint64_t trials_per_point = 0;
    std::vector<SweepRow> rows;
};

/// Frame-ordering comparison for the non-local aligning model: the same
/// prepared pairs and the same streams measured under both orderings.
/// Observable joint distributions must agree; the hidden history of
/// Alice's pre-measurement spin does not.
struct FrameReport {
    std::uint64_t trials = 0;
    JointCounts alice_first;
    JointCounts bob_first;
    double max_cell_deviation = 0.0;  // max |p_af - p_bf| over the 4 cells
    double cell_tolerance = 0.0;      // 5*sqrt(p(1-p)/N) at the worst cell
    bool cells_within_tolerance = false;
    double history_divergence = 0.0;  // mean angle between Alice's
                                      // pre-measurement spins, radians
    CorrelationEstimate correlation_alice_first;
    CorrelationEstimate correlation_bob_first;
};

/// Parameter-independence check: Alice's marginal under two remote
/// settings, replayed with identical streams and preparations.
struct NonsignalingReport {
    ModelKind model = ModelKind::Quantum;
    Ordering ordering = Ordering::AliceFirst;
    std::uint64_t trials = 0;
    double alice_plus_rate_b1 = 0.0;
    double alice_plus_rate_b2 = 0.0;
    double abs_difference = 0.0;
    double tolerance = 0.0;  // 5*sqrt(0.25/N)
    bool statistically_zero = false;
    bool bitwise_identical = false;  // every trial's Alice outcome matched
};

/// Singlet versus the 50/50 classical mixture of the two definite
/// assignments, at the same settings.
struct ContrastReport {
    std::uint64_t trials = 0;
    CorrelationEstimate mixture;  // exact: -(a.z)(b.z) for axis z
    CorrelationEstimate singlet;  // exact: -a.b
};

Direction inequality_setting_a();  // planar +45 degrees
Direction inequality_setting_b();  // planar -45 degrees

InequalityReport run_inequality(const RunOptions& options, Assignment assignment);
InequalityReport run_inequality(const RunOptions& options, Assignment assignment,
                                const Direction& a, const Direction& b);

/// Monte-Carlo correlation against the closed forms over a strictly
/// increasing planar angle grid in [0, pi] radians.
SweepReport run_correlation_sweep(const ModelSpec& spec,
                                  const std::vector<double>& angle_grid,
                                  const RunOptions& options);

/// Forward-difference slope of the correlation magnitude at aligned
/// settings: (E(epsilon) - E(0)) / epsilon with E from exact_correlation.
/// Requires 0 < epsilon <= 0.1 rad.
double kink_slope(const ModelSpec& spec, double epsilon);

/// NonlocalAligning only; throws for any other model kind.
FrameReport run_frame_ordering(const ModelSpec& spec, const Direction& a,
                               const Direction& b, const RunOptions& options);
FrameReport run_frame_ordering(const Direction& a, const Direction& b,
                               const RunOptions& options);

NonsignalingReport run_nonsignaling_check(const ModelSpec& spec,
                                          const Direction& a,
                                          const Direction& b1,
                                          const Direction& b2,
                                          Ordering ordering,
                                          const RunOptions& options);

ContrastReport run_superposition_contrast(const RunOptions& options);
ContrastReport run_superposition_contrast(const RunOptions& options,
                                          const Direction& a,
                                          const Direction& b);

}  // namespace eprsim
