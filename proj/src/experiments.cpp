#include "eprsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace eprsim {

namespace {

constexpr std::uint64_t kChunkTrials = 1u << 16;
constexpr double kExclusionPValue = 1e-6;
constexpr std::uint64_t kTrialFloor = 10000;

// Splits [0, trials) into fixed-size chunks, accumulates one Acc per chunk
// on a worker pool, then merges in ascending chunk order. Chunk boundaries
// and merge order are independent of the thread count, so floating-point
// accumulators reduce identically for any parallelism.
template <typename Acc, typename PerTrial>
Acc reduce_trials(std::uint64_t trials, unsigned threads, PerTrial per_trial) {
    const std::uint64_t chunk_count = (trials + kChunkTrials - 1) / kChunkTrials;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, chunk_count)));

    std::vector<Acc> partial(chunk_count);
    std::atomic<std::uint64_t> next_chunk{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next_chunk.fetch_add(1);
            if (c >= chunk_count) return;
            const std::uint64_t begin = c * kChunkTrials;
            const std::uint64_t end = std::min(trials, begin + kChunkTrials);
            Acc acc{};
            for (std::uint64_t i = begin; i < end; ++i) per_trial(acc, i);
            partial[c] = acc;
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    Acc total{};
    for (const Acc& acc : partial) total.merge(acc);
    return total;
}

void require_trials(const RunOptions& options) {
    if (options.trials == 0) {
        throw std::invalid_argument("trials must be positive");
    }
    if (!options.allow_small && options.trials < kTrialFloor) {
        throw std::invalid_argument("insufficient trials (minimum 10000)");
    }
}

struct CountAcc {
    JointCounts counts;
    void merge(const CountAcc& o) { counts += o.counts; }
};

void tally(JointCounts& counts, PairOutcomes outcomes) {
    if (outcomes.alice == Outcome::Plus) {
        if (outcomes.bob == Outcome::Plus) {
            ++counts.pp;
        } else {
            ++counts.pm;
        }
    } else {
        if (outcomes.bob == Outcome::Plus) {
            ++counts.mp;
        } else {
            ++counts.mm;
        }
    }
}

JointCounts run_model_trials(const ModelSpec& spec, const Direction& a,
                             const Direction& b, const RunOptions& options,
                             const std::string& label) {
    const CountAcc acc = reduce_trials<CountAcc>(
        options.trials, options.threads, [&](CountAcc& out, std::uint64_t i) {
            RandomStream rng = derive_stream({options.seed, label, i});
            HiddenState state = prepare(spec, rng);
            tally(out.counts,
                  measure_pair(spec, state, a, b, Ordering::AliceFirst, rng));
        });
    return acc.counts;
}

const Direction& alice_premeasure_spin(const HiddenState& state) {
    for (const HistorySnapshot& snap : state.history) {
        if (snap.event == HistoryEvent::AlicePremeasure) return snap.spin;
    }
    throw std::logic_error("no Alice premeasure snapshot recorded");
}

double cell_probability(const JointDistribution& joint, int cell) {
    switch (cell) {
        case 0: return joint.p_pp;
        case 1: return joint.p_pm;
        case 2: return joint.p_mp;
        default: return joint.p_mm;
    }
}

std::uint64_t cell_count(const JointCounts& counts, int cell) {
    switch (cell) {
        case 0: return counts.pp;
        case 1: return counts.pm;
        case 2: return counts.mp;
        default: return counts.mm;
    }
}

}  // namespace

Direction inequality_setting_a() {
    return Direction::planar(std::numbers::pi / 4.0);
}

Direction inequality_setting_b() {
    return Direction::planar(-std::numbers::pi / 4.0);
}

InequalityReport run_inequality(const RunOptions& options, Assignment assignment) {
    return run_inequality(options, assignment, inequality_setting_a(),
                          inequality_setting_b());
}

InequalityReport run_inequality(const RunOptions& options, Assignment assignment,
                                const Direction& a, const Direction& b) {
    require_trials(options);
    const ModelSpec local_spec =
        ModelSpec::definite_aligned(Direction(0.0, 0.0, 1.0), assignment);
    const int alice_predetermined = assignment == Assignment::PlusMinus ? +1 : -1;
    const int bob_predetermined = -alice_predetermined;

    struct Acc {
        JointCounts counts;
        std::uint64_t alice_flips = 0;
        std::uint64_t bob_flips = 0;
        void merge(const Acc& o) {
            counts += o.counts;
            alice_flips += o.alice_flips;
            bob_flips += o.bob_flips;
        }
    };
    const Acc local = reduce_trials<Acc>(
        options.trials, options.threads, [&](Acc& out, std::uint64_t i) {
            RandomStream rng = derive_stream({options.seed, "inequality/local", i});
            HiddenState state = prepare(local_spec, rng);
            const PairOutcomes outcomes =
                measure_pair(local_spec, state, a, b, Ordering::AliceFirst, rng);
            tally(out.counts, outcomes);
            if (sign(outcomes.alice) != alice_predetermined) ++out.alice_flips;
            if (sign(outcomes.bob) != bob_predetermined) ++out.bob_flips;
        });

    const JointCounts quantum_counts = run_model_trials(
        ModelSpec::quantum(), a, b, options, "inequality/quantum");

    InequalityReport report;
    report.trials = options.trials;
    report.counts = local.counts;
    report.alice_plus = local.counts.pp + local.counts.pm;
    report.alice_minus = local.counts.mp + local.counts.mm;
    report.q_plus_minus = local.counts.pm;
    report.q_symmetric =
        static_cast<double>(local.counts.pm + local.counts.mp) / 2.0;
    report.q_fraction = report.q_symmetric / static_cast<double>(options.trials);
    report.required_q_fraction = 0.25;
    report.paper_bound = std::pow(std::sin(std::numbers::pi / 8.0), 2);
    report.alice_flips = local.alice_flips;
    report.bob_flips = local.bob_flips;
    report.alice_flip_rate =
        static_cast<double>(local.alice_flips) / static_cast<double>(options.trials);
    report.bob_flip_rate =
        static_cast<double>(local.bob_flips) / static_cast<double>(options.trials);

    report.sum_of_products =
        static_cast<long long>(local.counts.pp + local.counts.mm) -
        static_cast<long long>(local.counts.pm + local.counts.mp);
    // P + N - 4Q with the symmetric Q; 4*Q_sym = 2*(n_pm + n_mp) is integral.
    report.identity_value =
        static_cast<long long>(report.alice_plus + report.alice_minus) -
        2 * static_cast<long long>(local.counts.pm + local.counts.mp);
    report.identity_holds = report.sum_of_products == report.identity_value;

    report.local = correlation_from_counts(local.counts);
    report.local_model_exact = exact_correlation(local_spec, a, b);
    report.local.exact = report.local_model_exact;
    report.quantum = correlation_from_counts(quantum_counts);
    report.quantum_expected = singlet_correlation_exact(a, b);
    report.quantum.exact = report.quantum_expected;

    report.z_score = report.local.stderr_ > 0.0
                         ? (report.local.estimate - report.quantum_expected) /
                               report.local.stderr_
                         : 0.0;
    report.p_value = z_test(report.local, report.quantum_expected);
    report.local_model_excluded = report.p_value < kExclusionPValue;
    return report;
}

SweepReport run_correlation_sweep(const ModelSpec& spec,
                                  const std::vector<double>& angle_grid,
                                  const RunOptions& options) {
    require_trials(options);
    if (angle_grid.empty()) {
        throw std::invalid_argument("run_correlation_sweep: empty angle grid");
    }
    for (std::size_t i = 0; i < angle_grid.size(); ++i) {
        if (angle_grid[i] < 0.0 || angle_grid[i] > std::numbers::pi + 1e-12) {
            throw std::invalid_argument(
                "run_correlation_sweep: angles must lie in [0, pi]");
        }
        if (i > 0 && !(angle_grid[i] > angle_grid[i - 1])) {
            throw std::invalid_argument(
                "run_correlation_sweep: angles must be strictly increasing");
        }
    }

    SweepReport report;
    report.model = spec.kind;
    report.trials_per_point = options.trials;
    report.rows.reserve(angle_grid.size());
    const Direction a = Direction::planar(0.0);
    for (std::size_t point = 0; point < angle_grid.size(); ++point) {
        const Direction b = Direction::planar(angle_grid[point]);
        const CountAcc acc = reduce_trials<CountAcc>(
            options.trials, options.threads, [&](CountAcc& out, std::uint64_t i) {
                RandomStream rng = derive_stream(
                    {options.seed, "sweep", point * options.trials + i});
                HiddenState state = prepare(spec, rng);
                tally(out.counts,
                      measure_pair(spec, state, a, b, Ordering::AliceFirst, rng));
            });
        SweepRow row;
        row.angle = angle_grid[point];
        row.estimate = correlation_from_counts(acc.counts);
        row.model_exact = exact_correlation(spec, a, b);
        row.estimate.exact = row.model_exact;
        row.quantum_exact = singlet_correlation_exact(a, b);
        report.rows.push_back(row);
    }
    return report;
}

double kink_slope(const ModelSpec& spec, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 0.1)) {
        throw std::invalid_argument("kink_slope: epsilon must be in (0, 0.1]");
    }
    const Direction a = Direction::planar(0.0);
    const double at_zero = exact_correlation(spec, a, a);
    const double at_eps = exact_correlation(spec, a, Direction::planar(epsilon));
    return (at_eps - at_zero) / epsilon;
}

FrameReport run_frame_ordering(const Direction& a, const Direction& b,
                               const RunOptions& options) {
    return run_frame_ordering(ModelSpec::nonlocal_aligning(), a, b, options);
}

FrameReport run_frame_ordering(const ModelSpec& spec, const Direction& a,
                               const Direction& b, const RunOptions& options) {
    if (spec.kind != ModelKind::NonlocalAligning) {
        throw std::invalid_argument(
            "run_frame_ordering: requires the nonlocal aligning model");
    }
    require_trials(options);

    struct Acc {
        JointCounts alice_first;
        JointCounts bob_first;
        double divergence_sum = 0.0;
        void merge(const Acc& o) {
            alice_first += o.alice_first;
            bob_first += o.bob_first;
            divergence_sum += o.divergence_sum;
        }
    };
    const Acc acc = reduce_trials<Acc>(
        options.trials, options.threads, [&](Acc& out, std::uint64_t i) {
            const RandomStream base = derive_stream({options.seed, "frame", i});
            RandomStream prep_rng = base;
            const HiddenState prepared = prepare(spec, prep_rng);

            // Both orderings replay the identical prepared state and the
            // identical stream position.
            RandomStream rng_af = prep_rng;
            HiddenState state_af = prepared;
            tally(out.alice_first, measure_pair(spec, state_af, a, b,
                                                Ordering::AliceFirst, rng_af));

            RandomStream rng_bf = prep_rng;
            HiddenState state_bf = prepared;
            tally(out.bob_first, measure_pair(spec, state_bf, a, b,
                                              Ordering::BobFirst, rng_bf));

            out.divergence_sum += angle_between(alice_premeasure_spin(state_af),
                                                alice_premeasure_spin(state_bf));
        });

    FrameReport report;
    report.trials = options.trials;
    report.alice_first = acc.alice_first;
    report.bob_first = acc.bob_first;
    report.history_divergence =
        acc.divergence_sum / static_cast<double>(options.trials);
    report.correlation_alice_first = correlation_from_counts(acc.alice_first);
    report.correlation_bob_first = correlation_from_counts(acc.bob_first);
    const double exact = exact_correlation(spec, a, b);
    report.correlation_alice_first.exact = exact;
    report.correlation_bob_first.exact = exact;

    // Tolerance per cell from the exact singlet probabilities the model
    // reproduces; report the worst cell.
    const JointDistribution joint = singlet_joint_distribution(a, b);
    const double n = static_cast<double>(options.trials);
    report.cells_within_tolerance = true;
    for (int cell = 0; cell < 4; ++cell) {
        const double dev =
            std::abs(static_cast<double>(cell_count(acc.alice_first, cell)) -
                     static_cast<double>(cell_count(acc.bob_first, cell))) /
            n;
        const double p = cell_probability(joint, cell);
        const double tol = 5.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
        if (dev > report.max_cell_deviation) {
            report.max_cell_deviation = dev;
            report.cell_tolerance = tol;
        }
        if (dev >= tol && p > 0.0) report.cells_within_tolerance = false;
        if (p == 0.0 && dev > 0.0) report.cells_within_tolerance = false;
    }
    return report;
}

NonsignalingReport run_nonsignaling_check(const ModelSpec& spec,
                                          const Direction& a,
                                          const Direction& b1,
                                          const Direction& b2,
                                          Ordering ordering,
                                          const RunOptions& options) {
    require_trials(options);
    struct Acc {
        std::uint64_t plus_b1 = 0;
        std::uint64_t plus_b2 = 0;
        std::uint64_t mismatches = 0;
        void merge(const Acc& o) {
            plus_b1 += o.plus_b1;
            plus_b2 += o.plus_b2;
            mismatches += o.mismatches;
        }
    };
    const Acc acc = reduce_trials<Acc>(
        options.trials, options.threads, [&](Acc& out, std::uint64_t i) {
            const RandomStream base = derive_stream({options.seed, "nonsignal", i});
            RandomStream prep_rng = base;
            const HiddenState prepared = prepare(spec, prep_rng);

            RandomStream rng1 = prep_rng;
            HiddenState state1 = prepared;
            const PairOutcomes o1 = measure_pair(spec, state1, a, b1, ordering, rng1);

            RandomStream rng2 = prep_rng;
            HiddenState state2 = prepared;
            const PairOutcomes o2 = measure_pair(spec, state2, a, b2, ordering, rng2);

            if (o1.alice == Outcome::Plus) ++out.plus_b1;
            if (o2.alice == Outcome::Plus) ++out.plus_b2;
            if (o1.alice != o2.alice) ++out.mismatches;
        });

    NonsignalingReport report;
    report.model = spec.kind;
    report.ordering = ordering;
    report.trials = options.trials;
    const double n = static_cast<double>(options.trials);
    report.alice_plus_rate_b1 = static_cast<double>(acc.plus_b1) / n;
    report.alice_plus_rate_b2 = static_cast<double>(acc.plus_b2) / n;
    report.abs_difference =
        std::abs(report.alice_plus_rate_b1 - report.alice_plus_rate_b2);
    report.tolerance = 5.0 * std::sqrt(0.25 / n);
    report.statistically_zero = report.abs_difference < report.tolerance;
    report.bitwise_identical = acc.mismatches == 0;
    return report;
}

ContrastReport run_superposition_contrast(const RunOptions& options) {
    return run_superposition_contrast(options, inequality_setting_a(),
                                      inequality_setting_b());
}

ContrastReport run_superposition_contrast(const RunOptions& options,
                                          const Direction& a,
                                          const Direction& b) {
    require_trials(options);
    const Direction axis(0.0, 0.0, 1.0);
    const ModelSpec plus_minus =
        ModelSpec::definite_aligned(axis, Assignment::PlusMinus);
    const ModelSpec minus_plus =
        ModelSpec::definite_aligned(axis, Assignment::MinusPlus);

    const CountAcc mixture = reduce_trials<CountAcc>(
        options.trials, options.threads, [&](CountAcc& out, std::uint64_t i) {
            RandomStream rng = derive_stream({options.seed, "contrast/mixture", i});
            const ModelSpec& branch =
                rng.uniform() < 0.5 ? plus_minus : minus_plus;
            HiddenState state = prepare(branch, rng);
            tally(out.counts,
                  measure_pair(branch, state, a, b, Ordering::AliceFirst, rng));
        });
    const JointCounts singlet = run_model_trials(ModelSpec::quantum(), a, b,
                                                 options, "contrast/singlet");

    ContrastReport report;
    report.trials = options.trials;
    report.mixture = correlation_from_counts(mixture.counts);
    // Both assignment branches share the same closed form.
    report.mixture.exact = (exact_correlation(plus_minus, a, b) +
                            exact_correlation(minus_plus, a, b)) /
                           2.0;
    report.singlet = correlation_from_counts(singlet);
    report.singlet.exact = singlet_correlation_exact(a, b);
    return report;
}

}  // namespace eprsim
