#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace eprsim {

/// Identifies one logical random stream: a master seed plus a
/// (experiment-label, trial-index) pair. Distinct specs map to
/// statistically independent streams; the mapping is pure.
struct StreamSpec {
    std::uint64_t master_seed = 0;
    std::string experiment_label;
    std::uint64_t trial_index = 0;
};

/// Counter-based uniform random stream (SplitMix64).
///
/// The state advances by the 64-bit golden-ratio increment and each output
/// is the standard SplitMix64 finalizer of the new state. The algorithm is
/// fixed here, not delegated to <random> distributions, so that every draw
/// is bit-identical across platforms and standard-library versions.
/// Copying a stream replays it from the copied position.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64();

    /// Uniform double in [0,1) with 53 random bits.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

  private:
    std::uint64_t state_;
};

/// Pure mapping StreamSpec -> stream. Same spec, same stream; streams for
/// distinct trial indices under the same label never share a key.
RandomStream derive_stream(const StreamSpec& spec);

/// Joint outcome counts for a pair experiment; indices are
/// (Alice, Bob) signs: pp = (+,+), pm = (+,-), mp = (-,+), mm = (-,-).
struct JointCounts {
    std::uint64_t pp = 0;
    std::uint64_t pm = 0;
    std::uint64_t mp = 0;
    std::uint64_t mm = 0;

    std::uint64_t total() const { return pp + pm + mp + mm; }
    JointCounts& operator+=(const JointCounts& o) {
        pp += o.pp;
        pm += o.pm;
        mp += o.mp;
        mm += o.mm;
        return *this;
    }
};

/// Product-mean correlation estimate with its binomial-derived standard
/// error sqrt((1 - estimate^2) / trials). `exact` carries the analytic
/// value when the model provides one.
struct CorrelationEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::optional<double> exact;
};

/// estimate = (pp - pm - mp + mm) / total. Throws on zero total.
CorrelationEstimate correlation_from_counts(const JointCounts& counts);

/// Two-sided normal p-value for `estimate` against `expected`.
/// Degenerate stderr (== 0) falls back to exact comparison: p = 1 if the
/// estimate equals the expected value, 0 otherwise.
double z_test(const CorrelationEstimate& estimate, double expected);

/// Wilson score interval for a binomial proportion.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence);

/// Standard normal CDF and its inverse (Acklam's rational approximation,
/// |relative error| < 1.2e-9).
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace eprsim
