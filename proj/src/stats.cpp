#include "eprsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace eprsim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

std::uint64_t RandomStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

RandomStream derive_stream(const StreamSpec& spec) {
    // mix64 is bijective, so for a fixed (seed, label) the keys for
    // distinct trial indices are distinct, and streams with distinct keys
    // can never produce identical output sequences.
    std::uint64_t h = mix64(spec.master_seed ^ fnv1a64(spec.experiment_label));
    std::uint64_t key = mix64(h ^ (spec.trial_index + kGolden));
    return RandomStream(key);
}

CorrelationEstimate correlation_from_counts(const JointCounts& counts) {
    const std::uint64_t total = counts.total();
    if (total == 0) {
        throw std::invalid_argument("correlation_from_counts: zero total count");
    }
    const double agree = static_cast<double>(counts.pp + counts.mm);
    const double disagree = static_cast<double>(counts.pm + counts.mp);
    CorrelationEstimate est;
    est.trials = total;
    est.estimate = (agree - disagree) / static_cast<double>(total);
    est.stderr_ =
        std::sqrt(std::max(0.0, 1.0 - est.estimate * est.estimate) /
                  static_cast<double>(total));
    return est;
}

double z_test(const CorrelationEstimate& estimate, double expected) {
    if (estimate.stderr_ <= 0.0) {
        return estimate.estimate == expected ? 1.0 : 0.0;
    }
    const double z = (estimate.estimate - expected) / estimate.stderr_;
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence) {
    if (trials == 0) {
        throw std::invalid_argument("wilson_interval: zero trials");
    }
    if (successes > trials) {
        throw std::invalid_argument("wilson_interval: successes > trials");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("wilson_interval: confidence must be in (0,1)");
    }
    const double n = static_cast<double>(trials);
    const double p_hat = static_cast<double>(successes) / n;
    const double z = normal_quantile(0.5 + confidence / 2.0);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p_hat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
    Interval interval{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    // At the boundary counts the score interval's endpoint is analytically
    // exact; pin it rather than leave rounding residue.
    if (successes == 0) interval.lo = 0.0;
    if (successes == trials) interval.hi = 1.0;
    return interval;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    }
    // Acklam's rational approximation with one Halley refinement step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

}  // namespace eprsim
