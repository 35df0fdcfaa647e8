#pragma once

#include <cstdint>

#include "eprsim/stats.hpp"

namespace eprsim {

/// Unit vector on the sphere: a measurement axis or an intrinsic spin
/// orientation. The raw constructor rejects non-unit input (|x^2+y^2+z^2 - 1|
/// must be <= 1e-9); use `normalized` for explicit normalization.
class Direction {
  public:
    Direction(double x, double y, double z);

    /// Normalizes (x,y,z); rejects vectors too close to zero.
    static Direction normalized(double x, double y, double z);

    /// Polar angle from +z, azimuth from +x, both radians.
    static Direction polar(double polar_angle, double azimuth);

    /// Angle from the vertical (+z) axis, in the x-z plane.
    static Direction planar(double angle_from_vertical);

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    double dot(const Direction& other) const {
        return x_ * other.x_ + y_ * other.y_ + z_ * other.z_;
    }

    /// Exact component negation.
    Direction negated() const;
    Direction operator-() const { return negated(); }

    /// Component-wise equality (exact doubles, not a tolerance check).
    bool same_components(const Direction& other) const {
        return x_ == other.x_ && y_ == other.y_ && z_ == other.z_;
    }
    bool opposite_components(const Direction& other) const {
        return x_ == -other.x_ && y_ == -other.y_ && z_ == -other.z_;
    }

  private:
    struct Unchecked {};
    Direction(Unchecked, double x, double y, double z) : x_(x), y_(y), z_(z) {}

    double x_;
    double y_;
    double z_;
};

/// Uniform direction on the sphere via inverse CDF: z uniform in [-1,1],
/// azimuth uniform in [0,2pi). Consumes exactly two draws.
Direction random_unit_vector(RandomStream& rng);

/// Binary measurement result; Plus means deflection along the measurement
/// direction. Encoded +/-1 so a correlation is a plain product mean.
enum class Outcome : int { Plus = +1, Minus = -1 };

inline int sign(Outcome o) { return static_cast<int>(o); }
inline Outcome opposite(Outcome o) {
    return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus;
}

/// Definite pre-measurement spin orientations for a particle pair.
/// Anti-alignment is a model property, not enforced here.
struct SpinAssignment {
    Direction alice_spin;
    Direction bob_spin;
};

/// Joint probabilities over the four (Alice, Bob) outcome pairs.
struct JointDistribution {
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;

    double sum() const { return p_pp + p_pm + p_mp + p_mm; }
    double correlation() const { return p_pp - p_pm - p_mp + p_mm; }
};

/// Angle between two unit directions, in [0, pi]; symmetric.
double angle_between(const Direction& m, const Direction& n);

/// Probability that a measurement along n repeats the outcome of an
/// immediately preceding measurement along m: cos^2(angle/2), computed
/// through the half-angle identity (1 + m.n)/2.
double consecutive_same_probability(const Direction& m, const Direction& n);

struct SequentialResult {
    Outcome outcome;
    Direction post_spin;  // +measure on Plus, -measure on Minus
};

/// One projective measurement of a spin prepared along `spin`, measured
/// along `measure`. P(Plus) = cos^2(angle(spin, measure)/2); the returned
/// post-measurement spin is the collapsed +/-measure direction. Consumes
/// exactly one draw.
SequentialResult sequential_sample(const Direction& spin,
                                   const Direction& measure, RandomStream& rng);

/// Singlet-state joint distribution at settings (a, b):
/// p_pp = p_mm = sin^2(angle/2)/2, p_pm = p_mp = cos^2(angle/2)/2.
/// Marginals are unbiased and the implied correlation is -a.b.
JointDistribution singlet_joint_distribution(const Direction& a,
                                             const Direction& b);

/// Closed form -a.b.
double singlet_correlation_exact(const Direction& a, const Direction& b);

struct PairOutcomes {
    Outcome alice;
    Outcome bob;
};

/// Draws one outcome pair from singlet_joint_distribution(a, b).
/// Consumes exactly one draw.
PairOutcomes sample_singlet(const Direction& a, const Direction& b,
                            RandomStream& rng);

}  // namespace eprsim
