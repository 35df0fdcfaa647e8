#include "eprsim/spin_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eprsim {

namespace {

constexpr double kUnitNormTolerance = 1e-9;

// Dot product clamped to [-1, 1], with exact +/-1 for component-wise
// identical or negated inputs so that certainties stay certainties.
double unit_dot(const Direction& m, const Direction& n) {
    if (m.same_components(n)) return 1.0;
    if (m.opposite_components(n)) return -1.0;
    const double d = m.dot(n);
    if (d > 1.0) return 1.0;
    if (d < -1.0) return -1.0;
    return d;
}

}  // namespace

Direction::Direction(double x, double y, double z) : x_(x), y_(y), z_(z) {
    const double norm2 = x * x + y * y + z * z;
    if (!(std::abs(norm2 - 1.0) <= kUnitNormTolerance)) {
        throw std::invalid_argument(
            "Direction: components are not unit-norm; use Direction::normalized");
    }
}

Direction Direction::normalized(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("Direction::normalized: zero or non-finite vector");
    }
    return Direction(Unchecked{}, x / norm, y / norm, z / norm);
}

Direction Direction::polar(double polar_angle, double azimuth) {
    const double s = std::sin(polar_angle);
    return Direction(Unchecked{}, s * std::cos(azimuth), s * std::sin(azimuth),
                     std::cos(polar_angle));
}

Direction Direction::planar(double angle_from_vertical) {
    return Direction(Unchecked{}, std::sin(angle_from_vertical), 0.0,
                     std::cos(angle_from_vertical));
}

Direction Direction::negated() const {
    return Direction(Unchecked{}, -x_, -y_, -z_);
}

Direction random_unit_vector(RandomStream& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Direction(r * std::cos(azimuth), r * std::sin(azimuth), z);
}

double angle_between(const Direction& m, const Direction& n) {
    const double d = unit_dot(m, n);
    if (d == 1.0) return 0.0;
    if (d == -1.0) return std::numbers::pi;
    // atan2 of |m x n| against m.n stays accurate near 0 and pi.
    const double cx = m.y() * n.z() - m.z() * n.y();
    const double cy = m.z() * n.x() - m.x() * n.z();
    const double cz = m.x() * n.y() - m.y() * n.x();
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
    return std::atan2(cross, d);
}

double consecutive_same_probability(const Direction& m, const Direction& n) {
    return (1.0 + unit_dot(m, n)) / 2.0;
}

SequentialResult sequential_sample(const Direction& spin,
                                   const Direction& measure, RandomStream& rng) {
    const double p_plus = consecutive_same_probability(spin, measure);
    const bool plus = rng.uniform() < p_plus;
    return {plus ? Outcome::Plus : Outcome::Minus,
            plus ? measure : measure.negated()};
}

JointDistribution singlet_joint_distribution(const Direction& a,
                                             const Direction& b) {
    const double c = consecutive_same_probability(a, b);  // cos^2(angle/2)
    JointDistribution joint;
    joint.p_pp = (1.0 - c) / 2.0;
    joint.p_mm = joint.p_pp;
    joint.p_pm = c / 2.0;
    joint.p_mp = joint.p_pm;
    return joint;
}

double singlet_correlation_exact(const Direction& a, const Direction& b) {
    return -unit_dot(a, b);
}

PairOutcomes sample_singlet(const Direction& a, const Direction& b,
                            RandomStream& rng) {
    const JointDistribution joint = singlet_joint_distribution(a, b);
    const double u = rng.uniform();
    if (u < joint.p_pp) return {Outcome::Plus, Outcome::Plus};
    if (u < joint.p_pp + joint.p_pm) return {Outcome::Plus, Outcome::Minus};
    if (u < joint.p_pp + joint.p_pm + joint.p_mp) {
        return {Outcome::Minus, Outcome::Plus};
    }
    return {Outcome::Minus, Outcome::Minus};
}

}  // namespace eprsim
