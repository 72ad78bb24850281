#include "romheading/joint_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "romheading/error.hpp"

namespace romheading {

namespace {

// Boundary tolerance for membership, absorbs round-off of the decomposition.
constexpr double kBoundaryEps = 1e-12;

void validate_ranges(const std::array<AngleRange, 3>& ranges) {
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& r = ranges[p];
    if (!std::isfinite(r.min) || !std::isfinite(r.max)) {
      throw InvalidInput("joint range " + std::to_string(p + 1) + " is not finite");
    }
    if (r.min > r.max) {
      throw InvalidInput("joint range " + std::to_string(p + 1) + " has min > max");
    }
    if (r.min < -kPi - 1e-12 || r.max > kPi + 1e-12) {
      throw InvalidInput("joint range " + std::to_string(p + 1) + " must lie within [-180, 180] deg");
    }
  }
}

// Distance from the arc [lo, hi] to angle a along the circle; 0 when inside.
double arc_exceedance(double a, double lo, double hi) {
  const double width = hi - lo;
  if (width >= kTwoPi) return 0.0;
  if (wrap_two_pi(a - lo) <= width) return 0.0;
  return std::min(wrap_two_pi(lo - a), wrap_two_pi(a - hi));
}

int axis_index(const Vec3& v) {
  for (int a = 0; a < 3; ++a) {
    if ((v - unit_axis(static_cast<Axis>(a))).norm() < 1e-12) return a;
  }
  return -1;
}

// Rotation matrix entry (r, c) of a unit quaternion.
inline double entry(const Quaternion& q, int r, int c) noexcept {
  const double v[3] = {q.x, q.y, q.z};
  if (r == c) return 2.0 * (q.w * q.w + v[r] * v[r]) - 1.0;
  const int m = 3 - r - c;
  const double sign = ((c - r + 3) % 3) == 1 ? -1.0 : 1.0;
  return 2.0 * (v[r] * v[c] + sign * q.w * v[m]);
}

}  // namespace

RomMargin::RomMargin(double slack) : slack_(slack) {
  if (!(slack >= 0.0) || slack > kMaxSlack + 1e-15) {
    throw InvalidInput("ROM slack must lie in [0, 10] deg");
  }
}

JointModel::JointModel(const EulerConvention& convention, const std::array<AngleRange, 3>& ranges)
    : ranges_(ranges), convention_(convention) {
  if (!convention.is_tait_bryan()) {
    throw InvalidInput("joint convention " + convention.to_string() +
                       " repeats an axis; joint axes must be linearly independent");
  }
  validate_ranges(ranges);
  for (std::size_t p = 0; p < 3; ++p) axes_[p] = unit_axis(convention[p]);
}

JointModel::JointModel(const std::array<Vec3, 3>& axes, const std::array<AngleRange, 3>& ranges)
    : axes_(axes), ranges_(ranges) {
  validate_ranges(ranges);
  Mat3 m;
  for (int p = 0; p < 3; ++p) {
    if (std::abs(axes[p].norm() - 1.0) > 1e-9) {
      throw InvalidInput("joint axis " + std::to_string(p + 1) + " is not a unit vector");
    }
    m.col(p) = axes[p];
  }
  if (std::abs(m.determinant()) < 1e-6) throw InvalidInput("joint axes are linearly dependent");

  const int a = axis_index(axes[0]), b = axis_index(axes[1]), c = axis_index(axes[2]);
  if (a >= 0 && b >= 0 && c >= 0) {
    convention_ = EulerConvention(static_cast<Axis>(a), static_cast<Axis>(b), static_cast<Axis>(c));
  }
}

JointModel JointModel::default_test_joint() {
  return JointModel(EulerConvention(Axis::Z, Axis::X, Axis::Y),
                    {AngleRange{deg2rad(-20.0), deg2rad(20.0)}, AngleRange{deg2rad(-15.0), deg2rad(15.0)},
                     AngleRange{deg2rad(-40.0), deg2rad(40.0)}});
}

JointModel JointModel::widened(double amount) const {
  JointModel copy = *this;
  for (auto& r : copy.ranges_) {
    r.min -= amount;
    r.max += amount;
  }
  return copy;
}

Quaternion joint_forward(const JointModel& model, double a1, double a2, double a3) {
  const auto& ax = model.axes();
  return from_axis_angle(ax[0], a1) * from_axis_angle(ax[1], a2) * from_axis_angle(ax[2], a3);
}

Quaternion joint_forward(const JointModel& model, const EulerTriplet& angles) {
  return joint_forward(model, angles.alpha, angles.beta, angles.gamma);
}

namespace {

const EulerConvention& require_convention(const JointModel& model) {
  if (!model.convention()) {
    throw InvalidInput("membership tests need joint axes matching an intrinsic Euler convention");
  }
  return *model.convention();
}

}  // namespace

RomStatus rom_check(const JointModel& model, const Quaternion& q_rel, RomMargin margin) {
  const EulerTriplet e = euler_decompose(q_rel, require_convention(model));
  const double s = margin.slack();
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& r = model.ranges()[p];
    if (arc_exceedance(e[p], r.min - s, r.max + s) > kBoundaryEps) return RomStatus::outside;
  }
  return RomStatus::inside;
}

double rom_distance(const JointModel& model, const Quaternion& q_rel) {
  const EulerTriplet e = euler_decompose(q_rel, require_convention(model));
  double worst = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& r = model.ranges()[p];
    worst = std::max(worst, arc_exceedance(e[p], r.min, r.max));
  }
  return worst;
}

bool RomChecker::Arc::contains(double c, double s) const noexcept {
  if (full) return true;
  // cross(u, v) = u.c * v.s - u.s * v.c
  const double from_lo = cos_lo * s - sin_lo * c;
  const double to_hi = c * sin_hi - s * cos_hi;
  if (!wide) return from_lo >= -kBoundaryEps && to_hi >= -kBoundaryEps;
  // Complement arc (hi, lo + 2pi) is narrower than pi.
  const double from_hi = cos_hi * s - sin_hi * c;
  const double to_lo = c * sin_lo - s * cos_lo;
  return !(from_hi > kBoundaryEps && to_lo > kBoundaryEps);
}

RomChecker::RomChecker(const JointModel& model, RomMargin margin) : model_(model), margin_(margin) {
  const EulerConvention& conv = require_convention(model);
  i_ = static_cast<int>(conv[0]);
  j_ = static_cast<int>(conv[1]);
  k_ = static_cast<int>(conv[2]);
  parity_ = ((j_ - i_ + 3) % 3) == 1 ? 1.0 : -1.0;

  const double s = margin.slack();
  auto make_arc = [&](const AngleRange& r) {
    Arc arc;
    const double lo = r.min - s, hi = r.max + s;
    arc.full = hi - lo >= kTwoPi;
    arc.wide = hi - lo > kPi;
    arc.cos_lo = std::cos(lo);
    arc.sin_lo = std::sin(lo);
    arc.cos_hi = std::cos(hi);
    arc.sin_hi = std::sin(hi);
    return arc;
  };
  first_ = make_arc(model.ranges()[0]);
  third_ = make_arc(model.ranges()[2]);

  const double lo = std::max(model.ranges()[1].min - s, -0.5 * kPi);
  const double hi = std::min(model.ranges()[1].max + s, 0.5 * kPi);
  middle_empty_ = lo > hi;
  sin_middle_lo_ = std::sin(lo);
  sin_middle_hi_ = std::sin(hi);
}

bool RomChecker::inside(const Quaternion& q) const noexcept {
  const double r_ii = entry(q, i_, i_);
  const double r_ij = entry(q, i_, j_);
  const double cb2 = r_ii * r_ii + r_ij * r_ij;
  if (cb2 < kGimbalThreshold * kGimbalThreshold) {
    return rom_check(model_, q, margin_) == RomStatus::inside;
  }
  const double sin_beta = parity_ * entry(q, i_, k_);
  if (middle_empty_ || sin_beta < sin_middle_lo_ - kBoundaryEps || sin_beta > sin_middle_hi_ + kBoundaryEps) {
    return false;
  }
  // gamma = atan2(-p r_ij, r_ii), alpha = atan2(-p r_jk, r_kk), both scaled by cos(beta) > 0.
  if (!third_.contains(r_ii, -parity_ * r_ij)) return false;
  return first_.contains(entry(q, k_, k_), -parity_ * entry(q, j_, k_));
}

}  // namespace romheading
