#pragma once

#include <array>
#include <optional>

#include "romheading/quaternion.hpp"

namespace romheading {

/// Closed interval of a joint angle, radians. min == max encodes a fixed DOF.
struct AngleRange {
  double min = 0.0;
  double max = 0.0;

  double width() const noexcept { return max - min; }
  double center() const noexcept { return 0.5 * (min + max); }
};

/// Symmetric widening of every range during membership tests, radians in [0, 10 deg].
class RomMargin {
public:
  static constexpr double kDefaultSlack = deg2rad(2.0);
  static constexpr double kMaxSlack = deg2rad(10.0);

  RomMargin() = default;
  explicit RomMargin(double slack);
  static RomMargin none() { return RomMargin(0.0); }

  double slack() const noexcept { return slack_; }

private:
  double slack_ = kDefaultSlack;
};

enum class RomStatus : int { inside = 0, outside = 1 };

/// Rotational joint as three consecutive rotations about the joint axes,
/// each angle limited to a closed range. The set of relative orientations it
/// describes is the cuboid of those ranges in angle space.
///
/// Membership tests decompose a relative orientation with the joint's
/// intrinsic Euler convention, so they need the axes to be the coordinate
/// axes of a Tait-Bryan sequence. joint_forward works for any independent axes.
class JointModel {
public:
  /// Axes taken from the convention's coordinate axes. Throws InvalidInput
  /// for proper Euler sequences (repeated axis) or invalid ranges.
  JointModel(const EulerConvention& convention, const std::array<AngleRange, 3>& ranges);

  /// General axes. They must be unit and linearly independent; when they
  /// match the coordinate axes of a Tait-Bryan sequence that convention is
  /// recorded and membership tests become available.
  JointModel(const std::array<Vec3, 3>& axes, const std::array<AngleRange, 3>& ranges);

  /// z-x'-y'' joint with alpha in [-20, 20] deg, beta in [-15, 15] deg,
  /// gamma in [-40, 40] deg.
  static JointModel default_test_joint();

  const std::array<Vec3, 3>& axes() const noexcept { return axes_; }
  const std::array<AngleRange, 3>& ranges() const noexcept { return ranges_; }
  const std::optional<EulerConvention>& convention() const noexcept { return convention_; }

  /// Same model with every range widened by `amount` on both sides.
  JointModel widened(double amount) const;

private:
  std::array<Vec3, 3> axes_;
  std::array<AngleRange, 3> ranges_;
  std::optional<EulerConvention> convention_;
};

/// Q(a1, j1) * Q(a2, j2) * Q(a3, j3). The triplet's convention is ignored;
/// the model's axes are used.
Quaternion joint_forward(const JointModel& model, const EulerTriplet& angles);
Quaternion joint_forward(const JointModel& model, double a1, double a2, double a3);

/// Whether a relative orientation lies in the (slack-widened) model set.
/// Angles are compared on the circle, so a range is an arc. Throws
/// InvalidInput for models without an Euler convention.
RomStatus rom_check(const JointModel& model, const Quaternion& q_rel, RomMargin margin = {});

/// Largest per-angle exceedance beyond its range (no slack); 0 iff inside.
double rom_distance(const JointModel& model, const Quaternion& q_rel);

/// Membership tests without trigonometry, for hot loops. Agrees with
/// rom_check everywhere except within ~1e-12 rad of a range boundary.
class RomChecker {
public:
  RomChecker(const JointModel& model, RomMargin margin);

  bool inside(const Quaternion& q_rel) const noexcept;

private:
  struct Arc {
    bool full = false;
    bool wide = false;  // width > pi
    double cos_lo = 1.0, sin_lo = 0.0, cos_hi = 1.0, sin_hi = 0.0;
    bool contains(double c, double s) const noexcept;
  };

  JointModel model_;
  RomMargin margin_;
  int i_ = 0, j_ = 0, k_ = 0;
  double parity_ = 1.0;
  Arc first_, third_;
  bool middle_empty_ = false;
  double sin_middle_lo_ = -1.0, sin_middle_hi_ = 1.0;
};

}  // namespace romheading
