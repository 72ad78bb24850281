#pragma once

#include <array>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace romheading {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) noexcept { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) noexcept { return rad * (180.0 / kPi); }

/// Wraps an angle to (-pi, pi].
double wrap_pi(double angle) noexcept;
/// Wraps an angle to [0, 2pi).
double wrap_two_pi(double angle) noexcept;
/// Shortest angular distance between two angles, in [0, pi].
double angular_distance(double a, double b) noexcept;

/// Unit quaternion, scalar first. Serialized everywhere as (w, x, y, z).
///
/// Orientation quaternions map body coordinates into the reference frame:
/// v_ref = q * (0, v_body) * q^-1.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr Quaternion identity() noexcept { return {1.0, 0.0, 0.0, 0.0}; }

  double norm() const noexcept;
  Quaternion normalized() const;
  Vec3 vec() const noexcept { return {x, y, z}; }
  Quaternion conjugate() const noexcept { return {w, -x, -y, -z}; }

  Quaternion operator-() const noexcept { return {-w, -x, -y, -z}; }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Hamilton product. a * b applies b in the frame already rotated by a.
Quaternion multiply(const Quaternion& a, const Quaternion& b) noexcept;
inline Quaternion operator*(const Quaternion& a, const Quaternion& b) noexcept { return multiply(a, b); }

/// Inverse rotation. Throws InvalidInput for a (near) zero quaternion.
Quaternion inverse(const Quaternion& q);

struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;  ///< radians
};

/// [cos(a/2), sin(a/2) * axis]. Throws InvalidInput unless |axis| = 1 within 1e-9.
Quaternion from_axis_angle(const AxisAngle& aa);
Quaternion from_axis_angle(const Vec3& axis, double angle);

/// Rotation angle in [0, pi]; insensitive to the sign of q.
double rotation_angle(const Quaternion& q) noexcept;

/// Rotates a vector from body coordinates into reference coordinates.
Vec3 rotate(const Quaternion& q, const Vec3& v) noexcept;

/// Rotation matrix with v_ref = R * v_body.
Mat3 to_rotation_matrix(const Quaternion& q) noexcept;

/// Distance as rotations: min(|a - b|, |a + b|).
double rotation_distance(const Quaternion& a, const Quaternion& b) noexcept;

/// Composes a chain of unit quaternions left to right, renormalizing every
/// kRenormalizeEvery multiplies so that arbitrarily long chains stay unit.
Quaternion compose_chain(std::span<const Quaternion> chain);
inline constexpr int kRenormalizeEvery = 64;

/// Minimal rotation taking direction `from` onto direction `to`. Throws
/// InvalidInput for a zero vector.
Quaternion rotation_between(const Vec3& from, const Vec3& to);

/// Exponential map of a rotation vector (axis * angle).
Quaternion from_rotation_vector(const Vec3& rv) noexcept;
/// Logarithm map; the returned rotation vector has norm in [0, pi].
Vec3 to_rotation_vector(const Quaternion& q) noexcept;

enum class Axis : int { X = 0, Y = 1, Z = 2 };

Vec3 unit_axis(Axis a) noexcept;

/// Intrinsic Euler sequence a-b'-c''. Adjacent labels must differ, so the
/// 12 classic sequences are representable: 6 Tait-Bryan (xyz, zxy, ...) and
/// 6 proper Euler (zxz, xyx, ...).
class EulerConvention {
public:
  EulerConvention() = default;
  EulerConvention(Axis first, Axis second, Axis third);

  /// Parses "zxy", "z-x'-y''" or "ZXY". Throws InvalidInput.
  static EulerConvention parse(std::string_view text);

  const std::array<Axis, 3>& axes() const noexcept { return axes_; }
  Axis operator[](std::size_t i) const noexcept { return axes_[i]; }
  bool is_tait_bryan() const noexcept { return axes_[0] != axes_[2]; }
  std::string to_string() const;

  friend bool operator==(const EulerConvention&, const EulerConvention&) = default;

private:
  std::array<Axis, 3> axes_{Axis::Z, Axis::X, Axis::Y};
};

/// Intrinsic Euler angles. All three wrapped to (-pi, pi]; the middle angle
/// lies in [-pi/2, pi/2] (Tait-Bryan) or [0, pi] (proper Euler).
struct EulerTriplet {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  EulerConvention convention{};

  double operator[](std::size_t i) const noexcept { return i == 0 ? alpha : (i == 1 ? beta : gamma); }
};

/// Threshold on the singular term (cos of the middle angle for Tait-Bryan,
/// sin for proper Euler) below which the decomposition is treated as gimbal
/// locked: the whole rotation about the shared axis goes to alpha, gamma = 0.
inline constexpr double kGimbalThreshold = 1e-6;

EulerTriplet euler_decompose(const Quaternion& q, const EulerConvention& convention);
Quaternion euler_compose(const EulerTriplet& angles);

}  // namespace romheading
