#include "romheading/quaternion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "romheading/error.hpp"

namespace romheading {

double wrap_pi(double angle) noexcept {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double wrap_two_pi(double angle) noexcept {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double angular_distance(double a, double b) noexcept { return std::abs(wrap_pi(a - b)); }

double Quaternion::norm() const noexcept { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (!(n > 1e-12)) throw InvalidInput("cannot normalize a zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quaternion multiply(const Quaternion& a, const Quaternion& b) noexcept {
  return {
      a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
  };
}

Quaternion inverse(const Quaternion& q) {
  const double n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
  if (!(n2 > 1e-24)) throw InvalidInput("cannot invert a zero quaternion");
  return {q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2};
}

Quaternion from_axis_angle(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw InvalidInput("rotation axis must be a unit vector");
  }
  const double s = std::sin(0.5 * angle);
  return Quaternion{std::cos(0.5 * angle), s * axis.x(), s * axis.y(), s * axis.z()}.normalized();
}

Quaternion from_axis_angle(const AxisAngle& aa) { return from_axis_angle(aa.axis, aa.angle); }

double rotation_angle(const Quaternion& q) noexcept {
  const double v = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  return 2.0 * std::atan2(v, std::abs(q.w));
}

Vec3 rotate(const Quaternion& q, const Vec3& v) noexcept {
  // v + 2 u x (u x v + w v), u = vector part
  const Vec3 u = q.vec();
  const Vec3 t = 2.0 * u.cross(v);
  return v + q.w * t + u.cross(t);
}

Mat3 to_rotation_matrix(const Quaternion& q) noexcept {
  const double ww = q.w * q.w, xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
  const double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
  const double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
  Mat3 r;
  r << ww + xx - yy - zz, 2.0 * (xy - wz), 2.0 * (xz + wy),
       2.0 * (xy + wz), ww - xx + yy - zz, 2.0 * (yz - wx),
       2.0 * (xz - wy), 2.0 * (yz + wx), ww - xx - yy + zz;
  return r;
}

double rotation_distance(const Quaternion& a, const Quaternion& b) noexcept {
  const double dw = a.w - b.w, dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  const double sw = a.w + b.w, sx = a.x + b.x, sy = a.y + b.y, sz = a.z + b.z;
  return std::sqrt(std::min(dw * dw + dx * dx + dy * dy + dz * dz, sw * sw + sx * sx + sy * sy + sz * sz));
}

Quaternion compose_chain(std::span<const Quaternion> chain) {
  Quaternion acc = Quaternion::identity();
  int since = 0;
  for (const auto& q : chain) {
    acc = acc * q;
    if (++since == kRenormalizeEvery) {
      acc = acc.normalized();
      since = 0;
    }
  }
  return acc;
}

Quaternion rotation_between(const Vec3& from, const Vec3& to) {
  if (!(from.norm() > 0.0) || !(to.norm() > 0.0)) throw InvalidInput("rotation_between: zero or non-finite direction");
  const Vec3 a = from.normalized();
  const Vec3 b = to.normalized();
  const double d = a.dot(b);
  if (d < -1.0 + 1e-12) {
    // Antiparallel: any axis orthogonal to a.
    Vec3 ortho = a.cross(Vec3::UnitX());
    if (ortho.norm() < 1e-6) ortho = a.cross(Vec3::UnitY());
    return from_axis_angle(ortho.normalized(), kPi);
  }
  const Vec3 c = a.cross(b);
  return Quaternion{1.0 + d, c.x(), c.y(), c.z()}.normalized();
}

Quaternion from_rotation_vector(const Vec3& rv) noexcept {
  const double angle = rv.norm();
  if (angle < 1e-12) {
    return Quaternion{1.0, 0.5 * rv.x(), 0.5 * rv.y(), 0.5 * rv.z()}.normalized();
  }
  const double s = std::sin(0.5 * angle) / angle;
  return {std::cos(0.5 * angle), s * rv.x(), s * rv.y(), s * rv.z()};
}

Vec3 to_rotation_vector(const Quaternion& q) noexcept {
  const Quaternion p = q.w < 0.0 ? -q : q;
  const double v = p.vec().norm();
  if (v < 1e-15) return 2.0 * p.vec();
  const double angle = 2.0 * std::atan2(v, p.w);
  return p.vec() * (angle / v);
}

Vec3 unit_axis(Axis a) noexcept {
  switch (a) {
    case Axis::X: return Vec3::UnitX();
    case Axis::Y: return Vec3::UnitY();
    case Axis::Z: break;
  }
  return Vec3::UnitZ();
}

EulerConvention::EulerConvention(Axis first, Axis second, Axis third) : axes_{first, second, third} {
  if (first == second || second == third) {
    throw InvalidInput("Euler convention needs distinct adjacent axes");
  }
}

EulerConvention EulerConvention::parse(std::string_view text) {
  std::array<Axis, 3> parsed{};
  std::size_t n = 0;
  for (char c : text) {
    const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lc == '-' || lc == '\'' || lc == ' ') continue;
    if (lc != 'x' && lc != 'y' && lc != 'z') {
      throw InvalidInput("invalid Euler convention '" + std::string(text) + "'");
    }
    if (n == 3) throw InvalidInput("Euler convention '" + std::string(text) + "' has more than 3 axes");
    parsed[n++] = static_cast<Axis>(lc - 'x');
  }
  if (n != 3) throw InvalidInput("Euler convention '" + std::string(text) + "' needs 3 axes");
  return EulerConvention(parsed[0], parsed[1], parsed[2]);
}

std::string EulerConvention::to_string() const {
  std::string s;
  for (Axis a : axes_) s.push_back(static_cast<char>('x' + static_cast<int>(a)));
  return s;
}

namespace {

int idx(Axis a) { return static_cast<int>(a); }

// +1 when (i, j, k) is a cyclic permutation of (x, y, z).
double parity(int i, int j) { return ((j - i + 3) % 3) == 1 ? 1.0 : -1.0; }

}  // namespace

EulerTriplet euler_decompose(const Quaternion& q, const EulerConvention& convention) {
  const Mat3 r = to_rotation_matrix(q);
  const int i = idx(convention[0]);
  const int j = idx(convention[1]);
  EulerTriplet out;
  out.convention = convention;

  if (convention.is_tait_bryan()) {
    const int k = idx(convention[2]);
    const double s = parity(i, j);
    const double cb = std::hypot(r(i, i), r(i, j));
    out.beta = std::atan2(s * r(i, k), cb);
    if (cb < kGimbalThreshold) {
      out.alpha = std::atan2(s * r(k, j), r(j, j));
      out.gamma = 0.0;
    } else {
      out.alpha = std::atan2(-s * r(j, k), r(k, k));
      out.gamma = std::atan2(-s * r(i, j), r(i, i));
    }
  } else {
    const int k = 3 - i - j;
    const double s = parity(i, j);
    const double sb = std::hypot(r(i, j), r(i, k));
    out.beta = std::atan2(sb, r(i, i));
    if (sb < kGimbalThreshold) {
      out.alpha = std::atan2(s * r(k, j), r(j, j));
      out.gamma = 0.0;
    } else {
      out.alpha = std::atan2(r(j, i), -s * r(k, i));
      out.gamma = std::atan2(r(i, j), s * r(i, k));
    }
  }
  out.alpha = wrap_pi(out.alpha);
  out.beta = wrap_pi(out.beta);
  out.gamma = wrap_pi(out.gamma);
  return out;
}

Quaternion euler_compose(const EulerTriplet& angles) {
  const auto& c = angles.convention;
  return from_axis_angle(unit_axis(c[0]), angles.alpha) * from_axis_angle(unit_axis(c[1]), angles.beta) *
         from_axis_angle(unit_axis(c[2]), angles.gamma);
}

}  // namespace romheading
