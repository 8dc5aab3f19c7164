#include "wheelrotor/core_math.hpp"

#include <algorithm>
#include <cmath>

#include "wheelrotor/errors.hpp"

namespace wheelrotor {

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return identity();
  return {std::cos(angle / 2.0), axis / n * std::sin(angle / 2.0)};
}

double Quaternion::norm() const { return std::sqrt(eta * eta + eps.squaredNorm()); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  return {eta / n, eps / n};
}

Mat3 Quaternion::to_rotation_matrix() const {
  const double w = eta, x = eps.x(), y = eps.y(), z = eps.z();
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Vec3 Quaternion::rotate(const Vec3& v) const {
  // v' = v + 2 eps x (eps x v + eta v)
  const Vec3 t = 2.0 * eps.cross(v);
  return v + eta * t + eps.cross(t);
}

Mat3 rotation_from_euler(const EulerZYX& e) {
  if (!(std::abs(e.omega) < kPi / 2.0)) {
    throw GimbalSingularity("pitch must lie strictly inside (-pi/2, pi/2)");
  }
  const double cy = std::cos(e.kappa), sy = std::sin(e.kappa);
  const double cp = std::cos(e.omega), sp = std::sin(e.omega);
  const double cr = std::cos(e.phi), sr = std::sin(e.phi);
  Mat3 rz, ry, rx;
  rz << cy, -sy, 0, sy, cy, 0, 0, 0, 1;
  ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
  rx << 1, 0, 0, 0, cr, -sr, 0, sr, cr;
  return rz * ry * rx;
}

Quaternion quat_product(const Quaternion& a, const Quaternion& b) {
  return {a.eta * b.eta - a.eps.dot(b.eps),
          a.eta * b.eps + b.eta * a.eps + a.eps.cross(b.eps)};
}

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
  return quat_product(a, b).normalized();
}

Quaternion quat_error(const Quaternion& q_d, const Quaternion& q) {
  return quat_multiply(q_d.conjugate(), q);
}

Quaternion quat_from_euler(const EulerZYX& e) {
  const double cy = std::cos(e.kappa / 2), sy = std::sin(e.kappa / 2);
  const double cp = std::cos(e.omega / 2), sp = std::sin(e.omega / 2);
  const double cr = std::cos(e.phi / 2), sr = std::sin(e.phi / 2);
  Quaternion q{cr * cp * cy + sr * sp * sy,
               Vec3(sr * cp * cy - cr * sp * sy,
                    cr * sp * cy + sr * cp * sy,
                    cr * cp * sy - sr * sp * cy)};
  return q.normalized();
}

EulerZYX euler_from_quat(const Quaternion& q) {
  const double w = q.eta, x = q.eps.x(), y = q.eps.y(), z = q.eps.z();
  EulerZYX e;
  e.phi = std::atan2(2 * (w * x + y * z), 1 - 2 * (x * x + y * y));
  const double s = std::clamp(2 * (w * y - z * x), -1.0, 1.0);
  e.omega = std::asin(s);
  e.kappa = std::atan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z));
  return e;
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return m;
}

}  // namespace wheelrotor
