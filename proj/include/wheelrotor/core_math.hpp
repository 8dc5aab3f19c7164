#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace wheelrotor {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Unit quaternion, Hamilton convention, scalar first.
///
/// When used as an attitude it rotates body-frame vectors into the inertial
/// (NED) frame: v_I = q ⊗ v_B ⊗ q*. q and -q describe the same rotation.
struct Quaternion {
  double eta{1.0};
  Vec3 eps{Vec3::Zero()};

  static Quaternion identity() { return {}; }
  static Quaternion from_axis_angle(const Vec3& axis, double angle);

  double norm() const;
  Quaternion normalized() const;
  Quaternion conjugate() const { return {eta, -eps}; }
  Quaternion operator-() const { return {-eta, -eps}; }

  /// Rotation matrix R(q), body -> inertial.
  Mat3 to_rotation_matrix() const;
  Vec3 rotate(const Vec3& v) const;
};

/// Z-Y-X Tait-Bryan angles. Only used at I/O boundaries.
struct EulerZYX {
  double kappa{0.0};  // yaw
  double omega{0.0};  // pitch
  double phi{0.0};    // roll
};

/// R = Rz(yaw) * Ry(pitch) * Rx(roll). Throws GimbalSingularity unless |pitch| < pi/2.
Mat3 rotation_from_euler(const EulerZYX& e);

/// Hamilton product without renormalization. Used by integrators and oracles
/// where the raw product is needed.
Quaternion quat_product(const Quaternion& a, const Quaternion& b);

/// Hamilton product a ⊗ b, renormalized.
Quaternion quat_multiply(const Quaternion& a, const Quaternion& b);

/// q_e = q_d* ⊗ q.
Quaternion quat_error(const Quaternion& q_d, const Quaternion& q);

Quaternion quat_from_euler(const EulerZYX& e);
EulerZYX euler_from_quat(const Quaternion& q);

/// Cross-product matrix: skew(v) * w == v.cross(w).
Mat3 skew(const Vec3& v);

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace wheelrotor
