#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace kdbench {

// Rigid transform. Maps points from the child frame into the parent frame:
// x_parent = rotation * x_child + translation.
template <typename Scalar>
struct Pose {
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  Matrix3 rotation = Matrix3::Identity();
  Vector3 translation = Vector3::Zero();

  Pose() = default;

  template <typename DerivedR, typename DerivedT>
  Pose(const Eigen::MatrixBase<DerivedR>& r, const Eigen::MatrixBase<DerivedT>& t)
      : rotation(r), translation(t) {}

  static Pose Identity() { return Pose(); }

  template <typename DerivedT>
  static Pose Translation(const Eigen::MatrixBase<DerivedT>& t) {
    return Pose(Matrix3::Identity(), t);
  }

  Pose operator*(const Pose& rhs) const {
    return Pose(rotation * rhs.rotation, rotation * rhs.translation + translation);
  }

  template <typename Derived>
  Vector3 apply(const Eigen::MatrixBase<Derived>& p) const {
    return rotation * p + translation;
  }

  Pose inverse() const {
    Matrix3 rt = rotation.transpose();
    return Pose(rt, -(rt * translation));
  }

  template <typename NewScalar>
  Pose<NewScalar> cast() const {
    return Pose<NewScalar>(rotation.template cast<NewScalar>(),
                           translation.template cast<NewScalar>());
  }
};

using Posed = Pose<double>;

/// True when R is orthonormal with determinant +1, both to within `tol`.
template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& r, typename Derived::Scalar tol) {
  using Scalar = typename Derived::Scalar;
  if (r.rows() != 3 || r.cols() != 3 || !r.allFinite()) return false;
  const Eigen::Matrix<Scalar, 3, 3> gram = r.transpose() * r;
  const Scalar ortho = (gram - Eigen::Matrix<Scalar, 3, 3>::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(r.determinant() - Scalar(1)) <= tol;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> axis_rotation(const Eigen::MatrixBase<Derived>& axis,
                                                           typename Derived::Scalar angle) {
  using Scalar = typename Derived::Scalar;
  return Eigen::AngleAxis<Scalar>(angle, axis).toRotationMatrix();
}

/// Fixed-axis roll/pitch/yaw: R = Rz(yaw) * Ry(pitch) * Rx(roll).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_from_rpy(Scalar roll, Scalar pitch, Scalar yaw) {
  using V = Eigen::Matrix<Scalar, 3, 1>;
  return (Eigen::AngleAxis<Scalar>(yaw, V::UnitZ()) * Eigen::AngleAxis<Scalar>(pitch, V::UnitY()) *
          Eigen::AngleAxis<Scalar>(roll, V::UnitX()))
      .toRotationMatrix();
}

/// Inverse of rotation_from_rpy; pitch in [-pi/2, pi/2].
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 1> rpy_from_rotation(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  const Scalar sp = -r(2, 0);
  const Scalar cp = std::hypot(r(0, 0), r(1, 0));
  const Scalar pitch = std::atan2(sp, cp);
  Scalar roll, yaw;
  if (cp > Scalar(1e-12)) {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  } else {
    // Gimbal lock: only roll - yaw (or roll + yaw) is observable, put it all in roll.
    yaw = Scalar(0);
    roll = std::atan2(-r(1, 2), r(1, 1));
  }
  return {roll, pitch, yaw};
}

/// Rotation vector (axis * angle) of R, angle in [0, pi].
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 1> rotation_log(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  const Eigen::AngleAxis<Scalar> aa{Eigen::Matrix<Scalar, 3, 3>(r)};
  return aa.angle() * aa.axis();
}

template <typename Derived>
typename Derived::Scalar rotation_angle(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  return Eigen::AngleAxis<Scalar>(Eigen::Matrix<Scalar, 3, 3>(r)).angle();
}

/// Translation distance and rotation angle between two poses.
template <typename Scalar>
std::pair<Scalar, Scalar> pose_error(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  return {(a.translation - b.translation).norm(),
          rotation_angle(Eigen::Matrix<Scalar, 3, 3>(a.rotation * b.rotation.transpose()))};
}

}  // namespace kdbench
