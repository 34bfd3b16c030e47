#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <vector>

#include "mf/errors.hpp"

namespace mf {

/// Rigid transform T_b^a mapping points from frame b into frame a:
///   p_a = rotation * p_b + translation.
/// The quaternion is kept unit-norm with w >= 0 (canonical sign) after every
/// operation, so equal transforms have bitwise-comparable representations.
template <typename Scalar>
struct Pose {
  using Quaternion = Eigen::Quaternion<Scalar>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

  Quaternion rotation{Scalar(1), Scalar(0), Scalar(0), Scalar(0)};
  Vector3 translation{Scalar(0), Scalar(0), Scalar(0)};

  Pose() = default;

  Pose(const Quaternion& q, const Vector3& t) : rotation(q), translation(t) {
    // Renormalize only when the norm has actually drifted; renormalizing an
    // already-unit quaternion perturbs its coefficients by an ulp, which would
    // make re-wrapping a pose (and serialization round trips) non-idempotent.
    const Scalar drift = rotation.squaredNorm() - Scalar(1);
    if (!(drift * drift <= Scalar(1e-24))) rotation.normalize();
    canonicalize();
  }

  static Pose Identity() { return Pose(); }

  /// 4x4 homogeneous matrix [R t; 0 1].
  Matrix4 matrix() const {
    Matrix4 m = Matrix4::Identity();
    m.template topLeftCorner<3, 3>() = rotation.toRotationMatrix();
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }

  static Pose FromMatrix(const Matrix4& m) {
    return Pose(Quaternion(Eigen::Matrix<Scalar, 3, 3>(m.template topLeftCorner<3, 3>())),
                Vector3(m.template topRightCorner<3, 1>()));
  }

  /// Flip the quaternion sign so that w >= 0; on the w == 0 boundary the first
  /// nonzero imaginary component is made positive so the choice stays unique.
  void canonicalize() {
    const Scalar w = rotation.w();
    if (w < Scalar(0)) {
      negate();
    } else if (w == Scalar(0)) {
      const Scalar x = rotation.x(), y = rotation.y(), z = rotation.z();
      if (x < Scalar(0) || (x == Scalar(0) && (y < Scalar(0) || (y == Scalar(0) && z < Scalar(0))))) {
        negate();
      }
    }
  }

 private:
  void negate() { rotation.coeffs() = -rotation.coeffs(); }
};

using Posed = Pose<double>;
using Posef = Pose<float>;

/// Spatial velocity: linear [m/s] and angular [rad/s], both in a common
/// external frame (the toolkit uses the world frame for VIO twists).
template <typename Scalar>
struct Twist {
  Eigen::Matrix<Scalar, 3, 1> linear{Scalar(0), Scalar(0), Scalar(0)};
  Eigen::Matrix<Scalar, 3, 1> angular{Scalar(0), Scalar(0), Scalar(0)};
};

using Twistd = Twist<double>;

/// Error split used everywhere a pose is compared against a reference.
template <typename Scalar>
struct PoseError {
  Scalar translation_err{0};  // Euclidean [m]
  Scalar rotation_err{0};     // geodesic angle in [0, pi] [rad]
};

using PoseErrord = PoseError<double>;

/// a * b: first apply b, then a (T_c^a = T_b^a * T_c^b).
template <typename Scalar>
Pose<Scalar> compose(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  return Pose<Scalar>(a.rotation * b.rotation, a.rotation * b.translation + a.translation);
}

template <typename Scalar>
Pose<Scalar> inverse(const Pose<Scalar>& p) {
  const Eigen::Quaternion<Scalar> qi = p.rotation.conjugate();
  return Pose<Scalar>(qi, qi * (-p.translation));
}

/// Quaternion exponential of a rotation vector (axis * angle). Accepts any
/// 3-vector expression.
template <typename Derived>
Eigen::Quaternion<typename Derived::Scalar> rotationExp(const Eigen::MatrixBase<Derived>& w_expr) {
  using Scalar = typename Derived::Scalar;
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  const Eigen::Matrix<Scalar, 3, 1> w = w_expr;
  const Scalar theta = w.norm();
  if (theta < Scalar(1e-10)) {
    // sin(t/2)/t ~ 1/2 - t^2/48; the quadratic term is below double epsilon here.
    Eigen::Quaternion<Scalar> q(Scalar(1), w.x() / Scalar(2), w.y() / Scalar(2), w.z() / Scalar(2));
    q.normalize();
    return q;
  }
  return Eigen::Quaternion<Scalar>(
      Eigen::AngleAxis<Scalar>(theta, Eigen::Matrix<Scalar, 3, 1>(w / theta)));
}

/// Rotation vector of a unit quaternion; inverse of rotationExp on [0, pi].
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> rotationLog(const Eigen::Quaternion<Scalar>& q_in) {
  Eigen::Quaternion<Scalar> q = q_in.normalized();
  if (q.w() < Scalar(0)) q.coeffs() = -q.coeffs();
  const Eigen::Matrix<Scalar, 3, 1> v(q.x(), q.y(), q.z());
  const Scalar sin_half = v.norm();
  if (sin_half < Scalar(1e-12)) {
    return Scalar(2) * v;  // first-order: angle ~ 2*|v|, axis ~ v/|v|
  }
  const Scalar angle = Scalar(2) * std::atan2(sin_half, q.w());
  return (angle / sin_half) * v;
}

/// Translation distance and geodesic rotation angle between two poses.
template <typename Scalar>
PoseError<Scalar> poseDistance(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  PoseError<Scalar> e;
  e.translation_err = (a.translation - b.translation).norm();
  const Eigen::Quaternion<Scalar> r = a.rotation.conjugate() * b.rotation;
  const Scalar vec_norm = Eigen::Matrix<Scalar, 3, 1>(r.x(), r.y(), r.z()).norm();
  e.rotation_err = Scalar(2) * std::atan2(vec_norm, std::abs(r.w()));
  return e;
}

/// Geodesic (slerp) interpolation between poses; u in [0,1] maps a -> b.
/// Used for sampling continuous-time streams between measurements.
template <typename Scalar>
Pose<Scalar> interpolatePose(const Pose<Scalar>& a, const Pose<Scalar>& b, Scalar u) {
  return Pose<Scalar>(a.rotation.slerp(u, b.rotation),
                      (Scalar(1) - u) * a.translation + u * b.translation);
}

/// Normalized linear (nlerp) blend from a toward b with the given weight.
/// Cheap and sign-safe; used for the incremental tag-map refinement where the
/// two inputs are always close.
template <typename Scalar>
Pose<Scalar> blendPose(const Pose<Scalar>& a, const Pose<Scalar>& b, Scalar weight) {
  Eigen::Quaternion<Scalar> qb = b.rotation;
  if (a.rotation.dot(qb) < Scalar(0)) qb.coeffs() = -qb.coeffs();
  Eigen::Quaternion<Scalar> q;
  q.coeffs() = (Scalar(1) - weight) * a.rotation.coeffs() + weight * qb.coeffs();
  return Pose<Scalar>(q, (Scalar(1) - weight) * a.translation + weight * b.translation);
}

/// Chordal mean: translations averaged component-wise, quaternions sign-aligned
/// to the first element, summed and renormalized. Throws EmptySetError on an
/// empty input.
template <typename Scalar>
Pose<Scalar> averagePoses(const std::vector<Pose<Scalar>>& poses) {
  if (poses.empty()) throw EmptySetError("average_poses: empty input set");
  Eigen::Matrix<Scalar, 3, 1> t = Eigen::Matrix<Scalar, 3, 1>::Zero();
  Eigen::Matrix<Scalar, 4, 1> acc = Eigen::Matrix<Scalar, 4, 1>::Zero();
  const Eigen::Quaternion<Scalar>& ref = poses.front().rotation;
  for (const Pose<Scalar>& p : poses) {
    t += p.translation;
    acc += (ref.dot(p.rotation) < Scalar(0)) ? -p.rotation.coeffs() : p.rotation.coeffs();
  }
  t /= Scalar(poses.size());
  Eigen::Quaternion<Scalar> q;
  if (acc.norm() < Scalar(1e-12)) {
    q = ref;  // antipodal degenerate set; fall back to the reference element
  } else {
    q.coeffs() = acc;
  }
  return Pose<Scalar>(q, t);
}

template <typename Scalar>
bool isApprox(const Pose<Scalar>& a, const Pose<Scalar>& b, Scalar tol) {
  const PoseError<Scalar> e = poseDistance(a, b);
  return e.translation_err <= tol && e.rotation_err <= tol;
}

}  // namespace mf
