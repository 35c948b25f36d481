#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "kdbench/chain.hpp"

namespace kdbench {

namespace detail {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

// Squared distance from p to segment [a, b]; handles a == b.
template <typename Scalar>
Scalar point_segment_sq(const Vec3<Scalar>& p, const Vec3<Scalar>& a, const Vec3<Scalar>& b) {
  const Vec3<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  Scalar t = Scalar(0);
  if (len2 > Scalar(0)) t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return (a + t * ab - p).squaredNorm();
}

template <typename Scalar>
bool lex_less(const Vec3<Scalar>& a0, const Vec3<Scalar>& a1, const Vec3<Scalar>& b0,
              const Vec3<Scalar>& b1) {
  for (int i = 0; i < 3; ++i) {
    if (a0[i] != b0[i]) return a0[i] < b0[i];
  }
  for (int i = 0; i < 3; ++i) {
    if (a1[i] != b1[i]) return a1[i] < b1[i];
  }
  return false;
}

template <typename Scalar>
Scalar segment_distance_sq(const Vec3<Scalar>& p0, const Vec3<Scalar>& p1, const Vec3<Scalar>& q0,
                           const Vec3<Scalar>& q1) {
  // The minimum is attained either with an endpoint on one segment or at the
  // interior stationary point of the two supporting lines.
  Scalar best = std::min({point_segment_sq(p0, q0, q1), point_segment_sq(p1, q0, q1),
                          point_segment_sq(q0, p0, p1), point_segment_sq(q1, p0, p1)});

  const Vec3<Scalar> d1 = p1 - p0;
  const Vec3<Scalar> d2 = q1 - q0;
  const Vec3<Scalar> r = p0 - q0;
  const Scalar a = d1.squaredNorm();
  const Scalar e = d2.squaredNorm();
  const Scalar b = d1.dot(d2);
  const Scalar c = d1.dot(r);
  const Scalar f = d2.dot(r);
  const Scalar denom = a * e - b * b;
  if (a > Scalar(0) && e > Scalar(0) && denom > Scalar(0)) {
    const Scalar s = (b * f - c * e) / denom;
    const Scalar t = (a * f - b * c) / denom;
    if (s > Scalar(0) && s < Scalar(1) && t > Scalar(0) && t < Scalar(1)) {
      best = std::min(best, (p0 + s * d1 - q0 - t * d2).squaredNorm());
    }
  }
  return best;
}

}  // namespace detail

/// Closest distance between segments [a0, a1] and [b0, b1]. Zero-length segments
/// are points. Symmetric in its two arguments bit for bit.
template <typename DA0, typename DA1, typename DB0, typename DB1>
typename DA0::Scalar segment_distance(const Eigen::MatrixBase<DA0>& a0, const Eigen::MatrixBase<DA1>& a1,
                                      const Eigen::MatrixBase<DB0>& b0, const Eigen::MatrixBase<DB1>& b1) {
  using Scalar = typename DA0::Scalar;
  using V = detail::Vec3<Scalar>;
  const V pa0 = a0, pa1 = a1, pb0 = b0, pb1 = b1;
  // Evaluate in a canonical argument order so swapping A and B cannot change rounding.
  if (detail::lex_less(pb0, pb1, pa0, pa1)) {
    return std::sqrt(detail::segment_distance_sq(pb0, pb1, pa0, pa1));
  }
  return std::sqrt(detail::segment_distance_sq(pa0, pa1, pb0, pb1));
}

/// A capsule moved into the fixed-gripper frame for one configuration.
struct PlacedCapsule {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  double radius = 0.0;
  std::size_t source_index = 0;
};

std::vector<PlacedCapsule> place_capsules(const KinematicChain& chain, const JointState& q);

struct CollisionResult {
  bool colliding = false;
  std::optional<CapsulePair> first_pair;  // lowest (i, j) in index order

  explicit operator bool() const { return colliding; }
};

// Non-exempt pairs collide when their axis distance is strictly below the sum
// of radii; touching capsules are free.
CollisionResult check_self_collision(const KinematicChain& chain, const JointState& q);

CollisionResult check_self_collision(const KinematicChain& chain,
                                     const std::vector<PlacedCapsule>& placed);

}  // namespace kdbench
