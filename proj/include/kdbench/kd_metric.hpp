#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kdbench/chain.hpp"
#include "kdbench/errors.hpp"
#include "kdbench/ik.hpp"
#include "kdbench/kinematics.hpp"
#include "kdbench/pose.hpp"

namespace kdbench {

/// Distance the origin grid point is pushed along the cube axis before evaluation.
inline constexpr double kOriginNudge = 1e-6;

// Cube sampled at resolution^3 points. Grid axis 0 runs along axis_direction
// over [0, side]; axes 1 and 2 (perpendicular_basis) span [-side/2, side/2].
// Point (i, j, k) is stored at index (i * resolution + j) * resolution + k.
struct WorkspaceGrid {
  double side_length = 0.2;
  int resolution = 9;
  Eigen::Vector3d axis_direction = Eigen::Vector3d::UnitX();
  std::vector<Eigen::Vector3d> points;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * resolution + j) * resolution + k;
  }
};

/// Two unit vectors completing axis_direction to a right-handed frame.
std::pair<Eigen::Vector3d, Eigen::Vector3d> perpendicular_basis(const Eigen::Vector3d& axis);

WorkspaceGrid generate_grid(double side_length, int resolution, const Eigen::Vector3d& axis_direction);

/**
 * Free-gripper target for a workspace point: translation p, tool z-axis along
 * -p/|p| (towards the fixed gripper). Roll is fixed by taking the tool x-axis as
 * world +z projected off the approach axis, or world +x when that projection
 * vanishes.
 */
template <typename Derived>
Pose<typename Derived::Scalar> target_pose_for_point(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  using V = Eigen::Matrix<Scalar, 3, 1>;
  const V point = p;
  const Scalar norm = point.norm();
  if (!(norm > Scalar(0)) || !point.allFinite()) {
    throw ParameterError("target point must be finite and away from the origin");
  }
  const V z = -point / norm;
  V x = V::UnitZ() - z * z.z();
  const Scalar xn = x.norm();
  if (xn < Scalar(1e-9)) {
    x = V::UnitX() - z * z.x();
    x.normalize();
  } else {
    x /= xn;
  }
  const V y = z.cross(x);
  Eigen::Matrix<Scalar, 3, 3> r;
  r << x, y, z;
  return Pose<Scalar>(r, point);
}

enum class PointStatus { valid, near_singular, unreachable };
enum class SubCause { none, no_ik, self_collision };

const char* to_string(PointStatus s);
const char* to_string(SubCause s);
std::optional<PointStatus> point_status_from_string(const std::string& s);
std::optional<SubCause> sub_cause_from_string(const std::string& s);

struct PointVerdict {
  std::size_t index = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // evaluated position
  PointStatus status = PointStatus::unreachable;
  SubCause sub_cause = SubCause::no_ik;
  std::optional<double> sigma_min;           // present iff IK found a solution
  std::optional<JointState> solution;        // present iff IK found a solution
  int restarts_used = 0;
  bool nudged = false;  // origin point shifted by kOriginNudge
};

/// Everything besides the chain and grid that determines a verdict.
struct ClassifyConfig {
  IKConfig ik;
  double epsilon = 1e-2;
  LimitMargin limit_margin = LimitMargin::fraction_of_range(0.02);

  void validate() const;
};

/// Runs IK (seeded with config.ik.seed) then the singularity screen for one point.
PointVerdict classify_point(const KinematicChain& chain, const Eigen::Vector3d& p,
                            const ClassifyConfig& config);

struct GridSpec {
  double side_length = 0.2;
  int resolution = 9;
  Eigen::Vector3d axis_direction = Eigen::Vector3d::UnitX();
};

struct KDReport {
  std::string chain_name;
  std::size_t dof = 0;
  double kd = 0.0;
  std::size_t n_total = 0;
  std::size_t n_valid = 0;
  std::size_t n_singular = 0;
  std::size_t n_unreachable = 0;
  std::vector<PointVerdict> verdicts;  // grid index order
  GridSpec grid;
  ClassifyConfig config;  // config.ik.seed holds the global seed
  double wall_time = 0.0;
};

struct EvalOptions {
  unsigned workers = 1;
  // Evaluation order over point indices; empty means ascending.
  std::vector<std::size_t> order;
};

/// Per-point IK seed: a function of the global seed and point index only.
std::uint64_t point_seed(std::uint64_t global_seed, std::size_t point_index);

KDReport compute_kd(const KinematicChain& chain, const WorkspaceGrid& grid, const ClassifyConfig& config,
                    const EvalOptions& options = {});

struct ComparisonRow {
  std::string chain_name;
  std::size_t dof = 0;
  double kd = 0.0;
  std::size_t n_valid = 0;
  std::size_t n_singular = 0;
  std::size_t n_unreachable = 0;
  std::size_t n_total = 0;
};

struct Comparison {
  std::vector<KDReport> reports;    // input order
  std::vector<ComparisonRow> rows;  // kd descending, then name ascending
  double wall_time = 0.0;
};

/// Evaluates every chain on the same grid and configuration. Chain names must be unique.
Comparison compare_designs(const std::vector<KinematicChain>& chains, const GridSpec& grid,
                           const ClassifyConfig& config, unsigned workers = 1);

}  // namespace kdbench
