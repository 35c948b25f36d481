#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kdbench/pose.hpp"

namespace kdbench {

/// Capsules may attach to this frame name to stay rigid with the fixed gripper.
inline constexpr const char* kBaseFrame = "base";

/// Revolute joint. The joint frame is parent * origin * Rot(axis, q).
struct JointSpec {
  std::string name;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  Posed origin;
  double lower = 0.0;
  double upper = 0.0;

  double range() const { return upper - lower; }
  double mid() const { return 0.5 * (lower + upper); }
};

/// Segment swept by a sphere, endpoints in the attached joint's frame.
struct CapsuleSpec {
  std::string attached_joint;
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double radius = 0.0;
};

using JointState = Eigen::VectorXd;
using CapsulePair = std::pair<std::size_t, std::size_t>;

// Serial chain from the fixed gripper (base frame) to the free gripper (tool frame).
// Treated as immutable once built; share it by const reference across workers.
struct KinematicChain {
  std::string name;
  std::vector<JointSpec> joints;
  Posed tip_offset;
  std::vector<CapsuleSpec> capsules;
  // Unordered pairs, stored normalized (first < second), sorted, unique.
  std::vector<CapsulePair> collision_exemptions;

  std::size_t dof() const { return joints.size(); }

  /// Index of the named joint, or -1 for the base frame. nullopt when unknown.
  std::optional<int> frame_index(const std::string& joint) const;

  bool exempt(std::size_t i, std::size_t j) const;

  /// Sorts and de-duplicates collision_exemptions, ordering each pair.
  void normalize_exemptions();
};

bool within_limits(const KinematicChain& chain, const JointState& q);
JointState mid_range(const KinematicChain& chain);
JointState clamp_to_limits(const KinematicChain& chain, JointState q);

enum class DiagnosticKind {
  non_finite,
  non_unit_axis,
  zero_width_limit,
  inverted_limits,
  non_rigid_transform,
  non_positive_radius,
  dangling_reference,
  invalid_exemption,
  duplicate_name,
  reserved_name,
};

const char* to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string field;  // e.g. "joints[2].axis"
  std::string message;
};

/// One diagnostic per invariant violation; empty iff the chain is well formed.
std::vector<Diagnostic> validate_chain(const KinematicChain& chain);

}  // namespace kdbench
