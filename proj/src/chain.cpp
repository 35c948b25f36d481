#include "kdbench/chain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace kdbench {
namespace {

constexpr double kUnitTol = 1e-9;

std::string joint_field(std::size_t i, const char* member) {
  return "joints[" + std::to_string(i) + "]." + member;
}

}  // namespace

std::optional<int> KinematicChain::frame_index(const std::string& joint) const {
  if (joint == kBaseFrame) return -1;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (joints[i].name == joint) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool KinematicChain::exempt(std::size_t i, std::size_t j) const {
  const CapsulePair key = i < j ? CapsulePair{i, j} : CapsulePair{j, i};
  return std::binary_search(collision_exemptions.begin(), collision_exemptions.end(), key);
}

void KinematicChain::normalize_exemptions() {
  for (auto& [i, j] : collision_exemptions) {
    if (j < i) std::swap(i, j);
  }
  std::sort(collision_exemptions.begin(), collision_exemptions.end());
  collision_exemptions.erase(std::unique(collision_exemptions.begin(), collision_exemptions.end()),
                             collision_exemptions.end());
}

bool within_limits(const KinematicChain& chain, const JointState& q) {
  if (static_cast<std::size_t>(q.size()) != chain.dof()) return false;
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    if (!(q[i] >= chain.joints[i].lower && q[i] <= chain.joints[i].upper)) return false;
  }
  return true;
}

JointState mid_range(const KinematicChain& chain) {
  JointState q(chain.dof());
  for (std::size_t i = 0; i < chain.dof(); ++i) q[i] = chain.joints[i].mid();
  return q;
}

JointState clamp_to_limits(const KinematicChain& chain, JointState q) {
  for (std::size_t i = 0; i < chain.dof() && i < static_cast<std::size_t>(q.size()); ++i) {
    q[i] = std::clamp(q[i], chain.joints[i].lower, chain.joints[i].upper);
  }
  return q;
}

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::non_finite: return "non-finite";
    case DiagnosticKind::non_unit_axis: return "non-unit-axis";
    case DiagnosticKind::zero_width_limit: return "zero-width-limit";
    case DiagnosticKind::inverted_limits: return "inverted-limits";
    case DiagnosticKind::non_rigid_transform: return "non-rigid-transform";
    case DiagnosticKind::non_positive_radius: return "non-positive-radius";
    case DiagnosticKind::dangling_reference: return "dangling-reference";
    case DiagnosticKind::invalid_exemption: return "invalid-exemption";
    case DiagnosticKind::duplicate_name: return "duplicate-name";
    case DiagnosticKind::reserved_name: return "reserved-name";
  }
  return "unknown";
}

std::vector<Diagnostic> validate_chain(const KinematicChain& chain) {
  std::vector<Diagnostic> out;
  auto add = [&out](DiagnosticKind kind, std::string field, std::string message) {
    out.push_back({kind, std::move(field), std::move(message)});
  };

  std::set<std::string> names;
  for (std::size_t i = 0; i < chain.joints.size(); ++i) {
    const JointSpec& j = chain.joints[i];
    const std::string who = "joint '" + j.name + "'";
    if (j.name == kBaseFrame) {
      add(DiagnosticKind::reserved_name, joint_field(i, "name"),
          who + ": the name 'base' is reserved for the fixed-gripper frame");
    }
    if (!names.insert(j.name).second) {
      add(DiagnosticKind::duplicate_name, joint_field(i, "name"), who + ": duplicate joint name");
    }

    if (!j.axis.allFinite()) {
      add(DiagnosticKind::non_finite, joint_field(i, "axis"), who + ": axis is not finite");
    } else if (std::abs(j.axis.norm() - 1.0) > kUnitTol) {
      std::ostringstream msg;
      msg << who << ": axis must have unit norm (norm " << j.axis.norm() << ")";
      add(DiagnosticKind::non_unit_axis, joint_field(i, "axis"), msg.str());
    }

    if (!std::isfinite(j.lower) || !std::isfinite(j.upper)) {
      add(DiagnosticKind::non_finite, joint_field(i, "limits"), who + ": limits are not finite");
    } else if (j.lower == j.upper) {
      add(DiagnosticKind::zero_width_limit, joint_field(i, "limits"),
          who + ": lower and upper limits are equal");
    } else if (j.lower > j.upper) {
      add(DiagnosticKind::inverted_limits, joint_field(i, "limits"),
          who + ": lower limit exceeds upper limit");
    }

    if (!j.origin.translation.allFinite()) {
      add(DiagnosticKind::non_finite, joint_field(i, "origin.translation"),
          who + ": origin translation is not finite");
    }
    if (!is_rotation(j.origin.rotation, kUnitTol)) {
      add(DiagnosticKind::non_rigid_transform, joint_field(i, "origin.rotation"),
          who + ": origin rotation is not a proper rotation");
    }
  }

  if (!chain.tip_offset.translation.allFinite()) {
    add(DiagnosticKind::non_finite, "tip_offset.translation", "tip offset translation is not finite");
  }
  if (!is_rotation(chain.tip_offset.rotation, kUnitTol)) {
    add(DiagnosticKind::non_rigid_transform, "tip_offset.rotation",
        "tip offset rotation is not a proper rotation");
  }

  for (std::size_t c = 0; c < chain.capsules.size(); ++c) {
    const CapsuleSpec& cap = chain.capsules[c];
    const std::string field = "capsules[" + std::to_string(c) + "]";
    if (!chain.frame_index(cap.attached_joint)) {
      add(DiagnosticKind::dangling_reference, field + ".joint",
          "capsule attached to unknown joint '" + cap.attached_joint + "'");
    }
    if (!cap.a.allFinite() || !cap.b.allFinite()) {
      add(DiagnosticKind::non_finite, field, "capsule endpoints are not finite");
    }
    if (!(cap.radius > 0.0) || !std::isfinite(cap.radius)) {
      add(DiagnosticKind::non_positive_radius, field + ".radius", "capsule radius must be positive");
    }
  }

  for (std::size_t e = 0; e < chain.collision_exemptions.size(); ++e) {
    const auto [i, j] = chain.collision_exemptions[e];
    if (i >= chain.capsules.size() || j >= chain.capsules.size() || i == j) {
      add(DiagnosticKind::invalid_exemption, "collision_exemptions[" + std::to_string(e) + "]",
          "exemption [" + std::to_string(i) + ", " + std::to_string(j) +
              "] does not name two distinct capsules");
    }
  }
  return out;
}

}  // namespace kdbench
