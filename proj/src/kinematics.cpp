#include "kdbench/kinematics.hpp"

#include <string>

#include <Eigen/SVD>

#include "kdbench/errors.hpp"

namespace kdbench {
namespace {

void check_size(const KinematicChain& chain, const JointState& q) {
  if (static_cast<std::size_t>(q.size()) != chain.dof()) {
    throw DimensionError("joint state has " + std::to_string(q.size()) + " values, chain '" +
                         chain.name + "' has " + std::to_string(chain.dof()) + " joints");
  }
}

}  // namespace

ChainFrames chain_frames(const KinematicChain& chain, const JointState& q) {
  check_size(chain, q);
  ChainFrames out;
  out.joints.reserve(chain.dof());
  Posed current;
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const JointSpec& joint = chain.joints[i];
    current = current * joint.origin;
    current.rotation = current.rotation * axis_rotation(joint.axis, q[i]);
    out.joints.push_back(current);
  }
  out.tool = current * chain.tip_offset;
  return out;
}

Posed forward_kinematics(const KinematicChain& chain, const JointState& q) {
  return chain_frames(chain, q).tool;
}

Jacobian jacobian(const KinematicChain& chain, const ChainFrames& frames) {
  if (frames.joints.size() != chain.dof()) {
    throw DimensionError("frame count does not match chain '" + chain.name + "'");
  }
  Jacobian j(6, static_cast<Eigen::Index>(chain.dof()));
  const Eigen::Vector3d& tip = frames.tool.translation;
  for (std::size_t k = 0; k < chain.dof(); ++k) {
    // The joint rotation leaves its own axis fixed, so the post-rotation frame gives the world axis.
    const Eigen::Vector3d z = frames.joints[k].rotation * chain.joints[k].axis;
    const Eigen::Vector3d& p = frames.joints[k].translation;
    j.col(static_cast<Eigen::Index>(k)) << z.cross(tip - p), z;
  }
  return j;
}

Jacobian jacobian(const KinematicChain& chain, const JointState& q) {
  return jacobian(chain, chain_frames(chain, q));
}

double smallest_singular_value(const Eigen::Ref<const Eigen::MatrixXd>& j) {
  if (j.cols() < 6 || j.rows() < 6) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  return svd.singularValues()[5];
}

SingularityVerdict screen_singularity(const KinematicChain& chain, const JointState& q,
                                      const Jacobian& j, double epsilon, LimitMargin margin) {
  check_size(chain, q);
  if (static_cast<std::size_t>(j.cols()) != chain.dof()) {
    throw DimensionError("Jacobian has " + std::to_string(j.cols()) + " columns, expected " +
                         std::to_string(chain.dof()));
  }
  if (!(epsilon > 0.0)) throw ParameterError("singularity threshold must be positive");
  if (!(margin.value() >= 0.0)) throw ParameterError("limit margin must be non-negative");

  SingularityVerdict verdict;
  std::vector<Eigen::Index> kept;
  for (std::size_t k = 0; k < chain.dof(); ++k) {
    const JointSpec& joint = chain.joints[k];
    const double m = margin.for_joint(joint);
    if (q[k] - joint.lower <= m || joint.upper - q[k] <= m) {
      verdict.removed_columns.push_back(k);
    } else {
      kept.push_back(static_cast<Eigen::Index>(k));
    }
  }

  Eigen::MatrixXd reduced(6, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) reduced.col(static_cast<Eigen::Index>(c)) = j.col(kept[c]);
  verdict.sigma_min = smallest_singular_value(reduced);
  verdict.near_singular = kept.empty() || verdict.sigma_min < epsilon;
  return verdict;
}

}  // namespace kdbench
