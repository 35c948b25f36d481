#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "kdbench/chain.hpp"
#include "kdbench/pose.hpp"

namespace kdbench {

/// Geometric Jacobian, rows = (linear xyz, angular xyz), one column per joint.
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// World-frame transform of every joint frame (after its rotation) plus the tool frame.
struct ChainFrames {
  std::vector<Posed> joints;
  Posed tool;
};

ChainFrames chain_frames(const KinematicChain& chain, const JointState& q);

Posed forward_kinematics(const KinematicChain& chain, const JointState& q);

Jacobian jacobian(const KinematicChain& chain, const JointState& q);

/// Jacobian from precomputed frames; lets callers reuse one FK pass.
Jacobian jacobian(const KinematicChain& chain, const ChainFrames& frames);

// How close to a limit a joint may sit before its column is dropped.
class LimitMargin {
 public:
  enum class Mode { absolute, fraction_of_range };

  static LimitMargin absolute(double radians) { return {Mode::absolute, radians}; }
  static LimitMargin fraction_of_range(double fraction) { return {Mode::fraction_of_range, fraction}; }

  Mode mode() const { return mode_; }
  double value() const { return value_; }

  double for_joint(const JointSpec& joint) const {
    return mode_ == Mode::absolute ? value_ : value_ * joint.range();
  }

  bool operator==(const LimitMargin&) const = default;

 private:
  LimitMargin(Mode mode, double value) : mode_(mode), value_(value) {}
  Mode mode_;
  double value_;
};

struct SingularityVerdict {
  double sigma_min = 0.0;
  std::vector<std::size_t> removed_columns;  // ascending
  bool near_singular = true;
};

/// Smallest of the six singular values of the 6 x k matrix, zero when k < 6.
double smallest_singular_value(const Eigen::Ref<const Eigen::MatrixXd>& j);

// Drops the columns of joints within the margin of a limit, then thresholds the
// sixth singular value of what remains. Fewer than six surviving columns cannot
// span a full pose twist, so that case reports sigma_min = 0.
SingularityVerdict screen_singularity(const KinematicChain& chain, const JointState& q,
                                      const Jacobian& j, double epsilon, LimitMargin margin);

}  // namespace kdbench
