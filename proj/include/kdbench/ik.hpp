#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "kdbench/chain.hpp"
#include "kdbench/pose.hpp"

namespace kdbench {

/**
 * Damped least-squares IK settings.
 *
 * The first attempt starts at the middle of the joint limits; up to `restarts`
 * further attempts start from restart_configuration. Each attempt iterates
 * q <- clamp(q + step_scale * J^T (J J^T + damping I)^-1 e),
 * where e stacks the translation error and the rotation vector of
 * R_target * R_current^T. An attempt ends on convergence, on stall, or after
 * max_iterations; converged configurations in self-collision are discarded.
 */
struct IKConfig {
  double position_tolerance = 1e-4;     // m
  double orientation_tolerance = 1e-3;  // rad
  int max_iterations = 200;             // per attempt
  int restarts = 16;
  double damping = 1e-3;
  double step_scale = 0.5;
  std::uint64_t seed = 0;

  /// Throws ParameterError on out-of-domain values.
  void validate() const;
};

struct IKSolution {
  JointState q;
  double position_error = 0.0;
  double orientation_error = 0.0;
  int iterations_used = 0;  // summed over all attempts
  int restart_index = 0;    // 0 for the mid-range attempt
};

// An empty `solution` means no in-limit collision-free configuration was found
// within the restart budget.
struct IKOutcome {
  std::optional<IKSolution> solution;
  int restarts_used = 0;  // attempts beyond the first
  int collision_rejections = 0;  // converged candidates discarded for self-collision

  bool found() const { return solution.has_value(); }
};

/// Start configuration of attempt restart_index: mid-range for 0, otherwise a
/// shifted Halton point over the limit box.
JointState restart_configuration(const KinematicChain& chain, std::uint64_t seed, int restart_index);

IKOutcome solve_ik(const KinematicChain& chain, const Posed& target, const IKConfig& config);

namespace detail {

/// Rows of the pose error that take part in the solve (linear xyz, angular xyz).
using TaskMask = Eigen::Matrix<bool, 6, 1>;

/// solve_ik restricted to a subset of task rows. Only used for reduced test chains.
IKOutcome solve_ik_masked(const KinematicChain& chain, const Posed& target, const IKConfig& config,
                          const TaskMask& mask);

}  // namespace detail

/// SplitMix64 finaliser; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace kdbench
