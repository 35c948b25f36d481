#include "kdbench/ik.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "kdbench/collision.hpp"
#include "kdbench/errors.hpp"
#include "kdbench/kinematics.hpp"

namespace kdbench {
namespace {

// A restart is abandoned once the error has not dropped by this fraction for kStallWindow steps.
constexpr double kStallImprovement = 1e-4;
constexpr int kStallWindow = 25;

std::vector<int> first_primes(std::size_t n) {
  std::vector<int> primes;
  for (int candidate = 2; primes.size() < n; ++candidate) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f /= base;
  }
  return result;
}

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

struct TaskError {
  Eigen::Matrix<double, 6, 1> e;
  double position = 0.0;
  double orientation = 0.0;
};

TaskError task_error(const Posed& target, const Posed& current, const detail::TaskMask& mask) {
  TaskError out;
  out.e.head<3>() = target.translation - current.translation;
  out.e.tail<3>() = rotation_log(Eigen::Matrix3d(target.rotation * current.rotation.transpose()));
  for (int r = 0; r < 6; ++r) {
    if (!mask[r]) out.e[r] = 0.0;
  }
  out.position = out.e.head<3>().norm();
  out.orientation = out.e.tail<3>().norm();
  return out;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void IKConfig::validate() const {
  if (!(position_tolerance > 0.0)) throw ParameterError("position_tolerance must be positive");
  if (!(orientation_tolerance > 0.0)) throw ParameterError("orientation_tolerance must be positive");
  if (max_iterations < 1) throw ParameterError("max_iterations must be at least 1");
  if (restarts < 1) throw ParameterError("restarts must be at least 1");
  if (!(damping > 0.0)) throw ParameterError("damping must be positive");
  if (!(step_scale > 0.0)) throw ParameterError("step_scale must be positive");
}

JointState restart_configuration(const KinematicChain& chain, std::uint64_t seed, int restart_index) {
  if (restart_index == 0) return mid_range(chain);
  const std::vector<int> primes = first_primes(chain.dof());
  JointState q(chain.dof());
  for (std::size_t d = 0; d < chain.dof(); ++d) {
    // Cranley-Patterson rotation of the Halton sequence, one shift per dimension.
    const double shift = unit_from_bits(mix_seed(seed, d));
    double u = radical_inverse(static_cast<std::uint64_t>(restart_index), primes[d]) + shift;
    u -= std::floor(u);
    const JointSpec& joint = chain.joints[d];
    q[static_cast<Eigen::Index>(d)] = joint.lower + u * joint.range();
  }
  return q;
}

namespace detail {

IKOutcome solve_ik_masked(const KinematicChain& chain, const Posed& target, const IKConfig& config,
                          const TaskMask& mask) {
  config.validate();
  if (!is_rotation(target.rotation, 1e-6) || !target.translation.allFinite()) {
    throw ParameterError("IK target is not a rigid transform");
  }

  IKOutcome outcome;
  int total_iterations = 0;
  for (int restart = 0; restart <= config.restarts; ++restart) {
    outcome.restarts_used = restart;
    JointState q = restart_configuration(chain, config.seed, restart);
    double best = std::numeric_limits<double>::infinity();
    int since_improvement = 0;

    for (int it = 0; it < config.max_iterations; ++it) {
      ++total_iterations;
      const ChainFrames frames = chain_frames(chain, q);
      const TaskError err = task_error(target, frames.tool, mask);

      if (err.position <= config.position_tolerance &&
          err.orientation <= config.orientation_tolerance) {
        if (check_self_collision(chain, q)) {
          ++outcome.collision_rejections;
          break;
        }
        outcome.solution = IKSolution{q, err.position, err.orientation, total_iterations, restart};
        return outcome;
      }

      const double norm = err.e.norm();
      if (norm < best * (1.0 - kStallImprovement)) {
        best = norm;
        since_improvement = 0;
      } else if (++since_improvement >= kStallWindow) {
        break;
      }

      Jacobian j = jacobian(chain, frames);
      for (int r = 0; r < 6; ++r) {
        if (!mask[r]) j.row(r).setZero();
      }
      // Joints pinned at a limit and pushed further out are frozen for this step.
      Eigen::VectorXd dq;
      for (std::size_t pass = 0; pass <= chain.dof(); ++pass) {
        Eigen::Matrix<double, 6, 6> jjt = j * j.transpose();
        jjt.diagonal().array() += config.damping;
        dq = j.transpose() * jjt.ldlt().solve(err.e);
        bool frozen = false;
        for (Eigen::Index k = 0; k < dq.size(); ++k) {
          const JointSpec& joint = chain.joints[static_cast<std::size_t>(k)];
          if ((q[k] <= joint.lower && dq[k] < 0.0) || (q[k] >= joint.upper && dq[k] > 0.0)) {
            j.col(k).setZero();
            frozen = true;
          }
        }
        if (!frozen) break;
      }
      q = clamp_to_limits(chain, q + config.step_scale * dq);
    }
  }
  return outcome;
}

}  // namespace detail

IKOutcome solve_ik(const KinematicChain& chain, const Posed& target, const IKConfig& config) {
  return detail::solve_ik_masked(chain, target, config, detail::TaskMask::Constant(true));
}

}  // namespace kdbench
