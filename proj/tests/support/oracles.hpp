#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check: forward kinematics is redone with 4x4 homogeneous
// products and an explicit Rodrigues formula, Jacobians come from central
// differences, distances from dense sampling, reachability from joint-grid
// enumeration followed by a finite-difference Levenberg-Marquardt polish.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kdbench/chain.hpp"
#include "kdbench/chain_io.hpp"
#include "kdbench/collision.hpp"

#ifndef KDBENCH_CHAIN_DIR
#error "KDBENCH_CHAIN_DIR must be defined by the build"
#endif

namespace oracle {

using kdbench::JointState;
using kdbench::KinematicChain;

inline std::string chain_path(const std::string& file) { return std::string(KDBENCH_CHAIN_DIR) + "/" + file; }
inline std::string data_path(const std::string& file) { return std::string(KDBENCH_TEST_DATA_DIR) + "/" + file; }

inline KinematicChain bundled(const std::string& name) { return kdbench::load_chain_file(chain_path(name + ".json")); }

inline const std::vector<std::string>& bundled_names() {
  static const std::vector<std::string> names{"minibee6", "minibee7", "minibee8", "aloha12"};
  return names;
}

inline Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

inline Eigen::Matrix4d homogeneous(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = r;
  m.topRightCorner<3, 1>() = t;
  return m;
}

// World transform of every joint frame; element k is the frame of joint k.
inline std::vector<Eigen::Matrix4d> joint_transforms(const KinematicChain& chain, const JointState& q) {
  std::vector<Eigen::Matrix4d> out;
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  for (std::size_t k = 0; k < chain.dof(); ++k) {
    const auto& j = chain.joints[k];
    t = t * homogeneous(j.origin.rotation, j.origin.translation) *
        homogeneous(rodrigues(j.axis, q[static_cast<Eigen::Index>(k)]), Eigen::Vector3d::Zero());
    out.push_back(t);
  }
  return out;
}

inline Eigen::Matrix4d tool_transform(const KinematicChain& chain, const JointState& q) {
  const auto frames = joint_transforms(chain, q);
  const Eigen::Matrix4d last = frames.empty() ? Eigen::Matrix4d::Identity() : frames.back();
  return last * homogeneous(chain.tip_offset.rotation, chain.tip_offset.translation);
}

inline Eigen::Vector3d vee(const Eigen::Matrix3d& s) {
  return {0.5 * (s(2, 1) - s(1, 2)), 0.5 * (s(0, 2) - s(2, 0)), 0.5 * (s(1, 0) - s(0, 1))};
}

// Central-difference geometric Jacobian (linear rows, then angular rows).
inline Eigen::MatrixXd fd_jacobian(const KinematicChain& chain, const JointState& q, double h) {
  Eigen::MatrixXd j(6, static_cast<Eigen::Index>(chain.dof()));
  const Eigen::Matrix3d r0 = tool_transform(chain, q).topLeftCorner<3, 3>();
  for (Eigen::Index k = 0; k < j.cols(); ++k) {
    JointState qp = q, qm = q;
    qp[k] += h;
    qm[k] -= h;
    const Eigen::Matrix4d tp = tool_transform(chain, qp);
    const Eigen::Matrix4d tm = tool_transform(chain, qm);
    j.block<3, 1>(0, k) = (tp.topRightCorner<3, 1>() - tm.topRightCorner<3, 1>()) / (2 * h);
    const Eigen::Matrix3d rdot = (tp.topLeftCorner<3, 3>() - tm.topLeftCorner<3, 3>()) / (2 * h);
    j.block<3, 1>(3, k) = vee(rdot * r0.transpose());
  }
  return j;
}

inline JointState random_in_limits(const KinematicChain& chain, std::mt19937_64& rng) {
  JointState q(chain.dof());
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    q[static_cast<Eigen::Index>(i)] =
        std::uniform_real_distribution<double>(chain.joints[i].lower, chain.joints[i].upper)(rng);
  }
  return q;
}

inline JointState random_collision_free(const KinematicChain& chain, std::mt19937_64& rng) {
  for (;;) {
    JointState q = random_in_limits(chain, rng);
    if (!kdbench::check_self_collision(chain, q)) return q;
  }
}

inline double point_segment(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d d = b - a;
  const double l2 = d.squaredNorm();
  const double t = l2 == 0.0 ? 0.0 : std::clamp((p - a).dot(d) / l2, 0.0, 1.0);
  return (a + t * d - p).norm();
}

// Plain n x n grid over both segment parameters.
inline double grid_segment_distance(const Eigen::Vector3d& a0, const Eigen::Vector3d& a1,
                                    const Eigen::Vector3d& b0, const Eigen::Vector3d& b1, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d pa = a0 + (a1 - a0) * (double(i) / (n - 1));
    for (int k = 0; k < n; ++k) {
      const Eigen::Vector3d pb = b0 + (b1 - b0) * (double(k) / (n - 1));
      best = std::min(best, (pa - pb).squaredNorm());
    }
  }
  return std::sqrt(best);
}

// Dense sampling of segment A (1000 samples, then 1000 more around the best
// sample) with the exact point-to-segment distance to B at each sample. The
// distance is convex in the parameter along A, so the bracket refinement is sound.
inline double sampled_segment_distance(const Eigen::Vector3d& a0, const Eigen::Vector3d& a1,
                                       const Eigen::Vector3d& b0, const Eigen::Vector3d& b1) {
  constexpr int n = 1000;
  auto at = [&](double s) { return point_segment(a0 + s * (a1 - a0), b0, b1); };
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    const double d = at(double(i) / (n - 1));
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  const double lo = std::max(0.0, double(best_i - 1) / (n - 1));
  const double hi = std::min(1.0, double(best_i + 1) / (n - 1));
  for (int i = 0; i < n; ++i) best = std::min(best, at(lo + (hi - lo) * i / (n - 1)));
  return best;
}

struct ReachResult {
  bool reachable = false;
  // Best tolerance ratio max(pos_err / pos_tol, ori_err / ori_tol) over collision-free candidates.
  double best_ratio = std::numeric_limits<double>::infinity();
  JointState q;
};

inline std::pair<double, double> pose_errors(const Eigen::Matrix4d& t, const Eigen::Matrix3d& target_r,
                                             const Eigen::Vector3d& target_p) {
  const double pos = (t.topRightCorner<3, 1>() - target_p).norm();
  const Eigen::Matrix3d rel = target_r * t.topLeftCorner<3, 3>().transpose();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double s = vee(rel).norm();
  return {pos, std::atan2(s, c)};
}

/**
 * Exhaustive reachability check for small chains. Enumerates `per_joint`
 * values per joint (limits included), keeps the `seeds` configurations with the
 * lowest weighted pose error, and polishes each with box-clamped
 * Levenberg-Marquardt on a finite-difference Jacobian.
 */
inline ReachResult brute_force_reach(const KinematicChain& chain, const Eigen::Matrix3d& target_r,
                                     const Eigen::Vector3d& target_p, double pos_tol, double ori_tol,
                                     int per_joint = 15, std::size_t seeds = 40) {
  const std::size_t dof = chain.dof();
  constexpr double w = 0.1;  // m per rad in the residual
  auto residual = [&](const JointState& q) {
    const Eigen::Matrix4d t = tool_transform(chain, q);
    Eigen::Matrix<double, 6, 1> r;
    r.head<3>() = target_p - t.topRightCorner<3, 1>();
    const Eigen::Matrix3d rel = target_r * t.topLeftCorner<3, 3>().transpose();
    const auto [pos, ang] = pose_errors(t, target_r, target_p);
    (void)pos;
    const Eigen::Vector3d v = vee(rel);
    r.tail<3>() = v.norm() > 1e-15 ? Eigen::Vector3d(w * ang * v.normalized()) : Eigen::Vector3d::Zero();
    return r;
  };

  std::vector<std::pair<double, JointState>> best;
  std::size_t total = 1;
  for (std::size_t i = 0; i < dof; ++i) total *= static_cast<std::size_t>(per_joint);
  JointState q(dof);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (std::size_t i = 0; i < dof; ++i) {
      const int k = static_cast<int>(rem % per_joint);
      rem /= per_joint;
      const auto& j = chain.joints[i];
      q[static_cast<Eigen::Index>(i)] = j.lower + (j.upper - j.lower) * k / (per_joint - 1);
    }
    const double score = residual(q).norm();
    if (best.size() < seeds || score < best.back().first) {
      best.emplace_back(score, q);
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (best.size() > seeds) best.pop_back();
    }
  }

  ReachResult result;
  for (auto& [score, q0] : best) {
    JointState qc = q0;
    double mu = 1e-3;
    Eigen::Matrix<double, 6, 1> r = residual(qc);
    for (int it = 0; it < 300 && r.norm() > 1e-12; ++it) {
      Eigen::MatrixXd j(6, static_cast<Eigen::Index>(dof));
      for (Eigen::Index k = 0; k < j.cols(); ++k) {
        JointState qp = qc, qm = qc;
        qp[k] += 1e-7;
        qm[k] -= 1e-7;
        j.col(k) = -(residual(qp) - residual(qm)) / 2e-7;
      }
      const Eigen::MatrixXd a = j.transpose() * j + mu * Eigen::MatrixXd::Identity(j.cols(), j.cols());
      const Eigen::VectorXd step = a.ldlt().solve(j.transpose() * r);
      JointState trial = kdbench::clamp_to_limits(chain, qc + step);
      const auto rt = residual(trial);
      if (rt.norm() < r.norm()) {
        qc = trial;
        r = rt;
        mu = std::max(mu * 0.3, 1e-12);
      } else {
        mu *= 10.0;
        if (mu > 1e6) break;
      }
    }
    if (kdbench::check_self_collision(chain, qc)) continue;
    const auto [pos, ang] = pose_errors(tool_transform(chain, qc), target_r, target_p);
    const double ratio = std::max(pos / pos_tol, ang / ori_tol);
    if (ratio < result.best_ratio) {
      result.best_ratio = ratio;
      result.q = qc;
    }
  }
  result.reachable = result.best_ratio <= 1.0;
  return result;
}

}  // namespace oracle
