#include "kdbench/kd_metric.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace kdbench {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs fn(i) for every i in order on up to `workers` threads. Rethrows the first failure.
template <typename Fn>
void parallel_for(const std::vector<std::size_t>& order, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(order.size())));
  if (workers == 1) {
    for (std::size_t i : order) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t n = next++; n < order.size(); n = next++) {
      try {
        fn(order[n]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = order.size();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::pair<Eigen::Vector3d, Eigen::Vector3d> perpendicular_basis(const Eigen::Vector3d& axis) {
  int helper_axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(axis[i]) < std::abs(axis[helper_axis])) helper_axis = i;
  }
  const Eigen::Vector3d helper = Eigen::Vector3d::Unit(helper_axis);
  const Eigen::Vector3d e1 = (helper - axis * axis.dot(helper)).normalized();
  return {e1, axis.cross(e1)};
}

WorkspaceGrid generate_grid(double side_length, int resolution, const Eigen::Vector3d& axis_direction) {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw ParameterError("workspace side length must be positive");
  }
  if (resolution < 2) throw ParameterError("grid resolution must be at least 2");
  if (!axis_direction.allFinite() || std::abs(axis_direction.norm() - 1.0) > 1e-9) {
    throw ParameterError("workspace axis direction must be a unit vector");
  }

  WorkspaceGrid grid;
  grid.side_length = side_length;
  grid.resolution = resolution;
  grid.axis_direction = axis_direction;
  const auto [e1, e2] = perpendicular_basis(axis_direction);
  const double half = 0.5 * side_length;
  const double steps = resolution - 1;
  grid.points.reserve(static_cast<std::size_t>(resolution) * resolution * resolution);
  for (int i = 0; i < resolution; ++i) {
    const double a = side_length * i / steps;
    for (int j = 0; j < resolution; ++j) {
      const double b = -half + side_length * j / steps;
      for (int k = 0; k < resolution; ++k) {
        const double c = -half + side_length * k / steps;
        grid.points.push_back(a * axis_direction + b * e1 + c * e2);
      }
    }
  }
  return grid;
}

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::valid: return "valid";
    case PointStatus::near_singular: return "near_singular";
    case PointStatus::unreachable: return "unreachable";
  }
  return "unknown";
}

const char* to_string(SubCause s) {
  switch (s) {
    case SubCause::none: return "none";
    case SubCause::no_ik: return "no_ik";
    case SubCause::self_collision: return "self_collision";
  }
  return "unknown";
}

std::optional<PointStatus> point_status_from_string(const std::string& s) {
  for (auto v : {PointStatus::valid, PointStatus::near_singular, PointStatus::unreachable}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

std::optional<SubCause> sub_cause_from_string(const std::string& s) {
  for (auto v : {SubCause::none, SubCause::no_ik, SubCause::self_collision}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

void ClassifyConfig::validate() const {
  ik.validate();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be positive");
  if (!(limit_margin.value() >= 0.0) || !std::isfinite(limit_margin.value())) {
    throw ParameterError("limit margin must be non-negative");
  }
}

PointVerdict classify_point(const KinematicChain& chain, const Eigen::Vector3d& p,
                            const ClassifyConfig& config) {
  PointVerdict verdict;
  verdict.position = p;
  const Posed target = target_pose_for_point(p);
  const IKOutcome outcome = solve_ik(chain, target, config.ik);
  verdict.restarts_used = outcome.restarts_used;
  if (!outcome.found()) {
    verdict.status = PointStatus::unreachable;
    verdict.sub_cause = outcome.collision_rejections > 0 ? SubCause::self_collision : SubCause::no_ik;
    return verdict;
  }

  const JointState& q = outcome.solution->q;
  const SingularityVerdict screen =
      screen_singularity(chain, q, jacobian(chain, q), config.epsilon, config.limit_margin);
  verdict.sigma_min = screen.sigma_min;
  verdict.solution = q;
  verdict.sub_cause = SubCause::none;
  verdict.status = screen.near_singular ? PointStatus::near_singular : PointStatus::valid;
  return verdict;
}

std::uint64_t point_seed(std::uint64_t global_seed, std::size_t point_index) {
  return mix_seed(global_seed, static_cast<std::uint64_t>(point_index));
}

KDReport compute_kd(const KinematicChain& chain, const WorkspaceGrid& grid, const ClassifyConfig& config,
                    const EvalOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::size_t> order = options.order;
  if (order.empty()) {
    order.resize(grid.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  } else {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i || sorted.size() != grid.points.size()) {
        throw ParameterError("evaluation order must be a permutation of the grid indices");
      }
    }
  }

  std::vector<PointVerdict> verdicts(grid.points.size());
  parallel_for(order, options.workers, [&](std::size_t i) {
    Eigen::Vector3d p = grid.points[i];
    const bool nudged = p.norm() == 0.0;
    if (nudged) p += kOriginNudge * grid.axis_direction;
    ClassifyConfig local = config;
    local.ik.seed = point_seed(config.ik.seed, i);
    PointVerdict v = classify_point(chain, p, local);
    v.index = i;
    v.nudged = nudged;
    verdicts[i] = std::move(v);
  });

  KDReport report;
  report.chain_name = chain.name;
  report.dof = chain.dof();
  report.grid = {grid.side_length, grid.resolution, grid.axis_direction};
  report.config = config;
  report.n_total = verdicts.size();
  for (const auto& v : verdicts) {
    switch (v.status) {
      case PointStatus::valid: ++report.n_valid; break;
      case PointStatus::near_singular: ++report.n_singular; break;
      case PointStatus::unreachable: ++report.n_unreachable; break;
    }
  }
  report.kd = report.n_total == 0 ? 0.0
                                  : static_cast<double>(report.n_valid) / static_cast<double>(report.n_total);
  report.verdicts = std::move(verdicts);
  report.wall_time = seconds_since(start);
  return report;
}

Comparison compare_designs(const std::vector<KinematicChain>& chains, const GridSpec& grid_spec,
                           const ClassifyConfig& config, unsigned workers) {
  if (chains.empty()) throw ParameterError("compare_designs needs at least one chain");
  std::set<std::string> names;
  for (const auto& c : chains) {
    if (!names.insert(c.name).second) throw ParameterError("duplicate chain name '" + c.name + "'");
  }
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const WorkspaceGrid grid =
      generate_grid(grid_spec.side_length, grid_spec.resolution, grid_spec.axis_direction);

  Comparison out;
  for (const auto& chain : chains) {
    EvalOptions options;
    options.workers = workers;
    out.reports.push_back(compute_kd(chain, grid, config, options));
    const KDReport& r = out.reports.back();
    out.rows.push_back({r.chain_name, r.dof, r.kd, r.n_valid, r.n_singular, r.n_unreachable, r.n_total});
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.kd != b.kd) return a.kd > b.kd;
    return a.chain_name < b.chain_name;
  });
  out.wall_time = seconds_since(start);
  return out;
}

}  // namespace kdbench
