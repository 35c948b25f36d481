// kdbench: kinematic dexterity evaluation for two-gripper serial chains.
//
// Exit codes: 0 success, 1 input/IO failure, 2 invalid parameters.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "kdbench/chain_io.hpp"
#include "kdbench/kd_metric.hpp"
#include "kdbench/report_io.hpp"
#include "kdbench/svg_plot.hpp"

namespace {

using namespace kdbench;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitParam = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalArgs {
  double side = 0.2;
  int resolution = 9;
  double epsilon = 1e-2;
  double margin_frac = 0.02;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string axis = "+x";
  int restarts = IKConfig{}.restarts;
  int max_iterations = IKConfig{}.max_iterations;
  std::string out;
};

void add_eval_flags(CLI::App* cmd, EvalArgs& a) {
  cmd->add_option("--side", a.side, "Cube side length in meters")->capture_default_str();
  cmd->add_option("--resolution", a.resolution, "Grid points per axis")->capture_default_str();
  cmd->add_option("--epsilon", a.epsilon, "Singular value threshold")->capture_default_str();
  cmd->add_option("--limit-margin-frac", a.margin_frac, "Near-limit margin as a fraction of joint range")
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Global seed")->capture_default_str();
  cmd->add_option("--workers", a.workers, "Worker threads (default: all cores)");
  cmd->add_option("--axis", a.axis, "Cube axis direction")
      ->check(CLI::IsMember({"+x", "-x", "+y", "-y", "+z", "-z"}))
      ->capture_default_str();
  cmd->add_option("--restarts", a.restarts, "IK restarts per point after the mid-range attempt")->capture_default_str();
  cmd->add_option("--max-iterations", a.max_iterations, "IK iterations per attempt")->capture_default_str();
  cmd->add_option("--out", a.out, "Output document path");
}

Eigen::Vector3d axis_vector(const std::string& axis) {
  const double sign = axis[0] == '-' ? -1.0 : 1.0;
  const int i = axis[1] - 'x';
  return sign * Eigen::Vector3d::Unit(i);
}

ClassifyConfig make_config(const EvalArgs& a) {
  ClassifyConfig c;
  c.ik.restarts = a.restarts;
  c.ik.max_iterations = a.max_iterations;
  c.ik.seed = a.seed;
  c.epsilon = a.epsilon;
  c.limit_margin = LimitMargin::fraction_of_range(a.margin_frac);
  c.validate();
  if (!(a.side > 0.0)) throw ParameterError("--side must be positive");
  if (a.resolution < 2) throw ParameterError("--resolution must be at least 2");
  return c;
}

GridSpec make_grid(const EvalArgs& a) { return {a.side, a.resolution, axis_vector(a.axis)}; }

unsigned worker_count(const EvalArgs& a) {
  if (a.workers > 0) return a.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

RunManifest make_manifest(const std::string& subcommand, const std::vector<std::string>& inputs,
                          const EvalArgs& a) {
  RunManifest m;
  m.subcommand = subcommand;
  m.inputs = inputs;
  m.parameters["side"] = a.side;
  m.parameters["resolution"] = a.resolution;
  m.parameters["axis"] = a.axis;
  m.parameters["epsilon"] = a.epsilon;
  m.parameters["limit_margin_frac"] = a.margin_frac;
  m.parameters["restarts"] = a.restarts;
  m.parameters["max_iterations"] = a.max_iterations;
  m.seed = a.seed;
  if (!a.out.empty()) m.outputs.push_back(a.out);
  return m;
}

KinematicChain load_chain(const std::string& path) {
  try {
    return load_chain_file(path);
  } catch (const ChainParseError& e) {
    std::ostringstream msg;
    msg << path << ": " << e.what();
    for (const auto& d : e.diagnostics()) msg << "\n  " << d.field << ": " << d.message;
    throw InputError(msg.str());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw InputError("failed writing '" + path + "'");
}

bool use_color() { return std::getenv("KDBENCH_NO_COLOR") == nullptr && ::isatty(STDOUT_FILENO) == 1; }

int run_kd(const EvalArgs& a, const std::string& chain_path) {
  const ClassifyConfig config = make_config(a);
  const GridSpec spec = make_grid(a);
  const KinematicChain chain = load_chain(chain_path);
  const WorkspaceGrid grid = generate_grid(spec.side_length, spec.resolution, spec.axis_direction);
  EvalOptions options;
  options.workers = worker_count(a);
  const KDReport report = compute_kd(chain, grid, config, options);
  if (!a.out.empty()) write_file(a.out, serialize_kd_report(report, make_manifest("kd", {chain_path}, a)));
  std::cout << format_summary_line(report) << "\n";
  return kExitOk;
}

int run_compare(const EvalArgs& a, const std::vector<std::string>& chain_paths) {
  const ClassifyConfig config = make_config(a);
  const GridSpec spec = make_grid(a);
  std::vector<KinematicChain> chains;
  for (const auto& path : chain_paths) chains.push_back(load_chain(path));
  for (std::size_t i = 0; i < chains.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (chains[i].name == chains[j].name) {
        throw ParameterError("duplicate chain name '" + chains[i].name + "' (" + chain_paths[j] + ", " +
                             chain_paths[i] + ")");
      }
    }
  }
  const Comparison comparison = compare_designs(chains, spec, config, worker_count(a));
  if (!a.out.empty()) {
    write_file(a.out, serialize_comparison(comparison, make_manifest("compare", chain_paths, a)));
  }
  std::cout << format_comparison_table(comparison, use_color());
  return kExitOk;
}

int run_plot(const std::string& report_path, const std::string& axis, int slice_index, const std::string& out) {
  KDReport report;
  try {
    report = parse_kd_report(read_file(report_path));
  } catch (const ReportParseError& e) {
    throw InputError(report_path + ": " + e.what());
  }
  const auto slice_axis = slice_axis_from_string(axis);
  if (!slice_axis) throw ParameterError("--slice-axis must be x, y or z");
  RunManifest manifest;
  manifest.subcommand = "plot";
  manifest.inputs = {report_path};
  manifest.parameters["slice_axis"] = axis;
  manifest.parameters["slice_index"] = slice_index;
  manifest.seed = report.config.ik.seed;
  manifest.outputs = {out};
  const std::string svg = render_slice_svg(report, *slice_axis, slice_index, manifest);
  write_file(out, svg);
  return kExitOk;
}

int run_validate(const std::vector<std::string>& paths) {
  int status = kExitOk;
  for (const auto& path : paths) {
    try {
      const KinematicChain chain = parse_chain_unchecked(read_file(path));
      const auto diags = validate_chain(chain);
      if (diags.empty()) {
        std::cout << path << ": ok (" << chain.name << ", " << chain.dof() << " joints, "
                  << chain.capsules.size() << " capsules)\n";
      } else {
        status = kExitInput;
        for (const auto& d : diags) {
          std::cerr << path << ": " << d.field << ": [" << to_string(d.kind) << "] " << d.message << "\n";
        }
      }
    } catch (const ChainParseError& e) {
      status = kExitInput;
      std::cerr << path << ": " << e.what() << "\n";
    } catch (const InputError& e) {
      status = kExitInput;
      std::cerr << e.what() << "\n";
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematic dexterity analysis for bimanual serial chains"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  EvalArgs kd_args;
  std::string kd_chain;
  auto* kd = app.add_subcommand("kd", "Compute the KD score of one chain");
  kd->add_option("--chain", kd_chain, "Chain description file")->required();
  add_eval_flags(kd, kd_args);

  EvalArgs cmp_args;
  std::vector<std::string> cmp_chains;
  auto* compare = app.add_subcommand("compare", "Compare several chains on the same grid");
  compare->add_option("--chain", cmp_chains, "Chain description file (repeatable)")->required();
  add_eval_flags(compare, cmp_args);

  std::string plot_report, plot_axis = "z", plot_out;
  int plot_index = 0;
  auto* plot = app.add_subcommand("plot", "Render one grid slice of a KD report as SVG");
  plot->add_option("--report", plot_report, "KD report document")->required();
  plot->add_option("--slice-axis", plot_axis, "Grid axis held fixed")
      ->check(CLI::IsMember({"x", "y", "z"}))
      ->capture_default_str();
  plot->add_option("--slice-index", plot_index, "Index along the slice axis")->capture_default_str();
  plot->add_option("--out", plot_out, "SVG output path")->required();

  std::vector<std::string> lint_chains;
  auto* validate = app.add_subcommand("validate", "Check chain description files");
  validate->add_option("--chain,chains", lint_chains, "Chain description file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParam;
  }

  try {
    if (*kd) return run_kd(kd_args, kd_chain);
    if (*compare) return run_compare(cmp_args, cmp_chains);
    if (*plot) return run_plot(plot_report, plot_axis, plot_index, plot_out);
    if (*validate) return run_validate(lint_chains);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParam;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitParam;
}
