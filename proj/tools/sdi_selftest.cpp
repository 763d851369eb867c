// Copyright 2026 The sdi-selftest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sdi-selftest: command-line front end writing CSV tables and run manifests.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sdi/bounds.hpp"
#include "sdi/fidelity.hpp"
#include "sdi/io.hpp"
#include "sdi/parallel.hpp"
#include "sdi/sdp.hpp"
#include "sdi/seesaw.hpp"
#include "sdi/version.hpp"

namespace fs = std::filesystem;
using namespace sdi;
using io::json;
using scenario::Strategy;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw UsageError("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct Context {
  fs::path out_dir;
  int threads = 1;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  json parameters = json::object();

  fs::path output(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
};

Strategy ideal_for(const std::string& witness, const std::string& ideal_file) {
  if (!ideal_file.empty()) return io::strategy_from_json(io::read_json_file(ideal_file));
  auto s = io::builtin_ideal_strategy(witness);
  if (!s) throw UsageError("no builtin ideal strategy for " + witness + "; pass --ideal FILE");
  return *s;
}

// ---------------------------------------------------------------- subcommands

int cmd_bounds(Context& ctx, const std::string& strategy_spec, double q) {
  Strategy s = [&] {
    if (strategy_spec.rfind("builtin:", 0) == 0) return ideal_for(strategy_spec, "");
    return io::strategy_from_json(io::read_json_file(strategy_spec));
  }();
  Csv csv(ctx.output("bounds.csv"), {"bound", "value", "parameters"});
  int rows = 0;
  const int d = s.dim();
  const int nx = s.num_preparations();
  const int ny = s.num_measurements();
  bool binary = true;
  for (const auto& m : s.measurements()) binary = binary && m.num_outcomes() == 2;
  std::vector<quantum::Observable> obs;
  if (binary) {
    for (const auto& m : s.measurements()) obs.push_back(m.observable());
  }
  if (binary && (1 << ny) == nx && ny >= 2 && ny <= 8) {
    const auto w = scenario::make_rac_witness(ny);
    csv.row({"rac_value", num(scenario::witness_value(w, s)), "N=" + std::to_string(ny)});
    ++rows;
  }
  if (d == 2 && nx == 4) {
    const auto r = bounds::prep_compat_bound_2(s.preparations());
    csv.row({"prep_compat_bound_2", num(r.bound), "beta=" + num(r.beta) + ";alpha=" + num(r.alpha)});
    ++rows;
  }
  if (d == 2 && nx >= 4 && (nx & (nx - 1)) == 0) {
    const int n = static_cast<int>(std::lround(std::log2(nx)));
    csv.row({"prep_compat_bound_N", num(bounds::prep_compat_bound_N(s.preparations(), n)), "N=" + std::to_string(n)});
    ++rows;
  }
  if (d == 2 && binary && ny == 2) {
    const auto r = bounds::meas_compat_bound_2(obs[0], obs[1]);
    csv.row({"meas_compat_bound_2", num(r.bound),
             "mu=" + num(r.mu) + ";nu=" + num(r.nu) + ";eta_plus=" + num(r.eta_plus) + ";eta_minus=" + num(r.eta_minus)});
    csv.row({"biased_bound", num(bounds::biased_bound(q, obs[0], obs[1])), "q=" + num(q)});
    rows += 2;
  }
  if (d == 2 && binary && ny >= 2) {
    csv.row({"meas_compat_bound_N", num(bounds::meas_compat_bound_N(obs)), "N=" + std::to_string(ny)});
    ++rows;
  }
  if (d == 3 && binary && ny == 2) {
    if (const auto j = bounds::qutrit_jordan_form(obs[0], obs[1])) {
      csv.row({"qutrit_bound", num(bounds::qutrit_bound(j->alpha, j->r, j->s)),
               "alpha=" + num(j->alpha) + ";r=" + std::to_string(j->r) + ";s=" + std::to_string(j->s)});
      ++rows;
    }
  }
  if (rows == 0) throw UsageError("no bound applies to this strategy");
  std::cout << rows << " bound rows written to " << (ctx.out_dir / "bounds.csv").string() << '\n';
  return kExitOk;
}

int cmd_curve(Context& ctx, const std::string& which, int points, int restarts) {
  if (points < 2) throw UsageError("--points must be at least 2");
  Csv csv(ctx.output("curve_" + which + ".csv"), {"parameter", "A2", "F"});
  const double q = bounds::q2();
  for (int i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / (points - 1);
    if (which == "lower") {
      const double a = 0.75 + u * (q - 0.75);
      csv.row({num(a), num(a), num(fidelity::linear_lower_bound(a))});
    } else if (which == "upper-conjecture") {
      const double a = 0.75 + u * (q - 0.75);
      csv.row({num(a), num(a), num(fidelity::conjectured_upper_bound(a))});
    } else if (which == "states") {
      const double phi = u * std::numbers::pi / 4;
      const auto [a, f] = fidelity::conjectured_curve_states(phi);
      csv.row({num(phi), num(a), num(f)});
    } else {
      const double theta = u * std::numbers::pi / 8;
      const auto [a, f] = fidelity::conjectured_curve_meas(theta, restarts, ctx.seed);
      csv.row({num(theta), num(a), num(f)});
    }
  }
  std::cout << points << " points written to " << (ctx.out_dir / ("curve_" + which + ".csv")).string() << '\n';
  return kExitOk;
}

int cmd_seesaw(Context& ctx, const std::string& witness, int dim, int restarts, int max_iters) {
  if (dim < 1 || restarts < 1 || max_iters < 1) throw UsageError("--dim, --restarts and --max-iters must be positive");
  const auto w = io::load_witness(witness);
  quantum::Rng rng(ctx.seed);
  const auto r = seesaw::seesaw(w, dim, restarts, max_iters, rng, ctx.threads);
  Csv csv(ctx.output("seesaw.csv"), {"restart", "value"});
  for (std::size_t i = 0; i < r.restart_values.size(); ++i) csv.row({std::to_string(i), num(r.restart_values[i])});
  io::write_json_file(ctx.output("strategy.json"), io::to_json(r.best_strategy));
  std::cout << num(r.best_value) << '\n';
  return kExitOk;
}

int cmd_sweep(Context& ctx, const std::string& witness, const std::string& ideal_file, int samples, int restarts) {
  if (samples < 1 || restarts < 1) throw UsageError("--samples and --restarts must be positive");
  const auto w = io::load_witness(witness);
  const auto ideal = ideal_for(witness, ideal_file);
  quantum::Rng rng(ctx.seed);
  const auto pts = seesaw::region_sweep(w, ideal, samples, rng, ctx.threads, restarts);
  Csv csv(ctx.output("sweep.csv"), {"A2", "F_states", "F_meas"});
  for (const auto& p : pts) csv.row({num(p.a2), num(p.f_states), num(p.f_meas)});
  std::cout << pts.size() << " points written to " << (ctx.out_dir / "sweep.csv").string() << '\n';
  return kExitOk;
}

int cmd_sdp(Context& ctx, const std::string& witness, const std::string& ideal_file, double a_star, int grid, int dim) {
  if (grid < 1 || dim < 2) throw UsageError("--grid must be positive and --dim at least 2");
  const auto w = io::load_witness(witness);
  const auto ideal = ideal_for(witness, ideal_file);
  quantum::Rng rng(ctx.seed);
  sdp::SpanOptions span_opts;
  span_opts.threads = ctx.threads;
  const auto problem = sdp::build_swap_problem(w, ideal.preparations(), dim, rng, span_opts);

  std::vector<double> grid_points(grid, a_star);
  if (grid > 1) {
    const double lo = scenario::classical_bound(w, dim);
    for (int i = 0; i < grid; ++i) grid_points[i] = lo + (a_star - lo) * i / (grid - 1);
  }
  std::vector<sdp::SwapBoundResult> results(grid);
  std::vector<double> millis(grid);
  parallel_for(grid, ctx.threads, [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    results[i] = sdp::solve_swap(problem, grid_points[i]);
    millis[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  });
  Csv csv(ctx.output("sdp_fidelity.csv"), {"A_star", "bound", "gap", "rank", "solve_ms"});
  bool ok = true;
  for (int i = 0; i < grid; ++i) {
    const auto& r = results[i];
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", millis[i]);
    csv.row({num(r.a_star), num(r.bound), num(r.gap), std::to_string(r.rank), ms});
    if (r.status != sdp::SdpStatus::optimal) {
      ok = false;
      std::cerr << "A*=" << num(r.a_star) << ": solver status " << sdp::to_string(r.status) << '\n';
    }
  }
  if (grid == 1) std::cout << num(results[0].bound) << '\n';
  if (!ok) throw NumericalError("SDP did not reach an optimal status at every grid point");
  return kExitOk;
}

int cmd_verify(Context& ctx, const std::string& kind, const std::string& s_spec, int grid, double tol) {
  if (grid < 2) throw UsageError("--grid must be at least 2");
  double s = 0.0;
  if (s_spec == "auto") {
    s = fidelity::optimal_scale();
  } else {
    try {
      std::size_t used = 0;
      s = std::stod(s_spec, &used);
      if (used != s_spec.size()) throw std::invalid_argument(s_spec);
    } catch (const std::exception&) {
      throw UsageError("--s expects 'auto' or a number");
    }
  }
  const auto k = kind == "prep" ? fidelity::IneqKind::preparations : fidelity::IneqKind::measurements;
  const auto r = fidelity::sweep_inequalities(k, s, grid, tol);
  Csv csv(ctx.output("verify_" + kind + ".csv"), {"kind", "s", "points", "min_residual", "min_t", "argmin_theta", "holds"});
  csv.row({kind, num(s), std::to_string(r.points), num(r.min_residual), num(r.min_t), num(r.argmin_t),
           r.holds ? "true" : "false"});
  std::cout << (r.holds ? "PASS" : "FAIL") << " " << kind << " s=" << num(s) << " points=" << r.points
            << " min_residual=" << num(r.min_residual) << " min_t=" << num(r.min_t) << '\n';
  return r.holds ? kExitOk : kExitFail;
}

int cmd_classical(Context& ctx, const std::string& witness, int dim) {
  if (dim < 1) throw UsageError("--dim must be positive");
  const auto w = io::load_witness(witness);
  const double v = scenario::classical_bound(w, dim);
  Csv csv(ctx.output("classical.csv"), {"witness", "dim", "value"});
  csv.row({w.name(), std::to_string(dim), num(v)});
  std::cout << num(v) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- replay

// Drops the solve_ms column so timing does not count as a difference.
std::string comparable(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  if (path.filename() != "sdp_fidelity.csv") return ss.str();
  std::string out, line;
  while (std::getline(ss, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

int run(std::vector<std::string> args);

int replay(const std::string& manifest_path, const std::string& out_override) {
  const json m = io::read_json_file(manifest_path);
  if (!m.contains("argv") || !m.contains("outputs")) throw UsageError("not a run manifest: " + manifest_path);
  const fs::path original = fs::path(manifest_path).parent_path();
  const fs::path target = out_override.empty() ? original / "replay" : fs::path(out_override);
  if (fs::weakly_canonical(target) == fs::weakly_canonical(original)) {
    throw UsageError("replay output directory must differ from the original run");
  }
  std::vector<std::string> args{"--out", target.string()};
  for (const auto& a : m.at("argv")) args.push_back(a.get<std::string>());
  const int code = run(args);
  if (code != kExitOk) return code;
  int mismatches = 0;
  for (const auto& o : m.at("outputs")) {
    const std::string name = o.get<std::string>();
    if (comparable(original / name) != comparable(target / name)) {
      std::cerr << "replay mismatch: " << name << '\n';
      ++mismatches;
    }
  }
  std::cout << "replay: " << (m.at("outputs").size() - mismatches) << "/" << m.at("outputs").size()
            << " outputs identical\n";
  return mismatches == 0 ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------- driver

int run(std::vector<std::string> args) {
  CLI::App app{"Semi-device-independent self-testing toolkit for prepare-and-measure scenarios"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string out_dir = "out";
  int threads = 0;
  std::string replay_path;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (0: SDI_SELFTEST_THREADS or 1)");
  app.add_option("--replay", replay_path, "Re-run a manifest and compare its outputs");
  app.require_subcommand(0, 1);

  std::uint64_t seed = 1;
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", seed, "RNG seed")->capture_default_str(); };

  std::string strategy_spec;
  double bias_q = 0.5;
  auto* bounds_cmd = app.add_subcommand("bounds", "Compatibility bounds for a strategy file");
  bounds_cmd->add_option("--strategy", strategy_spec, "Strategy JSON file or builtin:rac2|builtin:example2")->required();
  bounds_cmd->add_option("--q", bias_q, "Bias for the biased-RAC bound")->capture_default_str();

  std::string which;
  int points = 101;
  int restarts = fidelity::kDefaultRestarts;
  auto* curve_cmd = app.add_subcommand("curve", "Fidelity curves: linear bound and conjectured tight curves");
  curve_cmd->add_option("--which", which, "Curve")
      ->required()
      ->check(CLI::IsMember({"lower", "states", "meas", "upper-conjecture"}));
  curve_cmd->add_option("--points", points, "Grid points")->capture_default_str();
  curve_cmd->add_option("--restarts", restarts, "Alignment restarts (meas curve)")->capture_default_str();
  add_seed(curve_cmd);

  std::string witness = "builtin:rac2";
  int dim = 2;
  int max_iters = seesaw::kMaxIters;
  auto* seesaw_cmd = app.add_subcommand("seesaw", "Seesaw lower bound on the quantum value");
  seesaw_cmd->add_option("--witness", witness, "builtin:NAME or witness JSON file")->capture_default_str();
  seesaw_cmd->add_option("--dim", dim, "Hilbert-space dimension")->capture_default_str();
  seesaw_cmd->add_option("--restarts", restarts, "Random restarts")->capture_default_str();
  seesaw_cmd->add_option("--max-iters", max_iters, "Iterations per restart")->capture_default_str();
  add_seed(seesaw_cmd);

  int samples = 2000;
  std::string ideal_file;
  auto* sweep_cmd = app.add_subcommand("sweep", "Random strategies: witness value against fidelities");
  sweep_cmd->add_option("--witness", witness, "builtin:NAME or witness JSON file")->capture_default_str();
  sweep_cmd->add_option("--ideal", ideal_file, "Ideal strategy JSON (default: builtin)");
  sweep_cmd->add_option("--samples", samples, "Random strategies")->capture_default_str();
  sweep_cmd->add_option("--restarts", restarts, "Alignment restarts")->capture_default_str();
  add_seed(sweep_cmd);

  double a_star = 0.0;
  int grid = 1;
  auto* sdp_cmd = app.add_subcommand("sdp-fidelity", "Swap-method SDP lower bound on the fidelity");
  sdp_cmd->add_option("--witness", witness, "builtin:rac2, builtin:example2 or witness JSON file")->capture_default_str();
  sdp_cmd->add_option("--ideal", ideal_file, "Ideal strategy JSON (default: builtin)");
  sdp_cmd->add_option("--a-star", a_star, "Witness value A*")->required();
  sdp_cmd->add_option("--grid", grid, "Grid points from the classical bound up to A*")->capture_default_str();
  sdp_cmd->add_option("--dim", dim, "Dimension of sampled realizations")->capture_default_str();
  add_seed(sdp_cmd);

  std::string ineq;
  std::string s_spec = "auto";
  int verify_grid = 721;
  double tol = 1e-9;
  auto* verify_cmd = app.add_subcommand("verify", "Sweep the operator inequalities over the angle grid");
  verify_cmd->add_option("--ineq", ineq, "Inequality family")->required()->check(CLI::IsMember({"prep", "meas"}));
  verify_cmd->add_option("--s", s_spec, "Scale: auto or a number")->capture_default_str();
  verify_cmd->add_option("--grid", verify_grid, "Angles in [0, pi/2]")->capture_default_str();
  verify_cmd->add_option("--tol", tol, "Eigenvalue tolerance")->capture_default_str();

  auto* classical_cmd = app.add_subcommand("classical", "Exact classical bound by enumeration");
  classical_cmd->add_option("--witness", witness, "builtin:NAME or witness JSON file")->capture_default_str();
  classical_cmd->add_option("--dim", dim, "Message alphabet size")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!replay_path.empty()) {
      if (!app.get_subcommands().empty()) throw UsageError("--replay takes no subcommand");
      return replay(replay_path, app.get_option("--out")->count() ? out_dir : "");
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kExitUsage;
    }
    CLI::App* sub = app.get_subcommands().front();
    Context ctx;
    ctx.out_dir = out_dir;
    ctx.threads = resolve_threads(threads);
    ctx.seed = seed;
    fs::create_directories(ctx.out_dir);

    // Subcommand arguments without the global output and thread flags.
    std::vector<std::string> replay_args;
    bool in_sub = false;
    for (const auto& a : args) {
      if (a == sub->get_name()) in_sub = true;
      if (in_sub) replay_args.push_back(a);
    }

    const auto t0 = std::chrono::steady_clock::now();
    int code = kExitOk;
    const std::string name = sub->get_name();
    if (name == "bounds") code = cmd_bounds(ctx, strategy_spec, bias_q);
    else if (name == "curve") code = cmd_curve(ctx, which, points, restarts);
    else if (name == "seesaw") code = cmd_seesaw(ctx, witness, dim, restarts, max_iters);
    else if (name == "sweep") code = cmd_sweep(ctx, witness, ideal_file, samples, restarts);
    else if (name == "sdp-fidelity") code = cmd_sdp(ctx, witness, ideal_file, a_star, grid, dim);
    else if (name == "verify") code = cmd_verify(ctx, ineq, s_spec, verify_grid, tol);
    else if (name == "classical") code = cmd_classical(ctx, witness, dim);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json params = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_name().empty() || opt->get_name() == "--help") continue;
      const auto results = opt->results();
      params[opt->get_name()] = results.empty() ? opt->get_default_str() : results.back();
    }
    const json manifest{{"subcommand", name},       {"parameters", params},
                        {"seed", seed},             {"tool_version", kVersion},
                        {"wall_time_s", wall},      {"threads", ctx.threads},
                        {"outputs", ctx.outputs},   {"argv", replay_args},
                        {"exit_code", code}};
    io::write_json_file(ctx.out_dir / "manifest.json", manifest);
    return code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const BudgetError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }
