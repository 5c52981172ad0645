// polydist command-line front end.
//
// Subcommands:
//   solve            bound the farthest distance for one instance document
//   hypercube-batch  seeded unit-cube experiment sweep with closed-form oracle
//   ssp              subset-sum decision through the distance encoding
//   plot2d           layered SVG + primitive CSV for 2-d instances
//
// Exit codes: 0 success, 1 invalid input, 2 solver indeterminate.
//
// Configuration: a `key value` file supplies defaults below instance-document
// overrides and explicit flags. The path is `polydist.cfg` in the working
// directory unless POLYDIST_CONFIG or --config points elsewhere; only the
// --config path is required to exist.

#include "CLI11.hpp"
#include "polydist/polydist.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace polydist;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitIndeterminate = 2;

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Values a user can set below the command line: config file or instance doc.
struct Overrides {
  std::optional<double> rho;
  std::optional<double> tol;
  std::optional<double> tol_feas;
  std::optional<int> max_iters;
  std::optional<int> max_generations;
  std::optional<std::pair<double, double>> bracket;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

// hi wins field-by-field.
Overrides merge(Overrides hi, const Overrides& lo) {
  if (!hi.rho) hi.rho = lo.rho;
  if (!hi.tol) hi.tol = lo.tol;
  if (!hi.tol_feas) hi.tol_feas = lo.tol_feas;
  if (!hi.max_iters) hi.max_iters = lo.max_iters;
  if (!hi.max_generations) hi.max_generations = lo.max_generations;
  if (!hi.bracket) hi.bracket = lo.bracket;
  if (!hi.seed) hi.seed = lo.seed;
  if (!hi.jobs) hi.jobs = lo.jobs;
  return hi;
}

SolveOptions to_solve_options(const Overrides& eff) {
  SolveOptions opts;
  if (eff.tol) opts.solver.tol_obj = *eff.tol;
  if (eff.tol_feas) opts.solver.tol_feas = *eff.tol_feas;
  if (eff.max_iters) opts.solver.max_iters = *eff.max_iters;
  if (eff.max_generations) opts.max_generations = *eff.max_generations;
  if (eff.bracket) opts.bracket = *eff.bracket;
  return opts;
}

std::optional<std::pair<double, double>> parse_bracket_text(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == text.size()) return std::nullopt;
  try {
    std::size_t p1 = 0;
    std::size_t p2 = 0;
    const std::string lo_s = text.substr(0, comma);
    const std::string hi_s = text.substr(comma + 1);
    const double lo = std::stod(lo_s, &p1);
    const double hi = std::stod(hi_s, &p2);
    if (p1 != lo_s.size() || p2 != hi_s.size()) return std::nullopt;
    return std::make_pair(lo, hi);
  } catch (...) {
    return std::nullopt;
  }
}

// explicit_path: from --config; must be readable when non-empty.
Overrides load_config(const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv("POLYDIST_CONFIG"))
      path = env;
    else
      path = "polydist.cfg";
  }
  std::ifstream in(path);
  if (!in) {
    if (!explicit_path.empty())
      throw std::invalid_argument("config file not readable: " + path);
    return {};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto kv = parse_key_values(buf.str());

  Overrides out;
  for (const auto& [key, value] : kv) {
    try {
      if (key == "rho")
        out.rho = std::stod(value);
      else if (key == "tol")
        out.tol = std::stod(value);
      else if (key == "tol_feas")
        out.tol_feas = std::stod(value);
      else if (key == "max_iters")
        out.max_iters = std::stoi(value);
      else if (key == "max_generations")
        out.max_generations = std::stoi(value);
      else if (key == "bracket") {
        auto br = parse_bracket_text(value);
        if (!br) throw std::invalid_argument("");
        out.bracket = br;
      } else if (key == "seed")
        out.seed = static_cast<std::uint64_t>(std::stoull(value));
      else if (key == "jobs")
        out.jobs = std::stoi(value);
      else
        std::cerr << "warning: ignoring unknown config key '" << key << "' in " << path << "\n";
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("config key '" + key + "' has unparseable value '" + value +
                                  "' in " + path);
    }
  }
  return out;
}

Overrides doc_overrides(const InstanceDoc& doc) {
  Overrides out;
  out.tol = doc.tol;
  out.tol_feas = doc.tol_feas;
  out.max_iters = doc.max_iters;
  out.max_generations = doc.max_generations;
  out.bracket = doc.bracket;
  return out;
}

int default_max_generations(const CircumscribedFrame& frame) {
  const double c_dist = (frame.C - frame.C0).norm();
  return 50 * (1 + static_cast<int>(std::ceil(c_dist / frame.rho)));
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

// Deterministic key,value rendering of a report; timings stay out so the
// bytes depend only on instance + flags.
std::string report_csv(const BoundsReport& report) {
  std::string out = "key,value\n";
  out += "upper_bound," + format_double(report.upper_bound) + "\n";
  out += "lower_bound," + format_double(report.lower_bound) + "\n";
  out += "y_star," + csv_quote(report.y_star.size() ? format_vec(report.y_star) : "[]") + "\n";
  out += "x_lb," + csv_quote(report.x_lb.size() ? format_vec(report.x_lb) : "[]") + "\n";
  out += std::string("on_sphere,") + (report.on_sphere ? "true" : "false") + "\n";
  out += "generations_used," + std::to_string(report.generations_used) + "\n";
  out += "exit_generation," +
         (report.chain_exited ? std::to_string(report.generations_used) : std::string("none")) +
         "\n";
  out += std::string("chain_exited,") + (report.chain_exited ? "true" : "false") + "\n";
  out += std::string("indeterminate,") + (report.indeterminate ? "true" : "false") + "\n";
  out += "fixed_point_residual," + format_double(report.fixed_point_residual) + "\n";
  out += "feasibility_probes," + std::to_string(report.feasibility_probes) + "\n";
  return out;
}

std::string oracle_lines(const HPolytope& P, const Vec& C0, const BoundsReport& report) {
  std::string out;
  try {
    auto [vertex, dist] = brute_maxdist(P, C0);
    out += "oracle_distance " + format_double(dist) + "\n";
    out += "oracle_vertex " + format_vec(vertex) + "\n";
    out += "upper_minus_oracle " + format_double(report.upper_bound - dist) + "\n";
    out += "oracle_minus_lower " + format_double(dist - report.lower_bound) + "\n";
  } catch (const std::exception& e) {
    out += std::string("oracle unavailable: ") + e.what() + "\n";
  }
  return out;
}

int solve_exit_code(const BoundsReport& report) {
  return (report.indeterminate || !report.chain_exited) ? kExitIndeterminate : kExitOk;
}

// ---------------------------------------------------------------- solve ----

struct SolveArgs {
  std::string instance_path;
  std::string config_path;
  std::string emit_csv;
  std::string emit_svg;
  bool oracle = false;
  Overrides cli;
};

int run_solve(const SolveArgs& args) {
  const Overrides cfg = load_config(args.config_path);
  const InstanceDoc doc = load_instance(args.instance_path);
  const Overrides eff = merge(args.cli, merge(doc_overrides(doc), cfg));

  CircumscribedFrame frame = doc.frame();
  if (eff.rho) frame.rho = *eff.rho;
  const SolveOptions opts = to_solve_options(eff);

  const auto t0 = Clock::now();
  const BoundsReport report = solve(doc.P, frame, opts);
  const double wall = ms_since(t0);

  std::string text = render_report(report, wall);
  if (args.oracle) text += oracle_lines(doc.P, doc.C0, report);
  std::cout << text;

  if (!args.emit_csv.empty()) atomic_write(args.emit_csv, report_csv(report));
  if (!args.emit_svg.empty()) {
    if (doc.P.dim() != 2)
      throw std::invalid_argument("--emit-svg requires a 2-d instance");
    const int max_gens = opts.max_generations > 0 ? opts.max_generations
                                                  : default_max_generations(frame);
    const CenterChain chain = build_chain(doc.P, frame, max_gens, opts.solver);
    PlotOptions plot_opts;
    plot_opts.R = report.upper_bound;
    atomic_write(args.emit_svg, render_plot2d(doc.P, frame, chain, plot_opts).svg);
  }
  return solve_exit_code(report);
}

// ------------------------------------------------------ hypercube-batch ----

struct BatchArgs {
  std::vector<int> dims;
  int seeds = 1;
  int max_n = 100;
  std::string config_path;
  std::string emit_csv;  // output prefix or summary path
  bool oracle = false;   // adds a vertex-enumeration cross-check when n <= 12
  Overrides cli;
};

struct BatchRun {
  int n = 0;
  int seed_index = 0;
  std::uint64_t run_seed = 0;
  double oracle_dist = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool on_sphere = false;
  bool chain_exited = false;
  bool indeterminate = false;
  int generations = 0;
  long probes = 0;
  double max_entry_error = 0.0;
  std::vector<double> entry_errors;
  Vec x_lb;
  Vec oracle_vertex;
  double brute_gap = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  bool failed = false;
  std::string note;
};

HPolytope unit_box(int n) {
  Mat A = Mat::Zero(2 * n, n);
  Vec b(2 * n);
  for (int j = 0; j < n; ++j) {
    A(2 * j, j) = 1.0;
    b(2 * j) = -1.0;
    A(2 * j + 1, j) = -1.0;
    b(2 * j + 1) = 0.0;
  }
  return HPolytope{A, b};
}

void compute_batch_run(BatchRun& run, const Overrides& eff, bool with_brute) {
  const auto t0 = Clock::now();
  try {
    const int n = run.n;
    SplitMix64 rng(run.run_seed);
    Vec C0(n);
    for (int j = 0; j < n; ++j) C0(j) = rng.uniform();

    const HPolytope P = unit_box(n);
    const Vec C = Vec::Constant(n, 0.5);
    const double R_circ = 0.5 * std::sqrt(static_cast<double>(n));
    CircumscribedFrame frame{C, R_circ, C0, eff.rho ? *eff.rho : 3.0 * R_circ};
    const SolveOptions opts = to_solve_options(eff);

    const BoundsReport report = solve(P, frame, opts);

    auto [vertex, dist] = hypercube_farthest(C0);
    run.oracle_dist = dist;
    run.oracle_vertex = vertex;
    run.lower = report.lower_bound;
    run.upper = report.upper_bound;
    run.on_sphere = report.on_sphere;
    run.chain_exited = report.chain_exited;
    run.indeterminate = report.indeterminate;
    run.generations = report.generations_used;
    run.probes = report.feasibility_probes;
    run.x_lb = report.x_lb;
    run.entry_errors.resize(n);
    for (int j = 0; j < n; ++j) {
      run.entry_errors[j] = std::abs(report.x_lb(j) - vertex(j));
      run.max_entry_error = std::max(run.max_entry_error, run.entry_errors[j]);
    }
    if (with_brute && n <= 12) {
      auto [bv, bd] = brute_maxdist(P, C0);
      run.brute_gap = std::abs(bd - dist);
    }
  } catch (const std::exception& e) {
    run.failed = true;
    run.note = e.what();
  }
  run.wall_ms = ms_since(t0);
}

int run_batch(const BatchArgs& args) {
  const Overrides cfg = load_config(args.config_path);
  const Overrides eff = merge(args.cli, cfg);
  const std::uint64_t base_seed = eff.seed.value_or(12345);
  const int jobs = std::max(1, eff.jobs.value_or(1));

  for (int n : args.dims)
    if (n < 1 || n > args.max_n)
      throw std::invalid_argument("dimension " + std::to_string(n) +
                                  " outside [1, " + std::to_string(args.max_n) + "]");
  if (args.seeds < 0) throw std::invalid_argument("--seeds must be non-negative");

  // Per-run generator state: run_seed = seed + 1000000007*n + i (mod 2^64).
  // SplitMix64's output mixing decorrelates the nearby states.
  std::vector<BatchRun> runs;
  for (int n : args.dims)
    for (int i = 0; i < args.seeds; ++i) {
      BatchRun run;
      run.n = n;
      run.seed_index = i;
      run.run_seed = base_seed + 1000000007ULL * static_cast<std::uint64_t>(n) +
                     static_cast<std::uint64_t>(i);
      runs.push_back(run);
    }

  if (jobs <= 1 || runs.size() <= 1) {
    for (auto& run : runs) compute_batch_run(run, eff, args.oracle);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t idx = next.fetch_add(1); idx < runs.size(); idx = next.fetch_add(1))
        compute_batch_run(runs[idx], eff, args.oracle);
    };
    std::vector<std::thread> pool;
    const std::size_t count = std::min<std::size_t>(jobs, runs.size());
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregation is sequential and in run-list order regardless of --jobs.
  std::string prefix = args.emit_csv.empty() ? "hypercube" : args.emit_csv;
  if (prefix.size() > 4 && prefix.substr(prefix.size() - 4) == ".csv")
    prefix = prefix.substr(0, prefix.size() - 4);

  std::string summary =
      "n,seed_index,run_seed,oracle,lower,upper,on_sphere,exit_generation,indeterminate,"
      "feasibility_probes,max_entry_error,failed\n";
  for (const auto& run : runs) {
    summary += std::to_string(run.n) + "," + std::to_string(run.seed_index) + "," +
               std::to_string(run.run_seed) + "," + format_double(run.oracle_dist) + "," +
               format_double(run.lower) + "," + format_double(run.upper) + "," +
               (run.on_sphere ? "true" : "false") + "," +
               (run.chain_exited ? std::to_string(run.generations) : std::string("none")) + "," +
               (run.indeterminate ? "true" : "false") + "," + std::to_string(run.probes) + "," +
               format_double(run.max_entry_error) + "," + (run.failed ? "true" : "false") + "\n";
  }
  atomic_write(prefix + "_summary.csv", summary);

  for (const auto& run : runs) {
    std::string doc = "entry,x_lb,oracle_vertex,abs_error\n";
    for (std::size_t j = 0; j < run.entry_errors.size(); ++j)
      doc += std::to_string(j) + "," + format_double(run.x_lb(static_cast<Eigen::Index>(j))) +
             "," + format_double(run.oracle_vertex(static_cast<Eigen::Index>(j))) + "," +
             format_double(run.entry_errors[j]) + "\n";
    atomic_write(prefix + "_n" + std::to_string(run.n) + "_s" + std::to_string(run.seed_index) +
                     "_errors.csv",
                 doc);
  }

  std::cout << std::left << std::setw(5) << "n" << std::setw(6) << "seed" << std::setw(14)
            << "oracle" << std::setw(14) << "lower" << std::setw(14) << "upper" << std::setw(10)
            << "on_sphere" << std::setw(12) << "max_err" << std::setw(12) << "wall_ms"
            << "note\n";
  for (const auto& run : runs) {
    std::ostringstream line;
    line << std::left << std::setw(5) << run.n << std::setw(6) << run.seed_index
         << std::setw(14) << std::setprecision(8) << run.oracle_dist << std::setw(14)
         << run.lower << std::setw(14) << run.upper << std::setw(10)
         << (run.on_sphere ? "yes" : "no") << std::setw(12) << std::setprecision(3)
         << run.max_entry_error << std::setw(12) << run.wall_ms;
    if (run.failed) line << "FAILED: " << run.note;
    if (args.oracle && !std::isnan(run.brute_gap))
      line << " brute_gap=" << std::setprecision(3) << run.brute_gap;
    std::cout << line.str() << "\n";
  }
  std::cout << "summary " << prefix << "_summary.csv\n";
  return kExitOk;
}

// ------------------------------------------------------------------ ssp ----

struct SspArgs {
  std::vector<long long> weights;
  long long target = 0;
  double beta = 0.0;
  bool quick = false;
  bool oracle = false;
  std::string config_path;
  Overrides cli;
};

const char* outcome_name(SSPOutcome outcome) {
  switch (outcome) {
    case SSPOutcome::achieved_yes: return "yes";
    case SSPOutcome::certified_no: return "no";
    default: return "inconclusive";
  }
}

int run_ssp(const SspArgs& args) {
  const Overrides cfg = load_config(args.config_path);
  const Overrides eff = merge(args.cli, cfg);

  const SSPInstance inst = build_instance(args.weights, args.target, args.beta);
  const SolveOptions opts = to_solve_options(eff);

  const auto t0 = Clock::now();
  const SSPReport report = solve_ssp(inst, opts, !args.quick);
  const double wall = ms_since(t0);

  std::cout << "outcome " << outcome_name(report.outcome) << "\n";
  if (report.subset) {
    std::string bits;
    for (int v : *report.subset) bits += (bits.empty() ? "" : ",") + std::to_string(v);
    std::cout << "subset [" << bits << "]\n";
  }
  std::cout << "threshold_sq " << format_double(report.threshold_sq) << "\n";
  if (std::isfinite(report.best_upper_sq))
    std::cout << "best_upper_sq " << format_double(report.best_upper_sq) << "\n";
  for (const auto& rung : report.rungs)
    std::cout << "rung frame=" << rung.frame_kind << " rho=" << format_double(rung.rho)
              << " upper=" << format_double(rung.upper)
              << " lower=" << format_double(rung.lower)
              << " on_sphere=" << (rung.on_sphere ? "true" : "false")
              << " outcome=" << outcome_name(rung.outcome) << "\n";
  std::cout << "wall_ms " << format_double(wall) << "\n";

  bool unsound = false;
  if (args.oracle) {
    if (args.weights.size() <= 24) {
      const bool truth = ssp_brute(args.weights, args.target);
      std::cout << "oracle_decision " << (truth ? "yes" : "no") << "\n";
      if (report.outcome == SSPOutcome::achieved_yes && !truth) unsound = true;
      if (report.outcome == SSPOutcome::certified_no && truth) unsound = true;
      if (unsound) std::cout << "unsound_certificate true\n";
    } else {
      std::cout << "oracle unavailable: more than 24 weights\n";
    }
  }
  if (unsound) return kExitIndeterminate;
  return report.outcome == SSPOutcome::inconclusive ? kExitIndeterminate : kExitOk;
}

// --------------------------------------------------------------- plot2d ----

struct PlotArgs {
  std::string instance_path;
  std::string config_path;
  std::string emit_svg;
  std::string emit_csv;
  std::optional<int> stage;
  std::optional<double> radius;
  double width = 760.0;
  Overrides cli;
};

int run_plot2d(const PlotArgs& args) {
  const Overrides cfg = load_config(args.config_path);
  const InstanceDoc doc = load_instance(args.instance_path);
  if (doc.P.dim() != 2) throw std::invalid_argument("plot2d requires a 2-d instance");

  const Overrides eff = merge(args.cli, merge(doc_overrides(doc), cfg));
  CircumscribedFrame frame = doc.frame();
  if (eff.rho) frame.rho = *eff.rho;
  const SolveOptions opts = to_solve_options(eff);
  const int max_gens = opts.max_generations > 0 ? opts.max_generations
                                                : default_max_generations(frame);

  const CenterChain chain = build_chain(doc.P, frame, max_gens, opts.solver);

  double R = 0.0;
  if (args.radius) {
    R = *args.radius;
    if (R < 0) throw std::invalid_argument("--r must be non-negative");
  } else {
    R = solve(doc.P, frame, opts).upper_bound;
  }

  PlotOptions plot_opts;
  plot_opts.stage = args.stage;
  plot_opts.R = R;
  plot_opts.width = args.width;
  const PlotOutput out = render_plot2d(doc.P, frame, chain, plot_opts);

  const std::string stem = std::filesystem::path(args.instance_path).stem().string();
  const std::string svg_path = args.emit_svg.empty() ? stem + ".svg" : args.emit_svg;
  const std::string csv_path = args.emit_csv.empty() ? stem + ".csv" : args.emit_csv;
  atomic_write(svg_path, out.svg);
  atomic_write(csv_path, out.csv);

  std::cout << "svg " << svg_path << "\n"
            << "csv " << csv_path << "\n"
            << "R " << format_double(R) << "\n"
            << "exit_generation "
            << (chain.exit_generation ? std::to_string(*chain.exit_generation)
                                      : std::string("none"))
            << "\n";
  return kExitOk;
}

// Parses one numeric token into the target optional; a false return makes
// CLI11 report a conversion error instead of letting stod exceptions escape.
template <typename T, typename Parse>
CLI::callback_t store_parsed(std::optional<T>& slot, Parse parse) {
  return [&slot, parse](const std::vector<std::string>& vals) {
    try {
      std::size_t used = 0;
      T value = parse(vals.at(0), &used);
      if (used != vals.at(0).size()) return false;
      slot = value;
      return true;
    } catch (...) {
      return false;
    }
  };
}

void add_common_overrides(CLI::App* cmd, Overrides& cli, std::string& bracket_text) {
  auto as_double = [](const std::string& s, std::size_t* used) { return std::stod(s, used); };
  auto as_int = [](const std::string& s, std::size_t* used) { return std::stoi(s, used); };
  cmd->add_option("--rho", store_parsed(cli.rho, as_double),
                  "Migration radius override (must exceed R_circ)");
  cmd->add_option("--tol", store_parsed(cli.tol, as_double),
                  "Objective tolerance for the convex solver and bisection");
  cmd->add_option("--tol-feas", store_parsed(cli.tol_feas, as_double),
                  "Feasibility tolerance");
  cmd->add_option("--max-iters", store_parsed(cli.max_iters, as_int),
                  "Ellipsoid iteration budget (0 = dimension-scaled default)");
  cmd->add_option("--max-generations", store_parsed(cli.max_generations, as_int),
                  "Center-migration generation budget (0 = scaled default)");
  cmd->add_option("--bracket", bracket_text,
                  "Bisection bracket as lo,hi (default: feasible distance, trivial bound)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "polydist: certified upper/lower bounds on the farthest point of an H-polytope\n"
      "from a query point, via ball-intersection surrogates and center migration."};
  app.require_subcommand(1);

  SolveArgs solve_args;
  std::string solve_bracket;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Bound one instance document");
  cmd_solve->add_option("instance", solve_args.instance_path, "Instance file path")
      ->required();
  cmd_solve->add_option("--config", solve_args.config_path, "Config file path");
  cmd_solve->add_option("--emit-csv", solve_args.emit_csv, "Write the report as key,value CSV");
  cmd_solve->add_option("--emit-svg", solve_args.emit_svg, "Write a figure (2-d instances)");
  cmd_solve->add_flag("--oracle", solve_args.oracle,
                      "Compare against vertex enumeration when the budget allows");
  add_common_overrides(cmd_solve, solve_args.cli, solve_bracket);

  BatchArgs batch_args;
  std::string batch_bracket;
  std::uint64_t batch_seed = 0;
  int batch_jobs = 0;
  CLI::App* cmd_batch =
      app.add_subcommand("hypercube-batch", "Seeded unit-cube sweep with closed-form oracle");
  cmd_batch->add_option("--n", batch_args.dims, "Dimensions to run (comma separated)")
      ->delimiter(',');
  cmd_batch->add_option("--seeds", batch_args.seeds, "Runs per dimension (default 1)");
  auto* seed_opt = cmd_batch->add_option("--seed", batch_seed,
                                         "Base seed; run seed = seed + 1000000007*n + i");
  cmd_batch->add_option("--max-n", batch_args.max_n, "Largest accepted dimension (default 100)");
  auto* jobs_opt = cmd_batch->add_option("--jobs", batch_jobs, "Concurrent runs (default 1)");
  cmd_batch->add_option("--config", batch_args.config_path, "Config file path");
  cmd_batch->add_option("--emit-csv", batch_args.emit_csv,
                        "Output prefix (or summary .csv path); default 'hypercube'");
  cmd_batch->add_flag("--oracle", batch_args.oracle,
                      "Cross-check the closed form against vertex enumeration (n <= 12)");
  add_common_overrides(cmd_batch, batch_args.cli, batch_bracket);

  SspArgs ssp_args;
  std::string ssp_bracket;
  CLI::App* cmd_ssp = app.add_subcommand("ssp", "Subset-sum decision via the distance encoding");
  cmd_ssp->add_option("--s", ssp_args.weights, "Positive weights (comma separated)")
      ->delimiter(',')
      ->required();
  cmd_ssp->add_option("--t", ssp_args.target, "Target sum")->required();
  cmd_ssp->add_option("--beta", ssp_args.beta, "Scaling (default 1/max weight)");
  cmd_ssp->add_flag("--quick", ssp_args.quick, "Single frame and rho instead of the ladder");
  cmd_ssp->add_flag("--oracle", ssp_args.oracle, "Compare against exhaustive search (n <= 24)");
  cmd_ssp->add_option("--config", ssp_args.config_path, "Config file path");
  add_common_overrides(cmd_ssp, ssp_args.cli, ssp_bracket);

  PlotArgs plot_args;
  std::string plot_bracket;
  int plot_stage = -1;
  double plot_radius = -1.0;
  CLI::App* cmd_plot = app.add_subcommand("plot2d", "Layered SVG + primitive CSV (2-d only)");
  cmd_plot->add_option("instance", plot_args.instance_path, "Instance file path")->required();
  auto* stage_opt = cmd_plot->add_option("--stage", plot_stage,
                                         "Last generation to draw (default: through the exit)");
  auto* radius_opt = cmd_plot->add_option(
      "--r", plot_radius, "Distance parameter for level sets (default: solved upper bound)");
  cmd_plot->add_option("--width", plot_args.width, "Pixel width (default 760)");
  cmd_plot->add_option("--config", plot_args.config_path, "Config file path");
  cmd_plot->add_option("--emit-svg", plot_args.emit_svg, "SVG path (default: <stem>.svg)");
  cmd_plot->add_option("--emit-csv", plot_args.emit_csv, "CSV path (default: <stem>.csv)");
  add_common_overrides(cmd_plot, plot_args.cli, plot_bracket);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    auto adopt_bracket = [](const std::string& text, Overrides& cli) {
      if (text.empty()) return;
      auto br = parse_bracket_text(text);
      if (!br) throw std::invalid_argument("--bracket expects lo,hi");
      cli.bracket = br;
    };
    if (app.got_subcommand(cmd_solve)) {
      adopt_bracket(solve_bracket, solve_args.cli);
      return run_solve(solve_args);
    }
    if (app.got_subcommand(cmd_batch)) {
      adopt_bracket(batch_bracket, batch_args.cli);
      if (seed_opt->count()) batch_args.cli.seed = batch_seed;
      if (jobs_opt->count()) batch_args.cli.jobs = batch_jobs;
      return run_batch(batch_args);
    }
    if (app.got_subcommand(cmd_ssp)) {
      adopt_bracket(ssp_bracket, ssp_args.cli);
      return run_ssp(ssp_args);
    }
    if (app.got_subcommand(cmd_plot)) {
      adopt_bracket(plot_bracket, plot_args.cli);
      if (stage_opt->count()) plot_args.stage = plot_stage;
      if (radius_opt->count()) plot_args.radius = plot_radius;
      return run_plot2d(plot_args);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitIndeterminate;
  }
  return kExitInvalidInput;
}
