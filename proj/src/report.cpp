#include "logicut/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "logicut/bruteforce.hpp"
#include "logicut/generators.hpp"
#include "logicut/heuristics.hpp"
#include "logicut/regularizer.hpp"
#include "logicut/relaxation.hpp"

namespace logicut {
namespace {

using nlohmann::json;

constexpr int kHeuristicTrials = 100;  // rounding draws in heuristic mode

json encode_extended(double value) {
  if (std::isfinite(value)) return value;
  return value > 0 ? "inf" : "-inf";
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::setprecision(10) << value;
  return out.str();
}

std::string hex_digest(std::uint64_t digest) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << digest;
  return out.str();
}

json regularizer_json(const Regularizer& reg) {
  json out;
  if (reg.is_big_m()) {
    out["kind"] = "bigM";
    out["M"] = reg.M();
  } else {
    out["kind"] = "ridge";
    out["gamma"] = reg.gamma();
  }
  return out;
}

std::string regularizer_desc(const Regularizer& reg) {
  if (reg.is_big_m()) return "bigM(M=" + format_number(reg.M()) + ")";
  return "ridge(gamma=" + format_number(reg.gamma()) + ")";
}

// 0.0 - v rather than -v so a zero objective never prints as "-0".
double negated(double v) { return 0.0 - v; }

double relative_gap(double upper, double lower) {
  if (!std::isfinite(upper) || !std::isfinite(lower)) return kInf;
  return std::max(0.0, (upper - lower) / std::max(1.0, std::abs(upper)));
}

void count_cuts(const std::vector<Cut>& pool, SolveReport& report) {
  for (const Cut& cut : pool) {
    if (cut.origin == CutOrigin::Optimality)
      ++report.cuts_optimality;
    else
      ++report.cuts_feasibility;
  }
}

Eigen::VectorXd to_vector(const std::vector<int>& z) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) out[static_cast<Eigen::Index>(i)] = z[i];
  return out;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double parse_flag_double(const std::string& text, const std::string& flag) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(flag, "expected a number, got \"" + text + "\"");
  return value;
}

RegularizerChoice parse_regularizer_flag(const std::string& text) {
  const std::string flag = "--regularizer";
  if (text == "natural") return RegularizerChoice{};
  const std::size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "bigM" && rest.rfind("M=", 0) == 0)
      return RegularizerChoice{Regularizer::big_m(parse_flag_double(rest.substr(2), flag))};
    if (kind == "ridge" && rest.rfind("gamma=", 0) == 0)
      return RegularizerChoice{Regularizer::ridge(parse_flag_double(rest.substr(6), flag))};
  } catch (const std::invalid_argument& e) {
    throw ParseError(flag, e.what());
  }
  throw ParseError(flag, "expected bigM:M=<value>, ridge:gamma=<value>, or natural; got \"" +
                             text + "\"");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, "cannot write file");
  out << text;
}

// Rounds a fractional relaxation point and polishes the better candidate by
// local search; `ub` stays infinite when nothing feasible came out.
struct Incumbent {
  std::vector<int> z;
  double ub = kInf;
};

Incumbent round_and_polish(const Oracle& oracle, const FeasibleSet& feasible,
                           const Eigen::VectorXd& c, const Eigen::VectorXd& z_frac, int trials,
                           std::uint64_t seed) {
  HeuristicResult randomized = randomized_rounding(z_frac, feasible, oracle, c, trials, seed);
  HeuristicResult sequential = sequential_rounding(z_frac, feasible, oracle, c);
  const HeuristicResult& better = sequential.ub < randomized.ub ? sequential : randomized;
  Incumbent out{better.z_best, better.ub};
  if (out.ub < kInf) {
    HeuristicResult polished = local_search(out.z, feasible, oracle, c);
    if (polished.ub < out.ub) out = {polished.z_best, polished.ub};
  }
  return out;
}

struct SolveArgs {
  std::string problem;
  std::string mode = "exact";
  std::string regularizer;
  std::string warmstart = "on";
  std::string heuristics = "on";
  std::string tree = "single";
  std::string sweep;
  std::string report_path;
  double eps = 1e-6;
  double time_limit = kInf;
  std::uint64_t seed = 0;
};

void print_summary(const SolveReport& report, const ParsedInstance& instance,
                   const std::string& mode) {
  const double display =
      instance.maximize ? negated(report.upper_bound) : report.upper_bound;
  double total = 0.0;
  auto it = report.stage_timings.find("total");
  if (it != report.stage_timings.end()) total = it->second;
  std::cout << "family=" << instance.file.family() << " n=" << instance.oracle->num_binaries()
            << " mode=" << mode << " regularizer="
            << regularizer_desc(instance.oracle->regularizer()) << "\n"
            << "status=" << solve_status_name(report.status) << " objective="
            << format_number(display) << (instance.maximize ? " (max sense)" : "")
            << " lower=" << format_number(report.lower_bound)
            << " upper=" << format_number(report.upper_bound)
            << " gap=" << format_number(report.gap) << " nodes=" << report.nodes_explored
            << " cuts=" << report.cuts_optimality << "+" << report.cuts_feasibility
            << " time=" << std::setprecision(3) << std::fixed << total << "s\n"
            << std::defaultfloat;
}

SolveReport run_relax_mode(const ParsedInstance& instance) {
  Stopwatch watch;
  RelaxationResult relaxation =
      kelley_solve(*instance.oracle, instance.feasible, instance.master_cost);
  SolveReport report;
  report.lower_bound = relaxation.lower_bound;
  report.upper_bound = kInf;
  if (relaxation.lower_bound == kInf) {
    report.status = SolveStatus::Infeasible;
    report.gap = 0.0;
  } else {
    report.status = relaxation.converged ? SolveStatus::Optimal : SolveStatus::GapLimit;
    report.gap = kInf;
  }
  count_cuts(relaxation.cut_pool, report);
  const double elapsed = watch.seconds();
  report.stage_timings["relaxation"] = elapsed;
  report.stage_timings["total"] = elapsed;
  return report;
}

SolveReport run_heuristic_mode(const ParsedInstance& instance, const SolverConfig& config) {
  Stopwatch total;
  RelaxationResult relaxation =
      kelley_solve(*instance.oracle, instance.feasible, instance.master_cost);
  SolveReport report;
  report.lower_bound = relaxation.lower_bound;
  report.upper_bound = kInf;
  count_cuts(relaxation.cut_pool, report);
  const double relaxation_seconds = total.seconds();
  report.stage_timings["relaxation"] = relaxation_seconds;
  if (relaxation.lower_bound == kInf) {
    report.status = SolveStatus::Infeasible;
    report.gap = 0.0;
    report.stage_timings["total"] = total.seconds();
    return report;
  }
  Stopwatch rounding;
  Incumbent incumbent = round_and_polish(*instance.oracle, instance.feasible,
                                         instance.master_cost, relaxation.z_frac,
                                         kHeuristicTrials, config.seed);
  if (incumbent.ub < kInf) {
    SubproblemResult verified = instance.oracle->evaluate(incumbent.z);
    if (verified.status == SubproblemStatus::Feasible) {
      report.incumbent_z = incumbent.z;
      report.incumbent_x = verified.x_star;
      report.upper_bound = instance.master_cost.dot(to_vector(incumbent.z)) + verified.f_value;
    }
  }
  report.gap = relative_gap(report.upper_bound, report.lower_bound);
  report.status = std::isfinite(report.upper_bound) && report.gap <= config.eps
                      ? SolveStatus::Optimal
                      : SolveStatus::GapLimit;
  report.stage_timings["heuristics"] = rounding.seconds();
  report.stage_timings["total"] = total.seconds();
  return report;
}

SolveReport run_bruteforce_mode(const ParsedInstance& instance) {
  Stopwatch watch;
  EnumerationResult result =
      enumerate(*instance.oracle, instance.feasible, instance.master_cost, false);
  SolveReport report;
  if (result.best_z.empty()) {
    report.status = SolveStatus::Infeasible;
    report.lower_bound = kInf;
    report.upper_bound = kInf;
  } else {
    report.status = SolveStatus::Optimal;
    report.lower_bound = result.best_value;
    report.upper_bound = result.best_value;
    report.incumbent_z = result.best_z;
    report.incumbent_x = instance.oracle->evaluate(result.best_z).x_star;
  }
  report.gap = 0.0;
  report.stage_timings["total"] = watch.seconds();
  return report;
}

int run_sweep(const SolveArgs& args, const ParsedInstance& base) {
  const bool big_m = base.oracle->regularizer().is_big_m();
  std::vector<double> values;
  std::istringstream list(args.sweep);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (item.empty()) continue;
    const double value = parse_flag_double(item, "--sweep");
    if (!(value > 0.0)) throw ParseError("--sweep", "parameter values must be positive");
    values.push_back(value);
  }
  if (values.empty()) throw ParseError("--sweep", "expected a comma-separated list of values");

  std::ostringstream csv;
  csv << "parameter,kind,lower_bound,upper_bound,gap\n";
  for (double value : values) {
    const Regularizer reg =
        big_m ? Regularizer::big_m(value) : Regularizer::ridge(value);
    ParsedInstance swept = parse_instance_file(args.problem, RegularizerChoice{reg});
    RelaxationResult relaxation =
        kelley_solve(*swept.oracle, swept.feasible, swept.master_cost);
    double lower = relaxation.lower_bound;
    double upper = kInf;
    if (lower < kInf) {
      Incumbent incumbent =
          round_and_polish(*swept.oracle, swept.feasible, swept.master_cost, relaxation.z_frac,
                           kHeuristicTrials, args.seed);
      upper = incumbent.ub;
    }
    const double gap = lower == kInf ? 0.0 : relative_gap(upper, lower);
    csv << format_number(value) << "," << (big_m ? "bigM" : "ridge") << ","
        << format_number(lower) << "," << format_number(upper) << "," << format_number(gap)
        << "\n";
  }
  if (args.report_path.empty())
    std::cout << csv.str();
  else
    write_text(args.report_path, csv.str());
  return 0;
}

int cmd_solve(const SolveArgs& args) {
  std::optional<RegularizerChoice> choice;
  if (!args.regularizer.empty()) choice = parse_regularizer_flag(args.regularizer);
  ParsedInstance instance = parse_instance_file(args.problem, choice);

  SolverConfig config;
  config.eps = args.eps;
  config.time_limit = args.time_limit;
  config.mode = args.tree == "multi" ? SolveMode::MultiTree : SolveMode::SingleTree;
  config.use_relaxation_warmstart = args.warmstart == "on";
  config.use_heuristics = args.heuristics == "on";
  config.seed = args.seed;

  if (!args.sweep.empty()) return run_sweep(args, instance);

  SolveReport report;
  if (args.mode == "exact")
    report = solve(*instance.oracle, instance.feasible, instance.master_cost, config);
  else if (args.mode == "relax")
    report = run_relax_mode(instance);
  else if (args.mode == "heuristic")
    report = run_heuristic_mode(instance, config);
  else
    report = run_bruteforce_mode(instance);

  print_summary(report, instance, args.mode);
  if (!args.report_path.empty())
    write_text(args.report_path, report_to_json(report, instance, config, args.mode).dump(2) + "\n");

  if (report.status == SolveStatus::Infeasible) return 2;
  if (args.mode == "heuristic" && report.incumbent_z.empty()) return 2;
  return 0;
}

int cmd_generate(const std::string& family, const GeneratorSpec& spec, const std::string& out) {
  InstanceFile file = family == "netdesign" ? generate_netdesign(spec) : generate_erm(spec);
  const std::string text = serialize_instance(file);
  parse_instance(text);  // a generated file must parse and validate as-is
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  return 0;
}

int cmd_convert(const std::string& format, const std::string& input, const std::string& out,
                bool divide_by_demand) {
  const std::string text = read_text(input);
  InstanceFile file;
  if (format == "orlib") {
    file = parse_orlib_cap(text, divide_by_demand);
  } else {
    std::vector<std::string> warnings;
    file = parse_biqmac(text, &warnings);
    for (const std::string& warning : warnings) std::cerr << "warning: " << warning << "\n";
  }
  const std::string serialized = serialize_instance(file);
  if (out.empty())
    std::cout << serialized;
  else
    write_text(out, serialized);
  return 0;
}

}  // namespace

std::uint64_t instance_digest(const InstanceFile& file) {
  const std::string text = serialize_instance(file);
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "Optimal";
    case SolveStatus::GapLimit:
      return "GapLimit";
    case SolveStatus::TimeLimit:
      return "TimeLimit";
    case SolveStatus::Infeasible:
      return "Infeasible";
  }
  return "Unknown";
}

nlohmann::json report_to_json(const SolveReport& report, const ParsedInstance& instance,
                              const SolverConfig& config, const std::string& mode) {
  json instance_block;
  instance_block["family"] = instance.file.family();
  instance_block["digest"] = hex_digest(instance_digest(instance.file));
  instance_block["binaries"] = instance.oracle->num_binaries();

  json run;
  run["mode"] = mode;
  run["regularizer"] = regularizer_json(instance.oracle->regularizer());
  run["eps"] = config.eps;
  run["time_limit"] = encode_extended(config.time_limit);
  run["seed"] = config.seed;
  run["warmstart"] = config.use_relaxation_warmstart;
  run["heuristics"] = config.use_heuristics;
  run["tree"] = config.mode == SolveMode::MultiTree ? "multi" : "single";

  json result;
  result["status"] = solve_status_name(report.status);
  result["sense"] = instance.maximize ? "max" : "min";
  result["lower_bound"] = encode_extended(report.lower_bound);
  result["upper_bound"] = encode_extended(report.upper_bound);
  result["gap"] = encode_extended(report.gap);
  result["objective"] =
      encode_extended(instance.maximize ? negated(report.upper_bound) : report.upper_bound);
  result["incumbent"] = report.incumbent_z;
  json cuts;
  cuts["optimality"] = report.cuts_optimality;
  cuts["feasibility"] = report.cuts_feasibility;
  result["cuts"] = std::move(cuts);
  result["nodes"] = report.nodes_explored;
  result["stage_seconds"] = report.stage_timings;

  json out;
  out["schema_version"] = 1;
  out["instance"] = std::move(instance_block);
  out["run"] = std::move(run);
  out["result"] = std::move(result);
  return out;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"outer-approximation solver for mixed-binary convex programs with on/off coupling"};
  app.name("logicut");
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve an instance file");
  solve_cmd->add_option("--problem", solve_args.problem, "instance file (JSON)")->required();
  solve_cmd->add_option("--mode", solve_args.mode, "relax | heuristic | exact | bruteforce")
      ->check(CLI::IsMember({"relax", "heuristic", "exact", "bruteforce"}));
  solve_cmd->add_option("--regularizer", solve_args.regularizer,
                        "bigM:M=<value> | ridge:gamma=<value> | natural");
  solve_cmd->add_option("--eps", solve_args.eps, "relative optimality tolerance");
  solve_cmd->add_option("--time-limit", solve_args.time_limit, "wall-clock limit in seconds");
  solve_cmd->add_option("--seed", solve_args.seed, "seed for randomized heuristics");
  solve_cmd->add_option("--report", solve_args.report_path, "write a JSON report (CSV for --sweep)");
  solve_cmd->add_option("--warmstart", solve_args.warmstart, "seed the tree with relaxation cuts")
      ->check(CLI::IsMember({"on", "off"}));
  solve_cmd->add_option("--heuristics", solve_args.heuristics, "round for an initial incumbent")
      ->check(CLI::IsMember({"on", "off"}));
  solve_cmd->add_option("--tree", solve_args.tree, "single | multi")
      ->check(CLI::IsMember({"single", "multi"}));
  solve_cmd->add_option("--sweep", solve_args.sweep,
                        "comma-separated regularizer strengths; emits a bound-vs-parameter "
                        "CSV table instead of solving");

  std::string gen_family;
  GeneratorSpec gen_spec;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("generate", "write a synthetic instance");
  gen_cmd->add_option("--family", gen_family, "netdesign | erm")
      ->required()
      ->check(CLI::IsMember({"netdesign", "erm"}));
  gen_cmd->add_option("--seed", gen_spec.seed, "generator seed")->required();
  gen_cmd->add_option("--nodes", gen_spec.nodes, "netdesign: node count");
  gen_cmd->add_option("--extra-multiplier", gen_spec.extra_edge_multiplier,
                      "netdesign: extra existing edges per node");
  gen_cmd->add_option("--slack", gen_spec.cardinality_slack,
                      "netdesign: allowed relative network growth");
  gen_cmd->add_option("--samples", gen_spec.samples, "erm: sample count");
  gen_cmd->add_option("--features", gen_spec.features, "erm: feature count");
  gen_cmd->add_option("--sparsity", gen_spec.sparsity, "erm: planted support size");
  gen_cmd->add_option("--snr", gen_spec.snr, "erm: signal-to-noise ratio");
  gen_cmd->add_flag("--classification", gen_spec.classification,
                    "erm: sign labels and hinge loss");
  gen_cmd->add_option("--out", gen_out, "output path (stdout when omitted)");

  std::string conv_format;
  std::string conv_input;
  std::string conv_out;
  bool conv_divide = false;
  CLI::App* conv_cmd = app.add_subcommand("convert", "convert a foreign format to JSON");
  conv_cmd->add_option("--format", conv_format, "orlib | biqmac")
      ->required()
      ->check(CLI::IsMember({"orlib", "biqmac"}));
  conv_cmd->add_option("--input", conv_input, "input file")->required();
  conv_cmd->add_option("--out", conv_out, "output path (stdout when omitted)");
  conv_cmd->add_flag("--divide-by-demand", conv_divide,
                     "orlib: store per-unit costs (files quote whole-demand costs)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (gen_cmd->parsed()) return cmd_generate(gen_family, gen_spec, gen_out);
    return cmd_convert(conv_format, conv_input, conv_out, conv_divide);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace logicut
