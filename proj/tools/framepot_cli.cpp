// framepot: command-line front end.
//
// Every subcommand writes one machine-readable document (JSON, or CSV for
// scan tables) to stdout or --out. Documents embed a manifest of the full
// parameter set; execution details that must not affect output bytes
// (thread count, wall-clock time) go to stderr only.
//
// Exit codes: 0 success, 1 check failed, 2 parse error, 3 validation error,
// 4 precondition violated, 5 solver failure.

#include "framepot/error.hpp"
#include "framepot/frame.hpp"
#include "framepot/io.hpp"
#include "framepot/minimizer.hpp"
#include "framepot/relaxation.hpp"
#include "framepot/theorem.hpp"
#include "framepot/transition.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#ifndef FRAMEPOT_VERSION
#define FRAMEPOT_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace framepot;

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParse = 2,
  kValidation = 3,
  kPrecondition = 4,
  kSolver = 5,
};

json manifest(const std::string& subcommand, json parameters) {
  return json{{"tool", "framepot"},
              {"version", FRAMEPOT_VERSION},
              {"subcommand", subcommand},
              {"parameters", std::move(parameters)}};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + out_path);
  out << text;
}

void emit_json(const json& doc, const std::string& out_path) { emit(doc.dump(2) + "\n", out_path); }

struct Common {
  std::string out;
  int threads = 0;
};

struct MinimizeFlags {
  int restarts = 64;
  int max_iterations = 5000;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts", restarts, "Random restarts per minimization")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iterations", max_iterations, "Descent iterations per restart")
        ->check(CLI::Range(2, 100000000));
    cmd->add_option("--seed", seed, "Base seed for per-restart random streams");
  }
  MinimizeOptions options(int threads) const {
    MinimizeOptions o;
    o.restarts = restarts;
    o.max_iterations = max_iterations;
    o.seed = seed;
    o.threads = threads;
    return o;
  }
};

int run_energy(const std::string& path, double p, const std::string& gram_csv, const Common& c) {
  const Configuration config = load_configuration(path);
  const GramMatrix gram = gram_of(config);
  const RankReport rank = validate_rank(gram, config.dimension());
  json result{{"energy", frame_energy(gram, Exponent(p))},
              {"N", config.size()},
              {"d", config.dimension()},
              {"rank", rank.rank},
              {"min_eigenvalue", gram.min_eigenvalue()}};
  if (!gram_csv.empty()) {
    std::ofstream out(gram_csv, std::ios::binary);
    if (!out) throw ParseError("cannot write " + gram_csv);
    out << gram_to_csv(gram);
  }
  emit_json({{"manifest", manifest("energy", {{"config", path}, {"p", p}})}, {"result", result}},
            c.out);
  return kOk;
}

int run_bound(const std::string& path, double p, const Common& c) {
  const Configuration config = load_configuration(path);
  const GramMatrix gram = gram_of(config);
  const BoundReport report = check_bound(gram, config.dimension(), p);
  json result = report;
  result["N"] = config.size();
  result["d"] = config.dimension();
  emit_json({{"manifest", manifest("bound", {{"config", path}, {"p", p}})}, {"result", result}},
            c.out);
  return report.pass ? kOk : kCheckFailed;
}

int run_verify(int m, std::optional<double> p_override, const Common& c) {
  if (m < 1 || m > 16) throw PreconditionError("verify-theorem supports 1 <= m <= 16");
  const VerificationReport report = verify_theorem(m, p_override);
  json params{{"m", m}, {"p_override", p_override ? json(*p_override) : json(nullptr)}};
  emit_json({{"manifest", manifest("verify-theorem", params)}, {"result", report}}, c.out);
  if (report.exploratory) {
    std::cerr << "framepot: exploratory run at p = " << report.p
              << (report.dips_below_bound ? " dips below 2m" : " stays above 2m") << "\n";
    return kOk;
  }
  if (!report.pass) {
    std::cerr << "framepot: verification failed: " << report.failures.front() << "\n";
    return kCheckFailed;
  }
  return kOk;
}

void print_comparison(const char* name, double value, std::string_view reference, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  std::string ours = buf;
  std::size_t agree = 0;
  while (agree < ours.size() && agree < reference.size() && ours[agree] == reference[agree]) {
    ++agree;
  }
  std::cerr << "  " << name << "  computed  " << ours << "\n"
            << "  " << std::string(std::char_traits<char>::length(name), ' ') << "  reference "
            << reference << "\n"
            << "  " << std::string(std::char_traits<char>::length(name), ' ') << "  agree     "
            << std::string(agree, '^') << "\n";
}

int run_transition(int n, std::optional<double> epsilon, int precision, double tol,
                   const MinimizeFlags& flags, const Common& c) {
  json params{{"n", n}, {"epsilon", epsilon ? json(*epsilon) : json(nullptr)}};
  json result;
  if (n == 5) {
    const TransitionSolution sol = solve_transition();
    result["solution"] = sol;
    result["reference"] = {{"alpha", kReferenceAlphaDigits}, {"p", kReferencePDigits}};
    std::cerr << "five-point transition (computed vs reference):\n";
    print_comparison("alpha", sol.alpha, kReferenceAlphaDigits, precision);
    print_comparison("p    ", sol.p, kReferencePDigits, precision);
    if (epsilon) result["witness"] = subthreshold_witness(*epsilon);
  } else if (n == 7) {
    const MinimizeOptions options = flags.options(c.threads);
    params["tolerance"] = tol;
    params["minimize"] = options;
    const ThresholdEstimate est = circle_transition(7, options, tol);
    result["estimate"] = est;
    result["reference_p"] = kReferenceSevenPointP;
    std::cerr << "seven-point transition estimate " << est.p_estimate << " (reference "
              << kReferenceSevenPointP << ")\n";
    if (est.status != ThresholdStatus::kFound) {
      emit_json({{"manifest", manifest("transition", params)}, {"result", result}}, c.out);
      std::cerr << "framepot: no bracket: " << to_string(est.status) << " on [" << est.p_lo << ", "
                << est.p_hi << "]\n";
      return kSolver;
    }
  } else {
    throw PreconditionError("transition supports --n 5 or --n 7");
  }
  emit_json({{"manifest", manifest("transition", params)}, {"result", result}}, c.out);
  return kOk;
}

int run_minimize(int d, int n, double p, const MinimizeFlags& flags, const Common& c) {
  const MinimizeOptions options = flags.options(c.threads);
  const MinimizationReport report = minimize_energy(d, n, p, options);
  json result = report;
  result["ortho_value"] = ortho_reference_energy(d, n);
  emit_json({{"manifest", manifest("minimize", {{"d", d}, {"N", n}, {"p", p}, {"options", options}})},
             {"result", result}},
            c.out);
  return kOk;
}

int run_scan(const std::vector<int>& ds, const std::vector<int>& ks, const std::vector<int>& ms,
             double tol, double p_lo, double p_hi, const MinimizeFlags& flags,
             const std::string& csv_path, const Common& c) {
  const MinimizeOptions options = flags.options(c.threads);
  const ScanTable table = conjecture_scan(ds, ks, ms, tol, options, p_lo, p_hi);
  for (const auto& cell : table.cells) {
    if (!cell.error.empty()) {
      std::cerr << "framepot: warning: skipped (d=" << cell.d << ", k=" << cell.k
                << ", m=" << cell.m << "): " << cell.error << "\n";
    }
  }
  const json m = manifest("scan", {{"d_list", ds},
                                   {"k_list", ks},
                                   {"m_list", ms},
                                   {"tolerance", tol},
                                   {"p_lo", p_lo},
                                   {"p_hi", p_hi},
                                   {"options", options}});
  if (!csv_path.empty()) emit(scan_to_csv(table, m), csv_path);
  emit_json({{"manifest", m}, {"result", table}}, c.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"framepot: p-frame energies, relaxation bounds and transition search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FRAMEPOT_VERSION);

  Common common;
  auto add_common = [&](CLI::App* cmd, bool threaded) {
    cmd->add_option("--out", common.out, "Write the output document here instead of stdout");
    if (threaded) {
      cmd->add_option("--threads", common.threads, "Worker threads (0 = hardware concurrency)")
          ->check(CLI::NonNegativeNumber);
    }
  };

  std::string config_path;
  std::string gram_csv;
  double p = 1.0;
  auto* energy = app.add_subcommand("energy", "Frame energy and Gram summary of a configuration");
  energy->add_option("config", config_path, "Configuration JSON")->required();
  energy->add_option("--p", p, "Energy exponent")->required();
  energy->add_option("--gram-csv", gram_csv, "Also export the Gram matrix as CSV");
  add_common(energy, false);

  auto* bound = app.add_subcommand("bound", "Relaxation lower bound for a configuration");
  bound->add_option("config", config_path, "Configuration JSON")->required();
  bound->add_option("--p", p, "Energy exponent in [1, 2]")->required();
  add_common(bound, false);

  int m = 1;
  std::optional<double> p_override;
  auto* verify = app.add_subcommand("verify-theorem", "Check every step of the 2m lower bound");
  verify->add_option("--m", m, "Excess m (1..16)")->required();
  verify->add_option("--p-override", p_override, "Exploratory exponent replacing p0(m)");
  add_common(verify, false);

  int n = 5;
  std::optional<double> epsilon;
  int precision = 17;
  double tol = 1e-4;
  MinimizeFlags transition_flags;
  auto* transition = app.add_subcommand("transition", "Transition exponent for 5 or 7 circle points");
  transition->add_option("--n", n, "Number of points (5 or 7)")->check(CLI::IsMember({5, 7}));
  transition->add_option("--epsilon", epsilon, "Also produce a witness at target 8 - 2 epsilon");
  transition->add_option("--precision", precision, "Digits shown in the comparison")
      ->check(CLI::Range(1, 17));
  transition->add_option("--tol", tol, "Bracket width for --n 7");
  transition_flags.attach(transition);
  add_common(transition, true);

  int d = 2;
  MinimizeFlags minimize_flags;
  auto* minimize = app.add_subcommand("minimize", "Multi-start minimization of E_p on the sphere");
  minimize->add_option("--d", d, "Ambient dimension")->required()->check(CLI::PositiveNumber);
  minimize->add_option("--n", n, "Number of vectors")->required()->check(CLI::PositiveNumber);
  minimize->add_option("--p", p, "Energy exponent (>= 1)")->required();
  minimize_flags.attach(minimize);
  add_common(minimize, true);

  std::vector<int> d_list;
  std::vector<int> k_list;
  std::vector<int> m_list;
  double scan_tol = 1e-3;
  double p_lo = 1.0;
  double p_hi = 2.0;
  std::string csv_path;
  MinimizeFlags scan_flags;
  auto* scan = app.add_subcommand("scan", "Threshold table over (d, k, m) with N = m + k d");
  scan->add_option("--d-list", d_list, "Dimensions")->delimiter(',')->required();
  scan->add_option("--k-list", k_list, "Repetition counts")->delimiter(',')->required();
  scan->add_option("--m-list", m_list, "Excess values")->delimiter(',')->required();
  scan->add_option("--tol", scan_tol, "Bracket width per cell");
  scan->add_option("--p-lo", p_lo, "Lower end of the p bracket");
  scan->add_option("--p-hi", p_hi, "Upper end of the p bracket");
  scan->add_option("--csv", csv_path, "Also write the CSV table here");
  scan_flags.attach(scan);
  add_common(scan, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  std::string name = app.get_subcommands().front()->get_name();
  try {
    if (*energy) {
      code = run_energy(config_path, p, gram_csv, common);
    } else if (*bound) {
      code = run_bound(config_path, p, common);
    } else if (*verify) {
      code = run_verify(m, p_override, common);
    } else if (*transition) {
      code = run_transition(n, epsilon, precision, tol, transition_flags, common);
    } else if (*minimize) {
      code = run_minimize(d, n, p, minimize_flags, common);
    } else if (*scan) {
      code = run_scan(d_list, k_list, m_list, scan_tol, p_lo, p_hi, scan_flags, csv_path, common);
    }
  } catch (const ParseError& e) {
    std::cerr << "framepot: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "framepot: invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const PreconditionError& e) {
    std::cerr << "framepot: precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const DomainError& e) {
    std::cerr << "framepot: precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const SolverError& e) {
    std::cerr << "framepot: solver failure: " << e.what() << "\n";
    return kSolver;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "framepot: " << name << " finished in " << seconds << " s\n";
  return code;
}
