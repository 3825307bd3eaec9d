#include "framepot/io.hpp"

#include "framepot/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace framepot {

using nlohmann::json;

Configuration parse_configuration(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("vectors")) {
    throw ParseError("configuration must be an object with \"d\" and \"vectors\"");
  }
  if (!doc["d"].is_number_integer() || doc["d"].get<long long>() < 1) {
    throw ParseError("\"d\" must be a positive integer");
  }
  const auto& vectors = doc["vectors"];
  if (!vectors.is_array() || vectors.empty()) {
    throw ParseError("\"vectors\" must be a non-empty array");
  }
  const int d = doc["d"].get<int>();
  Eigen::MatrixXd x(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    if (!v.is_array() || v.size() != static_cast<std::size_t>(d)) {
      throw ParseError("vector " + std::to_string(i) + " must have exactly " + std::to_string(d) +
                       " coordinates");
    }
    for (int r = 0; r < d; ++r) {
      if (!v[static_cast<std::size_t>(r)].is_number()) {
        throw ParseError("vector " + std::to_string(i) + " has a non-numeric coordinate");
      }
      x(r, static_cast<Eigen::Index>(i)) = v[static_cast<std::size_t>(r)].get<double>();
    }
  }
  return Configuration::from_columns(std::move(x));
}

Configuration load_configuration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_configuration(buffer.str());
}

json configuration_to_json(const Configuration& config) {
  json vectors = json::array();
  const auto& x = config.vectors();
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    json v = json::array();
    for (Eigen::Index r = 0; r < x.rows(); ++r) v.push_back(x(r, i));
    vectors.push_back(std::move(v));
  }
  return json{{"d", config.dimension()}, {"vectors", std::move(vectors)}};
}

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string gram_to_csv(const GramMatrix& gram) {
  std::string out;
  for (int i = 0; i < gram.order(); ++i) {
    for (int j = 0; j < gram.order(); ++j) {
      if (j > 0) out += ',';
      out += format_real(gram(i, j));
    }
    out += '\n';
  }
  return out;
}

void to_json(json& j, const RankReport& r) {
  j = json{{"rank", r.rank},
           {"bound", r.bound},
           {"within_bound", r.within_bound},
           {"singular_values", r.singular_values}};
}

void to_json(json& j, const BoundReport& r) {
  j = json{{"energy", r.energy},
           {"relaxation", r.relaxation},
           {"slack", r.slack},
           {"pass", r.pass},
           {"rank", r.rank}};
}

void to_json(json& j, const RelaxationCandidate& c) {
  j = json{{"case", c.kind == CandidateCase::kUniform ? "uniform" : "split"},
           {"k", c.k},
           {"x", c.x},
           {"value", c.value}};
}

void to_json(json& j, const CriticalPointRecord& r) {
  j = json{{"j", r.j},
           {"interval", {r.interval_lo, r.interval_hi}},
           {"critical_x", r.critical_x ? json(*r.critical_x) : json(nullptr)},
           {"critical_value", r.critical_x ? json(r.critical_value) : json(nullptr)},
           {"sign_changes", r.sign_changes},
           {"endpoint_left_value", r.endpoint_left_value},
           {"endpoint_right_value", r.endpoint_right_value},
           {"min_on_interval", r.min_on_interval},
           {"min_location", r.min_location},
           {"left_formula_error", r.left_formula_error},
           {"right_formula_error", r.right_formula_error},
           {"left_derivative", r.left_derivative},
           {"right_derivative_trend", r.right_derivative_trend},
           {"aux_left", {r.aux_left_f, r.aux_left_g}},
           {"aux_slope_margin", r.aux_slope_margin},
           {"convexity_violations", r.convexity_violations},
           {"concavity_violations", r.concavity_violations},
           {"checks",
            {{"endpoints", r.endpoints_ok},
             {"derivative", r.derivative_ok},
             {"convexity", r.convexity_ok},
             {"concavity", r.concavity_ok},
             {"critical_point", r.critical_ok},
             {"bound", r.bound_ok}}},
           {"pass", r.pass()}};
}

void to_json(json& j, const SequenceCheck& s) {
  j = json{{"j", s.j_values},
           {"values", s.values},
           {"minimum", s.minimum},
           {"argmin", s.argmin},
           {"unimodal", s.unimodal}};
}

void to_json(json& j, const VerificationReport& r) {
  j = json{{"m", r.m},
           {"p", r.p},
           {"q", r.q},
           {"exploratory", r.exploratory},
           {"intervals", r.records},
           {"uniform_case", {{"p_values", r.uniform_case_p_values},
                             {"minimum", r.uniform_case_min},
                             {"pass", r.uniform_case_ok}}},
           {"left_sequence", r.left_sequence},
           {"right_sequence", r.right_sequence},
           {"sequences_pass", r.sequences_ok},
           {"dips_below_bound", r.dips_below_bound},
           {"failures", r.failures},
           {"pass", r.pass}};
}

void to_json(json& j, const TransitionSolution& s) {
  j = json{{"alpha", s.alpha},
           {"p", s.p},
           {"target", s.target},
           {"energy_residual", s.energy_residual},
           {"stationarity_residual", s.stationarity_residual},
           {"outer_iterations", s.outer_iterations}};
}

void to_json(json& j, const SubthresholdWitness& w) {
  j = json{{"epsilon", w.epsilon},
           {"alpha", w.alpha},
           {"p", w.p},
           {"energy", w.energy},
           {"truncated_alpha", w.truncated_alpha},
           {"truncated_energy", w.truncated_energy}};
}

void to_json(json& j, const MinimizeOptions& o) {
  j = json{{"restarts", o.restarts},
           {"max_iterations", o.max_iterations},
           {"step_tolerance", o.step_tolerance},
           {"smoothing_start", o.smoothing_start},
           {"smoothing_end", o.smoothing_end},
           {"seed", o.seed}};
}

void to_json(json& j, const MinimizationReport& r) {
  j = json{{"best_energy", r.best_energy},
           {"best_restart", r.best_restart},
           {"best_config", configuration_to_json(r.best_config)},
           {"per_restart_energies", r.per_restart_energies},
           {"iterations_used", r.iterations_used},
           {"converged", json(r.converged)}};
}

void to_json(json& j, const ThresholdEstimate& e) {
  j = json{{"status", to_string(e.status)},
           {"p_lo", e.p_lo},
           {"p_hi", e.p_hi},
           {"p_estimate", e.p_estimate},
           {"ortho_value", e.ortho_value},
           {"best_energy_at_p_lo", e.best_energy_at_p_lo},
           {"best_energy_at_p_hi", e.best_energy_at_p_hi},
           {"bisection_steps", e.bisection_steps}};
}

void to_json(json& j, const ScanCell& c) {
  j = json{{"d", c.d},
           {"k", c.k},
           {"m", c.m},
           {"N", c.count},
           {"ortho_value", c.ortho_value},
           {"formula_value", c.formula_value},
           {"estimate", c.estimate ? json(*c.estimate) : json(nullptr)},
           {"error", c.error}};
}

void to_json(json& j, const ScanTable& t) {
  json agreement = json::array();
  for (const auto& [k, ok] : t.agreement_by_k) agreement.push_back({{"k", k}, {"agree", ok}});
  j = json{{"p_lo", t.p_lo},
           {"p_hi", t.p_hi},
           {"tolerance", t.tolerance},
           {"options", t.options},
           {"cells", t.cells},
           {"agreement_by_k", std::move(agreement)},
           {"increasing_in_k", t.increasing_in_k}};
}

std::string scan_to_csv(const ScanTable& table, const json& manifest) {
  std::string out;
  for (const auto& [key, value] : manifest.items()) {
    out += "# " + key + ": " + value.dump() + "\n";
  }
  out += "d,k,m,N,p_lo,p_hi,p_estimate,ortho_value,best_energy_at_p_hi,restarts,seed\n";
  for (const auto& c : table.cells) {
    if (!c.estimate) continue;
    const auto& e = *c.estimate;
    out += std::to_string(c.d) + ',' + std::to_string(c.k) + ',' + std::to_string(c.m) + ',' +
           std::to_string(c.count) + ',' + format_real(e.p_lo) + ',' + format_real(e.p_hi) + ',' +
           format_real(e.p_estimate) + ',' + format_real(e.ortho_value) + ',' +
           format_real(e.best_energy_at_p_hi) + ',' + std::to_string(table.options.restarts) +
           ',' + std::to_string(table.options.seed) + '\n';
  }
  return out;
}

}  // namespace framepot
