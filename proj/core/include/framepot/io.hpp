#pragma once

// File formats:
//   configuration JSON  {"d": int, "vectors": [[real, ...], ...]}
//   Gram CSV            N rows of N comma-separated reals, 17 significant digits
// and JSON/CSV serialization of every report type.

#include "framepot/frame.hpp"
#include "framepot/minimizer.hpp"
#include "framepot/relaxation.hpp"
#include "framepot/theorem.hpp"
#include "framepot/transition.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace framepot {

/// Throws ParseError for malformed JSON or shape errors, ValidationError for
/// vectors that are not unit length.
Configuration parse_configuration(std::string_view text);
Configuration load_configuration(const std::filesystem::path& path);
nlohmann::json configuration_to_json(const Configuration& config);

/// "%.17g" rendering used by every CSV writer.
std::string format_real(double value);

std::string gram_to_csv(const GramMatrix& gram);

void to_json(nlohmann::json& j, const RankReport& r);
void to_json(nlohmann::json& j, const BoundReport& r);
void to_json(nlohmann::json& j, const RelaxationCandidate& c);
void to_json(nlohmann::json& j, const CriticalPointRecord& r);
void to_json(nlohmann::json& j, const SequenceCheck& s);
void to_json(nlohmann::json& j, const VerificationReport& r);
void to_json(nlohmann::json& j, const TransitionSolution& s);
void to_json(nlohmann::json& j, const SubthresholdWitness& w);
void to_json(nlohmann::json& j, const MinimizeOptions& o);
void to_json(nlohmann::json& j, const MinimizationReport& r);
void to_json(nlohmann::json& j, const ThresholdEstimate& e);
void to_json(nlohmann::json& j, const ScanCell& c);
void to_json(nlohmann::json& j, const ScanTable& t);

/// Header comment lines carry `manifest`; columns are
/// d,k,m,N,p_lo,p_hi,p_estimate,ortho_value,best_energy_at_p_hi,restarts,seed.
std::string scan_to_csv(const ScanTable& table, const nlohmann::json& manifest);

}  // namespace framepot
