#pragma once

#include <string>

#include "json.hpp"

#include "ivstab/engine.hpp"
#include "ivstab/freqdom.hpp"

namespace ivstab {

[[nodiscard]] nlohmann::json configuration_json(const EdgeConfiguration& c);
[[nodiscard]] nlohmann::json settings_json(const AnalysisOptions& o);
/// Timing and worker count sit under "runtime"; everything else is deterministic.
[[nodiscard]] nlohmann::json analysis_json(const AnalysisReport& r);
[[nodiscard]] nlohmann::json oracle_json(const OracleResult& r, const OracleOptions& o);
[[nodiscard]] nlohmann::json freq_json(const FreqReport& r, const FreqOptions& o);
[[nodiscard]] nlohmann::json margin_json(const MarginResult& r);

/// Copy of j without any "runtime" members.
[[nodiscard]] nlohmann::json strip_runtime(nlohmann::json j);

/// Human-readable summary of an analysis report.
[[nodiscard]] std::string analysis_table(const AnalysisReport& r);

}  // namespace ivstab
