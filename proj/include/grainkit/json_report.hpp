#pragma once

#include <json.hpp>

#include "grainkit/analysis.hpp"
#include "grainkit/fgc_params.hpp"
#include "grainkit/metrics.hpp"
#include "grainkit/synthesis.hpp"
#include "grainkit/throughput.hpp"

namespace grainkit {

// Infinite PSNR values are written as the string "inf".
nlohmann::json to_json(const FgcParams& params);
FgcParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BlendReport& report);
nlohmann::json to_json(const EpochDiagnostics& diag);
nlohmann::json to_json(const MetricReport& report);
nlohmann::json to_json(const ThroughputReport& report);

}  // namespace grainkit
