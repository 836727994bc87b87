#pragma once

#include <string>

#include "json.hpp"
#include "mfbs/experiments.hpp"

// JSON views of the experiment types. ordered_json keeps insertion order, so
// serialized reports are byte-stable for identical inputs (doubles print in
// shortest round-trip form).

namespace mfbs {

using Json = nlohmann::ordered_json;

std::string to_string(BandwidthRule rule);
std::string to_string(EstimatorKind kind);
std::string to_string(NoiseBackend backend);
std::string to_string(EffectsDistribution::Kind kind);
std::string to_string(SupportTransform::Kind kind);

BandwidthRule bandwidth_rule_from_string(const std::string& s);
EstimatorKind estimator_kind_from_string(const std::string& s);
NoiseBackend noise_backend_from_string(const std::string& s);
EffectsDistribution::Kind effects_kind_from_string(const std::string& s);

Json config_to_json(const ExperimentConfig& config);
Json report_to_json(const ExperimentReport& report);

}  // namespace mfbs
