#pragma once

#include "d2v/trainer.hpp"

#include <json.hpp>

namespace d2v {

inline constexpr int kConfigSchemaVersion = 1;

/// Canonical JSON form of a config; task_batch serializes as "all" or a count.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Parses a config object, validating field types. Unknown fields are an
/// error so typos surface instead of silently using defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json search_space_to_json(const SearchSpace& space);
SearchSpace search_space_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const MetricsRecord& record);

} // namespace d2v
