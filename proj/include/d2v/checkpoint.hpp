#pragma once

#include "d2v/model.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace d2v {

inline constexpr int kCheckpointSchemaVersion = 1;

/// FNV-1a 64-bit hash of the canonical (key-sorted) JSON text, as a
/// 16-digit hex string. Recomputable from the stored config.
std::string config_hash(const nlohmann::json& config);

std::string base64_encode(const double* values, size_t count);
std::vector<double> base64_decode_doubles(const std::string& text);

/// Schema-versioned JSON checkpoint with base64 row-major float64 arrays.
void save_checkpoint(const D2VModel& model, const std::string& path,
                     const std::string& config_hash);
void save_checkpoint(const PoolingMlp& mlp, const std::string& path,
                     const std::string& config_hash);

struct Checkpoint {
    std::string kind; // "d2v" or "baseline"
    std::string config_hash;
    std::variant<D2VModel, PoolingMlp> model;

    const D2VModel& d2v() const;
    const PoolingMlp& baseline() const;
};

Checkpoint load_checkpoint(const std::string& path);

} // namespace d2v
