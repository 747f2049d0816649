#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace d2v {

/// Run record written once per artifact directory; re-running the stored
/// command with the stored config and seed reproduces the outputs.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::string config_hash;
    uint64_t seed = 0;
    std::vector<std::string> input_paths;
    std::vector<std::string> output_paths;
    std::string toolkit_version;
    double duration_seconds = 0.0;
};

void write_manifest(const RunManifest& manifest, const std::string& out_dir);
RunManifest read_manifest(const std::string& out_dir);

} // namespace d2v
