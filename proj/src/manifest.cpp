#include "d2v/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace d2v {

using nlohmann::json;

void write_manifest(const RunManifest& manifest, const std::string& out_dir) {
    const json j{
        {"schema_version", 1},
        {"command", manifest.command},
        {"config", manifest.config},
        {"config_hash", manifest.config_hash},
        {"seed", manifest.seed},
        {"input_paths", manifest.input_paths},
        {"output_paths", manifest.output_paths},
        {"toolkit_version", manifest.toolkit_version},
        {"duration_seconds", manifest.duration_seconds},
    };
    const std::filesystem::path path = std::filesystem::path(out_dir) / "manifest.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_manifest: cannot open '" + path.string() + "'");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write_manifest: write failed for '" + path.string() + "'");
}

RunManifest read_manifest(const std::string& out_dir) {
    const std::filesystem::path path = std::filesystem::path(out_dir) / "manifest.json";
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("read_manifest: cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("read_manifest: '" + path.string() + "' is not valid JSON: " +
                                    e.what());
    }
    RunManifest manifest;
    manifest.command = j.at("command").get<std::string>();
    manifest.config = j.at("config");
    manifest.config_hash = j.at("config_hash").get<std::string>();
    manifest.seed = j.at("seed").get<uint64_t>();
    manifest.input_paths = j.at("input_paths").get<std::vector<std::string>>();
    manifest.output_paths = j.at("output_paths").get<std::vector<std::string>>();
    manifest.toolkit_version = j.at("toolkit_version").get<std::string>();
    manifest.duration_seconds = j.at("duration_seconds").get<double>();
    return manifest;
}

} // namespace d2v
