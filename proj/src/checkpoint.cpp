#include "d2v/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace d2v {

using nlohmann::json;

std::string config_hash(const json& config) {
    const std::string text = config.dump();
    uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

namespace {

constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode_bytes(const std::vector<unsigned char>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += kB64Alphabet[v & 63];
    }
    const size_t rest = bytes.size() - i;
    if (rest == 1) {
        const uint32_t v = bytes[i] << 16;
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        const uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out += kB64Alphabet[(v >> 18) & 63];
        out += kB64Alphabet[(v >> 12) & 63];
        out += kB64Alphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

std::vector<unsigned char> b64_decode_bytes(const std::string& text) {
    if (text.size() % 4 != 0) throw std::invalid_argument("base64: length not a multiple of 4");
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i < text.size(); i += 4) {
        uint32_t v = 0;
        int pad = 0;
        for (size_t j = 0; j < 4; ++j) {
            const char c = text[i + j];
            if (c == '=') {
                if (i + 4 != text.size() || j < 2) throw std::invalid_argument("base64: bad padding");
                ++pad;
                v <<= 6;
                continue;
            }
            const int val = b64_value(c);
            if (val < 0 || pad > 0) throw std::invalid_argument("base64: invalid character");
            v = (v << 6) | static_cast<uint32_t>(val);
        }
        out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
        if (pad < 2) out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
        if (pad < 1) out.push_back(static_cast<unsigned char>(v & 0xFF));
    }
    return out;
}

} // namespace

std::string base64_encode(const double* values, size_t count) {
    std::vector<unsigned char> bytes(count * 8);
    for (size_t i = 0; i < count; ++i) {
        const uint64_t bits = std::bit_cast<uint64_t>(values[i]);
        for (size_t b = 0; b < 8; ++b) {
            bytes[i * 8 + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xFF); // little-endian
        }
    }
    return b64_encode_bytes(bytes);
}

std::vector<double> base64_decode_doubles(const std::string& text) {
    const std::vector<unsigned char> bytes = b64_decode_bytes(text);
    if (bytes.size() % 8 != 0) {
        throw std::invalid_argument("base64: payload is not a whole number of float64s");
    }
    std::vector<double> values(bytes.size() / 8);
    for (size_t i = 0; i < values.size(); ++i) {
        uint64_t bits = 0;
        for (size_t b = 0; b < 8; ++b) bits |= static_cast<uint64_t>(bytes[i * 8 + b]) << (8 * b);
        values[i] = std::bit_cast<double>(bits);
    }
    return values;
}

namespace {

json layer_to_json(const DenseLayer& layer) {
    return json{
        {"rows", layer.weights.rows},
        {"cols", layer.weights.cols},
        {"weights", base64_encode(layer.weights.data.data(), layer.weights.size())},
        {"bias", base64_encode(layer.bias.data(), layer.bias.size())},
        {"activation", activation_name(layer.activation)},
    };
}

DenseLayer layer_from_json(const json& j) {
    DenseLayer layer;
    layer.weights.rows = j.at("rows").get<size_t>();
    layer.weights.cols = j.at("cols").get<size_t>();
    layer.weights.data = base64_decode_doubles(j.at("weights").get<std::string>());
    layer.bias = base64_decode_doubles(j.at("bias").get<std::string>());
    layer.activation = activation_from_name(j.at("activation").get<std::string>());
    if (layer.weights.data.size() != layer.weights.rows * layer.weights.cols ||
        layer.bias.size() != layer.weights.cols) {
        throw std::invalid_argument("checkpoint: layer payload sizes inconsistent with dims");
    }
    return layer;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("checkpoint: write failed for '" + path + "'");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("checkpoint: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("checkpoint: '" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

} // namespace

void save_checkpoint(const D2VModel& model, const std::string& path, const std::string& config_hash) {
    const json j{
        {"schema_version", kCheckpointSchemaVersion},
        {"kind", "d2v"},
        {"config_hash", config_hash},
        {"dims",
         {{"features", model.dims.features},
          {"task_hidden", model.dims.task_hidden},
          {"embed_dim", model.dims.embed_dim},
          {"main_hidden", model.dims.main_hidden},
          {"classes", model.dims.classes}}},
        {"task_hidden", layer_to_json(model.task.hidden)},
        {"task_projection", layer_to_json(model.task.projection)},
        {"main_hidden", layer_to_json(model.main.hidden)},
        {"main_output", layer_to_json(model.main.output)},
    };
    write_json_file(j, path);
}

void save_checkpoint(const PoolingMlp& mlp, const std::string& path, const std::string& config_hash) {
    const json j{
        {"schema_version", kCheckpointSchemaVersion},
        {"kind", "baseline"},
        {"config_hash", config_hash},
        {"hidden", layer_to_json(mlp.hidden)},
        {"output", layer_to_json(mlp.output)},
    };
    write_json_file(j, path);
}

const D2VModel& Checkpoint::d2v() const {
    if (kind != "d2v") throw std::invalid_argument("checkpoint: expected a d2v model, found '" + kind + "'");
    return std::get<D2VModel>(model);
}

const PoolingMlp& Checkpoint::baseline() const {
    if (kind != "baseline") {
        throw std::invalid_argument("checkpoint: expected a baseline model, found '" + kind + "'");
    }
    return std::get<PoolingMlp>(model);
}

Checkpoint load_checkpoint(const std::string& path) {
    const json j = read_json_file(path);
    const int version = j.at("schema_version").get<int>();
    if (version != kCheckpointSchemaVersion) {
        throw std::invalid_argument("checkpoint: unsupported schema_version " + std::to_string(version));
    }
    Checkpoint cp;
    cp.kind = j.at("kind").get<std::string>();
    cp.config_hash = j.at("config_hash").get<std::string>();
    if (cp.kind == "d2v") {
        D2VModel model;
        const json& dims = j.at("dims");
        model.dims.features = dims.at("features").get<size_t>();
        model.dims.task_hidden = dims.at("task_hidden").get<size_t>();
        model.dims.embed_dim = dims.at("embed_dim").get<size_t>();
        model.dims.main_hidden = dims.at("main_hidden").get<size_t>();
        model.dims.classes = dims.at("classes").get<size_t>();
        model.task.hidden = layer_from_json(j.at("task_hidden"));
        model.task.projection = layer_from_json(j.at("task_projection"));
        model.main.hidden = layer_from_json(j.at("main_hidden"));
        model.main.output = layer_from_json(j.at("main_output"));
        if (model.task.hidden.in_dim() != model.dims.features ||
            model.task.projection.out_dim() != model.dims.embed_dim ||
            model.main.hidden.in_dim() != model.dims.features + model.dims.embed_dim ||
            model.main.output.out_dim() != model.dims.classes) {
            throw std::invalid_argument("checkpoint: layer shapes inconsistent with dims");
        }
        cp.model = std::move(model);
    } else if (cp.kind == "baseline") {
        PoolingMlp mlp;
        mlp.hidden = layer_from_json(j.at("hidden"));
        mlp.output = layer_from_json(j.at("output"));
        cp.model = std::move(mlp);
    } else {
        throw std::invalid_argument("checkpoint: unknown kind '" + cp.kind + "'");
    }
    return cp;
}

} // namespace d2v
