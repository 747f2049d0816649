#include "d2v/checkpoint.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

using namespace d2v;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("base64 round-trips arbitrary doubles exactly") {
    Rng rng(14);
    for (size_t count : {0u, 1u, 2u, 3u, 17u}) {
        std::vector<double> values(count);
        for (auto& v : values) v = rng.uniform(-1e6, 1e6);
        const std::string encoded = base64_encode(values.data(), values.size());
        CHECK(base64_decode_doubles(encoded) == values);
    }
}

TEST_CASE("base64 decoder rejects malformed input") {
    CHECK_THROWS_AS(base64_decode_doubles("abc"), std::invalid_argument);
    CHECK_THROWS_AS(base64_decode_doubles("ab=c"), std::invalid_argument);
    CHECK_THROWS_AS(base64_decode_doubles("a!bc"), std::invalid_argument);
    CHECK_THROWS_AS(base64_decode_doubles("AAAA"), std::invalid_argument); // 3 bytes, not 8
}

TEST_CASE("d2v checkpoints round-trip bit-exactly") {
    Rng rng(15);
    const ModelDims dims{3, 5, 4, 6, 3};
    const D2VModel model = D2VModel::init(dims, rng);
    const std::string path = temp_path("d2v_ckpt.json");
    save_checkpoint(model, path, "deadbeefdeadbeef");

    const Checkpoint loaded = load_checkpoint(path);
    std::remove(path.c_str());
    CHECK(loaded.kind == "d2v");
    CHECK(loaded.config_hash == "deadbeefdeadbeef");
    const D2VModel& restored = loaded.d2v();
    CHECK(restored.dims.features == 3);
    CHECK(restored.dims.classes == 3);
    CHECK(restored.task.hidden.weights.data == model.task.hidden.weights.data);
    CHECK(restored.task.projection.weights.data == model.task.projection.weights.data);
    CHECK(restored.main.hidden.weights.data == model.main.hidden.weights.data);
    CHECK(restored.main.output.weights.data == model.main.output.weights.data);
    CHECK(restored.main.output.bias == model.main.output.bias);
    CHECK(restored.task.hidden.activation == Activation::ReLU);
}

TEST_CASE("baseline checkpoints round-trip and refuse the wrong accessor") {
    Rng rng(16);
    const PoolingMlp mlp = PoolingMlp::init(4, 7, 2, rng);
    const std::string path = temp_path("d2v_baseline_ckpt.json");
    save_checkpoint(mlp, path, "0000000000000000");

    const Checkpoint loaded = load_checkpoint(path);
    std::remove(path.c_str());
    CHECK(loaded.kind == "baseline");
    CHECK(loaded.baseline().hidden.weights.data == mlp.hidden.weights.data);
    CHECK_THROWS_AS(loaded.d2v(), std::invalid_argument);
}

TEST_CASE("load_checkpoint rejects garbage, bad versions, and missing files") {
    const std::string path = temp_path("d2v_garbage.json");
    {
        std::ofstream out(path);
        out << "not json at all";
    }
    CHECK_THROWS_AS(load_checkpoint(path), std::invalid_argument);
    {
        std::ofstream out(path);
        out << R"({"schema_version": 99, "kind": "d2v", "config_hash": ""})";
    }
    CHECK_THROWS_AS(load_checkpoint(path), std::invalid_argument);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_checkpoint(path), std::invalid_argument);
}

TEST_CASE("config hashes are stable and sensitive to every field") {
    const nlohmann::json a{{"lr", 0.001}, {"seed", 7}};
    const nlohmann::json b{{"lr", 0.001}, {"seed", 8}};
    CHECK(config_hash(a) == config_hash(a));
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}
