#include "d2v/config_io.hpp"

#include <stdexcept>

namespace d2v {

using nlohmann::json;

json config_to_json(const ExperimentConfig& config) {
    json j{
        {"schema_version", kConfigSchemaVersion},
        {"lr", config.lr},
        {"weight_decay", config.weight_decay},
        {"task_hidden", config.task_hidden},
        {"main_hidden", config.main_hidden},
        {"embed_dim", config.embed_dim},
        {"main_batch", config.main_batch},
        {"epochs", config.epochs},
        {"seed", config.seed},
    };
    if (config.task_batch == kTaskBatchAll) {
        j["task_batch"] = "all";
    } else {
        j["task_batch"] = config.task_batch;
    }
    return j;
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw std::invalid_argument("config: field '" + field + "' " + what);
}

double get_positive_real(const json& j, const std::string& field, double fallback,
                         bool allow_zero = false) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number()) field_error(field, "must be a number");
    const double v = j.at(field).get<double>();
    if (v < 0.0 || (!allow_zero && v == 0.0)) field_error(field, "must be positive");
    return v;
}

size_t get_count(const json& j, const std::string& field, size_t fallback, size_t min_value = 1) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number_unsigned() && !j.at(field).is_number_integer()) {
        field_error(field, "must be a non-negative integer");
    }
    const int64_t v = j.at(field).get<int64_t>();
    if (v < static_cast<int64_t>(min_value)) {
        field_error(field, "must be >= " + std::to_string(min_value));
    }
    return static_cast<size_t>(v);
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: not a JSON object");
    static const char* known[] = {"schema_version", "lr",         "weight_decay", "task_hidden",
                                  "main_hidden",    "embed_dim",  "main_batch",   "task_batch",
                                  "epochs",         "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) field_error(it.key(), "is not a recognized config field");
    }
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion) {
        field_error("schema_version", "unsupported");
    }

    ExperimentConfig config;
    config.lr = get_positive_real(j, "lr", config.lr);
    config.weight_decay = get_positive_real(j, "weight_decay", config.weight_decay, true);
    config.task_hidden = get_count(j, "task_hidden", config.task_hidden);
    config.main_hidden = get_count(j, "main_hidden", config.main_hidden);
    config.embed_dim = get_count(j, "embed_dim", config.embed_dim, 0);
    config.main_batch = get_count(j, "main_batch", config.main_batch);
    config.epochs = get_count(j, "epochs", config.epochs, 0);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned()) {
            field_error("seed", "must be an integer");
        }
        config.seed = j.at("seed").get<uint64_t>();
    }
    if (j.contains("task_batch")) {
        const json& tb = j.at("task_batch");
        if (tb.is_string()) {
            if (tb.get<std::string>() != "all") field_error("task_batch", "must be 'all' or a count");
            config.task_batch = kTaskBatchAll;
        } else if (tb.is_number_unsigned() || tb.is_number_integer()) {
            const int64_t v = tb.get<int64_t>();
            if (v < 1) field_error("task_batch", "must be >= 1 or 'all'");
            config.task_batch = static_cast<size_t>(v);
        } else {
            field_error("task_batch", "must be 'all' or a count");
        }
    }
    return config;
}

json search_space_to_json(const SearchSpace& space) {
    return json{
        {"schema_version", kConfigSchemaVersion},
        {"lr", {{"min", space.lr_min}, {"max", space.lr_max}}},
        {"weight_decay", {{"min", space.weight_decay_min}, {"max", space.weight_decay_max}}},
        {"task_hidden", space.task_hidden_choices},
        {"main_hidden", space.main_hidden_choices},
        {"trials", space.trials},
    };
}

SearchSpace search_space_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("search space: not a JSON object");
    SearchSpace space;
    if (j.contains("lr")) {
        space.lr_min = j.at("lr").at("min").get<double>();
        space.lr_max = j.at("lr").at("max").get<double>();
    }
    if (j.contains("weight_decay")) {
        space.weight_decay_min = j.at("weight_decay").at("min").get<double>();
        space.weight_decay_max = j.at("weight_decay").at("max").get<double>();
    }
    if (j.contains("task_hidden")) {
        space.task_hidden_choices = j.at("task_hidden").get<std::vector<size_t>>();
    }
    if (j.contains("main_hidden")) {
        space.main_hidden_choices = j.at("main_hidden").get<std::vector<size_t>>();
    }
    if (j.contains("trials")) space.trials = j.at("trials").get<size_t>();
    return space;
}

json metrics_to_json(const MetricsRecord& record) {
    return json{
        {"epoch", record.epoch},
        {"empirical_train_error", record.empirical_train_error},
        {"empirical_test_error", record.empirical_test_error},
        {"train_accuracy", record.train_accuracy},
        {"test_accuracy", record.test_accuracy},
    };
}

} // namespace d2v
