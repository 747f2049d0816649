// Command-line surface for the Domain2Vec toolkit: synthetic data generation,
// training, evaluation, the heatmap sweep, random hyperparameter search, and
// similarity-matrix emission. Every command writes a manifest so a run can be
// reproduced from its artifact directory alone.

#include "d2v/checkpoint.hpp"
#include "d2v/config_io.hpp"
#include "d2v/dataset_io.hpp"
#include "d2v/manifest.hpp"
#include "d2v/parallel.hpp"
#include "d2v/similarity.hpp"
#include "d2v/trainer.hpp"
#include "d2v/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void prepare_out_dir(const std::string& out, bool force) {
    const fs::path dir(out);
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) {
            throw std::invalid_argument("--out '" + out + "' exists and is not a directory");
        }
        if (!fs::is_empty(dir) && !force) {
            throw std::invalid_argument("--out '" + out + "' is not empty; pass --force to overwrite");
        }
    } else {
        fs::create_directories(dir);
    }
}

// --data accepts either a CSV file or a directory containing data.csv
std::string resolve_data_csv(const std::string& data) {
    fs::path path(data);
    if (fs::is_directory(path)) path /= "data.csv";
    if (!fs::exists(path)) {
        throw std::invalid_argument("--data: '" + path.string() + "' does not exist");
    }
    return path.string();
}

// optional sidecar written by gen-synth; maps domain_id -> rotation angle
std::optional<std::map<std::string, double>> load_thetas_sidecar(const std::string& data_csv) {
    const fs::path path = fs::path(data_csv).parent_path() / "thetas.csv";
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || (line != "domain,theta" && line != "domain,theta\r")) {
        throw std::invalid_argument(path.string() + ": expected header 'domain,theta'");
    }
    std::map<std::string, double> thetas;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                        ": expected 'domain,theta'");
        }
        thetas[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    return thetas;
}

void write_thetas_sidecar(const std::vector<d2v::DomainDataset>& suite, const std::string& out_dir) {
    const fs::path path = fs::path(out_dir) / "thetas.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "domain,theta\n";
    char buf[64];
    for (const auto& ds : suite) {
        std::snprintf(buf, sizeof(buf), "%.17g", ds.theta.value());
        out << ds.domain_id << ',' << buf << "\n";
    }
}

void write_metrics_jsonl(const std::vector<d2v::MetricsRecord>& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const auto& rec : history) out << d2v::metrics_to_json(rec).dump() << "\n";
}

d2v::ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("--config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("--config: '" + path + "' is not valid JSON: " + e.what());
    }
    return d2v::config_from_json(j);
}

std::vector<size_t> parse_count_list(const std::string& text, const char* flag) {
    std::vector<size_t> counts;
    std::string current;
    auto flush = [&] {
        if (current.empty()) throw std::invalid_argument(std::string(flag) + ": empty entry");
        const long v = std::stol(current);
        if (v < 1) throw std::invalid_argument(std::string(flag) + ": counts must be >= 1");
        counts.push_back(static_cast<size_t>(v));
        current.clear();
    };
    for (char c : text) {
        if (c == ',') {
            flush();
        } else if (c >= '0' && c <= '9') {
            current += c;
        } else {
            throw std::invalid_argument(std::string(flag) + ": invalid character '" + c + "'");
        }
    }
    flush();
    return counts;
}

// Shared flag bundle for commands that train models.
struct ConfigFlags {
    std::string config_path;
    double lr = 0.0;
    double weight_decay = -1.0;
    size_t task_hidden = 0;
    size_t main_hidden = 0;
    long embed_dim = -1;
    size_t main_batch = 0;
    std::string task_batch;
    long epochs = -1;
    long long seed = -1;

    void attach(CLI::App* cmd, bool with_config_file = true) {
        if (with_config_file) {
            cmd->add_option("--config", config_path, "JSON config file; flags override its values");
        }
        cmd->add_option("--lr", lr, "learning rate");
        cmd->add_option("--weight-decay", weight_decay, "decoupled weight decay");
        cmd->add_option("--task-hidden", task_hidden, "task-network hidden units");
        cmd->add_option("--main-hidden", main_hidden, "main-network hidden units");
        cmd->add_option("--embed-dim", embed_dim, "domain embedding dimension");
        cmd->add_option("--main-batch", main_batch, "labeled batch size for the main network");
        cmd->add_option("--task-batch", task_batch, "unlabeled batch size for the task network, or 'all'");
        cmd->add_option("--epochs", epochs, "training epochs");
        cmd->add_option("--seed", seed, "master seed");
    }

    d2v::ExperimentConfig resolve() const {
        d2v::ExperimentConfig config;
        if (!config_path.empty()) config = load_config_file(config_path);
        if (lr > 0.0) config.lr = lr;
        if (weight_decay >= 0.0) config.weight_decay = weight_decay;
        if (task_hidden > 0) config.task_hidden = task_hidden;
        if (main_hidden > 0) config.main_hidden = main_hidden;
        if (embed_dim >= 0) config.embed_dim = static_cast<size_t>(embed_dim);
        if (main_batch > 0) config.main_batch = main_batch;
        if (!task_batch.empty()) {
            if (task_batch == "all") {
                config.task_batch = d2v::kTaskBatchAll;
            } else {
                const long v = std::stol(task_batch);
                if (v < 1) throw std::invalid_argument("--task-batch must be >= 1 or 'all'");
                config.task_batch = static_cast<size_t>(v);
            }
        }
        if (epochs >= 0) config.epochs = static_cast<size_t>(epochs);
        if (seed >= 0) config.seed = static_cast<uint64_t>(seed);
        return config;
    }
};

d2v::RunManifest make_manifest(const std::string& command, const json& config, uint64_t seed,
                               std::vector<std::string> inputs, std::vector<std::string> outputs,
                               double duration) {
    d2v::RunManifest manifest;
    manifest.command = command;
    manifest.config = config;
    manifest.config_hash = d2v::config_hash(config);
    manifest.seed = seed;
    manifest.input_paths = std::move(inputs);
    manifest.output_paths = std::move(outputs);
    manifest.toolkit_version = d2v::kVersion;
    manifest.duration_seconds = duration;
    return manifest;
}

// ---------------------------------------------------------------------------
// gen-synth
// ---------------------------------------------------------------------------

int run_gen_synth(size_t domains, size_t examples, uint64_t seed, const std::string& out, bool force) {
    Timer timer;
    prepare_out_dir(out, force);

    const std::vector<d2v::DomainDataset> suite =
        d2v::generate_suite(d2v::SynthSpec{domains, examples, seed});
    const std::string data_path = (fs::path(out) / "data.csv").string();
    d2v::save_csv(suite, data_path);
    write_thetas_sidecar(suite, out);

    const json config{{"domains", domains}, {"examples", examples}, {"seed", seed}};
    d2v::write_manifest(make_manifest("gen-synth", config, seed, {},
                                      {"data.csv", "thetas.csv"}, timer.seconds()),
                        out);
    std::cout << "wrote " << suite.size() << " domains (" << domains * examples << " rows) to "
              << data_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

int run_train(const std::string& data, const ConfigFlags& flags, const std::string& method,
              size_t eval_period, const std::string& out, bool force) {
    Timer timer;
    const std::string data_csv = resolve_data_csv(data);
    const d2v::ExperimentConfig config = flags.resolve();
    prepare_out_dir(out, force);

    const std::vector<d2v::DomainDataset> sources = d2v::to_datasets(d2v::load_csv(data_csv));
    const json config_json = d2v::config_to_json(config);
    const std::string hash = d2v::config_hash(config_json);

    d2v::TrainOptions options;
    options.eval_period = eval_period == 0 ? 1 : eval_period;

    const std::string checkpoint_path = (fs::path(out) / "checkpoint.json").string();
    const std::string metrics_path = (fs::path(out) / "metrics.jsonl").string();
    std::vector<d2v::MetricsRecord> history;
    if (method == "d2v") {
        d2v::TrainResult result = d2v::train(config, sources, options);
        d2v::save_checkpoint(result.model, checkpoint_path, hash);
        history = std::move(result.history);
    } else if (method == "baseline") {
        d2v::BaselineTrainResult result = d2v::train_baseline(config, sources, options);
        d2v::save_checkpoint(result.model, checkpoint_path, hash);
        history = std::move(result.history);
    } else {
        throw std::invalid_argument("--method must be 'd2v' or 'baseline'");
    }
    write_metrics_jsonl(history, metrics_path);

    d2v::write_manifest(make_manifest("train", config_json, config.seed, {data_csv},
                                      {"checkpoint.json", "metrics.jsonl"}, timer.seconds()),
                        out);
    const auto& final_rec = history.back();
    std::cout << "trained " << method << " for " << config.epochs << " epochs; final train error "
              << final_rec.empirical_train_error << ", accuracy " << final_rec.test_accuracy << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int run_eval(const std::string& model_path, const std::string& data, const std::string& out,
             bool force) {
    Timer timer;
    const std::string data_csv = resolve_data_csv(data);
    if (!fs::exists(model_path)) {
        throw std::invalid_argument("--model: '" + model_path + "' does not exist");
    }
    prepare_out_dir(out, force);

    const d2v::Checkpoint checkpoint = d2v::load_checkpoint(model_path);
    const std::vector<d2v::DomainDataset> domains = d2v::to_datasets(d2v::load_csv(data_csv));
    const d2v::MetricsRecord metrics = checkpoint.kind == "d2v"
                                           ? d2v::evaluate(checkpoint.d2v(), domains)
                                           : d2v::evaluate_baseline(checkpoint.baseline(), domains);

    const std::string metrics_path = (fs::path(out) / "metrics.jsonl").string();
    write_metrics_jsonl({metrics}, metrics_path);

    const json config{{"model", model_path}, {"model_config_hash", checkpoint.config_hash}};
    d2v::write_manifest(make_manifest("eval", config, 0, {model_path, data_csv},
                                      {"metrics.jsonl"}, timer.seconds()),
                        out);
    std::cout << "evaluated " << domains.size() << " domains: pooled accuracy "
              << metrics.test_accuracy << ", domain-mean accuracy " << metrics.train_accuracy << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int run_sweep(const std::string& domain_counts_text, const std::string& example_counts_text,
              size_t trials, const ConfigFlags& flags, const std::string& out, bool force) {
    Timer timer;
    const d2v::ExperimentConfig base = flags.resolve();
    const uint64_t seed = base.seed;
    prepare_out_dir(out, force);

    const std::vector<size_t> domain_counts =
        domain_counts_text.empty() ? d2v::default_domain_counts()
                                   : parse_count_list(domain_counts_text, "--domain-counts");
    const std::vector<size_t> example_counts =
        example_counts_text.empty() ? d2v::default_example_counts()
                                    : parse_count_list(example_counts_text, "--example-counts");

    const std::vector<d2v::SweepCell> cells = d2v::heatmap_sweep(
        domain_counts, example_counts, seed, trials, base, d2v::max_threads(), &std::cerr);

    const std::string grid_path = (fs::path(out) / "grid.csv").string();
    std::ofstream grid(grid_path);
    if (!grid) throw std::runtime_error("cannot open '" + grid_path + "' for writing");
    grid << "domains,examples,method,accuracy\n";
    char buf[64];
    for (const auto& cell : cells) {
        std::snprintf(buf, sizeof(buf), "%.17g", cell.d2v_accuracy);
        grid << cell.domains << ',' << cell.examples << ",d2v," << buf << "\n";
        std::snprintf(buf, sizeof(buf), "%.17g", cell.baseline_accuracy);
        grid << cell.domains << ',' << cell.examples << ",baseline," << buf << "\n";
    }
    grid.close();

    json config = d2v::config_to_json(base);
    config["domain_counts"] = domain_counts;
    config["example_counts"] = example_counts;
    config["trials_per_cell"] = trials;
    config["sweep_seed"] = seed;
    d2v::write_manifest(make_manifest("sweep", config, seed, {}, {"grid.csv"}, timer.seconds()), out);
    std::cout << "swept " << cells.size() << " cells (" << cells.size() * 2 << " grid rows) to "
              << grid_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

int run_search(const std::string& space_path, const std::string& data,
               const std::string& validation_data, const ConfigFlags& flags, const std::string& out,
               bool force) {
    Timer timer;
    const std::string data_csv = resolve_data_csv(data);
    std::ifstream space_in(space_path);
    if (!space_in) throw std::invalid_argument("--space: cannot open '" + space_path + "'");
    json space_json;
    try {
        space_in >> space_json;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("--space: '" + space_path + "' is not valid JSON: " + e.what());
    }
    const d2v::SearchSpace space = d2v::search_space_from_json(space_json);
    const d2v::ExperimentConfig base = flags.resolve();
    prepare_out_dir(out, force);

    std::vector<d2v::DomainDataset> sources = d2v::to_datasets(d2v::load_csv(data_csv));
    std::vector<d2v::DomainDataset> validation;
    std::vector<std::string> inputs{space_path, data_csv};
    if (!validation_data.empty()) {
        const std::string validation_csv = resolve_data_csv(validation_data);
        validation = d2v::to_datasets(d2v::load_csv(validation_csv));
        inputs.push_back(validation_csv);
    } else {
        // hold out 20% of source domains (at least one) for validation
        std::vector<d2v::DomainDataset> kept;
        d2v::holdout_by_domain(sources, 0.2, base.seed, kept, validation);
        sources = std::move(kept);
    }

    const d2v::SearchResult result =
        d2v::random_search(space, sources, validation, base, d2v::max_threads());

    const std::string trials_path = (fs::path(out) / "trials.jsonl").string();
    std::ofstream trials(trials_path);
    if (!trials) throw std::runtime_error("cannot open '" + trials_path + "' for writing");
    for (const auto& trial : result.trials) {
        trials << json{{"trial", trial.index},
                       {"config", d2v::config_to_json(trial.config)},
                       {"validation_accuracy", trial.validation_accuracy}}
                      .dump()
               << "\n";
    }
    trials.close();

    const std::string best_path = (fs::path(out) / "best_config.json").string();
    std::ofstream best(best_path);
    best << d2v::config_to_json(result.best).dump(2) << "\n";
    best.close();

    json config = space_json;
    config["base"] = d2v::config_to_json(base);
    d2v::write_manifest(make_manifest("search", config, base.seed, inputs,
                                      {"trials.jsonl", "best_config.json"}, timer.seconds()),
                        out);
    std::cout << "ran " << result.trials.size() << " trials; best trial " << result.best_index
              << " with validation accuracy "
              << result.trials[result.best_index].validation_accuracy << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// similarity
// ---------------------------------------------------------------------------

int run_similarity(const std::string& model_path, const std::string& data, const std::string& sigma_text,
                   uint64_t seed, const std::string& out, bool force) {
    Timer timer;
    const std::string data_csv = resolve_data_csv(data);
    if (!fs::exists(model_path)) {
        throw std::invalid_argument("--model: '" + model_path + "' does not exist");
    }
    prepare_out_dir(out, force);

    const d2v::Checkpoint checkpoint = d2v::load_checkpoint(model_path);
    std::vector<d2v::DomainDataset> domains = d2v::to_datasets(d2v::load_csv(data_csv));
    const auto thetas_by_id = load_thetas_sidecar(data_csv);
    if (thetas_by_id) {
        for (auto& ds : domains) {
            const auto it = thetas_by_id->find(ds.domain_id);
            if (it != thetas_by_id->end()) ds.theta = it->second;
        }
    }
    const bool have_thetas =
        std::all_of(domains.begin(), domains.end(), [](const auto& ds) { return ds.theta.has_value(); });
    if (have_thetas) {
        // display convention: order rows by ascending rotation angle
        std::stable_sort(domains.begin(), domains.end(),
                         [](const auto& a, const auto& b) { return *a.theta < *b.theta; });
    }

    std::vector<d2v::DomainEmbedding> embeddings;
    embeddings.reserve(domains.size());
    for (const auto& ds : domains) {
        embeddings.push_back(d2v::embed(checkpoint.d2v().task, ds.features, ds.domain_id));
    }

    double sigma;
    if (sigma_text == "auto") {
        sigma = d2v::median_sigma(embeddings);
    } else {
        sigma = std::stod(sigma_text);
        if (!(sigma > 0.0)) throw std::invalid_argument("--sigma must be positive or 'auto'");
    }

    const d2v::SimilarityMatrix estimated = d2v::estimated_similarity(embeddings, sigma);
    d2v::write_similarity_csv(estimated, (fs::path(out) / "estimated_similarity.csv").string());
    d2v::write_similarity_pgm(estimated, (fs::path(out) / "estimated_similarity.pgm").string());
    std::vector<std::string> outputs{"estimated_similarity.csv", "estimated_similarity.pgm"};

    std::vector<std::string> ids;
    ids.reserve(domains.size());
    for (const auto& ds : domains) ids.push_back(ds.domain_id);
    d2v::Rng rng(d2v::derive_seed(seed, d2v::streams::kSweep, 0));
    const d2v::SimilarityMatrix random = d2v::random_similarity(ids, rng);
    d2v::write_similarity_csv(random, (fs::path(out) / "random_similarity.csv").string());
    d2v::write_similarity_pgm(random, (fs::path(out) / "random_similarity.pgm").string());
    outputs.push_back("random_similarity.csv");
    outputs.push_back("random_similarity.pgm");

    if (have_thetas) {
        std::vector<double> thetas;
        thetas.reserve(domains.size());
        for (const auto& ds : domains) thetas.push_back(*ds.theta);
        const d2v::SimilarityMatrix known =
            d2v::known_similarity(ids, thetas, d2v::median_sigma_thetas(thetas));
        d2v::write_similarity_csv(known, (fs::path(out) / "known_similarity.csv").string());
        d2v::write_similarity_pgm(known, (fs::path(out) / "known_similarity.pgm").string());
        outputs.push_back("known_similarity.csv");
        outputs.push_back("known_similarity.pgm");

        const d2v::Correlation est_vs_known = d2v::compare(estimated, known);
        const d2v::Correlation known_vs_random = d2v::compare(known, random);
        std::ofstream cmp_out(fs::path(out) / "comparison.json");
        cmp_out << json{{"estimated_vs_known",
                         {{"pearson", est_vs_known.pearson}, {"spearman", est_vs_known.spearman}}},
                        {"known_vs_random",
                         {{"pearson", known_vs_random.pearson}, {"spearman", known_vs_random.spearman}}}}
                       .dump(2)
                << "\n";
        outputs.push_back("comparison.json");
        std::cout << "estimated vs known similarity: pearson " << est_vs_known.pearson
                  << ", spearman " << est_vs_known.spearman << "\n";
    }

    const json config{{"model", model_path}, {"sigma", sigma_text}, {"seed", seed}};
    d2v::write_manifest(make_manifest("similarity", config, seed, {model_path, data_csv},
                                      std::move(outputs), timer.seconds()),
                        out);
    std::cout << "wrote " << domains.size() << "x" << domains.size() << " similarity matrices to "
              << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Domain2Vec toolkit"};
    app.set_version_flag("--version", d2v::kVersion);
    app.require_subcommand(1);

    // gen-synth
    auto* gen = app.add_subcommand("gen-synth", "generate a rotated-halfspace synthetic suite");
    size_t gen_domains = 0, gen_examples = 0;
    long long gen_seed = 0;
    std::string gen_out;
    bool gen_force = false;
    gen->add_option("--domains", gen_domains, "number of domains")->required()->check(CLI::PositiveNumber);
    gen->add_option("--examples", gen_examples, "examples per domain")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "master seed")->default_val(0);
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_flag("--force", gen_force, "allow writing into a non-empty directory");

    // train
    auto* train_cmd = app.add_subcommand("train", "train a model on a multi-domain CSV");
    std::string train_data, train_out, train_method = "d2v";
    size_t train_eval_period = 1;
    bool train_force = false;
    ConfigFlags train_flags;
    train_cmd->add_option("--data", train_data, "CSV file or directory with data.csv")->required();
    train_flags.attach(train_cmd);
    train_cmd->add_option("--method", train_method, "d2v or baseline")->default_val("d2v");
    train_cmd->add_option("--eval-period", train_eval_period, "evaluate every N epochs")->default_val(1);
    train_cmd->add_option("--out", train_out, "output directory")->required();
    train_cmd->add_flag("--force", train_force, "allow writing into a non-empty directory");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a multi-domain CSV");
    std::string eval_model, eval_data, eval_out;
    bool eval_force = false;
    eval_cmd->add_option("--model", eval_model, "checkpoint file")->required();
    eval_cmd->add_option("--data", eval_data, "CSV file or directory with data.csv")->required();
    eval_cmd->add_option("--out", eval_out, "output directory")->required();
    eval_cmd->add_flag("--force", eval_force, "allow writing into a non-empty directory");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "heatmap sweep over domain/example counts");
    std::string sweep_domains, sweep_examples, sweep_out;
    size_t sweep_trials = 1;
    bool sweep_force = false;
    ConfigFlags sweep_flags; // --seed here is the sweep master seed
    sweep_cmd->add_option("--domain-counts", sweep_domains, "comma list (default 8..256 doubling)");
    sweep_cmd->add_option("--example-counts", sweep_examples, "comma list (default 8..1024 doubling)");
    sweep_cmd->add_option("--trials", sweep_trials, "trials per cell")->default_val(1);
    sweep_flags.attach(sweep_cmd);
    sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
    sweep_cmd->add_flag("--force", sweep_force, "allow writing into a non-empty directory");

    // search
    auto* search_cmd = app.add_subcommand("search", "random hyperparameter search");
    std::string search_space, search_data, search_validation, search_out;
    bool search_force = false;
    ConfigFlags search_flags;
    search_cmd->add_option("--space", search_space, "JSON search-space file")->required();
    search_cmd->add_option("--data", search_data, "CSV file or directory with data.csv")->required();
    search_cmd->add_option("--validation-data", search_validation,
                           "validation CSV (default: hold out 20% of source domains)");
    search_flags.attach(search_cmd);
    search_cmd->add_option("--out", search_out, "output directory")->required();
    search_cmd->add_flag("--force", search_force, "allow writing into a non-empty directory");

    // similarity
    auto* sim_cmd = app.add_subcommand("similarity", "emit estimated/known/random similarity matrices");
    std::string sim_model, sim_data, sim_sigma = "auto", sim_out;
    long long sim_seed = 0;
    bool sim_force = false;
    sim_cmd->add_option("--model", sim_model, "trained d2v checkpoint")->required();
    sim_cmd->add_option("--data", sim_data, "CSV file or directory with data.csv")->required();
    sim_cmd->add_option("--sigma", sim_sigma, "bandwidth, or 'auto' for the median heuristic")
        ->default_val("auto");
    sim_cmd->add_option("--seed", sim_seed, "seed for the random-similarity matrix")->default_val(0);
    sim_cmd->add_option("--out", sim_out, "output directory")->required();
    sim_cmd->add_flag("--force", sim_force, "allow writing into a non-empty directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            return run_gen_synth(gen_domains, gen_examples, static_cast<uint64_t>(gen_seed), gen_out,
                                 gen_force);
        }
        if (train_cmd->parsed()) {
            return run_train(train_data, train_flags, train_method, train_eval_period, train_out,
                             train_force);
        }
        if (eval_cmd->parsed()) return run_eval(eval_model, eval_data, eval_out, eval_force);
        if (sweep_cmd->parsed()) {
            return run_sweep(sweep_domains, sweep_examples, sweep_trials, sweep_flags, sweep_out,
                             sweep_force);
        }
        if (search_cmd->parsed()) {
            return run_search(search_space, search_data, search_validation, search_flags, search_out,
                              search_force);
        }
        if (sim_cmd->parsed()) {
            return run_similarity(sim_model, sim_data, sim_sigma, static_cast<uint64_t>(sim_seed),
                                  sim_out, sim_force);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
