#pragma once

#include "d2v/model.hpp"
#include "d2v/synth.hpp"

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace d2v {

/// task_batch value meaning "feed the entire domain to the task network".
inline constexpr size_t kTaskBatchAll = 0;

/// Everything that determines a run, given the data. Serializable; the run
/// is a pure function of (config, sources).
struct ExperimentConfig {
    double lr = 3e-3;
    double weight_decay = 0.0;
    size_t task_hidden = 32;  // H_t
    size_t main_hidden = 64;  // H_m
    size_t embed_dim = 16;    // D_t
    size_t main_batch = 32;
    size_t task_batch = kTaskBatchAll;
    size_t epochs = 200;
    uint64_t seed = 0;
};

/// One evaluation snapshot. The train-form metrics average per-domain means
/// over domains; the test-form metrics pool all points.
struct MetricsRecord {
    size_t epoch = 0;
    double empirical_train_error = 0.0; // mean over domains of per-domain mean cross-entropy
    double empirical_test_error = 0.0;  // per-point mean cross-entropy over all points
    double train_accuracy = 0.0;        // 1 - domain-averaged 0/1 error
    double test_accuracy = 0.0;         // 1 - pooled 0/1 error
};

struct TrainOptions {
    size_t eval_period = 1; // evaluate every k epochs; epoch 0 and the final epoch always
};

struct TrainResult {
    D2VModel model;
    std::vector<MetricsRecord> history;
};

struct BaselineTrainResult {
    PoolingMlp model;
    std::vector<MetricsRecord> history;
};

/// Two-batch training: each iteration picks one domain (per-epoch shuffled
/// round-robin), draws a labeled main batch and an unlabeled task batch from
/// that same domain, and applies one Adam step. One epoch visits every
/// source domain once. Deterministic given config.seed.
TrainResult train(const ExperimentConfig& config, const std::vector<DomainDataset>& sources,
                  const TrainOptions& options = {});

/// Pools all source rows and trains a plain MLP on uniform batches; the
/// training path never touches domain identity. Iteration count per epoch
/// matches train() for comparability.
BaselineTrainResult train_baseline(const ExperimentConfig& config,
                                   const std::vector<DomainDataset>& sources,
                                   const TrainOptions& options = {});

/// Embeds each domain from all of its unlabeled features, predicts every
/// point, and aggregates both metric forms. If `predictions` is non-null it
/// receives one vector of predicted classes per domain.
MetricsRecord evaluate(const D2VModel& model, const std::vector<DomainDataset>& domains,
                       size_t epoch = 0, std::vector<std::vector<int>>* predictions = nullptr);

MetricsRecord evaluate_baseline(const PoolingMlp& mlp, const std::vector<DomainDataset>& domains,
                                size_t epoch = 0,
                                std::vector<std::vector<int>>* predictions = nullptr);

struct SearchSpace {
    double lr_min = 1e-4;
    double lr_max = 1e-1;
    double weight_decay_min = 1e-7;
    double weight_decay_max = 1e-2;
    std::vector<size_t> task_hidden_choices = {16, 32, 64, 128};
    std::vector<size_t> main_hidden_choices = {16, 32, 64, 128};
    size_t trials = 1;
};

struct SearchTrial {
    size_t index = 0;
    ExperimentConfig config;
    double validation_accuracy = 0.0;
};

struct SearchResult {
    ExperimentConfig best;
    size_t best_index = 0;
    std::vector<SearchTrial> trials;
};

/// Random hyperparameter search: log-uniform draws for lr and weight decay,
/// uniform draws over the hidden-size choice sets. Every trial trains with
/// the base config's seed and is scored by pooled validation accuracy; ties
/// go to the earliest trial.
SearchResult random_search(const SearchSpace& space, const std::vector<DomainDataset>& sources,
                           const std::vector<DomainDataset>& validation,
                           const ExperimentConfig& base = {}, size_t threads = 0);

/// Splits sources into (train, validation) by domain, holding out
/// max(1, fraction * N) domains. Used when no validation set is supplied.
void holdout_by_domain(const std::vector<DomainDataset>& sources, double fraction, uint64_t seed,
                       std::vector<DomainDataset>& train_out,
                       std::vector<DomainDataset>& validation_out);

struct SweepCell {
    size_t domains = 0;
    size_t examples = 0;
    double d2v_accuracy = 0.0;
    double baseline_accuracy = 0.0;
};

const std::vector<size_t>& default_domain_counts();  // 8..256, doubling
const std::vector<size_t>& default_example_counts(); // 8..1024, doubling

/// For every (domains, examples) cell: generate a training suite, train D2V
/// and the pooling baseline, and score both on the fixed 44 x 1024 test
/// suite. Accuracies are averaged over trials_per_cell independent seeds.
/// Cells run in parallel; `progress` (if set) receives one line per cell.
std::vector<SweepCell> heatmap_sweep(const std::vector<size_t>& domain_counts,
                                     const std::vector<size_t>& example_counts, uint64_t seed,
                                     size_t trials_per_cell, const ExperimentConfig& base = {},
                                     size_t threads = 0, std::ostream* progress = nullptr);

namespace instrumentation {
/// Bumped by every domain-structured access on a training path (per-domain
/// batch draws, embedding computation). Lets tests assert that baseline
/// training never reads domain structure.
extern std::atomic<uint64_t> domain_structured_accesses;
} // namespace instrumentation

} // namespace d2v
