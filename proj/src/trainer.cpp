#include "d2v/trainer.hpp"

#include "d2v/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace d2v {

namespace instrumentation {
std::atomic<uint64_t> domain_structured_accesses{0};
} // namespace instrumentation

namespace {

void note_domain_access() { instrumentation::domain_structured_accesses.fetch_add(1); }

struct DataShape {
    size_t features = 0;
    size_t classes = 0;
    size_t smallest_domain = 0;
};

DataShape inspect_sources(const std::vector<DomainDataset>& sources, const char* where) {
    if (sources.empty()) throw std::invalid_argument(std::string(where) + ": no source domains");
    DataShape shape;
    shape.features = sources.front().dim();
    shape.smallest_domain = sources.front().size();
    int max_label = -1;
    for (const auto& ds : sources) {
        if (ds.size() == 0) throw std::invalid_argument(std::string(where) + ": domain '" + ds.domain_id + "' is empty");
        if (ds.dim() != shape.features) {
            throw std::invalid_argument(std::string(where) + ": feature dimensions differ across domains (" +
                                        std::to_string(shape.features) + " vs " + std::to_string(ds.dim()) +
                                        " in '" + ds.domain_id + "')");
        }
        if (!ds.labels) throw std::invalid_argument(std::string(where) + ": domain '" + ds.domain_id + "' has no labels");
        shape.smallest_domain = std::min(shape.smallest_domain, ds.size());
        for (int label : *ds.labels) max_label = std::max(max_label, label);
    }
    shape.classes = static_cast<size_t>(max_label + 1);
    if (shape.classes < 2) shape.classes = 2;
    return shape;
}

void validate_config(const ExperimentConfig& config, const DataShape& shape, const char* where) {
    if (!(config.lr > 0.0)) throw std::invalid_argument(std::string(where) + ": lr must be > 0");
    if (config.weight_decay < 0.0) throw std::invalid_argument(std::string(where) + ": weight_decay must be >= 0");
    if (config.task_hidden == 0 || config.main_hidden == 0) {
        throw std::invalid_argument(std::string(where) + ": hidden sizes must be >= 1");
    }
    if (config.main_batch == 0) throw std::invalid_argument(std::string(where) + ": main_batch must be >= 1");
    if (config.main_batch > shape.smallest_domain) {
        throw std::invalid_argument(std::string(where) + ": main_batch " + std::to_string(config.main_batch) +
                                    " exceeds smallest domain size " + std::to_string(shape.smallest_domain));
    }
    if (config.task_batch != kTaskBatchAll && config.task_batch < config.main_batch) {
        throw std::invalid_argument(std::string(where) + ": task_batch must be >= main_batch or ALL");
    }
}

/// Adam slots for a fixed set of parameter blocks.
class AdamBundle {
public:
    explicit AdamBundle(const std::vector<ParamBlock>& blocks) {
        states_.reserve(blocks.size());
        for (const auto& b : blocks) states_.push_back(AdamState::for_size(b.size));
    }

    void step(std::vector<ParamBlock>& params, const std::vector<GradView>& grads, double lr,
              double weight_decay) {
        for (size_t i = 0; i < params.size(); ++i) {
            adam_step({params[i].data, params[i].size}, {grads[i].data, grads[i].size}, states_[i],
                      lr, weight_decay);
        }
    }

private:
    std::vector<AdamState> states_;
};

// first k entries of a partial Fisher-Yates pass over `indices`
void draw_without_replacement(std::vector<size_t>& indices, size_t k, Rng& rng) {
    const size_t n = indices.size();
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(rng.uniform_below(n - i));
        std::swap(indices[i], indices[j]);
    }
}

Matrix gather_rows(const Matrix& source, const std::vector<size_t>& indices, size_t count) {
    Matrix out(count, source.cols);
    for (size_t i = 0; i < count; ++i) {
        const double* src = source.row_ptr(indices[i]);
        double* dst = out.row_ptr(i);
        for (size_t j = 0; j < source.cols; ++j) dst[j] = src[j];
    }
    return out;
}

struct DomainScore {
    double loss_sum = 0.0;
    size_t correct = 0;
    size_t count = 0;
};

MetricsRecord aggregate_metrics(const std::vector<DomainScore>& scores, size_t epoch) {
    MetricsRecord rec;
    rec.epoch = epoch;
    double domain_loss_mean_sum = 0.0;
    double domain_acc_mean_sum = 0.0;
    double pooled_loss = 0.0;
    size_t pooled_correct = 0;
    size_t pooled_count = 0;
    for (const auto& s : scores) {
        domain_loss_mean_sum += s.loss_sum / static_cast<double>(s.count);
        domain_acc_mean_sum += static_cast<double>(s.correct) / static_cast<double>(s.count);
        pooled_loss += s.loss_sum;
        pooled_correct += s.correct;
        pooled_count += s.count;
    }
    const double n_domains = static_cast<double>(scores.size());
    rec.empirical_train_error = domain_loss_mean_sum / n_domains;
    rec.train_accuracy = domain_acc_mean_sum / n_domains;
    rec.empirical_test_error = pooled_loss / static_cast<double>(pooled_count);
    rec.test_accuracy = static_cast<double>(pooled_correct) / static_cast<double>(pooled_count);
    return rec;
}

DomainScore score_domain(const Matrix& logits, const std::vector<int>& labels,
                         std::vector<int>* predictions_out) {
    DomainScore score;
    score.count = logits.rows;
    const LossValue loss = softmax_cross_entropy(logits, labels);
    score.loss_sum = std::accumulate(loss.per_example.begin(), loss.per_example.end(), 0.0);
    std::vector<int> predicted = argmax_rows(logits);
    for (size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == labels[i]) ++score.correct;
    }
    if (predictions_out) *predictions_out = std::move(predicted);
    return score;
}

void require_labeled(const std::vector<DomainDataset>& domains, const char* where) {
    if (domains.empty()) throw std::invalid_argument(std::string(where) + ": no domains");
    for (const auto& ds : domains) {
        if (!ds.labels) {
            throw std::invalid_argument(std::string(where) + ": domain '" + ds.domain_id +
                                        "' has no labels");
        }
        if (ds.size() == 0) {
            throw std::invalid_argument(std::string(where) + ": domain '" + ds.domain_id + "' is empty");
        }
    }
}

} // namespace

MetricsRecord evaluate(const D2VModel& model, const std::vector<DomainDataset>& domains,
                       size_t epoch, std::vector<std::vector<int>>* predictions) {
    require_labeled(domains, "evaluate");
    if (predictions) predictions->assign(domains.size(), {});
    std::vector<DomainScore> scores;
    scores.reserve(domains.size());
    for (size_t i = 0; i < domains.size(); ++i) {
        const auto& ds = domains[i];
        const Matrix logits = forward(model, ds.features, ds.features);
        scores.push_back(score_domain(logits, *ds.labels, predictions ? &(*predictions)[i] : nullptr));
    }
    return aggregate_metrics(scores, epoch);
}

MetricsRecord evaluate_baseline(const PoolingMlp& mlp, const std::vector<DomainDataset>& domains,
                                size_t epoch, std::vector<std::vector<int>>* predictions) {
    require_labeled(domains, "evaluate_baseline");
    if (predictions) predictions->assign(domains.size(), {});
    std::vector<DomainScore> scores;
    scores.reserve(domains.size());
    for (size_t i = 0; i < domains.size(); ++i) {
        const auto& ds = domains[i];
        const Matrix logits = pooling_baseline_forward(mlp, ds.features);
        scores.push_back(score_domain(logits, *ds.labels, predictions ? &(*predictions)[i] : nullptr));
    }
    return aggregate_metrics(scores, epoch);
}

TrainResult train(const ExperimentConfig& config, const std::vector<DomainDataset>& sources,
                  const TrainOptions& options) {
    const DataShape shape = inspect_sources(sources, "train");
    validate_config(config, shape, "train");
    const size_t eval_period = options.eval_period == 0 ? 1 : options.eval_period;

    ModelDims dims;
    dims.features = shape.features;
    dims.task_hidden = config.task_hidden;
    dims.embed_dim = config.embed_dim;
    dims.main_hidden = config.main_hidden;
    dims.classes = shape.classes;

    Rng init_rng(derive_seed(config.seed, streams::kModelInit, 0));
    TrainResult result{D2VModel::init(dims, init_rng), {}};
    D2VModel& model = result.model;

    std::vector<ParamBlock> params = model.param_blocks();
    AdamBundle optimizer(params);
    Rng rng(derive_seed(config.seed, streams::kTrainLoop, 0));

    result.history.push_back(evaluate(model, sources, 0));

    std::vector<size_t> domain_order(sources.size());
    std::iota(domain_order.begin(), domain_order.end(), 0);
    std::vector<std::vector<size_t>> row_indices(sources.size());
    for (size_t k = 0; k < sources.size(); ++k) {
        row_indices[k].resize(sources[k].size());
        std::iota(row_indices[k].begin(), row_indices[k].end(), 0);
    }

    D2VGradients grads;
    std::vector<int> batch_labels(config.main_batch);
    for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(domain_order);
        for (size_t k : domain_order) {
            note_domain_access();
            const DomainDataset& dom = sources[k];
            std::vector<size_t>& indices = row_indices[k];

            draw_without_replacement(indices, config.main_batch, rng);
            const Matrix main_points = gather_rows(dom.features, indices, config.main_batch);
            for (size_t i = 0; i < config.main_batch; ++i) batch_labels[i] = (*dom.labels)[indices[i]];

            LossValue loss;
            if (config.task_batch == kTaskBatchAll || config.task_batch >= dom.size()) {
                loss = backward(model, main_points, dom.features, batch_labels, grads);
            } else {
                draw_without_replacement(indices, config.task_batch, rng);
                const Matrix task_points = gather_rows(dom.features, indices, config.task_batch);
                loss = backward(model, main_points, task_points, batch_labels, grads);
            }
            if (!std::isfinite(loss.loss)) {
                throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
            }
            optimizer.step(params, grads.grad_views(), config.lr, config.weight_decay);
        }
        if (epoch % eval_period == 0 || epoch == config.epochs) {
            result.history.push_back(evaluate(model, sources, epoch));
        }
    }
    return result;
}

BaselineTrainResult train_baseline(const ExperimentConfig& config,
                                   const std::vector<DomainDataset>& sources,
                                   const TrainOptions& options) {
    const DataShape shape = inspect_sources(sources, "train_baseline");
    validate_config(config, shape, "train_baseline");
    const size_t eval_period = options.eval_period == 0 ? 1 : options.eval_period;

    // pool every row once, up front; the training loop below sees only the pool
    size_t total_rows = 0;
    for (const auto& ds : sources) total_rows += ds.size();
    Matrix pooled(total_rows, shape.features);
    std::vector<int> pooled_labels(total_rows);
    size_t row = 0;
    for (const auto& ds : sources) {
        for (size_t i = 0; i < ds.size(); ++i, ++row) {
            for (size_t j = 0; j < shape.features; ++j) pooled(row, j) = ds.features(i, j);
            pooled_labels[row] = (*ds.labels)[i];
        }
    }

    Rng init_rng(derive_seed(config.seed, streams::kModelInit, 1));
    BaselineTrainResult result{PoolingMlp::init(shape.features, config.main_hidden, shape.classes, init_rng), {}};
    PoolingMlp& mlp = result.model;

    std::vector<ParamBlock> params = mlp.param_blocks();
    AdamBundle optimizer(params);
    Rng rng(derive_seed(config.seed, streams::kTrainLoop, 1));

    result.history.push_back(evaluate_baseline(mlp, sources, 0));

    std::vector<size_t> indices(total_rows);
    std::iota(indices.begin(), indices.end(), 0);
    size_t cursor = total_rows; // forces an initial shuffle

    const size_t iterations_per_epoch = sources.size();
    std::vector<size_t> batch_rows(config.main_batch);
    std::vector<int> batch_labels(config.main_batch);
    MlpGradients grads;
    for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        for (size_t it = 0; it < iterations_per_epoch; ++it) {
            for (size_t b = 0; b < config.main_batch; ++b) {
                if (cursor == total_rows) {
                    rng.shuffle(indices);
                    cursor = 0;
                }
                batch_rows[b] = indices[cursor++];
            }
            const Matrix batch = gather_rows(pooled, batch_rows, config.main_batch);
            for (size_t b = 0; b < config.main_batch; ++b) batch_labels[b] = pooled_labels[batch_rows[b]];

            const LossValue loss = pooling_baseline_backward(mlp, batch, batch_labels, grads);
            if (!std::isfinite(loss.loss)) {
                throw std::runtime_error("train_baseline: non-finite loss at epoch " + std::to_string(epoch));
            }
            optimizer.step(params, grads.grad_views(), config.lr, config.weight_decay);
        }
        if (epoch % eval_period == 0 || epoch == config.epochs) {
            result.history.push_back(evaluate_baseline(mlp, sources, epoch));
        }
    }
    return result;
}

SearchResult random_search(const SearchSpace& space, const std::vector<DomainDataset>& sources,
                           const std::vector<DomainDataset>& validation,
                           const ExperimentConfig& base, size_t threads) {
    if (space.trials == 0) throw std::invalid_argument("random_search: trials must be >= 1");
    if (!(space.lr_min > 0.0) || space.lr_max < space.lr_min) {
        throw std::invalid_argument("random_search: invalid lr range");
    }
    if (!(space.weight_decay_min > 0.0) || space.weight_decay_max < space.weight_decay_min) {
        throw std::invalid_argument("random_search: invalid weight_decay range (log-uniform needs > 0)");
    }
    if (space.task_hidden_choices.empty() || space.main_hidden_choices.empty()) {
        throw std::invalid_argument("random_search: hidden-size choice sets must be nonempty");
    }
    require_labeled(validation, "random_search (validation)");
    std::set<std::string> source_ids;
    for (const auto& ds : sources) source_ids.insert(ds.domain_id);
    for (const auto& ds : validation) {
        if (source_ids.count(ds.domain_id)) {
            throw std::invalid_argument("random_search: domain '" + ds.domain_id +
                                        "' appears in both sources and validation");
        }
    }

    SearchResult result;
    result.trials.resize(space.trials);
    const auto log_uniform = [](Rng& rng, double lo, double hi) {
        return lo == hi ? lo : std::exp(rng.uniform(std::log(lo), std::log(hi)));
    };
    parallel_for(space.trials, threads, [&](size_t t) {
        Rng rng(derive_seed(base.seed, streams::kSearch, t));
        ExperimentConfig config = base;
        config.lr = log_uniform(rng, space.lr_min, space.lr_max);
        config.weight_decay = log_uniform(rng, space.weight_decay_min, space.weight_decay_max);
        config.task_hidden =
            space.task_hidden_choices[rng.uniform_below(space.task_hidden_choices.size())];
        config.main_hidden =
            space.main_hidden_choices[rng.uniform_below(space.main_hidden_choices.size())];

        TrainOptions options;
        options.eval_period = std::max<size_t>(config.epochs, 1);
        const TrainResult trained = train(config, sources, options);
        const MetricsRecord val = evaluate(trained.model, validation);
        result.trials[t] = SearchTrial{t, config, val.test_accuracy};
    });

    result.best_index = 0;
    for (size_t t = 1; t < space.trials; ++t) {
        if (result.trials[t].validation_accuracy > result.trials[result.best_index].validation_accuracy) {
            result.best_index = t;
        }
    }
    result.best = result.trials[result.best_index].config;
    return result;
}

void holdout_by_domain(const std::vector<DomainDataset>& sources, double fraction, uint64_t seed,
                       std::vector<DomainDataset>& train_out,
                       std::vector<DomainDataset>& validation_out) {
    if (sources.size() < 2) {
        throw std::invalid_argument("holdout_by_domain: need at least 2 domains");
    }
    size_t holdout = static_cast<size_t>(fraction * static_cast<double>(sources.size()));
    holdout = std::clamp<size_t>(holdout, 1, sources.size() - 1);

    std::vector<size_t> order(sources.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, streams::kHoldout, 0));
    rng.shuffle(order);

    std::vector<bool> held(sources.size(), false);
    for (size_t i = 0; i < holdout; ++i) held[order[i]] = true;
    train_out.clear();
    validation_out.clear();
    for (size_t i = 0; i < sources.size(); ++i) {
        (held[i] ? validation_out : train_out).push_back(sources[i]);
    }
}

const std::vector<size_t>& default_domain_counts() {
    static const std::vector<size_t> counts = {8, 16, 32, 64, 128, 256};
    return counts;
}

const std::vector<size_t>& default_example_counts() {
    static const std::vector<size_t> counts = {8, 16, 32, 64, 128, 256, 512, 1024};
    return counts;
}

std::vector<SweepCell> heatmap_sweep(const std::vector<size_t>& domain_counts,
                                     const std::vector<size_t>& example_counts, uint64_t seed,
                                     size_t trials_per_cell, const ExperimentConfig& base,
                                     size_t threads, std::ostream* progress) {
    if (domain_counts.empty() || example_counts.empty()) {
        throw std::invalid_argument("heatmap_sweep: counts must be nonempty");
    }
    for (size_t c : domain_counts) {
        if (c == 0) throw std::invalid_argument("heatmap_sweep: domain counts must be positive");
    }
    for (size_t c : example_counts) {
        if (c == 0) throw std::invalid_argument("heatmap_sweep: example counts must be positive");
    }
    if (trials_per_cell == 0) throw std::invalid_argument("heatmap_sweep: trials_per_cell must be >= 1");

    const std::vector<DomainDataset> tests = test_suite(seed);

    const size_t n_cells = domain_counts.size() * example_counts.size();
    struct TrialScore {
        double d2v = 0.0;
        double baseline = 0.0;
    };
    std::vector<TrialScore> trial_scores(n_cells * trials_per_cell);

    parallel_for(n_cells * trials_per_cell, threads, [&](size_t unit) {
        const size_t cell = unit / trials_per_cell;
        const size_t trial = unit % trials_per_cell;
        const size_t domains = domain_counts[cell / example_counts.size()];
        const size_t examples = example_counts[cell % example_counts.size()];

        const uint64_t trial_seed = derive_seed(seed, streams::kSweep, trial);
        const std::vector<DomainDataset> suite =
            generate_suite(SynthSpec{domains, examples, trial_seed});

        ExperimentConfig config = base;
        config.main_batch = std::min(base.main_batch, examples);
        config.seed = trial_seed;

        TrainOptions options;
        options.eval_period = std::max<size_t>(config.epochs, 1);
        const TrainResult d2v_run = train(config, suite, options);
        const BaselineTrainResult base_run = train_baseline(config, suite, options);

        TrialScore score;
        score.d2v = evaluate(d2v_run.model, tests).test_accuracy;
        score.baseline = evaluate_baseline(base_run.model, tests).test_accuracy;
        trial_scores[unit] = score;
        if (progress) {
            *progress << "cell domains=" << domains << " examples=" << examples
                      << " trial=" << trial << " d2v=" << score.d2v
                      << " baseline=" << score.baseline << "\n";
        }
    });

    std::vector<SweepCell> cells(n_cells);
    for (size_t c = 0; c < n_cells; ++c) {
        SweepCell& cell = cells[c];
        cell.domains = domain_counts[c / example_counts.size()];
        cell.examples = example_counts[c % example_counts.size()];
        for (size_t t = 0; t < trials_per_cell; ++t) {
            cell.d2v_accuracy += trial_scores[c * trials_per_cell + t].d2v;
            cell.baseline_accuracy += trial_scores[c * trials_per_cell + t].baseline;
        }
        cell.d2v_accuracy /= static_cast<double>(trials_per_cell);
        cell.baseline_accuracy /= static_cast<double>(trials_per_cell);
    }
    return cells;
}

} // namespace d2v
