#include "d2v/model.hpp"

#include <stdexcept>
#include <utility>

namespace d2v {

D2VModel D2VModel::init(const ModelDims& dims, Rng& rng) {
    if (dims.features == 0 || dims.task_hidden == 0 || dims.main_hidden == 0 || dims.classes == 0) {
        throw std::invalid_argument("D2VModel::init: all dims except embed_dim must be >= 1");
    }
    D2VModel model;
    model.dims = dims;
    model.task.hidden = DenseLayer::glorot(dims.features, dims.task_hidden, Activation::ReLU, rng);
    model.task.projection =
        DenseLayer::glorot(dims.task_hidden, dims.embed_dim, Activation::Identity, rng);
    model.main.hidden = DenseLayer::glorot(dims.features + dims.embed_dim, dims.main_hidden,
                                           Activation::ReLU, rng);
    model.main.output = DenseLayer::glorot(dims.main_hidden, dims.classes, Activation::Identity, rng);
    return model;
}

namespace {

std::vector<ParamBlock> layer_blocks(const char* prefix, DenseLayer& layer) {
    return {
        ParamBlock{std::string(prefix) + ".weights", layer.weights.data.data(), layer.weights.size()},
        ParamBlock{std::string(prefix) + ".bias", layer.bias.data(), layer.bias.size()},
    };
}

void append_grad_views(std::vector<GradView>& out, const char* prefix, const DenseGrads& grads) {
    out.push_back({std::string(prefix) + ".weights", grads.weights.data.data(), grads.weights.size()});
    out.push_back({std::string(prefix) + ".bias", grads.bias.data(), grads.bias.size()});
}

void scale_grads(DenseGrads& grads, double factor) {
    for (double& v : grads.weights.data) v *= factor;
    for (double& v : grads.bias) v *= factor;
}

} // namespace

std::vector<ParamBlock> D2VModel::param_blocks() {
    std::vector<ParamBlock> blocks;
    for (auto& b : layer_blocks("task.hidden", task.hidden)) blocks.push_back(b);
    for (auto& b : layer_blocks("task.projection", task.projection)) blocks.push_back(b);
    for (auto& b : layer_blocks("main.hidden", main.hidden)) blocks.push_back(b);
    for (auto& b : layer_blocks("main.output", main.output)) blocks.push_back(b);
    return blocks;
}

std::vector<GradView> D2VGradients::grad_views() const {
    std::vector<GradView> views;
    append_grad_views(views, "task.hidden", task_hidden);
    append_grad_views(views, "task.projection", task_projection);
    append_grad_views(views, "main.hidden", main_hidden);
    append_grad_views(views, "main.output", main_output);
    return views;
}

void D2VGradients::scale(double factor) {
    scale_grads(task_hidden, factor);
    scale_grads(task_projection, factor);
    scale_grads(main_hidden, factor);
    scale_grads(main_output, factor);
}

DomainEmbedding embed(const TaskNetwork& task, const Matrix& sample, std::string domain_id) {
    if (sample.rows == 0) {
        throw std::invalid_argument("embed: domain sample is empty, embedding undefined");
    }
    const Matrix hidden = dense_forward(task.hidden, sample);
    const Matrix projected = dense_forward(task.projection, hidden);
    DomainEmbedding out;
    out.domain_id = std::move(domain_id);
    out.values = col_means_compensated(projected);
    return out;
}

Matrix forward(const D2VModel& model, const Matrix& points, const Matrix& domain_sample) {
    if (points.rows == 0) throw std::invalid_argument("forward: no points");
    if (points.cols != domain_sample.cols) {
        throw std::invalid_argument("forward: points " + points.shape_str() + " and domain sample " +
                                    domain_sample.shape_str() + " disagree on feature dimension");
    }
    const DomainEmbedding emb = embed(model.task, domain_sample);
    const Matrix extended = hconcat_broadcast(points, emb.values);
    const Matrix hidden = dense_forward(model.main.hidden, extended);
    return dense_forward(model.main.output, hidden);
}

LossValue backward(const D2VModel& model, const Matrix& points, const Matrix& domain_sample,
                   const std::vector<int>& labels, D2VGradients& grads, double loss_scale) {
    if (points.rows == 0) throw std::invalid_argument("backward: no points");
    if (points.cols != domain_sample.cols) {
        throw std::invalid_argument("backward: points " + points.shape_str() + " and domain sample " +
                                    domain_sample.shape_str() + " disagree on feature dimension");
    }
    if (domain_sample.rows == 0) {
        throw std::invalid_argument("backward: domain sample is empty");
    }
    const size_t n = domain_sample.rows;
    const size_t d = points.cols;
    const size_t embed_dim = model.dims.embed_dim;

    // forward with caches
    DenseCache task_hidden_cache, task_proj_cache, main_hidden_cache, main_out_cache;
    const Matrix task_hidden_out = dense_forward(model.task.hidden, domain_sample, &task_hidden_cache);
    const Matrix projected = dense_forward(model.task.projection, task_hidden_out, &task_proj_cache);
    const std::vector<double> embedding = col_means_compensated(projected);

    const Matrix extended = hconcat_broadcast(points, embedding);
    const Matrix main_hidden_out = dense_forward(model.main.hidden, extended, &main_hidden_cache);
    const Matrix logits = dense_forward(model.main.output, main_hidden_out, &main_out_cache);

    Matrix dlogits;
    LossValue loss = softmax_cross_entropy(logits, labels, &dlogits);
    if (loss_scale != 1.0) {
        loss.loss *= loss_scale;
        for (double& v : loss.per_example) v *= loss_scale;
        for (double& v : dlogits.data) v *= loss_scale;
    }

    // main network
    const Matrix dmain_hidden = dense_backward(model.main.output, main_out_cache, dlogits, grads.main_output);
    const Matrix dextended = dense_backward(model.main.hidden, main_hidden_cache, dmain_hidden, grads.main_hidden);

    // the same embedding row fed every point, so its gradient is the column
    // sum of the embedding slice of dextended
    std::vector<double> dembedding(embed_dim, 0.0);
    for (size_t i = 0; i < dextended.rows; ++i) {
        const double* row = dextended.row_ptr(i);
        for (size_t j = 0; j < embed_dim; ++j) dembedding[j] += row[d + j];
    }

    // mean pooling: every task-sample row receives 1/n of the embedding grad
    Matrix dprojected(n, embed_dim);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        double* row = dprojected.row_ptr(i);
        for (size_t j = 0; j < embed_dim; ++j) row[j] = dembedding[j] * inv_n;
    }

    const Matrix dtask_hidden = dense_backward(model.task.projection, task_proj_cache, dprojected, grads.task_projection);
    dense_backward(model.task.hidden, task_hidden_cache, dtask_hidden, grads.task_hidden);
    return loss;
}

std::vector<int> predict(const D2VModel& model, const Matrix& points, const Matrix& domain_sample) {
    return argmax_rows(forward(model, points, domain_sample));
}

PoolingMlp PoolingMlp::init(size_t features, size_t hidden, size_t classes, Rng& rng) {
    if (features == 0 || hidden == 0 || classes == 0) {
        throw std::invalid_argument("PoolingMlp::init: dims must be >= 1");
    }
    PoolingMlp mlp;
    mlp.hidden = DenseLayer::glorot(features, hidden, Activation::ReLU, rng);
    mlp.output = DenseLayer::glorot(hidden, classes, Activation::Identity, rng);
    return mlp;
}

std::vector<ParamBlock> PoolingMlp::param_blocks() {
    std::vector<ParamBlock> blocks;
    for (auto& b : layer_blocks("hidden", hidden)) blocks.push_back(b);
    for (auto& b : layer_blocks("output", output)) blocks.push_back(b);
    return blocks;
}

std::vector<GradView> MlpGradients::grad_views() const {
    std::vector<GradView> views;
    append_grad_views(views, "hidden", hidden);
    append_grad_views(views, "output", output);
    return views;
}

Matrix pooling_baseline_forward(const PoolingMlp& mlp, const Matrix& points) {
    return dense_forward(mlp.output, dense_forward(mlp.hidden, points));
}

LossValue pooling_baseline_backward(const PoolingMlp& mlp, const Matrix& points,
                                    const std::vector<int>& labels, MlpGradients& grads,
                                    double loss_scale) {
    DenseCache hidden_cache, output_cache;
    const Matrix hidden_out = dense_forward(mlp.hidden, points, &hidden_cache);
    const Matrix logits = dense_forward(mlp.output, hidden_out, &output_cache);

    Matrix dlogits;
    LossValue loss = softmax_cross_entropy(logits, labels, &dlogits);
    if (loss_scale != 1.0) {
        loss.loss *= loss_scale;
        for (double& v : loss.per_example) v *= loss_scale;
        for (double& v : dlogits.data) v *= loss_scale;
    }
    const Matrix dhidden = dense_backward(mlp.output, output_cache, dlogits, grads.output);
    dense_backward(mlp.hidden, hidden_cache, dhidden, grads.hidden);
    return loss;
}

std::vector<int> pooling_baseline_predict(const PoolingMlp& mlp, const Matrix& points) {
    return argmax_rows(pooling_baseline_forward(mlp, points));
}

} // namespace d2v
