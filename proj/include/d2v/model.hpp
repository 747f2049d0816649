#pragma once

#include "d2v/nn.hpp"

#include <optional>
#include <string>
#include <vector>

namespace d2v {

/// Set encoder: per-row features through hidden + projection, then mean
/// pooling over the sample dimension.
struct TaskNetwork {
    DenseLayer hidden;     // d -> H_t, ReLU
    DenseLayer projection; // H_t -> D_t, Identity
};

/// Point classifier over the extended feature space [x || T_X].
struct MainNetwork {
    DenseLayer hidden; // (d + D_t) -> H_m, ReLU
    DenseLayer output; // H_m -> C, Identity
};

struct ModelDims {
    size_t features = 0;    // d
    size_t task_hidden = 0; // H_t
    size_t embed_dim = 0;   // D_t
    size_t main_hidden = 0; // H_m
    size_t classes = 0;     // C
};

struct DomainEmbedding {
    std::string domain_id;
    std::vector<double> values; // length D_t
};

struct D2VModel {
    TaskNetwork task;
    MainNetwork main;
    ModelDims dims;

    static D2VModel init(const ModelDims& dims, Rng& rng);

    std::vector<ParamBlock> param_blocks();
};

/// Gradients for every parameter of both networks, in param_blocks() order.
struct D2VGradients {
    DenseGrads task_hidden;
    DenseGrads task_projection;
    DenseGrads main_hidden;
    DenseGrads main_output;

    std::vector<GradView> grad_views() const;
    void scale(double factor);
};

DomainEmbedding embed(const TaskNetwork& task, const Matrix& sample, std::string domain_id = {});

/// Logits for `points`, each concatenated with the embedding of
/// `domain_sample`. The embedding is recomputed on every call.
Matrix forward(const D2VModel& model, const Matrix& points, const Matrix& domain_sample);

/// Exact gradients of loss_scale * mean softmax cross-entropy with respect to
/// every parameter; each task-sample row receives 1/n of the pooled embedding
/// gradient. Returns the loss.
LossValue backward(const D2VModel& model, const Matrix& points, const Matrix& domain_sample,
                   const std::vector<int>& labels, D2VGradients& grads, double loss_scale = 1.0);

std::vector<int> predict(const D2VModel& model, const Matrix& points, const Matrix& domain_sample);

/// Single-hidden-layer MLP trained on pooled data, ignoring domain structure.
struct PoolingMlp {
    DenseLayer hidden; // d -> H, ReLU
    DenseLayer output; // H -> C, Identity

    static PoolingMlp init(size_t features, size_t hidden, size_t classes, Rng& rng);

    std::vector<ParamBlock> param_blocks();
};

struct MlpGradients {
    DenseGrads hidden;
    DenseGrads output;

    std::vector<GradView> grad_views() const;
};

Matrix pooling_baseline_forward(const PoolingMlp& mlp, const Matrix& points);
LossValue pooling_baseline_backward(const PoolingMlp& mlp, const Matrix& points,
                                    const std::vector<int>& labels, MlpGradients& grads,
                                    double loss_scale = 1.0);
std::vector<int> pooling_baseline_predict(const PoolingMlp& mlp, const Matrix& points);

} // namespace d2v
