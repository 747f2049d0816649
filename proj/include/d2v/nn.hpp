#pragma once

#include "d2v/matrix.hpp"
#include "d2v/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace d2v {

enum class Activation { ReLU, Tanh, Identity };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Fully connected layer; weights are in_dim x out_dim, applied as x * W + b.
struct DenseLayer {
    Matrix weights;
    std::vector<double> bias;
    Activation activation = Activation::Identity;

    size_t in_dim() const { return weights.rows; }
    size_t out_dim() const { return weights.cols; }

    // uniform Glorot weights in +-sqrt(6 / (fan_in + fan_out)), zero bias
    static DenseLayer glorot(size_t in_dim, size_t out_dim, Activation act, Rng& rng);
};

/// Values captured by dense_forward that dense_backward needs.
struct DenseCache {
    Matrix input;
    Matrix pre_activation;
};

Matrix dense_forward(const DenseLayer& layer, const Matrix& input, DenseCache* cache = nullptr);

struct DenseGrads {
    Matrix weights;
    std::vector<double> bias;
};

/// Propagates grad_output through the layer; fills `grads` and returns the
/// gradient with respect to the layer input.
Matrix dense_backward(const DenseLayer& layer, const DenseCache& cache, const Matrix& grad_output,
                      DenseGrads& grads);

struct LossValue {
    double loss = 0.0;                // mean of per_example
    std::vector<double> per_example;
};

/// Mean softmax cross-entropy over rows, computed with max-subtraction.
/// If grad_logits is non-null it receives (softmax - onehot) / n.
LossValue softmax_cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                                Matrix* grad_logits = nullptr);

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

/// Per-tensor Adam accumulators; `step` counts completed updates.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int64_t step = 0;

    static AdamState for_size(size_t n) { return AdamState{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0}; }
};

/// One Adam update with decoupled weight decay: params shrink by
/// lr * weight_decay * params before the Adam delta is applied.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double weight_decay);

/// Mutable view of one named parameter tensor of a model.
struct ParamBlock {
    std::string name;
    double* data = nullptr;
    size_t size = 0;
};

/// Read-only view of the analytic gradient matching a ParamBlock.
struct GradView {
    std::string name;
    const double* data = nullptr;
    size_t size = 0;
};

struct GradCheckReport {
    bool pass = false;
    double max_rel_error = 0.0;
    std::string worst_block;
    size_t worst_index = 0;
    double tolerance = 0.0;
};

/// Central-difference check of analytic gradients. `loss_fn` must recompute
/// the loss from the current parameter values on every call; `params[i]`
/// and `analytic[i]` must refer to the same tensor.
GradCheckReport grad_check(const std::function<double()>& loss_fn, std::span<ParamBlock> params,
                           std::span<const GradView> analytic, double tolerance,
                           double step = 1e-5);

} // namespace d2v
