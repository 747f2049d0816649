#include "d2v/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2v {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    return "identity";
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::ReLU;
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw std::invalid_argument("unknown activation '" + name + "'");
}

DenseLayer DenseLayer::glorot(size_t in_dim, size_t out_dim, Activation act, Rng& rng) {
    DenseLayer layer;
    layer.weights = Matrix(in_dim, out_dim);
    layer.bias.assign(out_dim, 0.0);
    layer.activation = act;
    const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (double& w : layer.weights.data) w = rng.uniform(-limit, limit);
    return layer;
}

namespace {

void apply_activation(Activation act, Matrix& values) {
    switch (act) {
        case Activation::ReLU:
            for (double& v : values.data) v = v > 0.0 ? v : 0.0;
            break;
        case Activation::Tanh:
            for (double& v : values.data) v = std::tanh(v);
            break;
        case Activation::Identity:
            break;
    }
}

// multiplies grad by act'(pre_activation), elementwise in place
void apply_activation_grad(Activation act, const Matrix& pre_activation, Matrix& grad) {
    switch (act) {
        case Activation::ReLU:
            for (size_t i = 0; i < grad.data.size(); ++i) {
                if (pre_activation.data[i] <= 0.0) grad.data[i] = 0.0;
            }
            break;
        case Activation::Tanh:
            for (size_t i = 0; i < grad.data.size(); ++i) {
                const double t = std::tanh(pre_activation.data[i]);
                grad.data[i] *= 1.0 - t * t;
            }
            break;
        case Activation::Identity:
            break;
    }
}

} // namespace

Matrix dense_forward(const DenseLayer& layer, const Matrix& input, DenseCache* cache) {
    if (input.cols != layer.in_dim()) {
        throw std::invalid_argument("dense_forward: input shape " + input.shape_str() +
                                    " incompatible with layer weights " + layer.weights.shape_str());
    }
    if (layer.bias.size() != layer.out_dim()) {
        throw std::invalid_argument("dense_forward: bias length " + std::to_string(layer.bias.size()) +
                                    " != layer out_dim " + std::to_string(layer.out_dim()));
    }
    Matrix pre = matmul(input, layer.weights);
    for (size_t i = 0; i < pre.rows; ++i) {
        double* row = pre.row_ptr(i);
        for (size_t j = 0; j < pre.cols; ++j) row[j] += layer.bias[j];
    }
    if (cache) {
        cache->input = input;
        cache->pre_activation = pre;
    }
    apply_activation(layer.activation, pre);
    return pre;
}

Matrix dense_backward(const DenseLayer& layer, const DenseCache& cache, const Matrix& grad_output,
                      DenseGrads& grads) {
    if (grad_output.rows != cache.input.rows || grad_output.cols != layer.out_dim()) {
        throw std::invalid_argument("dense_backward: grad_output shape " + grad_output.shape_str() +
                                    " incompatible with cached input " + cache.input.shape_str() +
                                    " and layer " + layer.weights.shape_str());
    }
    Matrix dpre = grad_output;
    apply_activation_grad(layer.activation, cache.pre_activation, dpre);
    grads.weights = matmul_trans_a(cache.input, dpre);
    grads.bias = col_sums(dpre);
    return matmul_trans_b(dpre, layer.weights);
}

LossValue softmax_cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                                Matrix* grad_logits) {
    const size_t n = logits.rows;
    const size_t classes = logits.cols;
    if (n == 0) throw std::invalid_argument("softmax_cross_entropy: no examples");
    if (labels.size() != n) {
        throw std::invalid_argument("softmax_cross_entropy: " + std::to_string(labels.size()) +
                                    " labels for " + std::to_string(n) + " rows");
    }
    for (size_t i = 0; i < n; ++i) {
        if (labels[i] < 0 || static_cast<size_t>(labels[i]) >= classes) {
            throw std::invalid_argument("softmax_cross_entropy: label " + std::to_string(labels[i]) +
                                        " out of range [0, " + std::to_string(classes) +
                                        ") at example " + std::to_string(i));
        }
    }

    LossValue result;
    result.per_example.resize(n);
    if (grad_logits) *grad_logits = Matrix(n, classes);

    const double inv_n = 1.0 / static_cast<double>(n);
    double total = 0.0;
    std::vector<double> probs(classes);
    for (size_t i = 0; i < n; ++i) {
        const double* row = logits.row_ptr(i);
        double max_logit = row[0];
        for (size_t j = 1; j < classes; ++j) max_logit = std::max(max_logit, row[j]);
        double sum_exp = 0.0;
        for (size_t j = 0; j < classes; ++j) {
            probs[j] = std::exp(row[j] - max_logit);
            sum_exp += probs[j];
        }
        const double log_sum = std::log(sum_exp);
        const int y = labels[i];
        // -log softmax(row)_y = log(sum exp(row - max)) - (row_y - max)
        result.per_example[i] = log_sum - (row[y] - max_logit);
        total += result.per_example[i];
        if (grad_logits) {
            double* grow = grad_logits->row_ptr(i);
            for (size_t j = 0; j < classes; ++j) grow[j] = probs[j] / sum_exp * inv_n;
            grow[y] -= inv_n;
        }
    }
    result.loss = total * inv_n;
    return result;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, double weight_decay) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size()) {
        throw std::invalid_argument("adam_step: size mismatch, params " + std::to_string(params.size()) +
                                    ", grads " + std::to_string(grads.size()) + ", state " +
                                    std::to_string(state.m.size()));
    }
    if (lr < 0.0) throw std::invalid_argument("adam_step: negative learning rate");
    if (weight_decay < 0.0) throw std::invalid_argument("adam_step: negative weight decay");

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(kAdamBeta1, t);
    const double bias2 = 1.0 - std::pow(kAdamBeta2, t);
    for (size_t i = 0; i < params.size(); ++i) {
        params[i] -= lr * weight_decay * params[i];
        const double g = grads[i];
        state.m[i] = kAdamBeta1 * state.m[i] + (1.0 - kAdamBeta1) * g;
        state.v[i] = kAdamBeta2 * state.v[i] + (1.0 - kAdamBeta2) * g * g;
        const double m_hat = state.m[i] / bias1;
        const double v_hat = state.v[i] / bias2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }
}

GradCheckReport grad_check(const std::function<double()>& loss_fn, std::span<ParamBlock> params,
                           std::span<const GradView> analytic, double tolerance, double step) {
    if (params.size() != analytic.size()) {
        throw std::invalid_argument("grad_check: parameter and gradient block counts differ");
    }
    GradCheckReport report;
    report.tolerance = tolerance;
    for (size_t b = 0; b < params.size(); ++b) {
        ParamBlock& block = params[b];
        const GradView& grad = analytic[b];
        if (block.size != grad.size) {
            throw std::invalid_argument("grad_check: block '" + block.name + "' has " +
                                        std::to_string(block.size) + " params but " +
                                        std::to_string(grad.size) + " gradient entries");
        }
        for (size_t i = 0; i < block.size; ++i) {
            const double saved = block.data[i];
            block.data[i] = saved + step;
            const double loss_plus = loss_fn();
            block.data[i] = saved - step;
            const double loss_minus = loss_fn();
            block.data[i] = saved;
            if (!std::isfinite(loss_plus) || !std::isfinite(loss_minus)) {
                throw std::runtime_error("grad_check: non-finite loss while perturbing block '" +
                                         block.name + "'");
            }
            const double numeric = (loss_plus - loss_minus) / (2.0 * step);
            const double ana = grad.data[i];
            const double scale = std::max({std::abs(numeric), std::abs(ana), 1e-8});
            const double rel = std::abs(numeric - ana) / scale;
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_block = block.name;
                report.worst_index = i;
            }
        }
    }
    report.pass = report.max_rel_error < tolerance;
    return report;
}

} // namespace d2v
