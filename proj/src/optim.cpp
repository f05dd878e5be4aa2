#include "hetgcn/optim.hpp"

#include <cmath>

#include "hetgcn/errors.hpp"

namespace hetgcn {

void validate_hyper(const AdamWHyper& hyper) {
    if (!(hyper.lr > 0.0)) throw ValidationError("adamw: lr must be > 0");
    if (!(hyper.eps > 0.0)) throw ValidationError("adamw: eps must be > 0");
    if (hyper.beta1 < 0.0 || hyper.beta1 >= 1.0) throw ValidationError("adamw: beta1 must be in [0, 1)");
    if (hyper.beta2 < 0.0 || hyper.beta2 >= 1.0) throw ValidationError("adamw: beta2 must be in [0, 1)");
    if (hyper.weight_decay < 0.0) throw ValidationError("adamw: weight_decay must be >= 0");
}

AdamWState init_adamw_state(const ModelParams& params) {
    AdamWState state;
    for (int layer = 0; layer < 2; ++layer) {
        for (const auto& [etype, w] : params.layers[layer]) {
            state.m.layers[layer][etype] = Matrix::Zero(w.rows(), w.cols());
            state.v.layers[layer][etype] = Matrix::Zero(w.rows(), w.cols());
        }
    }
    state.m.head_weight = Matrix::Zero(params.head_weight.rows(), params.head_weight.cols());
    state.v.head_weight = Matrix::Zero(params.head_weight.rows(), params.head_weight.cols());
    state.m.head_bias = Vector::Zero(params.head_bias.size());
    state.v.head_bias = Vector::Zero(params.head_bias.size());
    return state;
}

namespace {

template <typename Mat>
void step_one(Mat& theta, const Mat& grad, Mat& m, Mat& v, const AdamWHyper& hyper, double bias_corr1,
              double bias_corr2, bool decay, const std::string& name) {
    if (!grad.allFinite()) {
        throw NumericError("adamw: non-finite gradient for parameter " + name);
    }
    m = hyper.beta1 * m + (1.0 - hyper.beta1) * grad;
    v = hyper.beta2 * v + (1.0 - hyper.beta2) * grad.cwiseProduct(grad);
    Mat update = ((m.array() / bias_corr1) / ((v.array() / bias_corr2).sqrt() + hyper.eps)).matrix();
    if (decay && hyper.weight_decay > 0.0) {
        update += hyper.weight_decay * theta;
    }
    theta -= hyper.lr * update;
}

}  // namespace

void adamw_step(ModelParams& params, const ModelGrads& grads, AdamWState& state, const AdamWHyper& hyper) {
    validate_hyper(hyper);
    state.t += 1;
    const double bias_corr1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
    const double bias_corr2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));
    for (int layer = 0; layer < 2; ++layer) {
        for (auto& [etype, w] : params.layers[layer]) {
            const std::string name = "layer" + std::to_string(layer + 1) + "." + edge_type_name(etype);
            step_one(w, grads.layers[layer].at(etype), state.m.layers[layer].at(etype),
                     state.v.layers[layer].at(etype), hyper, bias_corr1, bias_corr2, true, name);
        }
    }
    step_one(params.head_weight, grads.head_weight, state.m.head_weight, state.v.head_weight, hyper, bias_corr1,
             bias_corr2, true, "head.weight");
    step_one(params.head_bias, grads.head_bias, state.m.head_bias, state.v.head_bias, hyper, bias_corr1, bias_corr2,
             false, "head.bias");
}

}  // namespace hetgcn
