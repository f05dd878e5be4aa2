#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "hetgcn/graph.hpp"
#include "hetgcn/linalg.hpp"

namespace hetgcn {

// Per-edge-type weights for both graph-convolution layers plus the linear
// classifier head applied to document rows. The SELF slice owns the identity
// term of the usual renormalization, so it carries weights like any type.
struct ModelParams {
    std::array<std::map<int, Matrix>, 2> layers;  // etype id -> weight
    Matrix head_weight;  // d_out x C
    Vector head_bias;    // C

    Index d_in() const { return layers[0].empty() ? 0 : layers[0].begin()->second.rows(); }
    Index d_hidden() const { return layers[0].empty() ? 0 : layers[0].begin()->second.cols(); }
    Index d_out() const { return head_weight.rows(); }
    Index num_classes() const { return head_weight.cols(); }
};

// Gradients share the parameter layout.
using ModelGrads = ModelParams;

struct LayerCache {
    Matrix input;                      // H^(l), n x d
    std::map<int, Matrix> propagated;  // per type: adjacency slice * H^(l)
    Matrix pre_activation;             // sum over types of propagated * W
};

struct ForwardCache {
    std::array<LayerCache, 2> layers;
    Matrix output;  // post-activation of layer 2, n x d_out
    Matrix logits;  // doc_count x C
};

double leaky_relu(double x, double slope);

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero head bias;
// one matrix per edge type present in the graph, deterministic per seed.
ModelParams init_params(const HeteroGraph& graph, Index d_in, Index d_hidden, Index d_out, Index num_classes,
                        std::uint64_t seed);

// Two typed graph convolutions with leaky ReLU, then the head on doc rows.
ForwardCache forward(const HeteroGraph& graph, const Eigen::Ref<const Matrix>& h0, const ModelParams& params,
                     double slope);

// Mean masked softmax cross-entropy on document rows. mask_rows/mask_labels
// are parallel; dLogits is (softmax - onehot)/|mask| on masked rows only.
struct LossResult {
    double loss = 0.0;
    Matrix dlogits;
};
LossResult softmax_xent(const Eigen::Ref<const Matrix>& logits, const std::vector<Index>& mask_rows,
                        const std::vector<int>& mask_labels);

// Exact reverse-mode gradients for every parameter matrix.
ModelGrads backward(const HeteroGraph& graph, const ForwardCache& cache, const Eigen::Ref<const Matrix>& dlogits,
                    const ModelParams& params, double slope);

// argmax per document row, ties resolved to the lowest class index.
std::vector<int> predict_classes(const Eigen::Ref<const Matrix>& logits);

}  // namespace hetgcn
