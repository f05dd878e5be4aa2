#include "hetgcn/model.hpp"

#include <cmath>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"

namespace hetgcn {

double leaky_relu(double x, double slope) { return x >= 0.0 ? x : slope * x; }

namespace {

// Derivative with the sigma'(0) = 1 convention.
inline double leaky_relu_grad(double pre, double slope) { return pre >= 0.0 ? 1.0 : slope; }

Matrix glorot(Index rows, Index cols, rng::SplitMix& gen) {
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix w(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            w(i, j) = gen.uniform(-bound, bound);
        }
    }
    return w;
}

}  // namespace

ModelParams init_params(const HeteroGraph& graph, Index d_in, Index d_hidden, Index d_out, Index num_classes,
                        std::uint64_t seed) {
    if (d_in < 1 || d_hidden < 1 || d_out < 1 || num_classes < 1) {
        throw ValidationError("init_params: all dimensions must be >= 1");
    }
    rng::SplitMix gen(rng::derive_stream(seed, "init"));
    ModelParams params;
    for (const auto& [etype, csr] : graph.adjacency) {
        params.layers[0][etype] = glorot(d_in, d_hidden, gen);
    }
    for (const auto& [etype, csr] : graph.adjacency) {
        params.layers[1][etype] = glorot(d_hidden, d_out, gen);
    }
    params.head_weight = glorot(d_out, num_classes, gen);
    params.head_bias = Vector::Zero(num_classes);
    return params;
}

ForwardCache forward(const HeteroGraph& graph, const Eigen::Ref<const Matrix>& h0, const ModelParams& params,
                     double slope) {
    if (h0.rows() != graph.n()) {
        throw ValidationError("forward: H0 has " + std::to_string(h0.rows()) + " rows, graph has " +
                              std::to_string(graph.n()) + " nodes");
    }
    for (int layer = 0; layer < 2; ++layer) {
        if (params.layers[layer].size() != graph.adjacency.size()) {
            throw ValidationError("forward: layer " + std::to_string(layer + 1) +
                                  " weight count does not match the graph's edge-type count");
        }
    }

    ForwardCache cache;
    Matrix h = h0;
    for (int layer = 0; layer < 2; ++layer) {
        LayerCache& lc = cache.layers[layer];
        lc.input = h;
        Matrix pre;
        for (const auto& [etype, csr] : graph.adjacency) {
            const Matrix& w = params.layers[layer].at(etype);
            if (w.rows() != h.cols()) {
                throw ValidationError("forward: weight shape mismatch for edge type " + edge_type_name(etype) +
                                      " in layer " + std::to_string(layer + 1));
            }
            Matrix propagated = spmm(csr, h);
            if (pre.size() == 0) {
                pre.noalias() = propagated * w;
            } else {
                pre.noalias() += propagated * w;
            }
            lc.propagated.emplace(etype, std::move(propagated));
        }
        lc.pre_activation = std::move(pre);
        h = lc.pre_activation.unaryExpr([slope](double x) { return leaky_relu(x, slope); });
    }
    cache.output = h;
    if (params.head_weight.rows() != h.cols() || params.head_bias.size() != params.head_weight.cols()) {
        throw ValidationError("forward: head shape does not match the layer output");
    }
    cache.logits = (cache.output.topRows(graph.doc_count) * params.head_weight).rowwise() +
                   params.head_bias.transpose();
    return cache;
}

LossResult softmax_xent(const Eigen::Ref<const Matrix>& logits, const std::vector<Index>& mask_rows,
                        const std::vector<int>& mask_labels) {
    if (mask_rows.empty()) {
        throw ValidationError("softmax_xent: empty mask");
    }
    if (mask_rows.size() != mask_labels.size()) {
        throw ValidationError("softmax_xent: mask_rows and mask_labels sizes differ");
    }
    const Index num_classes = logits.cols();
    LossResult result;
    result.dlogits = Matrix::Zero(logits.rows(), num_classes);
    const double inv_count = 1.0 / static_cast<double>(mask_rows.size());
    double loss = 0.0;
    for (std::size_t m = 0; m < mask_rows.size(); ++m) {
        const Index row = mask_rows[m];
        const int label = mask_labels[m];
        if (row < 0 || row >= logits.rows()) {
            throw ValidationError("softmax_xent: mask row " + std::to_string(row) + " out of range");
        }
        if (label < 0 || label >= num_classes) {
            throw ValidationError("softmax_xent: label " + std::to_string(label) + " out of range [0, " +
                                  std::to_string(num_classes) + ")");
        }
        const auto row_logits = logits.row(row);
        const double max_logit = row_logits.maxCoeff();
        double sum_exp = 0.0;
        for (Index c = 0; c < num_classes; ++c) {
            sum_exp += std::exp(row_logits[c] - max_logit);
        }
        const double log_sum_exp = max_logit + std::log(sum_exp);
        loss += (log_sum_exp - row_logits[label]) * inv_count;
        for (Index c = 0; c < num_classes; ++c) {
            result.dlogits(row, c) = std::exp(row_logits[c] - max_logit) / sum_exp * inv_count;
        }
        result.dlogits(row, label) -= inv_count;
    }
    result.loss = loss;
    return result;
}

ModelGrads backward(const HeteroGraph& graph, const ForwardCache& cache, const Eigen::Ref<const Matrix>& dlogits,
                    const ModelParams& params, double slope) {
    if (dlogits.rows() != graph.doc_count || dlogits.cols() != params.num_classes()) {
        throw ValidationError("backward: dLogits shape does not match the cache");
    }
    ModelGrads grads;
    grads.head_weight.noalias() = cache.output.topRows(graph.doc_count).transpose() * dlogits;
    grads.head_bias = dlogits.colwise().sum();

    Matrix dh = Matrix::Zero(graph.n(), params.d_out());
    dh.topRows(graph.doc_count).noalias() = dlogits * params.head_weight.transpose();

    for (int layer = 1; layer >= 0; --layer) {
        const LayerCache& lc = cache.layers[layer];
        if (lc.pre_activation.rows() != dh.rows() || lc.pre_activation.cols() != dh.cols()) {
            throw ValidationError("backward: stale cache (shape mismatch at layer " + std::to_string(layer + 1) +
                                  ")");
        }
        const Matrix delta =
            dh.array() * lc.pre_activation.unaryExpr([slope](double x) { return leaky_relu_grad(x, slope); }).array();
        Matrix dh_prev;
        for (const auto& [etype, propagated] : lc.propagated) {
            const Matrix& w = params.layers[layer].at(etype);
            grads.layers[layer][etype].noalias() = propagated.transpose() * delta;
            if (layer > 0) {
                // Adjacency slices are symmetric, so the transpose propagation
                // reuses the forward kernel.
                Matrix back = spmm(graph.adjacency.at(etype), delta * w.transpose());
                if (dh_prev.size() == 0) {
                    dh_prev = std::move(back);
                } else {
                    dh_prev += back;
                }
            }
        }
        if (layer > 0) {
            dh = std::move(dh_prev);
        }
    }
    return grads;
}

std::vector<int> predict_classes(const Eigen::Ref<const Matrix>& logits) {
    std::vector<int> out(static_cast<std::size_t>(logits.rows()));
    for (Index i = 0; i < logits.rows(); ++i) {
        int best = 0;
        for (Index c = 1; c < logits.cols(); ++c) {
            if (logits(i, c) > logits(i, best)) {
                best = static_cast<int>(c);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

}  // namespace hetgcn
