#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hetgcn/config.hpp"
#include "hetgcn/model.hpp"

namespace hetgcn {

struct EpochStats {
    double train_loss = 0.0;
    double val_accuracy = 0.0;
};

struct SeedResult {
    std::uint64_t seed = 0;
    std::vector<EpochStats> epochs;
    Index selected_epoch = 0;  // 1-based, earliest epoch with the best validation accuracy
    Index total_steps = 0;     // optimizer steps across all epochs
    double best_val_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::map<std::string, double> test_accuracy_by_language;
};

struct TrainReport {
    std::vector<SeedResult> seeds;
    double mean_test_accuracy = 0.0;
    std::map<std::string, double> mean_test_accuracy_by_language;
};

// Labeled train rows under the trainer's masking rules: split == train, label
// present, and translated copies only when train_on_translations is set.
std::vector<Index> train_mask_rows(const HeteroGraph& graph, const CorpusStore& store, bool train_on_translations);

// Accuracy of argmax predictions over the labeled in-graph documents of the
// split (optionally restricted to one language). Empty set is an error.
double evaluate(const ModelParams& params, const HeteroGraph& graph, const CorpusStore& store,
                const Eigen::Ref<const Matrix>& h0, Split split, const std::string& language_filter, double slope);

struct TrainOutput {
    ModelParams best_params;
    SeedResult result;
};

// One full training run: seeded shuffling of the labeled train documents into
// loss-mask batches (full-graph propagation per step), AdamW updates, and
// best-validation-epoch parameter selection. Deterministic per seed, and the
// batch composition depends only on document ids, not on corpus file order.
TrainOutput train(const HeteroGraph& graph, const CorpusStore& store, const Eigen::Ref<const Matrix>& h0,
                  const Config& config, std::uint64_t seed);

struct ExperimentResult {
    TrainReport report;
    std::vector<ModelParams> best_params_per_seed;
    HeteroGraph graph;
    Matrix h0;
};

// Builds the graph once, trains once per configured seed, evaluates on test.
ExperimentResult run_experiment(const CorpusStore& store, const EmbeddingTable& table, const Config& config);

// Report serializations: one JSON record per seed plus a "mean" record, and a
// human-readable table.
std::string report_jsonl(const TrainReport& report);
std::string report_table(const TrainReport& report);

// Per-document predictions of the model, one JSON record per in-graph document.
std::string predictions_jsonl(const ModelParams& params, const HeteroGraph& graph, const CorpusStore& store,
                              const Eigen::Ref<const Matrix>& h0, double slope);

}  // namespace hetgcn
