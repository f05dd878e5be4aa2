#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetgcn/graph.hpp"
#include "hetgcn/optim.hpp"

namespace hetgcn {

// Every hyperparameter and toggle, serializable as flat "section.key=value"
// lines. CLI overrides win over file values which win over these defaults.
struct Config {
    // data
    std::string corpus_path;
    std::string embeddings_path;  // empty = hashed features only
    int num_classes = 2;

    // graph
    GraphToggles toggles;
    int variant = 0;  // 0 = use the explicit toggles; 1..8 = ablation variant
    Index k = 3;
    Index min_df = 2;
    double self_loop_weight = 1.0;

    // embed
    Index fallback_dim = 32;
    bool forbid_fallback = false;
    std::uint64_t hash_seed = 0;

    // model
    Index d_hidden = 512;
    Index d_out = 768;
    double leaky_slope = 0.01;

    // train
    double lr = 2e-5;
    Index batch_size = 256;
    Index max_epochs = 15;
    std::vector<std::uint64_t> seeds = {0, 1, 2};
    bool train_on_translations = false;

    // optim
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

// Parses one "key=value" assignment. Unknown keys and unparsable values throw.
void apply_override(Config& config, const std::string& assignment);

// Loads "key=value" lines; '#' starts a comment.
Config load_config(const std::string& path);

// Full dump, every key on its own line, deterministic order and formatting.
std::string dump_config(const Config& config);

// Cross-field validation (toggle coherence, positive sizes, optimizer ranges).
void validate_config(const Config& config);

// The toggles in effect: the variant table when variant != 0.
GraphToggles effective_toggles(const Config& config);

GraphBuildOptions graph_options(const Config& config);
AdamWHyper adamw_hyper(const Config& config);

}  // namespace hetgcn
