#include "hetgcn/config.hpp"

#include <charconv>
#include <functional>
#include <sstream>
#include <vector>

#include "hetgcn/errors.hpp"
#include "hetgcn/util.hpp"

namespace hetgcn {

namespace {

struct KeyEntry {
    const char* key;
    std::function<std::string(const Config&)> get;
    std::function<void(Config&, const std::string&)> set;
};

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ValidationError("config key '" + key + "': expected true or false, got '" + value + "'");
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
    Int out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ValidationError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        seeds.push_back(parse_int<std::uint64_t>(key, item));
    }
    if (seeds.empty()) {
        throw ValidationError("config key '" + key + "': at least one seed is required");
    }
    return seeds;
}

std::string seeds_to_string(const std::vector<std::uint64_t>& seeds) {
    std::string out;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(seeds[i]);
    }
    return out;
}

#define STR_KEY(name, field)                                            \
    KeyEntry{name, [](const Config& c) { return c.field; },             \
             [](Config& c, const std::string& v) { c.field = v; }}
#define BOOL_KEY(name, field)                                                         \
    KeyEntry{name, [](const Config& c) { return c.field ? "true" : "false"; },        \
             [](Config& c, const std::string& v) { c.field = parse_bool(name, v); }}
#define INT_KEY(name, field, type)                                                    \
    KeyEntry{name, [](const Config& c) { return std::to_string(c.field); },           \
             [](Config& c, const std::string& v) { c.field = parse_int<type>(name, v); }}
#define DOUBLE_KEY(name, field)                                                       \
    KeyEntry{name, [](const Config& c) { return format_double(c.field); },            \
             [](Config& c, const std::string& v) { c.field = parse_double(name, v); }}

const std::vector<KeyEntry>& registry() {
    static const std::vector<KeyEntry> entries = {
        STR_KEY("data.corpus", corpus_path),
        STR_KEY("data.embeddings", embeddings_path),
        INT_KEY("data.num_classes", num_classes, int),
        BOOL_KEY("graph.word_doc", toggles.word_doc),
        BOOL_KEY("graph.pos_tags", toggles.pos_tags),
        BOOL_KEY("graph.translation_edges", toggles.translation_edges),
        BOOL_KEY("graph.similarity_edges", toggles.similarity_edges),
        BOOL_KEY("graph.unlabeled_docs", toggles.unlabeled_docs),
        INT_KEY("graph.variant", variant, int),
        INT_KEY("graph.K", k, Index),
        INT_KEY("graph.min_df", min_df, Index),
        DOUBLE_KEY("graph.self_loop_weight", self_loop_weight),
        INT_KEY("embed.fallback_dim", fallback_dim, Index),
        BOOL_KEY("embed.forbid_fallback", forbid_fallback),
        INT_KEY("embed.hash_seed", hash_seed, std::uint64_t),
        INT_KEY("model.d_hidden", d_hidden, Index),
        INT_KEY("model.d_out", d_out, Index),
        DOUBLE_KEY("model.leaky_slope", leaky_slope),
        DOUBLE_KEY("train.lr", lr),
        INT_KEY("train.batch_size", batch_size, Index),
        INT_KEY("train.max_epochs", max_epochs, Index),
        KeyEntry{"train.seeds", [](const Config& c) { return seeds_to_string(c.seeds); },
                 [](Config& c, const std::string& v) { c.seeds = parse_seed_list("train.seeds", v); }},
        BOOL_KEY("train.train_on_translations", train_on_translations),
        DOUBLE_KEY("optim.beta1", beta1),
        DOUBLE_KEY("optim.beta2", beta2),
        DOUBLE_KEY("optim.eps", eps),
        DOUBLE_KEY("optim.weight_decay", weight_decay),
    };
    return entries;
}

#undef STR_KEY
#undef BOOL_KEY
#undef INT_KEY
#undef DOUBLE_KEY

}  // namespace

void apply_override(Config& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ValidationError("config override must be key=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    for (const KeyEntry& entry : registry()) {
        if (key == entry.key) {
            entry.set(config, value);
            return;
        }
    }
    throw ValidationError("unknown config key '" + key + "'");
}

Config load_config(const std::string& path) {
    Config config;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        std::string trimmed = line;
        const auto hash = trimmed.find('#');
        if (hash != std::string::npos) trimmed.resize(hash);
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) trimmed.pop_back();
        std::size_t start = 0;
        while (start < trimmed.size() && (trimmed[start] == ' ' || trimmed[start] == '\t')) ++start;
        trimmed.erase(0, start);
        if (trimmed.empty()) return;
        try {
            apply_override(config, trimmed);
        } catch (const ValidationError& e) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    });
    return config;
}

std::string dump_config(const Config& config) {
    std::string out;
    for (const KeyEntry& entry : registry()) {
        out += entry.key;
        out += "=";
        out += entry.get(config);
        out += "\n";
    }
    return out;
}

void validate_config(const Config& config) {
    if (config.num_classes < 1) throw ValidationError("data.num_classes must be >= 1");
    if (config.variant != 0 && (config.variant < 1 || config.variant > 8)) {
        throw ValidationError("graph.variant must be 0 or in 1..8");
    }
    validate_toggles(effective_toggles(config));
    if (config.k < 1) throw ValidationError("graph.K must be >= 1");
    if (config.min_df < 1) throw ValidationError("graph.min_df must be >= 1");
    if (!(config.self_loop_weight > 0.0)) throw ValidationError("graph.self_loop_weight must be > 0");
    if (config.fallback_dim < 1) throw ValidationError("embed.fallback_dim must be >= 1");
    if (config.d_hidden < 1 || config.d_out < 1) throw ValidationError("model dimensions must be >= 1");
    if (config.batch_size < 1) throw ValidationError("train.batch_size must be >= 1");
    if (config.max_epochs < 1) throw ValidationError("train.max_epochs must be >= 1");
    if (config.seeds.empty()) throw ValidationError("train.seeds must not be empty");
    validate_hyper(adamw_hyper(config));
}

GraphToggles effective_toggles(const Config& config) {
    if (config.variant != 0) {
        return apply_variant(config.variant);
    }
    return config.toggles;
}

GraphBuildOptions graph_options(const Config& config) {
    GraphBuildOptions opts;
    opts.toggles = effective_toggles(config);
    opts.k = config.k;
    opts.min_df = config.min_df;
    opts.self_loop_weight = config.self_loop_weight;
    opts.hash_seed = config.hash_seed;
    opts.fallback_dim = config.fallback_dim;
    opts.forbid_fallback = config.forbid_fallback;
    return opts;
}

AdamWHyper adamw_hyper(const Config& config) {
    AdamWHyper hyper;
    hyper.lr = config.lr;
    hyper.beta1 = config.beta1;
    hyper.beta2 = config.beta2;
    hyper.eps = config.eps;
    hyper.weight_decay = config.weight_decay;
    return hyper;
}

}  // namespace hetgcn
