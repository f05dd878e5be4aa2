#include "hetgcn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"
#include "hetgcn/util.hpp"

namespace hetgcn {

std::vector<Index> train_mask_rows(const HeteroGraph& graph, const CorpusStore& store, bool train_on_translations) {
    std::vector<Index> rows;
    for (Index dr = 0; dr < graph.doc_count; ++dr) {
        const Document& doc = store.docs[graph.doc_store_index[static_cast<std::size_t>(dr)]];
        if (doc.split != Split::Train || !doc.label) continue;
        if (doc.translation_of && !train_on_translations) continue;
        rows.push_back(dr);
    }
    return rows;
}

namespace {

struct EvalSet {
    std::vector<Index> rows;
    std::vector<int> labels;
};

EvalSet eval_set(const HeteroGraph& graph, const CorpusStore& store, Split split,
                 const std::string& language_filter) {
    EvalSet set;
    for (Index dr = 0; dr < graph.doc_count; ++dr) {
        const Document& doc = store.docs[graph.doc_store_index[static_cast<std::size_t>(dr)]];
        if (doc.split != split || !doc.label) continue;
        if (!language_filter.empty() && doc.language != language_filter) continue;
        set.rows.push_back(dr);
        set.labels.push_back(*doc.label);
    }
    return set;
}

double accuracy_on(const std::vector<int>& predictions, const EvalSet& set) {
    Index correct = 0;
    for (std::size_t i = 0; i < set.rows.size(); ++i) {
        if (predictions[static_cast<std::size_t>(set.rows[i])] == set.labels[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(set.rows.size());
}

}  // namespace

double evaluate(const ModelParams& params, const HeteroGraph& graph, const CorpusStore& store,
                const Eigen::Ref<const Matrix>& h0, Split split, const std::string& language_filter, double slope) {
    const EvalSet set = eval_set(graph, store, split, language_filter);
    if (set.rows.empty()) {
        throw ValidationError("evaluate: no labeled '" + split_name(split) + "' documents" +
                              (language_filter.empty() ? "" : " for language '" + language_filter + "'"));
    }
    const ForwardCache cache = forward(graph, h0, params, slope);
    return accuracy_on(predict_classes(cache.logits), set);
}

TrainOutput train(const HeteroGraph& graph, const CorpusStore& store, const Eigen::Ref<const Matrix>& h0,
                  const Config& config, std::uint64_t seed) {
    const std::vector<Index> mask = train_mask_rows(graph, store, config.train_on_translations);
    if (mask.empty()) {
        throw ValidationError("train: no labeled train documents in the graph");
    }
    if (eval_set(graph, store, Split::Valid, "").rows.empty()) {
        throw ValidationError("train: no labeled valid documents in the graph");
    }

    // Batches are formed over documents sorted by id, so the trajectory does
    // not depend on corpus file order.
    struct TrainDoc {
        std::string id;
        Index row;
        int label;
    };
    std::vector<TrainDoc> order;
    order.reserve(mask.size());
    for (Index row : mask) {
        const Document& doc = store.docs[graph.doc_store_index[static_cast<std::size_t>(row)]];
        order.push_back({doc.id, row, *doc.label});
    }
    std::sort(order.begin(), order.end(), [](const TrainDoc& a, const TrainDoc& b) { return a.id < b.id; });

    ModelParams params =
        init_params(graph, h0.cols(), config.d_hidden, config.d_out, config.num_classes, seed);
    AdamWState state = init_adamw_state(params);
    const AdamWHyper hyper = adamw_hyper(config);
    rng::SplitMix shuffle_gen(rng::derive_stream(seed, "shuffle"));

    TrainOutput output;
    output.result.seed = seed;
    output.result.selected_epoch = 0;
    double best_val = -1.0;

    for (Index epoch = 1; epoch <= config.max_epochs; ++epoch) {
        rng::shuffle(order, shuffle_gen);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            std::vector<Index> batch_rows;
            std::vector<int> batch_labels;
            batch_rows.reserve(end - start);
            batch_labels.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                batch_rows.push_back(order[i].row);
                batch_labels.push_back(order[i].label);
            }
            const ForwardCache cache = forward(graph, h0, params, config.leaky_slope);
            const LossResult loss = softmax_xent(cache.logits, batch_rows, batch_labels);
            if (!std::isfinite(loss.loss)) {
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(start / static_cast<std::size_t>(config.batch_size) + 1));
            }
            const ModelGrads grads = backward(graph, cache, loss.dlogits, params, config.leaky_slope);
            adamw_step(params, grads, state, hyper);
            ++output.result.total_steps;
            loss_sum += loss.loss * static_cast<double>(end - start);
        }
        EpochStats stats;
        stats.train_loss = loss_sum / static_cast<double>(order.size());
        stats.val_accuracy = evaluate(params, graph, store, h0, Split::Valid, "", config.leaky_slope);
        output.result.epochs.push_back(stats);
        if (stats.val_accuracy > best_val) {
            best_val = stats.val_accuracy;
            output.result.selected_epoch = epoch;
            output.best_params = params;
        }
    }
    output.result.best_val_accuracy = best_val;
    return output;
}

ExperimentResult run_experiment(const CorpusStore& store, const EmbeddingTable& table, const Config& config) {
    validate_config(config);
    const GraphBuildOptions opts = graph_options(config);
    ExperimentResult result;
    result.graph = build_graph(store, table, opts);
    result.h0 = node_features(result.graph, table, opts);

    std::set<std::string> test_languages;
    for (Index dr = 0; dr < result.graph.doc_count; ++dr) {
        const Document& doc = store.docs[result.graph.doc_store_index[static_cast<std::size_t>(dr)]];
        if (doc.split == Split::Test && doc.label) {
            test_languages.insert(doc.language);
        }
    }

    for (std::uint64_t seed : config.seeds) {
        TrainOutput out = train(result.graph, store, result.h0, config, seed);
        out.result.test_accuracy =
            evaluate(out.best_params, result.graph, store, result.h0, Split::Test, "", config.leaky_slope);
        for (const std::string& lang : test_languages) {
            out.result.test_accuracy_by_language[lang] =
                evaluate(out.best_params, result.graph, store, result.h0, Split::Test, lang, config.leaky_slope);
        }
        result.report.seeds.push_back(std::move(out.result));
        result.best_params_per_seed.push_back(std::move(out.best_params));
    }

    double sum = 0.0;
    for (const SeedResult& sr : result.report.seeds) sum += sr.test_accuracy;
    result.report.mean_test_accuracy = sum / static_cast<double>(result.report.seeds.size());
    for (const std::string& lang : test_languages) {
        double lang_sum = 0.0;
        for (const SeedResult& sr : result.report.seeds) lang_sum += sr.test_accuracy_by_language.at(lang);
        result.report.mean_test_accuracy_by_language[lang] =
            lang_sum / static_cast<double>(result.report.seeds.size());
    }
    return result;
}

namespace {

nlohmann::ordered_json seed_record(const SeedResult& sr) {
    nlohmann::ordered_json rec;
    rec["seed"] = sr.seed;
    rec["selected_epoch"] = sr.selected_epoch;
    rec["best_val_accuracy"] = sr.best_val_accuracy;
    rec["test_accuracy"] = sr.test_accuracy;
    nlohmann::ordered_json langs;
    for (const auto& [lang, acc] : sr.test_accuracy_by_language) langs[lang] = acc;
    rec["test_accuracy_by_language"] = std::move(langs);
    nlohmann::ordered_json losses = nlohmann::ordered_json::array();
    nlohmann::ordered_json accs = nlohmann::ordered_json::array();
    for (const EpochStats& e : sr.epochs) {
        losses.push_back(e.train_loss);
        accs.push_back(e.val_accuracy);
    }
    rec["epoch_train_loss"] = std::move(losses);
    rec["epoch_val_accuracy"] = std::move(accs);
    return rec;
}

}  // namespace

std::string report_jsonl(const TrainReport& report) {
    std::string out;
    for (const SeedResult& sr : report.seeds) {
        out += seed_record(sr).dump();
        out += "\n";
    }
    nlohmann::ordered_json mean;
    mean["seed"] = "mean";
    mean["test_accuracy"] = report.mean_test_accuracy;
    nlohmann::ordered_json langs;
    for (const auto& [lang, acc] : report.mean_test_accuracy_by_language) langs[lang] = acc;
    mean["test_accuracy_by_language"] = std::move(langs);
    out += mean.dump();
    out += "\n";
    return out;
}

std::string report_table(const TrainReport& report) {
    std::ostringstream out;
    out << "seed  epoch*  val_acc  test_acc";
    for (const auto& [lang, acc] : report.mean_test_accuracy_by_language) {
        out << "  " << lang;
    }
    out << "\n";
    char buf[64];
    for (const SeedResult& sr : report.seeds) {
        std::snprintf(buf, sizeof(buf), "%-4llu  %-6lld  %.4f   %.4f", static_cast<unsigned long long>(sr.seed),
                      static_cast<long long>(sr.selected_epoch), sr.best_val_accuracy, sr.test_accuracy);
        out << buf;
        for (const auto& [lang, acc] : report.mean_test_accuracy_by_language) {
            std::snprintf(buf, sizeof(buf), "  %.4f", sr.test_accuracy_by_language.at(lang));
            out << buf;
        }
        out << "\n";
    }
    std::snprintf(buf, sizeof(buf), "mean  -       -        %.4f", report.mean_test_accuracy);
    out << buf;
    for (const auto& [lang, acc] : report.mean_test_accuracy_by_language) {
        std::snprintf(buf, sizeof(buf), "  %.4f", acc);
        out << buf;
    }
    out << "\n";
    return out.str();
}

std::string predictions_jsonl(const ModelParams& params, const HeteroGraph& graph, const CorpusStore& store,
                              const Eigen::Ref<const Matrix>& h0, double slope) {
    const ForwardCache cache = forward(graph, h0, params, slope);
    const std::vector<int> preds = predict_classes(cache.logits);
    std::string out;
    for (Index dr = 0; dr < graph.doc_count; ++dr) {
        const Document& doc = store.docs[graph.doc_store_index[static_cast<std::size_t>(dr)]];
        nlohmann::ordered_json rec;
        rec["id"] = doc.id;
        rec["language"] = doc.language;
        rec["split"] = split_name(doc.split);
        if (doc.label) {
            rec["label"] = *doc.label;
        }
        rec["pred"] = preds[static_cast<std::size_t>(dr)];
        out += rec.dump();
        out += "\n";
    }
    return out;
}

}  // namespace hetgcn
