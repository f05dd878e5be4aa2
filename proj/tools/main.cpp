#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetgcn/checkpoint.hpp"
#include "hetgcn/config.hpp"
#include "hetgcn/errors.hpp"
#include "hetgcn/synth.hpp"
#include "hetgcn/train.hpp"
#include "hetgcn/util.hpp"

namespace fs = std::filesystem;
using namespace hetgcn;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::string corpus_path;
    std::string embeddings_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out) {
    cmd->add_option("--config", args.config_path, "Config file (key=value lines)");
    cmd->add_option("--set", args.overrides, "Config override key=value (repeatable)");
    cmd->add_option("--corpus", args.corpus_path, "Corpus JSONL path (overrides data.corpus)");
    cmd->add_option("--embeddings", args.embeddings_path, "Embedding JSONL path (overrides data.embeddings)");
    if (with_out) {
        cmd->add_option("--out", args.out_dir, "Output directory")->required();
    }
}

Config resolve_config(const CommonArgs& args) {
    Config config;
    if (!args.config_path.empty()) {
        config = load_config(args.config_path);
    }
    for (const std::string& assignment : args.overrides) {
        apply_override(config, assignment);
    }
    if (!args.corpus_path.empty()) config.corpus_path = args.corpus_path;
    if (!args.embeddings_path.empty()) config.embeddings_path = args.embeddings_path;
    return config;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open output file: " + path.string());
    }
    out << content;
}

// Resolved config plus input digests; enough to reproduce the run.
void write_provenance(const fs::path& dir, const std::string& subcommand, const Config& config,
                      const std::string& extra = {}) {
    std::string text = "subcommand=" + subcommand + "\n";
    if (!config.corpus_path.empty() && fs::exists(config.corpus_path)) {
        text += "digest.corpus=" + file_digest_hex(config.corpus_path) + "\n";
    }
    if (!config.embeddings_path.empty() && fs::exists(config.embeddings_path)) {
        text += "digest.embeddings=" + file_digest_hex(config.embeddings_path) + "\n";
    }
    text += extra;
    text += dump_config(config);
    write_file(dir / "provenance.txt", text);
}

struct LoadedInputs {
    CorpusStore store;
    EmbeddingTable table;
};

LoadedInputs load_inputs(const Config& config) {
    if (config.corpus_path.empty()) {
        throw ValidationError("no corpus given: set data.corpus or pass --corpus");
    }
    LoadedInputs inputs;
    inputs.store = load_corpus(config.corpus_path, config.num_classes);
    if (!config.embeddings_path.empty()) {
        inputs.table = load_embeddings(config.embeddings_path);
    }
    return inputs;
}

std::string stats_text(const HeteroGraph& graph) {
    std::string text;
    text += "doc_nodes=" + std::to_string(graph.doc_count) + "\n";
    text += "word_nodes=" + std::to_string(graph.word_count) + "\n";
    text += "nodes=" + std::to_string(graph.n()) + "\n";
    for (const auto& [name, count] : edge_type_counts(graph)) {
        text += "edges." + name + "=" + std::to_string(count) + "\n";
    }
    return text;
}

int cmd_build_graph(const CommonArgs& args) {
    const Config config = resolve_config(args);
    validate_config(config);
    const LoadedInputs inputs = load_inputs(config);
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(inputs.store, inputs.table, opts);

    fs::create_directories(args.out_dir);
    std::ofstream dump(fs::path(args.out_dir) / "graph.txt", std::ios::binary);
    write_graph_dump(dump, graph, opts);
    const std::string stats = stats_text(graph);
    write_file(fs::path(args.out_dir) / "stats.txt", stats);
    write_provenance(args.out_dir, "build-graph", config);
    std::cout << stats;
    return 0;
}

int cmd_train(const CommonArgs& args) {
    const Config config = resolve_config(args);
    validate_config(config);
    const LoadedInputs inputs = load_inputs(config);
    const ExperimentResult result = run_experiment(inputs.store, inputs.table, config);

    fs::create_directories(args.out_dir);
    write_file(fs::path(args.out_dir) / "report.jsonl", report_jsonl(result.report));
    const std::string table = report_table(result.report);
    write_file(fs::path(args.out_dir) / "report.txt", table);
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
        const std::string tag = std::to_string(config.seeds[i]);
        save_checkpoint((fs::path(args.out_dir) / ("checkpoint_seed" + tag + ".bin")).string(),
                        result.best_params_per_seed[i]);
        write_file(fs::path(args.out_dir) / ("predictions_seed" + tag + ".jsonl"),
                   predictions_jsonl(result.best_params_per_seed[i], result.graph, inputs.store, result.h0,
                                     config.leaky_slope));
    }
    write_provenance(args.out_dir, "train", config);
    std::cout << table;
    return 0;
}

int cmd_evaluate(const CommonArgs& args, const std::string& checkpoint_path, const std::string& split_str,
                 const std::string& language) {
    const Config config = resolve_config(args);
    validate_config(config);
    const auto split = split_from_string(split_str);
    if (!split) {
        throw ValidationError("unknown split '" + split_str + "'");
    }
    const LoadedInputs inputs = load_inputs(config);
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(inputs.store, inputs.table, opts);
    const Matrix h0 = node_features(graph, inputs.table, opts);
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    const double acc = evaluate(ckpt.params, graph, inputs.store, h0, *split, language, config.leaky_slope);
    std::cout << "accuracy=" << format_double(acc) << "\n";
    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        nlohmann::ordered_json rec;
        rec["split"] = split_str;
        rec["language"] = language;
        rec["accuracy"] = acc;
        write_file(fs::path(args.out_dir) / "eval.json", rec.dump() + "\n");
        write_provenance(args.out_dir, "evaluate", config);
    }
    return 0;
}

int cmd_ablate(const CommonArgs& args) {
    const Config base = resolve_config(args);
    const LoadedInputs inputs = load_inputs(base);

    fs::create_directories(args.out_dir);
    std::string jsonl;
    struct Row {
        int variant;
        bool ok;
        std::string error;
        TrainReport report;
        std::vector<std::string> edge_types;
    };
    std::vector<Row> rows;
    for (int variant = 1; variant <= 8; ++variant) {
        Config config = base;
        config.variant = variant;
        Row row;
        row.variant = variant;
        row.ok = false;
        try {
            validate_config(config);
            ExperimentResult result = run_experiment(inputs.store, inputs.table, config);
            for (const auto& [name, count] : edge_type_counts(result.graph)) {
                row.edge_types.push_back(name);
            }
            row.report = std::move(result.report);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
            std::cerr << "variant " << variant << " failed: " << e.what() << "\n";
        }
        nlohmann::ordered_json rec;
        rec["variant"] = variant;
        const GraphToggles t = apply_variant(variant);
        rec["toggles"] = {{"word_doc", t.word_doc},
                          {"pos_tags", t.pos_tags},
                          {"translation_edges", t.translation_edges},
                          {"similarity_edges", t.similarity_edges},
                          {"unlabeled_docs", t.unlabeled_docs}};
        if (row.ok) {
            rec["edge_types"] = row.edge_types;
            rec["mean_test_accuracy"] = row.report.mean_test_accuracy;
            nlohmann::ordered_json langs;
            for (const auto& [lang, acc] : row.report.mean_test_accuracy_by_language) langs[lang] = acc;
            rec["mean_test_accuracy_by_language"] = std::move(langs);
        } else {
            rec["error"] = row.error;
        }
        jsonl += rec.dump();
        jsonl += "\n";
        rows.push_back(std::move(row));
    }
    write_file(fs::path(args.out_dir) / "ablate.jsonl", jsonl);
    write_provenance(args.out_dir, "ablate", base);

    std::ostringstream table;
    table << "variant ";
    for (const Row& row : rows) table << "      " << row.variant;
    table << "\n";
    const char* toggle_names[5] = {"word_doc", "pos_tags", "translation", "similarity", "unlabeled"};
    for (int t = 0; t < 5; ++t) {
        table << std::left << std::setw(12) << toggle_names[t];
        for (const Row& row : rows) {
            const GraphToggles tg = apply_variant(row.variant);
            const bool flags[5] = {tg.word_doc, tg.pos_tags, tg.translation_edges, tg.similarity_edges,
                                   tg.unlabeled_docs};
            table << std::setw(7) << (flags[t] ? "x" : "");
        }
        table << "\n";
    }
    std::map<std::string, bool> langs;
    for (const Row& row : rows) {
        if (!row.ok) continue;
        for (const auto& [lang, acc] : row.report.mean_test_accuracy_by_language) langs[lang] = true;
    }
    for (const auto& [lang, present] : langs) {
        table << std::left << std::setw(12) << lang;
        for (const Row& row : rows) {
            char buf[16];
            if (row.ok && row.report.mean_test_accuracy_by_language.count(lang)) {
                std::snprintf(buf, sizeof(buf), "%.4f", row.report.mean_test_accuracy_by_language.at(lang));
            } else {
                std::snprintf(buf, sizeof(buf), "-");
            }
            table << std::setw(7) << buf;
        }
        table << "\n";
    }
    table << std::left << std::setw(12) << "mean";
    for (const Row& row : rows) {
        char buf[16];
        if (row.ok) {
            std::snprintf(buf, sizeof(buf), "%.4f", row.report.mean_test_accuracy);
        } else {
            std::snprintf(buf, sizeof(buf), "fail");
        }
        table << std::setw(7) << buf;
    }
    table << "\n";
    write_file(fs::path(args.out_dir) / "ablate.txt", table.str());
    std::cout << table.str();
    return 0;
}

int cmd_synth(const CommonArgs& args, const SynthParams& params) {
    SynthOutput output = synthesize(params);
    fs::create_directories(args.out_dir);
    const fs::path corpus_path = fs::path(args.out_dir) / "corpus.jsonl";
    const fs::path embeddings_path = fs::path(args.out_dir) / "embeddings.jsonl";
    write_corpus(corpus_path.string(), output.docs);
    write_embeddings(embeddings_path.string(), output.embeddings);

    Config config = resolve_config(args);
    config.corpus_path = corpus_path.string();
    config.embeddings_path = embeddings_path.string();
    config.num_classes = params.classes;
    std::string extra;
    extra += "synth.languages=" + std::to_string(params.languages) + "\n";
    extra += "synth.docs_per_language=" + std::to_string(params.docs_per_language) + "\n";
    extra += "synth.vocab_per_language=" + std::to_string(params.vocab_per_language) + "\n";
    extra += "synth.classes=" + std::to_string(params.classes) + "\n";
    extra += "synth.keyword_strength=" + format_double(params.keyword_strength) + "\n";
    extra += "synth.translation_fraction=" + format_double(params.translation_fraction) + "\n";
    extra += "synth.unlabeled=" + std::to_string(params.unlabeled) + "\n";
    extra += "synth.dim=" + std::to_string(params.dim) + "\n";
    extra += "synth.seed=" + std::to_string(params.seed) + "\n";
    write_provenance(args.out_dir, "synth", config, extra);
    std::cout << "wrote " << output.docs.size() << " documents, " << output.embeddings.size()
              << " embedding rows to " << args.out_dir << "\n";
    return 0;
}

int cmd_dump_config(const CommonArgs& args) {
    const Config config = resolve_config(args);
    std::cout << dump_config(config);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-lingual heterogeneous-graph text classifier"};
    app.require_subcommand(1);

    CommonArgs args;
    SynthParams synth_params;
    std::string checkpoint_path;
    std::string split_str = "test";
    std::string language;

    CLI::App* build = app.add_subcommand("build-graph", "Build and dump the heterogeneous graph");
    add_common(build, args, true);

    CLI::App* train_cmd = app.add_subcommand("train", "Train over all configured seeds and report");
    add_common(train_cmd, args, true);

    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint on a split");
    add_common(eval_cmd, args, false);
    eval_cmd->add_option("--out", args.out_dir, "Optional output directory");
    eval_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
    eval_cmd->add_option("--split", split_str, "Split to evaluate (train|valid|test)");
    eval_cmd->add_option("--language", language, "Restrict to one language code");

    CLI::App* ablate_cmd = app.add_subcommand("ablate", "Run all 8 graph-construction variants");
    add_common(ablate_cmd, args, true);

    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic bilingual corpus");
    add_common(synth_cmd, args, true);
    synth_cmd->add_option("--languages", synth_params.languages, "Number of languages (first is the source)");
    synth_cmd->add_option("--docs-per-language", synth_params.docs_per_language, "Documents per language");
    synth_cmd->add_option("--vocab", synth_params.vocab_per_language, "Vocabulary size per language");
    synth_cmd->add_option("--classes", synth_params.classes, "Number of classes");
    synth_cmd->add_option("--strength", synth_params.keyword_strength, "Class-direction embedding offset");
    synth_cmd->add_option("--translation-fraction", synth_params.translation_fraction,
                          "Fraction of labeled target docs paired to a source doc");
    synth_cmd->add_option("--unlabeled", synth_params.unlabeled, "Size of the unlabeled pool");
    synth_cmd->add_option("--dim", synth_params.dim, "Embedding dimension");
    synth_cmd->add_option("--seed", synth_params.seed, "Generator seed");

    CLI::App* dump_cmd = app.add_subcommand("dump-config", "Print the resolved configuration");
    add_common(dump_cmd, args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are validation errors
    }

    try {
        if (build->parsed()) return cmd_build_graph(args);
        if (train_cmd->parsed()) return cmd_train(args);
        if (eval_cmd->parsed()) return cmd_evaluate(args, checkpoint_path, split_str, language);
        if (ablate_cmd->parsed()) return cmd_ablate(args);
        if (synth_cmd->parsed()) return cmd_synth(args, synth_params);
        if (dump_cmd->parsed()) return cmd_dump_config(args);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
