#include <doctest.h>

#include <algorithm>
#include <map>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"
#include "hetgcn/train.hpp"

using namespace hetgcn;

namespace {

// 20-document two-word planted corpus: the label is the indicator of one
// keyword; the shared filler sits in every document, so its idf is zero and
// only the keyword edges survive.
CorpusStore planted_corpus() {
    std::vector<Document> docs;
    for (int i = 0; i < 20; ++i) {
        const int cls = i % 2;
        Document d;
        d.id = "d" + std::to_string(i);
        d.language = "en";
        for (int r = 0; r < 3; ++r) {
            d.tokens.push_back({cls == 1 ? "happy" : "sad", UdTag::ADJ});
        }
        d.tokens.push_back({"the", UdTag::DET});
        d.label = cls;
        if (i < 12) {
            d.split = Split::Train;
        } else if (i < 16) {
            d.split = Split::Valid;
        } else {
            d.split = Split::Test;
        }
        docs.push_back(std::move(d));
    }
    return make_corpus(std::move(docs), 2);
}

Config toy_config() {
    Config config;
    config.num_classes = 2;
    config.toggles = GraphToggles{true, false, false, false, true};
    config.min_df = 1;
    config.fallback_dim = 8;
    config.d_hidden = 16;
    config.d_out = 16;
    config.lr = 0.05;
    config.batch_size = 256;
    config.max_epochs = 15;
    config.self_loop_weight = 0.25;  // keeps the keyword channel dominant
    config.seeds = {0};
    return config;
}

}  // namespace

TEST_SUITE("train") {

TEST_CASE("shuffle permutes without dropping or duplicating") {
    std::vector<int> items(37);
    for (int i = 0; i < 37; ++i) items[i] = i;
    const std::vector<int> original = items;
    rng::SplitMix gen(5);
    rng::shuffle(items, gen);
    CHECK(items != original);  // 37! permutations; identity is effectively impossible
    std::vector<int> sorted = items;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == original);
}

TEST_CASE("single batch means one optimizer step per epoch") {
    const CorpusStore store = planted_corpus();
    Config config = toy_config();
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);
    const Matrix h0 = node_features(graph, {}, opts);

    config.batch_size = 256;  // >= |train| = 12
    TrainOutput single = train(graph, store, h0, config, 0);
    CHECK(single.result.total_steps == config.max_epochs);

    config.batch_size = 5;  // 12 docs -> 3 batches per epoch
    TrainOutput batched = train(graph, store, h0, config, 0);
    CHECK(batched.result.total_steps == config.max_epochs * 3);
}

TEST_CASE("same seed gives bit-identical loss trajectories") {
    const CorpusStore store = planted_corpus();
    const Config config = toy_config();
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);
    const Matrix h0 = node_features(graph, {}, opts);

    const TrainOutput a = train(graph, store, h0, config, 3);
    const TrainOutput b = train(graph, store, h0, config, 3);
    REQUIRE(a.result.epochs.size() == b.result.epochs.size());
    for (std::size_t e = 0; e < a.result.epochs.size(); ++e) {
        CHECK(a.result.epochs[e].train_loss == b.result.epochs[e].train_loss);
        CHECK(a.result.epochs[e].val_accuracy == b.result.epochs[e].val_accuracy);
    }
    CHECK(a.result.selected_epoch == b.result.selected_epoch);
    CHECK(a.best_params.head_weight == b.best_params.head_weight);
}

TEST_CASE("the planted toy trains to perfect validation accuracy") {
    const CorpusStore store = planted_corpus();
    const Config config = toy_config();
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);
    const Matrix h0 = node_features(graph, {}, opts);

    const TrainOutput out = train(graph, store, h0, config, 0);
    CHECK(out.result.epochs.back().train_loss < out.result.epochs.front().train_loss);
    CHECK(out.result.best_val_accuracy == 1.0);
}

TEST_CASE("model selection returns the earliest best epoch") {
    const CorpusStore store = planted_corpus();
    const Config config = toy_config();
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);
    const Matrix h0 = node_features(graph, {}, opts);
    const TrainOutput out = train(graph, store, h0, config, 1);

    double best = -1.0;
    Index earliest = 0;
    for (std::size_t e = 0; e < out.result.epochs.size(); ++e) {
        if (out.result.epochs[e].val_accuracy > best) {
            best = out.result.epochs[e].val_accuracy;
            earliest = static_cast<Index>(e) + 1;
        }
    }
    CHECK(out.result.selected_epoch == earliest);
    CHECK(out.result.best_val_accuracy == best);
}

TEST_CASE("errors: no train docs, no valid docs") {
    std::vector<Document> docs;
    Document d;
    d.id = "v0";
    d.language = "en";
    d.tokens = {{"x", UdTag::X}, {"y", UdTag::X}};
    d.label = 0;
    d.split = Split::Valid;
    docs.push_back(d);
    d.id = "v1";
    d.label = 1;
    docs.push_back(d);
    const CorpusStore store = make_corpus(docs, 2);
    Config config = toy_config();
    config.min_df = 1;
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);
    const Matrix h0 = node_features(graph, {}, opts);
    CHECK_THROWS_WITH_AS(train(graph, store, h0, config, 0), doctest::Contains("train"), ValidationError);
}

TEST_CASE("evaluate: tie-break toward class 0 with all-zero parameters") {
    const CorpusStore store = planted_corpus();
    const Config config = toy_config();
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);
    const Matrix h0 = node_features(graph, {}, opts);

    ModelParams params = init_params(graph, h0.cols(), config.d_hidden, config.d_out, 2, 0);
    for (int layer = 0; layer < 2; ++layer) {
        for (auto& [etype, w] : params.layers[layer]) w.setZero();
    }
    params.head_weight.setZero();
    params.head_bias.setZero();
    // Test split is balanced: predictions are all class 0, so accuracy is 0.5.
    CHECK(evaluate(params, graph, store, h0, Split::Test, "", config.leaky_slope) == 0.5);
}

TEST_CASE("evaluate: empty set errors") {
    const CorpusStore store = planted_corpus();
    const Config config = toy_config();
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);
    const Matrix h0 = node_features(graph, {}, opts);
    const ModelParams params = init_params(graph, h0.cols(), 4, 4, 2, 0);
    CHECK_THROWS_AS(evaluate(params, graph, store, h0, Split::Test, "fr", config.leaky_slope), ValidationError);
}

TEST_CASE("run_experiment: three seeds, mean is the arithmetic mean") {
    const CorpusStore store = planted_corpus();
    Config config = toy_config();
    config.seeds = {0, 1, 2};
    const ExperimentResult result = run_experiment(store, {}, config);
    REQUIRE(result.report.seeds.size() == 3);
    const double mean = (result.report.seeds[0].test_accuracy + result.report.seeds[1].test_accuracy +
                         result.report.seeds[2].test_accuracy) /
                        3.0;
    CHECK(result.report.mean_test_accuracy == doctest::Approx(mean).epsilon(1e-12));
    CHECK(result.best_params_per_seed.size() == 3);

    Config single = config;
    single.seeds = {1};
    const ExperimentResult one = run_experiment(store, {}, single);
    CHECK(one.report.mean_test_accuracy == one.report.seeds[0].test_accuracy);
}

TEST_CASE("reports serialize deterministically") {
    const CorpusStore store = planted_corpus();
    Config config = toy_config();
    config.seeds = {0, 1};
    const ExperimentResult a = run_experiment(store, {}, config);
    const ExperimentResult b = run_experiment(store, {}, config);
    CHECK(report_jsonl(a.report) == report_jsonl(b.report));
    CHECK(report_table(a.report) == report_table(b.report));
    CHECK(predictions_jsonl(a.best_params_per_seed[0], a.graph, store, a.h0, config.leaky_slope) ==
          predictions_jsonl(b.best_params_per_seed[0], b.graph, store, b.h0, config.leaky_slope));
}

TEST_CASE("translated train docs are masked out unless train_on_translations") {
    std::vector<Document> docs;
    for (int i = 0; i < 6; ++i) {
        Document d;
        d.id = "en" + std::to_string(i);
        d.language = "en";
        d.tokens = {{i % 2 ? "happy" : "sad", UdTag::ADJ}, {"the", UdTag::DET}};
        d.label = i % 2;
        d.split = Split::Train;
        docs.push_back(d);
    }
    // A translated copy of en0 in German, labeled, split train.
    Document tr;
    tr.id = "de0";
    tr.language = "de";
    tr.tokens = {{"traurig", UdTag::ADJ}, {"das", UdTag::DET}};
    tr.label = 0;
    tr.split = Split::Train;
    tr.translation_of = "en0";
    docs.push_back(tr);
    const CorpusStore store = make_corpus(docs, 2);

    Config config = toy_config();
    config.min_df = 1;
    config.toggles.translation_edges = true;  // keep the translated copy in the graph
    const GraphBuildOptions opts = graph_options(config);
    const HeteroGraph graph = build_graph(store, {}, opts);

    const auto base = train_mask_rows(graph, store, false);
    CHECK(base.size() == 6);
    const auto with_translations = train_mask_rows(graph, store, true);
    CHECK(with_translations.size() == 7);
}

}  // TEST_SUITE
