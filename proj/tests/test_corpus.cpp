#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hetgcn/corpus.hpp"
#include "hetgcn/errors.hpp"

using namespace hetgcn;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

const char* kTwoDocCorpus = R"({"id": "a", "language": "en", "tokens": [["Hello", "INTJ"], ["world", "NOUN"]], "label": 0, "split": "train"}
{"id": "b", "language": "en", "tokens": [["bye", "INTJ"]], "label": 1, "split": "test"}
)";

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("loads a two-record corpus") {
    const auto path = write_temp("corpus_two.jsonl", kTwoDocCorpus);
    const CorpusStore store = load_corpus(path, 2);
    CHECK(store.docs.size() == 2);
    CHECK(store.languages.size() == 1);
    CHECK(store.docs[0].id == "a");
    CHECK(store.docs[0].tokens[0].surface == "Hello");
    CHECK(store.docs[0].tokens[0].pos == UdTag::INTJ);
    CHECK(store.docs[1].split == Split::Test);
}

TEST_CASE("train record without label is rejected with its id") {
    const auto path = write_temp("corpus_nolabel.jsonl",
                                 R"({"id": "bad", "language": "en", "tokens": [["x", "X"]], "split": "train"})"
                                 "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path, 2), doctest::Contains("bad"), ValidationError);
}

TEST_CASE("unknown POS tags map to X and are tallied per tag") {
    // Five records; "NN" appears three times and "VBZ" once across them.
    const auto path = write_temp("corpus_unknown_pos.jsonl",
        R"({"id": "d1", "language": "en", "tokens": [["a", "NN"], ["b", "NOUN"]], "label": 0, "split": "train"}
{"id": "d2", "language": "en", "tokens": [["c", "NN"]], "label": 1, "split": "train"}
{"id": "d3", "language": "en", "tokens": [["d", "VBZ"]], "label": 0, "split": "train"}
{"id": "d4", "language": "en", "tokens": [["e", "NN"]], "split": "test"}
{"id": "d5", "language": "en", "tokens": [["f", "VERB"]], "split": "unlabeled"}
)");
    const CorpusStore store = load_corpus(path, 2);
    CHECK(store.docs[0].tokens[0].pos == UdTag::X);
    CHECK(store.docs[0].tokens[1].pos == UdTag::NOUN);
    REQUIRE(store.unknown_pos_counts.size() == 2);
    CHECK(store.unknown_pos_counts.at("NN") == 3);
    CHECK(store.unknown_pos_counts.at("VBZ") == 1);
}

TEST_CASE("malformed line reports its line number") {
    const auto path = write_temp("corpus_malformed.jsonl",
                                 R"({"id": "ok", "language": "en", "tokens": [["x", "X"]], "label": 0, "split": "train"})"
                                 "\nnot json\n");
    CHECK_THROWS_WITH_AS(load_corpus(path, 2), doctest::Contains(":2"), ValidationError);
}

TEST_CASE("duplicate ids, dangling and same-language translations are rejected") {
    const auto dup = write_temp("corpus_dup.jsonl",
        R"({"id": "a", "language": "en", "tokens": [["x", "X"]], "label": 0, "split": "train"}
{"id": "a", "language": "de", "tokens": [["y", "X"]], "label": 0, "split": "train"}
)");
    CHECK_THROWS_AS(load_corpus(dup, 2), ValidationError);

    const auto dangling = write_temp("corpus_dangling.jsonl",
        R"({"id": "a", "language": "en", "tokens": [["x", "X"]], "label": 0, "split": "train", "translation_of": "ghost"})"
        "\n");
    CHECK_THROWS_WITH_AS(load_corpus(dangling, 2), doctest::Contains("ghost"), ValidationError);

    const auto same_lang = write_temp("corpus_samelang.jsonl",
        R"({"id": "a", "language": "en", "tokens": [["x", "X"]], "label": 0, "split": "train"}
{"id": "b", "language": "en", "tokens": [["y", "X"]], "label": 0, "split": "train", "translation_of": "a"}
)");
    CHECK_THROWS_AS(load_corpus(same_lang, 2), ValidationError);
}

TEST_CASE("label out of range and labeled-unlabeled are rejected") {
    const auto range = write_temp("corpus_range.jsonl",
        R"({"id": "a", "language": "en", "tokens": [["x", "X"]], "label": 2, "split": "train"})"
        "\n");
    CHECK_THROWS_AS(load_corpus(range, 2), ValidationError);

    const auto unl = write_temp("corpus_unlabeled.jsonl",
        R"({"id": "a", "language": "en", "tokens": [["x", "X"]], "label": 0, "split": "unlabeled"})"
        "\n");
    CHECK_THROWS_AS(load_corpus(unl, 2), ValidationError);
}

TEST_CASE("unknown fields are ignored") {
    const auto path = write_temp("corpus_extra.jsonl",
        R"({"id": "a", "language": "en", "tokens": [["x", "X"]], "label": 0, "split": "train", "rating": 5})"
        "\n");
    CHECK(load_corpus(path, 2).docs.size() == 1);
}

TEST_CASE("link_translations dedupes unordered pairs") {
    std::vector<Document> docs;
    docs.push_back({"a", "en", {{"x", UdTag::X}}, 0, Split::Train, std::nullopt});
    docs.push_back({"b", "de", {{"y", UdTag::X}}, std::nullopt, Split::Test, "a"});
    SUBCASE("single link") {
        const CorpusStore store = make_corpus(docs, 2);
        const auto pairs = link_translations(store);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0] == std::pair<std::string, std::string>{"a", "b"});
    }
    SUBCASE("both directions collapse to one pair") {
        docs[0].translation_of = "b";
        const CorpusStore store = make_corpus(docs, 2);
        CHECK(link_translations(store).size() == 1);
    }
    SUBCASE("no links, empty list") {
        docs[1].translation_of.reset();
        const CorpusStore store = make_corpus(docs, 2);
        CHECK(link_translations(store).empty());
    }
}

TEST_CASE("every translation pair crosses languages") {
    std::vector<Document> docs;
    for (int i = 0; i < 6; ++i) {
        Document d;
        d.id = "s" + std::to_string(i);
        d.language = "en";
        d.tokens = {{"w", UdTag::NOUN}};
        d.label = i % 2;
        d.split = Split::Train;
        docs.push_back(d);
    }
    for (int i = 0; i < 4; ++i) {
        Document d;
        d.id = "t" + std::to_string(i);
        d.language = "de";
        d.tokens = {{"w", UdTag::NOUN}};
        d.split = Split::Test;
        d.translation_of = "s" + std::to_string(i);
        docs.push_back(d);
    }
    const CorpusStore store = make_corpus(docs, 2);
    for (const auto& [a, b] : link_translations(store)) {
        CHECK(store.doc_by_id(a).language != store.doc_by_id(b).language);
    }
}

TEST_CASE("round-trips through serialize and load") {
    const auto path = write_temp("corpus_rt_src.jsonl", kTwoDocCorpus);
    const CorpusStore store = load_corpus(path, 2);
    const auto rt_path = write_temp("corpus_rt_dst.jsonl", "");
    write_corpus(rt_path, store.docs);
    const CorpusStore reloaded = load_corpus(rt_path, 2);
    REQUIRE(reloaded.docs.size() == store.docs.size());
    for (std::size_t i = 0; i < store.docs.size(); ++i) {
        CHECK(reloaded.docs[i].id == store.docs[i].id);
        CHECK(reloaded.docs[i].language == store.docs[i].language);
        CHECK(reloaded.docs[i].label == store.docs[i].label);
        CHECK(reloaded.docs[i].split == store.docs[i].split);
        CHECK(reloaded.docs[i].translation_of == store.docs[i].translation_of);
        REQUIRE(reloaded.docs[i].tokens.size() == store.docs[i].tokens.size());
        for (std::size_t t = 0; t < store.docs[i].tokens.size(); ++t) {
            CHECK(reloaded.docs[i].tokens[t].surface == store.docs[i].tokens[t].surface);
            CHECK(reloaded.docs[i].tokens[t].pos == store.docs[i].tokens[t].pos);
        }
    }
}

TEST_CASE("loading identical bytes twice gives identical stores") {
    const auto path = write_temp("corpus_det.jsonl", kTwoDocCorpus);
    const CorpusStore s1 = load_corpus(path, 2);
    const CorpusStore s2 = load_corpus(path, 2);
    REQUIRE(s1.docs.size() == s2.docs.size());
    for (std::size_t i = 0; i < s1.docs.size(); ++i) {
        CHECK(s1.docs[i].id == s2.docs[i].id);
    }
}

}  // TEST_SUITE
