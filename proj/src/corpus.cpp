#include "hetgcn/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "hetgcn/errors.hpp"
#include "hetgcn/util.hpp"

namespace hetgcn {

namespace {

const std::array<std::string, kNumUdTags> kUdTagNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
};

const std::array<std::string, 4> kSplitNames = {"train", "valid", "test", "unlabeled"};

bool has_whitespace(const std::string& s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

const std::string& ud_tag_name(UdTag tag) { return kUdTagNames[static_cast<std::size_t>(tag)]; }

UdTag ud_tag_from_string(const std::string& s, bool* known) {
    for (std::size_t i = 0; i < kUdTagNames.size(); ++i) {
        if (s == kUdTagNames[i]) {
            if (known) *known = true;
            return static_cast<UdTag>(i);
        }
    }
    if (known) *known = false;
    return UdTag::X;
}

const std::string& split_name(Split s) { return kSplitNames[static_cast<std::size_t>(s)]; }

std::optional<Split> split_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kSplitNames.size(); ++i) {
        if (s == kSplitNames[i]) return static_cast<Split>(i);
    }
    return std::nullopt;
}

const Document& CorpusStore::doc_by_id(const std::string& id) const {
    auto it = index_by_id.find(id);
    if (it == index_by_id.end()) {
        throw ValidationError("unknown document id: " + id);
    }
    return docs[it->second];
}

namespace {

void validate_document(const Document& doc, int num_classes, const std::string& where) {
    if (doc.id.empty()) {
        throw ValidationError(where + ": empty document id");
    }
    if (doc.language.empty()) {
        throw ValidationError(where + ": document '" + doc.id + "' has empty language");
    }
    if (doc.tokens.empty()) {
        throw ValidationError(where + ": document '" + doc.id + "' has no tokens");
    }
    for (const Token& tok : doc.tokens) {
        if (tok.surface.empty() || has_whitespace(tok.surface)) {
            throw ValidationError(where + ": document '" + doc.id + "' has an empty or whitespace-bearing token surface");
        }
    }
    if (doc.label) {
        if (*doc.label < 0 || *doc.label >= num_classes) {
            throw ValidationError(where + ": document '" + doc.id + "' label " + std::to_string(*doc.label) +
                                  " out of range [0, " + std::to_string(num_classes) + ")");
        }
    }
    if (doc.split == Split::Train && !doc.label) {
        throw ValidationError(where + ": train document '" + doc.id + "' has no label");
    }
    if (doc.split == Split::Unlabeled && doc.label) {
        throw ValidationError(where + ": unlabeled document '" + doc.id + "' carries a label");
    }
    if (doc.translation_of && *doc.translation_of == doc.id) {
        throw ValidationError(where + ": document '" + doc.id + "' references itself via translation_of");
    }
}

CorpusStore finalize(std::vector<Document> docs, int num_classes,
                     std::map<std::string, std::size_t> unknown_pos_counts) {
    CorpusStore store;
    store.docs = std::move(docs);
    store.num_classes = num_classes;
    store.unknown_pos_counts = std::move(unknown_pos_counts);
    for (std::size_t i = 0; i < store.docs.size(); ++i) {
        const Document& doc = store.docs[i];
        auto [it, inserted] = store.index_by_id.emplace(doc.id, i);
        (void)it;
        if (!inserted) {
            throw ValidationError("duplicate document id: " + doc.id);
        }
        store.languages.insert(doc.language);
    }
    // Cross-record checks once every id is known.
    for (const Document& doc : store.docs) {
        if (!doc.translation_of) continue;
        auto it = store.index_by_id.find(*doc.translation_of);
        if (it == store.index_by_id.end()) {
            throw ValidationError("document '" + doc.id + "' has dangling translation_of '" + *doc.translation_of + "'");
        }
        if (store.docs[it->second].language == doc.language) {
            throw ValidationError("document '" + doc.id + "' and its translation source '" + *doc.translation_of +
                                  "' share language '" + doc.language + "'");
        }
    }
    return store;
}

}  // namespace

CorpusStore load_corpus(const std::string& path, int num_classes) {
    if (num_classes <= 0) {
        throw ValidationError("num_classes must be positive, got " + std::to_string(num_classes));
    }
    std::vector<Document> docs;
    std::map<std::string, std::size_t> unknown_counts;

    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        const std::string where = path + ":" + std::to_string(lineno);
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + ": malformed JSON record: " + e.what());
        }
        if (!rec.is_object()) {
            throw ValidationError(where + ": record is not a JSON object");
        }
        Document doc;
        try {
            doc.id = rec.at("id").get<std::string>();
            doc.language = rec.at("language").get<std::string>();
            const auto& toks = rec.at("tokens");
            if (!toks.is_array()) {
                throw ValidationError(where + ": tokens is not an array");
            }
            for (const auto& t : toks) {
                if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_string()) {
                    throw ValidationError(where + ": each token must be a [surface, pos] string pair");
                }
                Token tok;
                tok.surface = t[0].get<std::string>();
                bool known = false;
                tok.pos = ud_tag_from_string(t[1].get<std::string>(), &known);
                if (!known) {
                    ++unknown_counts[t[1].get<std::string>()];
                }
                doc.tokens.push_back(std::move(tok));
            }
            if (rec.contains("label") && !rec["label"].is_null()) {
                if (!rec["label"].is_number_integer()) {
                    throw ValidationError(where + ": label must be an integer");
                }
                doc.label = rec["label"].get<int>();
            }
            const std::string split_str = rec.at("split").get<std::string>();
            auto split = split_from_string(split_str);
            if (!split) {
                throw ValidationError(where + ": unknown split '" + split_str + "'");
            }
            doc.split = *split;
            if (rec.contains("translation_of") && !rec["translation_of"].is_null()) {
                doc.translation_of = rec["translation_of"].get<std::string>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + ": bad record: " + e.what());
        }
        validate_document(doc, num_classes, where);
        docs.push_back(std::move(doc));
    });

    CorpusStore store = finalize(std::move(docs), num_classes, std::move(unknown_counts));
    if (!store.unknown_pos_counts.empty()) {
        std::size_t total = 0;
        for (const auto& [tag, count] : store.unknown_pos_counts) total += count;
        std::cerr << "warning: " << total << " out-of-set POS tag(s) mapped to X while loading " << path << ":";
        for (const auto& [tag, count] : store.unknown_pos_counts) {
            std::cerr << " " << tag << "=" << count;
        }
        std::cerr << "\n";
    }
    return store;
}

CorpusStore make_corpus(std::vector<Document> docs, int num_classes) {
    if (num_classes <= 0) {
        throw ValidationError("num_classes must be positive, got " + std::to_string(num_classes));
    }
    for (const Document& doc : docs) {
        validate_document(doc, num_classes, "record '" + doc.id + "'");
    }
    return finalize(std::move(docs), num_classes, {});
}

std::string corpus_record_json(const Document& doc) {
    nlohmann::ordered_json rec;
    rec["id"] = doc.id;
    rec["language"] = doc.language;
    auto toks = nlohmann::ordered_json::array();
    for (const Token& t : doc.tokens) {
        toks.push_back({t.surface, ud_tag_name(t.pos)});
    }
    rec["tokens"] = std::move(toks);
    if (doc.label) {
        rec["label"] = *doc.label;
    }
    rec["split"] = split_name(doc.split);
    if (doc.translation_of) {
        rec["translation_of"] = *doc.translation_of;
    }
    return rec.dump();
}

void write_corpus(const std::string& path, const std::vector<Document>& docs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open file for writing: " + path);
    }
    for (const Document& doc : docs) {
        out << corpus_record_json(doc) << "\n";
    }
}

std::vector<std::pair<std::string, std::string>> link_translations(const CorpusStore& store) {
    std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
    for (std::size_t i = 0; i < store.docs.size(); ++i) {
        const Document& doc = store.docs[i];
        if (!doc.translation_of) continue;
        std::size_t j = store.index_by_id.at(*doc.translation_of);
        index_pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(index_pairs.begin(), index_pairs.end());
    index_pairs.erase(std::unique(index_pairs.begin(), index_pairs.end()), index_pairs.end());

    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(index_pairs.size());
    for (const auto& [a, b] : index_pairs) {
        pairs.emplace_back(store.docs[a].id, store.docs[b].id);
    }
    return pairs;
}

}  // namespace hetgcn
