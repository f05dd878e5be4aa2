#include "hetgcn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"
#include "hetgcn/util.hpp"

namespace hetgcn {

void validate_toggles(const GraphToggles& toggles) {
    if (toggles.pos_tags && !toggles.word_doc) {
        throw ValidationError("invalid toggles: pos_tags requires word_doc");
    }
}

GraphToggles apply_variant(int variant) {
    // (word_doc, pos_tags, translation_edges, similarity_edges, unlabeled_docs)
    static constexpr bool kTable[8][5] = {
        {true, false, false, false, false},  // 1
        {false, false, true, true, true},    // 2
        {true, false, false, true, true},    // 3
        {true, false, true, true, true},     // 4
        {true, true, false, true, true},     // 5
        {true, true, true, false, true},     // 6
        {true, true, true, true, false},     // 7
        {true, true, true, true, true},      // 8 (full model)
    };
    if (variant < 1 || variant > 8) {
        throw ValidationError("variant must be in 1..8, got " + std::to_string(variant));
    }
    const bool* row = kTable[variant - 1];
    return GraphToggles{row[0], row[1], row[2], row[3], row[4]};
}

int edge_type_id(const EdgeType& t) {
    switch (t.kind) {
        case EdgeKind::Self: return 0;
        case EdgeKind::WordDocUntyped: return 1;
        case EdgeKind::Similarity: return 2;
        case EdgeKind::Translation: return 3;
        case EdgeKind::WordDoc: return 4 + static_cast<int>(t.pos);
    }
    throw ValidationError("bad edge kind");
}

EdgeType edge_type_from_id(int id) {
    switch (id) {
        case 0: return {EdgeKind::Self, UdTag::X};
        case 1: return {EdgeKind::WordDocUntyped, UdTag::X};
        case 2: return {EdgeKind::Similarity, UdTag::X};
        case 3: return {EdgeKind::Translation, UdTag::X};
        default:
            if (id >= 4 && id < 4 + kNumUdTags) {
                return {EdgeKind::WordDoc, static_cast<UdTag>(id - 4)};
            }
            throw ValidationError("bad edge type id " + std::to_string(id));
    }
}

std::string edge_type_name(int id) {
    const EdgeType t = edge_type_from_id(id);
    switch (t.kind) {
        case EdgeKind::Self: return "SELF";
        case EdgeKind::WordDocUntyped: return "WORDDOC_UNTYPED";
        case EdgeKind::Similarity: return "SIMILARITY";
        case EdgeKind::Translation: return "TRANSLATION";
        case EdgeKind::WordDoc: return "WORDDOC:" + ud_tag_name(t.pos);
    }
    throw ValidationError("bad edge kind");
}

std::optional<int> edge_type_id_from_name(const std::string& name) {
    if (name == "SELF") return 0;
    if (name == "WORDDOC_UNTYPED") return 1;
    if (name == "SIMILARITY") return 2;
    if (name == "TRANSLATION") return 3;
    if (name.rfind("WORDDOC:", 0) == 0) {
        const std::string tag = name.substr(8);
        bool known = false;
        UdTag pos = ud_tag_from_string(tag, &known);
        if (known) return 4 + static_cast<int>(pos);
    }
    return std::nullopt;
}

std::string node_key_string(const NodeKey& key) {
    if (key.kind == NodeKey::Kind::Doc) {
        return "doc:" + key.id;
    }
    return "word:" + key.language + ":" + key.id;
}

bool doc_included(const Document& doc, const GraphToggles& toggles) {
    if (doc.split == Split::Unlabeled && !toggles.unlabeled_docs) return false;
    if (doc.translation_of && !toggles.translation_edges) return false;
    return true;
}

std::vector<std::size_t> included_docs(const CorpusStore& store, const GraphToggles& toggles) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < store.docs.size(); ++i) {
        if (doc_included(store.docs[i], toggles)) {
            rows.push_back(i);
        }
    }
    return rows;
}

Vocab build_vocab(const CorpusStore& store, const GraphToggles& toggles, Index min_df) {
    if (min_df < 1) {
        throw ValidationError("min_df must be >= 1, got " + std::to_string(min_df));
    }
    Vocab vocab;
    if (!toggles.word_doc) {
        return vocab;
    }
    std::map<std::pair<std::string, std::string>, Index> df;
    std::vector<std::pair<std::string, std::string>> first_seen;
    for (std::size_t row : included_docs(store, toggles)) {
        const Document& doc = store.docs[row];
        // Walk tokens in order so first_seen reflects first occurrence.
        std::set<std::pair<std::string, std::string>> counted;
        for (const Token& tok : doc.tokens) {
            std::pair<std::string, std::string> key{doc.language, ascii_lower(tok.surface)};
            if (!counted.insert(key).second) continue;
            auto it = df.find(key);
            if (it == df.end()) {
                df.emplace(key, 1);
                first_seen.push_back(key);
            } else {
                ++it->second;
            }
        }
    }
    for (const auto& key : first_seen) {
        const Index count = df.at(key);
        if (count < min_df) continue;
        vocab.index.emplace(key, static_cast<Index>(vocab.words.size()));
        vocab.words.push_back({key.first, key.second, count});
    }
    return vocab;
}

std::vector<TfidfEntry> tfidf(const CorpusStore& store, const GraphToggles& toggles, const Vocab& vocab) {
    std::vector<TfidfEntry> entries;
    const std::vector<std::size_t> rows = included_docs(store, toggles);
    const double n_docs = static_cast<double>(rows.size());
    for (std::size_t dr = 0; dr < rows.size(); ++dr) {
        const Document& doc = store.docs[rows[dr]];
        std::map<Index, double> tf;
        for (const Token& tok : doc.tokens) {
            if (auto w = vocab.find(doc.language, ascii_lower(tok.surface))) {
                tf[*w] += 1.0;
            }
        }
        for (const auto& [w, count] : tf) {
            const double idf = std::log(n_docs / static_cast<double>(vocab.words[static_cast<std::size_t>(w)].df));
            const double weight = count * idf;
            if (weight > 0.0) {
                entries.push_back({w, static_cast<Index>(dr), weight});
            }
        }
    }
    return entries;
}

Vector resolve_node_vector(const EmbeddingTable& table, const std::string& key, const GraphBuildOptions& opts) {
    if (const Vector* v = table.find(key)) {
        return *v;
    }
    if (opts.forbid_fallback) {
        throw ValidationError("no embedding for key '" + key + "' and hashed fallback is forbidden");
    }
    const Index dim = table.empty() ? opts.fallback_dim : table.dim;
    return hashed_features(key, dim, rng::derive_stream(opts.hash_seed, "hash"));
}

std::vector<CooEntry> assemble_edges(const CorpusStore& store, const EmbeddingTable& table,
                                     const GraphBuildOptions& opts,
                                     const std::vector<std::size_t>& doc_rows, const Vocab& vocab) {
    const GraphToggles& toggles = opts.toggles;
    const Index doc_count = static_cast<Index>(doc_rows.size());
    std::vector<CooEntry> edges;

    if (toggles.word_doc) {
        const double n_docs = static_cast<double>(doc_count);
        for (Index dr = 0; dr < doc_count; ++dr) {
            const Document& doc = store.docs[doc_rows[static_cast<std::size_t>(dr)]];
            // tf per (word, tag); the untyped path collapses tags by summing.
            std::map<std::pair<Index, int>, double> tf;
            for (const Token& tok : doc.tokens) {
                if (auto w = vocab.find(doc.language, ascii_lower(tok.surface))) {
                    const int tag = toggles.pos_tags ? static_cast<int>(tok.pos) : -1;
                    tf[{*w, tag}] += 1.0;
                }
            }
            for (const auto& [key, count] : tf) {
                const auto& [w, tag] = key;
                const double idf = std::log(n_docs / static_cast<double>(vocab.words[static_cast<std::size_t>(w)].df));
                const double weight = count * idf;
                if (weight <= 0.0) continue;
                const int etype = toggles.pos_tags
                                      ? edge_type_id({EdgeKind::WordDoc, static_cast<UdTag>(tag)})
                                      : edge_type_id({EdgeKind::WordDocUntyped, UdTag::X});
                const Index word_node = doc_count + w;
                edges.push_back({dr, word_node, weight, etype});
                edges.push_back({word_node, dr, weight, etype});
            }
        }
    }

    if (toggles.similarity_edges && doc_count > 1) {
        std::vector<Vector> doc_vectors;
        doc_vectors.reserve(static_cast<std::size_t>(doc_count));
        for (Index dr = 0; dr < doc_count; ++dr) {
            const Document& doc = store.docs[doc_rows[static_cast<std::size_t>(dr)]];
            doc_vectors.push_back(resolve_node_vector(table, "doc:" + doc.id, opts));
        }
        const int etype = edge_type_id({EdgeKind::Similarity, UdTag::X});
        for (const auto& [i, j] : knn_similar_docs(doc_vectors, opts.k)) {
            edges.push_back({i, j, 1.0, etype});
            edges.push_back({j, i, 1.0, etype});
        }
    }

    if (toggles.translation_edges) {
        std::map<std::string, Index> doc_row_by_id;
        for (Index dr = 0; dr < doc_count; ++dr) {
            doc_row_by_id.emplace(store.docs[doc_rows[static_cast<std::size_t>(dr)]].id, dr);
        }
        const int etype = edge_type_id({EdgeKind::Translation, UdTag::X});
        for (const auto& [a, b] : link_translations(store)) {
            auto ia = doc_row_by_id.find(a);
            auto ib = doc_row_by_id.find(b);
            if (ia == doc_row_by_id.end() || ib == doc_row_by_id.end()) continue;
            edges.push_back({ia->second, ib->second, 1.0, etype});
            edges.push_back({ib->second, ia->second, 1.0, etype});
        }
    }
    return edges;
}

HeteroGraph build_graph(const CorpusStore& store, const EmbeddingTable& table, const GraphBuildOptions& opts) {
    validate_toggles(opts.toggles);
    if (opts.k < 1) {
        throw ValidationError("K must be >= 1, got " + std::to_string(opts.k));
    }
    const std::vector<std::size_t> doc_rows = included_docs(store, opts.toggles);
    if (doc_rows.empty()) {
        throw ValidationError("no documents remain in the graph under the current toggles");
    }
    const Vocab vocab = build_vocab(store, opts.toggles, opts.min_df);

    HeteroGraph graph;
    graph.toggles = opts.toggles;
    graph.doc_count = static_cast<Index>(doc_rows.size());
    graph.word_count = static_cast<Index>(vocab.words.size());
    graph.doc_store_index = doc_rows;
    graph.nodes.reserve(static_cast<std::size_t>(graph.n()));
    for (std::size_t row : doc_rows) {
        graph.nodes.push_back({NodeKey::Kind::Doc, store.docs[row].id, {}});
    }
    for (const VocabWord& w : vocab.words) {
        graph.nodes.push_back({NodeKey::Kind::Word, w.surface, w.language});
    }

    const std::vector<CooEntry> edges = assemble_edges(store, table, opts, doc_rows, vocab);
    graph.adjacency = sym_normalize_and_slice(edges, graph.n(), opts.self_loop_weight);
    return graph;
}

Matrix node_features(const HeteroGraph& graph, const EmbeddingTable& table, const GraphBuildOptions& opts) {
    const Index dim = table.empty() ? opts.fallback_dim : table.dim;
    Matrix h0(graph.n(), dim);
    for (Index i = 0; i < graph.n(); ++i) {
        h0.row(i) = resolve_node_vector(table, node_key_string(graph.nodes[static_cast<std::size_t>(i)]), opts)
                        .transpose();
    }
    return h0;
}

void write_graph_dump(std::ostream& out, const HeteroGraph& graph, const GraphBuildOptions& opts) {
    const GraphToggles& t = graph.toggles;
    out << "config"
        << " word_doc=" << (t.word_doc ? "true" : "false")
        << " pos_tags=" << (t.pos_tags ? "true" : "false")
        << " translation_edges=" << (t.translation_edges ? "true" : "false")
        << " similarity_edges=" << (t.similarity_edges ? "true" : "false")
        << " unlabeled_docs=" << (t.unlabeled_docs ? "true" : "false")
        << " K=" << opts.k
        << " min_df=" << opts.min_df
        << " self_loop_weight=" << format_double(opts.self_loop_weight) << "\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const NodeKey& key = graph.nodes[i];
        out << "node " << i << " " << (key.kind == NodeKey::Kind::Doc ? "doc" : "word") << " "
            << node_key_string(key) << "\n";
    }
    out << "n " << graph.n() << "\n";
    std::map<int, std::string> names;
    for (const auto& [etype, csr] : graph.adjacency) {
        names[etype] = edge_type_name(etype);
    }
    dump_slices(out, graph.adjacency, names);
}

std::map<std::string, Index> edge_type_counts(const HeteroGraph& graph) {
    std::map<std::string, Index> counts;
    for (const auto& [etype, csr] : graph.adjacency) {
        counts[edge_type_name(etype)] = csr.nnz();
    }
    return counts;
}

}  // namespace hetgcn
