#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetgcn/corpus.hpp"
#include "hetgcn/embed.hpp"
#include "hetgcn/sparse.hpp"

namespace hetgcn {

// Which edge families and documents enter the graph.
struct GraphToggles {
    bool word_doc = true;
    bool pos_tags = true;
    bool translation_edges = true;
    bool similarity_edges = true;
    bool unlabeled_docs = true;
};

// POS typing without doc-word edges is meaningless; throws ValidationError.
void validate_toggles(const GraphToggles& toggles);

// The eight ablation variants; 8 is the full model.
GraphToggles apply_variant(int variant);

enum class EdgeKind : std::uint8_t { Self, WordDocUntyped, Similarity, Translation, WordDoc };

struct EdgeType {
    EdgeKind kind = EdgeKind::Self;
    UdTag pos = UdTag::X;  // meaningful only for WordDoc
};

// Canonical dense ids: SELF=0, WORDDOC_UNTYPED=1, SIMILARITY=2, TRANSLATION=3,
// WORDDOC(tag)=4+tag. The SELF id coincides with sparse::kSelfEtype.
int edge_type_id(const EdgeType& t);
EdgeType edge_type_from_id(int id);
std::string edge_type_name(int id);
std::optional<int> edge_type_id_from_name(const std::string& name);

struct NodeKey {
    enum class Kind : std::uint8_t { Doc, Word };
    Kind kind = Kind::Doc;
    std::string id;        // doc id, or lowercased word surface
    std::string language;  // word nodes only
};

// "doc:<id>" or "word:<language>:<surface>"; also the embedding-table key scheme.
std::string node_key_string(const NodeKey& key);

struct VocabWord {
    std::string language;
    std::string surface;  // lowercased
    Index df = 0;         // distinct in-graph documents containing the word
};

struct Vocab {
    std::vector<VocabWord> words;  // first-occurrence order
    std::map<std::pair<std::string, std::string>, Index> index;  // (language, surface) -> position

    std::optional<Index> find(const std::string& language, const std::string& lowered) const {
        auto it = index.find({language, lowered});
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

// True when the document participates in the graph under these toggles.
bool doc_included(const Document& doc, const GraphToggles& toggles);

// Store positions of the in-graph documents, in corpus order.
std::vector<std::size_t> included_docs(const CorpusStore& store, const GraphToggles& toggles);

// Word nodes with document frequency >= min_df over the in-graph documents,
// in first-occurrence order. Empty when word_doc is off.
Vocab build_vocab(const CorpusStore& store, const GraphToggles& toggles, Index min_df);

struct TfidfEntry {
    Index word = 0;  // vocab position
    Index doc = 0;   // position within included_docs
    double weight = 0.0;
};

// Untyped TF-IDF incidences: weight = tf(w,d) * ln(N / df(w)); zero-weight
// incidences (df == N) are dropped.
std::vector<TfidfEntry> tfidf(const CorpusStore& store, const GraphToggles& toggles, const Vocab& vocab);

struct GraphBuildOptions {
    GraphToggles toggles;
    Index k = 3;
    Index min_df = 2;
    double self_loop_weight = 1.0;
    std::uint64_t hash_seed = 0;       // stream for hashed feature fallback
    Index fallback_dim = 32;           // feature dimension when the table is empty
    bool forbid_fallback = false;      // error instead of hashing missing keys
};

struct HeteroGraph {
    std::vector<NodeKey> nodes;  // documents first (corpus order), then words
    Index doc_count = 0;
    Index word_count = 0;
    std::vector<std::size_t> doc_store_index;       // doc row -> position in store.docs
    std::map<int, CsrMatrix> adjacency;             // normalized slice per edge-type id
    GraphToggles toggles;

    Index n() const { return doc_count + word_count; }
};

// Feature vector for one node key: table entry if present, hashed fallback
// otherwise (or ValidationError under forbid_fallback).
Vector resolve_node_vector(const EmbeddingTable& table, const std::string& key, const GraphBuildOptions& opts);

// Raw pre-normalization edge list (both directions per edge), exposed for tests.
std::vector<CooEntry> assemble_edges(const CorpusStore& store, const EmbeddingTable& table,
                                     const GraphBuildOptions& opts,
                                     const std::vector<std::size_t>& doc_rows, const Vocab& vocab);

HeteroGraph build_graph(const CorpusStore& store, const EmbeddingTable& table, const GraphBuildOptions& opts);

// H0 in node order; row i is the resolved feature of nodes[i].
Matrix node_features(const HeteroGraph& graph, const EmbeddingTable& table, const GraphBuildOptions& opts);

// Node table, config echo, then the sparse dump (deterministic bytes).
void write_graph_dump(std::ostream& out, const HeteroGraph& graph, const GraphBuildOptions& opts);

// Stored-entry count per edge-type name.
std::map<std::string, Index> edge_type_counts(const HeteroGraph& graph);

}  // namespace hetgcn
