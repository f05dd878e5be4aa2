#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hetgcn/linalg.hpp"

namespace hetgcn {

// Fixed node features keyed by node-key strings ("doc:<id>", "word:<lang>:<surface>").
// Immutable after load; every vector has the same dimension and finite entries.
struct EmbeddingTable {
    Eigen::Index dim = 0;
    std::unordered_map<std::string, Vector> entries;

    bool empty() const { return entries.empty(); }
    const Vector* find(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
};

// JSON Lines, one {"key": ..., "vector": [...]} per line. Dimension mismatch,
// non-finite components, and duplicate keys are errors naming the line or key.
EmbeddingTable load_embeddings(const std::string& path);

void write_embeddings(const std::string& path, const std::vector<std::pair<std::string, Vector>>& rows);

// Deterministic stand-in feature for keys absent from the table: a
// counter-based generator keyed by hash(key, seed), components uniform in
// [-1/sqrt(dim), +1/sqrt(dim)].
Vector hashed_features(const std::string& key, Eigen::Index dim, std::uint64_t seed);

// dot(u,v)/(|u||v|); returns 0 when either norm is zero. Dimension mismatch throws.
double cosine(const Vector& u, const Vector& v);

// For each document, its K nearest neighbors by cosine similarity (ties broken
// by ascending position in doc_keys), symmetrized by union into unordered
// pairs. Pairs are reported as (i, j) positions into doc_keys with i < j,
// sorted. Fewer than K candidates means all of them are used.
std::vector<std::pair<Eigen::Index, Eigen::Index>> knn_similar_docs(
    const std::vector<Vector>& doc_vectors, Eigen::Index k);

// Convenience overload resolving doc_keys through the table (missing key throws).
std::vector<std::pair<std::string, std::string>> knn_similar_docs(
    const EmbeddingTable& table, const std::vector<std::string>& doc_keys, Eigen::Index k);

}  // namespace hetgcn
