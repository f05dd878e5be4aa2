#include "hetgcn/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"
#include "hetgcn/util.hpp"

namespace hetgcn {

EmbeddingTable load_embeddings(const std::string& path) {
    EmbeddingTable table;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        const std::string where = path + ":" + std::to_string(lineno);
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + ": malformed JSON record: " + e.what());
        }
        std::string key;
        std::vector<double> values;
        try {
            key = rec.at("key").get<std::string>();
            values = rec.at("vector").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + ": bad record: " + e.what());
        }
        if (values.empty()) {
            throw ValidationError(where + ": empty vector for key '" + key + "'");
        }
        for (double v : values) {
            if (!std::isfinite(v)) {
                throw ValidationError(where + ": non-finite component for key '" + key + "'");
            }
        }
        if (table.entries.empty()) {
            table.dim = static_cast<Eigen::Index>(values.size());
        } else if (static_cast<Eigen::Index>(values.size()) != table.dim) {
            throw ValidationError(where + ": dimension mismatch for key '" + key + "': expected " +
                                  std::to_string(table.dim) + ", got " + std::to_string(values.size()));
        }
        Vector vec = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
        auto [it, inserted] = table.entries.emplace(std::move(key), std::move(vec));
        if (!inserted) {
            throw ValidationError(where + ": duplicate key '" + it->first + "'");
        }
    });
    return table;
}

void write_embeddings(const std::string& path, const std::vector<std::pair<std::string, Vector>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open file for writing: " + path);
    }
    for (const auto& [key, vec] : rows) {
        nlohmann::ordered_json rec;
        rec["key"] = key;
        auto arr = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < vec.size(); ++i) {
            arr.push_back(vec[i]);
        }
        rec["vector"] = std::move(arr);
        out << rec.dump() << "\n";
    }
}

Vector hashed_features(const std::string& key, Eigen::Index dim, std::uint64_t seed) {
    if (dim < 1) {
        throw ValidationError("hashed_features: dim must be >= 1");
    }
    const std::uint64_t base = rng::mix64(rng::fnv1a64(key) ^ rng::mix64(seed));
    const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    Vector out(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const std::uint64_t bits = rng::mix64(base + static_cast<std::uint64_t>(i) * rng::kGolden);
        const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
        out[i] = bound * (2.0 * u - 1.0);
    }
    return out;
}

double cosine(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) {
        throw ValidationError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                              std::to_string(v.size()) + ")");
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) {
        return 0.0;
    }
    return u.dot(v) / (nu * nv);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> knn_similar_docs(
    const std::vector<Vector>& doc_vectors, Eigen::Index k) {
    if (k < 1) {
        throw ValidationError("knn_similar_docs: K must be >= 1");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(doc_vectors.size());
    std::vector<std::vector<Eigen::Index>> picks(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i) {
        // (negated similarity, position): sorting ascending gives highest
        // cosine first with earliest-position tie-break.
        std::vector<std::pair<double, Eigen::Index>> cand;
        cand.reserve(static_cast<std::size_t>(n - 1));
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            cand.emplace_back(-cosine(doc_vectors[static_cast<std::size_t>(i)],
                                      doc_vectors[static_cast<std::size_t>(j)]),
                              j);
        }
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), cand.size());
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end());
        auto& out = picks[static_cast<std::size_t>(i)];
        out.reserve(take);
        for (std::size_t t = 0; t < take; ++t) {
            out.push_back(cand[t].second);
        }
    }

    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j : picks[static_cast<std::size_t>(i)]) {
            pairs.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

std::vector<std::pair<std::string, std::string>> knn_similar_docs(
    const EmbeddingTable& table, const std::vector<std::string>& doc_keys, Eigen::Index k) {
    std::vector<Vector> vectors;
    vectors.reserve(doc_keys.size());
    for (const std::string& key : doc_keys) {
        const Vector* v = table.find(key);
        if (!v) {
            throw ValidationError("knn_similar_docs: missing key '" + key + "'");
        }
        vectors.push_back(*v);
    }
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [i, j] : knn_similar_docs(vectors, k)) {
        out.emplace_back(doc_keys[static_cast<std::size_t>(i)], doc_keys[static_cast<std::size_t>(j)]);
    }
    return out;
}

}  // namespace hetgcn
