#include "hetgcn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "hetgcn/errors.hpp"
#include "hetgcn/util.hpp"

namespace hetgcn {

double CsrMatrix::coeff(Index row, Index col) const {
    const auto begin = col_indices.begin() + row_offsets[static_cast<std::size_t>(row)];
    const auto end = col_indices.begin() + row_offsets[static_cast<std::size_t>(row) + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) {
        return 0.0;
    }
    return values[static_cast<std::size_t>(it - col_indices.begin())];
}

Matrix CsrMatrix::to_dense() const {
    Matrix out = Matrix::Zero(n_rows, n_cols);
    for (Index i = 0; i < n_rows; ++i) {
        for (Index k = row_offsets[static_cast<std::size_t>(i)]; k < row_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
            out(i, col_indices[static_cast<std::size_t>(k)]) = values[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

CsrMatrix csr_from_coo(const std::vector<Triplet>& entries, Index n_rows, Index n_cols) {
    for (const Triplet& e : entries) {
        if (e.row < 0 || e.row >= n_rows || e.col < 0 || e.col >= n_cols) {
            throw ValidationError("csr_from_coo: index (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                                  ") out of range for " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
        }
        if (!std::isfinite(e.weight)) {
            throw NumericError("csr_from_coo: non-finite weight at (" + std::to_string(e.row) + ", " +
                               std::to_string(e.col) + ")");
        }
    }
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Triplet& ea = entries[a];
        const Triplet& eb = entries[b];
        return ea.row != eb.row ? ea.row < eb.row : ea.col < eb.col;
    });

    CsrMatrix m;
    m.n_rows = n_rows;
    m.n_cols = n_cols;
    m.row_offsets.assign(static_cast<std::size_t>(n_rows) + 1, 0);
    m.col_indices.reserve(entries.size());
    m.values.reserve(entries.size());

    Index cur_row = -1;
    Index cur_col = -1;
    for (std::size_t idx : order) {
        const Triplet& e = entries[idx];
        if (e.row == cur_row && e.col == cur_col) {
            m.values.back() += e.weight;  // duplicates sum in input order
            continue;
        }
        while (cur_row < e.row) {
            ++cur_row;
            m.row_offsets[static_cast<std::size_t>(cur_row)] = static_cast<Index>(m.values.size());
        }
        cur_col = e.col;
        m.col_indices.push_back(e.col);
        m.values.push_back(e.weight);
    }
    while (cur_row < n_rows) {
        ++cur_row;
        m.row_offsets[static_cast<std::size_t>(cur_row)] = static_cast<Index>(m.values.size());
    }
    return m;
}

Matrix spmm(const CsrMatrix& a, const Eigen::Ref<const Matrix>& h) {
    if (a.n_cols != h.rows()) {
        throw ValidationError("spmm: dimension mismatch: A is " + std::to_string(a.n_rows) + "x" +
                              std::to_string(a.n_cols) + ", H has " + std::to_string(h.rows()) + " rows");
    }
    Matrix out = Matrix::Zero(a.n_rows, h.cols());
#pragma omp parallel for schedule(dynamic, 64)
    for (Index i = 0; i < a.n_rows; ++i) {
        auto row = out.row(i);
        for (Index k = a.row_offsets[static_cast<std::size_t>(i)];
             k < a.row_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
            row += a.values[static_cast<std::size_t>(k)] * h.row(a.col_indices[static_cast<std::size_t>(k)]);
        }
    }
    return out;
}

std::map<int, CsrMatrix> sym_normalize_and_slice(const std::vector<CooEntry>& entries, Index n,
                                                 double self_loop_weight) {
    if (n <= 0) {
        throw ValidationError("sym_normalize_and_slice: node count must be positive");
    }
    if (!(self_loop_weight > 0.0) || !std::isfinite(self_loop_weight)) {
        throw ValidationError("sym_normalize_and_slice: self_loop_weight must be finite and > 0");
    }
    for (const CooEntry& e : entries) {
        if (e.etype == kSelfEtype) {
            throw ValidationError("sym_normalize_and_slice: etype " + std::to_string(kSelfEtype) +
                                  " is reserved for self-loops");
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw NumericError("sym_normalize_and_slice: weight at (" + std::to_string(e.row) + ", " +
                               std::to_string(e.col) + ") must be finite and > 0");
        }
    }

    // Union adjacency with self-loops; duplicate (row, col) pairs sum across types.
    std::vector<Triplet> union_triplets;
    union_triplets.reserve(entries.size() + static_cast<std::size_t>(n));
    for (const CooEntry& e : entries) {
        union_triplets.push_back({e.row, e.col, e.weight});
    }
    for (Index i = 0; i < n; ++i) {
        union_triplets.push_back({i, i, self_loop_weight});
    }
    const CsrMatrix unioned = csr_from_coo(union_triplets, n, n);

    for (Index i = 0; i < n; ++i) {
        for (Index k = unioned.row_offsets[static_cast<std::size_t>(i)];
             k < unioned.row_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
            const Index j = unioned.col_indices[static_cast<std::size_t>(k)];
            const double w = unioned.values[static_cast<std::size_t>(k)];
            if (unioned.coeff(j, i) != w) {
                throw ValidationError("sym_normalize_and_slice: non-symmetric union pattern at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }

    std::vector<double> degree(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        double d = 0.0;
        for (Index k = unioned.row_offsets[static_cast<std::size_t>(i)];
             k < unioned.row_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
            d += unioned.values[static_cast<std::size_t>(k)];
        }
        degree[static_cast<std::size_t>(i)] = d;  // >= self_loop_weight > 0
    }
    // w / sqrt(D_i * D_j): the product commutes exactly, so the normalized
    // matrix is bitwise symmetric.
    const auto normalized = [&](Index i, Index j) {
        return unioned.coeff(i, j) /
               std::sqrt(degree[static_cast<std::size_t>(i)] * degree[static_cast<std::size_t>(j)]);
    };

    // Distinct (row, col) pairs per type; a pair repeated under one type
    // still yields a single slice entry.
    std::map<int, std::set<std::pair<Index, Index>>> pairs_by_type;
    for (const CooEntry& e : entries) {
        pairs_by_type[e.etype].insert({e.row, e.col});
    }
    for (const auto& [etype, pairs] : pairs_by_type) {
        for (const auto& [r, c] : pairs) {
            if (!pairs.count({c, r})) {
                throw ValidationError("sym_normalize_and_slice: etype " + std::to_string(etype) +
                                      " pattern is not symmetric at (" + std::to_string(r) + ", " +
                                      std::to_string(c) + ")");
            }
        }
    }

    std::map<int, CsrMatrix> slices;
    for (const auto& [etype, pairs] : pairs_by_type) {
        std::vector<Triplet> triplets;
        triplets.reserve(pairs.size());
        for (const auto& [r, c] : pairs) {
            triplets.push_back({r, c, normalized(r, c)});
        }
        slices[etype] = csr_from_coo(triplets, n, n);
    }
    {
        std::vector<Triplet> self_triplets;
        self_triplets.reserve(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            self_triplets.push_back({i, i, normalized(i, i)});
        }
        slices[kSelfEtype] = csr_from_coo(self_triplets, n, n);
    }
    return slices;
}

void dump_slices(std::ostream& out, const std::map<int, CsrMatrix>& slices,
                 const std::map<int, std::string>& etype_names) {
    std::vector<std::pair<std::string, const CsrMatrix*>> named;
    named.reserve(slices.size());
    for (const auto& [etype, csr] : slices) {
        named.emplace_back(etype_names.at(etype), &csr);
    }
    std::sort(named.begin(), named.end());
    for (const auto& [name, csr] : named) {
        for (Index i = 0; i < csr->n_rows; ++i) {
            for (Index k = csr->row_offsets[static_cast<std::size_t>(i)];
                 k < csr->row_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
                out << name << " " << i << " " << csr->col_indices[static_cast<std::size_t>(k)] << " "
                    << format_double(csr->values[static_cast<std::size_t>(k)]) << "\n";
            }
        }
    }
}

}  // namespace hetgcn
