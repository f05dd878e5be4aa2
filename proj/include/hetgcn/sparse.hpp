#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hetgcn/linalg.hpp"

namespace hetgcn {

// Reserved edge-type id for the self-loop slice of the normalized adjacency.
// Input entries must use other ids.
inline constexpr int kSelfEtype = 0;

struct Triplet {
    Index row = 0;
    Index col = 0;
    double weight = 0.0;
};

struct CooEntry {
    Index row = 0;
    Index col = 0;
    double weight = 0.0;  // finite, > 0
    int etype = 0;
};

// Canonical CSR: row_offsets nondecreasing, columns strictly increasing within
// each row, finite values. Immutable after assembly.
struct CsrMatrix {
    Index n_rows = 0;
    Index n_cols = 0;
    std::vector<Index> row_offsets;  // size n_rows + 1
    std::vector<Index> col_indices;  // size nnz
    std::vector<double> values;      // size nnz

    Index nnz() const { return static_cast<Index>(values.size()); }

    // Value at (row, col), 0 if not stored. Binary search within the row.
    double coeff(Index row, Index col) const;

    Matrix to_dense() const;
};

// Assembles canonical CSR from triplets; duplicate (row, col) entries are
// summed in input order. Out-of-range indices and non-finite weights throw.
CsrMatrix csr_from_coo(const std::vector<Triplet>& entries, Index n_rows, Index n_cols);

// Exact sparse-dense product A * H. Parallelized over output rows; each row is
// accumulated in column order by a single task, so the result is bitwise
// independent of thread count.
Matrix spmm(const CsrMatrix& a, const Eigen::Ref<const Matrix>& h);

// Realizes the per-type slices of the symmetric normalized adjacency:
//   1. union adjacency A = sum over all entries (types collapsed), plus a
//      self-loop of weight self_loop_weight on every node (etype kSelfEtype);
//   2. degrees D_i = row sums of the union;
//   3. every stored entry normalized to A_ij / sqrt(D_i * D_j);
//   4. sliced by etype; an (i, j) pair carrying several types contributes its
//      full normalized union weight to each of those types' slices.
// The union pattern and weights must be symmetric; per-type patterns must be
// symmetric too. Violations throw ValidationError.
std::map<int, CsrMatrix> sym_normalize_and_slice(const std::vector<CooEntry>& entries, Index n,
                                                 double self_loop_weight);

// Differential-testing dump: one line "<etype-name> <row> <col> <value>" per
// stored entry, sorted by (etype name, row, col). The caller supplies naming.
void dump_slices(std::ostream& out, const std::map<int, CsrMatrix>& slices,
                 const std::map<int, std::string>& etype_names);

}  // namespace hetgcn
