#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"
#include "hetgcn/sparse.hpp"
#include "oracles.hpp"

using namespace hetgcn;

namespace {

// Random symmetric multigraph entries: every edge inserted in both directions
// with equal weight, types drawn from the given list.
std::vector<CooEntry> random_symmetric_entries(rng::SplitMix& gen, Index n, double density,
                                               const std::vector<int>& etypes) {
    std::vector<CooEntry> entries;
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (gen.next_double() >= density) continue;
            const double w = gen.uniform(0.1, 2.0);
            const int etype = etypes[gen.bounded(etypes.size())];
            entries.push_back({i, j, w, etype});
            entries.push_back({j, i, w, etype});
        }
    }
    return entries;
}

}  // namespace

TEST_SUITE("sparse") {

TEST_CASE("duplicate entries are summed") {
    const CsrMatrix m = csr_from_coo({{0, 0, 1.0}, {0, 0, 2.0}}, 1, 1);
    CHECK(m.nnz() == 1);
    CHECK(m.values[0] == 3.0);
}

TEST_CASE("empty entry list yields all-zero offsets") {
    const CsrMatrix m = csr_from_coo({}, 3, 3);
    CHECK(m.nnz() == 0);
    CHECK(m.row_offsets == std::vector<Index>{0, 0, 0, 0});
}

TEST_CASE("symmetric two-entry pattern") {
    const CsrMatrix m = csr_from_coo({{1, 0, 1.0}, {0, 1, 1.0}}, 2, 2);
    CHECK(m.nnz() == 2);
    CHECK(m.coeff(0, 1) == 1.0);
    CHECK(m.coeff(1, 0) == 1.0);
    CHECK(m.coeff(0, 0) == 0.0);
}

TEST_CASE("out-of-range index and non-finite weight are rejected") {
    CHECK_THROWS_AS(csr_from_coo({{0, 5, 1.0}}, 2, 2), ValidationError);
    CHECK_THROWS_AS(csr_from_coo({{0, 0, std::nan("")}}, 1, 1), NumericError);
}

TEST_CASE("csr is canonical: strictly increasing columns per row") {
    rng::SplitMix gen(3);
    std::vector<Triplet> entries;
    for (int i = 0; i < 60; ++i) {
        entries.push_back({static_cast<Index>(gen.bounded(7)), static_cast<Index>(gen.bounded(9)),
                           gen.uniform(0.1, 1.0)});
    }
    const CsrMatrix m = csr_from_coo(entries, 7, 9);
    CHECK(m.row_offsets.front() == 0);
    CHECK(m.row_offsets.back() == m.nnz());
    for (Index i = 0; i < m.n_rows; ++i) {
        for (Index k = m.row_offsets[i] + 1; k < m.row_offsets[i + 1]; ++k) {
            CHECK(m.col_indices[k - 1] < m.col_indices[k]);
        }
    }
}

TEST_CASE("spmm identity passes H through") {
    std::vector<Triplet> eye;
    for (Index i = 0; i < 3; ++i) eye.push_back({i, i, 1.0});
    const CsrMatrix m = csr_from_coo(eye, 3, 3);
    Matrix h(3, 2);
    h << 1, 2, 3, 4, 5, 6;
    CHECK(spmm(m, h) == h);
}

TEST_CASE("spmm of the zero matrix annihilates") {
    const CsrMatrix m = csr_from_coo({}, 4, 3);
    Matrix h = Matrix::Ones(3, 5);
    CHECK(spmm(m, h) == Matrix::Zero(4, 5));
}

TEST_CASE("spmm matches the dense triple-loop oracle") {
    rng::SplitMix gen(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Triplet> entries;
        for (Index i = 0; i < 5; ++i) {
            for (Index j = 0; j < 5; ++j) {
                if (gen.next_double() < 0.4) {
                    entries.push_back({i, j, gen.uniform(-1.0, 1.0)});
                }
            }
        }
        const CsrMatrix a = csr_from_coo(entries, 5, 5);
        Matrix h(5, 3);
        for (Index i = 0; i < 5; ++i) {
            for (Index j = 0; j < 3; ++j) h(i, j) = gen.uniform(-1.0, 1.0);
        }
        const Matrix expected = oracles::dense_matmul(a.to_dense(), h);
        const Matrix got = spmm(a, h);
        for (Index i = 0; i < 5; ++i) {
            for (Index j = 0; j < 3; ++j) {
                CHECK(got(i, j) == doctest::Approx(expected(i, j)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("spmm distributes over addition") {
    rng::SplitMix gen(23);
    std::vector<Triplet> entries;
    for (int k = 0; k < 12; ++k) {
        entries.push_back({static_cast<Index>(gen.bounded(6)), static_cast<Index>(gen.bounded(6)),
                           gen.uniform(-1.0, 1.0)});
    }
    const CsrMatrix a = csr_from_coo(entries, 6, 6);
    Matrix h1(6, 4), h2(6, 4);
    for (Index i = 0; i < 6; ++i) {
        for (Index j = 0; j < 4; ++j) {
            h1(i, j) = gen.uniform(-1.0, 1.0);
            h2(i, j) = gen.uniform(-1.0, 1.0);
        }
    }
    const Matrix lhs = spmm(a, h1 + h2);
    const Matrix rhs = spmm(a, h1) + spmm(a, h2);
    CHECK(((lhs - rhs).cwiseAbs().maxCoeff()) < 1e-10);
}

TEST_CASE("dimension mismatch in spmm throws") {
    const CsrMatrix a = csr_from_coo({}, 2, 3);
    CHECK_THROWS_AS(spmm(a, Matrix::Zero(2, 2)), ValidationError);
}

TEST_CASE("two nodes, one typed edge: the worked 0.5 example") {
    const int etype = 7;
    const auto slices = sym_normalize_and_slice({{0, 1, 1.0, etype}, {1, 0, 1.0, etype}}, 2, 1.0);
    REQUIRE(slices.size() == 2);
    CHECK(slices.at(etype).coeff(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(slices.at(etype).coeff(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(slices.at(etype).coeff(0, 0) == 0.0);
    CHECK(slices.at(kSelfEtype).coeff(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(slices.at(kSelfEtype).coeff(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("single node, no edges: SELF slice is exactly 1") {
    const auto slices = sym_normalize_and_slice({}, 1, 1.0);
    REQUIRE(slices.size() == 1);
    CHECK(slices.at(kSelfEtype).coeff(0, 0) == 1.0);
}

TEST_CASE("reserved self etype in input is rejected") {
    CHECK_THROWS_AS(sym_normalize_and_slice({{0, 1, 1.0, kSelfEtype}, {1, 0, 1.0, kSelfEtype}}, 2, 1.0),
                    ValidationError);
}

TEST_CASE("non-symmetric union pattern is rejected") {
    CHECK_THROWS_AS(sym_normalize_and_slice({{0, 1, 1.0, 5}}, 2, 1.0), ValidationError);
}

TEST_CASE("slices are exactly symmetric with entries in (0,1]") {
    rng::SplitMix gen(29);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + static_cast<Index>(gen.bounded(49));
        const auto entries = random_symmetric_entries(gen, n, 0.3, {4, 5, 6});
        const auto slices = sym_normalize_and_slice(entries, n, 1.0);
        for (const auto& [etype, csr] : slices) {
            for (Index i = 0; i < n; ++i) {
                for (Index k = csr.row_offsets[i]; k < csr.row_offsets[i + 1]; ++k) {
                    const Index j = csr.col_indices[k];
                    const double v = csr.values[k];
                    CHECK(v > 0.0);
                    CHECK(v <= 1.0);
                    CHECK(csr.coeff(j, i) == v);  // exact symmetry
                }
            }
        }
    }
}

TEST_CASE("single-type slices sum to the dense normalization oracle") {
    rng::SplitMix gen(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + static_cast<Index>(gen.bounded(20));
        // One etype per (i,j) pair, so no multi-type overlap.
        const auto entries = random_symmetric_entries(gen, n, 0.4, {4});
        const auto slices = sym_normalize_and_slice(entries, n, 1.0);
        Matrix sum = Matrix::Zero(n, n);
        for (const auto& [etype, csr] : slices) {
            sum += csr.to_dense();
        }
        const Matrix expected = oracles::dense_sym_normalize(entries, n, 1.0);
        CHECK((sum - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("largest eigenvalue of the summed normalized matrix is at most 1") {
    rng::SplitMix gen(37);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 3 + static_cast<Index>(gen.bounded(48));
        const auto entries = random_symmetric_entries(gen, n, 0.25, {4, 5});
        const auto slices = sym_normalize_and_slice(entries, n, 1.0);
        Matrix sum = Matrix::Zero(n, n);
        for (const auto& [etype, csr] : slices) sum += csr.to_dense();
        CHECK(oracles::power_iteration_lambda_max(sum) <= 1.0 + 1e-6);
    }
}

TEST_CASE("multi-type pair: each slice receives the full normalized union weight") {
    // Same (0,1) pair under types 4 and 5 with weights 1 and 2: union weight 3.
    const std::vector<CooEntry> entries = {
        {0, 1, 1.0, 4}, {1, 0, 1.0, 4}, {0, 1, 2.0, 5}, {1, 0, 2.0, 5},
    };
    const auto slices = sym_normalize_and_slice(entries, 2, 1.0);
    // Degrees are 4 on both nodes; normalized union value is 3/4.
    CHECK(slices.at(4).coeff(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(slices.at(5).coeff(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(slices.at(kSelfEtype).coeff(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("dump is deterministic and ordered") {
    const auto slices = sym_normalize_and_slice({{0, 1, 1.0, 4}, {1, 0, 1.0, 4}}, 2, 1.0);
    const std::map<int, std::string> names = {{kSelfEtype, "SELF"}, {4, "T"}};
    std::ostringstream a, b;
    dump_slices(a, slices, names);
    dump_slices(b, slices, names);
    CHECK(a.str() == b.str());
    CHECK(a.str() == "SELF 0 0 0.5\nSELF 1 1 0.5\nT 0 1 0.5\nT 1 0 0.5\n");
}

}  // TEST_SUITE
