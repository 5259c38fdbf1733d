#pragma once

// Test-only reference implementations, kept independent of the sparse
// elimination path they are used to cross-check.

#include <random>
#include <vector>

#include "cychom/sparse.hpp"

namespace oracles {

using cychom::Rational;
using cychom::SparseMatrix;

using Dense = std::vector<std::vector<Rational>>;

inline Dense to_dense(const SparseMatrix& m) {
    Dense d(m.rows(), std::vector<Rational>(m.cols(), Rational(0)));
    for (int j = 0; j < m.cols(); ++j)
        for (auto& [r, v] : m.column(j).entries()) d[r][j] = v;
    return d;
}

// Plain dense Gaussian elimination over the rationals.
inline int dense_rank(Dense a) {
    if (a.empty()) return 0;
    int rows = static_cast<int>(a.size());
    int cols = static_cast<int>(a[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i) {
            if (!a[i][c].is_zero()) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Rational f = a[i][c] / a[r][c];
            for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

inline int dense_rank(const SparseMatrix& m) { return dense_rank(to_dense(m)); }

// dim ker(out) - rank(in), by dense elimination.
inline int dense_homology_dim(const SparseMatrix& d_in, const SparseMatrix& d_out) {
    int dim_k = d_out.cols();
    return dim_k - dense_rank(d_out) - dense_rank(d_in);
}

inline SparseMatrix random_matrix(int rows, int cols, std::mt19937_64& rng, int density_pct = 40) {
    SparseMatrix m(rows, cols);
    std::uniform_int_distribution<int> pct(0, 99);
    std::uniform_int_distribution<long> num(-5, 5);
    std::uniform_int_distribution<long> den(1, 4);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            if (pct(rng) < density_pct) {
                Rational v(num(rng), den(rng));
                if (!v.is_zero()) m.add(i, j, v);
            }
    return m;
}

}  // namespace oracles
