#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cychom/rational.hpp"

namespace cychom {

// Sparse column vector: entries sorted by row index, nonzero values only.
class SparseVec {
public:
    using Entry = std::pair<int, Rational>;

    SparseVec() = default;
    explicit SparseVec(std::vector<Entry> entries);  // sorts and combines duplicates

    static SparseVec unit(int row) { return SparseVec({{row, Rational(1)}}); }

    const std::vector<Entry>& entries() const { return e_; }
    bool is_zero() const { return e_.empty(); }
    int nnz() const { return static_cast<int>(e_.size()); }
    Rational at(int row) const;

    // this += c * other
    void add_scaled(const SparseVec& other, const Rational& c);
    void scale(const Rational& c);

    friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.e_ == b.e_; }

private:
    std::vector<Entry> e_;
};

enum class PivotRule { markowitz, leftmost };

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), col_(cols) {}

    static SparseMatrix identity(int n);
    static SparseMatrix from_triples(int rows, int cols,
                                     const std::vector<std::tuple<int, int, Rational>>& triples);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_zero() const;

    const SparseVec& column(int j) const { return col_[j]; }
    void set_column(int j, SparseVec v) { col_[j] = std::move(v); }
    void add(int r, int c, const Rational& v);  // accumulate entry
    Rational at(int r, int c) const { return col_[c].at(r); }

    SparseMatrix transpose() const;
    SparseMatrix operator*(const SparseMatrix& rhs) const;
    SparseVec apply(const SparseVec& x) const;
    SparseMatrix operator+(const SparseMatrix& rhs) const;
    SparseMatrix operator-(const SparseMatrix& rhs) const;
    SparseMatrix scaled(const Rational& c) const;
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

    // Concatenate columns (same row count).
    SparseMatrix hstack(const SparseMatrix& rhs) const;
    // Stack rows (same column count).
    SparseMatrix vstack(const SparseMatrix& rhs) const;
    SparseMatrix columns_subset(const std::vector<int>& idx) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<SparseVec> col_;
};

// Fraction-free (Bareiss) sparse elimination. Pivot selection is either
// Markowitz cost with ties broken by lowest (row, col), or leftmost column
// first (which yields the column rank profile). All results are
// deterministic functions of the input.
class Elimination {
public:
    explicit Elimination(const SparseMatrix& A, PivotRule rule = PivotRule::markowitz);

    int rank() const { return rank_; }
    const std::vector<int>& pivot_columns() const { return pivot_cols_; }

    // Basis of ker(A), one column per free column, in column order.
    SparseMatrix kernel() const;

    // Solve A X = B columnwise; std::nullopt if any column is inconsistent.
    // Free variables are set to zero.
    std::optional<SparseMatrix> solve(const SparseMatrix& B) const;

private:
    struct EchRow {
        int pivot_col;
        std::vector<std::pair<int, Rational>> coeffs;  // over column indices, sorted
        std::vector<std::pair<int, Rational>> rhs;     // carried right-hand sides
        int orig_row;
    };
    int nrows_, ncols_;
    int rank_ = 0;
    std::vector<int> pivot_cols_;
    std::vector<EchRow> ech_;          // in elimination order
    std::vector<int> zero_row_orig_;   // rows never pivoted (zero A-part at end)
    std::vector<std::vector<std::pair<int, Rational>>> zero_row_rhs_;
    bool carried_rhs_ = false;
    int rhs_cols_ = 0;

    friend Elimination eliminate_with_rhs(const SparseMatrix& A, const SparseMatrix& B,
                                          PivotRule rule);
    Elimination(const SparseMatrix& A, const SparseMatrix* B, PivotRule rule);
};

int rank(const SparseMatrix& A, PivotRule rule = PivotRule::markowitz);
SparseMatrix kernel(const SparseMatrix& A);
std::optional<SparseMatrix> solve(const SparseMatrix& A, const SparseMatrix& B);

// Greedy left-to-right independent column subset (column rank profile).
std::vector<int> column_rank_profile(const SparseMatrix& A);

// Reduce the columns of A to an independent spanning subset, in column order.
SparseMatrix column_reduce(const SparseMatrix& A);

// Basis of colspace(A) ∩ colspace(B), as columns in the ambient space.
SparseMatrix column_space_intersection(const SparseMatrix& A, const SparseMatrix& B);

}  // namespace cychom
