#include "cychom/sparse.hpp"

#include <algorithm>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "cychom/errors.hpp"

namespace cychom {

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

SparseVec::SparseVec(std::vector<Entry> entries) : e_(std::move(entries)) {
    std::sort(e_.begin(), e_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    for (auto& en : e_) {
        if (!merged.empty() && merged.back().first == en.first)
            merged.back().second += en.second;
        else
            merged.push_back(en);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Entry& en) { return en.second.is_zero(); }),
                 merged.end());
    e_ = std::move(merged);
}

Rational SparseVec::at(int row) const {
    auto it = std::lower_bound(e_.begin(), e_.end(), row,
                               [](const Entry& en, int r) { return en.first < r; });
    if (it != e_.end() && it->first == row) return it->second;
    return Rational(0);
}

void SparseVec::add_scaled(const SparseVec& other, const Rational& c) {
    if (c.is_zero() || other.e_.empty()) return;
    std::vector<Entry> out;
    out.reserve(e_.size() + other.e_.size());
    auto a = e_.begin();
    auto b = other.e_.begin();
    while (a != e_.end() || b != other.e_.end()) {
        if (b == other.e_.end() || (a != e_.end() && a->first < b->first)) {
            out.push_back(*a++);
        } else if (a == e_.end() || b->first < a->first) {
            out.emplace_back(b->first, c * b->second);
            ++b;
        } else {
            Rational v = a->second + c * b->second;
            if (!v.is_zero()) out.emplace_back(a->first, v);
            ++a;
            ++b;
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const Entry& en) { return en.second.is_zero(); }),
              out.end());
    e_ = std::move(out);
}

void SparseVec::scale(const Rational& c) {
    if (c.is_zero()) {
        e_.clear();
        return;
    }
    for (auto& en : e_) en.second *= c;
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.col_[i] = SparseVec::unit(i);
    return m;
}

SparseMatrix SparseMatrix::from_triples(int rows, int cols,
                                        const std::vector<std::tuple<int, int, Rational>>& triples) {
    SparseMatrix m(rows, cols);
    for (auto& [r, c, v] : triples) m.add(r, c, v);
    return m;
}

void SparseMatrix::add(int r, int c, const Rational& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw Error("SparseMatrix::add: out of range");
    SparseVec u({{r, v}});
    col_[c].add_scaled(u, Rational(1));
}

bool SparseMatrix::is_zero() const {
    for (auto& c : col_)
        if (!c.is_zero()) return false;
    return true;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    std::vector<std::vector<SparseVec::Entry>> rows(rows_);
    for (int j = 0; j < cols_; ++j)
        for (auto& [r, v] : col_[j].entries()) rows[r].emplace_back(j, v);
    for (int i = 0; i < rows_; ++i) t.col_[i] = SparseVec(std::move(rows[i]));
    return t;
}

SparseVec SparseMatrix::apply(const SparseVec& x) const {
    SparseVec out;
    for (auto& [j, v] : x.entries()) {
        if (j < 0 || j >= cols_) throw Error("SparseMatrix::apply: index out of range");
        out.add_scaled(col_[j], v);
    }
    return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error("SparseMatrix: shape mismatch in product");
    SparseMatrix out(rows_, rhs.cols_);
    for (int j = 0; j < rhs.cols_; ++j) out.col_[j] = apply(rhs.col_[j]);
    return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("SparseMatrix: shape mismatch in sum");
    SparseMatrix out = *this;
    for (int j = 0; j < cols_; ++j) out.col_[j].add_scaled(rhs.col_[j], Rational(1));
    return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("SparseMatrix: shape mismatch in difference");
    SparseMatrix out = *this;
    for (int j = 0; j < cols_; ++j) out.col_[j].add_scaled(rhs.col_[j], Rational(-1));
    return out;
}

SparseMatrix SparseMatrix::scaled(const Rational& c) const {
    SparseMatrix out = *this;
    for (auto& col : out.col_) col.scale(c);
    return out;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.col_ == b.col_;
}

SparseMatrix SparseMatrix::hstack(const SparseMatrix& rhs) const {
    if (rows_ != rhs.rows_) throw Error("SparseMatrix::hstack: row mismatch");
    SparseMatrix out(rows_, cols_ + rhs.cols_);
    for (int j = 0; j < cols_; ++j) out.col_[j] = col_[j];
    for (int j = 0; j < rhs.cols_; ++j) out.col_[cols_ + j] = rhs.col_[j];
    return out;
}

SparseMatrix SparseMatrix::vstack(const SparseMatrix& rhs) const {
    if (cols_ != rhs.cols_) throw Error("SparseMatrix::vstack: column mismatch");
    SparseMatrix out(rows_ + rhs.rows_, cols_);
    for (int j = 0; j < cols_; ++j) {
        std::vector<SparseVec::Entry> e = col_[j].entries();
        for (auto& [r, v] : rhs.col_[j].entries()) e.emplace_back(rows_ + r, v);
        out.col_[j] = SparseVec(std::move(e));
    }
    return out;
}

SparseMatrix SparseMatrix::columns_subset(const std::vector<int>& idx) const {
    SparseMatrix out(rows_, static_cast<int>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) out.col_[j] = col_[idx[j]];
    return out;
}

// ---------------------------------------------------------------------------
// Elimination

namespace {

using Row = std::vector<std::pair<int, Rational>>;  // sorted by column

Rational row_at(const Row& row, int col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const std::pair<int, Rational>& e, int c) { return e.first < c; });
    if (it != row.end() && it->first == col) return it->second;
    return Rational(0);
}

// row := (p*row - m*prow)/q, fraction-free Bareiss update
Row bareiss_update(const Row& row, const Row& prow, const Rational& p, const Rational& m,
                   const Rational& q) {
    Row out;
    out.reserve(row.size() + prow.size());
    auto a = row.begin();
    auto b = prow.begin();
    while (a != row.end() || b != prow.end()) {
        int col;
        Rational v;
        if (b == prow.end() || (a != row.end() && a->first < b->first)) {
            col = a->first;
            v = (p * a->second) / q;
            ++a;
        } else if (a == row.end() || b->first < a->first) {
            col = b->first;
            v = (-(m * b->second)) / q;
            ++b;
        } else {
            col = a->first;
            v = (p * a->second - m * b->second) / q;
            ++a;
            ++b;
        }
        if (!v.is_zero()) out.emplace_back(col, v);
    }
    return out;
}

}  // namespace

Elimination::Elimination(const SparseMatrix& A, PivotRule rule) : Elimination(A, nullptr, rule) {}

Elimination eliminate_with_rhs(const SparseMatrix& A, const SparseMatrix& B, PivotRule rule) {
    return Elimination(A, &B, rule);
}

Elimination::Elimination(const SparseMatrix& A, const SparseMatrix* B, PivotRule rule)
    : nrows_(A.rows()), ncols_(A.cols()) {
    carried_rhs_ = (B != nullptr);
    rhs_cols_ = B ? B->cols() : 0;
    if (B && B->rows() != nrows_) throw Error("Elimination: rhs row mismatch");

    std::vector<Row> rows(nrows_);
    std::vector<Row> rhs(nrows_);
    {
        std::vector<std::vector<std::pair<int, Rational>>> byrow(nrows_);
        for (int j = 0; j < ncols_; ++j)
            for (auto& [r, v] : A.column(j).entries()) byrow[r].emplace_back(j, v);
        for (int i = 0; i < nrows_; ++i) rows[i] = std::move(byrow[i]);
        if (B) {
            std::vector<std::vector<std::pair<int, Rational>>> brow(nrows_);
            for (int j = 0; j < rhs_cols_; ++j)
                for (auto& [r, v] : B->column(j).entries()) brow[r].emplace_back(j, v);
            for (int i = 0; i < nrows_; ++i) rhs[i] = std::move(brow[i]);
        }
    }

    std::vector<bool> row_active(nrows_, true);
    std::vector<bool> col_active(ncols_, true);
    std::vector<int> col_count(ncols_, 0);
    for (int i = 0; i < nrows_; ++i)
        for (auto& [c, v] : rows[i]) ++col_count[c];

    Rational prev_pivot(1);
    while (true) {
        int pr = -1, pc = -1;
        if (rule == PivotRule::markowitz) {
            long best = std::numeric_limits<long>::max();
            for (int i = 0; i < nrows_; ++i) {
                if (!row_active[i] || rows[i].empty()) continue;
                long rm = static_cast<long>(rows[i].size()) - 1;
                for (auto& [c, v] : rows[i]) {
                    long cost = rm * (col_count[c] - 1);
                    if (cost < best || (cost == best && (i < pr || (i == pr && c < pc)))) {
                        best = cost;
                        pr = i;
                        pc = c;
                    }
                }
            }
        } else {
            // leftmost nonzero column, lowest row
            for (int c = 0; c < ncols_ && pc < 0; ++c) {
                if (!col_active[c] || col_count[c] == 0) continue;
                for (int i = 0; i < nrows_; ++i) {
                    if (row_active[i] && !row_at(rows[i], c).is_zero()) {
                        pr = i;
                        pc = c;
                        break;
                    }
                }
            }
        }
        if (pr < 0) break;

        const Rational p = row_at(rows[pr], pc);
        // retire pivot row
        row_active[pr] = false;
        col_active[pc] = false;
        for (auto& [c, v] : rows[pr]) --col_count[c];
        EchRow er;
        er.pivot_col = pc;
        er.coeffs = rows[pr];
        er.rhs = rhs[pr];
        er.orig_row = pr;
        // eliminate column pc from all remaining active rows
        for (int i = 0; i < nrows_; ++i) {
            if (!row_active[i]) continue;
            Rational m = row_at(rows[i], pc);
            if (m.is_zero()) continue;
            for (auto& [c, v] : rows[i]) --col_count[c];
            rows[i] = bareiss_update(rows[i], er.coeffs, p, m, prev_pivot);
            if (carried_rhs_) rhs[i] = bareiss_update(rhs[i], er.rhs, p, m, prev_pivot);
            for (auto& [c, v] : rows[i]) ++col_count[c];
        }
        ech_.push_back(std::move(er));
        pivot_cols_.push_back(pc);
        ++rank_;
        prev_pivot = p;
    }
    for (int i = 0; i < nrows_; ++i) {
        if (row_active[i]) {
            zero_row_orig_.push_back(i);
            zero_row_rhs_.push_back(rhs[i]);
        }
    }
}

SparseMatrix Elimination::kernel() const {
    std::vector<bool> is_pivot(ncols_, false);
    for (int c : pivot_cols_) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < ncols_; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    SparseMatrix K(ncols_, static_cast<int>(free_cols.size()));
    for (size_t fj = 0; fj < free_cols.size(); ++fj) {
        int f = free_cols[fj];
        // x_f = 1; back-substitute pivots in reverse elimination order
        std::vector<std::pair<int, Rational>> x{{f, Rational(1)}};
        auto value = [&x](int col) {
            for (auto& [c, v] : x)
                if (c == col) return v;
            return Rational(0);
        };
        for (auto it = ech_.rbegin(); it != ech_.rend(); ++it) {
            Rational s(0);
            Rational p(0);
            for (auto& [c, v] : it->coeffs) {
                if (c == it->pivot_col) {
                    p = v;
                    continue;
                }
                Rational xv = value(c);
                if (!xv.is_zero()) s += v * xv;
            }
            if (!s.is_zero()) x.emplace_back(it->pivot_col, -(s / p));
        }
        K.set_column(static_cast<int>(fj), SparseVec(std::move(x)));
    }
    return K;
}

std::optional<SparseMatrix> Elimination::solve(const SparseMatrix& B) const {
    if (!carried_rhs_) throw Error("Elimination::solve: no carried right-hand side");
    if (B.cols() != rhs_cols_) throw Error("Elimination::solve: rhs mismatch");
    // consistency on never-pivoted rows
    for (auto& r : zero_row_rhs_)
        if (!r.empty()) return std::nullopt;

    SparseMatrix X(ncols_, rhs_cols_);
    for (int j = 0; j < rhs_cols_; ++j) {
        std::vector<std::pair<int, Rational>> x;
        auto value = [&x](int col) {
            for (auto& [c, v] : x)
                if (c == col) return v;
            return Rational(0);
        };
        for (auto it = ech_.rbegin(); it != ech_.rend(); ++it) {
            Rational rhsv(0);
            for (auto& [c, v] : it->rhs)
                if (c == j) rhsv = v;
            Rational s(0), p(0);
            for (auto& [c, v] : it->coeffs) {
                if (c == it->pivot_col) {
                    p = v;
                    continue;
                }
                Rational xv = value(c);
                if (!xv.is_zero()) s += v * xv;
            }
            Rational xv = (rhsv - s) / p;
            if (!xv.is_zero()) x.emplace_back(it->pivot_col, xv);
        }
        X.set_column(j, SparseVec(std::move(x)));
    }
    return X;
}

int rank(const SparseMatrix& A, PivotRule rule) { return Elimination(A, rule).rank(); }

SparseMatrix kernel(const SparseMatrix& A) { return Elimination(A).kernel(); }

std::optional<SparseMatrix> solve(const SparseMatrix& A, const SparseMatrix& B) {
    return eliminate_with_rhs(A, B, PivotRule::markowitz).solve(B);
}

std::vector<int> column_rank_profile(const SparseMatrix& A) {
    Elimination e(A, PivotRule::leftmost);
    std::vector<int> p = e.pivot_columns();
    std::sort(p.begin(), p.end());
    return p;
}

SparseMatrix column_reduce(const SparseMatrix& A) {
    return A.columns_subset(column_rank_profile(A));
}

SparseMatrix column_space_intersection(const SparseMatrix& A, const SparseMatrix& B) {
    if (A.rows() != B.rows()) throw Error("column_space_intersection: row mismatch");
    if (A.cols() == 0 || B.cols() == 0) return SparseMatrix(A.rows(), 0);
    SparseMatrix K = kernel(A.hstack(B.scaled(Rational(-1))));
    // A-part of each kernel column gives an intersection element
    SparseMatrix P(A.rows(), K.cols());
    for (int j = 0; j < K.cols(); ++j) {
        std::vector<SparseVec::Entry> apart;
        for (auto& [r, v] : K.column(j).entries())
            if (r < A.cols()) apart.emplace_back(r, v);
        P.set_column(j, A.apply(SparseVec(std::move(apart))));
    }
    return column_reduce(P);
}

}  // namespace cychom
