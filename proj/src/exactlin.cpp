#include "cychom/exactlin.hpp"

#include "cychom/errors.hpp"

namespace cychom {

int rank_at(const GradedMap& m, int k, PivotRule rule) { return rank(m.block(k), rule); }

HomologyAt homology_at(const GradedMap& d_in, const GradedMap& d_out, int k) {
    if (d_in.degree() != 1 || d_out.degree() != 1)
        throw Error("homology_at: differentials must have degree +1");
    SparseMatrix in = d_in.block(k - 1);
    SparseMatrix out = d_out.block(k);
    SparseMatrix comp = out * in;
    if (!comp.is_zero()) {
        // witness: first basis label whose image fails
        std::string w;
        for (int j = 0; j < comp.cols(); ++j) {
            if (!comp.column(j).is_zero()) {
                w = d_in.source()->label(k - 1, j);
                break;
            }
        }
        throw CompositionNotZero("homology_at: d_out∘d_in ≠ 0 into degree " + std::to_string(k) +
                                 " (witness " + w + ")");
    }

    HomologyAt h;
    SparseMatrix cycles = kernel(out);
    SparseMatrix bnd = column_reduce(in);
    // representatives: cycle columns extending the boundary span
    SparseMatrix stacked = bnd.hstack(cycles);
    std::vector<int> profile = column_rank_profile(stacked);
    std::vector<int> rep_cols;
    for (int c : profile)
        if (c >= bnd.cols()) rep_cols.push_back(c - bnd.cols());
    h.boundaries = bnd;
    h.representatives = cycles.columns_subset(rep_cols);
    h.dimension = static_cast<int>(rep_cols.size());
    return h;
}

SparseMatrix induced_map_on_homology(const GradedMap& f, const GradedMap& d_src,
                                     const GradedMap& d_tgt, int k) {
    if (f.degree() != 0) throw NotAChainMap("induced_map_on_homology: f must have degree 0");
    for (int j : {k - 1, k}) {
        SparseMatrix lhs = f.block(j + 1) * d_src.block(j);
        SparseMatrix rhs = d_tgt.block(j) * f.block(j);
        if (!(lhs == rhs))
            throw NotAChainMap("induced_map_on_homology: f does not commute with the differentials at degree " +
                               std::to_string(j));
    }
    HomologyAt hs = homology_at(d_src, d_src, k);
    HomologyAt ht = homology_at(d_tgt, d_tgt, k);
    SparseMatrix images = f.block(k) * hs.representatives;
    // express images in [boundaries | representatives] of the target
    SparseMatrix basis = ht.boundaries.hstack(ht.representatives);
    auto sol = solve(basis, images);
    if (!sol) throw NotAChainMap("induced_map_on_homology: image is not a cycle modulo boundaries");
    SparseMatrix M(ht.dimension, hs.dimension);
    for (int j = 0; j < hs.dimension; ++j)
        for (auto& [r, v] : sol->column(j).entries())
            if (r >= ht.boundaries.cols()) M.add(r - ht.boundaries.cols(), j, v);
    return M;
}

SparseMatrix SubquotientPresentation::sub_at(int k) const {
    auto it = sub.find(k);
    if (it != sub.end()) return it->second;
    return SparseMatrix(ambient->dim(k), 0);
}

SparseMatrix SubquotientPresentation::den_at(int k) const {
    auto it = den.find(k);
    if (it != den.end()) return it->second;
    return SparseMatrix(ambient->dim(k), 0);
}

int SubquotientPresentation::dim(int k) const { return rank(sub_at(k)) - rank(den_at(k)); }

bool SubquotientPresentation::denominator_contained(int k) const {
    SparseMatrix s = sub_at(k), q = den_at(k);
    return rank(s.hstack(q)) == rank(s);
}

int subquotient_homology_dim(const SubquotientPresentation& p, const GradedMap& delta, int k) {
    if (delta.degree() != 1) throw Error("subquotient_homology_dim: delta must have degree +1");
    SparseMatrix Sk = column_reduce(p.sub_at(k));
    SparseMatrix Qk = p.den_at(k);
    SparseMatrix Qk1 = p.den_at(k + 1);
    SparseMatrix dS = delta.block(k) * Sk;

    // cycles of S/Q at k: {x in span(S_k) : delta x ∈ span(Q_{k+1})}
    // dim = dim ker([delta∘S | -Q_{k+1}]) restricted to S-coordinates
    SparseMatrix stacked = dS.hstack(Qk1.scaled(Rational(-1)));
    SparseMatrix K = kernel(stacked);
    SparseMatrix zlift(p.ambient->dim(k), K.cols());
    for (int j = 0; j < K.cols(); ++j) {
        std::vector<SparseVec::Entry> spart;
        for (auto& [r, v] : K.column(j).entries())
            if (r < Sk.cols()) spart.emplace_back(r, v);
        zlift.set_column(j, Sk.apply(SparseVec(std::move(spart))));
    }
    zlift = column_reduce(zlift);
    int zdim = zlift.cols();

    // boundaries: delta(S_{k-1}) + Q_k; dim H = (z - q) - (b - q) = z - b
    SparseMatrix Sk_1 = column_reduce(p.sub_at(k - 1));
    SparseMatrix dS_1 = delta.block(k - 1) * Sk_1;
    int bdim = rank(dS_1.hstack(Qk));
    return zdim - bdim;
}

}  // namespace cychom
