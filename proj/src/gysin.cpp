#include "cychom/gysin.hpp"

namespace cychom {

namespace {

// (c, i) at src degree k -> (c, i+shift) at tgt degree k + 2*shift
SparseMatrix cell_shift(const FlavourSlice& src, const FlavourSlice& tgt, int k, int shift) {
    int kt = k + 2 * shift;
    SparseMatrix M(tgt.cplx.dim(kt), src.cplx.dim(k));
    auto it = src.cells.find(k);
    if (it == src.cells.end()) return M;
    for (size_t j = 0; j < it->second.size(); ++j) {
        const auto& c = it->second[j];
        int p = tgt.cell_index(kt, c.upow + shift, c.idx);
        if (p >= 0) M.add(p, static_cast<int>(j), Rational(1));
    }
    return M;
}

// slice -> bare complex: keep the u^0 coefficient
SparseMatrix set_u_zero(const FlavourSlice& src, const TruncComplex& c, int k) {
    SparseMatrix M(c.dim(k), src.cplx.dim(k));
    auto it = src.cells.find(k);
    if (it == src.cells.end()) return M;
    for (size_t j = 0; j < it->second.size(); ++j)
        if (it->second[j].upow == 0) M.add(it->second[j].idx, static_cast<int>(j), Rational(1));
    return M;
}

// bare complex -> slice at u^0
SparseMatrix include_at_u_zero(const TruncComplex& c, const FlavourSlice& tgt, int k) {
    SparseMatrix M(tgt.cplx.dim(k), c.dim(k));
    for (int idx = 0; idx < c.dim(k); ++idx) {
        int p = tgt.cell_index(k, 0, idx);
        if (p >= 0) M.add(p, idx, Rational(1));
    }
    return M;
}

// bare complex -> sub slice: c -> (D c, 0) at degree k-1
SparseMatrix d_then_include(const MixedComplex& m, const TruncComplex& c, const FlavourSlice& tgt,
                            int k) {
    SparseMatrix M(tgt.cplx.dim(k - 1), c.dim(k));
    SparseMatrix D = m.D().block(k);
    for (int idx = 0; idx < c.dim(k); ++idx)
        for (auto& [r, v] : D.column(idx).entries()) {
            int p = tgt.cell_index(k - 1, 0, r);
            if (p >= 0) M.add(p, idx, v);
        }
    return M;
}

// quot slice -> sub slice: constant term, D, include at u^0 (degree k-1)
SparseMatrix connecting_d0(const MixedComplex& m, const FlavourSlice& quot, const FlavourSlice& sub,
                           int k) {
    SparseMatrix M(sub.cplx.dim(k - 1), quot.cplx.dim(k));
    auto it = quot.cells.find(k);
    if (it == quot.cells.end()) return M;
    for (size_t j = 0; j < it->second.size(); ++j) {
        const auto& c = it->second[j];
        if (c.upow != 0) continue;
        SparseVec img = m.D().block(c.cdeg).column(c.idx);
        for (auto& [r, v] : img.entries()) {
            int p = sub.cell_index(k - 1, 0, r);
            if (p >= 0) M.add(p, static_cast<int>(j), v);
        }
    }
    return M;
}

// quot slice -> bare complex: constant term then D
SparseMatrix connecting_d0_to_c(const MixedComplex& m, const FlavourSlice& quot,
                                const TruncComplex& c, int k) {
    SparseMatrix M(c.dim(k - 1), quot.cplx.dim(k));
    auto it = quot.cells.find(k);
    if (it == quot.cells.end()) return M;
    for (size_t j = 0; j < it->second.size(); ++j) {
        const auto& cell = it->second[j];
        if (cell.upow != 0) continue;
        SparseVec img = m.D().block(cell.cdeg).column(cell.idx);
        for (auto& [r, v] : img.entries()) M.add(r, static_cast<int>(j), v);
    }
    return M;
}

// Homology node verified on the persistent image: the small box maps into a
// box widened downward, which removes the spurious classes of cut
// polynomial-in-u^-1 directions.
struct NodeRef {
    SliceHomology* Hsmall;
    SliceHomology* Hwide;
    const FlavourSlice* small;  // null for the bare complex
    const FlavourSlice* wide;

    SparseMatrix incl(int k) const {
        if (!small) return SparseMatrix::identity(small_dim(k));
        SparseMatrix M(wide->cplx.dim(k), small->cplx.dim(k));
        auto it = small->cells.find(k);
        if (it == small->cells.end()) return M;
        for (size_t j = 0; j < it->second.size(); ++j) {
            const auto& c = it->second[j];
            int p = wide->cell_index(k, c.upow, c.idx);
            if (p >= 0) M.add(p, static_cast<int>(j), Rational(1));
        }
        return M;
    }
    int small_dim(int k) const { return Hsmall->at(k).reps.rows(); }
    SparseMatrix persistent_reps(int k) const { return incl(k) * Hsmall->at(k).reps; }
    // layers of the wide box below the small one; truncated series tails are
    // only determined up to this strip
    SparseMatrix strip(int k) const {
        int n = wide->cplx.dim(k);
        if (!flavour_traits(wide->flavour).down_series) return SparseMatrix(n, 0);
        int cut = small ? small->ilo : wide->ilo;
        std::vector<int> idx;
        auto it = wide->cells.find(k);
        if (it != wide->cells.end())
            for (size_t j = 0; j < it->second.size(); ++j)
                if (it->second[j].upow < cut) idx.push_back(static_cast<int>(j));
        SparseMatrix M(n, static_cast<int>(idx.size()));
        for (size_t j = 0; j < idx.size(); ++j) M.add(idx[j], static_cast<int>(j), Rational(1));
        return M;
    }
    std::optional<SparseMatrix> classes(int k, const SparseMatrix& v) const {
        auto c = Hwide->classes_of(k, v);
        if (!c && wide) c = Hwide->classes_of_mod(k, v, strip(k).hstack(wide->bottom_layer(k)));
        return c;
    }
};

// exactness at `node` for chain maps (on the wide boxes) A: prev -> node,
// B: node -> next
void check_node(CheckReport& rep, const std::string& name, const NodeRef& prev, int kprev,
                const NodeRef& node, int knode, const NodeRef& next, int knext,
                const SparseMatrix& chainA, const SparseMatrix& chainB) {
    SparseMatrix from = prev.persistent_reps(kprev);
    SparseMatrix through = node.persistent_reps(knode);
    auto A = node.classes(knode, chainA * from);
    auto B = next.classes(knext, chainB * through);
    auto P = node.classes(knode, through);
    auto comp = next.classes(knext, chainB * (chainA * from));
    if (!A || !B || !P || !comp) {
        rep.add(name, false, "induced map not defined (image not a cycle)");
        return;
    }
    bool comp_zero = comp->is_zero();
    int dim = P->cols() == 0 ? 0 : rank(*P);
    int ra = A->cols() == 0 ? 0 : rank(*A);
    int rb = B->cols() == 0 ? 0 : rank(*B);
    bool ranks = (ra + rb == dim);
    std::string witness;
    if (!comp_zero)
        witness = "composite nonzero";
    else if (!ranks)
        witness = "rank(in) + rank(out) = " + std::to_string(ra) + " + " + std::to_string(rb) +
                  " != dim " + std::to_string(dim);
    rep.add(name, comp_zero && ranks, witness);
}

}  // namespace

const std::vector<GysinFamily>& gysin_families() {
    static const std::vector<GysinFamily> fams = {
        {Flavour::poly_u, Flavour::laurent_poly, Flavour::poly_uinv},
        {Flavour::series_u, Flavour::series_u_poly_uinv, Flavour::poly_uinv},
        {Flavour::poly_u, Flavour::poly_u_series_uinv, Flavour::series_uinv},
        {Flavour::series_u, Flavour::laurent_series, Flavour::series_uinv},
    };
    return fams;
}

CheckReport gysin_check_family(const MixedComplex& m, const GysinFamily& fam, const Window& w) {
    w.validate();
    Window w2 = w;
    w2.margin += 2;
    Window w3 = w2;
    w3.upow_lo -= 2;
    FlavourSlice sub_s = assemble_flavour(m, fam.sub, w2);
    FlavourSlice mid_s = assemble_flavour(m, fam.mid, w2);
    FlavourSlice quot_s = assemble_flavour(m, fam.quot, w2);
    FlavourSlice sub = assemble_flavour(m, fam.sub, w3);
    FlavourSlice mid = assemble_flavour(m, fam.mid, w3);
    FlavourSlice quot = assemble_flavour(m, fam.quot, w3);
    TruncComplex bare = complex_slice(m, w2);
    SliceHomology Hsub_s(sub_s.cplx), Hmid_s(mid_s.cplx), Hquot_s(quot_s.cplx);
    SliceHomology Hsub_w(sub.cplx), Hmid_w(mid.cplx), Hquot_w(quot.cplx), Hc_(bare);
    NodeRef Hsub{&Hsub_s, &Hsub_w, &sub_s, &sub};
    NodeRef Hmid{&Hmid_s, &Hmid_w, &mid_s, &mid};
    NodeRef Hquot{&Hquot_s, &Hquot_w, &quot_s, &quot};
    NodeRef Hc{&Hc_, &Hc_, nullptr, nullptr};

    const std::string fname = std::string(flavour_traits(fam.mid).name);
    CheckReport rep;

    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        // Gysin row: HC^{k-2}_sub -u-> HC^k_sub -u=0-> H^k(C) -D-> HC^{k-1}_sub -u-> HC^{k+1}_sub
        check_node(rep, fname + " gysin-row node HC^" + std::to_string(k) + "_sub", Hsub, k - 2,
                   Hsub, k, Hc, k, cell_shift(sub, sub, k - 2, 1), set_u_zero(sub, bare, k));
        check_node(rep, fname + " gysin-row node H^" + std::to_string(k) + "(C)", Hsub, k, Hc, k,
                   Hsub, k - 1, set_u_zero(sub, bare, k), d_then_include(m, bare, sub, k));
        check_node(rep, fname + " gysin-row node HC^" + std::to_string(k - 1) + "_sub'", Hc, k,
                   Hsub, k - 1, Hsub, k + 1, d_then_include(m, bare, sub, k),
                   cell_shift(sub, sub, k - 1, 1));

        // tautological row: HC^{k-2}_sub -u-> HC^k_mid -p-> HC^k_quot -D0-> HC^{k-1}_sub -u-> ...
        check_node(rep, fname + " taut-row node HC^" + std::to_string(k) + "_mid", Hsub, k - 2,
                   Hmid, k, Hquot, k, cell_shift(sub, mid, k - 2, 1), cell_shift(mid, quot, k, 0));
        check_node(rep, fname + " taut-row node HC^" + std::to_string(k) + "_quot", Hmid, k, Hquot,
                   k, Hsub, k - 1, cell_shift(mid, quot, k, 0), connecting_d0(m, quot, sub, k));
        check_node(rep, fname + " taut-row node HC^" + std::to_string(k - 1) + "_sub", Hquot, k,
                   Hsub, k - 1, Hmid, k + 1, connecting_d0(m, quot, sub, k),
                   cell_shift(sub, mid, k - 1, 1));

        // column through the middle flavour:
        // HC^{k+1}_quot -D0-> HC^k_sub -i-> HC^k_mid -p.u-> HC^{k+2}_quot -D0-> HC^{k+1}_sub
        {
            SparseMatrix pu = cell_shift(mid, quot, k + 2, 0) * cell_shift(mid, mid, k, 1);
            check_node(rep, fname + " column-mid node HC^" + std::to_string(k) + "_sub", Hquot,
                       k + 1, Hsub, k, Hmid, k, connecting_d0(m, quot, sub, k + 1),
                       cell_shift(sub, mid, k, 0));
            check_node(rep, fname + " column-mid node HC^" + std::to_string(k) + "_mid", Hsub, k,
                       Hmid, k, Hquot, k + 2, cell_shift(sub, mid, k, 0), pu);
            check_node(rep, fname + " column-mid node HC^" + std::to_string(k + 2) + "_quot", Hmid,
                       k, Hquot, k + 2, Hsub, k + 1, pu, connecting_d0(m, quot, sub, k + 2));
        }

        // column through H(C,delta):
        // HC^{k+1}_quot -D0-> H^k(C) -i0-> HC^k_quot -u-> HC^{k+2}_quot -D0-> H^{k+1}(C)
        {
            check_node(rep, fname + " column-c node H^" + std::to_string(k) + "(C)", Hquot, k + 1,
                       Hc, k, Hquot, k, connecting_d0_to_c(m, quot, bare, k + 1),
                       include_at_u_zero(bare, quot, k));
            check_node(rep, fname + " column-c node HC^" + std::to_string(k) + "_quot", Hc, k,
                       Hquot, k, Hquot, k + 2, include_at_u_zero(bare, quot, k),
                       cell_shift(quot, quot, k, 1));
            check_node(rep, fname + " column-c node HC^" + std::to_string(k + 2) + "_quot", Hquot,
                       k, Hquot, k + 2, Hc, k + 1, cell_shift(quot, quot, k, 1),
                       connecting_d0_to_c(m, quot, bare, k + 2));
        }

        // squares on (persistent) homology representatives
        {
            auto sq_incl_u =
                Hmid.classes(k, cell_shift(sub, mid, k - 2, 1) * Hsub.persistent_reps(k - 2));
            auto sq_u_incl =
                Hmid.classes(k, cell_shift(sub, mid, k, 0) * cell_shift(sub, sub, k - 2, 1) *
                                    Hsub.persistent_reps(k - 2));
            bool ok1 = sq_incl_u && sq_u_incl && *sq_incl_u == *sq_u_incl;
            rep.add(fname + " square u/incl at " + std::to_string(k), ok1,
                    ok1 ? "" : "routes disagree");

            SparseMatrix r1 = cell_shift(mid, quot, k, 0) * cell_shift(sub, mid, k, 0);
            SparseMatrix r2 = include_at_u_zero(bare, quot, k) * set_u_zero(sub, bare, k);
            auto c1 = Hquot.classes(k, r1 * Hsub.persistent_reps(k));
            auto c2 = Hquot.classes(k, r2 * Hsub.persistent_reps(k));
            bool ok2 = c1 && c2 && *c1 == *c2;
            rep.add(fname + " square proj/u0 at " + std::to_string(k), ok2,
                    ok2 ? "" : "routes disagree");

            SparseMatrix r3 = connecting_d0(m, quot, sub, k) * include_at_u_zero(bare, quot, k);
            SparseMatrix r4 = d_then_include(m, bare, sub, k);
            auto c3 = Hsub.classes(k - 1, r3 * Hc_.at(k).reps);
            auto c4 = Hsub.classes(k - 1, r4 * Hc_.at(k).reps);
            bool ok3 = c3 && c4 && *c3 == *c4;
            rep.add(fname + " square D0/D at " + std::to_string(k), ok3,
                    ok3 ? "" : "routes disagree");
        }
    }
    return rep;
}

CheckReport gysin_check(const MixedComplex& m, const Window& w) {
    CheckReport rep;
    for (auto& fam : gysin_families()) rep.merge(gysin_check_family(m, fam, w));
    return rep;
}

}  // namespace cychom
