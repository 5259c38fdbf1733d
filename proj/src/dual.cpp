#include "cychom/dual.hpp"

namespace cychom {

MixedComplex dualize(const MixedComplex& m, const Window& w) {
    w.validate();
    const Support& sup = m.support();
    Support ds;
    ds.lo = -sup.hi;
    ds.hi = -sup.lo;
    ds.zero_below = sup.zero_above;
    ds.zero_above = sup.zero_below;
    for (int k : sup.incomplete) ds.incomplete.insert(-k);
    if (w.degree_lo - w.margin < ds.lo - 1 && !ds.zero_below)
        throw WindowTooSmall("dualize: reflected window not materialized");
    if (w.degree_hi + w.margin > ds.hi + 1 && !ds.zero_above)
        throw WindowTooSmall("dualize: reflected window not materialized");

    std::map<int, std::vector<std::string>> basis;
    for (int k = ds.lo; k <= ds.hi; ++k)
        for (auto& l : m.space().basis(-k)) basis[k].push_back(l + "^");
    auto sp = make_space(std::move(basis));

    GradedMap delta(sp, sp, 1), dd(sp, sp, -1);
    for (int k = ds.lo; k <= ds.hi; ++k) {
        // delta^* at k is the transpose of delta: C^{-k-1} -> C^{-k}
        if (k + 1 <= ds.hi && m.delta_known(-k - 1))
            delta.set_block(k, m.delta().block(-k - 1).transpose());
        if (k - 1 >= ds.lo && m.d_known(-k + 1))
            dd.set_block(k, m.D().block(-k + 1).transpose());
    }
    return MixedComplex(sp, std::move(delta), std::move(dd), ds);
}

namespace {

Window reflected(const Window& w) {
    Window r = w;
    r.degree_lo = -w.degree_hi;
    r.degree_hi = -w.degree_lo;
    return r;
}

struct FlavourPair {
    Flavour dual_side;
    Flavour primal_side;
};

}  // namespace

CheckReport duality_check(const MixedComplex& m, const Window& w) {
    w.validate();
    CheckReport rep;
    MixedComplex dual = dualize(m, reflected(w));

    const FlavourPair pairs[] = {
        {Flavour::series_u, Flavour::poly_uinv},
        {Flavour::series_uinv, Flavour::poly_u},
        {Flavour::laurent_series, Flavour::laurent_poly},
    };
    for (auto& p : pairs) {
        ModuleTable td = flavour_homology(dual, p.dual_side, reflected(w));
        ModuleTable tp = flavour_homology(m, p.primal_side, w);
        int checked = 0;
        bool ok = true;
        std::string witness;
        for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
            if (tp.at(k).trust != Trust::exact || td.at(-k).trust != Trust::exact) continue;
            ++checked;
            if (td.at(-k).dim != tp.at(k).dim) {
                ok = false;
                witness = "degree " + std::to_string(k) + ": " + std::to_string(td.at(-k).dim) +
                          " vs " + std::to_string(tp.at(k).dim);
            }
        }
        rep.add(std::string("dual ") + flavour_traits(p.dual_side).name + " matches " +
                    flavour_traits(p.primal_side).name + " (" + std::to_string(checked) +
                    " degrees)",
                ok, witness);
    }

    // im/ker diagram at dimension level
    {
        auto h_imdual = d_subquotient_homology(dual, DSubquotient::im_d, reflected(w));
        auto h_kerdual = d_subquotient_homology(dual, DSubquotient::ker_d, reflected(w));
        auto h_cmodker = d_subquotient_homology(m, DSubquotient::c_mod_ker, w);
        auto h_cmodim = d_subquotient_homology(m, DSubquotient::c_mod_im, w);
        bool ok1 = true, ok2 = true;
        std::string w1, w2;
        for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
            if (h_imdual[-k] != h_cmodker[k]) {
                ok1 = false;
                w1 = "degree " + std::to_string(k);
            }
            if (h_kerdual[-k] != h_cmodim[k]) {
                ok2 = false;
                w2 = "degree " + std::to_string(k);
            }
        }
        rep.add("H(im D^*) = H(C/ker D)^v at dimension level", ok1, w1);
        rep.add("H(ker D^*) = H(C/im D)^v at dimension level", ok2, w2);
    }

    // pairing map: C^v[[u]] -> (C[u-1])^v as an explicit chain isomorphism
    {
        Window wd = reflected(w);
        FlavourSlice a = assemble_flavour(dual, Flavour::series_u, wd);
        FlavourSlice b = assemble_flavour(m, Flavour::poly_uinv, w);
        bool ok = true;
        std::string witness;
        for (int k = wd.degree_lo; k < wd.degree_hi && ok; ++k) {
            // iota matches the dual cell (c^, i) at degree k with the primal
            // cell (c, -i) at degree -k; the transposed primal differential
            // must agree with the dual slice differential under it
            auto ita = a.cells.find(k);
            if (ita == a.cells.end()) continue;
            int na = a.cplx.dim(k);
            int nb = b.cplx.dim(-k);
            if (na != nb) {
                ok = false;
                witness = "cell counts differ at degree " + std::to_string(k);
                break;
            }
            SparseMatrix iota(nb, na);
            for (size_t j = 0; j < ita->second.size(); ++j) {
                const auto& cell = ita->second[j];
                // dual label carries a trailing ^
                std::string lab = dual.space().label(cell.cdeg, cell.idx);
                lab.pop_back();
                int pidx = m.space().index_of(-cell.cdeg, lab);
                int p = b.cell_index(-k, -cell.upow, pidx);
                if (p < 0) {
                    ok = false;
                    witness = "missing primal cell for " + lab;
                    break;
                }
                iota.add(p, static_cast<int>(j), Rational(1));
            }
            if (!ok) break;
            if (rank(iota) != na) {
                ok = false;
                witness = "pairing not bijective at degree " + std::to_string(k);
                break;
            }
            // chain identity: iota_{k+1} . d_dual(k) = d_primal(-k-1)^T . iota_k
            auto itb = a.cells.find(k + 1);
            if (itb == a.cells.end() || a.cplx.dim(k + 1) != b.cplx.dim(-k - 1)) continue;
            SparseMatrix iota1(b.cplx.dim(-k - 1), a.cplx.dim(k + 1));
            bool built = true;
            for (size_t j = 0; j < itb->second.size(); ++j) {
                const auto& cell = itb->second[j];
                std::string lab = dual.space().label(cell.cdeg, cell.idx);
                lab.pop_back();
                int pidx = m.space().index_of(-cell.cdeg, lab);
                int p = b.cell_index(-k - 1, -cell.upow, pidx);
                if (p < 0) {
                    built = false;
                    break;
                }
                iota1.add(p, static_cast<int>(j), Rational(1));
            }
            if (!built) continue;
            SparseMatrix lhs = iota1.transpose() * b.cplx.d_at(-k - 1).transpose() * iota;
            // compare only on interior columns: cells whose u-power is not at
            // the window edge
            SparseMatrix diff = lhs - a.cplx.d_at(k);
            for (size_t j = 0; j < ita->second.size(); ++j) {
                if (diff.column(static_cast<int>(j)).is_zero()) continue;
                if (ita->second[j].upow >= w.upow_hi - 1) continue;  // edge cells
                int cd = ita->second[j].cdeg;
                if (!dual.support().complete_at(cd) || !dual.support().complete_at(cd + 1) ||
                    !dual.support().complete_at(cd - 1))
                    continue;
                ok = false;
                witness = "pairing chain identity fails at degree " + std::to_string(k);
                break;
            }
        }
        rep.add("duality pairing is a chain isomorphism on the window", ok, witness);
    }
    return rep;
}

namespace {

// homology dims of ker(1-t^*) under (d+b)^* over reflected degrees
std::map<int, int> lambda_dual_dims(const GradedSpacePtr& primal_space, const GradedMap& dplusb,
                                    const GradedMap& t, const Support& sup, int qlo, int qhi) {
    TruncComplex c;
    c.lo = qlo;
    c.hi = qhi;
    GradedMap one_minus_t = GradedMap::identity(primal_space).plus(t.scaled(Rational(-1)));
    for (int q = qlo; q <= qhi; ++q) {
        int n = primal_space->dim(-q);
        std::vector<std::string> labs;
        for (auto& l : primal_space->basis(-q)) labs.push_back(l + "^");
        c.labels[q] = std::move(labs);
        c.complete[q] = sup.complete_at(-q) || sup.known_zero(-q);
        if (q + 1 <= qhi) c.d[q] = dplusb.block(-q - 1).transpose();
        SparseMatrix sub = kernel(one_minus_t.block(-q).transpose());
        if (sub.cols() < n) c.sub[q] = std::move(sub);
    }
    SliceHomology H(c);
    std::map<int, int> out;
    for (int q = qlo + 1; q <= qhi - 1; ++q) out[q] = H.at(q).dim;
    return out;
}

CheckReport cyclic_dual_core(const MixedComplex& primal, const GradedSpacePtr& lam_space,
                             const GradedMap& dplusb, const GradedMap& t, const Support& sup,
                             const Window& w, bool include_series_u) {
    CheckReport rep;
    Window wd = reflected(w);
    Window wd1 = wd;  // shifted window for the [[u-1]] indices 1-s
    wd1.degree_lo = 1 - w.degree_hi;
    wd1.degree_hi = 1 - w.degree_lo;
    MixedComplex dual = dualize(primal, wd1.degree_lo < wd.degree_lo ? wd1 : wd);
    ModuleTable suinv = flavour_homology(dual, Flavour::series_uinv, wd1);
    ModuleTable pu = flavour_homology(dual, Flavour::poly_u, wd);
    ModuleTable su = flavour_homology(dual, Flavour::series_u, wd);
    auto lam = lambda_dual_dims(lam_space, dplusb, t, sup, wd.degree_lo - w.margin,
                                wd.degree_hi + w.margin);

    for (int s = w.degree_lo; s <= w.degree_hi; ++s) {
        // HC_{s-1}^[[u-1]] = HC_{s-1}^lambda = HC_s^[u] (= HC_s^[[u]])
        int a = suinv.at(1 - s).dim;
        int b = lam.count(-s) ? lam.at(-s) : 0;  // H^{-(s-1)-1} = H^{-s}
        int c = pu.at(-s).dim;
        bool ok = (a == b && b == c);
        std::string vals = std::to_string(a) + "/" + std::to_string(b) + "/" + std::to_string(c);
        if (include_series_u && su.at(-s).trust == Trust::exact) {
            int d = su.at(-s).dim;
            ok = ok && (c == d);
            vals += "/" + std::to_string(d);
        }
        rep.add("cyclic cohomology presentations agree at " + std::to_string(s), ok,
                ok ? "" : vals);
    }
    return rep;
}

}  // namespace

CheckReport cyclic_dual_check(const CyclicComplex& cc, Convention conv, const Window& w) {
    DerivedOperators ops = derive_operators(cc, conv);
    MixedComplex primal(ops.total.space, ops.d.plus(ops.b), ops.B, cc.total_support);
    return cyclic_dual_core(primal, ops.total.space, ops.d.plus(ops.b), ops.t, cc.total_support,
                            w, true);
}

CheckReport cyclic_dual_check(const DgaSpec& A, const Window& w) {
    auto [clo, chi] = required_degree_range_all(w);
    int lo = std::min({clo, -chi, -1}), hi = std::max({chi, -clo, 1});  // both reflections
    MixedComplex red = reduced_mixed(A, Convention::loday, lo, hi);
    LambdaQuotient lq = reduced_lambda_complex(A, Convention::loday, lo, hi);
    // the [[u]]-cohomology leg is not box-computable on complexes that are
    // unbounded below on the dual side; the three other presentations are
    CheckReport rep = cyclic_dual_core(red, lq.space, lq.diff, lq.t, lq.support, w, false);

    // the transpose pipeline reproduces the reflected-primal Connes table
    Window wq = w;
    auto lam = lambda_dual_dims(lq.space, lq.diff, lq.t, lq.support, -w.degree_hi - 2,
                                -w.degree_lo + 2);
    DimTable primal_lam = reduced_connes_table(A, Convention::loday, wq);
    for (int s = w.degree_lo; s <= w.degree_hi; ++s) {
        int got = lam.count(-s - 1) ? lam.at(-s - 1) : 0;  // HC^lambda_s = H^{-s-1}
        int want = primal_lam.dims.count(s) ? primal_lam.dims.at(s) : 0;
        bool ok = (got == want);
        rep.add("dual lambda table reflects the primal one at " + std::to_string(s), ok,
                ok ? "" : std::to_string(got) + " vs " + std::to_string(want));
    }
    return rep;
}

}  // namespace cychom
