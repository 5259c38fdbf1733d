#include "cychom/mixed.hpp"

#include <algorithm>

namespace cychom {

MixedComplex::MixedComplex(GradedSpacePtr space, GradedMap delta, GradedMap dd, Support support)
    : space_(std::move(space)), delta_(std::move(delta)), dd_(std::move(dd)), support_(support) {
    if (delta_.degree() != 1) throw InvalidComplex("MixedComplex: delta must have degree +1");
    if (dd_.degree() != -1) throw InvalidComplex("MixedComplex: D must have degree -1");
    if (!(*delta_.source() == *space_) || !(*dd_.source() == *space_) ||
        !(*delta_.target() == *space_) || !(*dd_.target() == *space_))
        throw InvalidComplex("MixedComplex: maps must be endomorphisms of the space");
}

bool MixedComplex::possibly_nonzero(int k) const {
    if (support_.materialized(k)) return space_->dim(k) > 0 || support_.incomplete.count(k) > 0;
    return !support_.known_zero(k);
}

bool MixedComplex::possibly_nonzero_at_or_below(int k) const {
    if (k < support_.lo) return !support_.zero_below;
    if (!support_.zero_below) return true;
    for (int j = support_.lo; j <= std::min(k, support_.hi); ++j)
        if (possibly_nonzero(j)) return true;
    return k > support_.hi && !support_.zero_above;
}

bool MixedComplex::possibly_nonzero_at_or_above(int k) const {
    if (k > support_.hi) return !support_.zero_above;
    if (!support_.zero_above) return true;
    for (int j = std::max(k, support_.lo); j <= support_.hi; ++j)
        if (possibly_nonzero(j)) return true;
    return k < support_.lo && !support_.zero_below;
}

namespace {

std::string first_failing_label(const GradedMap& composite, int k) {
    SparseMatrix b = composite.block(k);
    for (int j = 0; j < b.cols(); ++j)
        if (!b.column(j).is_zero()) return composite.source()->label(k, j);
    return "";
}

}  // namespace

CheckReport validate_mixed(const MixedComplex& m) {
    CheckReport r;
    const Support& s = m.support();
    GradedMap d2 = m.delta().compose(m.delta());
    GradedMap dd2 = m.D().compose(m.D());
    GradedMap anti = m.delta().compose(m.D()).plus(m.D().compose(m.delta()));

    bool p1 = true, p2 = true, p3 = true;
    std::string w1, w2, w3;
    for (int k = s.lo; k <= s.hi; ++k) {
        // only assert where both consecutive blocks are known
        if (m.delta_known(k) && m.delta_known(k + 1) && !d2.block(k).is_zero() && p1) {
            p1 = false;
            w1 = first_failing_label(d2, k) + " at degree " + std::to_string(k);
        }
        if (m.d_known(k) && m.d_known(k - 1) && !dd2.block(k).is_zero() && p2) {
            p2 = false;
            w2 = first_failing_label(dd2, k) + " at degree " + std::to_string(k);
        }
        if (m.delta_known(k) && m.d_known(k) && m.d_known(k + 1) && m.delta_known(k - 1) &&
            !anti.block(k).is_zero() && p3) {
            p3 = false;
            w3 = first_failing_label(anti, k) + " at degree " + std::to_string(k);
        }
    }
    r.add("delta^2 = 0", p1, w1);
    r.add("D^2 = 0", p2, w2);
    r.add("delta D + D delta = 0", p3, w3);
    return r;
}

// ---------------------------------------------------------------------------

namespace {

const FlavourTraits kTraits[] = {
    {"[[u,u-1]]", "C[[u,u-1]]", false, false, true, true, true},
    {"[[u,u-1]", "C[[u,u-1]", false, false, true, false, true},
    {"[u,u-1]]", "C[u,u-1]]", false, false, false, true, true},
    {"[u,u-1]", "C[u,u-1]", false, false, false, false, true},
    {"[[u]]", "C[[u]]", true, false, true, false, false},
    {"[u]", "C[u]", true, false, false, false, false},
    {"[[u-1]]", "C[[u,u-1]]/uC[[u]]", false, true, false, true, false},
    {"[u-1]", "C[u,u-1]/uC[u]", false, true, false, false, false},
};

const std::vector<Flavour> kAll = {
    Flavour::laurent_series, Flavour::series_u_poly_uinv, Flavour::poly_u_series_uinv,
    Flavour::laurent_poly,   Flavour::series_u,           Flavour::poly_u,
    Flavour::series_uinv,    Flavour::poly_uinv,
};

}  // namespace

const FlavourTraits& flavour_traits(Flavour f) { return kTraits[static_cast<int>(f)]; }

const std::vector<Flavour>& all_flavours() { return kAll; }

Flavour flavour_from_name(const std::string& name) {
    for (Flavour f : kAll)
        if (name == flavour_traits(f).name) return f;
    if (name == "borel") return Flavour::series_u;
    if (name == "goodwillie") return Flavour::series_u_poly_uinv;
    if (name == "nilpotent") return Flavour::poly_uinv;
    if (name == "jones-petrack") return Flavour::laurent_series;
    throw UnknownName("unknown flavour '" + name + "'");
}

// ---------------------------------------------------------------------------

MixedMorphism::MixedMorphism(MixedComplex src, MixedComplex tgt, GradedMap f)
    : source(std::move(src)), target(std::move(tgt)), map(std::move(f)) {
    if (map.degree() != 0) throw NotAMorphism("MixedMorphism: map must have degree 0");
}

CheckReport validate_morphism(const MixedMorphism& f, int lo, int hi) {
    CheckReport r;
    GradedMap cd = f.target.delta().compose(f.map).plus(f.map.compose(f.source.delta()).scaled(Rational(-1)));
    GradedMap cD = f.target.D().compose(f.map).plus(f.map.compose(f.source.D()).scaled(Rational(-1)));
    bool pd = true, pD = true;
    std::string wd, wD;
    for (int k = lo; k <= hi; ++k) {
        if (pd && f.source.delta_known(k) && f.target.delta_known(k) && !cd.block(k).is_zero()) {
            pd = false;
            wd = first_failing_label(cd, k) + " at degree " + std::to_string(k);
        }
        if (pD && f.source.d_known(k) && f.target.d_known(k) && !cD.block(k).is_zero()) {
            pD = false;
            wD = first_failing_label(cD, k) + " at degree " + std::to_string(k);
        }
    }
    r.add("commutes with delta", pd, wd);
    r.add("commutes with D", pD, wD);
    return r;
}

// ---------------------------------------------------------------------------
// D-subquotients

std::map<int, int> d_subquotient_homology(const MixedComplex& m, DSubquotient which, const Window& w) {
    w.validate();
    std::map<int, int> out;
    SubquotientPresentation p;
    p.ambient = m.space_ptr();
    int lo = w.degree_lo - w.margin, hi = w.degree_hi + w.margin;
    for (int k = lo; k <= hi; ++k) {
        int n = m.space().dim(k);
        SparseMatrix full = SparseMatrix::identity(n);
        SparseMatrix im = m.D().block(k + 1);  // D: C^{k+1} -> C^k
        SparseMatrix ker = kernel(m.D().block(k));
        switch (which) {
            case DSubquotient::im_d: p.sub[k] = im; break;
            case DSubquotient::ker_d: p.sub[k] = ker; break;
            case DSubquotient::ker_mod_im:
                p.sub[k] = ker;
                p.den[k] = im;
                break;
            case DSubquotient::c_mod_im:
                p.sub[k] = full;
                p.den[k] = im;
                break;
            case DSubquotient::c_mod_ker:
                p.sub[k] = full;
                p.den[k] = ker;
                break;
        }
    }
    for (int k = w.degree_lo; k <= w.degree_hi; ++k)
        out[k] = subquotient_homology_dim(p, m.delta(), k);
    return out;
}

// ---------------------------------------------------------------------------
// Derived constructions

namespace {

Support merge_supports(const Support& a, const Support& b) {
    // keep every degree where both sides are known (materialized or known zero)
    constexpr long kInf = 1L << 40;
    long klo = std::max(a.zero_below ? -kInf : a.lo, b.zero_below ? -kInf : b.lo);
    long khi = std::min(a.zero_above ? kInf : a.hi, b.zero_above ? kInf : b.hi);
    Support s;
    s.lo = static_cast<int>(std::max(klo, static_cast<long>(std::min(a.lo, b.lo))));
    s.hi = static_cast<int>(std::min(khi, static_cast<long>(std::max(a.hi, b.hi))));
    s.zero_below = a.zero_below && b.zero_below;
    s.zero_above = a.zero_above && b.zero_above;
    for (int k : a.incomplete)
        if (k >= s.lo && k <= s.hi) s.incomplete.insert(k);
    for (int k : b.incomplete)
        if (k >= s.lo && k <= s.hi) s.incomplete.insert(k);
    return s;
}

}  // namespace

MixedComplex direct_sum(const MixedComplex& a, const MixedComplex& b) {
    Support s = merge_supports(a.support(), b.support());
    std::map<int, std::vector<std::string>> basis;
    for (int k = s.lo; k <= s.hi; ++k) {
        for (auto& l : a.space().basis(k)) basis[k].push_back("l." + l);
        for (auto& l : b.space().basis(k)) basis[k].push_back("r." + l);
    }
    auto sp = make_space(std::move(basis));
    GradedMap delta(sp, sp, 1), dd(sp, sp, -1);
    auto copy_into = [&sp, &s](GradedMap& out, const GradedMap& in, const GradedSpace& side,
                               const std::string& pre) {
        for (int k = s.lo; k <= s.hi; ++k) {
            if (k + out.degree() < s.lo || k + out.degree() > s.hi) continue;
            SparseMatrix blk = in.block(k);
            for (int j = 0; j < blk.cols(); ++j)
                for (auto& [r, v] : blk.column(j).entries())
                    out.add(k, pre + side.basis(k)[j], pre + in.target()->basis(k + out.degree())[r], v);
        }
    };
    copy_into(delta, a.delta(), a.space(), "l.");
    copy_into(delta, b.delta(), b.space(), "r.");
    copy_into(dd, a.D(), a.space(), "l.");
    copy_into(dd, b.D(), b.space(), "r.");
    return MixedComplex(sp, std::move(delta), std::move(dd), s);
}

MixedComplex shift(const MixedComplex& a, int sdeg) {
    // C[s]^k = C^{k+s}; the differentials are carried over unchanged, which
    // again satisfies the mixed complex axioms.
    Support s = a.support();
    s.lo -= sdeg;
    s.hi -= sdeg;
    std::set<int> inc;
    for (int k : s.incomplete) inc.insert(k - sdeg);
    s.incomplete = std::move(inc);
    std::map<int, std::vector<std::string>> basis;
    for (int k = s.lo; k <= s.hi; ++k)
        for (auto& l : a.space().basis(k + sdeg)) basis[k].push_back(l);
    auto sp = make_space(std::move(basis));
    GradedMap delta(sp, sp, 1), dd(sp, sp, -1);
    for (int k = s.lo; k <= s.hi; ++k) {
        if (k + 1 <= s.hi) delta.set_block(k, a.delta().block(k + sdeg));
        if (k - 1 >= s.lo) dd.set_block(k, a.D().block(k + sdeg));
    }
    return MixedComplex(sp, std::move(delta), std::move(dd), s);
}

MixedComplex mapping_cone(const MixedMorphism& f) {
    // cone(f)^k = src^{k+1} ⊕ tgt^k with
    //   delta(x, y) = (-delta x, delta y + f x),   D(x, y) = (-D x, D y).
    const MixedComplex& A = f.source;
    const MixedComplex& B = f.target;
    Support sa = A.support();
    sa.lo -= 1;
    sa.hi -= 1;
    std::set<int> inc;
    for (int k : sa.incomplete) inc.insert(k - 1);
    sa.incomplete = std::move(inc);
    Support s = merge_supports(sa, B.support());
    std::map<int, std::vector<std::string>> basis;
    for (int k = s.lo; k <= s.hi; ++k) {
        for (auto& l : A.space().basis(k + 1)) basis[k].push_back("s." + l);
        for (auto& l : B.space().basis(k)) basis[k].push_back("t." + l);
    }
    auto sp = make_space(std::move(basis));
    GradedMap delta(sp, sp, 1), dd(sp, sp, -1);
    for (int k = s.lo; k <= s.hi; ++k) {
        auto emit = [&](const GradedMap& g, int srcdeg, const std::string& pre_in,
                        const std::string& pre_out, const Rational& scale, int out_deg) {
            if (k + out_deg < s.lo || k + out_deg > s.hi) return;
            SparseMatrix blk = g.block(srcdeg);
            for (int j = 0; j < blk.cols(); ++j)
                for (auto& [r, v] : blk.column(j).entries()) {
                    GradedMap& target_map = (out_deg == 1) ? delta : dd;
                    target_map.add(k, pre_in + g.source()->basis(srcdeg)[j],
                                   pre_out + g.target()->basis(srcdeg + g.degree())[r], v * scale);
                }
        };
        emit(A.delta(), k + 1, "s.", "s.", Rational(-1), 1);
        emit(B.delta(), k, "t.", "t.", Rational(1), 1);
        emit(f.map, k + 1, "s.", "t.", Rational(1), 1);
        emit(A.D(), k + 1, "s.", "s.", Rational(-1), -1);
        emit(B.D(), k, "t.", "t.", Rational(1), -1);
    }
    return MixedComplex(sp, std::move(delta), std::move(dd), s);
}

}  // namespace cychom
