#include <algorithm>

#include "cychom/mixed.hpp"

namespace cychom {

int TruncComplex::dim(int k) const {
    auto it = labels.find(k);
    return it == labels.end() ? 0 : static_cast<int>(it->second.size());
}

SparseMatrix TruncComplex::d_at(int k) const {
    auto it = d.find(k);
    if (it != d.end()) return it->second;
    return SparseMatrix(dim(k + 1), dim(k));
}

SparseMatrix TruncComplex::overflow_at(int k) const {
    auto it = overflow.find(k);
    if (it != overflow.end()) return it->second;
    return SparseMatrix(0, dim(k));
}

SparseMatrix TruncComplex::quot_at(int k) const {
    auto it = quot.find(k);
    if (it != quot.end()) return it->second;
    return SparseMatrix(dim(k), 0);
}

SparseMatrix TruncComplex::sub_at(int k) const {
    auto it = sub.find(k);
    if (it != sub.end()) return it->second;
    return SparseMatrix::identity(dim(k));
}

bool TruncComplex::complete_at(int k) const {
    auto it = complete.find(k);
    return it != complete.end() && it->second;
}

void TruncComplex::finalize() {
    // Largest subcomplex inside ker(overflow): working top-down,
    // S_k = { x : O_k x = 0 and d_k x ∈ span(S_{k+1} | Q_{k+1}) }.
    bool any = false;
    for (auto& [k, o] : overflow)
        if (o.rows() > 0) any = true;
    if (!any) return;
    SparseMatrix above = SparseMatrix::identity(dim(hi + 1));  // no constraint past the edge
    for (int k = hi; k >= lo; --k) {
        SparseMatrix O = overflow_at(k);
        SparseMatrix allowed = above.hstack(quot_at(k + 1));
        SparseMatrix stacked = d_at(k).hstack(allowed.scaled(Rational(-1)));
        // pad overflow rows with zeros over the allowed-columns block
        SparseMatrix Opad = O.hstack(SparseMatrix(O.rows(), allowed.cols()));
        SparseMatrix K = kernel(stacked.vstack(Opad));
        SparseMatrix S(dim(k), K.cols());
        for (int j = 0; j < K.cols(); ++j) {
            std::vector<SparseVec::Entry> xs;
            for (auto& [r, v] : K.column(j).entries())
                if (r < dim(k)) xs.emplace_back(r, v);
            S.set_column(j, SparseVec(std::move(xs)));
        }
        S = column_reduce(S);
        if (S.cols() < dim(k)) sub[k] = S;
        above = sub_at(k);
    }
}

const SliceHomology::Deg& SliceHomology::at(int k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;

    Deg deg;
    SparseMatrix Sk = c_->sub_at(k);
    SparseMatrix Sk_1 = c_->sub_at(k - 1);
    SparseMatrix Qk = c_->quot_at(k);
    SparseMatrix Qk1 = c_->quot_at(k + 1);

    // cycles: x = Sk y with d x ∈ span(Q_{k+1})
    SparseMatrix dS = c_->d_at(k) * Sk;
    SparseMatrix K = kernel(dS.hstack(Qk1.scaled(Rational(-1))));
    SparseMatrix zlift(c_->dim(k), K.cols());
    for (int j = 0; j < K.cols(); ++j) {
        std::vector<SparseVec::Entry> ys;
        for (auto& [r, v] : K.column(j).entries())
            if (r < Sk.cols()) ys.emplace_back(r, v);
        zlift.set_column(j, Sk.apply(SparseVec(std::move(ys))));
    }
    deg.cycles = column_reduce(zlift);

    SparseMatrix bnd = (c_->d_at(k - 1) * Sk_1).hstack(Qk);
    deg.basis = column_reduce(bnd);
    // representatives: cycles extending the boundary+quotient span
    SparseMatrix stacked = deg.basis.hstack(deg.cycles);
    std::vector<int> prof = column_rank_profile(stacked);
    std::vector<int> reps;
    for (int c : prof)
        if (c >= deg.basis.cols()) reps.push_back(c - deg.basis.cols());
    deg.reps = deg.cycles.columns_subset(reps);
    deg.dim = static_cast<int>(reps.size());
    return cache_.emplace(k, std::move(deg)).first->second;
}

std::optional<SparseMatrix> SliceHomology::classes_of(int k, const SparseMatrix& vectors) {
    const Deg& deg = at(k);
    SparseMatrix basis = deg.basis.hstack(deg.reps);
    auto sol = solve(basis, vectors);
    if (!sol) return std::nullopt;
    SparseMatrix M(deg.dim, vectors.cols());
    for (int j = 0; j < vectors.cols(); ++j)
        for (auto& [r, v] : sol->column(j).entries())
            if (r >= deg.basis.cols()) M.add(r - deg.basis.cols(), j, v);
    return M;
}

std::optional<SparseMatrix> SliceHomology::classes_of_mod(int k, const SparseMatrix& vectors,
                                                          const SparseMatrix& extra) {
    if (extra.cols() == 0) return classes_of(k, vectors);
    if (induced_rank(k, extra) != 0) return std::nullopt;  // extra carries homology
    const Deg& deg = at(k);
    SparseMatrix basis = deg.basis.hstack(extra);
    int split = basis.cols();
    basis = basis.hstack(deg.reps);
    auto sol = solve(basis, vectors);
    if (!sol) return std::nullopt;
    SparseMatrix M(deg.dim, vectors.cols());
    for (int j = 0; j < vectors.cols(); ++j)
        for (auto& [r, v] : sol->column(j).entries())
            if (r >= split) M.add(r - split, j, v);
    return M;
}

int SliceHomology::induced_rank(int k, const SparseMatrix& images) {
    const Deg& deg = at(k);
    SparseMatrix P = column_space_intersection(images, deg.cycles);
    if (P.cols() == 0) return 0;
    return rank(deg.basis.hstack(P)) - rank(deg.basis);
}

// ---------------------------------------------------------------------------
// Flavour slice assembly

SparseMatrix FlavourSlice::u_at(int k) const {
    auto it = u_act.find(k);
    if (it != u_act.end()) return it->second;
    return SparseMatrix(cplx.dim(k + 2), cplx.dim(k));
}

int FlavourSlice::cell_index(int k, int upow, int idx) const {
    auto it = cells.find(k);
    if (it == cells.end()) return -1;
    for (size_t j = 0; j < it->second.size(); ++j)
        if (it->second[j].upow == upow && it->second[j].idx == idx) return static_cast<int>(j);
    return -1;
}

SparseMatrix FlavourSlice::bottom_layer(int k) const {
    int n = cplx.dim(k);
    if (!flavour_traits(flavour).down_series) return SparseMatrix(n, 0);
    std::vector<int> idx;
    auto it = cells.find(k);
    if (it != cells.end())
        for (size_t j = 0; j < it->second.size(); ++j)
            if (it->second[j].upow == ilo) idx.push_back(static_cast<int>(j));
    SparseMatrix M(n, static_cast<int>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) M.add(idx[j], static_cast<int>(j), Rational(1));
    return M;
}

std::pair<int, int> required_degree_range(Flavour f, const Window& w) {
    // +2 covers the internal margin widening used for u-rank computation and
    // +4 the persistent-image widening on window-cut polynomial directions
    const FlavourTraits& t = flavour_traits(f);
    int m = w.margin + 2;
    int ihi = t.upper_capped ? 0 : w.upow_hi;
    int ilo = t.lower_bounded ? 0 : w.upow_lo;
    return {w.degree_lo - m - 2 * ihi - 1, w.degree_hi + m - 2 * ilo + 5};
}

std::pair<int, int> required_degree_range_all(const Window& w) {
    int m = w.margin + 2;
    return {w.degree_lo - m - 2 * w.upow_hi - 1, w.degree_hi + m - 2 * w.upow_lo + 5};
}

FlavourSlice assemble_flavour(const MixedComplex& m, Flavour f, const Window& w) {
    w.validate();
    const FlavourTraits& traits = flavour_traits(f);
    FlavourSlice sl;
    sl.flavour = f;
    sl.window = w;
    sl.ilo = traits.lower_bounded ? 0 : w.upow_lo;
    sl.ihi = traits.upper_capped ? 0 : w.upow_hi;
    const int Dlo = w.degree_lo - w.margin;
    const int Dhi = w.degree_hi + w.margin;
    sl.cplx.lo = Dlo;
    sl.cplx.hi = Dhi;
    const Support& sup = m.support();

    // cell enumeration
    for (int k = Dlo; k <= Dhi; ++k) {
        bool complete = true;
        auto& cl = sl.cells[k];
        for (int i = sl.ilo; i <= sl.ihi; ++i) {
            int cdeg = k - 2 * i;
            if (sup.known_zero(cdeg)) continue;
            if (!sup.materialized(cdeg)) {
                complete = false;
                continue;
            }
            if (sup.incomplete.count(cdeg)) complete = false;
            int n = m.space().dim(cdeg);
            for (int idx = 0; idx < n; ++idx) cl.push_back({i, cdeg, idx});
        }
        // admitted exponents beyond the window
        if (!traits.upper_capped && m.possibly_nonzero_at_or_below(k - 2 * (sl.ihi + 1)))
            complete = false;
        if (!traits.lower_bounded && m.possibly_nonzero_at_or_above(k - 2 * (sl.ilo - 1)))
            complete = false;
        sl.cplx.complete[k] = complete;
        std::vector<std::string> labs;
        labs.reserve(cl.size());
        for (auto& c : cl)
            labs.push_back(m.space().label(c.cdeg, c.idx) + "*u^" + std::to_string(c.upow));
        sl.cplx.labels[k] = std::move(labs);
    }

    // cell lookup per degree: (upow, idx) -> position
    std::map<int, std::map<std::pair<int, int>, int>> pos;
    for (auto& [k, cl] : sl.cells)
        for (size_t j = 0; j < cl.size(); ++j) pos[k][{cl[j].upow, cl[j].idx}] = static_cast<int>(j);

    // differential, overflow, u-action
    for (int k = Dlo; k <= Dhi; ++k) {
        auto& cl = sl.cells[k];
        if (cl.empty()) continue;
        SparseMatrix dk(sl.cplx.dim(k + 1), sl.cplx.dim(k));
        std::map<std::tuple<int, int, int>, int> orows;  // escape target / sentinel -> row
        std::vector<std::tuple<int, int, Rational>> oentries;
        SparseMatrix uk(sl.cplx.dim(k + 2), sl.cplx.dim(k));

        for (size_t j = 0; j < cl.size(); ++j) {
            const auto& cell = cl[j];
            // delta part: (c, i) -> (delta c, i) at degree k+1
            if (m.delta_known(cell.cdeg)) {
                if (k + 1 <= Dhi && sup.materialized(cell.cdeg + 1)) {
                    SparseVec img = m.delta().block(cell.cdeg).column(cell.idx);
                    for (auto& [ti, v] : img.entries()) {
                        auto it = pos[k + 1].find({cell.upow, ti});
                        if (it != pos[k + 1].end()) dk.add(it->second, static_cast<int>(j), v);
                    }
                }
            }
            // uD part: (c, i) -> (D c, i+1) at degree k+1
            int i2 = cell.upow + 1;
            bool definitional_cut = traits.upper_capped && i2 > 0;
            if (!definitional_cut) {
                bool escaped = i2 > sl.ihi;
                bool img_known = m.d_known(cell.cdeg);
                if (img_known && !escaped) {
                    if (k + 1 <= Dhi && sup.materialized(cell.cdeg - 1)) {
                        SparseVec img = m.D().block(cell.cdeg).column(cell.idx);
                        for (auto& [ti, v] : img.entries()) {
                            auto it = pos[k + 1].find({i2, ti});
                            if (it != pos[k + 1].end()) dk.add(it->second, static_cast<int>(j), v);
                        }
                    } else if (k + 1 > Dhi) {
                        // total-degree edge: margin keeps this away from reports
                    }
                } else if (!traits.up_series) {
                    // polynomial direction: constrain the generator out of the
                    // subcomplex instead of dropping image terms
                    if (img_known && sup.materialized(cell.cdeg - 1)) {
                        SparseVec img = m.D().block(cell.cdeg).column(cell.idx);
                        for (auto& [ti, v] : img.entries()) {
                            auto key = std::make_tuple(i2, cell.cdeg - 1, ti);
                            auto it = orows.find(key);
                            int row;
                            if (it == orows.end()) {
                                row = static_cast<int>(orows.size());
                                orows.emplace(key, row);
                            } else {
                                row = it->second;
                            }
                            oentries.emplace_back(row, static_cast<int>(j), v);
                        }
                    } else {
                        // image unknown: exclude this generator outright
                        auto key = std::make_tuple(-1000000 - static_cast<int>(j), 0, 0);
                        int row = static_cast<int>(orows.size());
                        orows.emplace(key, row);
                        oentries.emplace_back(row, static_cast<int>(j), Rational(1));
                    }
                }
                // series direction: escaped/unknown terms are dropped (quotient
                // truncation); completeness flags already reflect it
            }
            // u action: (c, i) -> (c, i+1) at degree k+2
            if (!(traits.upper_capped && i2 > 0) && i2 <= sl.ihi && k + 2 <= Dhi) {
                auto it = pos[k + 2].find({i2, cell.idx});
                if (it != pos[k + 2].end()) uk.add(it->second, static_cast<int>(j), Rational(1));
            }
        }
        if (!dk.is_zero() || sl.cplx.dim(k + 1) > 0) sl.cplx.d[k] = std::move(dk);
        if (!orows.empty()) {
            SparseMatrix O(static_cast<int>(orows.size()), sl.cplx.dim(k));
            for (auto& [r, c, v] : oentries) O.add(r, c, v);
            sl.cplx.overflow[k] = std::move(O);
        }
        if (!uk.is_zero()) sl.u_act[k] = std::move(uk);
    }

    // quotient columns at the lower window edge for series-in-u^-1 directions:
    // the missing layers below generate, inside the box, the D-images arriving
    // at the bottom layer.
    if (traits.down_series) {
        for (int k = Dlo; k <= Dhi; ++k) {
            int cdeg0 = k - 2 * sl.ilo;       // bottom-layer coefficient degree
            int csrc = cdeg0 + 1;             // coefficients of the missing layer below
            if (!sup.materialized(cdeg0)) continue;
            if (m.space().dim(cdeg0) == 0) continue;
            if (!m.possibly_nonzero(csrc)) continue;
            if (!sup.materialized(csrc) || !m.d_known(csrc)) {
                sl.cplx.complete[k] = false;
                continue;
            }
            SparseMatrix D = m.D().block(csrc);  // C^{csrc} -> C^{cdeg0}
            if (D.is_zero()) continue;
            SparseMatrix lifted(sl.cplx.dim(k), D.cols());
            for (int j = 0; j < D.cols(); ++j) {
                std::vector<SparseVec::Entry> col;
                for (auto& [ti, v] : D.column(j).entries()) {
                    auto it = pos[k].find({sl.ilo, ti});
                    if (it != pos[k].end()) col.emplace_back(it->second, v);
                }
                lifted.set_column(j, SparseVec(std::move(col)));
            }
            lifted = column_reduce(lifted);
            if (lifted.cols() > 0) sl.cplx.quot[k] = std::move(lifted);
        }
    }

    sl.cplx.finalize();
    return sl;
}

TruncComplex complex_slice(const MixedComplex& m, const Window& w) {
    w.validate();
    TruncComplex c;
    c.lo = w.degree_lo - w.margin;
    c.hi = w.degree_hi + w.margin;
    const Support& sup = m.support();
    for (int k = c.lo; k <= c.hi; ++k) {
        std::vector<std::string> labs;
        if (sup.materialized(k)) labs = m.space().basis(k);
        bool complete = sup.complete_at(k) || sup.known_zero(k);
        c.complete[k] = complete;
        c.labels[k] = std::move(labs);
    }
    for (int k = c.lo; k < c.hi; ++k) {
        if (!sup.materialized(k) || !sup.materialized(k + 1)) continue;
        c.d[k] = m.delta().block(k);
    }
    return c;
}

// ---------------------------------------------------------------------------

namespace {

Trust trust_at(const TruncComplex& c, int k) {
    return (c.complete_at(k - 1) && c.complete_at(k) && c.complete_at(k + 1)) ? Trust::exact
                                                                              : Trust::truncated;
}

}  // namespace

ModuleTable flavour_homology(const MixedComplex& m, Flavour f, const Window& w) {
    Window w2 = w;
    w2.margin += 2;  // room for the u-rank computation at the edge degrees
    FlavourSlice sl = assemble_flavour(m, f, w2);
    const FlavourTraits& tr = flavour_traits(f);

    // A finite box over-reports a polynomial-in-u^-1 direction whenever an
    // incoming boundary lives just below the cut; the colimit dimension is
    // the rank of the inclusion-induced map into a widened box.
    bool down_cut = !tr.lower_bounded && !tr.down_series;
    if (down_cut) {
        bool any_below = false;
        for (int k = w.degree_lo - 1; k <= w.degree_hi + 1 && !any_below; ++k)
            if (m.possibly_nonzero_at_or_above(k - 2 * (w2.upow_lo - 1))) any_below = true;
        down_cut = any_below;
    }

    ModuleTable t(w.degree_lo, w.degree_hi);
    if (!down_cut) {
        SliceHomology H(sl.cplx);
        for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
            t.at(k).dim = H.at(k).dim;
            t.at(k).trust = trust_at(sl.cplx, k);
        }
        for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
            if (k - 2 < sl.cplx.lo + 1) continue;
            const auto& src = H.at(k - 2);
            if (src.dim == 0) continue;
            SparseMatrix images = sl.u_at(k - 2) * src.reps;
            auto cls = H.classes_of(k, images);
            if (!cls) cls = H.classes_of_mod(k, images, sl.bottom_layer(k));
            t.at(k).u_rank = cls ? rank(*cls) : H.induced_rank(k, images);
            if (t.at(k).trust == Trust::exact && trust_at(sl.cplx, k - 2) != Trust::exact)
                t.at(k).trust = Trust::truncated;
        }
        return t;
    }

    Window w3 = w2;
    w3.upow_lo -= 2;
    FlavourSlice wide = assemble_flavour(m, f, w3);
    SliceHomology H1(sl.cplx), H2(wide.cplx);
    auto inclusion = [&](int k) {
        SparseMatrix M(wide.cplx.dim(k), sl.cplx.dim(k));
        auto it = sl.cells.find(k);
        if (it == sl.cells.end()) return M;
        for (size_t j = 0; j < it->second.size(); ++j) {
            const auto& c = it->second[j];
            int p = wide.cell_index(k, c.upow, c.idx);
            if (p >= 0) M.add(p, static_cast<int>(j), Rational(1));
        }
        return M;
    };
    auto rank_in_wide = [&](int k, const SparseMatrix& images) {
        auto cls = H2.classes_of(k, images);
        if (!cls) cls = H2.classes_of_mod(k, images, wide.bottom_layer(k));
        return cls ? rank(*cls) : H2.induced_rank(k, images);
    };
    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        t.at(k).dim = rank_in_wide(k, inclusion(k) * H1.at(k).reps);
        t.at(k).trust = trust_at(sl.cplx, k);
    }
    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        if (k - 2 < sl.cplx.lo + 1) continue;
        const auto& src = H1.at(k - 2);
        if (src.dim == 0) continue;
        SparseMatrix images = wide.u_at(k - 2) * inclusion(k - 2) * src.reps;
        t.at(k).u_rank = std::min(rank_in_wide(k, images), t.at(k).dim);
    }
    return t;
}

std::vector<DegreeVerdict> morphism_flavour_map(const MixedMorphism& f, Flavour fl, const Window& w) {
    int lo = w.degree_lo - w.margin, hi = w.degree_hi + w.margin;
    CheckReport v = validate_morphism(f, lo, hi);
    if (!v.all_pass()) throw NotAMorphism("morphism_flavour_map: " + v.failures().front().name);

    Window w2 = w;
    w2.margin += 2;
    FlavourSlice ss = assemble_flavour(f.source, fl, w2);
    FlavourSlice ts = assemble_flavour(f.target, fl, w2);
    SliceHomology Hs(ss.cplx), Ht(ts.cplx);

    std::vector<DegreeVerdict> out;
    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        DegreeVerdict dv;
        dv.degree = k;
        dv.source_dim = Hs.at(k).dim;
        dv.target_dim = Ht.at(k).dim;
        Trust tr = trust_at(ss.cplx, k);
        Trust tr2 = trust_at(ts.cplx, k);
        dv.trust = (tr == Trust::exact && tr2 == Trust::exact) ? Trust::exact : Trust::truncated;

        // chain-level map between the slices: cellwise (f c, i)
        SparseMatrix F(ts.cplx.dim(k), ss.cplx.dim(k));
        auto& cl = ss.cells[k];
        for (size_t j = 0; j < cl.size(); ++j) {
            SparseVec img = f.map.block(cl[j].cdeg).column(cl[j].idx);
            for (auto& [ti, v] : img.entries()) {
                int p = ts.cell_index(k, cl[j].upow, ti);
                if (p >= 0) F.add(p, static_cast<int>(j), v);
            }
        }
        SparseMatrix images = F * Hs.at(k).reps;
        int r = Ht.induced_rank(k, images);
        dv.injective = (r == dv.source_dim);
        dv.surjective = (r == dv.target_dim);
        out.push_back(dv);
    }
    return out;
}

ModuleTable stabilize(const ComplexBuilder& builder, Flavour f, const Window& w,
                      const std::vector<Widening>& schedule) {
    ModuleTable base = flavour_homology(builder(w, -1), f, w);
    bool all_exact = true;
    for (auto& row : base.rows)
        if (row.trust != Trust::exact) all_exact = false;
    if (all_exact || schedule.empty()) return base;

    std::vector<ModuleTable> tables{base};
    for (auto& step : schedule)
        tables.push_back(flavour_homology(builder(step.window, step.cap), f, step.window));

    ModuleTable& last = tables[tables.size() - 1];
    ModuleTable& prev = tables[tables.size() - 2];
    ModuleTable out(w.degree_lo, w.degree_hi);
    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        TableRow a = prev.contains(k) ? prev.at(k) : TableRow{};
        TableRow b = last.contains(k) ? last.at(k) : TableRow{};
        out.at(k) = b;
        if (b.trust == Trust::exact) continue;
        out.at(k).trust = (prev.contains(k) && a.dim == b.dim && a.u_rank == b.u_rank)
                              ? Trust::stabilized
                              : Trust::truncated;
    }
    return out;
}

}  // namespace cychom
