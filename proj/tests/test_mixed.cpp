#include "doctest.h"

#include "cychom/models.hpp"
#include "fixtures.hpp"

using namespace cychom;

namespace {

// expected dimension by parity pattern helpers
bool even_nonneg(int k) { return k >= 0 && k % 2 == 0; }
bool even_nonpos(int k) { return k <= 0 && k % 2 == 0; }
bool even(int k) { return ((k % 2) + 2) % 2 == 0; }
bool odd_negative(int k) { return k < 0 && ((k % 2) + 2) % 2 == 1; }
bool odd_positive(int k) { return k > 0 && ((k % 2) + 2) % 2 == 1; }

void check_dims(const ModuleTable& t, bool (*pattern)(int), const std::string& what) {
    for (int k = t.lo; k <= t.hi; ++k) {
        INFO(what, " degree ", k);
        CHECK(t.at(k).dim == (pattern(k) ? 1 : 0));
    }
}

Window window(int lo, int hi) {
    Window w;
    w.degree_lo = lo;
    w.degree_hi = hi;
    return w;
}

}  // namespace

TEST_CASE("validate_mixed accepts the paper fixtures") {
    CHECK(validate_mixed(fixtures::all_degrees_local(-6, 6)).all_pass());
    CHECK(validate_mixed(fixtures::point_mixed_local(-4, 4)).all_pass());
    CHECK(validate_mixed(es1_mixed(12)).all_pass());
    CHECK(validate_mixed(fixtures::point_hochschild_table(20)).all_pass());
}

TEST_CASE("degree violations are rejected at construction") {
    // D alpha = alpha would be a degree violation; the map builder refuses it
    auto sp = make_space({{1, {"a"}}, {2, {"b"}}});
    GradedMap D(sp, sp, -1);
    CHECK_THROWS_AS(D.add(1, "a", "a", Rational(1)), Error);
    GradedMap delta(sp, sp, 1);
    CHECK_NOTHROW(delta.add(1, "a", "b", Rational(1)));
}

TEST_CASE("mixed axiom failure is reported with a witness") {
    // corrupt ES1: D beta = alpha breaks anticommutation
    FreeGca A({{"a", 1}, {"b", 2}});
    std::map<int, FreeGca::Poly> delta_imgs, d_imgs;
    delta_imgs[0] = FreeGca::Poly{{FreeGca::Mono{0, 1}, Rational(1)}};
    d_imgs[0] = FreeGca::Poly{{A.unit(), Rational(1)}};
    d_imgs[1] = FreeGca::Poly{{FreeGca::Mono{1, 0}, Rational(1)}};  // D b = a
    MixedComplex bad = gca_mixed_complex(A, delta_imgs, d_imgs, 10);
    CheckReport r = validate_mixed(bad);
    CHECK(!r.all_pass());
    bool witness_seen = false;
    for (auto& item : r.items)
        if (!item.pass && !item.witness.empty()) witness_seen = true;
    CHECK(witness_seen);
}

TEST_CASE("point mixed complex: all eight flavour tables") {
    MixedComplex M = point_mixed(-12, 12);
    Window w = window(-6, 6);
    check_dims(flavour_homology(M, Flavour::poly_u, w), even_nonneg, "[u]");
    check_dims(flavour_homology(M, Flavour::series_u, w), even_nonneg, "[[u]]");
    check_dims(flavour_homology(M, Flavour::poly_uinv, w), even_nonpos, "[u-1]");
    check_dims(flavour_homology(M, Flavour::series_uinv, w), even_nonpos, "[[u-1]]");
    check_dims(flavour_homology(M, Flavour::laurent_poly, w), even, "[u,u-1]");
    check_dims(flavour_homology(M, Flavour::laurent_series, w), even, "[[u,u-1]]");
    check_dims(flavour_homology(M, Flavour::series_u_poly_uinv, w), even, "[[u,u-1]");
    check_dims(flavour_homology(M, Flavour::poly_u_series_uinv, w), even, "[u,u-1]]");
    // all-exact trust for the point (finite admitted sets? series sides are
    // bounded by the one-degree support)
    ModuleTable t = flavour_homology(M, Flavour::series_u, w);
    for (auto& row : t.rows) CHECK(row.trust == Trust::exact);
}

TEST_CASE("trivial dga Hochschild table: all eight flavours match the closed forms") {
    MixedComplex M = fixtures::point_hochschild_table(64);
    Window w = window(-6, 6);
    check_dims(flavour_homology(M, Flavour::poly_u, w), odd_negative, "[u]");
    check_dims(flavour_homology(M, Flavour::series_u, w), even_nonneg, "[[u]]");
    check_dims(flavour_homology(M, Flavour::poly_uinv, w), even_nonpos, "[u-1]");
    check_dims(flavour_homology(M, Flavour::series_uinv, w), even_nonpos, "[[u-1]]");
    auto zero_table = [&](Flavour f, const char* nm) {
        ModuleTable t = flavour_homology(M, f, w);
        for (int k = t.lo; k <= t.hi; ++k) {
            INFO(nm, " degree ", k);
            CHECK(t.at(k).dim == 0);
        }
    };
    zero_table(Flavour::laurent_poly, "[u,u-1]");
    zero_table(Flavour::poly_u_series_uinv, "[u,u-1]]");
    check_dims(flavour_homology(M, Flavour::laurent_series, w), even, "[[u,u-1]]");
    check_dims(flavour_homology(M, Flavour::series_u_poly_uinv, w), even, "[[u,u-1]");
}

TEST_CASE("trivial dga Hochschild table: u-ranks") {
    MixedComplex M = fixtures::point_hochschild_table(64);
    Window w = window(-6, 6);
    // [u]: R[u^-1][-1], u acts with rank one into each populated degree
    ModuleTable t = flavour_homology(M, Flavour::poly_u, w);
    for (int k = -5; k <= -1; ++k) CHECK(t.at(k).u_rank == (odd_negative(k) ? 1 : 0));
    // [[u]]: R[u], rank one into 2, 4, 6
    t = flavour_homology(M, Flavour::series_u, w);
    for (int k : {2, 4, 6}) CHECK(t.at(k).u_rank == 1);
    CHECK(t.at(0).u_rank == 0);
    // [u-1]: truncation map, rank one into 0, -2, -4 and zero into 2
    t = flavour_homology(M, Flavour::poly_uinv, w);
    for (int k : {0, -2, -4, -6}) CHECK(t.at(k).u_rank == 1);
    CHECK(t.at(2).u_rank == 0);
    // Laurent flavours: bijective everywhere it is populated
    t = flavour_homology(M, Flavour::laurent_series, w);
    for (int k = -6; k <= 6; ++k) CHECK(t.at(k).u_rank == (even(k) ? 1 : 0));
}

TEST_CASE("ES1 model: flavour tables from the closed forms") {
    MixedComplex M = es1_mixed(40);
    Window w = window(-6, 6);
    check_dims(flavour_homology(M, Flavour::series_u, w), even_nonneg, "[[u]]");
    check_dims(flavour_homology(M, Flavour::poly_u, w), even_nonneg, "[u]");
    check_dims(flavour_homology(M, Flavour::poly_uinv, w), even_nonpos, "[u-1]");
    auto zt = [&](Flavour f, const char* nm) {
        ModuleTable t = flavour_homology(M, f, w);
        for (int k = t.lo; k <= t.hi; ++k) {
            INFO(nm, " degree ", k);
            CHECK(t.at(k).dim == 0);
        }
    };
    zt(Flavour::laurent_series, "[[u,u-1]]");
    zt(Flavour::poly_u_series_uinv, "[u,u-1]]");
    check_dims(flavour_homology(M, Flavour::series_uinv, w), odd_positive, "[[u-1]]");
    check_dims(flavour_homology(M, Flavour::laurent_poly, w), even, "[u,u-1]");
    check_dims(flavour_homology(M, Flavour::series_u_poly_uinv, w), even, "[[u,u-1]");
}

TEST_CASE("ES1 [[u]] u-rank matches the u ~ beta relation") {
    MixedComplex M = es1_mixed(30);
    Window w = window(0, 6);
    ModuleTable t = flavour_homology(M, Flavour::series_u, w);
    for (int k : {0, 2, 4, 6}) CHECK(t.at(k).dim == 1);
    for (int k : {2, 4, 6}) CHECK(t.at(k).u_rank == 1);
    for (int k : {1, 3, 5}) CHECK(t.at(k).dim == 0);
    for (int k : {0, 2, 4, 6}) CHECK(t.at(k).trust == Trust::exact);
}

TEST_CASE("assemble_flavour: point fixture box sizes and completeness") {
    // trivial all-degrees complex, flavour [u], degrees [-2,2], upowers [0,3]:
    // every (k, i) cell in the finite box appears, completeness exact only
    // where the flavour-admitted set is fully inside the window... for the
    // all-degrees complex the admitted set is infinite, so flags must be
    // truncated; the box contents are still the full finite box.
    MixedComplex M = fixtures::all_degrees_local(-40, 40);
    Window w;
    w.degree_lo = -2;
    w.degree_hi = 2;
    w.margin = 1;
    w.upow_lo = 0;
    w.upow_hi = 3;
    FlavourSlice sl = assemble_flavour(M, Flavour::poly_u, w);
    for (int k = -2; k <= 2; ++k) CHECK(sl.cplx.dim(k) == 4);  // i = 0..3
    CHECK(!sl.cplx.complete_at(0));

    // point fixture: admitted sets are finite, so the [u] slice is complete
    MixedComplex P = point_mixed(-20, 20);
    FlavourSlice slp = assemble_flavour(P, Flavour::poly_u, w);
    CHECK(slp.cplx.complete_at(0));
    CHECK(slp.cplx.dim(0) == 1);  // (pt, 0)
    CHECK(slp.cplx.dim(2) == 1);  // (pt, 1)
    CHECK(slp.cplx.dim(1) == 0);
}

TEST_CASE("assemble_flavour: ES1 series-uinv slice contents at degree 1") {
    MixedComplex M = es1_mixed(8);
    Window w;
    w.degree_lo = 0;
    w.degree_hi = 5;
    w.margin = 1;
    w.upow_lo = -6;
    w.upow_hi = 0;
    FlavourSlice sl = assemble_flavour(M, Flavour::series_uinv, w);
    // degree-1 cells: a*u^0, a*b*u^-1, a*b^2*u^-2, a*b^3*u^-3 only
    REQUIRE(sl.cplx.dim(1) == 4);
    auto& labs = sl.cplx.labels.at(1);
    CHECK(std::find(labs.begin(), labs.end(), "a*u^0") != labs.end());
    CHECK(std::find(labs.begin(), labs.end(), "a*b*u^-1") != labs.end());
    CHECK(std::find(labs.begin(), labs.end(), "a*b^2*u^-2") != labs.end());
    CHECK(std::find(labs.begin(), labs.end(), "a*b^3*u^-3") != labs.end());
    CHECK(!sl.cplx.complete_at(1));  // the admitted set continues past the box
}

TEST_CASE("invalid windows are rejected") {
    Window w;
    w.degree_lo = 3;
    w.degree_hi = 1;
    CHECK_THROWS_AS(w.validate(), InvalidWindow);
    Window w2;
    w2.margin = 0;
    CHECK_THROWS_AS(w2.validate(), InvalidWindow);
    Window w3;
    w3.upow_lo = 1;
    CHECK_THROWS_AS(w3.validate(), InvalidWindow);
}

TEST_CASE("slice differential squares to zero on the window interior") {
    for (Flavour f : all_flavours()) {
        MixedComplex M = es1_mixed(40);
        Window w = window(-4, 4);
        FlavourSlice sl = assemble_flavour(M, f, w);
        for (int k = sl.cplx.lo; k + 2 <= sl.cplx.hi; ++k) {
            SparseMatrix sq = sl.cplx.d_at(k + 1) * sl.cplx.d_at(k);
            // on the quotient by Q the square vanishes; check columns land in Q
            SparseMatrix Q = sl.cplx.quot_at(k + 2);
            if (Q.cols() == 0) {
                INFO("flavour ", flavour_traits(f).name, " degree ", k);
                CHECK(sq.is_zero());
            } else {
                CHECK(rank(Q.hstack(sq)) == rank(Q));
            }
        }
    }
}

TEST_CASE("stabilize: exact tables short-circuit, capped tables stabilize") {
    // point fixture is exact everywhere; schedule is a no-op
    ComplexBuilder builder = [](const Window& w, int) {
        auto r = required_degree_range_all(w);
        return point_mixed(r.first, r.second);
    };
    Window w = window(0, 4);
    std::vector<Widening> sched{{w.widened(2), -1}, {w.widened(4), -1}};
    ModuleTable t = stabilize(builder, Flavour::series_u, w, sched);
    for (auto& row : t.rows) CHECK(row.trust == Trust::exact);

    // trivial-dga table with word caps 6, 9, 12 stabilizes at dims 1 along
    // the odd negative degrees
    ComplexBuilder capped = [](const Window& w2, int cap) {
        int words = cap > 0 ? cap : 24;
        return fixtures::point_hochschild_table(words);
    };
    Window w2 = window(-5, -1);
    std::vector<Widening> sched2{{w2, 9}, {w2, 12}};
    // base run with cap 6 via the builder default: emulate by explicit schedule
    ModuleTable t0 = flavour_homology(fixtures::point_hochschild_table(6), Flavour::poly_u, w2);
    ModuleTable t2 = stabilize(capped, Flavour::poly_u, w2, sched2);
    for (int k = -5; k <= -1; ++k) {
        CHECK(t2.at(k).dim == (odd_negative(k) ? 1 : 0));
        CHECK(t2.at(k).trust == Trust::stabilized);
    }
    // the cap-6 run already agrees away from its own materialization edge
    for (int k = -3; k <= -1; ++k) CHECK(t0.at(k).dim == t2.at(k).dim);
}

TEST_CASE("morphism_flavour_map: point onto ES1 witnesses") {
    MixedComplex P = point_mixed(-30, 30);
    MixedComplex E = es1_mixed(40);
    GradedMap f(P.space_ptr(), E.space_ptr(), 0);
    f.add(0, "pt", "1", Rational(1));
    MixedMorphism incl(P, E, f);

    // classical flavours are bijective along the inclusion
    for (Flavour fl : {Flavour::series_u, Flavour::series_u_poly_uinv, Flavour::poly_uinv}) {
        auto verdicts = morphism_flavour_map(incl, fl, window(-4, 4));
        for (auto& v : verdicts) {
            INFO("flavour ", flavour_traits(fl).name, " degree ", v.degree);
            CHECK(v.bijective());
        }
    }
    // [[u-1]] fails at degree 1: source 0, target 1
    auto verdicts = morphism_flavour_map(incl, Flavour::series_uinv, window(0, 3));
    for (auto& v : verdicts) {
        if (v.degree == 1) {
            CHECK(v.source_dim == 0);
            CHECK(v.target_dim == 1);
            CHECK(!v.bijective());
        }
    }
    // [[u,u-1]] fails at degree 0: source 1, target 0
    auto verdicts2 = morphism_flavour_map(incl, Flavour::laurent_series, window(-2, 2));
    for (auto& v : verdicts2)
        if (v.degree == 0) {
            CHECK(v.source_dim == 1);
            CHECK(v.target_dim == 0);
            CHECK(!v.bijective());
        }
}

TEST_CASE("morphism_flavour_map rejects non-morphisms") {
    MixedComplex P = point_mixed(-10, 10);
    MixedComplex E = es1_mixed(20);
    GradedMap g(E.space_ptr(), P.space_ptr(), 0);
    g.add(0, "1", "pt", Rational(1));
    // projection E -> P sending 1 to pt is NOT a morphism: D(alpha) = 1 maps
    // to pt but alpha maps to 0
    MixedMorphism proj(E, P, g);
    CHECK_THROWS_AS(morphism_flavour_map(proj, Flavour::series_u, window(-2, 2)), NotAMorphism);
}

TEST_CASE("D-subquotient homologies") {
    // trivial mixed complex: ker D = C, im D = 0, all homologies equal H(C, delta)
    MixedComplex M = fixtures::all_degrees_local(-8, 8);
    Window w = window(-2, 2);
    auto h_im = d_subquotient_homology(M, DSubquotient::im_d, w);
    auto h_ker = d_subquotient_homology(M, DSubquotient::ker_d, w);
    auto h_kermodim = d_subquotient_homology(M, DSubquotient::ker_mod_im, w);
    auto h_cmodim = d_subquotient_homology(M, DSubquotient::c_mod_im, w);
    auto h_cmodker = d_subquotient_homology(M, DSubquotient::c_mod_ker, w);
    for (int k = -2; k <= 2; ++k) {
        CHECK(h_im[k] == 0);
        CHECK(h_ker[k] == 1);
        CHECK(h_kermodim[k] == 1);
        CHECK(h_cmodim[k] == 1);
        CHECK(h_cmodker[k] == 0);
    }

    // ES1: ker D per degree is spanned by the beta powers (brute force over
    // the monomial basis), so its delta-homology is R at degree 0 only...
    // delta(b^j) = 0, and b^{j+1} = delta(a b^j) is a boundary of ker D only
    // if a b^j is in ker D, which it is not; so H(ker D) has dim 1 in every
    // even degree.
    MixedComplex E = es1_mixed(30);
    auto e_ker = d_subquotient_homology(E, DSubquotient::ker_d, window(0, 6));
    for (int k = 0; k <= 6; ++k) CHECK(e_ker[k] == (k % 2 == 0 ? 1 : 0));

    // C(R): im B is spanned by the even words, delta = b vanishes there, so
    // H(im B) has dim 1 at each odd degree <= -1
    MixedComplex C = fixtures::point_hochschild_table(24);
    auto c_im = d_subquotient_homology(C, DSubquotient::im_d, window(-6, 0));
    for (int k = -6; k <= 0; ++k) CHECK(c_im[k] == (odd_negative(k) ? 1 : 0));
}

TEST_CASE("derived constructions: sums, shifts, cones are valid mixed complexes") {
    MixedComplex E = es1_mixed(20);
    MixedComplex P = point_mixed(0, 20);
    MixedComplex S = direct_sum(E, P);
    CHECK(validate_mixed(S).all_pass());
    MixedComplex Sh = shift(E, 3);
    CHECK(validate_mixed(Sh).all_pass());
    CHECK(Sh.space().dim(-3) == 1);

    GradedMap f(P.space_ptr(), E.space_ptr(), 0);
    f.add(0, "pt", "1", Rational(1));
    MixedMorphism incl(P, E, f);
    MixedComplex cone = mapping_cone(incl);
    CHECK(validate_mixed(cone).all_pass());

    // cone of an identity is acyclic
    GradedMap idm = GradedMap::identity(P.space_ptr());
    MixedComplex cid = mapping_cone(MixedMorphism(P, P, idm));
    ModuleTable t = flavour_homology(cid, Flavour::series_u, window(-3, 3));
    for (auto& row : t.rows) CHECK(row.dim == 0);
}

TEST_CASE("Laurent flavour periodicity on exact degrees") {
    MixedComplex P = point_mixed(-30, 30);
    for (Flavour f : all_flavours()) {
        if (!flavour_traits(f).laurent_module) continue;
        ModuleTable t = flavour_homology(P, f, window(-4, 4));
        for (int k = t.lo + 2; k <= t.hi; ++k) {
            if (t.at(k).trust != Trust::exact || t.at(k - 2).trust != Trust::exact) continue;
            CHECK(t.at(k).dim == t.at(k - 2).dim);
            CHECK(t.at(k).u_rank == t.at(k).dim);
        }
    }
}
