#include "doctest.h"

#include <random>

#include "cychom/gysin.hpp"
#include "cychom/models.hpp"

using namespace cychom;

namespace {

Window window(int lo, int hi) {
    Window w;
    w.degree_lo = lo;
    w.degree_hi = hi;
    return w;
}

}  // namespace

TEST_CASE("es1 fixture: monomial bases match brute force") {
    MixedComplex E = es1_mixed(12);
    // brute force: alpha^e beta^j, degree e + 2j
    std::map<int, int> expect;
    for (int e = 0; e <= 1; ++e)
        for (int j = 0; e + 2 * j <= 12; ++j) ++expect[e + 2 * j];
    for (int k = 0; k <= 12; ++k) CHECK(E.space().dim(k) == expect[k]);
    CHECK(E.space().index_of(3, "a*b") >= 0);  // degree 3 basis {alpha beta}
    CHECK(validate_mixed(E).all_pass());
}

TEST_CASE("loop model of S^3: doubled generator and degree-4 basis") {
    LoopModel lm = loop_model(sphere_minimal_model(3), 10);
    // LM = Lambda[a, a'], deg a' = 2; degree-4 basis is a'^2 alone
    CHECK(lm.mixed.space().dim(4) == 1);
    CHECK(lm.mixed.space().basis(4)[0] == "a'^2");
    CHECK(validate_mixed(lm.mixed).all_pass());
    // B^2 = 0 and dB + Bd = 0 as matrices (validate covers both axioms)
}

TEST_CASE("loop model of S^2: d bbar = -2 a abar") {
    LoopModel lm = loop_model(sphere_minimal_model(2), 10);
    const MixedComplex& M = lm.mixed;
    // b' has degree 2; d(b') = -2 a*a'
    int src = M.space().index_of(2, "b'");
    int tgt = M.space().index_of(3, "a*a'");
    REQUIRE(src >= 0);
    REQUIRE(tgt >= 0);
    CHECK(M.delta().block(2).at(tgt, src) == Rational(-2));
    CHECK(validate_mixed(M).all_pass());
}

TEST_CASE("loop model rejects non simply connected input") {
    FreeGcaSpec bad;
    bad.gens.push_back({"x", 1});
    CHECK_THROWS_AS(loop_model(bad, 6), NotSimplyConnected);
}

TEST_CASE("equivariant loop tables for spheres") {
    // S^3 absolute: dims 1,0,2,0,2,0,2 on degrees 0..6
    ModuleTable abs3 = equivariant_loop_table(sphere_minimal_model(3), window(0, 6), false);
    std::map<int, int> expect{{0, 1}, {2, 2}, {4, 2}, {6, 2}};
    for (int k = 0; k <= 6; ++k) {
        INFO("S3 absolute degree ", k);
        CHECK(abs3.at(k).dim == (expect.count(k) ? expect[k] : 0));
    }
    // S^3 relative: dims 1 at 2, 4, 6, ...
    ModuleTable rel3 = equivariant_loop_table(sphere_minimal_model(3), window(0, 8), true);
    for (int k = 0; k <= 8; ++k) {
        INFO("S3 relative degree ", k);
        CHECK(rel3.at(k).dim == ((k >= 2 && k % 2 == 0) ? 1 : 0));
    }
    // S^2 relative: dims 1 at 1, 3, 5, ...
    ModuleTable rel2 = equivariant_loop_table(sphere_minimal_model(2), window(0, 7), true);
    for (int k = 0; k <= 7; ++k) {
        INFO("S2 relative degree ", k);
        CHECK(rel2.at(k).dim == ((k % 2 == 1) ? 1 : 0));
    }
    // S^2 absolute at 0 has dim 1 (the R[u] summand)
    ModuleTable abs2 = equivariant_loop_table(sphere_minimal_model(2), window(0, 4), false);
    CHECK(abs2.at(0).dim == 1);
    // u acts with rank zero on the relative summand
    for (int k = 3; k <= 7; k += 2) CHECK(rel2.at(k).u_rank == 0);
    for (int k = 4; k <= 8; k += 2) CHECK(rel3.at(k).u_rank == 0);
}

TEST_CASE("headline correspondence: reduced Connes tables equal loop tables") {
    for (int n = 2; n <= 5; ++n) {
        DimTable lam = reduced_connes_table(sphere_cohomology(n), Convention::loday, window(0, 8));
        ModuleTable loop = equivariant_loop_table(sphere_minimal_model(n), window(0, 8), true);
        for (int k = 0; k <= 8; ++k) {
            INFO("S^", n, " degree ", k);
            CHECK(lam.dims[k] == loop.at(k).dim);
        }
    }
}

TEST_CASE("quiso chain: morphisms validate and are quasi-isomorphisms on H(C, delta)") {
    Window w = window(-4, 4);
    auto [f1, f2] = quiso_chain(w);
    CHECK(validate_morphism(f1, -4, 4).all_pass());
    CHECK(validate_morphism(f2, -4, 4).all_pass());

    // both induce isomorphisms on the delta-homology at degree 0 (all R)
    SparseMatrix m1 = induced_map_on_homology(f1.map, f1.source.delta(), f1.target.delta(), 0);
    CHECK(m1.rows() == 1);
    CHECK(m1.cols() == 1);
    CHECK(!m1.column(0).is_zero());
    SparseMatrix m2 = induced_map_on_homology(f2.map, f2.source.delta(), f2.target.delta(), 0);
    CHECK(!m2.column(0).is_zero());

    // f1 kills the two-letter word; B-compatibility survives because the
    // target D vanishes
    CHECK(f1.map.block(-1).is_zero());

    // the composite is again a morphism and a quasi-isomorphism
    MixedMorphism comp(f1.source, f2.target, f2.map.compose(f1.map));
    CHECK(validate_morphism(comp, -4, 4).all_pass());
    SparseMatrix m3 =
        induced_map_on_homology(comp.map, comp.source.delta(), comp.target.delta(), 0);
    CHECK(!m3.column(0).is_zero());
}

TEST_CASE("quasi-isomorphism invariance verdicts along the chain") {
    Window w = window(-4, 4);
    auto [f1, f2] = quiso_chain(w);

    for (Flavour fl : {Flavour::series_u, Flavour::series_u_poly_uinv, Flavour::poly_uinv}) {
        for (auto* f : {&f1, &f2}) {
            auto verdicts = morphism_flavour_map(*f, fl, w);
            for (auto& v : verdicts) {
                INFO("flavour ", std::string(flavour_traits(fl).name), " degree ", v.degree);
                CHECK(v.bijective());
            }
        }
    }
    // [u]: fails along f1 at degree -1 (source 1, target 0)
    auto v_u = morphism_flavour_map(f1, Flavour::poly_u, window(-2, 0));
    for (auto& v : v_u)
        if (v.degree == -1) {
            CHECK(v.source_dim == 1);
            CHECK(v.target_dim == 0);
            CHECK(!v.bijective());
        }
    // [u,u-1]: fails along f1 at degree 0 (source 0, target 1)
    auto v_lp = morphism_flavour_map(f1, Flavour::laurent_poly, window(-2, 2));
    for (auto& v : v_lp)
        if (v.degree == 0) {
            CHECK(v.source_dim == 0);
            CHECK(v.target_dim == 1);
            CHECK(!v.bijective());
        }
    // [u,u-1]]: fails along f1 at degree 0
    auto v_psi = morphism_flavour_map(f1, Flavour::poly_u_series_uinv, window(-2, 2));
    for (auto& v : v_psi)
        if (v.degree == 0) {
            CHECK(v.source_dim == 0);
            CHECK(v.target_dim == 1);
            CHECK(!v.bijective());
        }
    // [[u,u-1]]: fails along f2 at degree 0 (source 1, target 0)
    auto v_ls = morphism_flavour_map(f2, Flavour::laurent_series, window(-2, 2));
    for (auto& v : v_ls)
        if (v.degree == 0) {
            CHECK(v.source_dim == 1);
            CHECK(v.target_dim == 0);
            CHECK(!v.bijective());
        }
    // [[u-1]]: fails along f2 at degree 1 (source 0, target 1)
    auto v_si = morphism_flavour_map(f2, Flavour::series_uinv, window(0, 2));
    for (auto& v : v_si)
        if (v.degree == 1) {
            CHECK(v.source_dim == 0);
            CHECK(v.target_dim == 1);
            CHECK(!v.bijective());
        }
}

TEST_CASE("gysin ledger passes on the loop model fixture") {
    LoopModel lm = loop_model(sphere_minimal_model(3), 24);
    CheckReport r = gysin_check_family(
        lm.mixed, GysinFamily{Flavour::series_u, Flavour::laurent_series, Flavour::series_uinv},
        window(0, 3));
    for (auto& f : r.failures()) {
        INFO(f.name, ": ", f.witness);
        CHECK(f.pass);
    }
    CHECK(r.all_pass());
}
