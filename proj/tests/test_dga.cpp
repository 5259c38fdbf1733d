#include "doctest.h"

#include "cychom/dga.hpp"
#include "cychom/models.hpp"

using namespace cychom;

namespace {

Window window(int lo, int hi) {
    Window w;
    w.degree_lo = lo;
    w.degree_hi = hi;
    return w;
}

// truncated Cartan-Weil style dga: Lambda(s) (x) R[t]/t^3 with ds = t
DgaSpec cartan_truncated() {
    DgaSpec A;
    A.name = "cartan-truncated";
    A.labels = {"1", "s", "t", "st", "tt", "stt"};
    A.degrees = {0, 1, 2, 3, 4, 5};
    A.unit = 0;
    auto set = [&A](const char* a, const char* b, const char* c, long coeff) {
        A.product[{A.index_of(a), A.index_of(b)}].push_back({A.index_of(c), Rational(coeff)});
    };
    set("s", "t", "st", 1);
    set("t", "s", "st", 1);
    set("t", "t", "tt", 1);
    set("s", "tt", "stt", 1);
    set("tt", "s", "stt", 1);
    set("t", "st", "stt", 1);
    set("st", "t", "stt", 1);
    A.differential[A.index_of("s")].push_back({A.index_of("t"), Rational(1)});
    A.differential[A.index_of("st")].push_back({A.index_of("tt"), Rational(1)});
    A.differential[A.index_of("stt")] = {};
    A.augmented = true;
    return A;
}

}  // namespace

TEST_CASE("validate_dga accepts the builtin algebras") {
    CHECK(validate_dga(point_dga()).all_pass());
    for (int n = 2; n <= 5; ++n) CHECK(validate_dga(sphere_cohomology(n)).all_pass());
    CHECK(validate_dga(cartan_truncated()).all_pass());
}

TEST_CASE("corrupted Leibniz constant fails with a witness pair") {
    DgaSpec bad = cartan_truncated();
    bad.differential[bad.index_of("st")] = {{bad.index_of("tt"), Rational(-1)}};
    CheckReport r = validate_dga(bad);
    CHECK(!r.all_pass());
    bool found = false;
    for (auto& f : r.failures())
        if (f.name == "graded Leibniz rule" && f.witness.find("s") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("hochschild of the trivial dga: one word per level, |word| = -n") {
    CyclicComplex cc = hochschild(point_dga(), -6, 0);
    for (int n = 0; n <= 5; ++n) {
        CHECK(cc.levels[static_cast<size_t>(n)]->dim(0) == 1);  // internal degree 0
        // total degree -n
    }
    MixedComplex m = to_mixed(cc, Convention::loday);
    for (int k = -5; k <= 0; ++k) CHECK(m.space().dim(k) == 1);
}

TEST_CASE("hochschild of H(S^2): level-1 words and the pinned cyclic sign") {
    DgaSpec A = sphere_cohomology(2);
    CyclicComplex cc = hochschild(A, -4, 6, 4);
    // level-1 words include (1|v), (v|v), (v|1), (1|1)
    const GradedSpace& L1 = *cc.levels[1];
    CHECK(L1.index_of(2, "(1|v)") >= 0);
    CHECK(L1.index_of(2, "(v|1)") >= 0);
    CHECK(L1.index_of(4, "(v|v)") >= 0);
    CHECK(L1.index_of(0, "(1|1)") >= 0);

    // t~(v|v) = -(v|v): level sign -1, Koszul sign +1
    DerivedOperators ops = derive_operators(cc, Convention::loday);
    int total = 4 - 1;
    int idx = ops.total.space->index_of(total, "(v|v)");
    REQUIRE(idx >= 0);
    CHECK(ops.t.block(total).at(idx, idx) == Rational(-1));
}

TEST_CASE("rotation sign golden table") {
    DgaSpec A = sphere_cohomology(2);
    int one = A.index_of("1"), v = A.index_of("v");
    CHECK(rotation_sign(A, {v, v}) == Rational(1));        // deg 2 * deg 2
    CHECK(rotation_sign(A, {one, v}) == Rational(1));      // 2 * 0
    CHECK(rotation_sign(A, {v, one}) == Rational(1));      // 0 * 2
    DgaSpec B = sphere_cohomology(3);
    int vb = B.index_of("v");
    CHECK(rotation_sign(B, {vb, vb}) == Rational(-1));     // 3 * 3
    CHECK(rotation_sign(B, {vb, vb, vb}) == Rational(1));  // 3 * 6
    DgaSpec C = cartan_truncated();
    int s = C.index_of("s"), t = C.index_of("t");
    CHECK(rotation_sign(C, {s, s}) == Rational(-1));  // odd times odd
    CHECK(rotation_sign(C, {t, s}) == Rational(1));
    CHECK(rotation_sign(C, {s, t}) == Rational(1));
}

TEST_CASE("empty window gives empty levels") {
    CyclicComplex cc = hochschild(point_dga(), 3, 5, 4);
    for (auto& lvl : cc.levels) CHECK(lvl->total_dim() == 0);
}

TEST_CASE("normalized complex of the trivial dga is the point") {
    MixedComplex m = normalized_mixed(point_dga(), Convention::loday, -8, 8);
    CHECK(m.space().dim(0) == 1);
    for (int k = -8; k <= 8; ++k)
        if (k != 0) CHECK(m.space().dim(k) == 0);
    // its flavour tables equal the point tables
    Window w = window(-4, 4);
    for (Flavour f : all_flavours()) {
        ModuleTable tn = flavour_homology(m, f, w);
        ModuleTable tp = flavour_homology(point_mixed(-40, 40), f, w);
        for (int k = -4; k <= 4; ++k) {
            INFO("flavour ", flavour_traits(f).name, " degree ", k);
            CHECK(tn.at(k).dim == tp.at(k).dim);
        }
    }
}

TEST_CASE("reduced sphere bases match brute-force enumeration") {
    // reduced complex of H(S^n): level 0 = {v}; level k = {(1|v..v), (v|v..v)}
    for (int n : {2, 3}) {
        auto [clo, chi] = std::pair<int, int>{0, 10};
        MixedComplex red = reduced_mixed(sphere_cohomology(n), Convention::loday, clo, chi);
        std::map<int, int> expect;
        expect[n] += 1;  // the word (v)
        for (int lvl = 1; lvl * (n - 1) <= chi + 1; ++lvl) {
            expect[lvl * n - lvl] += 1;            // (1|v^lvl)
            expect[(lvl + 1) * n - lvl] += 1;      // (v|v^lvl)
        }
        for (int k = 1; k <= 10; ++k) {
            INFO("S^", n, " degree ", k);
            CHECK(red.space().dim(k) == (expect.count(k) ? expect[k] : 0));
        }
    }
}

TEST_CASE("normalized splitting: dim normalized = dim point part + dim reduced part") {
    for (int n : {2, 3}) {
        MixedComplex norm = normalized_mixed(sphere_cohomology(n), Convention::loday, -2, 10);
        MixedComplex red = reduced_mixed(sphere_cohomology(n), Convention::loday, -2, 10);
        for (int k = -2; k <= 10; ++k) {
            int point_part = (k == 0) ? 1 : 0;
            CHECK(norm.space().dim(k) == red.space().dim(k) + point_part);
        }
        CHECK(validate_mixed(norm).all_pass());
        CHECK(validate_mixed(red).all_pass());
    }
}

TEST_CASE("reduced complex requires an augmentation") {
    DgaSpec A = sphere_cohomology(2);
    A.augmented = false;
    CHECK_THROWS_AS(reduced_mixed(A, Convention::loday, 0, 6), NotAugmented);
}

TEST_CASE("reduced Connes tables of spheres") {
    // odd sphere: v R[v] with |v| = n-1; even sphere: v R[v^2]
    DimTable s3 = reduced_connes_table(sphere_cohomology(3), Convention::loday, window(0, 8));
    for (int k = 0; k <= 8; ++k) {
        INFO("S3 degree ", k);
        CHECK(s3.dims[k] == ((k >= 2 && k % 2 == 0) ? 1 : 0));
    }
    DimTable s2 = reduced_connes_table(sphere_cohomology(2), Convention::loday, window(0, 8));
    for (int k = 0; k <= 8; ++k) {
        INFO("S2 degree ", k);
        CHECK(s2.dims[k] == ((k >= 1 && k % 2 == 1) ? 1 : 0));
    }
    DimTable s4 = reduced_connes_table(sphere_cohomology(4), Convention::loday, window(0, 8));
    for (int k = 0; k <= 8; ++k) {
        INFO("S4 degree ", k);
        CHECK(s4.dims[k] == (k == 3 ? 1 : 0));  // 3, 9, 15, ...
    }
    DimTable s5 = reduced_connes_table(sphere_cohomology(5), Convention::loday, window(0, 8));
    for (int k = 0; k <= 8; ++k) {
        INFO("S5 degree ", k);
        CHECK(s5.dims[k] == ((k == 4 || k == 8) ? 1 : 0));
    }
}

TEST_CASE("reduced identities and splitting for spheres") {
    for (int n : {2, 3}) {
        CheckReport r = reduced_cyc_identities(sphere_cohomology(n), window(0, 6));
        for (auto& f : r.failures()) {
            INFO(f.name, ": ", f.witness);
            CHECK(f.pass);
        }
        CHECK(r.all_pass());
    }
    // A = R: the reduced complex is zero, so all reduced tables vanish
    MixedComplex redpt = reduced_mixed(point_dga(), Convention::loday, -6, 6);
    CHECK(redpt.space().total_dim() == 0);
}

TEST_CASE("normalized tables are quasi-isomorphism-correct for the classical flavours") {
    // the full-complex tables of the trivial dga agree with the normalized
    // ones exactly for [[u]], [[u,u-1], [u-1], and differ for [u]
    MixedComplex full = point_hochschild_mixed(-40);
    MixedComplex norm = normalized_mixed(point_dga(), Convention::loday, -12, 12);
    Window w = window(-4, 4);
    for (Flavour f : {Flavour::series_u, Flavour::series_u_poly_uinv, Flavour::poly_uinv,
                      Flavour::series_uinv, Flavour::laurent_series}) {
        ModuleTable tf = flavour_homology(full, f, w);
        ModuleTable tn = flavour_homology(norm, f, w);
        for (int k = -4; k <= 4; ++k) {
            INFO("flavour ", flavour_traits(f).name, " degree ", k);
            CHECK(tf.at(k).dim == tn.at(k).dim);
        }
    }
    // the non-invariance witness: [u] differs at degree -1
    ModuleTable tf = flavour_homology(full, Flavour::poly_u, w);
    ModuleTable tn = flavour_homology(norm, Flavour::poly_u, w);
    CHECK(tf.at(-1).dim == 1);
    CHECK(tn.at(-1).dim == 0);
    CHECK(tn.at(0).dim == 1);
    CHECK(tf.at(0).dim == 0);
}
