#include "doctest.h"

#include "cychom/cyclic.hpp"
#include "cychom/models.hpp"
#include "fixtures.hpp"

using namespace cychom;

namespace {

Window window(int lo, int hi) {
    Window w;
    w.degree_lo = lo;
    w.degree_hi = hi;
    return w;
}

// matrix entry of a total-space operator between two labeled elements
Rational entry(const DerivedOperators& ops, const GradedMap& m, int src_deg,
               const std::string& src, const std::string& tgt) {
    int si = ops.total.space->index_of(src_deg, src);
    int ti = ops.total.space->index_of(src_deg + m.degree(), tgt);
    REQUIRE(si >= 0);
    REQUIRE(ti >= 0);
    return m.block(src_deg).at(ti, si);
}

}  // namespace

TEST_CASE("derived operators on the trivial dga match the closed-form table") {
    CyclicComplex cc = hochschild(point_dga(), -10, 0);
    DerivedOperators ops = derive_operators(cc, Convention::loday);
    // b(1^3) = 1^2 at total degree -2, b(1^2) = 0
    CHECK(entry(ops, ops.b, -2, "(1|1|1)", "(1|1)") == Rational(1));
    CHECK(ops.b.block(-1).is_zero());
    // N(1^3) = 3 * 1^3
    CHECK(entry(ops, ops.N, -2, "(1|1|1)", "(1|1|1)") == Rational(3));
    // B(1) = 2 * 1^2
    CHECK(entry(ops, ops.B, 0, "(1)", "(1|1)") == Rational(2));
    // t(1^n) = (-1)^{n-1} 1^n
    CHECK(entry(ops, ops.t, -1, "(1|1)", "(1|1)") == Rational(-1));
    CHECK(entry(ops, ops.t, -2, "(1|1|1)", "(1|1|1)") == Rational(1));

    // the paper-convention b differs by the total sign
    DerivedOperators pops = derive_operators(cc, Convention::paper);
    CHECK(entry(pops, pops.b, -2, "(1|1|1)", "(1|1)") == Rational(-1));
    CHECK(entry(pops, pops.B, 0, "(1)", "(1|1)") == Rational(2));
}

TEST_CASE("pipeline Hochschild mixed complex equals the closed-form fixture") {
    MixedComplex made = point_hochschild_mixed(-20);
    MixedComplex table = fixtures::point_hochschild_table(21);
    for (int k = -19; k <= 0; ++k) {
        CHECK(made.space().dim(k) == table.space().dim(k));
        if (k < 0) CHECK(made.delta().block(k).is_zero() == table.delta().block(k).is_zero());
    }
    // b and B agree entrywise under the word <-> w_n identification
    for (int n = 1; n <= 18; ++n) {
        int k = 1 - n;
        SparseMatrix bm = made.delta().block(k);
        SparseMatrix bt = table.delta().block(k);
        CHECK(bm == bt);
        SparseMatrix Bm = made.D().block(k);
        SparseMatrix Bt = table.D().block(k);
        CHECK(Bm == Bt);
    }
}

TEST_CASE("validate_relations passes on builtin complexes and flags mutations") {
    CyclicComplex cc = hochschild(point_dga(), -8, 0);
    CHECK(validate_relations(cc, Convention::loday).all_pass());
    CHECK(validate_relations(cc, Convention::paper).all_pass());

    CyclicComplex s2 = hochschild(sphere_cohomology(2), -4, 6, 6);
    CheckReport r2 = validate_relations(s2, Convention::loday);
    CHECK(r2.all_pass());

    // corrupt one face map: relations must fail with a witness
    CyclicComplex bad = hochschild(sphere_cohomology(2), -2, 4, 4);
    bad.face[2][1] = bad.face[2][1].scaled(Rational(-1));
    CheckReport rb = validate_relations(bad, Convention::loday);
    CHECK(!rb.all_pass());
    bool witness = false;
    for (auto& it : rb.failures())
        if (!it.witness.empty()) witness = true;
    CHECK(witness);
}

TEST_CASE("to_mixed yields a valid mixed complex; convention intertwiner is a morphism") {
    CyclicComplex cc = hochschild(point_dga(), -12, 0);
    MixedComplex m = to_mixed(cc, Convention::loday);
    CHECK(validate_mixed(m).all_pass());

    CyclicComplex s3 = hochschild(sphere_cohomology(3), -4, 8, 5);
    MixedMorphism phi = convention_intertwiner(s3);
    CheckReport vr = validate_morphism(phi, -2, 6);
    CHECK(vr.all_pass());
    // diagonal signs (+, -, -, +) pattern in degrees 0..3
    CHECK(phi.map.block(0) == SparseMatrix::identity(phi.source.space().dim(0)));
    if (phi.source.space().dim(3) > 0)
        CHECK(phi.map.block(3) == SparseMatrix::identity(phi.source.space().dim(3)));
    if (phi.source.space().dim(2) > 0)
        CHECK(phi.map.block(2) ==
              SparseMatrix::identity(phi.source.space().dim(2)).scaled(Rational(-1)));
}

TEST_CASE("odd theta columns are contractible: (d+b')s + s(d+b') = 1") {
    CyclicComplex cc = hochschild(point_dga(), -10, 0);
    DerivedOperators ops = derive_operators(cc, Convention::loday);
    GradedMap dbp = ops.d.plus(ops.bprime);
    GradedMap lhs = dbp.compose(ops.s).plus(ops.s.compose(dbp));
    for (int k = -8; k <= -1; ++k) {
        INFO("degree ", k);
        CHECK(lhs.block(k) == SparseMatrix::identity(ops.total.space->dim(k)));
    }
}

TEST_CASE("k map: chain identity and induced bijections for the trivial dga") {
    CyclicComplex cc = hochschild(point_dga(), -26, 0);
    for (Flavour f : {Flavour::poly_u, Flavour::series_u, Flavour::poly_uinv}) {
        KMapReport kr = k_map_check(cc, Convention::loday, f, window(-4, 0));
        INFO("flavour ", std::string(flavour_traits(f).name));
        CHECK(kr.chain_identity.all_pass());
        for (auto& v : kr.verdicts) {
            INFO("degree ", v.degree, " dims ", v.source_dim, "/", v.target_dim);
            CHECK(v.bijective());
        }
    }
    // dims at -1 and -3 are 1 for the polynomial flavour on both sides
    KMapReport kr = k_map_check(cc, Convention::loday, Flavour::poly_u, window(-4, 0));
    for (auto& v : kr.verdicts) {
        if (v.degree == -1 || v.degree == -3) {
            CHECK(v.source_dim == 1);
            CHECK(v.target_dim == 1);
        }
    }
}

TEST_CASE("connes homology of the trivial dga sits at the odd negative degrees") {
    CyclicComplex cc = hochschild(point_dga(), -12, 2);
    DimTable t = connes_homology(cc, Convention::loday, window(-5, 2));
    for (int k = -5; k <= 2; ++k) {
        INFO("degree ", k);
        CHECK(t.dims[k] == ((k < 0 && (((k % 2) + 2) % 2 == 1)) ? 1 : 0));
    }
}

TEST_CASE("connes equivalences: four presentations and canonical maps") {
    CyclicComplex cc = hochschild(point_dga(), -12, 2);
    CheckReport r = connes_equivalences(cc, Convention::loday, window(-4, 1));
    for (auto& f : r.failures()) {
        INFO(f.name, ": ", f.witness);
        CHECK(f.pass);
    }
    CHECK(r.all_pass());
}

TEST_CASE("corollary identities for the trivial dga") {
    CyclicComplex cc = hochschild(point_dga(), -16, 4);
    CheckReport r = corollary_cyccochain_check(cc, Convention::loday, window(-3, 1));
    for (auto& f : r.failures()) {
        INFO(f.name, ": ", f.witness);
        CHECK(f.pass);
    }
    CHECK(r.all_pass());
}

TEST_CASE("polynomial resolution of the spec example terminates and verifies") {
    CyclicComplex cc = hochschild(point_dga(), -12, 2);
    DerivedOperators ops = derive_operators(cc, Convention::loday);
    // x = (1-t)(1^2) = 2*1^2 at total degree -1
    int idx = ops.total.space->index_of(-1, "(1|1)");
    REQUIRE(idx >= 0);
    TotalElement x{-1, SparseVec({{idx, Rational(2)}})};
    Resolution res = polynomial_resolution(ops, x);
    REQUIRE(res.terms.size() == 2);
    // verify delta_theta c = x exactly
    std::map<int, SparseVec> theta_terms;
    for (auto& [j, vec] : res.terms) theta_terms[-j] = vec;
    auto img = delta_theta_apply(ops, x.degree - 1, theta_terms);
    REQUIRE(img.size() == 1);
    REQUIRE(img.count(0) == 1);
    CHECK(img[0] == x.vec);
    // weight sequence obeys the proof's inequalities
    for (size_t j = 1; j < res.weights.size(); ++j) CHECK(res.weights[j] <= res.weights[j - 1]);

    // x = 0 resolves to the empty polynomial
    TotalElement zero{-1, SparseVec()};
    CHECK(polynomial_resolution(ops, zero).terms.empty());

    // closedness and membership preconditions are enforced
    int one = ops.total.space->index_of(0, "(1)");
    TotalElement notin{0, SparseVec({{one, Rational(1)}})};
    CHECK_THROWS_AS(polynomial_resolution(ops, notin), NotInImage);
}

TEST_CASE("polynomial resolutions across a generated corpus") {
    // x = (1-t)y for a (d+b')-boundary y is closed and in the image, so the
    // resolution algorithm must terminate and verify on all of these
    for (int which = 0; which < 2; ++which) {
        CyclicComplex cc = which == 0 ? hochschild(sphere_cohomology(3), -6, 10, 5)
                                      : hochschild(sphere_cohomology(2), -6, 8, 6);
        DerivedOperators ops = derive_operators(cc, Convention::loday);
        GradedMap dbp = ops.d.plus(ops.bprime);
        GradedMap one_minus_t =
            GradedMap::identity(ops.total.space).plus(ops.t.scaled(Rational(-1)));
        int count = 0;
        for (int k = -6; k <= 4; ++k) {
            int dim = ops.total.space->dim(k);
            for (int j = 0; j < dim && count < 40; ++j) {
                SparseVec z = SparseVec::unit(j);
                SparseVec y = dbp.block(k).apply(z);
                SparseVec x = one_minus_t.block(k + 1).apply(y);
                if (x.is_zero()) continue;
                TotalElement el{k + 1, x};
                Resolution res = polynomial_resolution(ops, el);
                std::map<int, SparseVec> theta_terms;
                for (auto& [jj, vec] : res.terms) theta_terms[-jj] = vec;
                auto img = delta_theta_apply(ops, el.degree - 1, theta_terms);
                REQUIRE(img.size() == 1);
                CHECK(img[0] == x);
                for (size_t p = 1; p < res.weights.size(); ++p)
                    CHECK(res.weights[p] <= res.weights[p - 1]);
                for (size_t p = 0; p + 2 < res.weights.size(); ++p) {
                    if ((p + 1) % 2 == 1 && res.weights[p] >= 0)
                        CHECK(res.weights[p + 2] < res.weights[p]);
                }
                ++count;
            }
        }
        CHECK(count > 0);
    }
}
