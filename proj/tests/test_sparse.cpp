#include "doctest.h"

#include <random>

#include "cychom/sparse.hpp"
#include "oracles.hpp"

using namespace cychom;

TEST_CASE("rational parsing and arithmetic") {
    CHECK(Rational::parse("2/3") + Rational::parse("1/3") == Rational(1));
    CHECK(Rational::parse("-4/6") == Rational(-2, 3));
    CHECK(Rational(2, -3) == Rational(-2, 3));
    CHECK(Rational(0).is_zero());
    CHECK_THROWS_AS(Rational::parse("1/0"), Error);
    CHECK(Rational(7, 3).str() == "7/3");
    CHECK(Rational(6, 3).str() == "2");
}

TEST_CASE("identity rank and zero rank") {
    CHECK(rank(SparseMatrix::identity(3)) == 3);
    CHECK(rank(SparseMatrix(4, 7)) == 0);
}

TEST_CASE("rank of matrix with two equal rows matches dense oracle") {
    std::mt19937_64 rng(12345);
    SparseMatrix m = oracles::random_matrix(6, 6, rng, 70);
    // rebuild with row 4 replaced by a copy of row 1
    SparseMatrix m2(6, 6);
    for (int j = 0; j < 6; ++j)
        for (auto& [r, v] : m.column(j).entries())
            if (r != 4) m2.add(r, j, v);
    for (int j = 0; j < 6; ++j) {
        Rational v = m.at(1, j);
        if (!v.is_zero()) m2.add(4, j, v);
    }
    CHECK(rank(m2) == oracles::dense_rank(m2));
    CHECK(rank(m2) <= 5);
}

TEST_CASE("rank agrees between pivot rules and with the dense oracle") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        SparseMatrix m = oracles::random_matrix(8, 10, rng);
        int r1 = rank(m, PivotRule::markowitz);
        int r2 = rank(m, PivotRule::leftmost);
        int r3 = oracles::dense_rank(m);
        CHECK(r1 == r2);
        CHECK(r1 == r3);
        CHECK(r1 <= std::min(m.rows(), m.cols()));
    }
}

TEST_CASE("kernel columns are killed by the matrix and span the kernel") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        SparseMatrix m = oracles::random_matrix(6, 9, rng);
        SparseMatrix K = kernel(m);
        CHECK(K.cols() == m.cols() - rank(m));
        CHECK((m * K).is_zero());
        if (K.cols() > 0) CHECK(rank(K) == K.cols());
    }
}

TEST_CASE("solve finds exact solutions and detects inconsistency") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        SparseMatrix A = oracles::random_matrix(7, 5, rng);
        SparseMatrix X0 = oracles::random_matrix(5, 2, rng, 60);
        SparseMatrix B = A * X0;
        auto X = solve(A, B);
        REQUIRE(X.has_value());
        CHECK(A * *X == B);
    }
    // inconsistent system
    SparseMatrix A(2, 1);
    A.add(0, 0, Rational(1));
    SparseMatrix b(2, 1);
    b.add(1, 0, Rational(1));
    CHECK(!solve(A, b).has_value());
}

TEST_CASE("column rank profile is greedy left-to-right") {
    // col0 = e0, col1 = 2*e0 (dependent), col2 = e1
    SparseMatrix m(2, 3);
    m.add(0, 0, Rational(1));
    m.add(0, 1, Rational(2));
    m.add(1, 2, Rational(1));
    auto prof = column_rank_profile(m);
    REQUIRE(prof.size() == 2);
    CHECK(prof[0] == 0);
    CHECK(prof[1] == 2);
}

TEST_CASE("column space intersection") {
    std::mt19937_64 rng(5);
    // A spans {e0, e1}, B spans {e1, e2}: intersection = {e1}
    SparseMatrix A(4, 2), B(4, 2);
    A.add(0, 0, Rational(1));
    A.add(1, 1, Rational(1));
    B.add(1, 0, Rational(3));
    B.add(2, 1, Rational(1));
    SparseMatrix P = column_space_intersection(A, B);
    REQUIRE(P.cols() == 1);
    CHECK(!P.column(0).at(1).is_zero());
    CHECK(P.column(0).at(0).is_zero());
    CHECK(P.column(0).at(2).is_zero());

    for (int trial = 0; trial < 10; ++trial) {
        SparseMatrix M1 = oracles::random_matrix(6, 3, rng);
        SparseMatrix M2 = oracles::random_matrix(6, 3, rng);
        SparseMatrix P2 = column_space_intersection(M1, M2);
        // dim(U ∩ W) = dim U + dim W - dim(U + W)
        int expect = rank(M1) + rank(M2) - rank(M1.hstack(M2));
        CHECK(P2.cols() == expect);
        if (P2.cols() > 0) {
            CHECK(rank(M1.hstack(P2)) == rank(M1));
            CHECK(rank(M2.hstack(P2)) == rank(M2));
        }
    }
}

TEST_CASE("transpose and product") {
    std::mt19937_64 rng(11);
    SparseMatrix A = oracles::random_matrix(4, 6, rng);
    SparseMatrix At = A.transpose();
    CHECK(At.rows() == 6);
    CHECK(At.cols() == 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) CHECK(A.at(i, j) == At.at(j, i));
    CHECK(At.transpose() == A);
}
