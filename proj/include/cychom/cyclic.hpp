#pragma once

#include "cychom/mixed.hpp"

namespace cychom {

// Cyclic cochain complex: levels C_n (n = 0..cap), each a cochain complex in
// an internal degree with differential d of degree +1, faces d_i: C_n ->
// C_{n-1}, degeneracies s_j: C_n -> C_{n+1} and cyclic operators t_n. The
// total grading is |c| = deg(c) - n.
struct CyclicComplex {
    std::vector<GradedSpacePtr> levels;
    std::vector<GradedMap> d;                     // internal differential per level
    std::vector<std::vector<GradedMap>> face;     // face[n][i], defined for n >= 1, 0 <= i <= n
    std::vector<std::vector<GradedMap>> degen;    // degen[n][j], 0 <= j <= n (absent at the cap)
    std::vector<GradedMap> cyc;                   // t_n
    Support total_support;                        // over the total degree
    int total_lo = 0, total_hi = -1;              // trusted total-degree band

    int cap() const { return static_cast<int>(levels.size()) - 1; }
};

enum class Convention { paper, loday };

// Total space of a cyclic complex with cell bookkeeping per total degree.
struct TotalSpace {
    GradedSpacePtr space;
    struct Cell {
        int level;
        int ideg;  // internal degree; total = ideg - level
        int idx;
    };
    std::map<int, std::vector<Cell>> cells;
    std::map<int, std::map<std::pair<int, int>, int>> pos;  // (level, idx) -> position

    int index_of(int k, int level, int idx) const;
};

TotalSpace total_space(const CyclicComplex& cc);

// Operators on the total space assembled with the chosen sign convention.
// The `paper` convention scales faces and the extra degeneracy by powers of
// (-1)^{|c|}; the `loday` convention keeps them raw and twists the internal
// differential to dt(c) = (-1)^{|c|+1} d(c) instead.
struct DerivedOperators {
    Convention convention = Convention::loday;
    TotalSpace total;
    GradedMap d;       // internal differential (twisted for loday)
    GradedMap b;       // degree +1
    GradedMap bprime;  // degree +1
    GradedMap t;       // degree 0, signed cyclic operator
    GradedMap N;       // degree 0
    GradedMap s;       // degree -1, extra degeneracy (signed for paper)
    GradedMap B;       // degree -1, (1-t) s N
};

DerivedOperators derive_operators(const CyclicComplex& cc, Convention conv);

// Checks the simplicial/cyclic identities on the raw operators and every
// derived-operator relation on the window, including ker(1-t) = im N and
// ker N = im(1-t) by rank accounting.
CheckReport validate_relations(const CyclicComplex& cc, Convention conv);

MixedComplex to_mixed(const CyclicComplex& cc, Convention conv);

// The sign-convention intertwiner Phi(c) = (-1)^{|c|(|c|+1)/2} c as a
// morphism from the loday mixed complex to the paper one.
MixedMorphism convention_intertwiner(const CyclicComplex& cc);

// ---------------------------------------------------------------------------
// Theta double complex: variable theta of degree 1; vertical differential
// d+b on even columns and -(d+b') on odd ones; horizontal N (even) and 1-t
// (odd). Theta powers 2j, 2j+1 correspond to u^j.
struct ThetaSlice {
    Flavour flavour;
    Window window;
    int jlo = 0, jhi = 0;  // admitted theta powers
    TruncComplex cplx;
    std::map<int, SparseMatrix> u_act;  // multiplication by theta^2
    struct Cell {
        int tpow;
        int tdeg;  // total degree of the coefficient
        int idx;   // index in the total space at tdeg
    };
    std::map<int, std::vector<Cell>> cells;
    int cell_index(int k, int tpow, int idx) const;
    SparseMatrix u_at(int k) const;
    SparseMatrix bottom_layer(int k) const;
};

ThetaSlice theta_total(const DerivedOperators& ops, const Support& sup, Flavour f, const Window& w);

// k(sum c_j u^j) = sum (c_j theta^{2j} + s N c_j theta^{2j+1}); verified to
// be a chain map on the window interior, with degreewise homology verdicts.
struct KMapReport {
    CheckReport chain_identity;
    std::vector<DegreeVerdict> verdicts;
};
KMapReport k_map_check(const CyclicComplex& cc, Convention conv, Flavour f, const Window& w);

// ---------------------------------------------------------------------------
// Connes' version: HC_lambda^* = H^{*+1}(C/im(1-t), d+b), reported at the
// shifted index.
struct DimTable {
    std::map<int, int> dims;
    std::map<int, Trust> trust;
};

DimTable connes_homology(const CyclicComplex& cc, Convention conv, const Window& w);

// Verifies the four presentations of HC_lambda agree degreewise and that the
// canonical maps N, 1-t, (1-t)s, e and B0 induce bijections at window scale,
// plus acyclicity of (C, d+b').
CheckReport connes_equivalences(const CyclicComplex& cc, Convention conv, const Window& w);

// Degreewise dimension identities between the eight flavours, Connes'
// version and the vanishing Laurent-polynomial flavours.
CheckReport corollary_cyccochain_check(const CyclicComplex& cc, Convention conv, const Window& w);

// ---------------------------------------------------------------------------
// Polynomial resolutions in theta^-1.

// A homogeneous element of the total space at a given total degree.
struct TotalElement {
    int degree = 0;
    SparseVec vec;
};

struct Resolution {
    // term at theta^{-j} for j >= 1; the coefficient sits at degree + j - 1
    std::map<int, SparseVec> terms;
    std::vector<int> weights;  // weight of c_{-j} in term order, -1 for zero
};

// Solves delta_theta c = x for x closed under d+b and lying in im(1-t),
// choosing horizontal preimages levelwise: N^{-1} acts on im N as division
// by 1+n, and (1-t)-preimages come from deterministic sparse elimination.
Resolution polynomial_resolution(const DerivedOperators& ops, const TotalElement& x);

// Evaluates delta_theta on a finite theta-polynomial given by terms
// (power -> coefficient); returns the terms of the image.
std::map<int, SparseVec> delta_theta_apply(const DerivedOperators& ops, int element_degree,
                                           const std::map<int, SparseVec>& terms);

}  // namespace cychom
