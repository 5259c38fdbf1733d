#pragma once

#include <optional>

#include "cychom/cyclic.hpp"

namespace cychom {

// Finite-type dga given by structure constants on a labeled basis. The unit
// must be a basis element; an augmentation, when present, is required to
// vanish on the non-unit basis elements (so the non-unit span is the
// augmentation ideal).
struct DgaSpec {
    std::string name;
    std::vector<std::string> labels;
    std::vector<int> degrees;
    int unit = -1;
    using Combo = std::vector<std::pair<int, Rational>>;
    std::map<std::pair<int, int>, Combo> product;  // missing = zero product
    std::map<int, Combo> differential;             // missing = zero
    bool augmented = false;

    int index_of(const std::string& label) const;
    Combo mul(int a, int b) const;
    Combo d_of(int a) const;
};

CheckReport validate_dga(const DgaSpec& A);

// Hochschild word complex C_n(A) = A^{(n+1)} as a cyclic complex, with the
// dga cyclic-object operators and Koszul signs. Words are enumerated for all
// total degrees in [tlo, thi+1]; cap < 0 asks for an automatic level cap,
// which exists when the non-unit part of A vanishes.
CyclicComplex hochschild(const DgaSpec& A, int tlo, int thi, int cap = -1);

// The Koszul sign carried by rotating the last letter to the front; the one
// shared sign routine behind d_n and t_n.
Rational rotation_sign(const DgaSpec& A, const std::vector<int>& word);

// Normalized and reduced mixed complexes built directly on non-degenerate
// word bases. cap < 0 uses the automatic cap, available when the non-unit
// basis is concentrated in degrees >= 2.
MixedComplex normalized_mixed(const DgaSpec& A, Convention conv, int tlo, int thi, int cap = -1);
MixedComplex reduced_mixed(const DgaSpec& A, Convention conv, int tlo, int thi, int cap = -1);

// Words with no unit letters under d+b, with the signed cyclic operator:
// the carrier of the reduced Connes homology.
struct LambdaQuotient {
    GradedSpacePtr space;  // graded by total degree
    GradedMap diff;        // d + b, projected
    GradedMap t;           // signed cyclic operator
    Support support;
};

LambdaQuotient reduced_lambda_complex(const DgaSpec& A, Convention conv, int tlo, int thi,
                                      int cap = -1);

// Reduced Connes table: H^{*+1} of the lambda quotient by im(1-t).
DimTable reduced_connes_table(const DgaSpec& A, Convention conv, const Window& w);

// Degreewise: the reduced [u,u-1]] table vanishes,
// dim HC^{k+1}_[[u-1]] = dim HC^k_lambda = dim HC^k_[u] on reduced complexes,
// and the normalized tables split as point part plus reduced part.
CheckReport reduced_cyc_identities(const DgaSpec& A, const Window& w);

// The flavour dimension identities on the reduced complex of an augmented
// dga: the four-way equality through the reduced Connes table, vanishing of
// the Laurent-polynomial-type flavours, and agreement of the two
// Laurent-series flavours.
CheckReport reduced_corollary_check(const DgaSpec& A, const Window& w);

}  // namespace cychom
