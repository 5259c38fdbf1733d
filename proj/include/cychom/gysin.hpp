#pragma once

#include "cychom/mixed.hpp"

namespace cychom {

// Verifies, for each of the four sub/quotient families
//   (C[u],  C[u,u-1],   C[u-1])     ([.] row)
//   (C[[u]], C[[u,u-1],  C[u-1])
//   (C[u],  C[u,u-1]],  C[[u-1]])
//   (C[[u]], C[[u,u-1]], C[[u-1]]),
// exactness by rank accounting of the Gysin row through H(C, delta), the
// tautological row through the middle flavour, both long vertical sequences,
// and commutativity of the connecting squares on homology representatives.
CheckReport gysin_check(const MixedComplex& m, const Window& w);

// Single-family variant.
struct GysinFamily {
    Flavour sub, mid, quot;
};
const std::vector<GysinFamily>& gysin_families();
CheckReport gysin_check_family(const MixedComplex& m, const GysinFamily& fam, const Window& w);

}  // namespace cychom
