#pragma once

#include "cychom/cyclic.hpp"
#include "cychom/dga.hpp"

namespace cychom {

// The dual mixed complex (C^v, delta^*, D^*) with degree-k space the
// functionals on C^{-k}; blocks are transposes with degree reflection.
MixedComplex dualize(const MixedComplex& m, const Window& w);

// Degreewise, at exact-trust degrees:
//   dim HC^{-k}(C^v)_[[u]]      = dim HC^k(C)_[u-1]
//   dim HC^{-k}(C^v)_[[u-1]]    = dim HC^k(C)_[u]
//   dim HC^{-k}(C^v)_[[u,u-1]]  = dim HC^k(C)_[u,u-1]
// plus the im/ker diagram at dimension level
//   dim H^k(im D^*) = dim H^{-k}(C / ker D)
//   dim H^k(ker D^*) = dim H^{-k}(C / im D)
// and the pairing map as an explicit chain isomorphism on the window.
CheckReport duality_check(const MixedComplex& m, const Window& w);

// Cyclic cohomology: four presentations agree degreewise, with the Connes
// version computed from ker(1-t^*) under (d+b)^*.
CheckReport cyclic_dual_check(const CyclicComplex& cc, Convention conv, const Window& w);
// Reduced variant for augmented dgas, using the no-unit-word quotient.
CheckReport cyclic_dual_check(const DgaSpec& A, const Window& w);

}  // namespace cychom
