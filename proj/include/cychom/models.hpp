#pragma once

#include "cychom/dga.hpp"
#include "cychom/gca.hpp"
#include "cychom/mixed.hpp"

namespace cychom {

// Builtin fixtures. point_mixed is R concentrated in degree 0 with zero
// differentials; es1_mixed is the Cartan-Weil model Lambda[alpha, beta] with
// delta alpha = beta and D alpha = 1, materialized on degrees [0, chi].
MixedComplex point_mixed(int lo, int hi);
MixedComplex es1_mixed(int chi);

// The trivial dga A = R and the sphere cohomology dgas H(S^n) = R.1 + R.v
// with v^2 = 0 and zero differential, augmented.
DgaSpec point_dga();
DgaSpec sphere_cohomology(int n);

// The Hochschild mixed complex of the trivial dga, materialized for totals
// in [tlo, 0].
MixedComplex point_hochschild_mixed(int tlo, Convention conv = Convention::loday);

// The quasi-isomorphism chain: C(R) -> point and point -> ES1.
std::pair<MixedMorphism, MixedMorphism> quiso_chain(const Window& w);

// Free graded-commutative model: generators with degrees and differential
// polynomials (one term list per generator, monomials spelled in generator
// names like "a^2").
struct FreeGcaSpec {
    std::vector<FreeGca::Gen> gens;
    std::vector<std::vector<std::pair<std::string, Rational>>> d_polys;
    std::string name;
};

FreeGcaSpec sphere_minimal_model(int n);

struct LoopModel {
    FreeGca algebra;
    MixedComplex mixed;
};

// Doubled-generator model (x_i, xbar_i) with B the degree -1 derivation
// sending x to xbar, materialized on degrees [0, chi].
LoopModel loop_model(const FreeGcaSpec& spec, int chi);
MixedComplex reduced_loop_complex(const LoopModel& lm);

// The [[u]]-flavour table of the loop model; `relative` uses the
// augmentation ideal, dropping the summand carried by the unit.
ModuleTable equivariant_loop_table(const FreeGcaSpec& spec, const Window& w, bool relative);

}  // namespace cychom
