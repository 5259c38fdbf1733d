#pragma once

#include <map>
#include <string>
#include <vector>

#include "cychom/mixed.hpp"

namespace cychom {

// Free graded-commutative algebra on named generators of positive degree.
// Monomials are exponent vectors in generator order; odd generators square
// to zero. Every degree has a finite monomial basis.
class FreeGca {
public:
    struct Gen {
        std::string name;
        int degree;
    };
    using Mono = std::vector<int>;
    using Poly = std::map<Mono, Rational>;

    explicit FreeGca(std::vector<Gen> gens);

    const std::vector<Gen>& gens() const { return gens_; }
    int degree(const Mono& m) const;
    std::string label(const Mono& m) const;
    Mono unit() const { return Mono(gens_.size(), 0); }

    // Monomials of each degree in [0, hi], ordered by lexicographic exponent
    // vector within a degree.
    std::map<int, std::vector<Mono>> enumerate(int hi) const;

    Poly mul(const Mono& a, const Mono& b) const;
    Poly mul(const Poly& a, const Poly& b) const;

    // Extend generator images to a derivation of the given degree and apply it.
    Poly derive(const std::map<int, Poly>& gen_images, int der_degree, const Mono& m) const;

    // True if generated only by odd-degree generators (finite total basis).
    int finite_top_degree() const;  // -1 when infinite

private:
    std::vector<Gen> gens_;
};

// Mixed complex carried by a free GCA with two derivations delta (degree +1)
// and D (degree -1), materialized on degrees [0, chi].
MixedComplex gca_mixed_complex(const FreeGca& A, const std::map<int, FreeGca::Poly>& delta_images,
                               const std::map<int, FreeGca::Poly>& d_images, int chi);

}  // namespace cychom
