#pragma once

#include <map>
#include <optional>

#include "cychom/graded.hpp"

namespace cychom {

// Rank of the degree-k block over the rationals.
int rank_at(const GradedMap& m, int k, PivotRule rule = PivotRule::markowitz);

struct HomologyAt {
    int dimension = 0;
    // Cycle columns spanning a complement of the boundaries inside ker(d_out).
    SparseMatrix representatives;
    // Boundary columns, reduced to an independent set.
    SparseMatrix boundaries;
};

// Homology of ... -> C^{k-1} --d_in--> C^k --d_out--> C^{k+1} -> ...
// Both maps have degree +1 and act on the same space. The composition
// d_out ∘ d_in is checked to vanish at degree k-1.
HomologyAt homology_at(const GradedMap& d_in, const GradedMap& d_out, int k);

// Matrix of a chain map f on homology at degree k, rows indexed by the
// target's representatives, columns by the source's. d_src and d_tgt are the
// degree +1 differentials; f must commute with them at degrees k-1 and k.
SparseMatrix induced_map_on_homology(const GradedMap& f, const GradedMap& d_src,
                                     const GradedMap& d_tgt, int k);

// Presentation of a subquotient S/Q of an ambient graded space: S and Q are
// given by spanning columns per degree, Q ⊆ span(S) (checked on demand).
struct SubquotientPresentation {
    GradedSpacePtr ambient;
    std::map<int, SparseMatrix> sub;  // columns spanning S_k (missing = zero)
    std::map<int, SparseMatrix> den;  // columns spanning Q_k

    SparseMatrix sub_at(int k) const;
    SparseMatrix den_at(int k) const;
    int dim(int k) const;
    bool denominator_contained(int k) const;
};

// Homology of (S/Q, delta) at degree k, where delta is a degree +1 map on the
// ambient space preserving the presentation.
int subquotient_homology_dim(const SubquotientPresentation& p, const GradedMap& delta, int k);

}  // namespace cychom
