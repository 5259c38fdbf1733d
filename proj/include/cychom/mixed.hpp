#pragma once

#include <functional>
#include <optional>

#include "cychom/check.hpp"
#include "cychom/exactlin.hpp"
#include "cychom/graded.hpp"

namespace cychom {

// Finite computation window: inclusive total-degree range plus the u-power
// box that gets materialized. Homology at degree k reads slice degrees
// k-1, k, k+1, so margin >= 1 keeps reported degrees off the boundary.
struct Window {
    int degree_lo = 0;
    int degree_hi = 8;
    int margin = 2;
    int upow_lo = -8;
    int upow_hi = 8;

    void validate() const {
        if (degree_lo > degree_hi || margin < 1 || upow_lo > 0 || upow_hi < 0)
            throw InvalidWindow("invalid window");
    }
    Window widened(int extra_upow) const {
        Window w = *this;
        w.upow_lo -= extra_upow;
        w.upow_hi += extra_upow;
        return w;
    }
};

// Which degrees of a complex are materialized, and what is known outside.
struct Support {
    int lo = 0, hi = -1;  // materialized range; empty when lo > hi
    bool zero_below = true;
    bool zero_above = true;
    std::set<int> incomplete;  // degrees whose basis or operator data is truncated

    bool materialized(int k) const { return k >= lo && k <= hi; }
    bool known_zero(int k) const { return (k < lo && zero_below) || (k > hi && zero_above); }
    bool complete_at(int k) const { return materialized(k) && incomplete.count(k) == 0; }
};

class MixedComplex {
public:
    MixedComplex(GradedSpacePtr space, GradedMap delta, GradedMap dd, Support support);

    const GradedSpace& space() const { return *space_; }
    const GradedSpacePtr& space_ptr() const { return space_; }
    const GradedMap& delta() const { return delta_; }
    const GradedMap& D() const { return dd_; }
    const Support& support() const { return support_; }

    // True when the image of delta (resp. D) out of degree k is fully known.
    bool delta_known(int k) const {
        return support_.complete_at(k) &&
               (support_.materialized(k + 1) || support_.known_zero(k + 1));
    }
    bool d_known(int k) const {
        return support_.complete_at(k) &&
               (support_.materialized(k - 1) || support_.known_zero(k - 1));
    }
    // Could C^k be nonzero as far as we know?
    bool possibly_nonzero(int k) const;
    bool possibly_nonzero_at_or_below(int k) const;
    bool possibly_nonzero_at_or_above(int k) const;

private:
    GradedSpacePtr space_;
    GradedMap delta_;  // degree +1
    GradedMap dd_;     // degree -1
    Support support_;
};

CheckReport validate_mixed(const MixedComplex& m);

// ---------------------------------------------------------------------------
// Flavours

enum class Flavour {
    laurent_series,      // [[u,u-1]]
    series_u_poly_uinv,  // [[u,u-1]
    poly_u_series_uinv,  // [u,u-1]]
    laurent_poly,        // [u,u-1]
    series_u,            // [[u]]
    poly_u,              // [u]
    series_uinv,         // [[u-1]], quotient by uC[[u]]
    poly_uinv,           // [u-1],   quotient by uC[u]
};

struct FlavourTraits {
    const char* name;           // command-line spelling
    const char* presentation;   // defining sub/quotient description
    bool lower_bounded;         // admits only i >= 0
    bool upper_capped;          // quotient flavour, admits only i <= 0
    bool up_series;             // infinite sums toward +infinity
    bool down_series;           // infinite sums toward -infinity
    bool laurent_module;        // module over R[u,u^-1] (u invertible on homology)
};

const FlavourTraits& flavour_traits(Flavour f);
const std::vector<Flavour>& all_flavours();
Flavour flavour_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Truncated complexes: the common finite carrier for flavour slices, theta
// slices and bare complexes. Per degree it holds a labeled space V_k, an
// in-box differential d_k: V_k -> V_{k+1}, overflow rows O_k whose kernel cuts
// the largest subcomplex for polynomial truncation directions, and quotient
// columns Q_k spanning the part factored out (quotient truncation at the
// series-side boundary). The homology computed is H((S+Q)/Q) with
// S = largest subcomplex of ker(O) under the in-box differential.
struct TruncComplex {
    int lo = 0, hi = -1;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, SparseMatrix> d;
    std::map<int, SparseMatrix> overflow;
    std::map<int, SparseMatrix> quot;
    std::map<int, SparseMatrix> sub;  // computed by finalize(); identity if absent
    std::map<int, bool> complete;

    int dim(int k) const;
    SparseMatrix d_at(int k) const;
    SparseMatrix overflow_at(int k) const;
    SparseMatrix quot_at(int k) const;
    SparseMatrix sub_at(int k) const;
    bool complete_at(int k) const;
    // Computes the subcomplex columns from the overflow rows, top-down.
    void finalize();
};

class SliceHomology {
public:
    explicit SliceHomology(const TruncComplex& c) : c_(&c) {}

    struct Deg {
        int dim = 0;
        SparseMatrix reps;    // cycle-lift columns spanning homology
        SparseMatrix basis;   // [boundaries | quotient] columns
        SparseMatrix cycles;  // independent cycle-lift columns
    };
    const Deg& at(int k);

    // Express columns in the homology basis at k; nullopt if not cycles.
    std::optional<SparseMatrix> classes_of(int k, const SparseMatrix& vectors);
    // As above but modulo extra columns; only valid when the extra columns
    // carry no homology (their cycle parts are boundaries), which is checked.
    std::optional<SparseMatrix> classes_of_mod(int k, const SparseMatrix& vectors,
                                               const SparseMatrix& extra);
    // Rank of the homology-level image of the given columns (their cycle part).
    int induced_rank(int k, const SparseMatrix& images);

private:
    const TruncComplex* c_;
    std::map<int, Deg> cache_;
};

// ---------------------------------------------------------------------------
// Flavour slices

struct FlavourSlice {
    Flavour flavour;
    Window window;
    int ilo = 0, ihi = 0;  // admitted u-power range after window/flavour cuts
    TruncComplex cplx;
    std::map<int, SparseMatrix> u_act;  // u[k]: dim(k+2) x dim(k)

    struct Cell {
        int upow;
        int cdeg;
        int idx;  // index in the underlying basis at cdeg
    };
    std::map<int, std::vector<Cell>> cells;

    SparseMatrix u_at(int k) const;
    int cell_index(int k, int upow, int idx) const;  // -1 if absent
    // Unit columns of the lowest admitted u-power layer at degree k (empty
    // unless the flavour is a series in u^-1). A truncated series tail is
    // only determined up to this layer.
    SparseMatrix bottom_layer(int k) const;
};

FlavourSlice assemble_flavour(const MixedComplex& m, Flavour f, const Window& w);

// Bare (C, delta) in the same carrier, for Gysin rows.
TruncComplex complex_slice(const MixedComplex& m, const Window& w);

// The degree range a complex must be materialized on so that the slice of
// this flavour over w sees no vertical truncation.
std::pair<int, int> required_degree_range(Flavour f, const Window& w);
std::pair<int, int> required_degree_range_all(const Window& w);

ModuleTable flavour_homology(const MixedComplex& m, Flavour f, const Window& w);

// ---------------------------------------------------------------------------
// Morphisms

struct MixedMorphism {
    MixedComplex source;
    MixedComplex target;
    GradedMap map;  // degree 0

    MixedMorphism(MixedComplex src, MixedComplex tgt, GradedMap f);
};

CheckReport validate_morphism(const MixedMorphism& f, int lo, int hi);

struct DegreeVerdict {
    int degree = 0;
    int source_dim = 0;
    int target_dim = 0;
    bool injective = false;
    bool surjective = false;
    Trust trust = Trust::exact;
    bool bijective() const { return injective && surjective; }
};

std::vector<DegreeVerdict> morphism_flavour_map(const MixedMorphism& f, Flavour fl, const Window& w);

// ---------------------------------------------------------------------------
// D-subquotients of (C, delta)

enum class DSubquotient { im_d, ker_d, ker_mod_im, c_mod_im, c_mod_ker };

std::map<int, int> d_subquotient_homology(const MixedComplex& m, DSubquotient which, const Window& w);

// ---------------------------------------------------------------------------
// Stabilization

struct Widening {
    Window window;
    int cap = -1;  // generation cap handed to the builder; -1 = automatic
};

using ComplexBuilder = std::function<MixedComplex(const Window&, int cap)>;

ModuleTable stabilize(const ComplexBuilder& builder, Flavour f, const Window& w,
                      const std::vector<Widening>& schedule);

// ---------------------------------------------------------------------------
// Derived constructions (property-test generators and fixtures)

MixedComplex direct_sum(const MixedComplex& a, const MixedComplex& b);
MixedComplex shift(const MixedComplex& a, int s);
MixedComplex mapping_cone(const MixedMorphism& f);

}  // namespace cychom
