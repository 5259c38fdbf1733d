#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cychom/sparse.hpp"

namespace cychom {

// Finite labeled basis per integer degree. Labels are opaque strings, unique
// within a degree and kept in lexicographic order so matrix layouts are
// deterministic. Absent degree means the zero space.
class GradedSpace {
public:
    GradedSpace() = default;
    explicit GradedSpace(std::map<int, std::vector<std::string>> basis);

    int dim(int k) const;
    const std::vector<std::string>& basis(int k) const;
    // -1 if the label is not present at that degree.
    int index_of(int k, const std::string& label) const;
    const std::string& label(int k, int i) const { return basis(k)[i]; }
    std::vector<int> degrees() const;
    bool has(int k) const { return dim(k) > 0; }
    int total_dim() const;

    friend bool operator==(const GradedSpace& a, const GradedSpace& b) { return a.basis_ == b.basis_; }

private:
    std::map<int, std::vector<std::string>> basis_;
    std::map<int, std::unordered_map<std::string, int>> index_;
    static const std::vector<std::string> empty_;
};

using GradedSpacePtr = std::shared_ptr<const GradedSpace>;

inline GradedSpacePtr make_space(std::map<int, std::vector<std::string>> basis) {
    return std::make_shared<const GradedSpace>(std::move(basis));
}

// Degree-homogeneous linear map between graded spaces, stored as one sparse
// block per source degree. A missing block is the zero block. Entries can
// only be added where both the source and target labels exist; this rejects
// degree violations at construction time.
class GradedMap {
public:
    GradedMap() = default;
    GradedMap(GradedSpacePtr source, GradedSpacePtr target, int degree);

    static GradedMap zero(GradedSpacePtr source, GradedSpacePtr target, int degree) {
        return GradedMap(std::move(source), std::move(target), degree);
    }
    static GradedMap identity(GradedSpacePtr space);

    void add(int src_deg, const std::string& src_label, const std::string& tgt_label,
             const Rational& coeff);
    void add_index(int src_deg, int src_idx, int tgt_idx, const Rational& coeff);
    void set_block(int src_deg, SparseMatrix block);

    int degree() const { return degree_; }
    const GradedSpacePtr& source() const { return source_; }
    const GradedSpacePtr& target() const { return target_; }
    // Always well-shaped: dim target(k+degree) x dim source(k).
    SparseMatrix block(int k) const;
    bool has_stored_block(int k) const { return blocks_.count(k) > 0; }

    GradedMap compose(const GradedMap& inner) const;  // this ∘ inner
    GradedMap plus(const GradedMap& other) const;
    GradedMap scaled(const Rational& c) const;
    // Apply to a homogeneous vector at source degree k.
    SparseVec apply(int k, const SparseVec& v) const { return block(k).apply(v); }

    // True if every block over source degrees [lo, hi] vanishes.
    bool is_zero_on(int lo, int hi) const;

private:
    GradedSpacePtr source_, target_;
    int degree_ = 0;
    std::map<int, SparseMatrix> blocks_;
};

}  // namespace cychom
