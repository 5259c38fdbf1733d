#include "cychom/graded.hpp"

#include <algorithm>

#include "cychom/errors.hpp"

namespace cychom {

const std::vector<std::string> GradedSpace::empty_{};

GradedSpace::GradedSpace(std::map<int, std::vector<std::string>> basis) : basis_(std::move(basis)) {
    for (auto it = basis_.begin(); it != basis_.end();) {
        if (it->second.empty()) {
            it = basis_.erase(it);
            continue;
        }
        std::sort(it->second.begin(), it->second.end());
        auto& idx = index_[it->first];
        for (size_t i = 0; i < it->second.size(); ++i) {
            if (!idx.emplace(it->second[i], static_cast<int>(i)).second)
                throw Error("GradedSpace: duplicate label '" + it->second[i] + "' in degree " +
                            std::to_string(it->first));
        }
        ++it;
    }
}

int GradedSpace::dim(int k) const {
    auto it = basis_.find(k);
    return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<std::string>& GradedSpace::basis(int k) const {
    auto it = basis_.find(k);
    return it == basis_.end() ? empty_ : it->second;
}

int GradedSpace::index_of(int k, const std::string& label) const {
    auto it = index_.find(k);
    if (it == index_.end()) return -1;
    auto jt = it->second.find(label);
    return jt == it->second.end() ? -1 : jt->second;
}

std::vector<int> GradedSpace::degrees() const {
    std::vector<int> out;
    out.reserve(basis_.size());
    for (auto& [k, b] : basis_) out.push_back(k);
    return out;
}

int GradedSpace::total_dim() const {
    int n = 0;
    for (auto& [k, b] : basis_) n += static_cast<int>(b.size());
    return n;
}

GradedMap::GradedMap(GradedSpacePtr source, GradedSpacePtr target, int degree)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree) {
    if (!source_ || !target_) throw Error("GradedMap: null space");
}

GradedMap GradedMap::identity(GradedSpacePtr space) {
    GradedMap m(space, space, 0);
    for (int k : space->degrees()) m.blocks_[k] = SparseMatrix::identity(space->dim(k));
    return m;
}

void GradedMap::add(int src_deg, const std::string& src_label, const std::string& tgt_label,
                    const Rational& coeff) {
    int si = source_->index_of(src_deg, src_label);
    if (si < 0)
        throw Error("GradedMap: unknown source label '" + src_label + "' in degree " +
                    std::to_string(src_deg));
    int ti = target_->index_of(src_deg + degree_, tgt_label);
    if (ti < 0)
        throw Error("GradedMap: target label '" + tgt_label + "' not in degree " +
                    std::to_string(src_deg + degree_) + " (degree bookkeeping violation)");
    add_index(src_deg, si, ti, coeff);
}

void GradedMap::add_index(int src_deg, int src_idx, int tgt_idx, const Rational& coeff) {
    auto it = blocks_.find(src_deg);
    if (it == blocks_.end()) {
        it = blocks_.emplace(src_deg, SparseMatrix(target_->dim(src_deg + degree_), source_->dim(src_deg)))
                 .first;
    }
    it->second.add(tgt_idx, src_idx, coeff);
}

void GradedMap::set_block(int src_deg, SparseMatrix block) {
    if (block.rows() != target_->dim(src_deg + degree_) || block.cols() != source_->dim(src_deg))
        throw Error("GradedMap::set_block: shape mismatch at degree " + std::to_string(src_deg));
    blocks_[src_deg] = std::move(block);
}

SparseMatrix GradedMap::block(int k) const {
    auto it = blocks_.find(k);
    if (it != blocks_.end()) return it->second;
    return SparseMatrix(target_->dim(k + degree_), source_->dim(k));
}

GradedMap GradedMap::compose(const GradedMap& inner) const {
    if (inner.target_ != source_ && !(*inner.target_ == *source_))
        throw Error("GradedMap::compose: space mismatch");
    GradedMap out(inner.source_, target_, degree_ + inner.degree_);
    for (int k : inner.source_->degrees()) {
        SparseMatrix b = block(k + inner.degree_) * inner.block(k);
        if (!b.is_zero()) out.blocks_[k] = std::move(b);
    }
    return out;
}

GradedMap GradedMap::plus(const GradedMap& other) const {
    if (degree_ != other.degree_) throw Error("GradedMap::plus: degree mismatch");
    GradedMap out(source_, target_, degree_);
    std::set<int> ks;
    for (auto& [k, b] : blocks_) ks.insert(k);
    for (auto& [k, b] : other.blocks_) ks.insert(k);
    for (int k : ks) out.blocks_[k] = block(k) + other.block(k);
    return out;
}

GradedMap GradedMap::scaled(const Rational& c) const {
    GradedMap out(source_, target_, degree_);
    for (auto& [k, b] : blocks_) out.blocks_[k] = b.scaled(c);
    return out;
}

bool GradedMap::is_zero_on(int lo, int hi) const {
    for (auto& [k, b] : blocks_) {
        if (k < lo || k > hi) continue;
        if (!b.is_zero()) return false;
    }
    return true;
}

}  // namespace cychom
