#pragma once

// Hand-built fixtures used to cross-check the engine pipelines. The
// Hochschild complex of the trivial dga is written out from its closed-form
// operator table so that the dga pipeline can be verified against it.

#include "cychom/mixed.hpp"

namespace fixtures {

using namespace cychom;

// Basis 1^n (n >= 1 letters) in degree 1-n, b(1^n) = 1^{n-1} for odd n >= 3,
// B(1^n) = 2n 1^{n+1} for odd n. Materialized for words up to `max_words`.
inline MixedComplex point_hochschild_table(int max_words) {
    std::map<int, std::vector<std::string>> basis;
    auto name = [](int n) { return "w" + std::to_string(n); };
    for (int n = 1; n <= max_words; ++n) basis[1 - n] = {name(n)};
    auto sp = make_space(std::move(basis));
    GradedMap b(sp, sp, 1), B(sp, sp, -1);
    for (int n = 1; n <= max_words; ++n) {
        if (n >= 3 && n % 2 == 1) b.add(1 - n, name(n), name(n - 1), Rational(1));
        if (n % 2 == 1 && n + 1 <= max_words) B.add(1 - n, name(n), name(n + 1), Rational(2 * n));
    }
    Support s;
    s.lo = 1 - max_words;
    s.hi = 0;
    s.zero_below = false;
    s.zero_above = true;
    // B out of the top word is unknown only when that word is odd
    if (max_words % 2 == 1) s.incomplete = {1 - max_words};
    return MixedComplex(sp, std::move(b), std::move(B), s);
}

// R in degree 0, zero differentials.
inline MixedComplex point_mixed_local(int lo, int hi) {
    auto sp = make_space({{0, {"pt"}}});
    Support s;
    s.lo = lo;
    s.hi = hi;
    return MixedComplex(sp, GradedMap::zero(sp, sp, 1), GradedMap::zero(sp, sp, -1), s);
}

// R in every degree of [lo, hi], zero differentials (not a builtin; the
// all-degrees example used for validation tests).
inline MixedComplex all_degrees_local(int lo, int hi) {
    std::map<int, std::vector<std::string>> basis;
    for (int k = lo; k <= hi; ++k) basis[k] = {"e" + std::to_string(k)};
    auto sp = make_space(std::move(basis));
    Support s;
    s.lo = lo;
    s.hi = hi;
    s.zero_below = false;
    s.zero_above = false;
    return MixedComplex(sp, GradedMap::zero(sp, sp, 1), GradedMap::zero(sp, sp, -1), s);
}

}  // namespace fixtures
