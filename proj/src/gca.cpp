#include "cychom/gca.hpp"

#include <algorithm>
#include <functional>

namespace cychom {

FreeGca::FreeGca(std::vector<Gen> gens) : gens_(std::move(gens)) {
    for (auto& g : gens_)
        if (g.degree < 1) throw Error("FreeGca: generator degrees must be >= 1");
}

int FreeGca::degree(const Mono& m) const {
    int d = 0;
    for (size_t i = 0; i < gens_.size(); ++i) d += m[i] * gens_[i].degree;
    return d;
}

std::string FreeGca::label(const Mono& m) const {
    std::string out;
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += gens_[i].name;
        if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

std::map<int, std::vector<FreeGca::Mono>> FreeGca::enumerate(int hi) const {
    std::map<int, std::vector<Mono>> out;
    Mono cur(gens_.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int deg) {
        if (i == gens_.size()) {
            out[deg].push_back(cur);
            return;
        }
        int maxe = (gens_[i].degree % 2 != 0) ? 1 : (hi - deg) / gens_[i].degree;
        for (int e = 0; e <= maxe && deg + e * gens_[i].degree <= hi; ++e) {
            cur[i] = e;
            rec(i + 1, deg + e * gens_[i].degree);
        }
        cur[i] = 0;
    };
    rec(0, 0);
    return out;
}

FreeGca::Poly FreeGca::mul(const Mono& a, const Mono& b) const {
    // Koszul sign from moving each factor of b past the later factors of a.
    long swaps = 0;
    long odd_tail = 0;  // parity-weighted count of a-factors with index > j
    // precompute parity of a_i * deg_i for suffix sums
    std::vector<int> apar(gens_.size());
    for (size_t i = 0; i < gens_.size(); ++i) apar[i] = (a[i] * gens_[i].degree) & 1;
    std::vector<int> suffix(gens_.size() + 1, 0);
    for (int i = static_cast<int>(gens_.size()) - 1; i >= 0; --i)
        suffix[i] = suffix[i + 1] + apar[i];
    Mono c(gens_.size());
    for (size_t j = 0; j < gens_.size(); ++j) {
        if ((gens_[j].degree % 2 != 0) && a[j] + b[j] > 1) return {};
        c[j] = a[j] + b[j];
        int bpar = (b[j] * gens_[j].degree) & 1;
        if (bpar) swaps += suffix[j + 1];
    }
    (void)odd_tail;
    Poly out;
    out[c] = (swaps & 1) ? Rational(-1) : Rational(1);
    return out;
}

FreeGca::Poly FreeGca::mul(const Poly& a, const Poly& b) const {
    Poly out;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b)
            for (auto& [mc, s] : mul(ma, mb)) {
                auto [it, fresh] = out.emplace(mc, ca * cb * s);
                if (!fresh) it->second += ca * cb * s;
            }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

FreeGca::Poly FreeGca::derive(const std::map<int, Poly>& gen_images, int der_degree,
                              const Mono& m) const {
    // Leibniz over the expanded factor sequence g_{i1} g_{i2} ... with the
    // Koszul sign (-1)^{|der| * deg(prefix)}.
    Poly out;
    int prefix_deg = 0;
    for (size_t i = 0; i < gens_.size(); ++i) {
        for (int rep = 0; rep < m[i]; ++rep) {
            auto img = gen_images.find(static_cast<int>(i));
            if (img != gen_images.end() && !img->second.empty()) {
                // prefix: generators < i plus rep copies of g_i
                Mono pre(gens_.size(), 0);
                for (size_t j = 0; j < i; ++j) pre[j] = m[j];
                pre[i] = rep;
                Mono post(gens_.size(), 0);
                post[i] = m[i] - rep - 1;
                for (size_t j = i + 1; j < gens_.size(); ++j) post[j] = m[j];
                Poly termpre;
                termpre[pre] = ((der_degree * prefix_deg) & 1) ? Rational(-1) : Rational(1);
                Poly term = mul(mul(termpre, img->second), [&] {
                    Poly p;
                    p[post] = Rational(1);
                    return p;
                }());
                for (auto& [mc, c] : term) {
                    auto [it, fresh] = out.emplace(mc, c);
                    if (!fresh) it->second += c;
                }
            }
            prefix_deg += gens_[i].degree;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

int FreeGca::finite_top_degree() const {
    int top = 0;
    for (auto& g : gens_) {
        if (g.degree % 2 == 0) return -1;
        top += g.degree;
    }
    return top;
}

MixedComplex gca_mixed_complex(const FreeGca& A, const std::map<int, FreeGca::Poly>& delta_images,
                               const std::map<int, FreeGca::Poly>& d_images, int chi) {
    auto monos = A.enumerate(chi);
    std::map<int, std::vector<std::string>> basis;
    std::map<int, std::vector<FreeGca::Mono>> by_deg;
    for (auto& [deg, ms] : monos) {
        for (auto& m : ms) {
            basis[deg].push_back(A.label(m));
            by_deg[deg].push_back(m);
        }
    }
    auto sp = make_space(std::move(basis));
    GradedMap delta(sp, sp, 1), dd(sp, sp, -1);
    for (auto& [deg, ms] : by_deg) {
        for (auto& m : ms) {
            if (deg + 1 <= chi) {
                for (auto& [mc, c] : A.derive(delta_images, 1, m))
                    delta.add(deg, A.label(m), A.label(mc), c);
            }
            for (auto& [mc, c] : A.derive(d_images, -1, m)) dd.add(deg, A.label(m), A.label(mc), c);
        }
    }
    Support s;
    s.lo = 0;
    s.hi = chi;
    s.zero_below = true;
    int top = A.finite_top_degree();
    s.zero_above = (top >= 0 && chi >= top);
    return MixedComplex(sp, std::move(delta), std::move(dd), s);
}

}  // namespace cychom
