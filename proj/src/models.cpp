#include "cychom/models.hpp"

#include <algorithm>

namespace cychom {

MixedComplex point_mixed(int lo, int hi) {
    auto sp = make_space({{0, {"pt"}}});
    Support s;
    s.lo = lo;
    s.hi = hi;
    return MixedComplex(sp, GradedMap::zero(sp, sp, 1), GradedMap::zero(sp, sp, -1), s);
}

MixedComplex es1_mixed(int chi) {
    // Lambda[alpha, beta], |alpha| = 1, |beta| = 2, delta alpha = beta,
    // D alpha = 1, extended as derivations.
    FreeGca A({{"a", 1}, {"b", 2}});
    std::map<int, FreeGca::Poly> delta_imgs, d_imgs;
    FreeGca::Mono beta{0, 1};
    delta_imgs[0] = FreeGca::Poly{{beta, Rational(1)}};
    d_imgs[0] = FreeGca::Poly{{A.unit(), Rational(1)}};
    return gca_mixed_complex(A, delta_imgs, d_imgs, chi);
}

DgaSpec point_dga() {
    DgaSpec A;
    A.name = "point_dga";
    A.labels = {"1"};
    A.degrees = {0};
    A.unit = 0;
    A.augmented = true;
    return A;
}

DgaSpec sphere_cohomology(int n) {
    if (n < 2) throw NotSimplyConnected("sphere cohomology requires n >= 2");
    DgaSpec A;
    A.name = "sphere" + std::to_string(n);
    A.labels = {"1", "v"};
    A.degrees = {0, n};
    A.unit = 0;
    A.augmented = true;
    // v*v = 0; products with the unit are implied
    return A;
}

MixedComplex point_hochschild_mixed(int tlo, Convention conv) {
    return to_mixed(hochschild(point_dga(), tlo, 0), conv);
}

std::pair<MixedMorphism, MixedMorphism> quiso_chain(const Window& w) {
    auto [clo, chi] = required_degree_range_all(w);
    MixedComplex cr = point_hochschild_mixed(std::min(clo, -1));
    MixedComplex pt = point_mixed(clo, chi);
    MixedComplex es1 = es1_mixed(std::max(chi, 2));

    GradedMap f1(cr.space_ptr(), pt.space_ptr(), 0);
    f1.add(0, "(1)", "pt", Rational(1));  // the one-letter word maps to the point
    GradedMap f2(pt.space_ptr(), es1.space_ptr(), 0);
    f2.add(0, "pt", "1", Rational(1));
    return {MixedMorphism(cr, pt, std::move(f1)), MixedMorphism(std::move(pt), std::move(es1), std::move(f2))};
}

FreeGcaSpec sphere_minimal_model(int n) {
    if (n < 2) throw NotSimplyConnected("sphere model requires n >= 2");
    FreeGcaSpec spec;
    if (n % 2 != 0) {
        spec.gens.push_back({"a", n});
        // da = 0
    } else {
        spec.gens.push_back({"a", n});
        spec.gens.push_back({"b", 2 * n - 1});
        spec.d_polys.resize(2);
        spec.d_polys[1] = {{"a^2", Rational(1)}};  // db = a^2
    }
    spec.name = "sphere" + std::to_string(n);
    return spec;
}

namespace {

FreeGca::Mono parse_mono(const FreeGca& A, const std::string& text) {
    // "a^2*b" style in terms of generator names; "1" is the unit
    FreeGca::Mono m = A.unit();
    if (text == "1") return m;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t star = text.find('*', pos);
        std::string fac = text.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        pos = (star == std::string::npos) ? text.size() : star + 1;
        std::string name = fac;
        int exp = 1;
        size_t car = fac.find('^');
        if (car != std::string::npos) {
            name = fac.substr(0, car);
            exp = std::stoi(fac.substr(car + 1));
        }
        bool found = false;
        for (size_t i = 0; i < A.gens().size(); ++i)
            if (A.gens()[i].name == name) {
                m[i] += exp;
                found = true;
                break;
            }
        if (!found) throw UnknownName("unknown generator '" + name + "' in monomial");
    }
    return m;
}

}  // namespace

LoopModel loop_model(const FreeGcaSpec& spec, int chi) {
    for (auto& g : spec.gens)
        if (g.degree < 2) throw NotSimplyConnected("loop model requires generator degrees >= 2");

    // LM = Lambda[x_i, xbar_i] with deg xbar = deg x - 1; B x = xbar,
    // B xbar = 0; d xbar = -B(d x), all extended as derivations.
    std::vector<FreeGca::Gen> gens;
    for (auto& g : spec.gens) {
        gens.push_back({g.name, g.degree});
        gens.push_back({g.name + "'", g.degree - 1});
    }
    FreeGca LM(gens);
    const size_t ng = spec.gens.size();

    std::map<int, FreeGca::Poly> b_imgs;  // the degree -1 derivation
    for (size_t i = 0; i < ng; ++i) {
        FreeGca::Mono bar = LM.unit();
        bar[2 * i + 1] = 1;
        b_imgs[static_cast<int>(2 * i)] = FreeGca::Poly{{bar, Rational(1)}};
    }

    // base differential on the x generators (monomials in the x's only)
    std::map<int, FreeGca::Poly> d_imgs;
    for (size_t i = 0; i < ng && i < spec.d_polys.size(); ++i) {
        FreeGca::Poly p;
        for (auto& [mono_text, coeff] : spec.d_polys[i]) {
            // translate a monomial in base generators into LM exponents
            FreeGca base(spec.gens);
            FreeGca::Mono bm = parse_mono(base, mono_text);
            FreeGca::Mono lm = LM.unit();
            for (size_t j = 0; j < ng; ++j) lm[2 * j] = bm[j];
            p[lm] = coeff;
        }
        if (!p.empty()) d_imgs[static_cast<int>(2 * i)] = std::move(p);
    }
    // d xbar_i := -B(d x_i)
    for (size_t i = 0; i < ng; ++i) {
        auto it = d_imgs.find(static_cast<int>(2 * i));
        if (it == d_imgs.end()) continue;
        FreeGca::Poly img;
        for (auto& [m, c] : it->second)
            for (auto& [mb, cb] : LM.derive(b_imgs, -1, m)) {
                auto [jt, fresh] = img.emplace(mb, -(c * cb));
                if (!fresh) jt->second += -(c * cb);
            }
        for (auto jt = img.begin(); jt != img.end();)
            jt = jt->second.is_zero() ? img.erase(jt) : std::next(jt);
        if (!img.empty()) d_imgs[static_cast<int>(2 * i + 1)] = std::move(img);
    }

    LoopModel out{LM, gca_mixed_complex(LM, d_imgs, b_imgs, chi)};
    return out;
}

MixedComplex reduced_loop_complex(const LoopModel& lm) {
    // augmentation ideal: drop the unit monomial (a mixed subcomplex, since
    // nothing of degree 1 maps onto the unit under B and d raises degree)
    const MixedComplex& M = lm.mixed;
    std::map<int, std::vector<std::string>> basis;
    Support s = M.support();
    for (int k = s.lo; k <= s.hi; ++k) {
        for (auto& l : M.space().basis(k))
            if (!(k == 0 && l == "1")) basis[k].push_back(l);
    }
    auto sp = make_space(std::move(basis));
    GradedMap delta(sp, sp, 1), dd(sp, sp, -1);
    for (int k = s.lo; k <= s.hi; ++k) {
        for (auto& l : sp->basis(k)) {
            int idx = M.space().index_of(k, l);
            if (k + 1 <= s.hi) {
                SparseVec img = M.delta().block(k).column(idx);
                for (auto& [ti, v] : img.entries()) {
                    const std::string& tl = M.space().label(k + 1, ti);
                    if (sp->index_of(k + 1, tl) >= 0) delta.add(k, l, tl, v);
                }
            }
            if (k - 1 >= s.lo) {
                SparseVec img = M.D().block(k).column(idx);
                for (auto& [ti, v] : img.entries()) {
                    const std::string& tl = M.space().label(k - 1, ti);
                    if (sp->index_of(k - 1, tl) >= 0) dd.add(k, l, tl, v);
                }
            }
        }
    }
    return MixedComplex(sp, std::move(delta), std::move(dd), s);
}

ModuleTable equivariant_loop_table(const FreeGcaSpec& spec, const Window& w, bool relative) {
    auto [clo, chi] = required_degree_range(Flavour::series_u, w);
    (void)clo;
    LoopModel lm = loop_model(spec, std::max(chi, 1));
    if (!relative) return flavour_homology(lm.mixed, Flavour::series_u, w);
    return flavour_homology(reduced_loop_complex(lm), Flavour::series_u, w);
}

}  // namespace cychom
