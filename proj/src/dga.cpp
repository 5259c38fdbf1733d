#include "cychom/dga.hpp"

#include <algorithm>
#include <functional>

namespace cychom {

int DgaSpec::index_of(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    return -1;
}

DgaSpec::Combo DgaSpec::mul(int a, int b) const {
    if (a == unit) return {{b, Rational(1)}};
    if (b == unit) return {{a, Rational(1)}};
    auto it = product.find({a, b});
    return it == product.end() ? Combo{} : it->second;
}

DgaSpec::Combo DgaSpec::d_of(int a) const {
    auto it = differential.find(a);
    return it == differential.end() ? Combo{} : it->second;
}

namespace {

using Word = std::vector<int>;
using WordCombo = std::vector<std::pair<Word, Rational>>;

void accumulate(WordCombo& combo, const Word& w, const Rational& c) {
    if (c.is_zero()) return;
    for (auto& [w0, c0] : combo)
        if (w0 == w) {
            c0 += c;
            return;
        }
    combo.emplace_back(w, c);
}

int word_degree(const DgaSpec& A, const Word& w) {
    int d = 0;
    for (int a : w) d += A.degrees[static_cast<size_t>(a)];
    return d;
}

std::string word_label(const DgaSpec& A, const Word& w) {
    std::string out = "(";
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += "|";
        out += A.labels[static_cast<size_t>(w[i])];
    }
    return out + ")";
}

// combos under the dga structure maps
WordCombo face_image(const DgaSpec& A, const Word& w, int i) {
    const int n = static_cast<int>(w.size()) - 1;
    WordCombo out;
    if (i < n) {
        for (auto& [c, coeff] : A.mul(w[static_cast<size_t>(i)], w[static_cast<size_t>(i) + 1])) {
            Word v;
            v.reserve(w.size() - 1);
            v.insert(v.end(), w.begin(), w.begin() + i);
            v.push_back(c);
            v.insert(v.end(), w.begin() + i + 2, w.end());
            accumulate(out, v, coeff);
        }
    } else {
        Rational sgn = rotation_sign(A, w);
        for (auto& [c, coeff] : A.mul(w.back(), w.front())) {
            Word v;
            v.reserve(w.size() - 1);
            v.push_back(c);
            v.insert(v.end(), w.begin() + 1, w.end() - 1);
            accumulate(out, v, sgn * coeff);
        }
    }
    return out;
}

Word degen_image(const DgaSpec& A, const Word& w, int j) {
    Word v;
    v.reserve(w.size() + 1);
    v.insert(v.end(), w.begin(), w.begin() + j + 1);
    v.push_back(A.unit);
    v.insert(v.end(), w.begin() + j + 1, w.end());
    return v;
}

WordCombo cyc_image(const DgaSpec& A, const Word& w) {
    Word v;
    v.reserve(w.size());
    v.push_back(w.back());
    v.insert(v.end(), w.begin(), w.end() - 1);
    return {{v, rotation_sign(A, w)}};
}

WordCombo internal_d_image(const DgaSpec& A, const Word& w) {
    WordCombo out;
    int prefix = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        Rational sgn = (prefix % 2 != 0) ? Rational(-1) : Rational(1);
        for (auto& [c, coeff] : A.d_of(w[i])) {
            Word v = w;
            v[i] = c;
            accumulate(out, v, sgn * coeff);
        }
        prefix += A.degrees[static_cast<size_t>(w[i])];
    }
    return out;
}

}  // namespace

Rational rotation_sign(const DgaSpec& A, const std::vector<int>& word) {
    int last = A.degrees[static_cast<size_t>(word.back())];
    int rest = word_degree(A, word) - last;
    return ((last * rest) % 2 != 0) ? Rational(-1) : Rational(1);
}

CheckReport validate_dga(const DgaSpec& A) {
    CheckReport rep;
    const int nb = static_cast<int>(A.labels.size());
    bool unit_ok = A.unit >= 0 && A.unit < nb && A.degrees[static_cast<size_t>(A.unit)] == 0;
    rep.add("unit is a degree-0 basis element", unit_ok);
    if (!unit_ok) return rep;

    auto combo_add = [](DgaSpec::Combo& acc, const DgaSpec::Combo& inc, const Rational& scale) {
        for (auto& [i, c] : inc) {
            bool found = false;
            for (auto& [j, c0] : acc)
                if (j == i) {
                    c0 += c * scale;
                    found = true;
                }
            if (!found) acc.emplace_back(i, c * scale);
        }
    };
    auto combo_zero = [](const DgaSpec::Combo& acc) {
        for (auto& [i, c] : acc)
            if (!c.is_zero()) return false;
        return true;
    };
    auto mul_combo = [&](const DgaSpec::Combo& x, int b) {
        DgaSpec::Combo out;
        for (auto& [i, c] : x) combo_add(out, A.mul(i, b), c);
        return out;
    };
    auto mul_combo_left = [&](int a, const DgaSpec::Combo& x) {
        DgaSpec::Combo out;
        for (auto& [i, c] : x) combo_add(out, A.mul(a, i), c);
        return out;
    };

    // degree homogeneity of products and differential
    {
        bool ok = true;
        std::string w;
        for (auto& [ab, combo] : A.product) {
            int want = A.degrees[static_cast<size_t>(ab.first)] +
                       A.degrees[static_cast<size_t>(ab.second)];
            for (auto& [i, c] : combo)
                if (!c.is_zero() && A.degrees[static_cast<size_t>(i)] != want) {
                    ok = false;
                    w = A.labels[static_cast<size_t>(ab.first)] + "*" +
                        A.labels[static_cast<size_t>(ab.second)];
                }
        }
        for (auto& [a, combo] : A.differential) {
            int want = A.degrees[static_cast<size_t>(a)] + 1;
            for (auto& [i, c] : combo)
                if (!c.is_zero() && A.degrees[static_cast<size_t>(i)] != want) {
                    ok = false;
                    w = "d(" + A.labels[static_cast<size_t>(a)] + ")";
                }
        }
        rep.add("structure constants are degree-homogeneous", ok, w);
    }
    // associativity on basis triples
    {
        bool ok = true;
        std::string w;
        for (int a = 0; a < nb && ok; ++a)
            for (int b = 0; b < nb && ok; ++b)
                for (int c = 0; c < nb && ok; ++c) {
                    DgaSpec::Combo lhs = mul_combo(A.mul(a, b), c);
                    DgaSpec::Combo rhs = mul_combo_left(a, A.mul(b, c));
                    combo_add(lhs, rhs, Rational(-1));
                    if (!combo_zero(lhs)) {
                        ok = false;
                        w = "(" + A.labels[a] + "," + A.labels[b] + "," + A.labels[c] + ")";
                    }
                }
        rep.add("associativity", ok, w);
    }
    // graded Leibniz rule
    {
        bool ok = true;
        std::string w;
        for (int a = 0; a < nb && ok; ++a)
            for (int b = 0; b < nb && ok; ++b) {
                DgaSpec::Combo lhs;  // d(ab)
                for (auto& [i, c] : A.mul(a, b)) combo_add(lhs, A.d_of(i), c);
                DgaSpec::Combo rhs = mul_combo(A.d_of(a), b);
                Rational sgn = (A.degrees[static_cast<size_t>(a)] % 2 != 0) ? Rational(-1)
                                                                            : Rational(1);
                for (auto& [i, c] : A.d_of(b)) combo_add(rhs, A.mul(a, i), c * sgn);
                combo_add(lhs, rhs, Rational(-1));
                if (!combo_zero(lhs)) {
                    ok = false;
                    w = "(" + A.labels[a] + "," + A.labels[b] + ")";
                }
            }
        rep.add("graded Leibniz rule", ok, w);
    }
    // d^2 = 0
    {
        bool ok = true;
        std::string w;
        for (int a = 0; a < nb; ++a) {
            DgaSpec::Combo acc;
            for (auto& [i, c] : A.d_of(a)) combo_add(acc, A.d_of(i), c);
            if (!combo_zero(acc)) {
                ok = false;
                w = A.labels[static_cast<size_t>(a)];
            }
        }
        rep.add("d^2 = 0", ok, w);
    }
    if (A.augmented) {
        // with the basis-aligned convention, the augmentation sends the unit
        // to 1 and every other basis element to 0; it is a dga map iff
        // products of non-units have no unit component and d hits no unit
        bool ok = true;
        std::string w;
        for (int a = 0; a < nb && ok; ++a)
            for (int b = 0; b < nb; ++b) {
                if (a == A.unit || b == A.unit) continue;
                for (auto& [i, c] : A.mul(a, b))
                    if (i == A.unit && !c.is_zero()) {
                        ok = false;
                        w = A.labels[a] + "*" + A.labels[b];
                    }
            }
        for (int a = 0; a < nb && ok; ++a)
            for (auto& [i, c] : A.d_of(a))
                if (i == A.unit && !c.is_zero()) {
                    ok = false;
                    w = "d(" + A.labels[a] + ")";
                }
        rep.add("augmentation is a dga map", ok, w);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Word enumeration

namespace {

std::vector<Word> words_at_level(const DgaSpec& A, int letters, int ideg_lo, int ideg_hi) {
    std::vector<Word> out;
    Word cur(static_cast<size_t>(letters));
    std::function<void(int, int)> rec = [&](int pos, int deg) {
        if (deg > ideg_hi) return;  // degrees are nonnegative
        if (pos == letters) {
            if (deg >= ideg_lo) out.push_back(cur);
            return;
        }
        for (int a = 0; a < static_cast<int>(A.labels.size()); ++a) {
            cur[static_cast<size_t>(pos)] = a;
            rec(pos + 1, deg + A.degrees[static_cast<size_t>(a)]);
        }
    };
    rec(0, 0);
    return out;
}

int min_nonunit_degree(const DgaSpec& A) {
    int m = -1;
    for (size_t i = 0; i < A.labels.size(); ++i) {
        if (static_cast<int>(i) == A.unit) continue;
        if (m < 0 || A.degrees[i] < m) m = A.degrees[i];
    }
    return m;  // -1 when the non-unit part is zero
}

}  // namespace

CyclicComplex hochschild(const DgaSpec& A, int tlo, int thi, int cap) {
    for (int d : A.degrees)
        if (d < 0) throw InvalidComplex("hochschild: basis degrees must be nonnegative");
    int m = min_nonunit_degree(A);
    if (cap < 0) {
        if (m >= 0)
            throw InvalidComplex(
                "hochschild: the full word complex of a nontrivial dga needs an explicit cap");
        cap = std::max(0, -tlo) + 1;
    }

    CyclicComplex cc;
    cc.total_lo = tlo;
    cc.total_hi = thi;
    for (int n = 0; n <= cap; ++n) {
        // words with total degree in [tlo, thi+1]
        auto words = words_at_level(A, n + 1, std::max(0, tlo + n), thi + 1 + n);
        std::map<int, std::vector<std::string>> basis;
        std::map<std::string, Word> by_label;
        for (auto& w : words) {
            std::string lab = word_label(A, w);
            basis[word_degree(A, w)].push_back(lab);
            by_label.emplace(std::move(lab), w);
        }
        cc.levels.push_back(make_space(std::move(basis)));
        (void)by_label;
    }

    auto add_combo = [&](GradedMap& map, int src_level, int ideg, const std::string& src,
                         const WordCombo& combo) {
        for (auto& [w, c] : combo) {
            if (c.is_zero()) continue;
            const GradedSpacePtr& tgt = map.target();
            std::string lab = word_label(A, w);
            int ti = tgt->index_of(ideg + map.degree(), lab);
            if (ti < 0) continue;  // outside the materialized band
            map.add(ideg, src, lab, c);
        }
        (void)src_level;
    };

    for (int n = 0; n <= cap; ++n) {
        const GradedSpacePtr& L = cc.levels[static_cast<size_t>(n)];
        GradedMap d(L, L, 1);
        std::vector<GradedMap> faces;
        std::vector<GradedMap> degens;
        GradedMap t(L, L, 0);
        if (n >= 1)
            for (int i = 0; i <= n; ++i)
                faces.emplace_back(L, cc.levels[static_cast<size_t>(n) - 1], 0);
        if (n + 1 <= cap)
            for (int j = 0; j <= n; ++j)
                degens.emplace_back(L, cc.levels[static_cast<size_t>(n) + 1], 0);
        for (int g : L->degrees()) {
            for (const std::string& lab : L->basis(g)) {
                // decode the word from its label
                Word w;
                {
                    std::string inner = lab.substr(1, lab.size() - 2);
                    size_t pos = 0;
                    while (pos <= inner.size()) {
                        size_t bar = inner.find('|', pos);
                        std::string letter =
                            inner.substr(pos, bar == std::string::npos ? std::string::npos
                                                                       : bar - pos);
                        w.push_back(A.index_of(letter));
                        if (bar == std::string::npos) break;
                        pos = bar + 1;
                    }
                }
                add_combo(d, n, g, lab, internal_d_image(A, w));
                if (n >= 1)
                    for (int i = 0; i <= n; ++i) add_combo(faces[static_cast<size_t>(i)], n, g, lab,
                                                           face_image(A, w, i));
                if (n + 1 <= cap)
                    for (int j = 0; j <= n; ++j)
                        add_combo(degens[static_cast<size_t>(j)], n, g, lab,
                                  {{degen_image(A, w, j), Rational(1)}});
                add_combo(t, n, g, lab, cyc_image(A, w));
            }
        }
        cc.d.push_back(std::move(d));
        cc.face.push_back(std::move(faces));
        cc.degen.push_back(std::move(degens));
        cc.cyc.push_back(std::move(t));
    }

    Support s;
    s.lo = tlo;
    s.hi = thi;
    s.zero_below = false;
    s.zero_above = (m < 0) && thi >= 0;  // trivial non-unit part: totals <= 0
    if (m >= 0) {
        s.zero_above = false;
        for (int k = tlo; k <= thi; ++k) s.incomplete.insert(k);
    } else if ((cap + 1) % 2 != 0) {
        // the extra degeneracy out of the top level is not materialized and
        // the top word carries a nonzero B-image exactly when it is odd
        if (-cap >= tlo && -cap <= thi) s.incomplete.insert(-cap);
    }
    cc.total_support = s;
    return cc;
}

// ---------------------------------------------------------------------------
// Normalized and reduced complexes

namespace {

// word enumeration with non-unit letters in slots >= 1 (normalized) and
// optionally non-unit slot 0 at level 0 (reduced)
std::vector<Word> normalized_words(const DgaSpec& A, int letters, int ideg_lo, int ideg_hi,
                                   bool reduced) {
    std::vector<Word> out;
    Word cur(static_cast<size_t>(letters));
    std::function<void(int, int)> rec = [&](int pos, int deg) {
        if (deg > ideg_hi) return;
        if (pos == letters) {
            if (deg >= ideg_lo) out.push_back(cur);
            return;
        }
        for (int a = 0; a < static_cast<int>(A.labels.size()); ++a) {
            if (pos >= 1 && a == A.unit) continue;
            if (reduced && letters == 1 && a == A.unit) continue;
            cur[static_cast<size_t>(pos)] = a;
            rec(pos + 1, deg + A.degrees[static_cast<size_t>(a)]);
        }
    };
    rec(0, 0);
    return out;
}

bool is_normalized_word(const DgaSpec& A, const Word& w, bool reduced) {
    for (size_t i = 1; i < w.size(); ++i)
        if (w[i] == A.unit) return false;
    if (reduced && w.size() == 1 && w[0] == A.unit) return false;
    return true;
}

struct WordBasisComplex {
    GradedSpacePtr space;  // graded by total degree
    std::map<std::pair<int, std::string>, Word> words;  // (total degree, label)
};

MixedComplex build_normalized(const DgaSpec& A, Convention conv, int tlo, int thi, int cap,
                              bool reduced) {
    CheckReport v = validate_dga(A);
    if (!v.all_pass()) throw InvalidComplex("normalized_mixed: dga axioms fail");
    if (reduced && !A.augmented) throw NotAugmented("reduced complex requires an augmentation");
    int m = min_nonunit_degree(A);
    bool exact_cap = (m >= 2) || (m < 0);
    if (cap < 0) {
        if (!exact_cap)
            throw InvalidComplex("normalized_mixed: automatic cap needs the non-unit part in degrees >= 2");
        cap = std::max(0, thi) + 2;
    }

    std::map<int, std::vector<std::string>> basis;
    std::map<int, std::map<std::string, Word>> words;
    for (int n = 0; n <= cap; ++n) {
        for (auto& w : normalized_words(A, n + 1, std::max(0, tlo + n), thi + 1 + n, reduced)) {
            int total = word_degree(A, w) - n;
            if (total < tlo - 1 || total > thi + 1) continue;
            std::string lab = word_label(A, w);
            basis[total].push_back(lab);
            words[total].emplace(std::move(lab), w);
        }
    }
    auto sp = make_space(std::move(basis));

    // project a full-complex combo to the normalized (or reduced) basis
    auto project_add = [&](GradedMap& map, int total, const std::string& src,
                           const WordCombo& combo) {
        for (auto& [w, c] : combo) {
            if (c.is_zero()) continue;
            if (!is_normalized_word(A, w, reduced)) continue;
            std::string lab = word_label(A, w);
            int ti = sp->index_of(total + map.degree(), lab);
            if (ti < 0) continue;
            map.add(total, src, lab, c);
        }
    };

    GradedMap delta(sp, sp, 1), B(sp, sp, -1);
    for (int total : sp->degrees()) {
        for (auto& [lab, w] : words[total]) {
            const int n = static_cast<int>(w.size()) - 1;
            const int k = total;
            // delta = d + b with the convention signs
            WordCombo img;
            Rational dscale = (conv == Convention::loday) ? (((k + 1) % 2 != 0) ? Rational(-1) : Rational(1))
                                                          : Rational(1);
            for (auto& [wd, c] : internal_d_image(A, w)) accumulate(img, wd, c * dscale);
            Rational bscale = (conv == Convention::paper) ? (((k + 1) % 2 != 0) ? Rational(-1) : Rational(1))
                                                          : Rational(1);
            for (int i = 0; i <= n && n >= 1; ++i) {
                Rational sgn = (i % 2 != 0) ? Rational(-1) : Rational(1);
                for (auto& [wf, c] : face_image(A, w, i)) accumulate(img, wf, c * sgn * bscale);
            }
            project_add(delta, total, lab, img);

            // B projects to s N (the cyclic part of the extra degeneracy is
            // degenerate); both conventions scale s by (-1)^{|c|} or not
            WordCombo nimg;
            {
                // N = sum of signed rotations
                WordCombo cur{{w, Rational(1)}};
                Rational lvl_sign = (n % 2 != 0) ? Rational(-1) : Rational(1);
                for (int p = 0; p <= n; ++p) {
                    if (p > 0) {
                        WordCombo nxt;
                        for (auto& [wc, cc0] : cur)
                            for (auto& [wr, cr] : cyc_image(A, wc))
                                accumulate(nxt, wr, cr * cc0 * lvl_sign);
                        cur = std::move(nxt);
                    }
                    for (auto& [wc, cc0] : cur) accumulate(nimg, wc, cc0);
                }
            }
            WordCombo simg;
            Rational sscale = (conv == Convention::paper) ? ((k % 2 != 0) ? Rational(-1) : Rational(1))
                                                          : Rational(1);
            for (auto& [wn, c] : nimg) {
                // extra degeneracy: unit in slot 0
                Word v;
                v.reserve(wn.size() + 1);
                v.push_back(A.unit);
                v.insert(v.end(), wn.begin(), wn.end());
                accumulate(simg, v, c * sscale);
            }
            project_add(B, total, lab, simg);
        }
    }

    Support s;
    s.lo = tlo;
    s.hi = thi;
    s.zero_below = true;
    s.zero_above = false;
    if (m < 0) s.zero_above = thi >= 0;
    if (!exact_cap)
        for (int k = tlo; k <= thi; ++k) s.incomplete.insert(k);
    return MixedComplex(sp, std::move(delta), std::move(B), s);
}

}  // namespace

MixedComplex normalized_mixed(const DgaSpec& A, Convention conv, int tlo, int thi, int cap) {
    return build_normalized(A, conv, tlo, thi, cap, false);
}

MixedComplex reduced_mixed(const DgaSpec& A, Convention conv, int tlo, int thi, int cap) {
    return build_normalized(A, conv, tlo, thi, cap, true);
}

LambdaQuotient reduced_lambda_complex(const DgaSpec& A, Convention conv, int tlo, int thi, int cap) {
    CheckReport v = validate_dga(A);
    if (!v.all_pass()) throw InvalidComplex("reduced_lambda_complex: dga axioms fail");
    if (!A.augmented) throw NotAugmented("reduced Connes homology requires an augmentation");
    int m = min_nonunit_degree(A);
    bool exact_cap = (m >= 2) || (m < 0);
    if (cap < 0) {
        if (!exact_cap)
            throw InvalidComplex("reduced_lambda_complex: automatic cap needs degrees >= 2");
        cap = std::max(1, thi) + 2;
    }

    // words with no unit letter at all
    std::map<int, std::vector<std::string>> basis;
    std::map<int, std::map<std::string, Word>> words;
    for (int letters = 1; letters <= cap + 1; ++letters) {
        Word cur(static_cast<size_t>(letters));
        std::function<void(int, int)> rec = [&](int pos, int deg) {
            if (deg > thi + 1 + letters - 1) return;
            if (pos == letters) {
                int total = deg - (letters - 1);
                if (total < tlo - 1 || total > thi + 1) return;
                std::string lab = word_label(A, cur);
                basis[total].push_back(lab);
                words[total].emplace(std::move(lab), cur);
                return;
            }
            for (int a = 0; a < static_cast<int>(A.labels.size()); ++a) {
                if (a == A.unit) continue;
                cur[static_cast<size_t>(pos)] = a;
                rec(pos + 1, deg + A.degrees[static_cast<size_t>(a)]);
            }
        };
        rec(0, 0);
    }
    auto sp = make_space(std::move(basis));

    auto no_unit = [&](const Word& w) {
        for (int a : w)
            if (a == A.unit) return false;
        return true;
    };

    GradedMap diff(sp, sp, 1), t(sp, sp, 0);
    for (int total : sp->degrees()) {
        for (auto& [lab, w] : words[total]) {
            const int n = static_cast<int>(w.size()) - 1;
            WordCombo img;
            Rational dscale = (conv == Convention::loday)
                                  ? (((total + 1) % 2 != 0) ? Rational(-1) : Rational(1))
                                  : Rational(1);
            for (auto& [wd, c] : internal_d_image(A, w)) accumulate(img, wd, c * dscale);
            Rational bscale = (conv == Convention::paper)
                                  ? (((total + 1) % 2 != 0) ? Rational(-1) : Rational(1))
                                  : Rational(1);
            for (int i = 0; i <= n && n >= 1; ++i) {
                Rational sgn = (i % 2 != 0) ? Rational(-1) : Rational(1);
                for (auto& [wf, c] : face_image(A, w, i)) accumulate(img, wf, c * sgn * bscale);
            }
            for (auto& [wi, c] : img) {
                if (c.is_zero() || !no_unit(wi)) continue;
                std::string li = word_label(A, wi);
                if (sp->index_of(total + 1, li) >= 0) diff.add(total, lab, li, c);
            }
            Rational lvl_sign = (n % 2 != 0) ? Rational(-1) : Rational(1);
            for (auto& [wr, c] : cyc_image(A, w)) {
                std::string lr = word_label(A, wr);
                if (sp->index_of(total, lr) >= 0) t.add(total, lab, lr, c * lvl_sign);
            }
        }
    }

    LambdaQuotient out;
    out.space = sp;
    out.diff = std::move(diff);
    out.t = std::move(t);
    out.support.lo = tlo;
    out.support.hi = thi;
    out.support.zero_below = true;
    out.support.zero_above = (m < 0);
    if (!exact_cap)
        for (int k = tlo; k <= thi; ++k) out.support.incomplete.insert(k);
    return out;
}

DimTable reduced_connes_table(const DgaSpec& A, Convention conv, const Window& w) {
    w.validate();
    int lo = w.degree_lo - w.margin, hi = w.degree_hi + w.margin + 2;
    LambdaQuotient lq = reduced_lambda_complex(A, conv, lo, hi);
    GradedMap one_minus_t = GradedMap::identity(lq.space).plus(lq.t.scaled(Rational(-1)));
    TruncComplex c;
    c.lo = lo;
    c.hi = hi;
    for (int k = lo; k <= hi; ++k) {
        c.labels[k] = lq.space->basis(k);
        c.complete[k] = lq.support.complete_at(k) || lq.support.known_zero(k);
        if (k < hi) c.d[k] = lq.diff.block(k);
        SparseMatrix Q = column_reduce(one_minus_t.block(k));
        if (Q.cols() > 0) c.quot[k] = std::move(Q);
    }
    SliceHomology H(c);
    DimTable out;
    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        out.dims[k] = H.at(k + 1).dim;
        out.trust[k] = (c.complete_at(k) && c.complete_at(k + 1) && c.complete_at(k + 2))
                           ? Trust::exact
                           : Trust::truncated;
    }
    return out;
}

CheckReport reduced_corollary_check(const DgaSpec& A, const Window& w) {
    CheckReport rep;
    w.validate();
    auto [clo, chi] = required_degree_range_all(w);
    MixedComplex red = reduced_mixed(A, Convention::loday, clo, chi);
    Window wm = w;
    wm.degree_lo -= 1;
    ModuleTable puinv = flavour_homology(red, Flavour::poly_uinv, w);
    ModuleTable suinv = flavour_homology(red, Flavour::series_uinv, w);
    ModuleTable pu = flavour_homology(red, Flavour::poly_u, wm);
    DimTable lam = reduced_connes_table(A, Convention::loday, wm);
    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        int a = puinv.at(k).dim, b = suinv.at(k).dim;
        int c = lam.dims.at(k - 1), d = pu.at(k - 1).dim;
        bool ok = (a == b && b == c && c == d);
        rep.add("reduced HC^k_[u-1] = HC^k_[[u-1]] = HC^{k-1}_lambda = HC^{k-1}_[u] at k=" +
                    std::to_string(k),
                ok,
                ok ? ""
                   : std::to_string(a) + "/" + std::to_string(b) + "/" + std::to_string(c) + "/" +
                         std::to_string(d));
    }
    for (Flavour f : {Flavour::laurent_poly, Flavour::poly_u_series_uinv}) {
        ModuleTable t = flavour_homology(red, f, w);
        bool ok = true;
        std::string witness;
        for (int k = w.degree_lo; k <= w.degree_hi; ++k)
            if (t.at(k).dim != 0) {
                ok = false;
                witness = "degree " + std::to_string(k);
            }
        rep.add(std::string("reduced ") + flavour_traits(f).name + " table vanishes", ok, witness);
    }
    {
        ModuleTable spi = flavour_homology(red, Flavour::series_u_poly_uinv, w);
        ModuleTable ls = flavour_homology(red, Flavour::laurent_series, w);
        bool ok = true;
        std::string witness;
        for (int k = w.degree_lo; k <= w.degree_hi; ++k)
            if (spi.at(k).dim != ls.at(k).dim) {
                ok = false;
                witness = "degree " + std::to_string(k);
            }
        rep.add("reduced [[u,u-1] and [[u,u-1]] tables agree", ok, witness);
    }
    return rep;
}

CheckReport reduced_cyc_identities(const DgaSpec& A, const Window& w) {
    CheckReport rep;
    w.validate();
    auto [clo, chi] = required_degree_range_all(w);
    MixedComplex red = reduced_mixed(A, Convention::loday, clo, chi);
    MixedComplex norm = normalized_mixed(A, Convention::loday, clo, chi);

    ModuleTable red_psi = flavour_homology(red, Flavour::poly_u_series_uinv, w);
    for (int k = w.degree_lo; k <= w.degree_hi; ++k)
        rep.add("reduced HC_[u,u-1]] vanishes at " + std::to_string(k), red_psi.at(k).dim == 0,
                red_psi.at(k).dim == 0 ? "" : "dim " + std::to_string(red_psi.at(k).dim));

    Window wm = w;
    wm.degree_hi += 1;
    ModuleTable red_suinv = flavour_homology(red, Flavour::series_uinv, wm);
    ModuleTable red_pu = flavour_homology(red, Flavour::poly_u, w);
    DimTable lam = reduced_connes_table(A, Convention::loday, w);
    for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
        int a = red_suinv.at(k + 1).dim, b = lam.dims.at(k), c = red_pu.at(k).dim;
        bool ok = (a == b && b == c);
        rep.add("reduced HC^{k+1}_[[u-1]] = HC^k_lambda = HC^k_[u] at k=" + std::to_string(k), ok,
                ok ? "" : std::to_string(a) + "/" + std::to_string(b) + "/" + std::to_string(c));
    }

    // splitting of each flavour table: normalized = point part + reduced part
    MixedComplex pt = normalized_mixed(DgaSpec{"R", {"1"}, {0}, 0, {}, {}, false},
                                       Convention::loday, clo, chi);
    for (Flavour f : all_flavours()) {
        ModuleTable tn = flavour_homology(norm, f, w);
        ModuleTable tr = flavour_homology(red, f, w);
        ModuleTable tp = flavour_homology(pt, f, w);
        bool ok = true;
        std::string witness;
        for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
            if (tn.at(k).dim != tr.at(k).dim + tp.at(k).dim) {
                ok = false;
                witness = "degree " + std::to_string(k);
                break;
            }
        }
        rep.add(std::string("splitting of the normalized table, flavour ") + flavour_traits(f).name,
                ok, witness);
    }
    return rep;
}

}  // namespace cychom
