#include "cychom/specfile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cychom {

namespace {

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '\'' || c == '.' || c == '-' || c == '^';
        if (!ok) return false;
    }
    return true;
}

struct Line {
    int number;
    std::vector<std::string> tokens;
    std::string raw;
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (!toks.empty()) out.push_back({number, std::move(toks), raw});
    }
    return out;
}

Rational parse_rational(const std::string& text, int line) {
    try {
        return Rational::parse(text);
    } catch (const Error&) {
        throw ParseError("bad rational literal '" + text + "'", line, 1);
    }
}

int parse_int(const std::string& text, int line) {
    try {
        size_t used = 0;
        int v = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError("bad integer '" + text + "'", line, 1);
    }
}

}  // namespace

std::string SpecFile::display_name() const {
    if (auto* m = std::get_if<MixedSpec>(&payload)) return m->name;
    if (auto* d = std::get_if<DgaSpec>(&payload)) return d->name;
    if (auto* g = std::get_if<FreeGcaSpec>(&payload)) return g->name;
    return std::get<BuiltinRef>(payload).name;
}

SpecFile parse_spec(const std::string& text) {
    auto lines = tokenize(text);
    if (lines.empty()) throw ParseError("empty spec", 1, 1);

    std::string kind;
    std::string section;
    std::string name;
    // collected sections
    std::map<int, std::vector<std::string>> basis;
    std::vector<std::pair<std::string, int>> labeled_degrees;  // declaration order
    std::vector<std::tuple<std::string, std::string, Rational>> delta, dd;
    std::vector<std::tuple<std::string, std::string, std::string, Rational>> product;
    std::vector<std::tuple<std::string, std::string, Rational>> differential;
    std::vector<std::tuple<std::string, std::string, Rational>> model_diff;
    std::string unit_label;
    bool augmented = false;

    auto expect_kind = [&](const char* want, int line) {
        if (kind != want)
            throw ParseError(std::string("section requires a [") + want + "] spec", line, 1);
    };

    for (auto& ln : lines) {
        const std::string& head = ln.tokens[0];
        if (head.size() >= 2 && head.front() == '[' && head.back() == ']') {
            std::string sec = head.substr(1, head.size() - 2);
            if (sec == "mixed" || sec == "dga" || sec == "model" || sec == "builtin") {
                if (!kind.empty()) throw ParseError("multiple kind sections", ln.number, 1);
                kind = sec;
                section = "header";
            } else if (sec == "basis" || sec == "delta" || sec == "D" || sec == "product" ||
                       sec == "differential" || sec == "generators" || sec == "augmentation") {
                if (kind.empty()) throw ParseError("section before the kind header", ln.number, 1);
                section = sec;
            } else {
                throw ParseError("unknown section [" + sec + "]", ln.number, 1);
            }
            continue;
        }
        if (kind.empty()) throw ParseError("content before the kind header", ln.number, 1);

        if (section == "header") {
            if (ln.tokens.size() == 3 && ln.tokens[0] == "name" && ln.tokens[1] == "=") {
                name = ln.tokens[2];
            } else if (ln.tokens.size() == 3 && ln.tokens[0] == "unit" && ln.tokens[1] == "=") {
                expect_kind("dga", ln.number);
                unit_label = ln.tokens[2];
            } else {
                throw ParseError("expected 'name = <value>'", ln.number, 1);
            }
            continue;
        }
        if (section == "basis" || section == "generators") {
            if (ln.tokens.size() != 2)
                throw ParseError("expected '<label> <degree>'", ln.number, 1);
            if (!valid_label(ln.tokens[0]))
                throw ParseError("invalid label '" + ln.tokens[0] + "'", ln.number, 1);
            int deg = parse_int(ln.tokens[1], ln.number);
            for (auto& [l, d] : labeled_degrees)
                if (l == ln.tokens[0]) throw ParseError("duplicate label '" + l + "'", ln.number, 1);
            labeled_degrees.emplace_back(ln.tokens[0], deg);
            basis[deg].push_back(ln.tokens[0]);
            continue;
        }
        if (section == "delta" || section == "D") {
            expect_kind("mixed", ln.number);
            if (ln.tokens.size() != 3)
                throw ParseError("expected '<source> <target> <coefficient>'", ln.number, 1);
            Rational c = parse_rational(ln.tokens[2], ln.number);
            auto& dst = (section == "delta") ? delta : dd;
            dst.emplace_back(ln.tokens[0], ln.tokens[1], c);
            continue;
        }
        if (section == "product") {
            expect_kind("dga", ln.number);
            if (ln.tokens.size() != 4)
                throw ParseError("expected '<a> <b> <c> <coefficient>'", ln.number, 1);
            product.emplace_back(ln.tokens[0], ln.tokens[1], ln.tokens[2],
                                 parse_rational(ln.tokens[3], ln.number));
            continue;
        }
        if (section == "differential") {
            if (kind == "dga") {
                if (ln.tokens.size() != 3)
                    throw ParseError("expected '<source> <target> <coefficient>'", ln.number, 1);
                differential.emplace_back(ln.tokens[0], ln.tokens[1],
                                          parse_rational(ln.tokens[2], ln.number));
            } else if (kind == "model") {
                if (ln.tokens.size() != 3)
                    throw ParseError("expected '<generator> <monomial> <coefficient>'", ln.number, 1);
                model_diff.emplace_back(ln.tokens[0], ln.tokens[1],
                                        parse_rational(ln.tokens[2], ln.number));
            } else {
                throw ParseError("differential section requires a dga or model spec", ln.number, 1);
            }
            continue;
        }
        if (section == "augmentation") {
            expect_kind("dga", ln.number);
            if (ln.tokens.size() != 1 || (ln.tokens[0] != "yes" && ln.tokens[0] != "no"))
                throw ParseError("expected 'yes' or 'no'", ln.number, 1);
            augmented = (ln.tokens[0] == "yes");
            continue;
        }
        throw ParseError("content outside any section", ln.number, 1);
    }

    auto find_label = [&labeled_degrees](const std::string& l) {
        for (size_t i = 0; i < labeled_degrees.size(); ++i)
            if (labeled_degrees[i].first == l) return static_cast<int>(i);
        return -1;
    };
    auto require_label = [&](const std::string& l) {
        if (find_label(l) < 0) throw ParseError("undeclared label '" + l + "'", 1, 1);
    };

    SpecFile out;
    if (kind == "builtin") {
        if (name.empty()) throw ParseError("builtin spec needs 'name = <builtin>'", 1, 1);
        out.payload = BuiltinRef{name};
        return out;
    }
    if (kind == "mixed") {
        for (auto& [s, t, c] : delta) {
            require_label(s);
            require_label(t);
        }
        for (auto& [s, t, c] : dd) {
            require_label(s);
            require_label(t);
        }
        out.payload = MixedSpec{name, std::move(basis), std::move(delta), std::move(dd)};
        return out;
    }
    if (kind == "model") {
        FreeGcaSpec spec;
        spec.name = name;
        for (auto& [l, d] : labeled_degrees) spec.gens.push_back({l, d});
        spec.d_polys.resize(spec.gens.size());
        for (auto& [g, mono, c] : model_diff) {
            int gi = find_label(g);
            if (gi < 0) throw ParseError("undeclared generator '" + g + "'", 1, 1);
            spec.d_polys[static_cast<size_t>(gi)].emplace_back(mono, c);
        }
        out.payload = std::move(spec);
        return out;
    }
    // dga
    DgaSpec A;
    A.name = name;
    for (auto& [l, d] : labeled_degrees) {
        A.labels.push_back(l);
        A.degrees.push_back(d);
    }
    if (unit_label.empty()) throw ParseError("dga spec needs 'unit = <label>'", 1, 1);
    A.unit = find_label(unit_label);
    if (A.unit < 0) throw ParseError("undeclared unit label '" + unit_label + "'", 1, 1);
    for (auto& [a, b, c, coeff] : product) {
        require_label(a);
        require_label(b);
        require_label(c);
        int ia = find_label(a), ib = find_label(b), ic = find_label(c);
        if (ia == A.unit || ib == A.unit) {
            // unit products are implied; explicit rows must agree with them
            int other = (ia == A.unit) ? ib : ia;
            if (ic != other || !(coeff == Rational(1)))
                throw ParseError("unit product row contradicts unitality", 1, 1);
            continue;
        }
        A.product[{ia, ib}].emplace_back(ic, coeff);
    }
    for (auto& [a, t, coeff] : differential) {
        require_label(a);
        require_label(t);
        A.differential[find_label(a)].emplace_back(find_label(t), coeff);
    }
    A.augmented = augmented;
    out.payload = std::move(A);
    return out;
}

SpecFile parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string print_spec(const SpecFile& spec) {
    std::ostringstream out;
    if (spec.is_builtin()) {
        out << "[builtin]\nname = " << std::get<BuiltinRef>(spec.payload).name << "\n";
        return out.str();
    }
    if (spec.is_mixed()) {
        const auto& m = std::get<MixedSpec>(spec.payload);
        out << "[mixed]\n";
        if (!m.name.empty()) out << "name = " << m.name << "\n";
        out << "\n[basis]\n";
        for (auto& [deg, labels] : m.basis) {
            std::vector<std::string> sorted = labels;
            std::sort(sorted.begin(), sorted.end());
            for (auto& l : sorted) out << l << " " << deg << "\n";
        }
        auto dump = [&out](const char* sec,
                           std::vector<std::tuple<std::string, std::string, Rational>> triples) {
            out << "\n[" << sec << "]\n";
            std::sort(triples.begin(), triples.end(), [](const auto& a, const auto& b) {
                return std::tie(std::get<0>(a), std::get<1>(a)) <
                       std::tie(std::get<0>(b), std::get<1>(b));
            });
            for (auto& [s, t, c] : triples) out << s << " " << t << " " << c.str() << "\n";
        };
        dump("delta", m.delta);
        dump("D", m.dd);
        return out.str();
    }
    if (spec.is_model()) {
        const auto& g = std::get<FreeGcaSpec>(spec.payload);
        out << "[model]\n";
        if (!g.name.empty()) out << "name = " << g.name << "\n";
        out << "\n[generators]\n";
        for (auto& gen : g.gens) out << gen.name << " " << gen.degree << "\n";
        out << "\n[differential]\n";
        for (size_t i = 0; i < g.d_polys.size(); ++i)
            for (auto& [mono, c] : g.d_polys[i])
                out << g.gens[i].name << " " << mono << " " << c.str() << "\n";
        return out.str();
    }
    const auto& A = std::get<DgaSpec>(spec.payload);
    out << "[dga]\n";
    if (!A.name.empty()) out << "name = " << A.name << "\n";
    out << "unit = " << A.labels[static_cast<size_t>(A.unit)] << "\n";
    out << "\n[basis]\n";
    for (size_t i = 0; i < A.labels.size(); ++i) out << A.labels[i] << " " << A.degrees[i] << "\n";
    out << "\n[product]\n";
    for (auto& [ab, combo] : A.product)
        for (auto& [c, coeff] : combo)
            out << A.labels[static_cast<size_t>(ab.first)] << " "
                << A.labels[static_cast<size_t>(ab.second)] << " "
                << A.labels[static_cast<size_t>(c)] << " " << coeff.str() << "\n";
    out << "\n[differential]\n";
    for (auto& [a, combo] : A.differential)
        for (auto& [t, coeff] : combo)
            out << A.labels[static_cast<size_t>(a)] << " " << A.labels[static_cast<size_t>(t)]
                << " " << coeff.str() << "\n";
    out << "\n[augmentation]\n" << (A.augmented ? "yes" : "no") << "\n";
    return out.str();
}

MixedComplex realize_mixed(const MixedSpec& spec) {
    auto sp = make_space(spec.basis);
    std::map<std::string, int> degree_of;
    for (auto& [deg, labels] : spec.basis)
        for (auto& l : labels) degree_of[l] = deg;
    GradedMap delta(sp, sp, 1), dd(sp, sp, -1);
    for (auto& [s, t, c] : spec.delta) delta.add(degree_of.at(s), s, t, c);
    for (auto& [s, t, c] : spec.dd) dd.add(degree_of.at(s), s, t, c);
    Support sup;
    if (!spec.basis.empty()) {
        sup.lo = spec.basis.begin()->first - 1;
        sup.hi = spec.basis.rbegin()->first + 1;
    } else {
        sup.lo = -1;
        sup.hi = 1;
    }
    return MixedComplex(sp, std::move(delta), std::move(dd), sup);
}

}  // namespace cychom
