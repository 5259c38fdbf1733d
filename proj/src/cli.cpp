#include "cychom/cli.hpp"

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cychom/dual.hpp"
#include "cychom/gysin.hpp"

namespace cychom {

namespace {

bool is_builtin_name(const std::string& name) {
    if (name == "point_dga" || name == "point_mixed" || name == "es1" || name == "es1_mixed")
        return true;
    return name.rfind("sphere", 0) == 0;
}

int sphere_index(const std::string& name) {
    // accepts sphereN and sphere(N)
    std::string rest = name.substr(6);
    if (rest.size() >= 3 && rest.front() == '(' && rest.back() == ')')
        rest = rest.substr(1, rest.size() - 2);
    try {
        return std::stoi(rest);
    } catch (...) {
        throw UnknownName("unknown builtin '" + name + "'");
    }
}

// The mixed complex behind a spec, materialized for the window.
MixedComplex realize_for_window(const SpecFile& spec, const Window& w, int cap) {
    auto [clo, chi] = required_degree_range_all(w);
    if (spec.is_mixed()) return realize_mixed(std::get<MixedSpec>(spec.payload));
    if (spec.is_model()) return loop_model(std::get<FreeGcaSpec>(spec.payload), std::max(chi, 2)).mixed;
    if (spec.is_dga()) {
        const DgaSpec& A = std::get<DgaSpec>(spec.payload);
        CheckReport v = validate_dga(A);
        if (!v.all_pass())
            throw InvalidComplex("dga axioms fail: " + v.failures().front().name);
        return to_mixed(hochschild(A, clo, chi, cap), Convention::loday);
    }
    const std::string& name = std::get<BuiltinRef>(spec.payload).name;
    if (name == "point_mixed") return point_mixed(clo, chi);
    if (name == "es1" || name == "es1_mixed") return es1_mixed(std::max(chi, 2));
    if (name == "point_dga") return to_mixed(hochschild(point_dga(), clo, chi), Convention::loday);
    if (name.rfind("sphere", 0) == 0)
        return to_mixed(hochschild(sphere_cohomology(sphere_index(name)), clo, chi, cap),
                        Convention::loday);
    throw UnknownName("unknown builtin '" + name + "'");
}

std::optional<DgaSpec> dga_of(const SpecFile& spec) {
    if (spec.is_dga()) return std::get<DgaSpec>(spec.payload);
    if (spec.is_builtin()) {
        const std::string& name = std::get<BuiltinRef>(spec.payload).name;
        if (name == "point_dga") return point_dga();
        if (name.rfind("sphere", 0) == 0) return sphere_cohomology(sphere_index(name));
    }
    return std::nullopt;
}

int default_cap_for(const SpecFile& spec, int requested) {
    if (requested >= 0) return requested;
    auto A = dga_of(spec);
    if (!A) return -1;
    for (size_t i = 0; i < A->labels.size(); ++i)
        if (static_cast<int>(i) != A->unit) return 8;  // nontrivial dga: default word cap
    return -1;  // trivial dga: automatic
}

}  // namespace

Report cmd_homology(const SpecFile& spec, Flavour f, const Window& w, int cap) {
    w.validate();
    int effective_cap = default_cap_for(spec, cap);
    Report rep;
    rep.command = "homology";
    rep.input = spec.display_name();
    rep.flavour = flavour_traits(f).name;
    rep.window = w;
    rep.cap = effective_cap;
    MixedComplex m = realize_for_window(spec, w, effective_cap);
    rep.table = flavour_homology(m, f, w);
    bool any_nonexact = false;
    for (auto& row : rep.table->rows)
        if (row.trust != Trust::exact) any_nonexact = true;
    if (any_nonexact) {
        // rerun along a widening schedule so agreeing degrees report as
        // stabilized instead of truncated
        ComplexBuilder builder = [&spec](const Window& w2, int cap2) {
            return realize_for_window(spec, w2, cap2);
        };
        std::vector<Widening> schedule;
        for (int step : {2, 4}) {
            Widening wd;
            wd.window = w.widened(step);
            wd.cap = effective_cap < 0 ? -1 : effective_cap + step;
            schedule.push_back(wd);
        }
        rep.table = stabilize(builder, f, w, schedule);
    }
    return rep;
}

Report cmd_loop(const SpecFile& spec, bool relative, const Window& w) {
    w.validate();
    Report rep;
    rep.command = relative ? "loop --relative" : "loop";
    rep.input = spec.display_name();
    rep.window = w;
    FreeGcaSpec model;
    if (spec.is_model()) {
        model = std::get<FreeGcaSpec>(spec.payload);
    } else if (spec.is_builtin()) {
        const std::string& name = std::get<BuiltinRef>(spec.payload).name;
        if (name.rfind("sphere", 0) != 0)
            throw InvalidComplex("loop requires a model spec or a sphere builtin");
        model = sphere_minimal_model(sphere_index(name));
    } else {
        throw InvalidComplex("loop requires a model spec or a sphere builtin");
    }
    rep.table = equivariant_loop_table(model, w, relative);
    return rep;
}

Report cmd_verify(const SpecFile& spec, const std::string& suite, const Window& w, int cap) {
    w.validate();
    int effective_cap = default_cap_for(spec, cap);
    Report rep;
    rep.command = "verify --suite " + suite;
    rep.input = spec.display_name();
    rep.window = w;
    rep.cap = effective_cap;
    CheckReport out;

    bool run_axioms = suite == "axioms" || suite == "all";
    bool run_gysin = suite == "gysin" || suite == "all";
    bool run_corollary = suite == "corollary" || suite == "all";
    bool run_normalized = suite == "normalized" || suite == "all";
    bool run_duality = suite == "duality" || suite == "all";
    if (!run_axioms && !run_gysin && !run_corollary && !run_normalized && !run_duality)
        throw InvalidComplex("unknown suite '" + suite + "'");

    auto A = dga_of(spec);
    if ((suite == "corollary" || suite == "normalized") && !A)
        throw InvalidComplex("suite '" + suite + "' requires a dga input");

    auto [clo, chi] = required_degree_range_all(w);
    if (run_axioms) {
        if (A) {
            CheckReport r = validate_dga(*A);
            for (auto& it : r.items) it.name = "dga: " + it.name;
            out.merge(r);
            CyclicComplex cc = hochschild(*A, clo, chi, effective_cap);
            CheckReport r2 = validate_relations(cc, Convention::loday);
            for (auto& it : r2.items) it.name = "cyclic: " + it.name;
            out.merge(r2);
        }
        MixedComplex m = realize_for_window(spec, w, effective_cap);
        CheckReport r3 = validate_mixed(m);
        for (auto& it : r3.items) it.name = "mixed: " + it.name;
        out.merge(r3);
    }
    if (run_gysin) {
        MixedComplex m = realize_for_window(spec, w, effective_cap);
        out.merge(gysin_check(m, w));
    }
    if (run_corollary && A) {
        bool trivial_nonunit = true;
        int min_nonunit = -1;
        for (size_t i = 0; i < A->labels.size(); ++i) {
            if (static_cast<int>(i) == A->unit) continue;
            trivial_nonunit = false;
            if (min_nonunit < 0 || A->degrees[i] < min_nonunit) min_nonunit = A->degrees[i];
        }
        if (trivial_nonunit) {
            // the full word complex is materialization-complete here
            CyclicComplex cc = hochschild(*A, clo, chi, effective_cap);
            out.merge(corollary_cyccochain_check(cc, Convention::loday, w));
            out.merge(connes_equivalences(cc, Convention::loday, w));
        } else if (A->augmented && min_nonunit >= 2) {
            // a word cap truncates every degree of the full complex; the
            // reduced complex carries the same identities exactly
            out.merge(reduced_corollary_check(*A, w));
        } else {
            throw InvalidComplex(
                "corollary suite needs a trivial or augmented simply-connected dga");
        }
    }
    if (run_normalized && A) {
        if (A->augmented) out.merge(reduced_cyc_identities(*A, w));
        // the normalized tables agree with the full ones for the
        // quasi-isomorphism invariant flavours
        MixedComplex full = realize_for_window(spec, w, effective_cap);
        MixedComplex norm = normalized_mixed(*A, Convention::loday, clo, chi, effective_cap);
        for (Flavour f : {Flavour::series_u, Flavour::series_u_poly_uinv, Flavour::poly_uinv}) {
            ModuleTable tf = flavour_homology(full, f, w);
            ModuleTable tn = flavour_homology(norm, f, w);
            bool ok = true;
            std::string witness;
            int checked = 0;
            for (int k = w.degree_lo; k <= w.degree_hi; ++k) {
                if (tf.at(k).trust == Trust::truncated || tn.at(k).trust == Trust::truncated)
                    continue;
                ++checked;
                if (tf.at(k).dim != tn.at(k).dim) {
                    ok = false;
                    witness = "degree " + std::to_string(k);
                }
            }
            out.add(std::string("normalized table agrees, flavour ") + flavour_traits(f).name +
                        " (" + std::to_string(checked) + " degrees)",
                    ok, witness);
        }
    }
    if (run_duality) {
        MixedComplex m = realize_for_window(spec, w, effective_cap);
        out.merge(duality_check(m, w));
        if (A) {
            CyclicComplex cc = hochschild(*A, clo, chi, effective_cap);
            out.merge(cyclic_dual_check(cc, Convention::loday, w));
            if (A->augmented && A->labels.size() > 1) out.merge(cyclic_dual_check(*A, w));
        }
    }
    rep.checks = std::move(out);
    return rep;
}

SpecFile load_spec_argument(const std::vector<std::string>& positional) {
    if (positional.empty()) throw Error("missing spec argument");
    if (positional[0] == "builtin") {
        if (positional.size() < 2) throw Error("expected a builtin name");
        if (!is_builtin_name(positional[1])) throw UnknownName("unknown builtin '" + positional[1] + "'");
        SpecFile out;
        out.payload = BuiltinRef{positional[1]};
        return out;
    }
    if (positional.size() != 1) throw Error("expected one spec path");
    return parse_spec_file(positional[0]);
}

namespace {

void parse_range(const std::string& text, int& lo, int& hi) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw Error("expected a range 'lo..hi', got '" + text + "'");
    try {
        lo = std::stoi(text.substr(0, dots));
        hi = std::stoi(text.substr(dots + 2));
    } catch (...) {
        throw Error("expected a range 'lo..hi', got '" + text + "'");
    }
}

int emit(const Report& rep, const std::string& format, const std::string& outfile) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!outfile.empty()) {
        file.open(outfile);
        if (!file) throw Error("cannot open output file '" + outfile + "'");
        os = &file;
    }
    if (format == "json")
        rep.write_jsonl(*os);
    else
        rep.write_text(*os);
    return rep.ok() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"exact cyclic homology of mixed complexes over finite windows"};
    app.require_subcommand(1);

    std::vector<std::string> spec_args;
    std::string flavour_name = "[[u]]";
    std::string degrees = "0..8";
    std::string upow = "-8..8";
    int margin = 2;
    int cap = -1;
    std::string format = "text";
    std::string outfile;
    std::string suite = "all";
    bool relative = false;

    auto add_common = [&](CLI::App* cmd, bool with_flavour) {
        cmd->add_option("spec", spec_args, "spec file path, or: builtin <name>")
            ->required()
            ->expected(1, 2);
        if (with_flavour)
            cmd->add_option("--flavour", flavour_name,
                            "one of [u] [[u]] [u-1] [[u-1]] [u,u-1] [[u,u-1]] [u,u-1]] [[u,u-1] "
                            "or borel/goodwillie/nilpotent/jones-petrack");
        cmd->add_option("--degrees", degrees, "inclusive degree range lo..hi");
        cmd->add_option("--upow", upow, "materialized u-power range lo..hi");
        cmd->add_option("--margin", margin, "slice margin (>= 1)");
        cmd->add_option("--cap", cap, "word-length cap for dga complexes (-1 = automatic)");
        cmd->add_option("--format", format, "text | json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--output", outfile, "write the report to a file");
    };

    CLI::App* hom = app.add_subcommand("homology", "flavour homology table of a complex");
    add_common(hom, true);
    CLI::App* ver = app.add_subcommand("verify", "structural verification ledgers");
    add_common(ver, false);
    ver->add_option("--suite", suite, "axioms | gysin | corollary | normalized | duality | all")
        ->check(CLI::IsMember({"axioms", "gysin", "corollary", "normalized", "duality", "all"}));
    CLI::App* loop = app.add_subcommand("loop", "equivariant loop-space table of a model");
    add_common(loop, false);
    loop->add_flag("--relative", relative, "table relative to the constant loop");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        SpecFile spec = load_spec_argument(spec_args);
        Window w;
        parse_range(degrees, w.degree_lo, w.degree_hi);
        parse_range(upow, w.upow_lo, w.upow_hi);
        w.margin = margin;
        if (app.got_subcommand("homology")) {
            Flavour f = flavour_from_name(flavour_name);
            return emit(cmd_homology(spec, f, w, cap), format, outfile);
        }
        if (app.got_subcommand("verify")) return emit(cmd_verify(spec, suite, w, cap), format, outfile);
        return emit(cmd_loop(spec, relative, w), format, outfile);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace cychom
