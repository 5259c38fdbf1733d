#pragma once

#include <iosfwd>
#include <variant>

#include "cychom/dga.hpp"
#include "cychom/models.hpp"

namespace cychom {

// A parsed spec file declares exactly one object: a finite mixed complex, a
// dga, a free graded-commutative model, or a builtin fixture reference.
struct MixedSpec {
    std::string name;
    std::map<int, std::vector<std::string>> basis;                       // degree -> labels
    std::vector<std::tuple<std::string, std::string, Rational>> delta;   // sparse triples
    std::vector<std::tuple<std::string, std::string, Rational>> dd;
};

struct BuiltinRef {
    std::string name;
};

struct SpecFile {
    std::variant<MixedSpec, DgaSpec, FreeGcaSpec, BuiltinRef> payload;

    bool is_mixed() const { return std::holds_alternative<MixedSpec>(payload); }
    bool is_dga() const { return std::holds_alternative<DgaSpec>(payload); }
    bool is_model() const { return std::holds_alternative<FreeGcaSpec>(payload); }
    bool is_builtin() const { return std::holds_alternative<BuiltinRef>(payload); }
    std::string display_name() const;
};

SpecFile parse_spec(const std::string& text);
SpecFile parse_spec_file(const std::string& path);

// Canonical form: parse(print(parse(text))) == parse(text).
std::string print_spec(const SpecFile& spec);

// Realize a finite mixed complex from its spec (degrees outside the declared
// basis are zero).
MixedComplex realize_mixed(const MixedSpec& spec);

}  // namespace cychom
