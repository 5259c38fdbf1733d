#pragma once

#include <iosfwd>
#include <optional>

#include "cychom/check.hpp"
#include "cychom/mixed.hpp"

namespace cychom {

// Computation report: metadata plus either a homology table or a check
// ledger. The machine-readable form is line-delimited JSON; the text and
// machine forms carry identical numbers.
struct Report {
    std::string command;
    std::string input;
    std::string flavour;
    Window window;
    int cap = -1;
    std::optional<ModuleTable> table;
    std::optional<CheckReport> checks;

    bool ok() const { return !checks || checks->all_pass(); }
    void write_text(std::ostream& os) const;
    void write_jsonl(std::ostream& os) const;
};

}  // namespace cychom
