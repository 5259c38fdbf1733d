#pragma once

#include "cychom/report.hpp"
#include "cychom/specfile.hpp"

namespace cychom {

// Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 validation error.
int run_cli(int argc, const char* const* argv);

// The building blocks behind the subcommands, reusable from the bindings.
Report cmd_homology(const SpecFile& spec, Flavour f, const Window& w, int cap);
Report cmd_verify(const SpecFile& spec, const std::string& suite, const Window& w, int cap);
Report cmd_loop(const SpecFile& spec, bool relative, const Window& w);

SpecFile load_spec_argument(const std::vector<std::string>& positional);

}  // namespace cychom
