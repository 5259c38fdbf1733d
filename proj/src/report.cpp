#include "cychom/report.hpp"

#include <iomanip>
#include <ostream>

#include "json.hpp"

namespace cychom {

void Report::write_text(std::ostream& os) const {
    os << "# " << command << " " << input;
    if (!flavour.empty()) os << " flavour " << flavour;
    os << " degrees " << window.degree_lo << ".." << window.degree_hi << " upow " << window.upow_lo
       << ".." << window.upow_hi;
    if (cap >= 0) os << " cap " << cap;
    os << "\n";
    if (table) {
        os << std::setw(7) << "degree" << std::setw(6) << "dim" << std::setw(8) << "u-rank"
           << "  trust\n";
        for (int k = table->lo; k <= table->hi; ++k) {
            const TableRow& r = table->at(k);
            os << std::setw(7) << k << std::setw(6) << r.dim << std::setw(8) << r.u_rank << "  "
               << trust_name(r.trust) << "\n";
        }
    }
    if (checks) {
        for (auto& item : checks->items) {
            os << (item.pass ? "pass  " : "FAIL  ") << item.name;
            if (!item.witness.empty()) os << "  [" << item.witness << "]";
            os << "\n";
        }
        os << (checks->all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
    }
}

void Report::write_jsonl(std::ostream& os) const {
    using nlohmann::json;
    json meta{{"type", "meta"},
              {"command", command},
              {"input", input},
              {"degree_lo", window.degree_lo},
              {"degree_hi", window.degree_hi},
              {"upow_lo", window.upow_lo},
              {"upow_hi", window.upow_hi},
              {"margin", window.margin}};
    if (!flavour.empty()) meta["flavour"] = flavour;
    if (cap >= 0) meta["cap"] = cap;
    os << meta.dump() << "\n";
    if (table) {
        for (int k = table->lo; k <= table->hi; ++k) {
            const TableRow& r = table->at(k);
            json row{{"type", "row"},
                     {"degree", k},
                     {"dim", r.dim},
                     {"u_rank", r.u_rank},
                     {"trust", trust_name(r.trust)}};
            os << row.dump() << "\n";
        }
    }
    if (checks) {
        for (auto& item : checks->items) {
            json row{{"type", "check"}, {"name", item.name}, {"pass", item.pass}};
            if (!item.witness.empty()) row["witness"] = item.witness;
            os << row.dump() << "\n";
        }
    }
    json summary{{"type", "summary"}, {"pass", ok()}};
    os << summary.dump() << "\n";
}

}  // namespace cychom
