#pragma once

#include <string>
#include <vector>

namespace cychom {

struct CheckItem {
    std::string name;
    bool pass = true;
    std::string witness;  // empty when passing
};

struct CheckReport {
    std::vector<CheckItem> items;

    void add(std::string name, bool pass, std::string witness = "") {
        items.push_back({std::move(name), pass, std::move(witness)});
    }
    void merge(const CheckReport& other) {
        items.insert(items.end(), other.items.begin(), other.items.end());
    }
    bool all_pass() const {
        for (auto& it : items)
            if (!it.pass) return false;
        return true;
    }
    std::vector<CheckItem> failures() const {
        std::vector<CheckItem> out;
        for (auto& it : items)
            if (!it.pass) out.push_back(it);
        return out;
    }
};

enum class Trust { exact, stabilized, truncated };

inline const char* trust_name(Trust t) {
    switch (t) {
        case Trust::exact: return "exact";
        case Trust::stabilized: return "stabilized";
        default: return "truncated";
    }
}

struct TableRow {
    int dim = 0;
    int u_rank = 0;  // rank of u-action from degree k-2 into this degree
    Trust trust = Trust::exact;
};

// Per-degree homology table over an inclusive degree range.
struct ModuleTable {
    int lo = 0, hi = -1;
    std::vector<TableRow> rows;

    ModuleTable() = default;
    ModuleTable(int lo_, int hi_) : lo(lo_), hi(hi_), rows(hi_ >= lo_ ? hi_ - lo_ + 1 : 0) {}
    TableRow& at(int k) { return rows.at(static_cast<size_t>(k - lo)); }
    const TableRow& at(int k) const { return rows.at(static_cast<size_t>(k - lo)); }
    bool contains(int k) const { return k >= lo && k <= hi; }
};

}  // namespace cychom
