#include <algorithm>
#include <set>

#include "gop/contraction.hpp"

namespace gop {

std::vector<int> column_sizes(const Tree& p) {
    if (p.stage != 2) throw Error("shuffles need a stage-2 tree, got " + tree_key(p));
    std::vector<int> c;
    for (const auto& k : p.kids) c.push_back(static_cast<int>(k.kids.size()));
    return c;
}

std::vector<ShuffleOrder> shuffle_orders(const Tree& p) {
    auto sizes = column_sizes(p);
    int total = 0;
    for (int s : sizes) total += s;
    std::vector<int> next(sizes.size(), 0);
    std::vector<ShuffleOrder> out;
    ShuffleOrder cur;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == total) {
            out.push_back(cur);
            return;
        }
        for (size_t c = 0; c < sizes.size(); ++c) {
            if (next[c] == sizes[c]) continue;
            cur.push_back({static_cast<int>(c), next[c]++});
            self(self);
            --next[c];
            cur.pop_back();
        }
    };
    rec(rec);
    return out;
}

bool is_compatible(const Tree& p, const ShuffleOrder& o) {
    auto sizes = column_sizes(p);
    std::vector<int> next(sizes.size(), 0);
    for (auto [c, r] : o) {
        if (c < 0 || c >= static_cast<int>(sizes.size())) return false;
        if (r != next[c]) return false;
        ++next[c];
    }
    return next == sizes;
}

ShuffleOrder ShuffleScheme::order(const Tree& p) const {
    if (auto it = table.find(tree_key(p)); it != table.end()) return it->second;
    auto sizes = column_sizes(p);
    const int m = static_cast<int>(sizes.size());
    ShuffleOrder o;
    if (name == "col-lr") {
        for (int c = 0; c < m; ++c)
            for (int r = 0; r < sizes[c]; ++r) o.push_back({c, r});
    } else if (name == "col-rl") {
        for (int c = m - 1; c >= 0; --c)
            for (int r = 0; r < sizes[c]; ++r) o.push_back({c, r});
    } else if (name == "row-reading") {
        int rows = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < m; ++c)
                if (r < sizes[c]) o.push_back({c, r});
    } else {
        throw Error("scheme '" + name + "' has no order for " + tree_key(p));
    }
    return o;
}

const std::vector<std::string>& scheme_names() {
    static const std::vector<std::string> names = {"col-lr", "col-rl", "row-reading", "table"};
    return names;
}

ShuffleScheme named_scheme(const std::string& name) {
    const auto& ns = scheme_names();
    if (std::find(ns.begin(), ns.end(), name) == ns.end()) throw Error("unknown shuffle scheme '" + name + "'");
    return {name, {}};
}

int cell_index(const Tree& p, Cell c) {
    auto sizes = column_sizes(p);
    if (c.first < 0 || c.first >= static_cast<int>(sizes.size()) || c.second < 0 || c.second >= sizes[c.first])
        throw Error("no cell (" + std::to_string(c.first) + "," + std::to_string(c.second) + ") in " + tree_key(p));
    int i = 0;
    for (int k = 0; k < c.first; ++k) i += sizes[k];
    return i + c.second;
}

Cell index_cell(const Tree& p, int i) {
    auto sizes = column_sizes(p);
    for (int c = 0; c < static_cast<int>(sizes.size()); ++c) {
        if (i < sizes[c]) return {c, i};
        i -= sizes[c];
    }
    throw Error("height-2 node index out of range in " + tree_key(p));
}

namespace {

json cells(const ShuffleOrder& o) {
    json a = json::array();
    for (auto [c, r] : o) a.push_back({c, r});
    return a;
}

}  // namespace

std::optional<json> scheme_restriction_violation(const ShuffleScheme& s, const TreeMorphism& f) {
    const Tree& q = f.source;
    const Tree& p = f.target;
    if (q.stage != 2 || p.stage != 2) throw Error("scheme restriction needs a stage-2 inclusion");
    auto small = s.order(q);
    auto large = s.order(p);
    // p cell -> q cell on the image of f
    std::map<Cell, Cell> back;
    for (int i = 0; i < static_cast<int>(f.maps[2].size()); ++i)
        back[index_cell(p, f.maps[2][i])] = index_cell(q, i);
    ShuffleOrder restricted;
    for (const auto& c : large)
        if (auto it = back.find(c); it != back.end()) restricted.push_back(it->second);
    if (restricted == small) return std::nullopt;
    json image = json::array();
    for (const auto& [pc, qc] : back) image.push_back({{"small", {qc.first, qc.second}}, {"large", {pc.first, pc.second}}});
    return json{{"inclusion", morphism_key(f)},
                {"small", tree_key(q)},
                {"large", tree_key(p)},
                {"image", image},
                {"order_small", cells(small)},
                {"restricted", cells(restricted)}};
}

Report check_scheme_unital(const ShuffleScheme& s, int bound) {
    Report rep("check-scheme");
    rep.details["scheme"] = s.name;
    auto ts = trees_by_size(2, 2, bound);
    for (const auto& p : ts) {
        ++rep.instances;
        ShuffleOrder o;
        try {
            o = s.order(p);
        } catch (const Error& e) {
            rep.fail("totality", {{"tree", tree_key(p)}, {"error", e.what()}});
            continue;
        }
        if (!is_compatible(p, o)) rep.fail("compatibility", {{"tree", tree_key(p)}, {"order", cells(o)}});
    }
    if (!rep.ok()) return rep;
    for (const auto& p : ts)
        for (const auto& q : ts)
            for (const auto& f : enumerate_inclusions(q, p)) {
                ++rep.instances;
                if (auto w = scheme_restriction_violation(s, f)) rep.fail("unit-compatibility", *w);
            }
    return rep;
}

}  // namespace gop
