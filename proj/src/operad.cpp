#include "gop/operad.hpp"

#include <algorithm>
#include <map>

namespace gop {

Op Operad::subst(const TreeMorphism& f, const Op& b, const std::vector<Op>& parts) const {
    return subst(f, analyze_morphism(f), b, parts);
}

bool Operad::contains(const Tree& p, const Op& a) const {
    auto v = ops(p);
    return std::binary_search(v.begin(), v.end(), a);
}

Op Operad::boundary(const Tree& p, const Op& a, int r, bool source) const {
    Tree t = p;
    Op x = a;
    while (t.stage > r) {
        x = source ? src(t, x) : tgt(t, x);
        t = tr(t);
    }
    return x;
}

std::vector<Op> boundary_parts(const Operad& A, const TreeMorphism& f, const MorphismFibres& fib,
                               const std::vector<Op>& parts, bool source) {
    if (f.target.stage < 1) throw Error("boundary_parts: stage-0 morphism");
    std::vector<Op> out;
    out.reserve(fib.lower_cut.size());
    for (size_t j = 0; j < fib.lower_cut.size(); ++j) {
        int i = source ? fib.lower_first[j] : fib.lower_last[j];
        if (!fib.lower_cut[j])
            out.push_back(parts[i]);
        else
            out.push_back(source ? A.src(fib.fibres[i], parts[i]) : A.tgt(fib.fibres[i], parts[i]));
    }
    return out;
}

std::string check_parts(const Operad& A, const MorphismFibres& fib, const std::vector<Op>& parts) {
    if (parts.size() != fib.fibres.size())
        return "expected " + std::to_string(fib.fibres.size()) + " parts, got " +
               std::to_string(parts.size());
    for (size_t i = 0; i < parts.size(); ++i)
        if (!A.contains(fib.fibres[i], parts[i]))
            return "part " + std::to_string(i) + " '" + parts[i] + "' is not an operation at " +
                   tree_key(fib.fibres[i]);
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
        int r = fib.truncated[i].stage;
        Op t = A.boundary(fib.fibres[i], parts[i], r, false);
        Op s = A.boundary(fib.fibres[i + 1], parts[i + 1], r, true);
        if (t != s)
            return "parts " + std::to_string(i) + " and " + std::to_string(i + 1) +
                   " disagree at stage " + std::to_string(r) + " ('" + t + "' vs '" + s + "')";
    }
    return {};
}

std::vector<std::vector<Op>> compatible_tuples(const Operad& A, const MorphismFibres& fib) {
    const size_t n = fib.fibres.size();
    std::vector<std::vector<Op>> ops(n), lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
        ops[i] = A.ops(fib.fibres[i]);
        for (const auto& a : ops[i]) {
            lo[i].push_back(i > 0 ? A.boundary(fib.fibres[i], a, fib.truncated[i - 1].stage, true) : Op{});
            hi[i].push_back(i + 1 < n ? A.boundary(fib.fibres[i], a, fib.truncated[i].stage, false) : Op{});
        }
    }
    std::vector<std::vector<Op>> out;
    std::vector<Op> cur;
    std::vector<size_t> pick;
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (size_t j = 0; j < ops[i].size(); ++j) {
            if (i > 0 && lo[i][j] != hi[i - 1][pick.back()]) continue;
            cur.push_back(ops[i][j]);
            pick.push_back(j);
            self(self, i + 1);
            cur.pop_back();
            pick.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

Op substitute_ops(const Operad& A, const TreeMorphism& f, const Op& b, const std::vector<Op>& parts,
                  int bound) {
    require_morphism(f);
    if (f.target.stage > A.dim()) throw Error("substitute: stage exceeds operad dimension");
    if (node_count(f.source) > bound || node_count(f.target) > bound)
        throw Error("substitute: trees exceed the node bound " + std::to_string(bound));
    if (!A.contains(f.target, b))
        throw Error("substitute: '" + b + "' is not an operation at " + tree_key(f.target));
    auto fib = analyze_morphism(f);
    if (auto why = check_parts(A, fib, parts); !why.empty()) throw Error("substitute: " + why);
    return A.subst(f, fib, b, parts);
}

bool is_reduced(const Operad& A, int bound) {
    for (int k = 0; k <= A.dim(); ++k)
        for (int s = 0; s <= k; ++s) {
            Tree p = unit_tree(k - s);
            for (int i = 0; i < s; ++i) p = suspend(p);
            if (node_count(p) > bound) continue;
            if (A.ops(p).size() != 1) return false;
        }
    return true;
}

Collection to_collection(const Operad& A, int bound) {
    Collection c;
    c.dim = A.dim();
    c.bound = bound;
    c.kind = is_reduced(A, bound) ? CollectionKind::reduced : CollectionKind::normalized;
    c.fibres[kPoint].ops = A.ops(Tree{});
    for (const auto& p : c.trees()) {
        Fibre fb;
        fb.ops = A.ops(p);
        if (p.stage >= 2)
            for (const auto& a : fb.ops) {
                fb.src[a] = A.src(p, a);
                fb.tgt[a] = A.tgt(p, a);
            }
        c.fibres[tree_key(p)] = std::move(fb);
    }
    return c;
}

// ---------------------------------------------------------------- tables

std::string subst_key(const TreeMorphism& f, const Op& b, const std::vector<Op>& parts) {
    std::string s = morphism_key(f);
    s += '\x1f';
    s += b;
    for (const auto& a : parts) {
        s += '\x1f';
        s += a;
    }
    return s;
}

Op TableOperad::unit(int k) const {
    if (k >= 0 && k < static_cast<int>(units.size())) return units[k];
    auto v = carrier.ops(unit_tree(k));
    if (v.size() != 1) throw Error("no unit of stage " + std::to_string(k));
    return v[0];
}

Op TableOperad::subst(const TreeMorphism& f, const MorphismFibres&, const Op& b,
                      const std::vector<Op>& parts) const {
    if (f.source.stage == 0) return carrier.point();
    auto it = table.find(subst_key(f, b, parts));
    if (it == table.end())
        throw Error("substitution table has no entry for " + morphism_key(f) + " at '" + b + "'");
    return it->second;
}

std::shared_ptr<TableOperad> materialize(const Operad& A, int bound) {
    auto t = std::make_shared<TableOperad>();
    t->label = A.name() + " (table)";
    t->carrier = to_collection(A, bound);
    for (int k = 0; k <= A.dim(); ++k) t->units.push_back(A.unit(k));
    for (int k = 1; k <= A.dim(); ++k) {
        auto ts = trees_by_size(k, k, bound);
        for (const auto& p : ts)
            for (const auto& q : ts)
                for (const auto& f : enumerate_morphisms(p, q)) {
                    auto fib = analyze_morphism(f);
                    auto tuples = compatible_tuples(A, fib);
                    for (const auto& b : A.ops(q))
                        for (const auto& a : tuples) t->table[subst_key(f, b, a)] = A.subst(f, fib, b, a);
                }
    }
    return t;
}

Collection derive_pointing(const Operad& A, int bound) {
    if (!is_reduced(A, bound)) throw Error("derive_pointing: operad '" + A.name() + "' is not reduced");
    Collection c = to_collection(A, bound);
    c.kind = CollectionKind::pointed;
    std::vector<Tree> nl;
    for (const auto& p : c.trees())
        if (!is_linear(p)) nl.push_back(p);
    for (const auto& p : nl)
        for (const auto& q : nl) {
            if (q.stage != p.stage) continue;
            for (const auto& f : enumerate_inclusions(q, p)) {
                auto fib = analyze_morphism(f);
                std::vector<Op> us;
                for (const auto& t : fib.fibres) us.push_back(A.ops(t).at(0));
                auto& m = c.act[morphism_key(f)];
                for (const auto& b : A.ops(p)) m[b] = A.subst(f, fib, b, us);
            }
        }
    return c;
}

}  // namespace gop
