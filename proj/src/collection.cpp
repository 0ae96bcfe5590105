#include "gop/collection.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace gop {

std::string kind_name(CollectionKind k) {
    switch (k) {
        case CollectionKind::normalized: return "normalized";
        case CollectionKind::reduced: return "reduced";
        case CollectionKind::pointed: return "pointed";
    }
    return "?";
}

CollectionKind parse_kind(const std::string& s) {
    if (s == "normalized") return CollectionKind::normalized;
    if (s == "reduced") return CollectionKind::reduced;
    if (s == "pointed") return CollectionKind::pointed;
    throw Error("unknown collection kind '" + s + "'");
}

bool Collection::in_scope(const Tree& p) const {
    return p.stage <= dim && node_count(p) <= bound;
}

void Collection::require_scope(const Tree& p) const {
    if (!in_scope(p))
        throw Error("tree " + tree_key(p) + " is outside the collection bound (dim " +
                    std::to_string(dim) + ", " + std::to_string(bound) + " nodes)");
}

Op Collection::point() const {
    auto it = fibres.find(kPoint);
    if (it != fibres.end() && it->second.ops.size() == 1) return it->second.ops[0];
    return kPoint;
}

std::vector<Op> Collection::ops(const Tree& p) const {
    if (p.stage == 0) return {point()};
    require_scope(p);
    auto it = fibres.find(tree_key(p));
    if (it != fibres.end()) return it->second.ops;
    if (kind != CollectionKind::normalized && is_linear(p)) return {kUnitOp};
    return {};
}

bool Collection::contains(const Tree& p, const Op& a) const {
    auto v = ops(p);
    return std::binary_search(v.begin(), v.end(), a);
}

namespace {

Op boundary(const Collection& c, const Tree& p, const Op& a, bool source) {
    if (!c.contains(p, a))
        throw Error("operation '" + a + "' is not in the fibre at " + tree_key(p));
    if (p.stage == 1) return c.point();
    Tree t = tr(p);
    auto it = c.fibres.find(tree_key(p));
    if (it != c.fibres.end()) {
        const auto& m = source ? it->second.src : it->second.tgt;
        auto jt = m.find(a);
        if (jt != m.end()) return jt->second;
    }
    // reduced collections may omit maps into singleton fibres
    auto below = c.ops(t);
    if (below.size() == 1 && c.kind != CollectionKind::normalized) return below[0];
    throw Error(std::string(source ? "source" : "target") + " of '" + a + "' at " + tree_key(p) +
                " is not defined");
}

}  // namespace

Op Collection::src(const Tree& p, const Op& a) const { return boundary(*this, p, a, true); }
Op Collection::tgt(const Tree& p, const Op& a) const { return boundary(*this, p, a, false); }

Op Collection::act_apply(const TreeMorphism& f, const Op& a) const {
    if (!contains(f.target, a))
        throw Error("operation '" + a + "' is not in the fibre at " + tree_key(f.target));
    auto small = ops(f.source);
    if (is_linear(f.source) && small.size() == 1) return small[0];
    auto it = act.find(morphism_key(f));
    if (it == act.end()) {
        if (f == identity_morphism(f.target)) return a;
        throw Error("no action stored for " + morphism_key(f));
    }
    auto jt = it->second.find(a);
    if (jt == it->second.end())
        throw Error("action of " + morphism_key(f) + " undefined on '" + a + "'");
    return jt->second;
}

std::vector<Tree> trees_by_size(int min_stage, int max_stage, int max_nodes) {
    std::vector<Tree> out;
    for (int k = min_stage; k <= max_stage; ++k) {
        auto ts = enumerate_trees(k, max_nodes);
        out.insert(out.end(), ts.begin(), ts.end());
    }
    std::stable_sort(out.begin(), out.end(), [](const Tree& a, const Tree& b) {
        int na = node_count(a), nb = node_count(b);
        if (na != nb) return na < nb;
        if (a.stage != b.stage) return a.stage < b.stage;
        return tree_key(a) < tree_key(b);
    });
    return out;
}

std::vector<Tree> Collection::trees() const { return trees_by_size(1, dim, bound); }

ParallelPair boundary_of(const Collection& c, const Tree& p, const Op& a) {
    if (p.stage < 1) throw Error("boundary of a stage-0 operation");
    return {tr(p), c.src(p, a), c.tgt(p, a)};
}

std::vector<ParallelPair> parallel_pairs(const Collection& c, const Tree& p) {
    if (p.stage < 1) throw Error("parallel pairs need stage >= 1");
    c.require_scope(p);
    Tree t = tr(p);
    if (p.stage == 1) return {{t, c.point(), c.point()}};
    auto below = c.ops(t);
    std::vector<ParallelPair> out;
    for (const auto& a : below)
        for (const auto& b : below) {
            if (t.stage >= 1 && (c.src(t, a) != c.src(t, b) || c.tgt(t, a) != c.tgt(t, b)))
                continue;
            out.push_back({t, a, b});
        }
    return out;
}

FillerReport unique_filler_report(const Collection& c, const Tree& p) {
    FillerReport r;
    std::map<std::pair<Op, Op>, std::vector<Op>> fillers;
    for (const auto& pp : parallel_pairs(c, p)) fillers[{pp.a, pp.b}];
    for (const auto& x : c.ops(p)) {
        auto pp = boundary_of(c, p, x);
        fillers[{pp.a, pp.b}].push_back(x);
    }
    for (const auto& [pair, xs] : fillers) {
        if (xs.empty()) {
            r.exists = false;
            r.unique = false;
            r.witnesses.push_back({{"kind", "no-filler"}, {"a", pair.first}, {"b", pair.second}});
        } else if (xs.size() > 1) {
            r.unique = false;
            r.witnesses.push_back(
                {{"kind", "several-fillers"}, {"a", pair.first}, {"b", pair.second}, {"fillers", xs}});
        }
    }
    return r;
}

Collection forget_pointing(const Collection& c) {
    Collection out = c;
    out.act.clear();
    if (out.kind == CollectionKind::pointed) out.kind = CollectionKind::reduced;
    return out;
}

namespace {

void validate_fibre(const Collection& c, const Tree& p, Report& rep) {
    std::string key = tree_key(p);
    std::vector<Op> ops;
    try {
        ops = c.ops(p);
    } catch (const Error& e) {
        rep.fail("scope", {{"tree", key}, {"error", e.what()}});
        return;
    }
    ++rep.instances;
    std::set<Op> seen;
    for (const auto& a : ops) {
        if (a.empty()) rep.fail("names", {{"tree", key}, {"op", a}});
        if (!seen.insert(a).second) rep.fail("names", {{"tree", key}, {"duplicate", a}});
    }
    if (c.kind != CollectionKind::normalized && is_linear(p) && ops.size() != 1)
        rep.fail("reduced", {{"tree", key}, {"size", ops.size()}});
    if (p.stage < 2) return;
    Tree t = tr(p);
    for (const auto& a : ops) {
        Op s, u;
        try {
            s = c.src(p, a);
            u = c.tgt(p, a);
        } catch (const Error& e) {
            rep.fail("boundary", {{"tree", key}, {"op", a}, {"error", e.what()}});
            continue;
        }
        if (!c.contains(t, s) || !c.contains(t, u)) {
            rep.fail("boundary", {{"tree", key}, {"op", a}, {"src", s}, {"tgt", u}});
            continue;
        }
        if (t.stage >= 2) {
            ++rep.instances;
            if (c.src(t, s) != c.src(t, u) || c.tgt(t, s) != c.tgt(t, u))
                rep.fail("globularity", {{"tree", key}, {"op", a}, {"src", s}, {"tgt", u}});
        }
    }
}

void validate_pointing(const Collection& c, Report& rep) {
    std::vector<Tree> nl;
    for (const auto& p : c.trees())
        if (!is_linear(p)) nl.push_back(p);
    std::set<std::string> expected;
    // inclusions between non-linear trees, indexed by source
    std::map<std::string, std::vector<TreeMorphism>> into;
    for (const auto& p : nl)
        for (const auto& q : nl) {
            if (q.stage != p.stage) continue;
            for (const auto& f : enumerate_inclusions(q, p)) {
                expected.insert(morphism_key(f));
                into[tree_key(p)].push_back(f);
            }
        }
    for (const auto& [k, m] : c.act)
        if (!expected.count(k)) rep.fail("pointing-scope", {{"morphism", k}});

    auto apply = [&](const TreeMorphism& f, const Op& a, Op& out) {
        try {
            out = c.act_apply(f, a);
            return true;
        } catch (const Error& e) {
            rep.fail("pointing-total", {{"morphism", morphism_key(f)}, {"op", a}, {"error", e.what()}});
            return false;
        }
    };

    for (const auto& p : nl)
        for (const auto& f : into[tree_key(p)]) {
            const Tree& q = f.source;
            bool id = f == identity_morphism(p);
            for (const auto& a : c.ops(p)) {
                ++rep.instances;
                Op b;
                if (!apply(f, a, b)) continue;
                if (!c.contains(q, b)) {
                    rep.fail("pointing-total", {{"morphism", morphism_key(f)}, {"op", a}, {"image", b}});
                    continue;
                }
                if (id && b != a)
                    rep.fail("functoriality", {{"identity", morphism_key(f)}, {"op", a}, {"image", b}});
                if (p.stage >= 2) {
                    TreeMorphism tf = truncate(f);
                    for (int side = 0; side < 2; ++side) {
                        Op lhs = side == 0 ? c.src(q, b) : c.tgt(q, b);
                        Op pa = side == 0 ? c.src(p, a) : c.tgt(p, a);
                        Op rhs;
                        if (!apply(tf, pa, rhs)) continue;
                        if (lhs != rhs)
                            rep.fail("naturality", {{"morphism", morphism_key(f)},
                                                    {"op", a},
                                                    {"side", side == 0 ? "src" : "tgt"},
                                                    {"lhs", lhs},
                                                    {"rhs", rhs}});
                    }
                }
                // act(f g) = act(g) act(f)
                for (const auto& g : into[tree_key(q)]) {
                    Op lhs, rhs;
                    if (!apply(compose(f, g), a, lhs) || !apply(g, b, rhs)) continue;
                    if (lhs != rhs)
                        rep.fail("functoriality", {{"f", morphism_key(f)},
                                                   {"g", morphism_key(g)},
                                                   {"op", a},
                                                   {"act(fg)", lhs},
                                                   {"act(g)act(f)", rhs}});
                }
            }
        }
}

}  // namespace

Report validate(const Collection& c) {
    Report rep("validate");
    if (c.dim < 0) rep.fail("shape", {{"dim", c.dim}});
    for (const auto& [key, fib] : c.fibres) {
        Tree p;
        try {
            p = parse_tree(key);
        } catch (const Error& e) {
            rep.fail("shape", {{"tree", key}, {"error", e.what()}});
            continue;
        }
        if (p.stage == 0) {
            if (fib.ops.size() != 1) rep.fail("normalized", {{"tree", key}, {"size", fib.ops.size()}});
            continue;
        }
        if (!c.in_scope(p)) rep.fail("scope", {{"tree", key}});
        if (!std::is_sorted(fib.ops.begin(), fib.ops.end()))
            rep.fail("names", {{"tree", key}, {"error", "operations not sorted"}});
        for (const auto* m : {&fib.src, &fib.tgt})
            for (const auto& [a, b] : *m)
                if (!std::binary_search(fib.ops.begin(), fib.ops.end(), a))
                    rep.fail("boundary", {{"tree", key}, {"unknown-op", a}});
    }
    for (const auto& p : c.trees()) validate_fibre(c, p, rep);
    if (c.kind == CollectionKind::pointed) {
        if (rep.ok()) validate_pointing(c, rep);
    } else if (!c.act.empty()) {
        rep.fail("pointing-scope", {{"error", "actions on an unpointed collection"}});
    }
    return rep;
}

Collection random_collection(std::uint64_t seed, int dim, int bound, int max_ops) {
    std::mt19937_64 rng(seed);
    Collection c;
    c.kind = CollectionKind::normalized;
    c.dim = dim;
    c.bound = bound;
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    for (const auto& p : trees_by_size(1, dim, bound)) {
        Fibre f;
        int n = pick(max_ops + 1);
        std::vector<ParallelPair> pairs = parallel_pairs(c, p);
        if (pairs.empty()) n = 0;
        for (int i = 0; i < n; ++i) {
            Op name = "o" + std::to_string(i);
            f.ops.push_back(name);
            if (p.stage >= 2) {
                const auto& pp = pairs[pick(static_cast<int>(pairs.size()))];
                f.src[name] = pp.a;
                f.tgt[name] = pp.b;
            }
        }
        std::sort(f.ops.begin(), f.ops.end());
        c.fibres[tree_key(p)] = std::move(f);
    }
    return c;
}

}  // namespace gop
