#include "gop/contraction.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "gop/operad.hpp"

namespace gop {

bool ContractionChoice::in_scope(const Tree& p) const {
    if (p.stage < 1) return false;
    return base == CollectionKind::normalized || !is_linear(p);
}

void ContractionChoice::set(const Tree& p, const Op& a, const Op& b, const Op& x) {
    table[tree_key(p)][{a, b}] = x;
}

std::optional<Op> ContractionChoice::get(const Tree& p, const Op& a, const Op& b) const {
    auto it = table.find(tree_key(p));
    if (it == table.end()) return std::nullopt;
    auto jt = it->second.find({a, b});
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

namespace {

json pair_witness(const Tree& p, const Op& a, const Op& b) {
    return {{"tree", tree_key(p)}, {"a", a}, {"b", b}};
}

// act(tr f) on an operation of the truncated target.
Op act_below(const Collection& P, const TreeMorphism& f, const Op& a) {
    if (f.target.stage == 1) return a;
    return P.act_apply(truncate(f), a);
}

// act(f) looked up once per inclusion.  Anything unusual goes through
// act_apply so errors read the same.
class ResolvedAct {
public:
    ResolvedAct(const Collection& P, TreeMorphism f, const std::vector<Op>& target_ops)
        : P_(P), f_(std::move(f)), target_ops_(target_ops) {
        auto small = P.ops(f_.source);
        if (is_linear(f_.source) && small.size() == 1) {
            constant_ = small[0];
        } else if (auto it = P.act.find(morphism_key(f_)); it != P.act.end()) {
            table_ = &it->second;
        } else {
            identity_ = f_ == identity_morphism(f_.target);
        }
    }
    Op operator()(const Op& a) const {
        if (table_) {
            if (auto it = table_->find(a); it != table_->end()) return it->second;
        } else if (std::binary_search(target_ops_.begin(), target_ops_.end(), a)) {
            if (constant_) return *constant_;
            if (identity_) return a;
        }
        return P_.act_apply(f_, a);
    }

private:
    const Collection& P_;
    TreeMorphism f_;
    const std::vector<Op>& target_ops_;
    const std::map<Op, Op>* table_ = nullptr;
    std::optional<Op> constant_;
    bool identity_ = false;
};

std::vector<Tree> nonlinear_trees(const Collection& c) {
    std::vector<Tree> out;
    for (const auto& p : c.trees())
        if (!is_linear(p)) out.push_back(p);
    return out;
}

// Operations at p grouped by boundary, each group in name order.
std::map<std::pair<Op, Op>, std::vector<Op>> fillers_by_boundary(const Collection& A, const Tree& p) {
    std::map<std::pair<Op, Op>, std::vector<Op>> out;
    for (const auto& x : A.ops(p)) {
        auto pp = boundary_of(A, p, x);
        out[{pp.a, pp.b}].push_back(x);
    }
    return out;
}

}  // namespace

Report check_contraction(const Collection& A, const ContractionChoice& g) {
    Report rep("check-contraction");
    std::map<std::string, std::set<std::pair<Op, Op>>> expected;
    for (const auto& p : A.trees()) {
        if (!g.in_scope(p)) continue;
        for (const auto& pp : parallel_pairs(A, p)) {
            ++rep.instances;
            expected[tree_key(p)].insert({pp.a, pp.b});
            auto x = g.get(p, pp.a, pp.b);
            if (!x) {
                rep.fail("totality", pair_witness(p, pp.a, pp.b));
                continue;
            }
            json w = pair_witness(p, pp.a, pp.b);
            w["filler"] = *x;
            if (!A.contains(p, *x)) {
                w["error"] = "not an operation";
                rep.fail("typing", w);
                continue;
            }
            auto bd = boundary_of(A, p, *x);
            if (bd.a != pp.a || bd.b != pp.b) {
                w["src"] = bd.a;
                w["tgt"] = bd.b;
                rep.fail("typing", w);
            }
        }
    }
    for (const auto& [key, m] : g.table)
        for (const auto& [pair, x] : m)
            if (!expected.count(key) || !expected[key].count(pair))
                rep.fail("scope", {{"tree", key}, {"a", pair.first}, {"b", pair.second}, {"filler", x}});
    return rep;
}

Report check_top_strict(const Collection& A) {
    Report rep("check-top-strict");
    for (const auto& p : A.trees()) {
        if (p.stage != A.dim || is_linear(p)) continue;
        ++rep.instances;
        auto r = unique_filler_report(A, p);
        if (!r.unique)
            rep.fail(r.exists ? "not-unique" : "no-filler", {{"tree", tree_key(p)}, {"witnesses", r.witnesses}});
    }
    return rep;
}

Report check_unital(const Collection& P, const ContractionChoice& g) {
    Report rep("check-unital");
    if (P.kind != CollectionKind::pointed) {
        rep.fail("kind", {{"error", "unitality needs a pointed collection"}, {"kind", kind_name(P.kind)}});
        return rep;
    }
    auto nl = nonlinear_trees(P);
    std::map<std::string, std::vector<Op>> fibre;
    for (const auto& p : nl) {
        fibre[tree_key(p)] = P.ops(p);
        if (p.stage >= 2) fibre[tree_key(tr(p))] = P.ops(tr(p));
    }
    for (const auto& p : nl) {
        const auto pairs = parallel_pairs(P, p);
        std::vector<std::optional<Op>> xs;
        for (const auto& pp : pairs) xs.push_back(g.get(p, pp.a, pp.b));
        const auto& top = fibre.at(tree_key(p));
        const int size = node_count(p);
        for (const auto& q : nl) {
            if (q.stage != p.stage || node_count(q) > size) continue;
            const auto gq = g.table.find(tree_key(q));
            for (const auto& f : enumerate_inclusions(q, p)) {
                ResolvedAct act(P, f, top);
                std::optional<ResolvedAct> below;
                if (p.stage >= 2) below.emplace(P, truncate(f), fibre.at(tree_key(tr(p))));
                for (size_t k = 0; k < pairs.size(); ++k) {
                    const auto& pp = pairs[k];
                    ++rep.instances;
                    if (!xs[k]) {
                        rep.fail("missing", pair_witness(p, pp.a, pp.b));
                        continue;
                    }
                    Op a = below ? (*below)(pp.a) : pp.a, b = below ? (*below)(pp.b) : pp.b;
                    std::optional<Op> y;
                    if (gq != g.table.end())
                        if (auto jt = gq->second.find({a, b}); jt != gq->second.end()) y = jt->second;
                    if (!y) {
                        rep.fail("missing", pair_witness(q, a, b));
                        continue;
                    }
                    Op lhs = act(*xs[k]);
                    if (lhs != *y)
                        rep.fail("unitality", {{"inclusion", morphism_key(f)},
                                               {"a", pp.a},
                                               {"b", pp.b},
                                               {"filler", *xs[k]},
                                               {"restricted", lhs},
                                               {"chosen", *y}});
                }
            }
        }
    }
    return rep;
}

SearchResult search_contraction(const Collection& A, bool unital, long max_steps) {
    SearchResult res;
    Report& rep = res.report;
    if (unital && A.kind != CollectionKind::pointed)
        throw Error("search_contraction: unital search needs a pointed collection");
    ContractionChoice& g = res.choice;
    g.base = unital ? CollectionKind::pointed
                    : (A.kind == CollectionKind::normalized ? CollectionKind::normalized : CollectionKind::reduced);

    struct Constraint {
        std::map<Op, Op> image;  // act(f) on the candidates
        int other;
    };
    struct Var {
        Tree p;
        Op a, b;
        std::vector<Op> domain;
        std::vector<Constraint> cons;
    };
    std::vector<Var> vars;
    std::map<std::tuple<std::string, Op, Op>, int> index;
    for (const auto& p : A.trees()) {
        if (!g.in_scope(p)) continue;
        auto fillers = fillers_by_boundary(A, p);
        for (const auto& pp : parallel_pairs(A, p)) {
            index[{tree_key(p), pp.a, pp.b}] = static_cast<int>(vars.size());
            vars.push_back({p, pp.a, pp.b, fillers[{pp.a, pp.b}], {}});
        }
    }
    if (unital) {
        for (int v = 0; v < static_cast<int>(vars.size()); ++v) {
            Var& x = vars[v];
            for (const auto& q : A.trees()) {
                if (q.stage != x.p.stage || !g.in_scope(q) || q == x.p) continue;
                for (const auto& f : enumerate_inclusions(q, x.p)) {
                    Op a = act_below(A, f, x.a), b = act_below(A, f, x.b);
                    auto it = index.find({tree_key(q), a, b});
                    if (it == index.end()) throw Error("search_contraction: restricted pair outside the scope");
                    if (it->second >= v) throw Error("search_contraction: inclusion into a smaller tree");
                    Constraint c{{}, it->second};
                    for (const auto& y : x.domain) c.image[y] = A.act_apply(f, y);
                    x.cons.push_back(std::move(c));
                }
            }
        }
    }

    const int n = static_cast<int>(vars.size());
    std::vector<int> pick(n, -1);
    long steps = 0;
    int deepest = 0;
    int v = 0;
    bool limit = false;
    while (v >= 0 && v < n) {
        Var& x = vars[v];
        int c = pick[v] + 1;
        for (; c < static_cast<int>(x.domain.size()); ++c) {
            if (++steps > max_steps) break;
            bool ok = true;
            for (const auto& k : x.cons)
                if (k.image.at(x.domain[c]) != vars[k.other].domain[pick[k.other]]) {
                    ok = false;
                    break;
                }
            if (ok) break;
        }
        if (steps > max_steps) {
            limit = true;
            break;
        }
        if (c < static_cast<int>(x.domain.size())) {
            pick[v] = c;
            deepest = std::max(deepest, ++v);
        } else {
            pick[v] = -1;
            --v;
        }
    }
    rep.instances = steps;
    rep.details["variables"] = n;
    rep.details["steps"] = steps;
    if (limit) {
        rep.fail("search-limit", {{"max_steps", max_steps}});
        return res;
    }
    if (v < 0) {
        const Var& x = vars[std::min(deepest, n - 1)];
        json w = pair_witness(x.p, x.a, x.b);
        w["reason"] = x.domain.empty() ? "no filler" : "unit constraints";
        rep.fail("exhausted", w);
        return res;
    }
    for (int i = 0; i < n; ++i) g.set(vars[i].p, vars[i].a, vars[i].b, vars[i].domain[pick[i]]);
    rep.merge(check_contraction(A, g));
    if (unital) rep.merge(check_unital(A, g));
    res.found = rep.ok();
    return res;
}

ContractionChoice bracketing_contraction(const Collection& P, const std::string& mode) {
    if (mode != "left" && mode != "right" && mode != "parity" && mode != "parity-rl")
        throw Error("unknown bracketing choice '" + mode + "' (left, right, parity, parity-rl)");
    ContractionChoice g;
    g.base = CollectionKind::pointed;
    for (const auto& p : nonlinear_trees(P)) {
        if (p.stage == 1) {
            int m = static_cast<int>(p.kids.size());
            bool left = mode == "left" || (mode == "parity" && m % 2 == 0) || (mode == "parity-rl" && m % 2 == 1);
            Op w = left ? left_bracketing(m) : right_bracketing(m);
            if (!P.contains(p, w)) throw Error("bracketing choice: '" + w + "' is not an operation at " + tree_key(p));
            g.set(p, P.point(), P.point(), w);
            continue;
        }
        auto by_boundary = fillers_by_boundary(P, p);
        for (const auto& pp : parallel_pairs(P, p)) {
            const auto& xs = by_boundary[{pp.a, pp.b}];
            if (xs.size() != 1)
                throw Error("bracketing choice: no unique filler at " + tree_key(p) + " for (" + pp.a + ", " + pp.b + ")");
            g.set(p, pp.a, pp.b, xs[0]);
        }
    }
    return g;
}

}  // namespace gop
