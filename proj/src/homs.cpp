#include "gop/homs.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace gop {

Op encode_columns(const Tree& p, const std::vector<Op>& comps) {
    if (p.stage == 0) return kPoint;
    if (comps.size() != p.kids.size())
        throw Error("encode_columns: " + std::to_string(comps.size()) + " components for " + tree_key(p));
    if (comps.size() == 1) return comps[0];
    return json(comps).dump();
}

std::vector<Op> decode_columns(const Tree& p, const Op& x) {
    if (p.stage == 0) return {};
    if (p.kids.size() == 1) return {x};
    std::vector<Op> out;
    try {
        out = json::parse(x).get<std::vector<Op>>();
    } catch (const json::exception&) {
        throw Error("decode_columns: '" + x + "' is not a tuple");
    }
    if (out.size() != p.kids.size()) throw Error("decode_columns: '" + x + "' has the wrong length for " + tree_key(p));
    return out;
}

ColumnTable column_table(const TreeMorphism& f) {
    if (f.target.stage == 0) throw Error("column_table: stage-0 morphism");
    ColumnTable t;
    const Tree& Q = f.target;
    auto lq = to_levels(Q);
    std::vector<int> seen(Q.kids.size(), 0);
    for (auto z : leaves(Q)) {
        int j = z.height == 0 ? -1 : ancestor(lq, z, 1).index;
        t.leaf_column.push_back(j);
        t.leaf_local.push_back(j < 0 ? 0 : seen[j]++);
    }
    t.over.resize(Q.kids.size());
    for (size_t c = 0; c < f.source.kids.size(); ++c) {
        int j = f.maps[1][c];
        t.column.push_back(j);
        t.position.push_back(static_cast<int>(t.over[j].size()));
        t.over[j].push_back(static_cast<int>(c));
    }
    return t;
}

namespace {

void require_reduced(const Operad& A, int bound, const char* who) {
    if (!is_reduced(A, bound))
        throw Error(std::string(who) + ": operad '" + A.name() + "' is not reduced within " + std::to_string(bound) +
                    " nodes");
}

class HOperad : public Operad {
public:
    explicit HOperad(OperadPtr B) : B_(std::move(B)) {}
    std::string name() const override { return "h(" + B_->name() + ")"; }
    int dim() const override { return B_->dim() - 1; }
    std::vector<Op> ops(const Tree& p) const override {
        if (p.stage > dim()) throw Error(name() + ": tree " + tree_key(p) + " has stage above " + std::to_string(dim()));
        if (p.stage == 0) return {kPoint};
        return B_->ops(bracket(p));
    }
    Op src(const Tree& p, const Op& a) const override { return p.stage <= 1 ? kPoint : B_->src(bracket(p), a); }
    Op tgt(const Tree& p, const Op& a) const override { return p.stage <= 1 ? kPoint : B_->tgt(bracket(p), a); }
    Op unit(int k) const override { return k == 0 ? kPoint : B_->unit(k + 1); }
    using Operad::subst;
    Op subst(const TreeMorphism& f, const MorphismFibres& fib, const Op& b,
             const std::vector<Op>& parts) const override {
        if (f.source.stage == 0) return kPoint;
        std::vector<Op> bp;
        for (size_t i = 0; i < parts.size(); ++i) bp.push_back(to_B(fib.fibres[i], parts[i]));
        auto d = data(f);
        return B_->subst(d->first, d->second, to_B(f.target, b), bp);
    }

private:
    using Data = std::pair<TreeMorphism, MorphismFibres>;
    Op to_B(const Tree& t, const Op& a) const { return t.stage == 0 ? B_->ops(unit_tree(1)).at(0) : a; }
    std::shared_ptr<const Data> data(const TreeMorphism& f) const {
        auto key = morphism_key(f);
        std::lock_guard<std::mutex> lock(mu_);
        auto& d = cache_[key];
        if (!d) {
            auto g = bracket(f);
            auto fib = analyze_morphism(g);
            d = std::make_shared<const Data>(std::move(g), std::move(fib));
        }
        return d;
    }
    OperadPtr B_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, std::shared_ptr<const Data>> cache_;
};

class ROperad : public Operad {
public:
    explicit ROperad(OperadPtr A) : A_(std::move(A)) {}
    std::string name() const override { return "r(" + A_->name() + ")"; }
    int dim() const override { return A_->dim() + 1; }
    std::vector<Op> ops(const Tree& p) const override {
        if (p.stage > dim()) throw Error(name() + ": tree " + tree_key(p) + " has stage above " + std::to_string(dim()));
        if (p.stage == 0) return {kPoint};
        std::vector<std::vector<Op>> f;
        for (const auto& k : p.kids) f.push_back(A_->ops(k));
        std::vector<Op> out, cur;
        auto rec = [&](auto&& self, size_t i) -> void {
            if (i == f.size()) {
                out.push_back(encode_columns(p, cur));
                return;
            }
            for (const auto& a : f[i]) {
                cur.push_back(a);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        std::sort(out.begin(), out.end());
        return out;
    }
    Op src(const Tree& p, const Op& a) const override { return boundary(p, a, true); }
    Op tgt(const Tree& p, const Op& a) const override { return boundary(p, a, false); }
    Op unit(int k) const override { return k == 0 ? kPoint : A_->unit(k - 1); }
    using Operad::subst;
    Op subst(const TreeMorphism& f, const MorphismFibres& fib, const Op& b,
             const std::vector<Op>& parts) const override {
        if (f.source.stage == 0) return kPoint;
        auto d = data(f);
        const ColumnTable& t = d->table;
        auto bs = decode_columns(f.target, b);
        std::vector<std::vector<Op>> ps;
        for (size_t z = 0; z < parts.size(); ++z) {
            ps.push_back(decode_columns(fib.fibres[z], parts[z]));
            int j = t.leaf_column[z];
            if (j >= 0 && ps.back().size() != t.over[j].size())
                throw Error(name() + ": fibre over leaf " + std::to_string(z) + " does not match column " +
                            std::to_string(j));
        }
        std::vector<Op> comps;
        for (size_t c = 0; c < f.source.kids.size(); ++c) {
            const TreeMorphism& fc = d->columns[c];
            if (fc.source.stage == 0) {
                comps.push_back(kPoint);
                continue;
            }
            int j = t.column[c];
            std::vector<Op> sub;
            for (size_t z = 0; z < parts.size(); ++z)
                if (t.leaf_column[z] == j) sub.push_back(ps[z][t.position[c]]);
            comps.push_back(A_->subst(fc, d->fibres[c], bs[j], sub));
        }
        return encode_columns(f.source, comps);
    }

private:
    Op boundary(const Tree& p, const Op& a, bool source) const {
        if (p.stage <= 1) return kPoint;
        auto xs = decode_columns(p, a);
        std::vector<Op> out;
        for (size_t i = 0; i < xs.size(); ++i)
            out.push_back(source ? A_->src(p.kids[i], xs[i]) : A_->tgt(p.kids[i], xs[i]));
        return encode_columns(tr(p), out);
    }
    struct Data {
        ColumnTable table;
        std::vector<TreeMorphism> columns;
        std::vector<MorphismFibres> fibres;
    };
    std::shared_ptr<const Data> data(const TreeMorphism& f) const {
        auto key = morphism_key(f);
        std::lock_guard<std::mutex> lock(mu_);
        auto& d = cache_[key];
        if (!d) {
            auto n = std::make_shared<Data>();
            n->table = column_table(f);
            for (size_t c = 0; c < f.source.kids.size(); ++c) {
                n->columns.push_back(restrict_to_column(f, static_cast<int>(c)));
                n->fibres.push_back(n->columns.back().source.stage == 0 ? MorphismFibres{}
                                                                         : analyze_morphism(n->columns.back()));
            }
            d = std::move(n);
        }
        return d;
    }
    OperadPtr A_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, std::shared_ptr<const Data>> cache_;
};

}  // namespace

OperadPtr apply_h(OperadPtr B, int bound) {
    if (B->dim() < 1) throw Error("apply_h: operad of dimension 0");
    require_reduced(*B, bound, "apply_h");
    return std::make_shared<HOperad>(std::move(B));
}

OperadPtr apply_r(OperadPtr A, int bound) {
    require_reduced(*A, bound, "apply_r");
    return std::make_shared<ROperad>(std::move(A));
}

// ------------------------------------------------------------------------ nu

Op Nu::apply(const Tree& p, const Op& b) const {
    if (p.stage == 0) return kPoint;
    std::vector<Op> comps;
    for (size_t i = 0; i < p.kids.size(); ++i) {
        if (p.kids[i].stage == 0) {
            comps.push_back(kPoint);
            continue;
        }
        comps.push_back(pointing.act_apply(canonical_inclusion(p, static_cast<int>(i)), b));
    }
    return encode_columns(p, comps);
}

Nu nu_from_pointing(OperadPtr B, Collection pointing, int bound) {
    Nu nu;
    nu.hB = apply_h(B, bound);
    nu.rhB = apply_r(nu.hB, bound);
    nu.B = std::move(B);
    nu.pointing = std::move(pointing);
    return nu;
}

Nu compute_nu(OperadPtr B, int bound) {
    auto P = derive_pointing(*B, bound);
    return nu_from_pointing(std::move(B), std::move(P), bound);
}

// -------------------------------------------------------------- operad maps

namespace {

json parts_json(const std::vector<Op>& v) { return json(v); }

// Every morphism of A's trees within the bound with its fibres and the
// compatible part tuples, by tree size.
template <class F>
void for_morphisms(const Operad& A, int bound, F&& visit) {
    for (int k = 1; k <= A.dim(); ++k) {
        auto ts = enumerate_trees(k, bound);
        for (const auto& P : ts)
            for (const auto& Q : ts)
                for (const auto& f : enumerate_morphisms(P, Q)) {
                    auto fib = analyze_morphism(f);
                    visit(f, fib, compatible_tuples(A, fib));
                }
    }
}

using OpTable = std::unordered_map<Op, Op>;

// Values of a fibrewise map, tabulated per tree on first use.
class ImageCache {
public:
    explicit ImageCache(OpMap m) : m_(std::move(m)) {}
    OpTable& table(const std::string& key) { return tables_[key]; }
    const Op& get(OpTable& t, const Tree& p, const Op& a) {
        auto it = t.find(a);
        if (it != t.end()) return it->second;
        return t.emplace(a, m_(p, a)).first->second;
    }

private:
    OpMap m_;
    std::unordered_map<std::string, OpTable> tables_;
};

std::string join(const Op& b, const std::vector<const Op*>& xs) {
    std::string k = b;
    for (const auto* x : xs) {
        k += '\x1f';
        k += *x;
    }
    return k;
}

}  // namespace

Report check_operad_map(const Operad& A, const Operad& B, const OpMap& m, int bound) {
    Report rep("check-operad-map");
    if (A.dim() != B.dim()) {
        rep.fail("dimension", {{"source", A.dim()}, {"target", B.dim()}});
        return rep;
    }
    for (const auto& p : trees_by_size(0, A.dim(), bound))
        for (const auto& a : A.ops(p)) {
            ++rep.instances;
            Op y = m(p, a);
            if (!B.contains(p, y)) {
                rep.fail("typing", {{"tree", tree_key(p)}, {"op", a}, {"image", y}});
                continue;
            }
            if (p.stage < 2) continue;
            Tree t = tr(p);
            if (m(t, A.src(p, a)) != B.src(p, y)) rep.fail("source", {{"tree", tree_key(p)}, {"op", a}, {"image", y}});
            if (m(t, A.tgt(p, a)) != B.tgt(p, y)) rep.fail("target", {{"tree", tree_key(p)}, {"op", a}, {"image", y}});
        }
    for (int k = 0; k <= A.dim(); ++k) {
        Op u = m(unit_tree(k), A.unit(k));
        if (u != B.unit(k)) rep.fail("units", {{"stage", k}, {"image", u}, {"unit", B.unit(k)}});
    }
    // substitution needs images inside the fibres
    if (rep.has_law("typing")) return rep;
    ImageCache img(m);
    for_morphisms(A, bound, [&](const TreeMorphism& f, const MorphismFibres& fib, const std::vector<std::vector<Op>>& tuples) {
        OpTable& tp = img.table(tree_key(f.source));
        OpTable& tq = img.table(tree_key(f.target));
        std::vector<OpTable*> tf;
        for (const auto& t : fib.fibres) tf.push_back(&img.table(tree_key(t)));
        // sigma in B depends only on the images
        std::unordered_map<std::string, Op> memo;
        std::vector<const Op*> mp(fib.fibres.size());
        for (const auto& b : A.ops(f.target))
            for (const auto& parts : tuples) {
                ++rep.instances;
                const Op& lhs = img.get(tp, f.source, A.subst(f, fib, b, parts));
                const Op& mb = img.get(tq, f.target, b);
                for (size_t i = 0; i < parts.size(); ++i) mp[i] = &img.get(*tf[i], fib.fibres[i], parts[i]);
                auto key = join(mb, mp);
                auto it = memo.find(key);
                if (it == memo.end()) {
                    std::vector<Op> args;
                    for (const auto* x : mp) args.push_back(*x);
                    it = memo.emplace(key, B.subst(f, fib, mb, args)).first;
                }
                if (lhs != it->second)
                    rep.fail("substitution", {{"morphism", morphism_key(f)}, {"b", b}, {"parts", parts_json(parts)},
                                              {"lhs", lhs}, {"rhs", it->second}});
            }
    });
    return rep;
}

Report check_nu_operadic(const Nu& nu, int bound) {
    Report rep("check-nu-operadic");
    auto map_rep = check_operad_map(*nu.B, *nu.rhB, [&](const Tree& p, const Op& b) { return nu.apply(p, b); }, bound);
    for (const auto& v : map_rep.violations) rep.fail("map-" + v.law, v.witness);
    rep.violation_count = map_rep.violation_count;
    rep.instances += map_rep.instances;

    // column c of sigma_f(b; a) against sigma_[f_c](pi_f(c) b; pi a) in B
    const Operad& B = *nu.B;
    long proj = 0;
    std::unordered_map<std::string, OpTable> pis;
    auto pi = [&](const Tree& T, int i, const Op& y) -> const Op& {
        auto& t = pis[tree_key(T) + "#" + std::to_string(i)];
        auto it = t.find(y);
        if (it != t.end()) return it->second;
        return t.emplace(y, nu.pointing.act_apply(canonical_inclusion(T, i), y)).first->second;
    };
    for_morphisms(B, bound, [&](const TreeMorphism& f, const MorphismFibres& fib, const std::vector<std::vector<Op>>& tuples) {
        if (f.source.stage < 2) return;
        auto t = column_table(f);
        const size_t nc = f.source.kids.size();
        std::vector<TreeMorphism> fcs;
        std::vector<MorphismFibres> fcfib;
        std::vector<std::unordered_map<std::string, Op>> memo(nc);
        for (size_t c = 0; c < nc; ++c) {
            fcs.push_back(bracket(restrict_to_column(f, static_cast<int>(c))));
            fcfib.push_back(analyze_morphism(fcs.back()));
        }
        for (const auto& b : B.ops(f.target))
            for (const auto& parts : tuples) {
                Op x = B.subst(f, fib, b, parts);
                for (size_t c = 0; c < nc; ++c) {
                    ++proj;
                    int j = t.column[c];
                    const Op& lhs = pi(f.source, static_cast<int>(c), x);
                    std::vector<const Op*> sub;
                    for (size_t z = 0; z < parts.size(); ++z)
                        if (t.leaf_column[z] == j) sub.push_back(&pi(fib.fibres[z], t.position[c], parts[z]));
                    const Op& pb = pi(f.target, j, b);
                    auto key = join(pb, sub);
                    auto it = memo[c].find(key);
                    if (it == memo[c].end()) {
                        std::vector<Op> args;
                        for (const auto* y : sub) args.push_back(*y);
                        it = memo[c].emplace(key, B.subst(fcs[c], fcfib[c], pb, args)).first;
                    }
                    if (lhs != it->second)
                        rep.fail("projection", {{"morphism", morphism_key(f)}, {"b", b}, {"parts", parts_json(parts)},
                                                {"column", c}, {"lhs", lhs}, {"rhs", it->second}});
                }
            }
    });
    rep.instances += proj;
    rep.details = {{"map_instances", map_rep.instances}, {"projection_instances", proj}, {"bound", bound}};
    return rep;
}

Report check_rh_identity(OperadPtr A, int bound) {
    Report rep("check-rh-identity");
    auto hr = apply_h(apply_r(A, bound), bound);
    for (const auto& p : trees_by_size(0, A->dim(), bound)) {
        ++rep.instances;
        auto x = A->ops(p), y = hr->ops(p);
        if (x != y) {
            rep.fail("fibre", {{"tree", tree_key(p)}, {"A", x}, {"hrA", y}});
            continue;
        }
        if (p.stage < 2) continue;
        for (const auto& a : x)
            if (A->src(p, a) != hr->src(p, a) || A->tgt(p, a) != hr->tgt(p, a))
                rep.fail("boundary", {{"tree", tree_key(p)}, {"op", a}});
    }
    for (int k = 0; k <= A->dim(); ++k)
        if (A->unit(k) != hr->unit(k)) rep.fail("units", {{"stage", k}, {"A", A->unit(k)}, {"hrA", hr->unit(k)}});
    if (!rep.ok()) return rep;
    for_morphisms(*A, bound, [&](const TreeMorphism& f, const MorphismFibres& fib, const std::vector<std::vector<Op>>& tuples) {
        for (const auto& b : A->ops(f.target))
            for (const auto& parts : tuples) {
                ++rep.instances;
                Op x = A->subst(f, fib, b, parts), y = hr->subst(f, fib, b, parts);
                if (x != y)
                    rep.fail("substitution", {{"morphism", morphism_key(f)}, {"b", b}, {"parts", parts_json(parts)},
                                              {"A", x}, {"hrA", y}});
            }
    });
    return rep;
}

Report check_h_nu_identity(const Nu& nu, int bound) {
    Report rep("check-h-nu-identity");
    // h(nu)_p = nu_[p]; trees [p] must stay within the bound
    for (const auto& p : trees_by_size(1, nu.hB->dim(), bound - 1))
        for (const auto& b : nu.hB->ops(p)) {
            ++rep.instances;
            Op y = nu.apply(bracket(p), b);
            if (y != b) rep.fail("h-nu", {{"tree", tree_key(p)}, {"op", b}, {"image", y}});
        }
    return rep;
}

Report check_nu_r_identity(OperadPtr A, int bound) {
    Report rep("check-nu-r-identity");
    auto nu = compute_nu(apply_r(A, bound), bound);
    for (const auto& p : trees_by_size(0, nu.B->dim(), bound))
        for (const auto& x : nu.B->ops(p)) {
            ++rep.instances;
            Op y = nu.apply(p, x);
            if (y != x) rep.fail("nu-r", {{"tree", tree_key(p)}, {"op", x}, {"image", y}});
        }
    return rep;
}

Report check_adjunction(OperadPtr A, OperadPtr B, int bound) {
    Report rep("check-adjunction");
    if (B->dim() != A->dim() + 1)
        throw Error("check_adjunction: dimensions " + std::to_string(A->dim()) + " and " + std::to_string(B->dim()) +
                    " are not adjacent");
    auto nu = compute_nu(B, bound);
    json parts = json::object();
    for (const auto& r : {check_rh_identity(A, bound), check_h_nu_identity(nu, bound), check_nu_r_identity(A, bound),
                          check_nu_operadic(nu, bound)}) {
        parts[r.suite] = {{"instances", r.instances}, {"violations", r.violation_count}};
        rep.merge(r);
    }
    rep.details = {{"A", A->name()}, {"B", B->name()}, {"bound", bound}, {"suites", parts}};
    return rep;
}

// -------------------------------------------------------------- contractions

namespace {

void require_unital(const Collection& P, const ContractionChoice& g, const char* who) {
    auto r = check_unital(P, g);
    if (!r.ok()) throw Error(std::string(who) + ": contraction is not unital (" + r.violations[0].law + ")");
}

Op lookup(const ContractionChoice& g, const Tree& p, const Op& a, const Op& b, const char* who) {
    auto x = g.get(p, a, b);
    if (!x) throw Error(std::string(who) + ": no filler at " + tree_key(p) + " for (" + a + ", " + b + ")");
    return *x;
}

}  // namespace

ContractionChoice lift_contraction_h(OperadPtr B, const ContractionChoice& g, int bound) {
    require_unital(derive_pointing(*B, bound + 1), g, "lift_contraction_h");
    auto hB = apply_h(B, bound + 1);
    auto P = derive_pointing(*hB, bound);
    const Op u1 = B->ops(unit_tree(1)).at(0);
    ContractionChoice out;
    for (const auto& p : P.trees()) {
        if (!out.in_scope(p)) continue;
        for (const auto& pp : parallel_pairs(P, p)) {
            Op a = p.stage == 1 ? u1 : pp.a, b = p.stage == 1 ? u1 : pp.b;
            out.set(p, pp.a, pp.b, lookup(g, bracket(p), a, b, "lift_contraction_h"));
        }
    }
    return out;
}

ContractionChoice lift_contraction_r(OperadPtr A, const ContractionChoice& psi, int bound) {
    require_unital(derive_pointing(*A, std::max(bound - 1, 0)), psi, "lift_contraction_r");
    auto rA = apply_r(A, bound);
    auto P = derive_pointing(*rA, bound);
    ContractionChoice out;
    for (const auto& p : P.trees()) {
        if (!out.in_scope(p)) continue;
        for (const auto& pp : parallel_pairs(P, p)) {
            auto as = decode_columns(tr(p), pp.a), bs = decode_columns(tr(p), pp.b);
            std::vector<Op> comps;
            for (size_t i = 0; i < p.kids.size(); ++i) {
                const Tree& pi = p.kids[i];
                if (pi.stage == 0) comps.push_back(kPoint);
                else if (is_linear(pi)) comps.push_back(A->ops(pi).at(0));
                else if (pi.stage == 1) comps.push_back(lookup(psi, pi, kPoint, kPoint, "lift_contraction_r"));
                else comps.push_back(lookup(psi, pi, as[i], bs[i], "lift_contraction_r"));
            }
            out.set(p, pp.a, pp.b, encode_columns(p, comps));
        }
    }
    return out;
}

Report check_nu_contraction(const Nu& nu, const ContractionChoice& g, int bound) {
    Report rep("check-nu-contraction");
    auto g1 = lift_contraction_h(nu.B, g, bound - 1);
    auto g2 = lift_contraction_r(nu.hB, g1, bound);
    const Collection& P = nu.pointing;
    for (const auto& p : P.trees()) {
        if (!g.in_scope(p) || node_count(p) > bound) continue;
        const Tree t = tr(p);
        for (const auto& pp : parallel_pairs(P, p)) {
            ++rep.instances;
            Op x = lookup(g, p, pp.a, pp.b, "check_nu_contraction");
            Op lhs = nu.apply(p, x);
            auto y = g2.get(p, nu.apply(t, pp.a), nu.apply(t, pp.b));
            json w = {{"tree", tree_key(p)}, {"a", pp.a}, {"b", pp.b}, {"filler", x}};
            if (!y) {
                rep.fail("lifted-missing", w);
                continue;
            }
            if (lhs != *y) {
                w["lhs"] = lhs;
                w["rhs"] = *y;
                rep.fail("nu-contraction", w);
            }
            // column by column through the projections
            for (size_t i = 0; i < p.kids.size(); ++i) {
                const Tree& pi = p.kids[i];
                if (pi.stage == 0 || is_linear(pi)) continue;
                auto inc = canonical_inclusion(p, static_cast<int>(i));
                Op a = P.act_apply(canonical_inclusion(t, static_cast<int>(i)), pp.a);
                Op b = P.act_apply(canonical_inclusion(t, static_cast<int>(i)), pp.b);
                auto z = g.get(bracket(pi), a, b);
                Op l = P.act_apply(inc, x);
                if (!z || l != *z) {
                    json v = w;
                    v["column"] = i;
                    v["restricted"] = l;
                    v["chosen"] = z ? json(*z) : json(nullptr);
                    rep.fail("column", v);
                }
            }
        }
    }
    return rep;
}

}  // namespace gop
