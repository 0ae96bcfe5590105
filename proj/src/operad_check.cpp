// Exhaustive operad axiom checker.  Operations are interned per tree and every
// sigma_f is evaluated once into a table, so associativity instances reduce
// to table lookups.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <unordered_map>

#include "gop/operad.hpp"

namespace gop {

namespace {

struct Universe {
    std::vector<Tree> trees;
    std::map<std::string, int> id;
    std::vector<std::vector<Op>> ops;
    std::vector<std::unordered_map<Op, int>> index;
    std::vector<std::vector<int>> src, tgt;   // into the fibre at lower[t]
    std::vector<int> lower;                   // id of tr(t), -1 at stage 0
    std::vector<LevelTree> levels;
    std::vector<std::vector<NodeId>> leaves;

    int find(const Tree& t) const {
        auto it = id.find(tree_key(t));
        if (it == id.end()) throw Error("tree " + tree_key(t) + " is outside the checked range");
        return it->second;
    }
    int op_index(int t, const Op& a) const {
        auto it = index[t].find(a);
        return it == index[t].end() ? -1 : it->second;
    }
    // Iterated source/target down to stage r; -1 when undefined.
    int boundary(int t, int a, int r, bool source) const {
        while (a >= 0 && trees[t].stage > r) {
            a = (source ? src : tgt)[t][a];
            t = lower[t];
        }
        return a;
    }
};

struct MorphRec {
    TreeMorphism f;
    MorphismFibres fib;
    int p = 0, q = 0;
    std::vector<int> fibre;
    std::vector<std::vector<int>> tuples;
    std::vector<unsigned long> radix;
    enum { dense, hashed, wide } mode = dense;
    std::vector<int> dense_index;
    std::unordered_map<unsigned long, int> hashed_index;
    std::map<std::vector<int>, int> wide_index;  // codes would overflow
    std::vector<int> sigma;  // [b * tuples.size() + t], -1 when undefined

    int lookup(const std::vector<int>& parts) const {
        for (int x : parts)
            if (x < 0) return -1;
        if (mode == wide) {
            auto it = wide_index.find(parts);
            return it == wide_index.end() ? -1 : it->second;
        }
        unsigned long code = 0;
        for (size_t i = 0; i < parts.size(); ++i) code += parts[i] * radix[i];
        if (mode == dense) return dense_index[code];
        auto it = hashed_index.find(code);
        return it == hashed_index.end() ? -1 : it->second;
    }
    int at(int b, int t) const { return sigma[static_cast<size_t>(b) * tuples.size() + t]; }
};

// (source id, target id, level maps packed in base bound+1)
struct MorphKey {
    int p, q;
    unsigned long code;
    bool operator==(const MorphKey&) const = default;
};

struct MorphKeyHash {
    size_t operator()(const MorphKey& k) const {
        unsigned long h = k.code * 0x9e3779b97f4a7c15UL;
        h ^= (static_cast<unsigned long>(k.p) << 32 | static_cast<unsigned>(k.q)) + 0x7f4a7c15UL + (h << 6) + (h >> 2);
        return h;
    }
};

json jops(const std::vector<Op>& v) { return json(v); }

class Checker {
public:
    Checker(const Operad& A, int bound, Report& rep) : A_(A), bound_(bound), rep_(rep) {}

    void run() {
        // packed level maps must fit in 64 bits
        if (std::pow(bound_ + 1.0, bound_) > 9.2e18)
            throw Error("check_operad: node bound " + std::to_string(bound_) + " is too large");
        build_universe();
        for (int k = 0; k <= A_.dim(); ++k) {
            auto u = A_.unit(k);
            if (!A_.contains(unit_tree(k), u)) rep_.fail("units", {{"stage", k}, {"unit", u}});
        }
        for (int k = 0; k <= A_.dim(); ++k) build_morphisms(k);
        typing(0);
        for (int k = 1; k <= A_.dim(); ++k) {
            units(k);
            typing(k);
        }
        for (int k = 1; k <= A_.dim(); ++k) associativity(k);
        rep_.instances += assoc_instances_;
        rep_.details["assoc_instances"] = assoc_instances_;
    }

private:
    const Operad& A_;
    int bound_;
    Report& rep_;
    Universe U_;
    std::vector<MorphRec> recs_;
    std::unordered_map<MorphKey, int, MorphKeyHash> rec_index_;
    std::map<std::pair<int, int>, std::vector<int>> by_pair_;
    long assoc_instances_ = 0;

    std::vector<Op> names(const MorphRec& d, const std::vector<int>& t) const {
        std::vector<Op> out;
        for (size_t i = 0; i < t.size(); ++i) out.push_back(U_.ops[d.fibre[i]][t[i]]);
        return out;
    }

    void build_universe() {
        U_.trees = trees_by_size(0, A_.dim(), bound_);
        for (size_t i = 0; i < U_.trees.size(); ++i) U_.id[tree_key(U_.trees[i])] = static_cast<int>(i);
        const size_t n = U_.trees.size();
        U_.ops.resize(n);
        U_.index.resize(n);
        U_.src.resize(n);
        U_.tgt.resize(n);
        U_.lower.assign(n, -1);
        for (size_t i = 0; i < n; ++i) {
            const Tree& t = U_.trees[i];
            U_.levels.push_back(to_levels(t));
            U_.leaves.push_back(leaves(t));
            U_.ops[i] = A_.ops(t);
            for (size_t j = 0; j < U_.ops[i].size(); ++j) U_.index[i][U_.ops[i][j]] = static_cast<int>(j);
        }
        for (size_t i = 0; i < n; ++i) {
            const Tree& t = U_.trees[i];
            if (t.stage == 0) continue;
            int lo = U_.find(tr(t));
            U_.lower[i] = lo;
            for (const auto& a : U_.ops[i]) {
                U_.src[i].push_back(U_.op_index(lo, t.stage == 1 ? U_.ops[lo][0] : A_.src(t, a)));
                U_.tgt[i].push_back(U_.op_index(lo, t.stage == 1 ? U_.ops[lo][0] : A_.tgt(t, a)));
            }
        }
    }

    void build_morphisms(int k) {
        std::vector<int> ids;
        for (size_t i = 0; i < U_.trees.size(); ++i)
            if (U_.trees[i].stage == k) ids.push_back(static_cast<int>(i));
        for (int pi : ids)
            for (int qi : ids)
                for (auto& f : enumerate_morphisms(U_.trees[pi], U_.trees[qi])) {
                    MorphRec d;
                    d.p = pi;
                    d.q = qi;
                    d.fib = analyze_morphism(f);
                    d.f = std::move(f);
                    for (const auto& t : d.fib.fibres) d.fibre.push_back(U_.find(t));
                    make_tuples(d);
                    int rid = static_cast<int>(recs_.size());
                    rec_index_[{pi, qi, pack(d.f.maps)}] = rid;
                    by_pair_[{pi, qi}].push_back(rid);
                    recs_.push_back(std::move(d));
                }
    }

    void make_tuples(MorphRec& d) const {
        const size_t n = d.fibre.size();
        std::vector<std::vector<int>> lo(n), hi(n);
        for (size_t i = 0; i < n; ++i) {
            int t = d.fibre[i];
            for (int a = 0; a < static_cast<int>(U_.ops[t].size()); ++a) {
                lo[i].push_back(i > 0 ? U_.boundary(t, a, d.fib.truncated[i - 1].stage, true) : 0);
                hi[i].push_back(i + 1 < n ? U_.boundary(t, a, d.fib.truncated[i].stage, false) : 0);
            }
        }
        std::vector<int> cur;
        auto rec = [&](auto&& self, size_t i) -> void {
            if (i == n) {
                d.tuples.push_back(cur);
                return;
            }
            int t = d.fibre[i];
            for (int a = 0; a < static_cast<int>(U_.ops[t].size()); ++a) {
                if (i > 0 && (lo[i][a] < 0 || lo[i][a] != hi[i - 1][cur.back()])) continue;
                cur.push_back(a);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        unsigned long prod = 1;
        d.radix.assign(n, 0);
        for (size_t i = 0; i < n && d.mode != MorphRec::wide; ++i) {
            d.radix[i] = prod;
            unsigned long sz = std::max<size_t>(1, U_.ops[d.fibre[i]].size());
            if (prod > (1UL << 62) / sz) d.mode = MorphRec::wide;
            prod *= sz;
        }
        if (d.mode != MorphRec::wide && prod > (1UL << 22)) d.mode = MorphRec::hashed;
        auto code_of = [&](const std::vector<int>& t) {
            unsigned long code = 0;
            for (size_t i = 0; i < n; ++i) code += t[i] * d.radix[i];
            return code;
        };
        switch (d.mode) {
            case MorphRec::dense:
                d.dense_index.assign(prod, -1);
                for (size_t t = 0; t < d.tuples.size(); ++t) d.dense_index[code_of(d.tuples[t])] = static_cast<int>(t);
                break;
            case MorphRec::hashed:
                d.hashed_index.reserve(d.tuples.size());
                for (size_t t = 0; t < d.tuples.size(); ++t) d.hashed_index[code_of(d.tuples[t])] = static_cast<int>(t);
                break;
            case MorphRec::wide:
                for (size_t t = 0; t < d.tuples.size(); ++t) d.wide_index[d.tuples[t]] = static_cast<int>(t);
        }
    }

    unsigned long pack(const std::vector<std::vector<int>>& maps) const {
        unsigned long code = 0;
        for (size_t h = 1; h < maps.size(); ++h)
            for (int x : maps[h]) code = code * (bound_ + 1) + x;
        return code;
    }

    int rec_at(int p, int q, unsigned long code) const {
        auto it = rec_index_.find({p, q, code});
        if (it == rec_index_.end()) throw Error("morphism missing from enumeration");
        return it->second;
    }

    void units(int k) {
        for (size_t i = 0; i < U_.trees.size(); ++i) {
            const Tree& p = U_.trees[i];
            if (p.stage != k) continue;
            auto id = identity_morphism(p);
            auto fib = analyze_morphism(id);
            std::vector<Op> us;
            for (const auto& t : fib.fibres) us.push_back(A_.unit(t.stage));
            for (const auto& b : U_.ops[i]) {
                ++rep_.instances;
                try {
                    Op r = A_.subst(id, fib, b, us);
                    if (r != b) rep_.fail("unit-left", {{"tree", tree_key(p)}, {"op", b}, {"got", r}});
                } catch (const Error& e) {
                    rep_.fail("unit-left", {{"tree", tree_key(p)}, {"op", b}, {"error", e.what()}});
                }
            }
            auto bang = terminal_morphism(p);
            auto bfib = analyze_morphism(bang);
            for (const auto& a : U_.ops[i]) {
                ++rep_.instances;
                try {
                    Op r = A_.subst(bang, bfib, A_.unit(k), {a});
                    if (r != a) rep_.fail("unit-right", {{"tree", tree_key(p)}, {"op", a}, {"got", r}});
                } catch (const Error& e) {
                    rep_.fail("unit-right", {{"tree", tree_key(p)}, {"op", a}, {"error", e.what()}});
                }
            }
        }
    }

    // Evaluates every sigma_f of stage k and checks it against its boundary.
    void typing(int k) {
        for (auto& d : recs_) {
            if (U_.trees[d.q].stage != k) continue;
            const auto& qops = U_.ops[d.q];
            const size_t T = d.tuples.size();
            d.sigma.assign(qops.size() * T, -1);
            const MorphRec* td = nullptr;
            if (k >= 2) td = &recs_[rec_at(U_.lower[d.p], U_.lower[d.q], pack(truncate(d.f).maps))];
            std::vector<int> bp;
            for (size_t b = 0; b < qops.size(); ++b)
                for (size_t t = 0; t < T; ++t) {
                    ++rep_.instances;
                    auto where = [&] {
                        return json{{"f", morphism_key(d.f)}, {"b", qops[b]}, {"parts", jops(names(d, d.tuples[t]))}};
                    };
                    int r;
                    try {
                        Op x = A_.subst(d.f, d.fib, qops[b], names(d, d.tuples[t]));
                        r = U_.op_index(d.p, x);
                        if (r < 0) {
                            json w = where();
                            w["got"] = x;
                            rep_.fail("typing", w);
                            continue;
                        }
                    } catch (const Error& e) {
                        json w = where();
                        w["error"] = e.what();
                        rep_.fail("typing", w);
                        continue;
                    }
                    d.sigma[b * T + t] = r;
                    if (!td) continue;
                    for (bool side : {true, false}) {
                        const auto& bd = side ? U_.src : U_.tgt;
                        bp.clear();
                        for (size_t j = 0; j < d.fib.lower_cut.size(); ++j) {
                            int i = side ? d.fib.lower_first[j] : d.fib.lower_last[j];
                            int a = d.tuples[t][i];
                            bp.push_back(d.fib.lower_cut[j] ? bd[d.fibre[i]][a] : a);
                        }
                        int bi = td->lookup(bp);
                        int bb = bd[d.q][b];
                        int expect = (bi < 0 || bb < 0) ? -1 : td->at(bb, bi);
                        int got = bd[d.p][r];
                        if (expect < 0 || got != expect) {
                            json w = where();
                            w["side"] = side ? "src" : "tgt";
                            w["boundary"] = got < 0 ? Op("?") : U_.ops[U_.lower[d.p]][got];
                            w["expected"] = expect < 0 ? Op("?") : U_.ops[U_.lower[d.p]][expect];
                            rep_.fail("typing", w);
                        }
                    }
                }
        }
    }

    struct PartSource {
        int leaf;
        int mode;  // 0 as is, 1 source, 2 target
        int height;
    };

    void associativity(int k) {
        std::vector<int> ids;
        for (size_t i = 0; i < U_.trees.size(); ++i)
            if (U_.trees[i].stage == k) ids.push_back(static_cast<int>(i));
        // per tree: flat node offsets, leaf index of each node (-1 inside),
        // first/last leaf above each node
        const size_t NT = U_.trees.size();
        std::vector<std::vector<int>> off(NT), leaf_at(NT);
        std::vector<std::vector<std::pair<int, int>>> span(NT);
        for (int t : ids) {
            const auto& lt = U_.levels[t];
            int n = 0;
            for (int h = 0; h <= k; ++h) {
                off[t].push_back(n);
                n += lt.count(h);
            }
            leaf_at[t].assign(n, -1);
            span[t].assign(n, {-1, -1});
            const auto& lv = U_.leaves[t];
            for (size_t i = 0; i < lv.size(); ++i) {
                leaf_at[t][off[t][lv[i].height] + lv[i].index] = static_cast<int>(i);
                for (int h = 0; h <= lv[i].height; ++h) {
                    NodeId a = ancestor(lt, lv[i], h);
                    auto& sp = span[t][off[t][h] + a.index];
                    if (sp.first < 0) sp.first = static_cast<int>(i);
                    sp.second = static_cast<int>(i);
                }
            }
        }
        const unsigned long base = bound_ + 1;
        std::vector<int> inner, pz;
        for (int ri : ids)
            for (int qi : ids)
                for (int gid : by_pair_[{qi, ri}]) {
                    const MorphRec& g = recs_[gid];
                    if (g.tuples.empty()) continue;
                    const size_t nz = U_.leaves[ri].size();
                    const LevelTree& lq = U_.levels[qi];
                    // per leaf z of r: position in g^{-1}(z) of each q-node (-1 outside),
                    // and where the parts of sigma_{f_z} come from
                    std::vector<std::vector<std::vector<int>>> pos(nz);
                    std::vector<std::vector<PartSource>> srcs(nz);
                    for (size_t z = 0; z < nz; ++z) {
                        NodeId zn = U_.leaves[ri][z];
                        std::vector<std::vector<int>> tnodes(zn.height + 1);
                        pos[z].resize(zn.height + 1);
                        tnodes[0] = {0};
                        for (int h = 1; h <= zn.height; ++h) {
                            int a = ancestor(U_.levels[ri], zn, h).index;
                            pos[z][h].assign(lq.count(h), -1);
                            for (int y = 0; y < lq.count(h); ++y)
                                if (g.f.maps[h][y] == a) {
                                    pos[z][h][y] = static_cast<int>(tnodes[h].size());
                                    tnodes[h].push_back(y);
                                }
                        }
                        for (auto w : U_.leaves[g.fibre[z]]) {
                            NodeId y{w.height, tnodes[w.height][w.index]};
                            if (int li = leaf_at[qi][off[qi][y.height] + y.index]; li >= 0) {
                                srcs[z].push_back({li, 0, y.height});
                                continue;
                            }
                            int u = ancestor(U_.levels[ri], zn, y.height + 1).index;
                            int before = -1, after = -1;
                            for (int c : children(lq, y)) {
                                if (g.f.maps[y.height + 1][c] < u) before = c;
                                if (g.f.maps[y.height + 1][c] > u && after < 0) after = c;
                            }
                            if (before >= 0)
                                srcs[z].push_back({span[qi][off[qi][y.height + 1] + before].second, 2, y.height});
                            else
                                srcs[z].push_back({span[qi][off[qi][y.height + 1] + after].first, 1, y.height});
                        }
                    }
                    std::vector<const MorphRec*> fz(nz);
                    for (int pi : ids)
                        for (int fid : by_pair_[{pi, qi}]) {
                            const MorphRec& f = recs_[fid];
                            if (f.tuples.empty()) continue;
                            unsigned long gcode = 0;
                            for (int h = 1; h <= k; ++h)
                                for (int x : f.f.maps[h]) gcode = gcode * base + g.f.maps[h][x];
                            const MorphRec& gf = recs_[rec_at(pi, ri, gcode)];
                            for (size_t z = 0; z < nz; ++z) {
                                unsigned long code = 0;
                                for (size_t h = 1; h < pos[z].size(); ++h)
                                    for (int x : f.f.maps[h])
                                        if (int y = pos[z][h][x]; y >= 0) code = code * base + y;
                                fz[z] = &recs_[rec_at(gf.fibre[z], g.fibre[z], code)];
                            }
                            // tuple index of sigma_{f_z}'s parts, per tuple of f
                            const size_t Tf = f.tuples.size();
                            std::vector<int> fzt(Tf * nz, -1);
                            for (size_t at = 0; at < Tf; ++at)
                                for (size_t z = 0; z < nz; ++z) {
                                    pz.clear();
                                    for (const auto& s : srcs[z]) {
                                        int leaf = s.leaf;
                                        int x = f.tuples[at][leaf];
                                        if (s.mode) x = U_.boundary(f.fibre[leaf], x, s.height, s.mode == 1);
                                        pz.push_back(x);
                                    }
                                    int ix = fz[z]->lookup(pz);
                                    fzt[at * nz + z] = ix;
                                    if (ix < 0)
                                        rep_.fail("associativity",
                                                  {{"f", morphism_key(f.f)},
                                                   {"g", morphism_key(g.f)},
                                                   {"a", jops(names(f, f.tuples[at]))},
                                                   {"error", "parts over leaf " + std::to_string(z) +
                                                                 " are not composable"}});
                                }
                            inner.assign(nz, 0);
                            const size_t Tgf = gf.tuples.size();
                            std::vector<int> gis(Tf);
                            for (int bt = 0; bt < static_cast<int>(g.tuples.size()); ++bt) {
                                // the composite's parts depend on (bt, at) only
                                for (size_t at = 0; at < Tf; ++at) {
                                    bool ok = true;
                                    for (size_t z = 0; z < nz && ok; ++z) {
                                        int ix = fzt[at * nz + z];
                                        inner[z] = ix < 0 ? -1 : fz[z]->at(g.tuples[bt][z], ix);
                                        ok = inner[z] >= 0;
                                    }
                                    gis[at] = ok ? gf.lookup(inner) : -2;
                                    if (gis[at] == -1) fail_inner(f, g, gf, bt, static_cast<int>(at), inner);
                                }
                                for (int c = 0; c < static_cast<int>(U_.ops[ri].size()); ++c) {
                                    int gb = g.at(c, bt);
                                    if (gb < 0) continue;
                                    const int* lrow = &f.sigma[static_cast<size_t>(gb) * Tf];
                                    const int* rrow = &gf.sigma[static_cast<size_t>(c) * Tgf];
                                    assoc_instances_ += static_cast<long>(Tf);
                                    for (size_t at = 0; at < Tf; ++at) {
                                        if (gis[at] < 0 || lrow[at] < 0) continue;
                                        int rhs = rrow[gis[at]];
                                        if (rhs != lrow[at])
                                            fail_assoc(f, g, c, bt, static_cast<int>(at), lrow[at], rhs);
                                    }
                                }
                            }
                        }
                }
    }

    void fail_assoc(const MorphRec& f, const MorphRec& g, int c, int bt, int at, int lhs, int rhs) {
        json w = {{"f", morphism_key(f.f)},
                  {"g", morphism_key(g.f)},
                  {"c", U_.ops[g.q][c]},
                  {"b", jops(names(g, g.tuples[bt]))},
                  {"a", jops(names(f, f.tuples[at]))},
                  {"lhs", U_.ops[f.p][lhs]},
                  {"rhs", rhs < 0 ? Op("?") : U_.ops[f.p][rhs]}};
        rep_.fail("associativity", w);
    }

    void fail_inner(const MorphRec& f, const MorphRec& g, const MorphRec& gf, int bt, int at,
                    const std::vector<int>& inner) {
        rep_.fail("associativity", {{"f", morphism_key(f.f)},
                                    {"g", morphism_key(g.f)},
                                    {"b", jops(names(g, g.tuples[bt]))},
                                    {"a", jops(names(f, f.tuples[at]))},
                                    {"error", "inner substitutions " + json(names(gf, inner)).dump() +
                                                  " are not composable"}});
    }
};

}  // namespace

Report check_operad(const Operad& A, int bound) {
    Report rep("check-operad");
    rep.details["operad"] = A.name();
    rep.details["bound"] = bound;
    Collection c;
    try {
        c = to_collection(A, bound);
    } catch (const Error& e) {
        rep.fail("collection", {{"error", e.what()}});
        return rep;
    }
    Report v = validate(c);
    rep.instances += v.instances;
    for (const auto& x : v.violations) rep.fail("collection/" + x.law, x.witness);
    if (!v.ok()) return rep;
    try {
        Checker(A, bound, rep).run();
    } catch (const Error& e) {
        rep.fail("structure", {{"error", e.what()}});
    }
    return rep;
}

}  // namespace gop
