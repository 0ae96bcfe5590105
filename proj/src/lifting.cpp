#include "gop/lifting.hpp"

#include <algorithm>
#include <numeric>

#include "gop/error.hpp"

namespace gop {

Elem apply(const HomMap& m, int a, int b, int c, const Elem& e) {
    auto it = m.find({a, b, c});
    if (it != m.end()) {
        auto jt = it->second.find(e);
        if (jt != it->second.end()) return jt->second;
    }
    throw Error("map undefined at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                ") on " + e.dump());
}

Graph AlgebraGraph::graph(const Multicategory& C) const {
    Graph g;
    g.objects = objects;
    g.colours = static_cast<int>(C.objects.size());
    for (const auto& [ab, f] : homs) {
        if (f.values.at.size() != C.objects.size()) throw Error("algebra hom does not match the objects of C");
        g.homs[ab] = f.values;
    }
    return g;
}

AlgebraGraph sequence_algebra(const std::vector<LinFunctor>& xs) {
    AlgebraGraph X;
    X.objects = static_cast<int>(xs.size()) + 1;
    for (int i = 0; i < static_cast<int>(xs.size()); ++i) X.homs[{i, i + 1}] = xs[i];
    return X;
}

AlgebraGraph free_algebra_graph(const Multicategory& C, const Graph& Y) {
    AlgebraGraph X;
    X.objects = Y.objects;
    for (const auto& [ab, f] : Y.homs) X.homs[ab] = free_e1_algebra(C, f);
    return X;
}

namespace {

struct UF {
    std::vector<int> p;
    explicit UF(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

// Hom-wise coequalizer in finite sets; classes are named by their least element.
class Coeq {
public:
    explicit Coeq(const Graph& B) : B_(B) {
        for (const auto& [ab, f] : B.homs)
            for (int c = 0; c < B.colours; ++c) uf_.emplace(std::make_tuple(ab.first, ab.second, c), UF(f.at[c].size()));
    }
    void unite(int a, int b, int c, const Elem& x, const Elem& y) {
        const ESet& s = B_.at(a, b, c);
        auto ix = index(s, x), iy = index(s, y);
        if (ix < 0 || iy < 0)
            throw Error("coequalizer: parallel maps leave the hom (" + std::to_string(a) + "," + std::to_string(b) + ")");
        uf_.at({a, b, c}).unite(ix, iy);
    }
    std::pair<Graph, HomMap> finish() {
        Graph Q;
        Q.objects = B_.objects;
        Q.colours = B_.colours;
        HomMap cls;
        for (auto& [key, uf] : uf_) {
            auto [a, b, c] = key;
            const ESet& s = B_.at(a, b, c);
            auto& m = cls[key];
            ESet reps;
            for (size_t i = 0; i < s.size(); ++i) {
                int r = uf.find(static_cast<int>(i));
                m[s[i]] = s[r];
                if (r == static_cast<int>(i)) reps.push_back(s[i]);
            }
            if (!reps.empty()) Q.set(a, b, c, std::move(reps));
        }
        return {Q, cls};
    }

private:
    static int index(const ESet& s, const Elem& e) {
        auto it = std::lower_bound(s.begin(), s.end(), e);
        return it == s.end() || *it != e ? -1 : static_cast<int>(it - s.begin());
    }
    const Graph& B_;
    std::map<std::tuple<int, int, int>, UF> uf_;
};

template <class F>
void for_elems(const Graph& G, F&& f) {
    for (const auto& [ab, fam] : G.homs)
        for (int c = 0; c < G.colours; ++c)
            for (const auto& e : fam.at[c]) f(ab.first, ab.second, c, e);
}

bool bijective(const HomMap& q, const Graph& from, const Graph& to) {
    if (from.homs.size() != to.homs.size()) return false;
    for (const auto& [ab, fam] : to.homs)
        for (int c = 0; c < to.colours; ++c)
            if (from.at(ab.first, ab.second, c).size() != fam.at[c].size()) return false;
    for (const auto& [key, m] : q) {
        std::vector<Elem> img;
        for (const auto& [x, y] : m) img.push_back(y);
        normalize(img);
        if (img.size() != m.size()) return false;
    }
    return true;
}

size_t total(const Graph& G) {
    size_t s = 0;
    for (const auto& [ab, f] : G.homs) s += f.size();
    return s;
}

std::function<Elem(int, int, int, const Elem&)> as_fn(const HomMap& m) {
    return [&m](int a, int b, int c, const Elem& e) { return apply(m, a, b, c, e); };
}

}  // namespace

LiftResult phi_shriek(const Multicategory& C, const AlgebraGraph& X, int stage_bound, int path_bound) {
    for (const auto& [ab, f] : X.homs) {
        auto r = check_functor(C, f);
        if (!r.ok())
            throw Error("phi_shriek: hom (" + std::to_string(ab.first) + "," + std::to_string(ab.second) +
                        ") is not an E_1-algebra (" + r.violations[0].law + ")");
    }
    auto S = [&](const Graph& G) {
        auto r = gamma_apply(C, G, path_bound);
        if (!r.exact) throw Error("phi_shriek: Gamma is not exact (" + r.details.dump() + ")");
        return r.graph;
    };
    LiftResult res;
    Report& rep = res.report;
    const Graph Xg = X.graph(C);
    res.SX = S(Xg);

    Graph RX;
    RX.objects = X.objects;
    RX.colours = Xg.colours;
    for (const auto& [ab, f] : X.homs) RX.homs[ab] = eval_tensor(C, {f.values});
    const Graph SRX = S(RX);
    auto phi = [&](int a, int b, int, const Elem& fx) { return json::array({json::array({a, b}), fx}); };
    auto xact = [&](int a, int b, int, const Elem& fx) {
        return X.homs.at({a, b}).act(C, C.at(fx[0].get<std::string>()), fx[1]);
    };
    auto alpha = [&](const Elem& s) { return gamma_mult(C, gamma_map(C, phi, s)); };
    auto beta = [&](const Elem& s) { return gamma_map(C, xact, s); };

    std::vector<Graph> Q{res.SX};
    std::vector<Graph> SQ;
    std::vector<HomMap> v, q;
    HomMap qless;
    for_elems(res.SX, [&](int a, int b, int c, const Elem& e) { qless[{a, b, c}][e] = e; });
    json stages = json::array();

    {
        Coeq co(res.SX);
        for_elems(SRX, [&](int a, int b, int c, const Elem& s) {
            ++rep.instances;
            co.unite(a, b, c, alpha(s), beta(s));
        });
        auto [Q1, q0] = co.finish();
        Q.push_back(std::move(Q1));
        q.push_back(std::move(q0));
        SQ.push_back(S(Q[0]));
        HomMap v0;
        for_elems(SQ[0], [&](int a, int b, int c, const Elem& t) { v0[{a, b, c}][t] = apply(q[0], a, b, c, gamma_mult(C, t)); });
        v.push_back(std::move(v0));
    }

    int n = 0;
    for (;; ++n) {
        stages.push_back({{"stage", n}, {"Q", total(Q[n])}, {"SQ", total(SQ[n])}});
        if (bijective(q[n], Q[n], Q[n + 1])) {
            res.stabilized = true;
            break;
        }
        if (n >= stage_bound) break;
        SQ.push_back(S(Q[n + 1]));
        const Graph SSQ = S(SQ[n]);
        Coeq co(SQ[n + 1]);
        for_elems(SSQ, [&](int a, int b, int c, const Elem& s) {
            ++rep.instances;
            Elem l = gamma_map(C, as_fn(q[n]), gamma_mult(C, s));
            Elem r = gamma_map(C, as_fn(v[n]), s);
            co.unite(a, b, c, l, r);
        });
        auto [Qn2, vn1] = co.finish();
        Q.push_back(std::move(Qn2));
        v.push_back(std::move(vn1));
        HomMap qn1;
        for_elems(Q[n + 1], [&](int a, int b, int c, const Elem& h) {
            qn1[{a, b, c}][h] = apply(v[n + 1], a, b, c, gamma_unit(C, a, b, c, h));
        });
        q.push_back(std::move(qn1));
        HomMap next;
        for (const auto& [key, m] : qless) {
            auto [a, b, c] = key;
            for (const auto& [x, y] : m) next[key][x] = apply(q[n], a, b, c, y);
        }
        qless = std::move(next);
    }
    res.stage = n;
    res.algebra = Q[n];
    res.q_less = qless;

    bool monotone = true;
    for (size_t i = 2; i < stages.size(); ++i)
        if (stages[i]["Q"].get<size_t>() > stages[i - 1]["Q"].get<size_t>()) monotone = false;
    rep.details = {{"stabilized", res.stabilized}, {"stage", n}, {"stage_bound", stage_bound},
                   {"stages", stages}, {"monotone", monotone}};

    for (const auto& g : Q)
        if (g.objects != X.objects) rep.fail("over-set", {{"objects", g.objects}, {"expected", X.objects}});
    // q_{<n} coequalizes the parallel pair
    for_elems(SRX, [&](int a, int b, int c, const Elem& s) {
        ++rep.instances;
        Elem l = apply(qless, a, b, c, alpha(s)), r = apply(qless, a, b, c, beta(s));
        if (l != r) rep.fail("coequalizer", {{"element", s}, {"lhs", l}, {"rhs", r}});
    });
    if (!res.stabilized) {
        rep.fail("not-stabilized", {{"stage_bound", stage_bound}});
        return res;
    }

    HomMap inv;
    for (const auto& [key, m] : q[n])
        for (const auto& [x, y] : m) inv[key][y] = x;
    for_elems(SQ[n], [&](int a, int b, int c, const Elem& t) {
        res.structure[{a, b, c}][t] = apply(inv, a, b, c, apply(v[n], a, b, c, t));
    });
    for_elems(Q[n], [&](int a, int b, int c, const Elem& h) {
        ++rep.instances;
        Elem r = apply(res.structure, a, b, c, gamma_unit(C, a, b, c, h));
        if (r != h) rep.fail("algebra-unit", {{"element", h}, {"result", r}});
    });
    const Graph SSQ = S(SQ[n]);
    for_elems(SSQ, [&](int a, int b, int c, const Elem& s) {
        ++rep.instances;
        Elem l = apply(res.structure, a, b, c, gamma_mult(C, s));
        Elem r = apply(res.structure, a, b, c, gamma_map(C, as_fn(res.structure), s));
        if (l != r) rep.fail("algebra-associativity", {{"element", s}, {"lhs", l}, {"rhs", r}});
    });
    return res;
}

LiftedTensor lift_multitensor(const Multicategory& C, const std::vector<LinFunctor>& xs, int stage_bound,
                              int path_bound) {
    LiftedTensor out;
    out.lift = phi_shriek(C, sequence_algebra(xs), stage_bound, path_bound);
    out.report.merge(out.lift.report);
    const int k = static_cast<int>(xs.size());
    const Graph& Q = out.lift.algebra;
    for (const auto& [ab, f] : Q.homs)
        if (ab.first > ab.second && f.size() > 0) out.report.fail("lower-hom", {{"a", ab.first}, {"b", ab.second}});
    out.value.values = Q.hom(0, k);
    if (!out.lift.stabilized) return out;
    const int n = static_cast<int>(C.objects.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g : C.linear(a, b)) {
                if (C.is_identity(g)) continue;
                auto& m = out.value.action[C.maps[g].name];
                for (const auto& t : out.value.values.at[a])
                    m[t] = apply(out.lift.structure, 0, k, b,
                                 json::array({json::array({0, k}), json::array({C.maps[g].name, t})}));
            }
    out.report.merge(check_functor(C, out.value));
    return out;
}

namespace {

json seq_path(int k) {
    std::vector<int> p(k + 1);
    std::iota(p.begin(), p.end(), 0);
    return json(p);
}

// A map from a functor into the lifted tensor: bijective and natural.
void check_natural_bijection(Report& rep, const Multicategory& C, const LinFunctor& from, const LinFunctor& to,
                             const std::function<Elem(int, const Elem&)>& f) {
    const int n = static_cast<int>(C.objects.size());
    for (int c = 0; c < n; ++c) {
        std::map<Elem, Elem> seen;
        for (const auto& x : from.values.at[c]) {
            ++rep.instances;
            Elem y = f(c, x);
            if (!contains(to.values.at[c], y)) {
                rep.fail("not-typed", {{"colour", c}, {"element", x}, {"image", y}});
                continue;
            }
            auto [it, fresh] = seen.emplace(y, x);
            if (!fresh) rep.fail("not-injective", {{"colour", c}, {"element", x}, {"other", it->second}, {"image", y}});
        }
        for (const auto& y : to.values.at[c])
            if (!seen.count(y)) rep.fail("not-surjective", {{"colour", c}, {"missed", y}});
    }
    if (!rep.ok()) return;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g : C.linear(a, b))
                for (const auto& x : from.values.at[a]) {
                    ++rep.instances;
                    Elem l = f(b, from.act(C, g, x));
                    Elem r = to.act(C, g, f(a, x));
                    if (l != r)
                        rep.fail("naturality", {{"map", C.maps[g].name}, {"element", x}, {"lhs", l}, {"rhs", r}});
                }
}

}  // namespace

Report recover_on_free(const Multicategory& C, const std::vector<Family>& ys, int stage_bound, int path_bound) {
    Report rep("recover-on-free");
    std::vector<LinFunctor> xs;
    for (const auto& y : ys) xs.push_back(free_e1_algebra(C, y));
    auto lt = lift_multitensor(C, xs, stage_bound, path_bound);
    rep.merge(lt.report);
    rep.details = {{"stage", lt.lift.stage}, {"stabilized", lt.lift.stabilized}};
    if (!lt.lift.stabilized) return rep;
    const int k = static_cast<int>(ys.size());
    // E(Y) with the action on the output
    LinFunctor ey;
    ey.values = eval_tensor(C, ys);
    const int n = static_cast<int>(C.objects.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g : C.linear(a, b)) {
                if (C.is_identity(g)) continue;
                auto& m = ey.action[C.maps[g].name];
                for (const auto& e : ey.values.at[a]) {
                    Elem moved = e;
                    moved[0] = C.maps[C.compose(g, {C.at(e[0].get<std::string>())})].name;
                    m[e] = moved;
                }
            }
    json path = seq_path(k);
    check_natural_bijection(rep, C, ey, lt.value, [&](int c, const Elem& e) {
        int th = C.at(e[0].get<std::string>());
        Elem t = json::array({e[0]});
        for (int i = 0; i < k; ++i) t.push_back(json::array({C.maps[C.identities[C.maps[th].in[i]]].name, e[i + 1]}));
        return apply(lt.lift.q_less, 0, k, c, json::array({path, t}));
    });
    return rep;
}

Report day_compare(const Multicategory& C, const std::vector<LinFunctor>& xs, int stage_bound, int path_bound) {
    Report rep("day-compare");
    auto conv = convolve(C, xs);
    auto lt = lift_multitensor(C, xs, stage_bound, path_bound);
    rep.merge(lt.report);
    json classes = json::array();
    for (const auto& s : conv.functor.values.at) classes.push_back(s.size());
    rep.details = {{"stage", lt.lift.stage}, {"stabilized", lt.lift.stabilized}, {"classes", classes},
                   {"raw", conv.raw.size()}};
    if (!lt.lift.stabilized) return rep;
    const int k = static_cast<int>(xs.size());
    json path = seq_path(k);
    auto image = [&](int c, const Elem& e) { return apply(lt.lift.q_less, 0, k, c, json::array({path, e})); };
    // constant on classes
    for (size_t c = 0; c < conv.klass.size(); ++c)
        for (const auto& [e, r] : conv.klass[c]) {
            ++rep.instances;
            if (image(static_cast<int>(c), e) != image(static_cast<int>(c), r))
                rep.fail("not-well-defined", {{"colour", c}, {"element", e}, {"representative", r}});
        }
    check_natural_bijection(rep, C, conv.functor, lt.value, image);
    return rep;
}

}  // namespace gop
