#include "gop/enrich.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gop/error.hpp"

namespace gop {

void normalize(ESet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool contains(const ESet& s, const Elem& e) { return std::binary_search(s.begin(), s.end(), e); }

// ------------------------------------------------------------ multicategory

void Multicategory::index() {
    by_name_.clear();
    by_object_.clear();
    by_profile_.clear();
    by_out_.assign(objects.size(), {});
    for (int i = 0; i < static_cast<int>(objects.size()); ++i)
        if (!by_object_.emplace(objects[i], i).second) throw Error("duplicate object '" + objects[i] + "'");
    for (int m = 0; m < static_cast<int>(maps.size()); ++m) {
        const auto& mm = maps[m];
        if (!by_name_.emplace(mm.name, m).second) throw Error("duplicate multimap '" + mm.name + "'");
        if (mm.out < 0 || mm.out >= static_cast<int>(objects.size())) throw Error("multimap '" + mm.name + "' has no output object");
        for (int o : mm.in)
            if (o < 0 || o >= static_cast<int>(objects.size())) throw Error("multimap '" + mm.name + "' has a bad input");
        if (arity(m) > max_arity) throw Error("multimap '" + mm.name + "' exceeds the arity bound");
        by_profile_[{mm.in, mm.out}].push_back(m);
        by_out_[mm.out].push_back(m);
    }
    if (identities.size() != objects.size()) throw Error("every object needs an identity");
    for (int i = 0; i < static_cast<int>(objects.size()); ++i) {
        int id = identities[i];
        if (id < 0 || id >= static_cast<int>(maps.size()) || maps[id].in != std::vector<int>{i} || maps[id].out != i)
            throw Error("identity of '" + objects[i] + "' is not a linear map " + objects[i] + " -> " + objects[i]);
    }
}

int Multicategory::object(const std::string& name) const {
    auto it = by_object_.find(name);
    if (it == by_object_.end()) throw Error("unknown object '" + name + "'");
    return it->second;
}

int Multicategory::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
}

int Multicategory::at(const std::string& name) const {
    int m = find(name);
    if (m < 0) throw Error("unknown multimap '" + name + "'");
    return m;
}

bool Multicategory::is_identity(int m) const {
    return arity(m) == 1 && identities[maps[m].out] == m;
}

const std::vector<int>& Multicategory::hom(const std::vector<int>& in, int out) const {
    static const std::vector<int> none;
    auto it = by_profile_.find({in, out});
    return it == by_profile_.end() ? none : it->second;
}

const std::vector<int>& Multicategory::into(int out) const { return by_out_.at(out); }

std::optional<int> Multicategory::try_compose(int outer, const std::vector<int>& inner) const {
    if (static_cast<int>(inner.size()) != arity(outer))
        throw Error("composite of '" + maps[outer].name + "' needs " + std::to_string(arity(outer)) + " inputs");
    int total = 0;
    for (size_t i = 0; i < inner.size(); ++i) {
        if (maps[inner[i]].out != maps[outer].in[i])
            throw Error("'" + maps[inner[i]].name + "' does not land in input " + std::to_string(i) + " of '" +
                        maps[outer].name + "'");
        total += arity(inner[i]);
    }
    if (total > max_arity) return std::nullopt;
    if (is_identity(outer)) return inner[0];
    if (std::all_of(inner.begin(), inner.end(), [&](int m) { return is_identity(m); })) return outer;
    auto it = table.find({outer, inner});
    if (it == table.end()) {
        std::string s = maps[outer].name + "(";
        for (size_t i = 0; i < inner.size(); ++i) s += (i ? "," : "") + maps[inner[i]].name;
        throw Error("composite " + s + ") missing from the table");
    }
    return it->second;
}

int Multicategory::compose(int outer, const std::vector<int>& inner) const {
    auto r = try_compose(outer, inner);
    if (!r) throw Error("composite exceeds the arity bound " + std::to_string(max_arity));
    return *r;
}

namespace {

// Tuples t with t[i] in C.into(outs[i]) and total arity <= budget.
template <class F>
void for_tuples(const Multicategory& C, const std::vector<int>& outs, int budget, F&& f) {
    std::vector<int> cur;
    auto rec = [&](auto&& self, size_t i, int used) -> void {
        if (i == outs.size()) {
            f(cur);
            return;
        }
        for (int m : C.into(outs[i])) {
            if (used + C.arity(m) > budget) continue;
            cur.push_back(m);
            self(self, i + 1, used + C.arity(m));
            cur.pop_back();
        }
    };
    rec(rec, 0, 0);
}

json names(const Multicategory& C, const std::vector<int>& ms) {
    json a = json::array();
    for (int m : ms) a.push_back(C.maps[m].name);
    return a;
}

}  // namespace

Report check_multicategory(const Multicategory& C) {
    Report rep("check-multicategory");
    rep.details["max_arity"] = C.max_arity;
    for (const auto& [key, r] : C.table) {
        const auto& [outer, inner] = key;
        std::vector<int> ins;
        bool typed = static_cast<int>(inner.size()) == C.arity(outer);
        for (size_t i = 0; typed && i < inner.size(); ++i) {
            typed = C.maps[inner[i]].out == C.maps[outer].in[i];
            ins.insert(ins.end(), C.maps[inner[i]].in.begin(), C.maps[inner[i]].in.end());
        }
        if (!typed || C.maps[r].in != ins || C.maps[r].out != C.maps[outer].out)
            rep.fail("typing", {{"outer", C.maps[outer].name}, {"inner", names(C, inner)}, {"result", C.maps[r].name}});
    }
    if (!rep.ok()) return rep;
    for (int m = 0; m < static_cast<int>(C.maps.size()); ++m) {
        // units against explicit table entries
        for (int side = 0; side < 2; ++side) {
            std::pair<int, std::vector<int>> key;
            if (side == 0)
                key = {C.identities[C.maps[m].out], {m}};
            else {
                key.first = m;
                for (int o : C.maps[m].in) key.second.push_back(C.identities[o]);
            }
            auto it = C.table.find(key);
            if (it != C.table.end() && it->second != m)
                rep.fail("unit", {{"multimap", C.maps[m].name}, {"result", C.maps[it->second].name}});
        }
        for_tuples(C, C.maps[m].in, C.max_arity, [&](const std::vector<int>& inner) {
            ++rep.instances;
            int mid;
            try {
                mid = C.compose(m, inner);
            } catch (const Error& e) {
                rep.fail("totality", {{"outer", C.maps[m].name}, {"inner", names(C, inner)}});
                return;
            }
            std::vector<int> ins;
            std::vector<size_t> start;
            for (int t : inner) {
                start.push_back(ins.size());
                ins.insert(ins.end(), C.maps[t].in.begin(), C.maps[t].in.end());
            }
            for_tuples(C, ins, C.max_arity, [&](const std::vector<int>& deep) {
                ++rep.instances;
                try {
                    std::vector<int> blocks;
                    for (size_t i = 0; i < inner.size(); ++i) {
                        std::vector<int> part(deep.begin() + start[i], deep.begin() + start[i] + C.arity(inner[i]));
                        blocks.push_back(C.compose(inner[i], part));
                    }
                    int lhs = C.compose(m, blocks);
                    int rhs = C.compose(mid, deep);
                    if (lhs != rhs)
                        rep.fail("associativity", {{"outer", C.maps[m].name},
                                                   {"inner", names(C, inner)},
                                                   {"deep", names(C, deep)},
                                                   {"lhs", C.maps[lhs].name},
                                                   {"rhs", C.maps[rhs].name}});
                } catch (const Error& e) {
                    rep.fail("totality", {{"outer", C.maps[m].name}, {"inner", names(C, inner)},
                                          {"deep", names(C, deep)}, {"error", e.what()}});
                }
            });
        });
    }
    return rep;
}

Multicategory terminal_multicategory(int max_arity, int min_arity) {
    if (min_arity < 0 || min_arity > 1 || max_arity < 1) throw Error("terminal multicategory needs 0 <= min_arity <= 1 <= max_arity");
    Multicategory C;
    C.objects = {"*"};
    C.max_arity = max_arity;
    for (int k = min_arity; k <= max_arity; ++k) C.maps.push_back({"m" + std::to_string(k), std::vector<int>(k, 0), 0});
    C.identities = {1 - min_arity};
    C.index();
    for (int m = 0; m < static_cast<int>(C.maps.size()); ++m)
        for_tuples(C, C.maps[m].in, max_arity, [&](const std::vector<int>& inner) {
            int total = 0;
            for (int t : inner) total += C.arity(t);
            C.table[{m, inner}] = total - min_arity;
        });
    return C;
}

namespace {

struct Term {
    int gen = -1;  // -1: identity on obj
    int obj = 0;
    std::vector<Term> kids;
};

int term_arity(const Term& t) {
    if (t.gen < 0) return 1;
    int n = 0;
    for (const auto& k : t.kids) n += term_arity(k);
    return n;
}

void term_inputs(const Term& t, std::vector<int>& out) {
    if (t.gen < 0) {
        out.push_back(t.obj);
        return;
    }
    for (const auto& k : t.kids) term_inputs(k, out);
}

std::string term_name(const Term& t, const std::vector<Generator>& gens, const std::vector<std::string>& objs) {
    if (t.gen < 0) return "1_" + objs[t.obj];
    const auto& g = gens[t.gen].name;
    if (std::all_of(t.kids.begin(), t.kids.end(), [](const Term& k) { return k.gen < 0; })) return g;
    std::string s = g + "(";
    for (size_t i = 0; i < t.kids.size(); ++i) {
        if (i) s += ",";
        s += t.kids[i].gen < 0 ? "_" : term_name(t.kids[i], gens, objs);
    }
    return s + ")";
}

Term graft(const Term& t, const std::vector<Term>& inner, size_t& next) {
    if (t.gen < 0) return inner[next++];
    Term r{t.gen, t.obj, {}};
    for (const auto& k : t.kids) r.kids.push_back(graft(k, inner, next));
    return r;
}

}  // namespace

Multicategory free_multicategory(const std::vector<std::string>& objects, const std::vector<Generator>& gens,
                                 int max_arity) {
    Multicategory C;
    C.objects = objects;
    C.max_arity = max_arity;
    std::map<std::string, int> obj;
    for (int i = 0; i < static_cast<int>(objects.size()); ++i) obj[objects[i]] = i;
    auto lookup = [&](const std::string& o) {
        auto it = obj.find(o);
        if (it == obj.end()) throw Error("generator mentions unknown object '" + o + "'");
        return it->second;
    };
    struct G {
        std::vector<int> in;
        int out;
    };
    std::vector<G> gs;
    for (const auto& g : gens) {
        if (g.in.empty()) throw Error("free multicategory: generator '" + g.name + "' is nullary");
        if (g.name.empty() || g.name.find_first_of("(),_ ") != std::string::npos || g.name.rfind("1_", 0) == 0)
            throw Error("bad generator name '" + g.name + "'");
        G x{{}, lookup(g.out)};
        for (const auto& i : g.in) x.in.push_back(lookup(i));
        gs.push_back(x);
    }
    // unary generators must not form a cycle
    {
        int n = static_cast<int>(objects.size());
        std::vector<std::vector<int>> adj(n);
        for (const auto& g : gs)
            if (g.in.size() == 1) adj[g.in[0]].push_back(g.out);
        std::vector<int> state(n, 0);
        auto dfs = [&](auto&& self, int v) -> void {
            state[v] = 1;
            for (int w : adj[v]) {
                if (state[w] == 1) throw Error("free multicategory: unary generators form a cycle");
                if (state[w] == 0) self(self, w);
            }
            state[v] = 2;
        };
        for (int v = 0; v < n; ++v)
            if (state[v] == 0) dfs(dfs, v);
    }

    std::map<std::string, Term> terms;
    std::vector<std::vector<const Term*>> by_out(objects.size());
    for (int i = 0; i < static_cast<int>(objects.size()); ++i) terms[term_name({-1, i, {}}, gens, objects)] = {-1, i, {}};
    for (bool grew = true; grew;) {
        grew = false;
        for (auto& v : by_out) v.clear();
        for (const auto& [n, t] : terms) by_out[t.gen < 0 ? t.obj : gs[t.gen].out].push_back(&t);
        std::vector<Term> fresh;
        for (int gi = 0; gi < static_cast<int>(gs.size()); ++gi) {
            std::vector<Term> kids;
            auto rec = [&](auto&& self, size_t i, int used) -> void {
                if (i == gs[gi].in.size()) {
                    fresh.push_back({gi, gs[gi].out, kids});
                    return;
                }
                for (const Term* k : by_out[gs[gi].in[i]]) {
                    int a = term_arity(*k);
                    if (used + a + static_cast<int>(gs[gi].in.size() - i - 1) > max_arity) continue;
                    kids.push_back(*k);
                    self(self, i + 1, used + a);
                    kids.pop_back();
                }
            };
            rec(rec, 0, 0);
        }
        for (auto& t : fresh)
            if (terms.emplace(term_name(t, gens, objects), t).second) grew = true;
    }

    std::vector<const Term*> order;
    for (const auto& [n, t] : terms) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(),
                     [](const Term* a, const Term* b) { return term_arity(*a) < term_arity(*b); });
    std::map<std::string, int> index;
    for (const Term* t : order) {
        std::vector<int> in;
        term_inputs(*t, in);
        std::string n = term_name(*t, gens, objects);
        index[n] = static_cast<int>(C.maps.size());
        C.maps.push_back({n, in, t->gen < 0 ? t->obj : gs[t->gen].out});
    }
    for (int i = 0; i < static_cast<int>(objects.size()); ++i) C.identities.push_back(index.at("1_" + objects[i]));
    C.index();
    for (int m = 0; m < static_cast<int>(C.maps.size()); ++m) {
        if (C.is_identity(m)) continue;
        const Term& outer = terms.at(C.maps[m].name);
        for_tuples(C, C.maps[m].in, max_arity, [&](const std::vector<int>& inner) {
            if (std::all_of(inner.begin(), inner.end(), [&](int t) { return C.is_identity(t); })) return;
            std::vector<Term> parts;
            for (int t : inner) parts.push_back(terms.at(C.maps[t].name));
            size_t next = 0;
            C.table[{m, inner}] = index.at(term_name(graft(outer, parts, next), gens, objects));
        });
    }
    return C;
}

Multicategory one_arrow_multicategory(int max_arity) {
    return free_multicategory({"D", "D'"}, {{"u", {"D"}, "D'"}, {"m", {"D'", "D'"}, "D'"}}, max_arity);
}

// ------------------------------------------------------------------ families

size_t Family::size() const {
    size_t n = 0;
    for (const auto& s : at) n += s.size();
    return n;
}

Family empty_family(const Multicategory& C) { return {std::vector<ESet>(C.objects.size())}; }

Family eval_tensor(const Multicategory& C, const std::vector<Family>& xs) {
    const int k = static_cast<int>(xs.size());
    if (k > C.max_arity)
        throw Error("tensor of " + std::to_string(k) + " families exceeds the arity bound " + std::to_string(C.max_arity));
    for (const auto& x : xs)
        if (x.at.size() != C.objects.size()) throw Error("family does not match the objects of the multicategory");
    Family out = empty_family(C);
    for (int m = 0; m < static_cast<int>(C.maps.size()); ++m) {
        if (C.arity(m) != k) continue;
        const auto& in = C.maps[m].in;
        Elem cur = json::array({C.maps[m].name});
        auto rec = [&](auto&& self, int i) -> void {
            if (i == k) {
                out.at[C.maps[m].out].push_back(cur);
                return;
            }
            for (const auto& x : xs[i].at[in[i]]) {
                cur.push_back(x);
                self(self, i + 1);
                cur.erase(cur.size() - 1);
            }
        };
        rec(rec, 0);
    }
    for (auto& s : out.at) normalize(s);
    return out;
}

int colour_of(const Multicategory& C, const Elem& e) { return C.maps[C.at(e.at(0).get<std::string>())].out; }

Elem tensor_map(const Multicategory& C, const std::vector<ElemMap>& fs, const Elem& e) {
    int m = C.at(e.at(0).get<std::string>());
    if (static_cast<int>(e.size()) != C.arity(m) + 1 || fs.size() != e.size() - 1)
        throw Error("tensor element " + e.dump() + " has the wrong length");
    Elem r = json::array({e[0]});
    for (size_t i = 0; i < fs.size(); ++i) r.push_back(fs[i](C.maps[m].in[i], e[i + 1]));
    return r;
}

namespace {

Family coproduct(const Family& a, const Family& b) {
    Family r{std::vector<ESet>(a.at.size())};
    for (size_t c = 0; c < a.at.size(); ++c) {
        for (const auto& x : a.at[c]) r.at[c].push_back(json::array({"L", x}));
        for (const auto& x : b.at[c]) r.at[c].push_back(json::array({"R", x}));
        normalize(r.at[c]);
    }
    return r;
}

// Injectivity and surjectivity of an elementwise map between two families.
void check_bijection(Report& rep, const Family& dom, const Family& cod, const std::function<Elem(const Elem&)>& f,
                     const json& where) {
    for (size_t c = 0; c < dom.at.size(); ++c) {
        std::map<Elem, Elem> seen;
        for (const auto& x : dom.at[c]) {
            ++rep.instances;
            Elem y = f(x);
            json w = where;
            w["colour"] = c;
            w["element"] = x;
            w["image"] = y;
            if (!contains(cod.at[c], y)) {
                rep.fail("not-typed", w);
                continue;
            }
            auto [it, fresh] = seen.emplace(y, x);
            if (!fresh) {
                w["other"] = it->second;
                rep.fail("not-injective", w);
            }
        }
        for (const auto& y : cod.at[c])
            if (!seen.count(y)) {
                json w = where;
                w["colour"] = c;
                w["missed"] = y;
                rep.fail("not-surjective", w);
            }
    }
}

}  // namespace

Report check_distributive(const Multicategory& C, const std::vector<Family>& xs, int i, const Family& extra) {
    Report rep("check-distributive");
    if (i < 0 || i >= static_cast<int>(xs.size())) throw Error("distributivity position out of range");
    auto joined = xs;
    joined[i] = coproduct(xs[i], extra);
    auto other = xs;
    other[i] = extra;
    Family lhs = eval_tensor(C, joined);
    Family rhs = coproduct(eval_tensor(C, xs), eval_tensor(C, other));
    check_bijection(rep, rhs, lhs, [&](const Elem& t) {
        Elem e = t[1];
        e[i + 1] = json::array({t[0], e[i + 1]});
        return e;
    }, {{"position", i}});
    return rep;
}

// -------------------------------------------------------------------- graphs

const ESet& Graph::at(int a, int b, int c) const {
    static const ESet none;
    auto it = homs.find({a, b});
    if (it == homs.end()) return none;
    return it->second.at.at(c);
}

Family Graph::hom(int a, int b) const {
    auto it = homs.find({a, b});
    if (it == homs.end()) return {std::vector<ESet>(colours)};
    return it->second;
}

void Graph::set(int a, int b, int c, ESet s) {
    if (a < 0 || b < 0 || a >= objects || b >= objects) throw Error("graph hom out of range");
    normalize(s);
    auto it = homs.find({a, b});
    if (it == homs.end()) it = homs.emplace(std::make_pair(a, b), Family{std::vector<ESet>(colours)}).first;
    it->second.at.at(c) = std::move(s);
}

Graph sequence_graph(const std::vector<Family>& xs, int colours) {
    Graph g;
    g.objects = static_cast<int>(xs.size()) + 1;
    g.colours = colours;
    for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
        if (static_cast<int>(xs[i].at.size()) != colours) throw Error("family does not match the colours");
        g.homs[{i, i + 1}] = xs[i];
    }
    return g;
}

namespace {

bool nonempty(const Graph& X, int a, int b) {
    auto it = X.homs.find({a, b});
    if (it == X.homs.end()) return false;
    return std::any_of(it->second.at.begin(), it->second.at.end(), [](const ESet& s) { return !s.empty(); });
}

std::vector<std::vector<int>> adjacency(const Graph& X) {
    std::vector<std::vector<int>> adj(X.objects);
    for (const auto& [ab, f] : X.homs)
        if (nonempty(X, ab.first, ab.second)) adj[ab.first].push_back(ab.second);
    return adj;
}

// Object sequences from a along nonempty homs, lengths 0..max_len.
template <class F>
void for_paths(const std::vector<std::vector<int>>& adj, int a, int max_len, F&& f) {
    std::vector<int> path{a};
    auto rec = [&](auto&& self) -> void {
        f(path);
        if (static_cast<int>(path.size()) - 1 == max_len) return;
        for (int w : adj[path.back()]) {
            path.push_back(w);
            self(self);
            path.pop_back();
        }
    };
    rec(rec);
}

std::vector<Family> homs_along(const Graph& X, const std::vector<int>& path) {
    std::vector<Family> hs;
    for (size_t i = 1; i < path.size(); ++i) hs.push_back(X.hom(path[i - 1], path[i]));
    return hs;
}

json path_json(const std::vector<int>& p) { return json(p); }

std::vector<int> path_of(const Elem& t) { return t.at(0).get<std::vector<int>>(); }

}  // namespace

PathInfo path_info(const Graph& X) {
    auto adj = adjacency(X);
    PathInfo info;
    std::vector<int> state(X.objects, 0), longest(X.objects, 0);
    auto dfs = [&](auto&& self, int v) -> void {
        state[v] = 1;
        for (int w : adj[v]) {
            if (state[w] == 1) info.cyclic = true;
            if (state[w] == 0) self(self, w);
            if (state[w] == 2) longest[v] = std::max(longest[v], longest[w] + 1);
        }
        state[v] = 2;
    };
    for (int v = 0; v < X.objects; ++v)
        if (state[v] == 0) dfs(dfs, v);
    if (!info.cyclic)
        for (int v = 0; v < X.objects; ++v) info.longest = std::max(info.longest, longest[v]);
    return info;
}

GammaResult gamma_apply(const Multicategory& C, const Graph& X, int path_bound) {
    if (X.colours != static_cast<int>(C.objects.size())) throw Error("graph colours do not match the multicategory");
    GammaResult r;
    r.graph.objects = X.objects;
    r.graph.colours = X.colours;
    auto info = path_info(X);
    const int len = std::min(path_bound, C.max_arity);
    r.exact = !info.cyclic && info.longest <= len;
    r.details = {{"cyclic", info.cyclic}, {"path_bound", path_bound}, {"max_arity", C.max_arity}};
    if (!info.cyclic) r.details["longest_path"] = info.longest;
    auto adj = adjacency(X);
    std::map<std::pair<int, int>, Family> acc;
    for (int a = 0; a < X.objects; ++a)
        for_paths(adj, a, len, [&](const std::vector<int>& p) {
            Family e = eval_tensor(C, homs_along(X, p));
            auto it = acc.find({a, p.back()});
            if (it == acc.end()) it = acc.emplace(std::make_pair(a, p.back()), Family{std::vector<ESet>(X.colours)}).first;
            json pj = path_json(p);
            for (int c = 0; c < X.colours; ++c)
                for (auto& x : e.at[c]) it->second.at[c].push_back(json::array({pj, std::move(x)}));
        });
    for (auto& [ab, f] : acc) {
        for (auto& s : f.at) normalize(s);
        if (f.size() > 0) r.graph.homs[ab] = std::move(f);
    }
    return r;
}

Elem gamma_unit(const Multicategory& C, int a, int b, int c, const Elem& h) {
    return json::array({json::array({a, b}), json::array({C.maps[C.identities[c]].name, h})});
}

Elem gamma_mult(const Multicategory& C, const Elem& t) {
    const Elem& path = t.at(0);
    const Elem& e = t.at(1);
    int outer = C.at(e.at(0).get<std::string>());
    json p = json::array({path.at(0)});
    std::vector<int> inner;
    Elem leaves = json::array();
    for (size_t i = 1; i < e.size(); ++i) {
        const Elem& w = e[i];
        const Elem& wp = w.at(0);
        if (wp.at(0) != path.at(i - 1) || wp.back() != path.at(i))
            throw Error("gamma_mult: inner path " + wp.dump() + " does not fit " + path.dump());
        for (size_t j = 1; j < wp.size(); ++j) p.push_back(wp[j]);
        inner.push_back(C.at(w.at(1).at(0).get<std::string>()));
        for (size_t j = 1; j < w[1].size(); ++j) leaves.push_back(w[1][j]);
    }
    Elem r = json::array({C.maps[C.compose(outer, inner)].name});
    for (auto& l : leaves) r.push_back(std::move(l));
    return json::array({p, r});
}

Elem gamma_map(const Multicategory& C, const std::function<Elem(int, int, int, const Elem&)>& f, const Elem& t) {
    auto p = path_of(t);
    const Elem& e = t.at(1);
    int m = C.at(e.at(0).get<std::string>());
    Elem r = json::array({e[0]});
    for (size_t i = 1; i < e.size(); ++i) r.push_back(f(p[i - 1], p[i], C.maps[m].in[i - 1], e[i]));
    return json::array({t[0], r});
}

Report check_monad_laws(const Multicategory& C, const Graph& X, int path_bound) {
    Report rep("check-monad-laws");
    auto t1 = gamma_apply(C, X, path_bound);
    auto t2 = gamma_apply(C, t1.graph, path_bound);
    auto t3 = gamma_apply(C, t2.graph, path_bound);
    bool exact = t1.exact && t2.exact && t3.exact;
    rep.details = {{"exact", exact}, {"path_bound", path_bound}, {"objects", X.objects}};
    if (!exact) rep.fail("inexact", {{"T", t1.details}, {"T2", t2.details}, {"T3", t3.details}});
    for (const auto* g : {&t1.graph, &t2.graph, &t3.graph})
        if (g->objects != X.objects) rep.fail("over-set", {{"objects", g->objects}, {"expected", X.objects}});

    auto unit = [&](int a, int b, int c, const Elem& h) { return gamma_unit(C, a, b, c, h); };
    auto mult = [&](int, int, int, const Elem& s) { return gamma_mult(C, s); };
    auto guard = [&](const char* law, const Elem& at, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            rep.fail("arity-bound", {{"law", law}, {"element", at}, {"error", e.what()}});
        }
    };
    for (const auto& [ab, f] : t1.graph.homs)
        for (int c = 0; c < X.colours; ++c)
            for (const auto& t : f.at[c]) {
                rep.instances += 2;
                auto p = path_of(t);
                if (p.front() != ab.first || p.back() != ab.second) rep.fail("over-set", {{"element", t}});
                guard("unit", t, [&] {
                    Elem l = gamma_mult(C, gamma_unit(C, ab.first, ab.second, c, t));
                    if (l != t) rep.fail("unit", {{"side", "mu . eta T"}, {"element", t}, {"result", l}});
                    Elem r = gamma_mult(C, gamma_map(C, unit, t));
                    if (r != t) rep.fail("unit", {{"side", "mu . T eta"}, {"element", t}, {"result", r}});
                });
            }
    for (const auto& [ab, f] : t2.graph.homs)
        for (int c = 0; c < X.colours; ++c)
            for (const auto& s : f.at[c]) {
                ++rep.instances;
                guard("typing", s, [&] {
                    Elem m = gamma_mult(C, s);
                    if (!contains(t1.graph.at(ab.first, ab.second, c), m))
                        rep.fail("typing", {{"element", s}, {"result", m}});
                });
            }
    for (const auto& [ab, f] : t3.graph.homs)
        for (int c = 0; c < X.colours; ++c)
            for (const auto& s : f.at[c]) {
                ++rep.instances;
                guard("associativity", s, [&] {
                    Elem l = gamma_mult(C, gamma_mult(C, s));
                    Elem r = gamma_mult(C, gamma_map(C, mult, s));
                    if (l != r) rep.fail("associativity", {{"element", s}, {"mu.muT", l}, {"mu.Tmu", r}});
                });
            }
    return rep;
}

Graph GammaFunctor::apply(const Graph& X) const { return gamma_apply(C_, X, bound_).graph; }

Elem GammaFunctor::map(const GraphMorphism& f, int, int, int, const Elem& t) const {
    auto p = path_of(t);
    json q = json::array();
    for (int x : p) q.push_back(f.obj.at(x));
    const Elem& e = t.at(1);
    int m = C_.at(e.at(0).get<std::string>());
    Elem r = json::array({e[0]});
    for (size_t i = 1; i < e.size(); ++i) r.push_back(f.hom(p[i - 1], p[i], C_.maps[m].in[i - 1], e[i]));
    return json::array({q, r});
}

Graph ConstantFunctor::apply(const Graph& X) const {
    Graph g;
    g.objects = X.objects;
    g.colours = X.colours;
    for (int a = 0; a < X.objects; ++a)
        for (int b = 0; b < X.objects; ++b) g.homs[{a, b}] = Family{std::vector<ESet>(X.colours, ESet{"*"})};
    return g;
}

Family extract_Ebar(const GraphFunctor& T, const Multicategory& C, const std::vector<Family>& xs) {
    Graph g = T.apply(sequence_graph(xs, static_cast<int>(C.objects.size())));
    return g.hom(0, static_cast<int>(xs.size()));
}

Report check_path_like(const GraphFunctor& T, const Graph& X, int path_bound) {
    Report rep("check-path-like");
    rep.details = {{"functor", T.name()}, {"path_bound", path_bound}};
    Graph TX = T.apply(X);
    for (int a = 0; a < X.objects; ++a)
        for (int b = 0; b < X.objects; ++b) {
            std::vector<std::map<Elem, json>> seen(X.colours);
            std::vector<int> seq{a};
            auto visit = [&](const std::vector<int>& x) {
                std::vector<Family> hs;
                for (size_t i = 1; i < x.size(); ++i) hs.push_back(X.hom(x[i - 1], x[i]));
                Graph tseq = T.apply(sequence_graph(hs, X.colours));
                GraphMorphism xbar{x, [](int, int, int, const Elem& h) { return h; }};
                const int n = static_cast<int>(x.size()) - 1;
                for (int c = 0; c < X.colours; ++c)
                    for (const auto& t : tseq.at(0, n, c)) {
                        ++rep.instances;
                        Elem y = T.map(xbar, 0, n, c, t);
                        json w = {{"a", a}, {"b", b}, {"colour", c}, {"sequence", x}, {"element", t}, {"image", y}};
                        if (!contains(TX.at(a, b, c), y)) {
                            rep.fail("not-typed", w);
                            continue;
                        }
                        auto [it, fresh] = seen[c].emplace(y, json{{"sequence", x}, {"element", t}});
                        if (!fresh) {
                            w["other"] = it->second;
                            rep.fail("not-injective", w);
                        }
                    }
            };
            auto rec = [&](auto&& self) -> void {
                if (seq.back() == b) visit(seq);
                if (static_cast<int>(seq.size()) - 1 == path_bound) return;
                for (int w = 0; w < X.objects; ++w) {
                    seq.push_back(w);
                    self(self);
                    seq.pop_back();
                }
            };
            rec(rec);
            for (int c = 0; c < X.colours; ++c)
                for (const auto& y : TX.at(a, b, c))
                    if (!seen[c].count(y)) rep.fail("not-surjective", {{"a", a}, {"b", b}, {"colour", c}, {"missed", y}});
        }
    return rep;
}

Report check_Ebar_roundtrip(const Multicategory& C, const std::vector<Family>& xs, int path_bound) {
    Report rep("check-ebar");
    GammaFunctor T(C, path_bound);
    Family bar = extract_Ebar(T, C, xs);
    Family e = eval_tensor(C, xs);
    std::vector<int> full(xs.size() + 1);
    std::iota(full.begin(), full.end(), 0);
    check_bijection(rep, bar, e, [&](const Elem& t) -> Elem {
        if (path_of(t) != full) return json{{"bad_path", t[0]}};
        return t[1];
    }, json::object());
    return rep;
}

// --------------------------------------------------------------- E-categories

namespace {

const Elem* kappa_at(const ECategory& A, const std::vector<int>& path, const Elem& e) {
    auto it = A.kappa.find(path);
    if (it == A.kappa.end()) return nullptr;
    auto jt = it->second.find(e);
    return jt == it->second.end() ? nullptr : &jt->second;
}

// Cut points 0 = j_0 <= .. <= j_k = n, k >= 1.
template <class F>
void for_cuts(int n, int max_k, F&& f) {
    std::vector<int> cuts{0};
    auto rec = [&](auto&& self) -> void {
        int k = static_cast<int>(cuts.size()) - 1;
        if (k >= 1 && cuts.back() == n) f(cuts);
        if (k == max_k) return;
        for (int j = cuts.back(); j <= n; ++j) {
            cuts.push_back(j);
            self(self);
            cuts.pop_back();
        }
    };
    rec(rec);
}

}  // namespace

Report check_ecategory(const Multicategory& C, const ECategory& A, int bound) {
    Report rep("check-ecategory");
    const Graph& X = A.graph;
    const int len = std::min(bound, C.max_arity);
    rep.details = {{"bound", len}};
    auto adj = adjacency(X);
    std::vector<std::vector<int>> paths;
    for (int a = 0; a < X.objects; ++a) for_paths(adj, a, len, [&](const std::vector<int>& p) { paths.push_back(p); });

    std::map<std::vector<int>, Family> tensor;
    for (const auto& p : paths) {
        Family e = eval_tensor(C, homs_along(X, p));
        for (int c = 0; c < X.colours; ++c)
            for (const auto& x : e.at[c]) {
                ++rep.instances;
                const Elem* v = kappa_at(A, p, x);
                if (!v) {
                    rep.fail("totality", {{"sequence", p}, {"element", x}});
                    continue;
                }
                if (!contains(X.at(p.front(), p.back(), c), *v))
                    rep.fail("typing", {{"sequence", p}, {"element", x}, {"value", *v}});
            }
        tensor[p] = std::move(e);
    }
    for (const auto& [p, m] : A.kappa)
        for (const auto& [x, v] : m) {
            auto it = tensor.find(p);
            if (it == tensor.end() || !contains(it->second.at[colour_of(C, x)], x))
                rep.fail("scope", {{"sequence", p}, {"element", x}});
        }
    if (!rep.ok()) return rep;
    auto kap = [&](const std::vector<int>& p, const Elem& e) { return *kappa_at(A, p, e); };

    for (int a = 0; a < X.objects; ++a)
        for (int b = 0; b < X.objects; ++b) {
            if (!nonempty(X, a, b) || len < 1) continue;
            std::vector<int> p{a, b};
            for (int c = 0; c < X.colours; ++c)
                for (const auto& h : X.at(a, b, c)) {
                    ++rep.instances;
                    Elem e = json::array({C.maps[C.identities[c]].name, h});
                    if (kap(p, e) != h) rep.fail("unit", {{"sequence", p}, {"element", h}, {"value", kap(p, e)}});
                    for (int c1 = 0; c1 < X.colours; ++c1)
                        for (int f : C.linear(c, c1))
                            for (int c2 = 0; c2 < X.colours; ++c2)
                                for (int g : C.linear(c1, c2)) {
                                    ++rep.instances;
                                    Elem lhs = kap(p, json::array({C.maps[C.compose(g, {f})].name, h}));
                                    Elem rhs = kap(p, json::array({C.maps[g].name, kap(p, json::array({C.maps[f].name, h}))}));
                                    if (lhs != rhs)
                                        rep.fail("e1-algebra", {{"sequence", p}, {"element", h}, {"f", C.maps[f].name},
                                                                {"g", C.maps[g].name}, {"lhs", lhs}, {"rhs", rhs}});
                                }
                }
        }

    for (const auto& x : paths) {
        const int n = static_cast<int>(x.size()) - 1;
        for_cuts(n, len, [&](const std::vector<int>& cuts) {
            const int k = static_cast<int>(cuts.size()) - 1;
            std::vector<int> y;
            for (int j : cuts) y.push_back(x[j]);
            std::vector<std::vector<int>> segs;
            for (int i = 0; i < k; ++i) segs.emplace_back(x.begin() + cuts[i], x.begin() + cuts[i + 1] + 1);
            for (const auto& s : segs)
                if (!tensor.count(s)) return;
            for (int c = 0; c < X.colours; ++c)
                for (int th : C.into(c)) {
                    if (C.arity(th) != k) continue;
                    std::vector<const Elem*> pick(k);
                    auto rec = [&](auto&& self, int i) -> void {
                        if (i == k) {
                            ++rep.instances;
                            std::vector<int> inner;
                            Elem deep = json::array();
                            Elem outer = json::array({C.maps[th].name});
                            for (int t = 0; t < k; ++t) {
                                const Elem& e = *pick[t];
                                inner.push_back(C.at(e[0].get<std::string>()));
                                for (size_t q = 1; q < e.size(); ++q) deep.push_back(e[q]);
                                outer.push_back(kap(segs[t], e));
                            }
                            Elem le = json::array({C.maps[C.compose(th, inner)].name});
                            for (auto& d : deep) le.push_back(d);
                            const Elem* l = kappa_at(A, x, le);
                            const Elem* r = kappa_at(A, y, outer);
                            if (!l || !r) return;  // reported as totality above
                            if (*l != *r) {
                                json in = json::array();
                                for (auto* e : pick) in.push_back(*e);
                                rep.fail("associativity", {{"sequence", x}, {"cuts", cuts}, {"theta", C.maps[th].name},
                                                           {"inner", in}, {"lhs", *l}, {"rhs", *r}});
                            }
                            return;
                        }
                        for (const auto& e : tensor.at(segs[i]).at[C.maps[th].in[i]]) {
                            pick[i] = &e;
                            self(self, i + 1);
                        }
                    };
                    rec(rec, 0);
                }
        });
    }
    return rep;
}

ECategory free_ecategory(const Multicategory& C, const Graph& Y, int path_bound) {
    auto g = gamma_apply(C, Y, path_bound);
    if (!g.exact) throw Error("free E-category: Gamma is not exact on this graph (" + g.details.dump() + ")");
    ECategory A;
    A.graph = g.graph;
    auto adj = adjacency(A.graph);
    const int len = std::min(path_bound, C.max_arity);
    for (int a = 0; a < A.graph.objects; ++a)
        for_paths(adj, a, len, [&](const std::vector<int>& p) {
            Family e = eval_tensor(C, homs_along(A.graph, p));
            auto& m = A.kappa[p];
            for (const auto& s : e.at)
                for (const auto& x : s) {
                    auto r = gamma_mult(C, json::array({json(p), x}));
                    m[x] = std::move(r);
                }
        });
    return A;
}

Report check_descends(const Multicategory& C, const ECategory& A, int bound) {
    Report rep("check-descends");
    const Graph& X = A.graph;
    const int len = std::min(bound, C.max_arity);
    auto adj = adjacency(X);
    auto kap = [&](const std::vector<int>& p, const Elem& e) -> std::optional<Elem> {
        if (const Elem* v = kappa_at(A, p, e)) return *v;
        return std::nullopt;
    };
    for (int a = 0; a < X.objects; ++a)
        for_paths(adj, a, len, [&](const std::vector<int>& x) {
            const int n = static_cast<int>(x.size()) - 1;
            Family e = eval_tensor(C, homs_along(X, x));
            for (int c = 0; c < X.colours; ++c)
                for (int th : C.into(c)) {
                    if (C.arity(th) != n) continue;
                    const auto& in = C.maps[th].in;
                    // naturality in the output
                    for (const auto& t : e.at[c]) {
                        if (t[0] != C.maps[th].name) continue;
                        auto v = kap(x, t);
                        if (!v) continue;
                        for (int c2 = 0; c2 < X.colours; ++c2)
                            for (int g : C.linear(c, c2)) {
                                ++rep.instances;
                                Elem moved = t;
                                moved[0] = C.maps[C.compose(g, {th})].name;
                                auto l = kap({x.front(), x.back()}, json::array({C.maps[g].name, *v}));
                                auto r = kap(x, moved);
                                if (l != r)
                                    rep.fail("naturality", {{"sequence", x}, {"element", t}, {"g", C.maps[g].name}});
                            }
                    }
                    // the coend relation on the inputs
                    std::vector<int> fs(n);
                    std::vector<Elem> hs(n);
                    auto rec = [&](auto&& self, int i) -> void {
                        if (i == n) {
                            ++rep.instances;
                            Elem lhs = json::array({C.maps[C.compose(th, fs)].name});
                            Elem rhs = json::array({C.maps[th].name});
                            for (int j = 0; j < n; ++j) {
                                lhs.push_back(hs[j]);
                                auto moved = kap({x[j], x[j + 1]}, json::array({C.maps[fs[j]].name, hs[j]}));
                                if (!moved) return;
                                rhs.push_back(*moved);
                            }
                            auto l = kap(x, lhs), r = kap(x, rhs);
                            if (l != r) rep.fail("descent", {{"sequence", x}, {"lhs", lhs}, {"rhs", rhs}});
                            return;
                        }
                        for (int ci = 0; ci < X.colours; ++ci)
                            for (int f : C.linear(ci, in[i]))
                                for (const auto& h : X.at(x[i], x[i + 1], ci)) {
                                    fs[i] = f;
                                    hs[i] = h;
                                    self(self, i + 1);
                                }
                    };
                    rec(rec, 0);
                }
        });
    return rep;
}

// --------------------------------------------------------------- convolution

Elem LinFunctor::act(const Multicategory& C, int f, const Elem& x) const {
    if (C.is_identity(f)) return x;
    auto it = action.find(C.maps[f].name);
    if (it == action.end()) throw Error("no action for '" + C.maps[f].name + "'");
    auto jt = it->second.find(x);
    if (jt == it->second.end()) throw Error("action of '" + C.maps[f].name + "' undefined on " + x.dump());
    return jt->second;
}

Report check_functor(const Multicategory& C, const LinFunctor& F) {
    Report rep("check-functor");
    const int n = static_cast<int>(C.objects.size());
    if (static_cast<int>(F.values.at.size()) != n) {
        rep.fail("shape", {{"objects", n}, {"values", F.values.at.size()}});
        return rep;
    }
    for (auto& s : F.values.at)
        if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
            rep.fail("shape", {{"error", "values must be sorted and duplicate free"}});
    for (const auto& [name, m] : F.action) {
        int f = C.find(name);
        if (f < 0 || C.arity(f) != 1) {
            rep.fail("scope", {{"map", name}});
            continue;
        }
        int a = C.maps[f].in[0], b = C.maps[f].out;
        for (const auto& [x, y] : m)
            if (!contains(F.values.at[a], x)) rep.fail("scope", {{"map", name}, {"element", x}});
        for (const auto& x : F.values.at[a]) {
            ++rep.instances;
            auto it = m.find(x);
            if (it == m.end())
                rep.fail("totality", {{"map", name}, {"element", x}});
            else if (!contains(F.values.at[b], it->second))
                rep.fail("typing", {{"map", name}, {"element", x}, {"value", it->second}});
            else if (C.is_identity(f) && it->second != x)
                rep.fail("identity", {{"map", name}, {"element", x}, {"value", it->second}});
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int f : C.linear(a, b))
                if (!C.is_identity(f) && !F.action.count(C.maps[f].name)) rep.fail("totality", {{"map", C.maps[f].name}});
    if (!rep.ok()) return rep;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int f : C.linear(a, b))
                for (int c = 0; c < n; ++c)
                    for (int g : C.linear(b, c))
                        for (const auto& x : F.values.at[a]) {
                            ++rep.instances;
                            Elem l = F.act(C, C.compose(g, {f}), x);
                            Elem r = F.act(C, g, F.act(C, f, x));
                            if (l != r)
                                rep.fail("functoriality", {{"f", C.maps[f].name}, {"g", C.maps[g].name}, {"element", x},
                                                           {"composite", l}, {"stepwise", r}});
                        }
    return rep;
}

LinFunctor free_e1_algebra(const Multicategory& C, const Family& X) {
    LinFunctor F;
    F.values = eval_tensor(C, {X});
    const int n = static_cast<int>(C.objects.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g : C.linear(a, b)) {
                if (C.is_identity(g)) continue;
                auto& m = F.action[C.maps[g].name];
                for (const auto& t : F.values.at[a]) {
                    int f = C.at(t[0].get<std::string>());
                    m[t] = json::array({C.maps[C.compose(g, {f})].name, t[1]});
                }
            }
    return F;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Convolution convolve(const Multicategory& C, const std::vector<LinFunctor>& xs) {
    for (size_t i = 0; i < xs.size(); ++i) {
        auto r = check_functor(C, xs[i]);
        if (!r.ok())
            throw Error("convolve: input " + std::to_string(i) + " is not a functor (" + r.violations[0].law + ": " +
                        r.violations[0].witness.dump() + ")");
    }
    const int k = static_cast<int>(xs.size());
    const int n = static_cast<int>(C.objects.size());
    std::vector<Family> fams;
    for (const auto& x : xs) fams.push_back(x.values);
    Convolution out;
    out.raw = eval_tensor(C, fams);
    out.functor.values = empty_family(C);
    out.klass.resize(n);
    for (int c = 0; c < n; ++c) {
        const ESet& raw = out.raw.at[c];
        auto idx = [&](const Elem& e) {
            auto it = std::lower_bound(raw.begin(), raw.end(), e);
            if (it == raw.end() || *it != e) throw Error("convolve: element outside the tensor " + e.dump());
            return static_cast<int>(it - raw.begin());
        };
        UnionFind uf(raw.size());
        for (int th : C.into(c)) {
            if (C.arity(th) != k) continue;
            std::vector<int> fs(k);
            std::vector<Elem> xv(k);
            auto rec = [&](auto&& self, int i) -> void {
                if (i == k) {
                    Elem lhs = json::array({C.maps[C.compose(th, fs)].name});
                    Elem rhs = json::array({C.maps[th].name});
                    for (int j = 0; j < k; ++j) {
                        lhs.push_back(xv[j]);
                        rhs.push_back(xs[j].act(C, fs[j], xv[j]));
                    }
                    uf.unite(idx(lhs), idx(rhs));
                    return;
                }
                for (int ci = 0; ci < n; ++ci)
                    for (int f : C.linear(ci, C.maps[th].in[i]))
                        for (const auto& x : xs[i].values.at[ci]) {
                            fs[i] = f;
                            xv[i] = x;
                            self(self, i + 1);
                        }
            };
            rec(rec, 0);
        }
        for (size_t i = 0; i < raw.size(); ++i) {
            const Elem& rep = raw[uf.find(static_cast<int>(i))];
            out.klass[c][raw[i]] = rep;
            if (uf.find(static_cast<int>(i)) == static_cast<int>(i)) out.functor.values.at[c].push_back(raw[i]);
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g : C.linear(a, b)) {
                if (C.is_identity(g)) continue;
                auto& m = out.functor.action[C.maps[g].name];
                for (const auto& r : out.functor.values.at[a]) {
                    Elem moved = r;
                    moved[0] = C.maps[C.compose(g, {C.at(r[0].get<std::string>())})].name;
                    m[r] = out.klass[b].at(moved);
                }
            }
    return out;
}

}  // namespace gop
