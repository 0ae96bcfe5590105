#include "gop/documents.hpp"

#include <algorithm>

#include "gop/error.hpp"
#include "gop/homs.hpp"

namespace gop {

namespace {

const json& field(const json& j, const std::string& key) {
    if (!j.is_object()) throw Error("expected a json object");
    auto it = j.find(key);
    if (it == j.end()) throw Error("missing field '" + key + "'");
    return *it;
}

const json& field(const json& j, const std::string& key, json::value_t type) {
    const json& v = field(j, key);
    bool good = v.type() == type || (type == json::value_t::number_integer && v.is_number_integer());
    if (!good) throw Error("field '" + key + "' has the wrong type");
    return v;
}

std::string text(const json& j, const std::string& key) { return field(j, key, json::value_t::string).get<std::string>(); }

int integer(const json& j, const std::string& key) { return field(j, key, json::value_t::number_integer).get<int>(); }

int integer(const json& j, const std::string& key, int fallback) { return j.contains(key) ? integer(j, key) : fallback; }

std::string as_text(const json& v, const std::string& what) {
    if (!v.is_string()) throw Error(what + " must be a string");
    return v.get<std::string>();
}

void expect_type(const json& j, const std::string& type) {
    if (j.is_object() && j.contains("type") && j["type"] != type)
        throw Error("expected a " + type + " document, got '" + j["type"].dump() + "'");
}

json op_map_to_json(const std::map<Op, Op>& m) {
    json o = json::object();
    for (const auto& [a, b] : m) o[a] = b;
    return o;
}

std::map<Op, Op> op_map_from_json(const json& j, const std::string& what) {
    if (!j.is_object()) throw Error(what + " must be an object");
    std::map<Op, Op> m;
    for (const auto& [a, b] : j.items()) m[a] = as_text(b, what + " entry");
    return m;
}

Tree tree_from_key(const std::string& key) {
    try {
        return parse_tree(key);
    } catch (const Error& e) {
        throw Error("bad tree '" + key + "': " + e.what());
    }
}

std::vector<std::string> split_units(const std::string& key) {
    std::vector<std::string> out(1);
    for (char ch : key) {
        if (ch == '\x1f')
            out.emplace_back();
        else
            out.back() += ch;
    }
    return out;
}

std::string scheme_rule(const std::string& name) {
    if (name.rfind("shuffle-", 0) == 0) return name.substr(8);
    return name;
}

}  // namespace

// ------------------------------------------------------------- collections

json collection_to_json(const Collection& c) {
    json j;
    j["type"] = "collection";
    j["kind"] = kind_name(c.kind);
    j["dim"] = c.dim;
    j["bound"] = c.bound;
    json fibres = json::object(), src = json::object(), tgt = json::object();
    for (const auto& [key, f] : c.fibres) {
        fibres[key] = f.ops;
        if (!f.src.empty()) src[key] = op_map_to_json(f.src);
        if (!f.tgt.empty()) tgt[key] = op_map_to_json(f.tgt);
    }
    j["fibres"] = fibres;
    j["src"] = src;
    j["tgt"] = tgt;
    json act = json::object();
    for (const auto& [key, m] : c.act) act[key] = op_map_to_json(m);
    j["act"] = act;
    return j;
}

Collection collection_from_json(const json& j) {
    Collection c;
    c.kind = j.contains("kind") ? parse_kind(text(j, "kind")) : CollectionKind::normalized;
    c.dim = integer(j, "dim");
    c.bound = integer(j, "bound", 5);
    if (c.dim < 0) throw Error("negative dimension");
    const json& fibres = field(j, "fibres", json::value_t::object);
    for (const auto& [key, ops] : fibres.items()) {
        Tree p = tree_from_key(key);
        if (!ops.is_array()) throw Error("fibre at " + key + " must be an array");
        Fibre& f = c.fibres[tree_key(p)];
        for (const auto& a : ops) f.ops.push_back(as_text(a, "operation"));
        std::sort(f.ops.begin(), f.ops.end());
        if (std::adjacent_find(f.ops.begin(), f.ops.end()) != f.ops.end())
            throw Error("fibre at " + key + " repeats an operation");
    }
    for (const char* side : {"src", "tgt"}) {
        if (!j.contains(side)) continue;
        for (const auto& [key, m] : field(j, side, json::value_t::object).items()) {
            auto it = c.fibres.find(tree_key(tree_from_key(key)));
            if (it == c.fibres.end()) throw Error(std::string(side) + " names a tree without a fibre: " + key);
            (std::string(side) == "src" ? it->second.src : it->second.tgt) = op_map_from_json(m, side);
        }
    }
    if (j.contains("act"))
        for (const auto& [key, m] : field(j, "act", json::value_t::object).items()) {
            try {
                c.act[morphism_key(parse_morphism_key(key))] = op_map_from_json(m, "act");
            } catch (const Error& e) {
                throw Error("bad morphism key '" + key + "': " + e.what());
            }
        }
    return c;
}

// ----------------------------------------------------------------- operads

json operad_rule(const std::string& rule, int dim) {
    json j;
    j["type"] = "operad";
    j["rule"] = rule;
    if (rule == "terminal" || rule == "rgr") j["dim"] = dim;
    return j;
}

json operad_to_json(const TableOperad& t) {
    json j = collection_to_json(t.carrier);
    j["type"] = "operad";
    j["name"] = t.label;
    j["units"] = t.units;
    json subst = json::array();
    for (const auto& [key, result] : t.table) {
        auto parts = split_units(key);
        json e;
        e["morphism"] = parts[0];
        e["b"] = parts.size() > 1 ? parts[1] : "";
        e["parts"] = std::vector<std::string>(parts.begin() + std::min<size_t>(2, parts.size()), parts.end());
        e["result"] = result;
        subst.push_back(e);
    }
    j["subst"] = subst;
    return j;
}

OperadPtr operad_from_json(const json& j, int bound) {
    expect_type(j, "operad");
    if (j.contains("rule")) {
        const std::string rule = text(j, "rule");
        if (rule == "terminal") return terminal_operad(integer(j, "dim"));
        if (rule == "rgr") return rgr_operad(integer(j, "dim"));
        if (rule == "bracketing2") return bracketing_operad();
        if (rule == "h") return apply_h(operad_from_json(field(j, "of"), bound + 1), bound);
        if (rule == "r") return apply_r(operad_from_json(field(j, "of"), bound), bound);
        throw Error("unknown operad rule '" + rule + "'");
    }
    auto t = std::make_shared<TableOperad>();
    t->carrier = collection_from_json(j);
    if (j.contains("name")) t->label = text(j, "name");
    for (const auto& u : field(j, "units", json::value_t::array)) t->units.push_back(as_text(u, "unit"));
    for (const auto& e : field(j, "subst", json::value_t::array)) {
        TreeMorphism f;
        try {
            f = parse_morphism_key(text(e, "morphism"));
        } catch (const Error& err) {
            throw Error("bad substitution morphism: " + std::string(err.what()));
        }
        std::vector<Op> parts;
        for (const auto& a : field(e, "parts", json::value_t::array)) parts.push_back(as_text(a, "part"));
        if (static_cast<int>(parts.size()) != leaf_count(f.target))
            throw Error("substitution entry for " + morphism_key(f) + " has the wrong number of parts");
        t->table[subst_key(f, text(e, "b"), parts)] = text(e, "result");
    }
    return t;
}

// ------------------------------------------------------------ contractions

json contraction_to_json(const ContractionChoice& g) {
    json j;
    j["type"] = "contraction";
    j["base"] = kind_name(g.base);
    json entries = json::array();
    for (const auto& [key, m] : g.table)
        for (const auto& [ab, x] : m) entries.push_back({{"tree", key}, {"a", ab.first}, {"b", ab.second}, {"filler", x}});
    j["entries"] = entries;
    return j;
}

ContractionChoice contraction_from_json(const json& j) {
    expect_type(j, "contraction");
    ContractionChoice g;
    if (j.contains("base")) g.base = parse_kind(text(j, "base"));
    for (const auto& e : field(j, "entries", json::value_t::array)) {
        Tree p = tree_from_key(text(e, "tree"));
        const std::string key = tree_key(p);
        auto ab = std::make_pair(text(e, "a"), text(e, "b"));
        if (g.table[key].count(ab)) throw Error("contraction repeats the pair at " + key);
        g.set(p, ab.first, ab.second, text(e, "filler"));
    }
    return g;
}

// ----------------------------------------------------------------- schemes

json scheme_to_json(const ShuffleScheme& s) {
    json j;
    j["type"] = "scheme";
    if (s.table.empty()) {
        j["rule"] = s.name;
        return j;
    }
    j["name"] = s.name;
    json table = json::object();
    for (const auto& [key, o] : s.table) {
        json cells = json::array();
        for (const auto& [c, r] : o) cells.push_back({c, r});
        table[key] = cells;
    }
    j["table"] = table;
    return j;
}

ShuffleScheme scheme_from_json(const json& j) {
    expect_type(j, "scheme");
    if (j.contains("rule")) {
        if (j.contains("table")) throw Error("a scheme has either a rule or a table");
        return named_scheme(text(j, "rule"));
    }
    ShuffleScheme s = named_scheme("table");
    if (j.contains("name")) s.name = text(j, "name");
    for (const auto& [key, cells] : field(j, "table", json::value_t::object).items()) {
        Tree p = tree_from_key(key);
        if (p.stage != 2) throw Error("scheme tables are indexed by stage-2 trees, got " + key);
        ShuffleOrder o;
        if (!cells.is_array()) throw Error("order at " + key + " must be an array");
        for (const auto& c : cells) {
            if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
                throw Error("cells are [column, row] pairs");
            o.push_back({c[0].get<int>(), c[1].get<int>()});
        }
        if (!is_compatible(p, o)) throw Error("order at " + key + " is not a compatible shuffle");
        s.table[tree_key(p)] = o;
    }
    return s;
}

// ---------------------------------------------------------- multicategories

json multicategory_to_json(const Multicategory& C) {
    json j;
    j["type"] = "multicategory";
    j["objects"] = C.objects;
    j["max_arity"] = C.max_arity;
    json maps = json::array();
    for (const auto& m : C.maps) {
        json in = json::array();
        for (int o : m.in) in.push_back(C.objects[o]);
        maps.push_back({{"name", m.name}, {"in", in}, {"out", C.objects[m.out]}});
    }
    j["maps"] = maps;
    json ids = json::array();
    for (int i : C.identities) ids.push_back(C.maps[i].name);
    j["identities"] = ids;
    json comps = json::array();
    for (const auto& [key, r] : C.table) {
        json inner = json::array();
        for (int m : key.second) inner.push_back(C.maps[m].name);
        comps.push_back({{"outer", C.maps[key.first].name}, {"inner", inner}, {"result", C.maps[r].name}});
    }
    j["composites"] = comps;
    return j;
}

Multicategory multicategory_from_json(const json& j) {
    expect_type(j, "multicategory");
    if (j.contains("rule")) {
        const std::string rule = text(j, "rule");
        if (rule == "terminal") return terminal_multicategory(integer(j, "max_arity", 4), integer(j, "min_arity", 0));
        if (rule == "one-arrow") return one_arrow_multicategory(integer(j, "max_arity", 4));
        if (rule == "free") {
            std::vector<std::string> objects;
            for (const auto& o : field(j, "objects", json::value_t::array)) objects.push_back(as_text(o, "object"));
            std::vector<Generator> gens;
            for (const auto& g : field(j, "generators", json::value_t::array)) {
                Generator gen{text(g, "name"), {}, text(g, "out")};
                for (const auto& o : field(g, "in", json::value_t::array)) gen.in.push_back(as_text(o, "object"));
                gens.push_back(gen);
            }
            return free_multicategory(objects, gens, integer(j, "max_arity", 4));
        }
        throw Error("unknown multicategory rule '" + rule + "'");
    }
    Multicategory C;
    for (const auto& o : field(j, "objects", json::value_t::array)) C.objects.push_back(as_text(o, "object"));
    C.max_arity = integer(j, "max_arity", 4);
    std::map<std::string, int> obj;
    for (int i = 0; i < static_cast<int>(C.objects.size()); ++i) obj[C.objects[i]] = i;
    auto object = [&](const json& v) {
        auto it = obj.find(as_text(v, "object"));
        if (it == obj.end()) throw Error("unknown object " + v.dump());
        return it->second;
    };
    for (const auto& m : field(j, "maps", json::value_t::array)) {
        Multimap mm{text(m, "name"), {}, object(field(m, "out"))};
        for (const auto& o : field(m, "in", json::value_t::array)) mm.in.push_back(object(o));
        C.maps.push_back(mm);
    }
    std::map<std::string, int> by_name;
    for (int m = 0; m < static_cast<int>(C.maps.size()); ++m) by_name[C.maps[m].name] = m;
    auto map_index = [&](const json& v) {
        auto it = by_name.find(as_text(v, "multimap"));
        if (it == by_name.end()) throw Error("unknown multimap " + v.dump());
        return it->second;
    };
    for (const auto& i : field(j, "identities", json::value_t::array)) C.identities.push_back(map_index(i));
    C.index();
    for (const auto& e : field(j, "composites", json::value_t::array)) {
        std::vector<int> inner;
        for (const auto& m : field(e, "inner", json::value_t::array)) inner.push_back(map_index(m));
        C.table[{map_index(field(e, "outer")), inner}] = map_index(field(e, "result"));
    }
    return C;
}

// ------------------------------------------------ families, graphs, functors

json family_to_json(const Multicategory& C, const Family& f) {
    json j = json::object();
    for (size_t c = 0; c < C.objects.size(); ++c) j[C.objects[c]] = c < f.at.size() ? json(f.at[c]) : json::array();
    return j;
}

Family family_from_json(const Multicategory& C, const json& j) {
    if (!j.is_object()) throw Error("a family is an object keyed by object names");
    Family f = empty_family(C);
    for (const auto& [name, values] : j.items()) {
        int c = C.object(name);
        if (!values.is_array()) throw Error("family values at '" + name + "' must be an array");
        ESet s(values.begin(), values.end());
        normalize(s);
        if (s.size() != values.size()) throw Error("family values at '" + name + "' repeat an element");
        f.at[c] = s;
    }
    return f;
}

json graph_to_json(const Multicategory& C, const Graph& g) {
    json j;
    j["objects"] = g.objects;
    json homs = json::array();
    for (const auto& [ab, f] : g.homs) {
        if (f.size() == 0) continue;
        homs.push_back({{"from", ab.first}, {"to", ab.second}, {"values", family_to_json(C, f)}});
    }
    j["homs"] = homs;
    return j;
}

Graph graph_from_json(const Multicategory& C, const json& j) {
    Graph g;
    g.objects = integer(j, "objects");
    g.colours = static_cast<int>(C.objects.size());
    if (g.objects < 0) throw Error("negative object count");
    for (const auto& h : field(j, "homs", json::value_t::array)) {
        int a = integer(h, "from"), b = integer(h, "to");
        if (a < 0 || b < 0 || a >= g.objects || b >= g.objects) throw Error("hom endpoint out of range");
        if (g.homs.count({a, b})) throw Error("hom " + std::to_string(a) + " -> " + std::to_string(b) + " given twice");
        Family f = family_from_json(C, field(h, "values"));
        for (int c = 0; c < g.colours; ++c) g.set(a, b, c, f.at[c]);
    }
    return g;
}

json functor_to_json(const Multicategory& C, const LinFunctor& f) {
    json j;
    j["values"] = family_to_json(C, f.values);
    json action = json::object();
    for (const auto& [name, m] : f.action) {
        json pairs = json::array();
        for (const auto& [x, y] : m) pairs.push_back({x, y});
        action[name] = pairs;
    }
    j["action"] = action;
    return j;
}

LinFunctor functor_from_json(const Multicategory& C, const json& j) {
    LinFunctor f;
    f.values = family_from_json(C, field(j, "values"));
    if (j.contains("action"))
        for (const auto& [name, pairs] : field(j, "action", json::value_t::object).items()) {
            int m = C.at(name);
            if (C.arity(m) != 1) throw Error("'" + name + "' is not a linear map");
            if (!pairs.is_array()) throw Error("action of '" + name + "' must be a list of pairs");
            auto& tab = f.action[name];
            for (const auto& p : pairs) {
                if (!p.is_array() || p.size() != 2) throw Error("action entries are [x, y] pairs");
                if (!tab.emplace(p[0], p[1]).second) throw Error("action of '" + name + "' is not a function");
            }
        }
    return f;
}

Enriched enriched_from_json(const json& j) {
    expect_type(j, "enriched");
    Enriched e;
    e.multicategory_doc = field(j, "multicategory");
    e.C = multicategory_from_json(e.multicategory_doc);
    if (j.contains("graph")) e.graph = graph_from_json(e.C, j["graph"]);
    if (j.contains("functors"))
        for (const auto& f : field(j, "functors", json::value_t::array)) e.functors.push_back(functor_from_json(e.C, f));
    if (j.contains("families"))
        for (const auto& f : field(j, "families", json::value_t::array)) e.families.push_back(family_from_json(e.C, f));
    return e;
}

// ---------------------------------------------------------------- examples

std::vector<std::string> example_names() {
    return {"terminal-1", "terminal-2", "terminal-3", "rgr-1", "rgr-2", "bracketing2", "shuffle-col-lr",
            "shuffle-col-rl", "shuffle-row-reading", "one-arrow-multicat", "chain-1", "chain-2", "chain-3"};
}

namespace {

int suffix_number(const std::string& name, const std::string& prefix) {
    const std::string rest = name.substr(prefix.size());
    if (rest.empty() || rest.size() > 2 || !std::all_of(rest.begin(), rest.end(), ::isdigit))
        throw Error("unknown example '" + name + "'");
    return std::stoi(rest);
}

json one_arrow_example() {
    auto C = one_arrow_multicategory(4);
    json j;
    j["type"] = "enriched";
    j["multicategory"] = {{"type", "multicategory"}, {"rule", "one-arrow"}, {"max_arity", 4}};
    auto set = [](std::initializer_list<const char*> xs) {
        ESet s;
        for (const char* x : xs) s.push_back(x);
        normalize(s);
        return s;
    };
    LinFunctor f1, f2;
    f1.values.at = {set({"d0", "d1"}), set({"e0"})};
    f1.action["u"][Elem("d0")] = "e0";
    f1.action["u"][Elem("d1")] = "e0";
    f2.values.at = {set({"p0"}), set({"q0", "q1"})};
    f2.action["u"][Elem("p0")] = "q1";
    j["functors"] = {functor_to_json(C, f1), functor_to_json(C, f2)};
    Family y0, y1;
    y0.at = {set({"y0"}), set({"z0"})};
    y1.at = {set({"w0", "w1"}), {}};
    j["families"] = {family_to_json(C, y0), family_to_json(C, y1)};
    return j;
}

json chain_example(int k) {
    auto C = terminal_multicategory(4, 1);
    Graph g;
    g.objects = k + 1;
    g.colours = 1;
    for (int i = 0; i < k; ++i) {
        const std::string s = "h" + std::to_string(i) + std::to_string(i + 1) + "_";
        g.set(i, i + 1, 0, ESet{Elem(s + "a"), Elem(s + "b")});
    }
    json j;
    j["type"] = "enriched";
    j["multicategory"] = {{"type", "multicategory"}, {"rule", "terminal"}, {"max_arity", 4}, {"min_arity", 1}};
    j["graph"] = graph_to_json(C, g);
    return j;
}

}  // namespace

json example_document(const std::string& name) {
    if (name.rfind("terminal-", 0) == 0) return operad_rule("terminal", suffix_number(name, "terminal-"));
    if (name.rfind("rgr-", 0) == 0) return operad_rule("rgr", suffix_number(name, "rgr-"));
    if (name == "bracketing2") return operad_rule("bracketing2");
    if (name == "shuffle-col-lr" || name == "shuffle-col-rl" || name == "shuffle-row-reading")
        return scheme_to_json(named_scheme(scheme_rule(name)));
    if (name == "one-arrow-multicat") return one_arrow_example();
    if (name.rfind("chain-", 0) == 0) {
        int k = suffix_number(name, "chain-");
        if (k < 1 || k > 8) throw Error("chain examples have 1 to 8 homs");
        return chain_example(k);
    }
    throw Error("unknown example '" + name + "'");
}

}  // namespace gop
