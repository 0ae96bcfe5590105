#pragma once

// Brute-force references shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "enrich_fixtures.hpp"
#include "gop/collection.hpp"
#include "gop/contraction.hpp"
#include "gop/enrich.hpp"

namespace oracles {

using namespace gop;

// Number of stage-k trees with exactly n nodes, from A_k(x) = 1 / (1 - x A_{k-1}(x)), A_0 = 1.
inline std::vector<long> exact_counts(int k, int n) {
    std::vector<long> a(n + 1, 0);
    a[0] = 1;
    if (k == 0) return a;
    auto prev = exact_counts(k - 1, n);
    std::vector<long> b(n + 1, 0);
    for (int i = 0; i + 1 <= n; ++i) b[i + 1] = prev[i];
    for (int m = 1; m <= n; ++m) {
        long s = 0;
        for (int i = 1; i <= m; ++i) s += b[i] * a[m - i];
        a[m] = s;
    }
    return a;
}

inline long catalan(int n) {
    std::vector<long> c(n + 1, 0);
    c[0] = 1;
    for (int m = 1; m <= n; ++m)
        for (int i = 0; i < m; ++i) c[m] += c[i] * c[m - 1 - i];
    return c[n];
}

inline long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Orders on the height-2 cells, by filtering all permutations.
inline long brute_orders(const Tree& p) {
    std::vector<Cell> cs;
    for (size_t c = 0; c < p.kids.size(); ++c)
        for (size_t r = 0; r < p.kids[c].kids.size(); ++r) cs.push_back({static_cast<int>(c), static_cast<int>(r)});
    std::sort(cs.begin(), cs.end());
    long n = 0;
    do {
        bool ok = true;
        for (size_t i = 0; i < cs.size() && ok; ++i)
            for (size_t j = i + 1; j < cs.size() && ok; ++j)
                if (cs[i].first == cs[j].first && cs[i].second > cs[j].second) ok = false;
        n += ok;
    } while (std::next_permutation(cs.begin(), cs.end()));
    return n;
}

// ----------------------------------------------------- lifting properties

struct Rlp {
    bool phi = true;        // every map from the boundary extends
    bool phi_prime = true;  // extensions are unique
};

inline Op raw_bd(const Collection& c, const Tree& p, const Op& a, bool source) {
    if (p.stage == 1) return "*";
    const auto& fb = c.fibres.at(tree_key(p));
    return (source ? fb.src : fb.tgt).at(a);
}

// Read straight off the stored tables.
inline Rlp brute_rlp(const Collection& c, const Tree& p) {
    Rlp r;
    const auto& here = c.fibres.at(tree_key(p)).ops;
    // maps d(p) -> A: pairs of operations at tr p agreeing on their own boundary
    std::vector<std::pair<Op, Op>> problems;
    if (p.stage == 1) {
        problems.push_back({"*", "*"});
    } else {
        Tree t = tr(p);
        const auto& below = c.fibres.at(tree_key(t)).ops;
        for (const auto& a : below)
            for (const auto& b : below)
                if (raw_bd(c, t, a, true) == raw_bd(c, t, b, true) && raw_bd(c, t, a, false) == raw_bd(c, t, b, false))
                    problems.push_back({a, b});
    }
    for (const auto& [a, b] : problems) {
        bool found = false;
        for (const auto& x : here)
            if (raw_bd(c, p, x, true) == a && raw_bd(c, p, x, false) == b) found = true;
        if (!found) r.phi = false;
    }
    // maps p +_{d p} p -> A: two operations with the same boundary
    for (const auto& x : here)
        for (const auto& y : here)
            if (raw_bd(c, p, x, true) == raw_bd(c, p, y, true) && raw_bd(c, p, x, false) == raw_bd(c, p, y, false) &&
                x != y)
                r.phi_prime = false;
    return r;
}

// ------------------------------------------------------ bracket grafting

// Bracket words as binary trees.
struct Node {
    std::shared_ptr<Node> l, r;  // both null at a letter
};
using NodeP = std::shared_ptr<Node>;

inline NodeP parse_word(const std::string& s, size_t& i) {
    auto n = std::make_shared<Node>();
    if (s[i] == 'x') {
        ++i;
        return n;
    }
    ++i;  // (
    n->l = parse_word(s, i);
    n->r = parse_word(s, i);
    ++i;  // )
    return n;
}

// Replaces letters left to right by parts; a null part deletes the letter.
inline NodeP plug(const NodeP& n, const std::vector<NodeP>& parts, size_t& k) {
    if (!n->l) return parts[k++];
    auto a = plug(n->l, parts, k);
    auto b = plug(n->r, parts, k);
    if (!a) return b;
    if (!b) return a;
    auto m = std::make_shared<Node>();
    m->l = a;
    m->r = b;
    return m;
}

inline std::string show(const NodeP& n) {
    if (!n) return "e";
    if (!n->l) return "x";
    return "(" + show(n->l) + show(n->r) + ")";
}

inline std::string graft(const std::string& b, const std::vector<std::string>& parts) {
    if (b == "e") return "e";
    std::vector<NodeP> ps;
    for (const auto& p : parts) {
        size_t i = 0;
        ps.push_back(p == "e" ? nullptr : parse_word(p, i));
    }
    size_t i = 0, k = 0;
    return show(plug(parse_word(b, i), ps, k));
}

// ------------------------------------------------------------------ graphs

inline Graph chain(const std::vector<int>& sizes) {
    Graph g;
    g.objects = static_cast<int>(sizes.size()) + 1;
    for (int i = 0; i < static_cast<int>(sizes.size()); ++i)
        g.set(i, i + 1, 0, fixtures::labels("h" + std::to_string(i) + "_", sizes[i]));
    return g;
}

// Every subset of forward edges on n objects, hom sizes cycling through 1..3.
inline std::vector<Graph> all_dags(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) edges.push_back({a, b});
    std::vector<Graph> out;
    for (int mask = 0; mask < (1 << edges.size()); ++mask) {
        Graph g;
        g.objects = n;
        int size = 0;
        for (size_t e = 0; e < edges.size(); ++e)
            if (mask >> e & 1) {
                g.set(edges[e].first, edges[e].second, 0, fixtures::labels("e" + std::to_string(e) + "_", size % 3 + 1));
                ++size;
            }
        out.push_back(g);
    }
    return out;
}

// Sum over paths a -> b of the product of hom sizes (one operation per arity).
inline size_t path_product_sum(const Graph& g, int a, int b) {
    if (a == b) return 0;
    size_t total = 0;
    for (int c = 0; c < g.objects; ++c) {
        size_t h = g.at(a, c, 0).size();
        if (!h) continue;
        total += h * (c == b ? 1 : path_product_sum(g, c, b));
    }
    return total;
}

// ------------------------------------------------------------ tree kernel

// substitute(q, fibres of f) gives back p and f; truncated fibres match the junctions.
inline bool inverse_pair_holds(const TreeMorphism& f) {
    auto fb = analyze_morphism(f);
    auto s = substitute(f.target, fb.fibres);
    if (!(s.tree == f.source) || !(s.morphism == f)) return false;
    auto jh = junction_heights(f.target);
    for (size_t i = 0; i < fb.truncated.size(); ++i)
        if (!(fb.truncated[i] == truncate(fb.fibres[i + 1], jh[i]))) return false;
    return true;
}

// For f: p -> q, g: q -> r and each leaf z of r, substituting the f-preimages
// of the leaves of g^{-1}(z) into it gives the fibre of g f at z; substituting
// those fibres into r gives back p and g f.
inline bool composite_fibres_agree(const TreeMorphism& f, const TreeMorphism& g) {
    const Tree& q = g.source;
    const Tree& r = g.target;
    auto gf = compose(g, f);
    auto fib = analyze_morphism(gf);
    auto gz = leaves(r);
    auto lq = to_levels(q);
    auto lr = to_levels(r);
    std::vector<Tree> stage_two;
    for (size_t zi = 0; zi < gz.size(); ++zi) {
        Tree qz = preimage(g, gz[zi]);
        // leaves of qz are nodes of q over z, in order
        std::vector<std::vector<int>> sel(qz.stage + 1);
        for (int h = 0; h <= qz.stage; ++h) {
            int a = ancestor(lr, gz[zi], h).index;
            for (int x = 0; x < lq.count(h); ++x)
                if (g.maps[h][x] == a) sel[h].push_back(x);
        }
        std::vector<Tree> parts;
        for (auto w : leaves(qz)) parts.push_back(preimage(f, NodeId{w.height, sel[w.height][w.index]}));
        auto s = substitute(qz, parts);
        if (!(s.tree == fib.fibres[zi])) return false;
        stage_two.push_back(s.tree);
    }
    auto whole = substitute(r, stage_two);
    return whole.tree == f.source && whole.morphism == gf;
}

}  // namespace oracles
