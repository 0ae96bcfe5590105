#include "gop/tree.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace gop {

std::strong_ordering Tree::operator<=>(const Tree& o) const {
    if (auto c = stage <=> o.stage; c != 0) return c;
    size_t n = std::min(kids.size(), o.kids.size());
    for (size_t i = 0; i < n; ++i)
        if (auto c = kids[i] <=> o.kids[i]; c != 0) return c;
    return kids.size() <=> o.kids.size();
}

// ---------------------------------------------------------------- parsing

namespace {

struct Raw {
    bool star = false;
    size_t pos = 0;
    std::vector<Raw> kids;
};

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Raw parse() {
        Raw r = node();
        skip();
        if (i_ != s_.size()) fail("trailing characters");
        return r;
    }

private:
    std::string_view s_;
    size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error("tree parse error at position " + std::to_string(i_) + ": " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    Raw node() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        Raw r;
        r.pos = i_;
        if (s_[i_] == '*') {
            ++i_;
            r.star = true;
            return r;
        }
        if (s_[i_] != '[') fail("expected '*' or '['");
        ++i_;
        skip();
        if (i_ < s_.size() && s_[i_] == ']') {
            ++i_;
            return r;
        }
        for (;;) {
            r.kids.push_back(node());
            skip();
            if (i_ >= s_.size()) fail("unexpected end of input");
            if (s_[i_] == ',') {
                ++i_;
                continue;
            }
            if (s_[i_] == ']') {
                ++i_;
                return r;
            }
            fail("expected ',' or ']'");
        }
    }
};

int raw_depth(const Raw& r) {
    if (r.star) return 0;
    int d = 0;
    for (const auto& k : r.kids) d = std::max(d, raw_depth(k));
    return d + 1;
}

// Depth of the stars below r, or -1 if none.  Throws on non-uniform depth.
int raw_star_depth(const Raw& r) {
    if (r.star) return 0;
    int d = -1;
    for (const auto& k : r.kids) {
        int e = raw_star_depth(k);
        if (e < 0) continue;
        if (d >= 0 && d != e + 1)
            throw Error("tree parse error at position " + std::to_string(k.pos) +
                        ": siblings of different stage");
        d = e + 1;
    }
    return d;
}

Tree build(const Raw& r, int k) {
    if (r.star) {
        if (k != 0)
            throw Error("tree parse error at position " + std::to_string(r.pos) +
                        ": '*' where a stage-" + std::to_string(k) + " tree is required");
        return Tree{};
    }
    if (k <= 0)
        throw Error("tree parse error at position " + std::to_string(r.pos) +
                    ": bracket where a stage-0 tree is required");
    Tree t;
    t.stage = k;
    for (const auto& c : r.kids) t.kids.push_back(build(c, k - 1));
    return t;
}

Tree parse_impl(std::string_view text, int forced) {
    size_t at = text.rfind('@');
    if (at != std::string_view::npos) {
        std::string num(text.substr(at + 1));
        if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit))
            throw Error("tree parse error at position " + std::to_string(at) + ": bad stage suffix");
        int k = std::stoi(num);
        if (forced >= 0 && forced != k) throw Error("tree stage suffix conflicts with requested stage");
        forced = k;
        text = text.substr(0, at);
    }
    Raw raw = Parser(text).parse();
    int sd = raw_star_depth(raw);
    int k = forced >= 0 ? forced : (sd >= 0 ? sd : raw_depth(raw));
    return build(raw, k);
}

bool has_top(const Tree& p) {
    if (p.stage == 0) return true;
    for (const auto& k : p.kids)
        if (has_top(k)) return true;
    return false;
}

int depth(const Tree& p) {
    if (p.stage == 0) return 0;
    int d = 0;
    for (const auto& k : p.kids) d = std::max(d, depth(k));
    return d + 1;
}

void ser(const Tree& p, std::string& out) {
    if (p.stage == 0) {
        out += '*';
        return;
    }
    out += '[';
    for (size_t i = 0; i < p.kids.size(); ++i) {
        if (i) out += ',';
        ser(p.kids[i], out);
    }
    out += ']';
}

}  // namespace

Tree parse_tree(std::string_view text) { return parse_impl(text, -1); }

Tree parse_tree(std::string_view text, int stage) {
    if (stage < 0) throw Error("negative stage");
    return parse_impl(text, stage);
}

std::string serialize(const Tree& p) {
    std::string s;
    ser(p, s);
    return s;
}

std::string tree_key(const Tree& p) {
    std::string s = serialize(p);
    int inferred = has_top(p) ? p.stage : depth(p);
    if (inferred != p.stage) s += "@" + std::to_string(p.stage);
    return s;
}

// ---------------------------------------------------------------- basic ops

Tree unit_tree(int k) {
    if (k < 0) throw Error("negative stage");
    if (k == 0) return Tree{};
    return Tree(k, {unit_tree(k - 1)});
}

Tree truncate(const Tree& p, int r) {
    if (r < 0 || r > p.stage)
        throw Error("truncation height " + std::to_string(r) + " out of range for stage " +
                    std::to_string(p.stage));
    if (r == p.stage) return p;
    if (r == 0) return Tree{};
    Tree t;
    t.stage = r;
    for (const auto& k : p.kids) t.kids.push_back(truncate(k, r - 1));
    return t;
}

Tree tr(const Tree& p) {
    if (p.stage == 0) throw Error("cannot truncate a stage-0 tree");
    return truncate(p, p.stage - 1);
}

Tree suspend(const Tree& p) {
    Tree t;
    t.stage = p.stage + 1;
    for (const auto& k : p.kids) t.kids.push_back(suspend(k));
    return t;
}

Tree bracket(const Tree& p) { return Tree(p.stage + 1, {p}); }

int node_count(const Tree& p) {
    int n = 0;
    for (const auto& k : p.kids) n += 1 + node_count(k);
    return n;
}

std::vector<int> level_counts(const Tree& p) {
    std::vector<int> c(p.stage + 1, 0);
    c[0] = 1;
    for (const auto& k : p.kids) {
        auto kc = level_counts(k);
        for (size_t h = 0; h < kc.size(); ++h) c[h + 1] += kc[h];
    }
    return c;
}

std::vector<NodeId> leaves(const Tree& p) {
    if (p.kids.empty()) return {NodeId{0, 0}};
    std::vector<NodeId> out;
    std::vector<int> off(p.stage + 1, 0);
    for (const auto& k : p.kids) {
        for (auto x : leaves(k)) out.push_back({x.height + 1, x.index + off[x.height + 1]});
        auto kc = level_counts(k);
        for (size_t h = 0; h < kc.size(); ++h) off[h + 1] += kc[h];
    }
    return out;
}

int leaf_count(const Tree& p) {
    if (p.kids.empty()) return 1;
    int n = 0;
    for (const auto& k : p.kids) n += leaf_count(k);
    return n;
}

bool is_linear(const Tree& p) { return leaf_count(p) == 1; }

int nonlinear_height(const Tree& p) {
    for (int h = 0; h <= p.stage; ++h)
        if (!is_linear(truncate(p, h))) return h;
    return 0;
}

// ---------------------------------------------------------------- level form

namespace {
void visit(const Tree& t, int h, int self, LevelTree& l) {
    for (const auto& k : t.kids) {
        int idx = static_cast<int>(l.parent[h + 1].size());
        l.parent[h + 1].push_back(self);
        visit(k, h + 1, idx, l);
    }
}

Tree rebuild(const LevelTree& l, const std::vector<std::vector<std::vector<int>>>& ch, int h, int i) {
    Tree t;
    t.stage = l.stage - h;
    if (h < l.stage)
        for (int c : ch[h][i]) t.kids.push_back(rebuild(l, ch, h + 1, c));
    return t;
}
}  // namespace

LevelTree to_levels(const Tree& p) {
    LevelTree l;
    l.stage = p.stage;
    l.parent.assign(p.stage + 1, {});
    visit(p, 0, 0, l);
    return l;
}

Tree from_levels(const LevelTree& l) {
    if (static_cast<int>(l.parent.size()) != l.stage + 1) throw Error("level form: wrong number of levels");
    std::vector<std::vector<std::vector<int>>> ch(l.stage + 1);
    for (int r = 0; r <= l.stage; ++r) ch[r].assign(l.count(r), {});
    for (int r = 1; r <= l.stage; ++r) {
        int prev = 0;
        for (int i = 0; i < l.count(r); ++i) {
            int par = l.parent[r][i];
            if (par < 0 || par >= l.count(r - 1)) throw Error("level form: parent out of range");
            if (par < prev) throw Error("level form: parent map not order preserving");
            prev = par;
            ch[r - 1][par].push_back(i);
        }
    }
    return rebuild(l, ch, 0, 0);
}

NodeId ancestor(const LevelTree& l, NodeId x, int height) {
    while (x.height > height) {
        x.index = l.parent[x.height][x.index];
        --x.height;
    }
    return x;
}

std::vector<int> children(const LevelTree& l, NodeId x) {
    std::vector<int> out;
    if (x.height >= l.stage) return out;
    const auto& par = l.parent[x.height + 1];
    for (int i = 0; i < static_cast<int>(par.size()); ++i)
        if (par[i] == x.index) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------- morphisms

std::string check_morphism(const TreeMorphism& f) {
    const int k = f.source.stage;
    if (f.target.stage != k) return "source and target stages differ";
    if (static_cast<int>(f.maps.size()) != k + 1) return "wrong number of level maps";
    auto lp = to_levels(f.source);
    auto lq = to_levels(f.target);
    if (f.maps[0] != std::vector<int>{0}) return "level 0 map is not the identity";
    for (int i = 1; i <= k; ++i) {
        if (static_cast<int>(f.maps[i].size()) != lp.count(i))
            return "level " + std::to_string(i) + " map has wrong size";
        for (int x = 0; x < lp.count(i); ++x) {
            int y = f.maps[i][x];
            if (y < 0 || y >= lq.count(i)) return "level " + std::to_string(i) + " value out of range";
            if (lq.parent[i][y] != f.maps[i - 1][lp.parent[i][x]])
                return "level " + std::to_string(i) + " does not commute with parents at node " +
                       std::to_string(x);
            if (x > 0 && lp.parent[i][x - 1] == lp.parent[i][x] && f.maps[i][x - 1] > y)
                return "level " + std::to_string(i) + " not order preserving on fibres at node " +
                       std::to_string(x);
        }
    }
    return {};
}

void require_morphism(const TreeMorphism& f) {
    auto e = check_morphism(f);
    if (!e.empty()) throw Error("invalid tree morphism: " + e);
}

TreeMorphism identity_morphism(const Tree& p) {
    TreeMorphism f{p, p, {}};
    for (int c : level_counts(p)) {
        std::vector<int> m(c);
        for (int i = 0; i < c; ++i) m[i] = i;
        f.maps.push_back(std::move(m));
    }
    return f;
}

TreeMorphism compose(const TreeMorphism& g, const TreeMorphism& f) {
    if (!(f.target == g.source)) throw Error("compose: morphisms not composable");
    TreeMorphism h{f.source, g.target, f.maps};
    for (size_t i = 0; i < h.maps.size(); ++i)
        for (auto& v : h.maps[i]) v = g.maps[i][v];
    return h;
}

TreeMorphism truncate(const TreeMorphism& f) {
    if (f.source.stage == 0) throw Error("cannot truncate a stage-0 morphism");
    TreeMorphism t{tr(f.source), tr(f.target), f.maps};
    t.maps.pop_back();
    return t;
}

TreeMorphism bracket(const TreeMorphism& f) {
    TreeMorphism b{bracket(f.source), bracket(f.target), {{0}}};
    for (const auto& m : f.maps) b.maps.push_back(m);
    return b;
}

TreeMorphism terminal_morphism(const Tree& p) {
    TreeMorphism f{p, unit_tree(p.stage), {}};
    for (int c : level_counts(p)) f.maps.emplace_back(c, 0);
    return f;
}

// ---------------------------------------------------------------- substitution

std::vector<int> junction_heights(const Tree& q) {
    auto lv = leaves(q);
    auto l = to_levels(q);
    std::vector<int> out;
    for (size_t i = 0; i + 1 < lv.size(); ++i) {
        int h = std::min(lv[i].height, lv[i + 1].height);
        while (h > 0 && ancestor(l, lv[i], h) != ancestor(l, lv[i + 1], h)) --h;
        out.push_back(h);
    }
    return out;
}

namespace {

struct SubResult {
    Tree tree;
    std::vector<std::vector<int>> maps;
};

SubResult sub(const Tree& q, const Tree* parts, size_t n) {
    const int k = q.stage;
    SubResult r;
    r.tree.stage = k;
    r.maps.assign(k + 1, {});
    r.maps[0] = {0};
    if (q.kids.empty()) return r;
    std::vector<int> qoff(k + 1, 0);
    size_t pos = 0;
    for (size_t j = 0; j < q.kids.size(); ++j) {
        const Tree& qj = q.kids[j];
        size_t L = static_cast<size_t>(leaf_count(qj));
        if (pos + L > n) throw Error("substitute: too few parts");
        size_t nj = parts[pos].kids.size();
        for (size_t x = 1; x < L; ++x)
            if (parts[pos + x].kids.size() != nj)
                throw Error("substitute: adjacent parts disagree on their common truncation");
        for (size_t t = 0; t < nj; ++t) {
            std::vector<Tree> cp;
            cp.reserve(L);
            for (size_t x = 0; x < L; ++x) cp.push_back(parts[pos + x].kids[t]);
            SubResult s = sub(qj, cp.data(), L);
            r.maps[1].push_back(static_cast<int>(j));
            for (int h = 1; h < k; ++h)
                for (int v : s.maps[h]) r.maps[h + 1].push_back(qoff[h + 1] + v);
            r.tree.kids.push_back(std::move(s.tree));
        }
        pos += L;
        auto cnt = level_counts(qj);
        for (int h = 0; h < k; ++h) qoff[h + 1] += cnt[h];
    }
    return r;
}

}  // namespace

Substitution substitute(const Tree& q, const std::vector<Tree>& parts) {
    auto lv = leaves(q);
    if (parts.size() != lv.size())
        throw Error("substitute: expected " + std::to_string(lv.size()) + " parts, got " +
                    std::to_string(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i)
        if (parts[i].stage != lv[i].height)
            throw Error("substitute: part " + std::to_string(i) + " has stage " +
                        std::to_string(parts[i].stage) + ", leaf height is " +
                        std::to_string(lv[i].height));
    auto jh = junction_heights(q);
    for (size_t i = 0; i + 1 < parts.size(); ++i)
        if (truncate(parts[i], jh[i]) != truncate(parts[i + 1], jh[i]))
            throw Error("substitute: parts " + std::to_string(i) + " and " + std::to_string(i + 1) +
                        " disagree on their height-" + std::to_string(jh[i]) + " truncation");
    SubResult r = sub(q, parts.data(), parts.size());
    Substitution s{r.tree, TreeMorphism{r.tree, q, std::move(r.maps)}};
    return s;
}

namespace {

Tree preimage_levels(const TreeMorphism& f, const LevelTree& lp, const LevelTree& lq, NodeId y) {
    LevelTree out;
    out.stage = y.height;
    out.parent.assign(y.height + 1, {});
    std::vector<int> prev_pos(1, 0);  // position of selected source nodes at previous level
    for (int h = 1; h <= y.height; ++h) {
        int a = ancestor(lq, y, h).index;
        std::vector<int> pos(lp.count(h), -1);
        int next = 0;
        for (int x = 0; x < lp.count(h); ++x) {
            if (f.maps[h][x] != a) continue;
            pos[x] = next++;
            out.parent[h].push_back(prev_pos[lp.parent[h][x]]);
        }
        prev_pos = std::move(pos);
    }
    return from_levels(out);
}

}  // namespace

Tree preimage(const TreeMorphism& f, NodeId y) {
    return preimage_levels(f, to_levels(f.source), to_levels(f.target), y);
}

MorphismFibres analyze_morphism(const TreeMorphism& f) {
    require_morphism(f);
    MorphismFibres m;
    auto lp = to_levels(f.source);
    auto lq = to_levels(f.target);
    auto lv = leaves(f.target);
    for (auto y : lv) m.fibres.push_back(preimage_levels(f, lp, lq, y));
    for (size_t i = 0; i + 1 < lv.size(); ++i) {
        int h = std::min(lv[i].height, lv[i + 1].height);
        while (h > 0 && ancestor(lq, lv[i], h) != ancestor(lq, lv[i + 1], h)) --h;
        m.truncated.push_back(truncate(m.fibres[i], h));
    }
    const int k = f.target.stage;
    if (k >= 1) {
        // leaves of tr(target), in order, are the target leaves below height k
        // and the height-(k-1) parents of top leaves, each parent once
        for (size_t i = 0; i < lv.size(); ++i) {
            if (lv[i].height < k) {
                m.lower_first.push_back(static_cast<int>(i));
                m.lower_last.push_back(static_cast<int>(i));
                m.lower_cut.push_back(0);
                continue;
            }
            int par = lq.parent[k][lv[i].index];
            bool same = i > 0 && lv[i - 1].height == k && lq.parent[k][lv[i - 1].index] == par;
            if (same) {
                m.lower_last.back() = static_cast<int>(i);
            } else {
                m.lower_first.push_back(static_cast<int>(i));
                m.lower_last.push_back(static_cast<int>(i));
                m.lower_cut.push_back(1);
            }
        }
    }
    return m;
}

FibreRestriction restrict_over(const TreeMorphism& f, const TreeMorphism& g, NodeId z) {
    if (f.target != g.source) throw Error("restrict_over: morphisms are not composable");
    return restrict_over(f, g, z, to_levels(f.source), to_levels(g.source), to_levels(g.target));
}

FibreRestriction restrict_over(const TreeMorphism& f, const TreeMorphism& g, NodeId z,
                               const LevelTree& lp, const LevelTree& lq, const LevelTree& lr) {
    FibreRestriction out;
    LevelTree ls, lt;
    ls.stage = lt.stage = z.height;
    ls.parent.assign(z.height + 1, {});
    lt.parent.assign(z.height + 1, {});
    out.morphism.maps.assign(z.height + 1, {});
    out.morphism.maps[0] = {0};
    out.target_nodes.assign(z.height + 1, {});
    out.target_nodes[0] = {0};
    std::vector<int> ppos(1, 0), qpos(1, 0);
    for (int h = 1; h <= z.height; ++h) {
        int a = ancestor(lr, z, h).index;
        std::vector<int> np(lp.count(h), -1), nq(lq.count(h), -1);
        int next = 0;
        for (int y = 0; y < lq.count(h); ++y) {
            if (g.maps[h][y] != a) continue;
            nq[y] = next++;
            lt.parent[h].push_back(qpos[lq.parent[h][y]]);
            out.target_nodes[h].push_back(y);
        }
        next = 0;
        for (int x = 0; x < lp.count(h); ++x) {
            int y = f.maps[h][x];
            if (nq[y] < 0) continue;
            np[x] = next++;
            ls.parent[h].push_back(ppos[lp.parent[h][x]]);
            out.morphism.maps[h].push_back(nq[y]);
        }
        ppos = std::move(np);
        qpos = std::move(nq);
    }
    out.morphism.source = from_levels(ls);
    out.morphism.target = from_levels(lt);
    return out;
}

bool is_inclusion(const TreeMorphism& f) {
    for (const auto& m : f.maps) {
        auto s = m;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
    }
    return true;
}

// ---------------------------------------------------------------- inclusions

namespace {
// off[j][H]: nodes at height H of p lying in kids before j.
std::vector<std::vector<int>> column_offsets(const Tree& p) {
    std::vector<std::vector<int>> off;
    std::vector<int> acc(p.stage + 1, 0);
    for (const auto& k : p.kids) {
        off.push_back(acc);
        auto kc = level_counts(k);
        for (size_t h = 0; h < kc.size(); ++h) acc[h + 1] += kc[h];
    }
    off.push_back(acc);
    return off;
}
}  // namespace

TreeMorphism restrict_to_column(const TreeMorphism& f, int t) {
    const Tree& q = f.source;
    const Tree& p = f.target;
    if (q.stage == 0 || t < 0 || t >= static_cast<int>(q.kids.size()))
        throw Error("restrict_to_column: column out of range");
    int j = f.maps[1][t];
    auto qo = column_offsets(q);
    auto po = column_offsets(p);
    TreeMorphism r{q.kids[t], p.kids[j], {{0}}};
    auto kc = level_counts(q.kids[t]);
    for (int h = 1; h < q.stage; ++h) {
        std::vector<int> m;
        for (int x = 0; x < kc[h]; ++x) m.push_back(f.maps[h + 1][qo[t][h + 1] + x] - po[j][h + 1]);
        r.maps.push_back(std::move(m));
    }
    return r;
}

InclusionDecomposition decompose_inclusion(const TreeMorphism& f) {
    require_morphism(f);
    if (!is_inclusion(f)) throw Error("decompose_inclusion: not an inclusion");
    if (f.source.stage == 0) throw Error("decompose_inclusion: stage-0 morphism");
    InclusionDecomposition d;
    d.subsequence = f.maps[1];
    for (size_t t = 0; t < f.source.kids.size(); ++t)
        d.components.push_back(restrict_to_column(f, static_cast<int>(t)));
    return d;
}

TreeMorphism subsequence_inclusion(const Tree& p, const std::vector<int>& idx) {
    if (p.stage == 0) throw Error("subsequence_inclusion: stage-0 tree");
    for (size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] < 0 || idx[t] >= static_cast<int>(p.kids.size()))
            throw Error("subsequence_inclusion: index out of range");
        if (t > 0 && idx[t] <= idx[t - 1]) throw Error("subsequence_inclusion: indices not increasing");
    }
    Tree src;
    src.stage = p.stage;
    for (int i : idx) src.kids.push_back(p.kids[i]);
    auto off = column_offsets(p);
    TreeMorphism f{src, p, {{0}, idx}};
    for (int H = 2; H <= p.stage; ++H) {
        std::vector<int> m;
        for (int i : idx) {
            int c = level_counts(p.kids[i])[H - 1];
            for (int x = 0; x < c; ++x) m.push_back(off[i][H] + x);
        }
        f.maps.push_back(std::move(m));
    }
    return f;
}

TreeMorphism bracket_components(const std::vector<TreeMorphism>& comps, int stage) {
    if (stage < 1) throw Error("bracket_components: stage must be positive");
    Tree src, tgt;
    src.stage = tgt.stage = stage;
    for (const auto& c : comps) {
        if (c.source.stage != stage - 1) throw Error("bracket_components: component of wrong stage");
        src.kids.push_back(c.source);
        tgt.kids.push_back(c.target);
    }
    auto off = column_offsets(tgt);
    TreeMorphism f{src, tgt, {{0}, {}}};
    for (size_t t = 0; t < comps.size(); ++t) f.maps[1].push_back(static_cast<int>(t));
    for (int H = 2; H <= stage; ++H) {
        std::vector<int> m;
        for (size_t t = 0; t < comps.size(); ++t)
            for (int v : comps[t].maps[H - 1]) m.push_back(off[t][H] + v);
        f.maps.push_back(std::move(m));
    }
    return f;
}

TreeMorphism canonical_inclusion(const Tree& p, int i) {
    if (p.stage == 0 || i < 0 || i >= static_cast<int>(p.kids.size()))
        throw Error("canonical_inclusion: index out of range");
    return subsequence_inclusion(p, {i});
}

// ---------------------------------------------------------------- enumeration

namespace {

const std::vector<Tree>& trees_within(int stage, int budget) {
    static std::map<std::pair<int, int>, std::vector<Tree>> memo;
    auto key = std::make_pair(stage, budget);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Tree> out;
    if (stage == 0) {
        out.push_back(Tree{});
    } else {
        // sequences of (stage-1)-trees whose sizes (plus one each) fit the budget
        std::vector<std::pair<std::vector<Tree>, int>> frontier{{{}, budget}};
        while (!frontier.empty()) {
            auto [seq, left] = std::move(frontier.back());
            frontier.pop_back();
            out.emplace_back(stage, seq);
            if (left == 0) continue;
            for (const auto& t : trees_within(stage - 1, left - 1)) {
                auto s2 = seq;
                s2.push_back(t);
                frontier.emplace_back(std::move(s2), left - 1 - node_count(t));
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Tree& a, const Tree& b) { return serialize(a) < serialize(b); });
    return memo.emplace(key, std::move(out)).first->second;
}

}  // namespace

std::vector<Tree> enumerate_trees(int stage, int max_nodes) {
    if (stage < 0 || max_nodes < 0) throw Error("enumerate_trees: negative argument");
    return trees_within(stage, max_nodes);
}

std::vector<Tree> enumerate_trees_upto(int max_stage, int max_nodes) {
    std::vector<Tree> out;
    for (int k = 0; k <= max_stage; ++k) {
        auto v = enumerate_trees(k, max_nodes);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

std::vector<TreeMorphism> enumerate_morphisms(const Tree& p, const Tree& q) {
    std::vector<TreeMorphism> out;
    if (p.stage != q.stage) return out;
    const int k = p.stage;
    auto lp = to_levels(p);
    auto lq = to_levels(q);
    std::vector<std::vector<std::vector<int>>> ch(k + 1);
    for (int h = 0; h < k; ++h) {
        ch[h].resize(lq.count(h));
        for (int y = 0; y < lq.count(h + 1); ++y) ch[h][lq.parent[h + 1][y]].push_back(y);
    }
    std::vector<std::vector<int>> maps(k + 1);
    maps[0] = {0};
    for (int h = 1; h <= k; ++h) maps[h].assign(lp.count(h), -1);

    auto rec = [&](auto&& self, int h, int i) -> void {
        if (h > k) {
            out.push_back(TreeMorphism{p, q, maps});
            return;
        }
        if (i == lp.count(h)) {
            self(self, h + 1, 0);
            return;
        }
        int par = lp.parent[h][i];
        int lo = (i > 0 && lp.parent[h][i - 1] == par) ? maps[h][i - 1] : -1;
        for (int c : ch[h - 1][maps[h - 1][par]]) {
            if (c < lo) continue;
            maps[h][i] = c;
            self(self, h, i + 1);
        }
        maps[h][i] = -1;
    };
    rec(rec, 1, 0);
    return out;
}

std::vector<TreeMorphism> enumerate_inclusions(const Tree& q, const Tree& p) {
    std::vector<TreeMorphism> out;
    for (auto& f : enumerate_morphisms(q, p))
        if (is_inclusion(f)) out.push_back(std::move(f));
    return out;
}

// ---------------------------------------------------------------- keys

std::string morphism_key(const TreeMorphism& f) {
    std::string s = tree_key(f.source) + " -> " + tree_key(f.target) + " : [";
    for (size_t i = 0; i < f.maps.size(); ++i) {
        if (i) s += ',';
        s += '[';
        for (size_t j = 0; j < f.maps[i].size(); ++j) {
            if (j) s += ',';
            s += std::to_string(f.maps[i][j]);
        }
        s += ']';
    }
    return s + "]";
}

TreeMorphism parse_morphism_key(std::string_view key) {
    auto arrow = key.find(" -> ");
    auto colon = key.find(" : ");
    if (arrow == std::string_view::npos || colon == std::string_view::npos || colon < arrow)
        throw Error("malformed morphism key: " + std::string(key));
    TreeMorphism f;
    f.source = parse_tree(key.substr(0, arrow));
    f.target = parse_tree(key.substr(arrow + 4, colon - arrow - 4));
    std::string_view m = key.substr(colon + 3);
    size_t i = 0;
    auto expect = [&](char c) {
        while (i < m.size() && m[i] == ' ') ++i;
        if (i >= m.size() || m[i] != c) throw Error("malformed morphism key maps: " + std::string(m));
        ++i;
    };
    auto peek = [&]() {
        while (i < m.size() && m[i] == ' ') ++i;
        return i < m.size() ? m[i] : '\0';
    };
    expect('[');
    while (peek() == '[') {
        ++i;
        std::vector<int> level;
        while (peek() != ']') {
            size_t start = i;
            while (i < m.size() && std::isdigit(static_cast<unsigned char>(m[i]))) ++i;
            if (start == i) throw Error("malformed morphism key maps: " + std::string(m));
            level.push_back(std::stoi(std::string(m.substr(start, i - start))));
            if (peek() == ',') ++i;
        }
        expect(']');
        f.maps.push_back(std::move(level));
        if (peek() == ',') ++i;
    }
    expect(']');
    require_morphism(f);
    return f;
}

}  // namespace gop
