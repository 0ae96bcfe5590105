#include <algorithm>
#include <map>

#include "gop/operad.hpp"

namespace gop {

namespace {

void require_stage(const Operad& A, const Tree& p) {
    if (p.stage > A.dim())
        throw Error(A.name() + ": tree " + tree_key(p) + " has stage above " + std::to_string(A.dim()));
}

class TerminalOperad : public Operad {
public:
    explicit TerminalOperad(int n) : n_(n) {}
    std::string name() const override { return "terminal-" + std::to_string(n_); }
    int dim() const override { return n_; }
    std::vector<Op> ops(const Tree& p) const override {
        require_stage(*this, p);
        return {p.stage == 0 ? kPoint : Op("u")};
    }
    Op src(const Tree& p, const Op&) const override { return p.stage == 1 ? kPoint : Op("u"); }
    Op tgt(const Tree& p, const Op& a) const override { return src(p, a); }
    Op unit(int k) const override { return k == 0 ? kPoint : Op("u"); }
    using Operad::subst;
    Op subst(const TreeMorphism& f, const MorphismFibres&, const Op&, const std::vector<Op>&) const override {
        return unit(f.source.stage);
    }

private:
    int n_;
};

class RGrOperad : public Operad {
public:
    explicit RGrOperad(int n) : n_(n) {}
    std::string name() const override { return "rgr-" + std::to_string(n_); }
    int dim() const override { return n_; }
    std::vector<Op> ops(const Tree& p) const override {
        require_stage(*this, p);
        if (p.stage == 0) return {kPoint};
        if (is_linear(p)) return {"u"};
        return {};
    }
    Op src(const Tree& p, const Op&) const override { return p.stage == 1 ? kPoint : Op("u"); }
    Op tgt(const Tree& p, const Op& a) const override { return src(p, a); }
    Op unit(int k) const override { return k == 0 ? kPoint : Op("u"); }
    using Operad::subst;
    Op subst(const TreeMorphism& f, const MorphismFibres&, const Op&, const std::vector<Op>&) const override {
        if (!is_linear(f.source)) throw Error("rgr: no operation at " + tree_key(f.source));
        return unit(f.source.stage);
    }

private:
    int n_;
};

// Grafts parts into the letters of b, dropping letters replaced by "e".
std::string graft_rec(const std::string& b, size_t& pos, const std::vector<Op>& parts, size_t& leaf) {
    if (pos >= b.size()) throw Error("malformed bracketing '" + b + "'");
    if (b[pos] == 'x') {
        ++pos;
        if (leaf >= parts.size()) throw Error("bracketing '" + b + "' has more letters than parts");
        const Op& s = parts[leaf++];
        return s == "e" ? std::string() : s;
    }
    if (b[pos] != '(') throw Error("malformed bracketing '" + b + "'");
    ++pos;
    std::string l = graft_rec(b, pos, parts, leaf);
    std::string r = graft_rec(b, pos, parts, leaf);
    if (pos >= b.size() || b[pos] != ')') throw Error("malformed bracketing '" + b + "'");
    ++pos;
    if (l.empty()) return r;
    if (r.empty()) return l;
    return "(" + l + r + ")";
}

std::string graft(const std::string& b, const std::vector<Op>& parts) {
    if (b == "e") return "e";
    size_t pos = 0, leaf = 0;
    std::string r = graft_rec(b, pos, parts, leaf);
    if (pos != b.size() || leaf != parts.size()) throw Error("bracketing '" + b + "' does not match its parts");
    return r.empty() ? "e" : r;
}

class BracketingOperad : public Operad {
public:
    std::string name() const override { return "bracketing2"; }
    int dim() const override { return 2; }
    std::vector<Op> ops(const Tree& p) const override {
        require_stage(*this, p);
        if (p.stage == 0) return {kPoint};
        if (p.stage == 1) return bracketings(static_cast<int>(p.kids.size()));
        auto below = bracketings(static_cast<int>(p.kids.size()));
        std::vector<Op> out;
        for (const auto& s : below)
            for (const auto& t : below) out.push_back(s + "=>" + t);
        std::sort(out.begin(), out.end());
        return out;
    }
    Op src(const Tree& p, const Op& a) const override {
        if (p.stage == 1) return kPoint;
        return a.substr(0, split(a));
    }
    Op tgt(const Tree& p, const Op& a) const override {
        if (p.stage == 1) return kPoint;
        return a.substr(split(a) + 2);
    }
    Op unit(int k) const override {
        static const Op u[] = {kPoint, "x", "x=>x"};
        if (k < 0 || k > 2) throw Error("bracketing2: no unit of stage " + std::to_string(k));
        return u[k];
    }
    using Operad::subst;
    Op subst(const TreeMorphism& f, const MorphismFibres& fib, const Op& b,
             const std::vector<Op>& parts) const override {
        switch (f.source.stage) {
            case 0: return kPoint;
            case 1: return graft(b, parts);
            default: {
                // determined by its boundary
                Op s = graft(src(f.target, b), boundary_parts(*this, f, fib, parts, true));
                Op t = graft(tgt(f.target, b), boundary_parts(*this, f, fib, parts, false));
                return s + "=>" + t;
            }
        }
    }

private:
    static size_t split(const Op& a) {
        auto i = a.find("=>");
        if (i == Op::npos) throw Error("bracketing2: malformed stage-2 operation '" + a + "'");
        return i;
    }
};

}  // namespace

std::vector<std::string> bracketings(int m) {
    static std::map<int, std::vector<std::string>> memo;
    if (m < 0) throw Error("bracketings: negative length");
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    std::vector<std::string> out;
    if (m == 0) out = {"e"};
    else if (m == 1) out = {"x"};
    else
        for (int i = 1; i < m; ++i)
            for (const auto& l : bracketings(i))
                for (const auto& r : bracketings(m - i)) out.push_back("(" + l + r + ")");
    std::sort(out.begin(), out.end());
    return memo[m] = out;
}

std::string left_bracketing(int m) {
    if (m == 0) return "e";
    std::string s = "x";
    for (int i = 1; i < m; ++i) s = "(" + s + "x)";
    return s;
}

std::string right_bracketing(int m) {
    if (m == 0) return "e";
    std::string s = "x";
    for (int i = 1; i < m; ++i) s = "(x" + s + ")";
    return s;
}

OperadPtr terminal_operad(int n) {
    if (n < 0) throw Error("terminal operad: negative dimension");
    return std::make_shared<TerminalOperad>(n);
}

OperadPtr rgr_operad(int n) {
    if (n < 0) throw Error("rgr operad: negative dimension");
    return std::make_shared<RGrOperad>(n);
}

OperadPtr bracketing_operad() { return std::make_shared<BracketingOperad>(); }

}  // namespace gop
