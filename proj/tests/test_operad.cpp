#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <random>

#include "gop/operad.hpp"
#include "oracles.hpp"

using namespace gop;
using oracles::catalan;

namespace {

Tree T(const char* s) { return parse_tree(s); }

TreeMorphism leaf_map(const Tree& p, const Tree& q, std::vector<int> m) {
    return {p, q, {{0}, std::move(m)}};
}

// The stage-1 part of a materialized operad.
std::shared_ptr<TableOperad> stage_one(const TableOperad& t) {
    auto s = std::make_shared<TableOperad>(t);
    s->carrier.dim = 1;
    for (auto it = s->carrier.fibres.begin(); it != s->carrier.fibres.end();)
        it = parse_tree(it->first).stage > 1 ? s->carrier.fibres.erase(it) : std::next(it);
    for (auto it = s->table.begin(); it != s->table.end();) {
        auto f = parse_morphism_key(it->first.substr(0, it->first.find('\x1f')));
        it = f.source.stage > 1 ? s->table.erase(it) : std::next(it);
    }
    s->units.resize(2);
    return s;
}

}  // namespace

TEST_CASE("stock operads satisfy the axioms") {
    for (auto A : {terminal_operad(1), terminal_operad(2), rgr_operad(1), rgr_operad(2)}) {
        auto r = check_operad(*A, 5);
        CHECK_MESSAGE(r.ok(), A->name());
        CHECK(r.instances > 0);
    }
    auto r = check_operad(*bracketing_operad(), 4);
    CHECK(r.ok());
    CHECK(r.details["assoc_instances"].get<long>() > 100000);
}

TEST_CASE("terminal-2 passes at bound 6") {
    auto r = check_operad(*terminal_operad(2), 6);
    CHECK(r.ok());
    CHECK(r.instances > 30000000);
}

TEST_CASE("rgr is subterminal and reduced") {
    auto R = rgr_operad(2);
    auto Tm = terminal_operad(2);
    for (const auto& p : enumerate_trees_upto(2, 5)) {
        auto a = R->ops(p), b = Tm->ops(p);
        CHECK(a.size() <= 1);
        for (const auto& x : a) CHECK(std::find(b.begin(), b.end(), x) != b.end());
        if (p.stage > 0) CHECK((a.size() == 1) == is_linear(p));
    }
    CHECK(is_reduced(*R, 5));
    CHECK(is_reduced(*Tm, 5));
    CHECK(is_reduced(*bracketing_operad(), 5));
}

TEST_CASE("two operations of arity zU_0 are not reduced") {
    auto t = materialize(*terminal_operad(1), 3);
    t->carrier.fibres["[*]"].ops = {"u", "v"};
    CHECK_FALSE(is_reduced(*t, 3));
    CHECK_THROWS_AS(derive_pointing(*t, 3), Error);
}

TEST_CASE("bracketing fibres are Catalan") {
    for (int m = 1; m <= 9; ++m) CHECK(static_cast<long>(bracketings(m).size()) == catalan(m - 1));
    auto B = bracketing_operad();
    CHECK(B->ops(T("[*,*,*,*]")).size() == 5);
    CHECK(B->ops(T("[*,*]")).size() == 1);
    CHECK(B->ops(T("[[*],[*],[*]]")).size() == 4);
    CHECK(B->ops(T("[[*,*]]")).size() == 1);
    CHECK(bracketings(0) == std::vector<std::string>{"e"});
    CHECK(left_bracketing(4) == "(((xx)x)x)");
    CHECK(right_bracketing(4) == "(x(x(xx)))");
}

TEST_CASE("grafting two-letter words") {
    auto B = bracketing_operad();
    auto f = leaf_map(T("[*,*,*]"), T("[*,*]"), {0, 0, 1});
    CHECK(substitute_ops(*B, f, left_bracketing(2), {left_bracketing(2), "x"}, 5) == left_bracketing(3));
    CHECK(substitute_ops(*B, f, left_bracketing(2), {left_bracketing(2), "x"}, 5) ==
          oracles::graft("(xx)", {"(xx)", "x"}));
}

TEST_CASE("stage-1 substitution matches an independent grafting") {
    auto B = bracketing_operad();
    long n = 0;
    for (const auto& p : enumerate_trees(1, 5))
        for (const auto& q : enumerate_trees(1, 5))
            for (const auto& f : enumerate_morphisms(p, q)) {
                auto fib = analyze_morphism(f);
                for (const auto& b : B->ops(q))
                    for (const auto& parts : compatible_tuples(*B, fib)) {
                        CHECK(B->subst(f, fib, b, parts) == oracles::graft(b, parts));
                        ++n;
                    }
            }
    CHECK(n > 1000);
}

TEST_CASE("unit insertion identity for the bracketing operad") {
    // x0 -f1-> x1 -f2-> x2 -1-> x2 -1-> x2 -f3-> x3 -f4-> x4 -1-> x4, leaves in arrow order;
    // composition order reverses it, so left-nested composites are right-nested words.
    auto B = bracketing_operad();
    Tree seven = T("[*,*,*,*,*,*,*]"), four = T("[*,*,*,*]");
    auto f = leaf_map(four, seven, {0, 1, 4, 5});
    auto fib = analyze_morphism(f);
    REQUIRE(fib.fibres.size() == 7);
    std::vector<Op> parts;
    for (const auto& t : fib.fibres) parts.push_back(t.kids.empty() ? "e" : "x");
    CHECK(parts == std::vector<Op>{"x", "x", "e", "e", "x", "x", "e"});
    // (((((1 o f4) o f3) o 1) o 1) o f2) o f1
    std::string lhs = "(x(x(x(x(x(xx))))))";
    CHECK(lhs == right_bracketing(7));
    CHECK(substitute_ops(*B, f, lhs, parts, 7) == right_bracketing(4));  // ((f4 o f3) o f2) o f1
    CHECK(oracles::graft(lhs, parts) == right_bracketing(4));
}

TEST_CASE("substitute_ops rejects bad input") {
    auto B = bracketing_operad();
    auto f = leaf_map(T("[*,*,*]"), T("[*,*]"), {0, 0, 1});
    CHECK_THROWS_AS(substitute_ops(*B, f, "(xx)", {"(xx)"}, 5), Error);
    CHECK_THROWS_AS(substitute_ops(*B, f, "(xx)", {"(xx)", "(xx)"}, 5), Error);
    CHECK_THROWS_AS(substitute_ops(*B, f, "((xx)x)", {"(xx)", "x"}, 5), Error);
    CHECK_THROWS_AS(substitute_ops(*B, f, "(xx)", {"(xx)", "x"}, 2), Error);
    // stage 2: parts over adjacent leaves must agree on their shared boundary
    auto h = TreeMorphism{T("[[*],[*],[*]]"), T("[[*,*]]"), {{0}, {0, 0, 0}, {0, 0, 1}}};
    REQUIRE(check_morphism(h).empty());
    auto hf = analyze_morphism(h);
    REQUIRE(hf.fibres.size() == 2);
    CHECK(hf.truncated[0] == T("[*,*,*]"));
    CHECK_NOTHROW(substitute_ops(*B, h, "x=>x", {"((xx)x)=>(x(xx))", "(x(xx))=>(x(xx))"}, 6));
    CHECK(substitute_ops(*B, h, "x=>x", {"((xx)x)=>(x(xx))", "(x(xx))=>(x(xx))"}, 6) == "((xx)x)=>(x(xx))");
    CHECK_THROWS_AS(substitute_ops(*B, h, "x=>x", {"((xx)x)=>((xx)x)", "(x(xx))=>(x(xx))"}, 6), Error);
}

TEST_CASE("substituting units along an inclusion into a unit-type operation gives the unit") {
    for (auto A : {terminal_operad(2), rgr_operad(2), bracketing_operad()}) {
        for (const auto& p : enumerate_trees_upto(2, 5)) {
            if (p.stage == 0 || !is_linear(p)) continue;
            auto up = A->ops(p);
            REQUIRE(up.size() == 1);
            for (const auto& q : enumerate_trees(p.stage, 5))
                for (const auto& f : enumerate_inclusions(q, p)) {
                    auto fib = analyze_morphism(f);
                    std::vector<Op> us;
                    for (const auto& t : fib.fibres) us.push_back(A->ops(t).at(0));
                    auto uq = A->ops(q);
                    REQUIRE(uq.size() == 1);
                    CHECK(A->subst(f, fib, up[0], us) == uq[0]);
                }
        }
    }
}

TEST_CASE("materialized tables reproduce the rule and catch mutations") {
    auto B = bracketing_operad();
    auto t = materialize(*B, 4);
    REQUIRE(check_operad(*t, 4).ok());
    std::vector<std::string> keys;
    for (const auto& [k, v] : t->table) keys.push_back(k);
    std::mt19937_64 rng(7);
    int tried = 0;
    while (tried < 5) {
        const auto& k = keys[rng() % keys.size()];
        auto f = parse_morphism_key(k.substr(0, k.find('\x1f')));
        auto ops = t->ops(f.source);
        if (ops.size() < 2) continue;
        auto old = t->table[k];
        t->table[k] = old == ops[0] ? ops[1] : ops[0];
        auto r = check_operad(*t, 4);
        CHECK_FALSE(r.ok());
        t->table[k] = old;
        ++tried;
    }
    CHECK(check_operad(*t, 4).ok());
}

TEST_CASE("mutations of the one-dimensional bracketing table break associativity or units") {
    auto t = stage_one(*materialize(*bracketing_operad(), 5));
    REQUIRE(t->dim() == 1);
    auto base = check_operad(*t, 5);
    REQUIRE(base.ok());
    std::vector<std::string> keys;
    for (const auto& [k, v] : t->table) keys.push_back(k);
    std::mt19937_64 rng(11);
    int tried = 0, assoc = 0;
    while (tried < 10) {
        const auto& k = keys[rng() % keys.size()];
        auto f = parse_morphism_key(k.substr(0, k.find('\x1f')));
        auto ops = t->ops(f.source);
        if (ops.size() < 2) continue;
        auto old = t->table[k];
        t->table[k] = old == ops[0] ? ops[1] : ops[0];
        auto r = check_operad(*t, 5);
        CHECK_FALSE(r.ok());
        CHECK((r.has_law("associativity") || r.has_law("unit-left") || r.has_law("unit-right")));
        if (r.has_law("associativity")) {
            ++assoc;
            for (const auto& v : r.violations)
                if (v.law == "associativity") {
                    CHECK(v.witness.contains("f"));
                    CHECK(v.witness.contains("g"));
                    break;
                }
        }
        t->table[k] = old;
        ++tried;
    }
    CHECK(assoc > 0);
}

TEST_CASE("derived pointings validate") {
    for (auto A : {terminal_operad(2), rgr_operad(2), bracketing_operad()}) {
        auto P = derive_pointing(*A, 5);
        CHECK(P.kind == CollectionKind::pointed);
        auto r = validate(P);
        CHECK_MESSAGE(r.ok(), A->name());
        for (const auto& p : P.trees()) {
            if (is_linear(p)) continue;
            for (const auto& a : P.ops(p)) CHECK(P.act_apply(identity_morphism(p), a) == a);
        }
    }
    auto T2 = derive_pointing(*terminal_operad(2), 5);
    for (const auto& [k, m] : T2.act)
        for (const auto& [a, b] : m) CHECK(b == "u");
}

TEST_CASE("unit pruning fixes the fully left and fully right bracketings") {
    auto P = derive_pointing(*bracketing_operad(), 6);
    long n = 0;
    for (const auto& p : enumerate_trees(1, 6)) {
        if (is_linear(p)) continue;
        for (const auto& q : enumerate_trees(1, 6)) {
            if (is_linear(q)) continue;
            for (const auto& f : enumerate_inclusions(q, p)) {
                int m = leaf_count(p), l = leaf_count(q);
                CHECK(P.act_apply(f, left_bracketing(m)) == left_bracketing(l));
                CHECK(P.act_apply(f, right_bracketing(m)) == right_bracketing(l));
                ++n;
            }
        }
    }
    CHECK(n > 20);
    // ((xx)x) restricted to its outer letters
    auto f = subsequence_inclusion(T("[*,*,*]"), {0, 2});
    CHECK(P.act_apply(f, "((xx)x)") == "(xx)");
    CHECK(oracles::graft("((xx)x)", {"x", "e", "x"}) == "(xx)");
}

TEST_CASE("to_collection of stock operads validates") {
    for (auto A : {terminal_operad(3), rgr_operad(2), bracketing_operad()}) {
        auto c = to_collection(*A, 5);
        CHECK_MESSAGE(validate(c).ok(), A->name());
    }
    CHECK(to_collection(*rgr_operad(2), 4).kind == CollectionKind::reduced);
}
