// One PASS/FAIL line per acceptance criterion.  Arguments select criteria by
// number; no arguments runs all of them.  Exit status 0 iff every selected
// criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gop/contraction.hpp"
#include "gop/enrich.hpp"
#include "gop/homs.hpp"
#include "gop/lifting.hpp"
#include "gop/operad.hpp"
#include "oracles.hpp"

using namespace gop;

namespace {

struct Tally {
    long checks = 0;
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 8) failures.push_back(what);
        if (!ok && failures.size() == 8) failures.push_back("...");
    }
    bool ok() const { return failures.empty(); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ContractionChoice forced(const Operad& A, int bound) {
    auto res = search_contraction(derive_pointing(A, bound), true);
    if (!res.found) throw Error("no unital contraction on " + A.name());
    return res.choice;
}

// ------------------------------------------------------------ 1. bracketing

void bracketing_example(Tally& t) {
    auto B = bracketing_operad();
    auto P = derive_pointing(*B, 5);
    for (const char* mode : {"left", "right"}) {
        auto t0 = std::chrono::steady_clock::now();
        auto g = bracketing_contraction(P, mode);
        t.expect(check_contraction(P, g).ok(), std::string(mode) + " is a contraction");
        auto r = check_unital(P, g);
        t.expect(r.ok() && r.instances > 0, std::string(mode) + " is unital");
        t.expect(seconds_since(t0) < 5.0, std::string(mode) + " within 5 s");
    }

    // (((((1 o f4) o f3) o 1) o 1) o f2) o f1 = ((f4 o f3) o f2) o f1 as a substitution
    // along the inclusion of the four non-identity leaves into seven.
    Tree seven = parse_tree("[*,*,*,*,*,*,*]"), four = parse_tree("[*,*,*,*]");
    TreeMorphism f{four, seven, {{0}, {0, 1, 4, 5}}};
    t.expect(check_morphism(f).empty(), "unit insertion morphism");
    auto fib = analyze_morphism(f);
    std::vector<Op> parts;
    for (const auto& q : fib.fibres) parts.push_back(q.kids.empty() ? "e" : "x");
    t.expect(parts == std::vector<Op>{"x", "x", "e", "e", "x", "x", "e"}, "identities sit at the unit leaves");
    const Op lhs = right_bracketing(7);
    t.expect(lhs == "(x(x(x(x(x(xx))))))", "left-nested composite of seven");
    t.expect(substitute_ops(*B, f, lhs, parts, 7) == right_bracketing(4), "unit identity holds");
    t.expect(oracles::graft(lhs, parts) == right_bracketing(4), "grafting oracle agrees");

    // every choice of left or right per leaf count: only the uniform ones are unital
    auto left = bracketing_contraction(P, "left"), right = bracketing_contraction(P, "right");
    int passing = 0;
    for (int mask = 0; mask < 8; ++mask) {  // leaf counts 3, 4, 5; two leaves have one bracketing
        ContractionChoice g = left;
        for (int m = 3; m <= 5; ++m)
            if (mask >> (m - 3) & 1) {
                Tree p(1, std::vector<Tree>(m, Tree()));
                g.table[tree_key(p)] = right.table.at(tree_key(p));
            }
        auto r = check_unital(P, g);
        const bool uniform = mask == 0 || mask == 7;
        t.expect(r.ok() == uniform, "mixed choice " + std::to_string(mask));
        passing += r.ok();
        if (!uniform && !r.ok()) {
            const auto& w = r.violations[0].witness;
            auto inc = parse_morphism_key(w["inclusion"].get<std::string>());
            t.expect(r.violations[0].law == "unitality" && is_inclusion(inc) &&
                         leaf_count(inc.source) < leaf_count(inc.target) && w["restricted"] != w["chosen"],
                     "unit-insertion witness for mask " + std::to_string(mask));
        }
    }
    t.expect(passing == 2, "exactly two unital choices");
    for (const char* mode : {"parity", "parity-rl"}) {
        auto r = check_unital(P, bracketing_contraction(P, mode));
        t.expect(!r.ok() && r.has_law("unitality"), std::string(mode) + " fails");
    }
}

// --------------------------------------------------------------- 2. shuffles

void shuffle_example(Tally& t) {
    Tree p = parse_tree("[[*,*],[],[*],[*,*,*,*]]");
    t.expect(column_sizes(p) == std::vector<int>{2, 0, 1, 4}, "column sizes");
    auto os = shuffle_orders(p);
    const long multinomial = oracles::factorial(7) / (oracles::factorial(2) * oracles::factorial(4));
    t.expect(os.size() == 105 && multinomial == 105, "105 orders");
    t.expect(oracles::brute_orders(p) == 105, "permutation filter agrees");
    t.expect(std::set<ShuffleOrder>(os.begin(), os.end()).size() == os.size(), "orders are distinct");
    for (const char* n : {"col-lr", "col-rl"}) {
        auto r = check_scheme_unital(named_scheme(n), 6);
        t.expect(r.ok() && r.instances > 0, std::string(n) + " is unit-compatible");
    }
    auto r = check_scheme_unital(named_scheme("row-reading"), 6);
    t.expect(!r.ok() && r.has_law("unit-compatibility"), "row reading fails");
    TreeMorphism f{parse_tree("[[*],[*]]"), parse_tree("[[*,*],[*,*]]"), {{0}, {0, 1}, {1, 2}}};
    auto w = scheme_restriction_violation(named_scheme("row-reading"), f);
    t.expect(w.has_value() && (*w)["order_small"] == json::parse("[[0,0],[1,0]]") &&
                 (*w)["restricted"] == json::parse("[[1,0],[0,0]]"),
             "(f,g) against (g,f)");
    if (!r.ok()) {
        const auto& v = r.violations[0].witness;
        t.expect(v["order_small"] == json::parse("[[0,0],[1,0]]") && v["restricted"] == json::parse("[[1,0],[0,0]]"),
                 "reported witness swaps the two cells");
    }
}

// ------------------------------------------------------- 3. unique fillers

void unique_fillers(Tally& t) {
    long trees = 0, disagreements = 0, unique = 0, missing = 0;
    for (std::uint64_t seed = 1; seed <= 240; ++seed) {
        auto c = random_collection(seed, 2 + static_cast<int>(seed % 2), 4, 2);
        t.expect(validate(c).ok(), "random collection " + std::to_string(seed) + " validates");
        for (const auto& p : c.trees()) {
            auto rep = unique_filler_report(c, p);
            auto rlp = oracles::brute_rlp(c, p);
            ++trees;
            disagreements += rep.exists != rlp.phi;
            disagreements += (rep.exists && rep.unique) != (rlp.phi && rlp.phi_prime);
            unique += rep.exists && rep.unique;
            missing += !rep.exists;
        }
    }
    t.expect(disagreements == 0, std::to_string(disagreements) + " disagreements");
    t.expect(unique > 0 && missing > 0 && trees > 1000, "both outcomes occur");
}

// ------------------------------------------------------------ 4. h and r

void adjunction(Tally& t) {
    const int bound = 5;
    auto T1 = terminal_operad(1), T2 = terminal_operad(2), B = bracketing_operad();
    auto hB = apply_h(B, bound + 1);
    for (const auto& [A, X] : std::vector<std::pair<OperadPtr, OperadPtr>>{{T1, T2}, {hB, B}}) {
        auto r = check_adjunction(A, X, bound);
        t.expect(r.ok() && r.instances > 0, "adjunction for " + X->name());
    }
    t.expect(check_rh_identity(B, bound).ok(), "rh = id on bracketing");
    t.expect(check_nu_r_identity(B, bound).ok(), "nu r = id on bracketing");

    // gamma' along h
    auto g2 = forced(*T2, bound + 1);
    auto hT2 = derive_pointing(*apply_h(T2, bound + 1), bound);
    auto l2 = lift_contraction_h(T2, g2, bound);
    t.expect(check_contraction(hT2, l2).ok() && check_unital(hT2, l2).ok(), "gamma' on h(terminal-2)");
    auto PB = derive_pointing(*B, bound + 1);
    auto hP = derive_pointing(*hB, bound);
    for (const char* mode : {"left", "right"}) {
        auto lifted = lift_contraction_h(B, bracketing_contraction(PB, mode), bound);
        t.expect(check_contraction(hP, lifted).ok() && check_unital(hP, lifted).ok(),
                 std::string("gamma' of ") + mode + " bracketing");
    }
    // psi' along r
    auto psi = lift_contraction_r(T1, forced(*T1, bound), bound);
    auto rT1 = derive_pointing(*apply_r(T1, bound), bound);
    t.expect(check_contraction(rT1, psi).ok() && check_unital(rT1, psi).ok(), "psi' on r(terminal-1)");
    auto rB = derive_pointing(*apply_r(B, bound), bound);
    for (const char* mode : {"left", "right"}) {
        auto lifted = lift_contraction_r(B, bracketing_contraction(derive_pointing(*B, bound - 1), mode), bound);
        t.expect(check_contraction(rB, lifted).ok() && check_unital(rB, lifted).ok(),
                 std::string("psi' of ") + mode + " bracketing");
    }
    // nu against chosen contractions
    t.expect(check_nu_contraction(compute_nu(T2, bound), forced(*T2, bound), bound).ok(), "nu contraction terminal-2");
    auto nuB = compute_nu(B, bound);
    for (const char* mode : {"left", "right"}) {
        auto r = check_nu_contraction(nuB, bracketing_contraction(derive_pointing(*B, bound), mode), bound);
        t.expect(r.ok() && r.instances > 0, std::string("nu contraction ") + mode);
    }
}

// ----------------------------------------------------------------- 5. Gamma

void gamma_construction(Tally& t) {
    auto T = terminal_multicategory(4, 1);
    // chains have at most 4 objects, so every path fits in bound 4
    GammaFunctor G(T, 4);
    long chains = 0;
    for (int k = 1; k <= 3; ++k) {
        int combos = 1;
        for (int i = 0; i < k; ++i) combos *= 3;
        for (int code = 0; code < combos; ++code) {
            std::vector<int> sizes;
            for (int i = 0, c = code; i < k; ++i, c /= 3) sizes.push_back(c % 3 + 1);
            auto X = oracles::chain(sizes);
            t.expect(check_path_like(G, X, 4).ok(), "pi bijective on a chain");
            std::vector<Family> xs;
            for (int s : sizes) xs.push_back(Family{{fixtures::labels("x", s)}});
            t.expect(check_Ebar_roundtrip(T, xs, 8).ok(), "Ebar(Gamma E) = E");
            ++chains;
        }
    }
    auto C = one_arrow_multicategory();
    for (const auto& xs : std::vector<std::vector<Family>>{
             {Family{{fixtures::labels("p", 2), fixtures::labels("q", 1)}}},
             {Family{{fixtures::labels("p", 1), {}}}, Family{{{}, fixtures::labels("q", 2)}}},
             {Family{{fixtures::labels("p", 2), fixtures::labels("q", 2)}}, Family{{fixtures::labels("r", 1), {}}},
              Family{{{}, fixtures::labels("s", 1)}}}})
        t.expect(check_Ebar_roundtrip(C, xs, 8).ok(), "Ebar(Gamma E) = E for the one-arrow multicategory");
    long graphs = 0;
    for (int n = 1; n <= 4; ++n)
        for (const auto& X : oracles::all_dags(n)) {
            auto r = check_monad_laws(T, X, 8);
            t.expect(r.ok(), "monad laws");
            auto g = gamma_apply(T, X, 8);
            bool sizes = g.exact;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) sizes = sizes && g.graph.at(a, b, 0).size() == oracles::path_product_sum(X, a, b);
            t.expect(sizes, "hom sizes are path-product sums");
            ++graphs;
        }
    t.expect(chains == 39 && graphs == 1 + 2 + 8 + 64, "instance counts");
}

// ---------------------------------------------------- 6. lifting vs convolution

void lifting(Tally& t) {
    auto C = one_arrow_multicategory(4);
    auto fs = fixtures::small_functors();
    int max_stage = 0;
    auto run = [&](const std::vector<LinFunctor>& xs) {
        auto lt = lift_multitensor(C, xs, 16);
        t.expect(lt.lift.stabilized && lt.report.ok(), "stabilizes within 16 stages");
        max_stage = std::max(max_stage, lt.lift.stage);
        t.expect(day_compare(C, xs, 16).ok(), "lifted tensor and convolution agree");
    };
    for (const auto& X : fs) run({X});
    for (const auto& X : fs)
        for (const auto& Y : fs) run({X, Y});
    t.expect(max_stage >= 1, "some instance needs a later stage");

    // one object, one multimap per arity: plain sets
    auto E1 = terminal_multicategory(4, 1);
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b) {
            std::vector<LinFunctor> xs{LinFunctor{Family{{fixtures::labels("a", a)}}, {}},
                                       LinFunctor{Family{{fixtures::labels("b", b)}}, {}}};
            t.expect(day_compare(E1, xs, 16).ok(), "trivial linear part");
        }

    std::mt19937 rng(2024);
    for (int run_no = 0; run_no < 50; ++run_no) {
        const int k = 1 + static_cast<int>(rng() % 3);
        std::vector<Family> ys;
        for (int i = 0; i < k; ++i)
            ys.push_back(Family{{fixtures::labels("d" + std::to_string(i) + "_", rng() % 3),
                                 fixtures::labels("e" + std::to_string(i) + "_", rng() % 3)}});
        t.expect(recover_on_free(C, ys, 16).ok(), "free run " + std::to_string(run_no));
    }
}

// -------------------------------------------------------------- 7. mutations

void mutations(Tally& t) {
    // check_operad: one substitution entry of the bracketing table
    auto table = materialize(*bracketing_operad(), 4);
    t.expect(check_operad(*table, 4).ok(), "bracketing table passes");
    std::vector<std::string> keys;
    for (const auto& [k, v] : table->table) {
        auto f = parse_morphism_key(k.substr(0, k.find('\x1f')));
        if (table->ops(f.source).size() >= 2) keys.push_back(k);
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const auto& k = keys[rng() % keys.size()];
        auto ops = table->ops(parse_morphism_key(k.substr(0, k.find('\x1f'))).source);
        const Op old = table->table[k];
        std::vector<Op> others;
        for (const auto& o : ops)
            if (o != old) others.push_back(o);
        table->table[k] = others[rng() % others.size()];
        t.expect(!check_operad(*table, 4).ok(), "operad mutation " + std::to_string(i));
        table->table[k] = old;
    }

    // check_unital: one filler of the left bracketing choice
    auto P = derive_pointing(*bracketing_operad(), 5);
    auto left = bracketing_contraction(P, "left");
    t.expect(check_unital(P, left).ok(), "left choice passes");
    std::vector<std::pair<std::string, std::pair<Op, Op>>> entries;
    for (const auto& [key, m] : left.table)
        for (const auto& [ab, x] : m)
            if (P.ops(parse_tree(key)).size() >= 2 && parse_tree(key).stage == 1) entries.push_back({key, ab});
    for (int i = 0; i < 20; ++i) {
        const auto& [key, ab] = entries[rng() % entries.size()];
        auto g = left;
        Op& x = g.table[key][ab];
        std::vector<Op> others;
        for (const auto& o : P.ops(parse_tree(key)))
            if (o != x) others.push_back(o);
        x = others[rng() % others.size()];
        t.expect(check_contraction(P, g).ok(), "mutated choice is still a contraction");
        t.expect(!check_unital(P, g).ok(), "unital mutation " + std::to_string(i));
    }

    // check_nu_operadic: one entry of the pointing behind nu
    auto B = apply_r(bracketing_operad(), 4);
    auto nu = compute_nu(B, 4);
    t.expect(check_nu_operadic(nu, 4).ok(), "nu passes");
    std::vector<std::pair<std::string, Op>> cands;
    for (const auto& p : nu.pointing.trees())
        for (size_t i = 0; i < p.kids.size(); ++i) {
            if (p.kids[i].stage == 0) continue;
            auto f = canonical_inclusion(p, static_cast<int>(i));
            auto it = nu.pointing.act.find(morphism_key(f));
            if (it == nu.pointing.act.end() || nu.pointing.ops(f.source).size() < 2) continue;
            for (const auto& [b, x] : it->second) cands.push_back({it->first, b});
        }
    t.expect(!cands.empty(), "pointing has entries to mutate");
    for (int i = 0; i < 20 && !cands.empty(); ++i) {
        const auto& [key, b] = cands[rng() % cands.size()];
        auto Q = nu.pointing;
        auto ops = Q.ops(parse_morphism_key(key).source);
        Op& v = Q.act[key][b];
        std::vector<Op> others;
        for (const auto& o : ops)
            if (o != v) others.push_back(o);
        v = others[rng() % others.size()];
        t.expect(!check_nu_operadic(nu_from_pointing(B, Q, 4), 4).ok(), "nu mutation " + std::to_string(i));
    }
}

// ------------------------------------------------------------ 8. tree kernel

void tree_kernel(Tally& t) {
    long inverse = 0, assoc = 0;
    for (int k = 1; k <= 3; ++k) {
        auto ts = enumerate_trees(k, 5);
        for (const auto& p : ts)
            for (const auto& q : ts)
                for (const auto& f : enumerate_morphisms(p, q)) {
                    t.expect(oracles::inverse_pair_holds(f), "inverse pair " + morphism_key(f));
                    ++inverse;
                }
    }
    for (int k = 1; k <= 2; ++k) {
        auto ts = enumerate_trees(k, 5);
        for (const auto& q : ts)
            for (const auto& r : ts)
                for (const auto& g : enumerate_morphisms(q, r))
                    for (const auto& p : ts)
                        for (const auto& f : enumerate_morphisms(p, q)) {
                            t.expect(oracles::composite_fibres_agree(f, g), "associativity " + morphism_key(f));
                            ++assoc;
                        }
    }
    t.expect(inverse > 0 && assoc > 0, "instances");
    t.expect(enumerate_trees(1, 4).size() == 5, "5 stage-1 trees with at most 4 nodes");
    for (int k = 1; k <= 4; ++k)
        for (int n = 0; n <= 7; ++n) {
            auto c = oracles::exact_counts(k, n);
            t.expect(static_cast<long>(enumerate_trees(k, n).size()) == std::accumulate(c.begin(), c.end(), 0L),
                     "tree count k=" + std::to_string(k) + " n=" + std::to_string(n));
        }
    for (int m = 1; m <= 9; ++m)
        t.expect(static_cast<long>(bracketings(m).size()) == oracles::catalan(m - 1), "Catalan " + std::to_string(m));
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<void(Tally&)>>> criteria = {
        {"bracketing contractions and the unit identity", bracketing_example},
        {"shuffle orders and schemes", shuffle_example},
        {"unique fillers against brute-force lifting", unique_fillers},
        {"h/r adjunction and contraction lifting", adjunction},
        {"Gamma construction", gamma_construction},
        {"lifted tensor against convolution", lifting},
        {"mutation coverage", mutations},
        {"tree kernel", tree_kernel},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    bool all = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(n)) continue;
        Tally t;
        auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(t);
        } catch (const std::exception& e) {
            t.failures.push_back(std::string("exception: ") + e.what());
        }
        std::printf("CRITERION %d %s  %s  (%ld checks, %.1f s)\n", n, t.ok() ? "PASS" : "FAIL", criteria[i].first,
                    t.checks, seconds_since(t0));
        for (const auto& f : t.failures) std::printf("    failed: %s\n", f.c_str());
        std::fflush(stdout);
        all = all && t.ok();
    }
    return all ? 0 : 1;
}
