#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "enrich_fixtures.hpp"
#include "gop/error.hpp"
#include "gop/lifting.hpp"

using namespace gop;
using fixtures::labels;

namespace {

LinFunctor trivial(const ESet& s) { return LinFunctor{Family{{s}}, {}}; }

json seq(int k) {
    json p = json::array();
    for (int i = 0; i <= k; ++i) p.push_back(i);
    return p;
}

// x in X_1(c) goes to [[0,1],[1_c, x]] in the lifted tensor.
void check_unary_identity(const Multicategory& C, const LinFunctor& X) {
    auto lt = lift_multitensor(C, {X});
    REQUIRE(lt.report.ok());
    const int n = static_cast<int>(C.objects.size());
    for (int c = 0; c < n; ++c) {
        ESet img;
        for (const auto& x : X.values.at[c]) {
            Elem t = json::array({seq(1), json::array({C.maps[C.identities[c]].name, x})});
            img.push_back(apply(lt.lift.q_less, 0, 1, c, t));
        }
        normalize(img);
        CHECK(img.size() == X.values.at[c].size());
        CHECK(img == lt.value.values.at[c]);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g : C.linear(a, b))
                for (const auto& x : X.values.at[a]) {
                    auto up = [&](int c, const Elem& y) {
                        return apply(lt.lift.q_less, 0, 1, c,
                                     json::array({seq(1), json::array({C.maps[C.identities[c]].name, y})}));
                    };
                    CHECK(up(b, X.act(C, g, x)) == lt.value.act(C, g, up(a, x)));
                }
}

}  // namespace

TEST_CASE("trivial E_1 stabilizes at once and the lifted tensor is the tensor") {
    auto C = terminal_multicategory(4, 1);
    auto lt = lift_multitensor(C, {trivial(labels("a", 2)), trivial(labels("b", 3))});
    CHECK(lt.report.ok());
    CHECK(lt.lift.stabilized);
    CHECK(lt.lift.stage == 0);
    CHECK(lt.value.values.at[0].size() == 6);
    auto three = lift_multitensor(C, {trivial(labels("a", 1)), trivial(labels("b", 2)), trivial(labels("c", 2))});
    CHECK(three.report.ok());
    CHECK(three.value.values.at[0].size() == 4);
}

TEST_CASE("the lifted tensor has no lower homs and the report records stages") {
    auto C = one_arrow_multicategory(4);
    auto fs = fixtures::small_functors();
    auto lt = lift_multitensor(C, {fs[5], fs[9]});
    CHECK(lt.report.ok());
    for (const auto& [ab, f] : lt.lift.algebra.homs)
        if (ab.first > ab.second) CHECK(f.size() == 0);
    const auto& d = lt.lift.report.details;
    CHECK(d["monotone"].get<bool>());
    CHECK(d["stages"].size() == static_cast<size_t>(lt.lift.stage + 1));
}

TEST_CASE("k = 1 returns the algebra itself") {
    auto C = one_arrow_multicategory(4);
    for (const auto& X : fixtures::small_functors()) check_unary_identity(C, X);
}

TEST_CASE("k = 0 gives the nullary maps") {
    auto C = one_arrow_multicategory(4);
    auto lt = lift_multitensor(C, {});
    CHECK(lt.report.ok());
    CHECK(lt.value.values.size() == 0);
    CHECK(day_compare(C, {}).ok());
}

TEST_CASE("nullary maps make the construction leave the exact range") {
    auto C = terminal_multicategory(3, 0);
    CHECK_THROWS_AS(lift_multitensor(C, {trivial(labels("a", 1))}), Error);
}

TEST_CASE("non-algebras are rejected") {
    auto C = one_arrow_multicategory(4);
    auto X = fixtures::one_arrow_functor(2, 1, {0, 0});
    X.action["u"].erase(X.values.at[0][1]);
    CHECK_THROWS_AS(lift_multitensor(C, {X}), Error);
}

TEST_CASE("free algebra graphs lift to gamma of the generators") {
    auto C = one_arrow_multicategory(4);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        Graph Y;
        Y.objects = 3;
        Y.colours = 2;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                if (rng() % 3 == 0) continue;
                for (int c = 0; c < 2; ++c) {
                    int n = static_cast<int>(rng() % 3);
                    if (n) Y.set(a, b, c, labels("y" + std::to_string(a) + std::to_string(b) + std::to_string(c) + "_", n));
                }
            }
        auto L = phi_shriek(C, free_algebra_graph(C, Y));
        CHECK(L.report.ok());
        auto G = gamma_apply(C, Y, 8).graph;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 2; ++c) CHECK(L.algebra.at(a, b, c).size() == G.at(a, b, c).size());
    }
}

TEST_CASE("on free algebras the lifted tensor is E of the generators (50 seeded runs)") {
    auto C = one_arrow_multicategory(4);
    std::mt19937 rng(2024);
    for (int run = 0; run < 50; ++run) {
        const int k = 1 + static_cast<int>(rng() % 3);
        std::vector<Family> ys;
        for (int i = 0; i < k; ++i) {
            Family y{{labels("d" + std::to_string(i) + "_", rng() % 3), labels("e" + std::to_string(i) + "_", rng() % 3)}};
            ys.push_back(y);
        }
        auto rep = recover_on_free(C, ys);
        INFO("run " << run << ": " << rep.to_json().dump());
        CHECK(rep.ok());
        CHECK(rep.details["stabilized"].get<bool>());
    }
}

TEST_CASE("lifted tensor and convolution agree on small functors") {
    auto C = one_arrow_multicategory(4);
    auto fs = fixtures::small_functors();
    for (const auto& X : fs) CHECK(day_compare(C, {X}).ok());
    for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = 0; j < fs.size(); ++j) {
            auto rep = day_compare(C, {fs[i], fs[j]});
            INFO(i << "," << j << ": " << rep.to_json().dump());
            CHECK(rep.ok());
        }
}

TEST_CASE("a stage bound below the stabilizing stage is reported") {
    auto C = one_arrow_multicategory(4);
    auto fs = fixtures::small_functors();
    auto full = lift_multitensor(C, {fs[10], fs[10]});
    REQUIRE(full.lift.stage == 1);
    auto cut = lift_multitensor(C, {fs[10], fs[10]}, 0);
    CHECK_FALSE(cut.lift.stabilized);
    CHECK(cut.report.has_law("not-stabilized"));
}
