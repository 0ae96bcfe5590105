#pragma once

// Left adjoint to the forgetful functor from E-categories to graphs of
// E_1-algebras, computed by the Q-sequence of reflexive coequalizers, and the
// lifted tensor read off sequence graphs.

#include <map>
#include <tuple>
#include <vector>

#include "gop/enrich.hpp"

namespace gop {

// Identity-on-objects map of graphs, per (a, b, colour).
using HomMap = std::map<std::tuple<int, int, int>, std::map<Elem, Elem>>;
Elem apply(const HomMap& m, int a, int b, int c, const Elem& e);

// Graph whose homs carry E_1-algebra structures (functors on the linear part).
struct AlgebraGraph {
    int objects = 0;
    std::map<std::pair<int, int>, LinFunctor> homs;
    Graph graph(const Multicategory& C) const;
};

AlgebraGraph sequence_algebra(const std::vector<LinFunctor>& xs);
// Hom-wise free E_1-algebras on Y.
AlgebraGraph free_algebra_graph(const Multicategory& C, const Graph& Y);

struct LiftResult {
    bool stabilized = false;
    int stage = 0;          // n with q_n bijective, or the stage bound
    Graph SX;               // Q_0
    Graph algebra;          // Q_n
    HomMap structure;       // q_n^{-1} v_n : S Q_n -> Q_n (when stabilized)
    HomMap q_less;          // S X -> Q_n
    Report report{"phi-shriek"};
};

// Q_0 = S X; q_0 coequalizes mu (S phi) and S x; v_{n+1} coequalizes
// S(q_n) mu and S v_n; q_{n+1} = v_{n+1} eta.  Stops when q_n is bijective on
// every hom or at stage_bound.  Throws when a Gamma evaluation is not exact or
// a hom is not an E_1-algebra.
LiftResult phi_shriek(const Multicategory& C, const AlgebraGraph& X, int stage_bound = 16, int path_bound = 8);

struct LiftedTensor {
    LinFunctor value;  // hom (0, k) with its unary action
    LiftResult lift;
    Report report{"lift-multitensor"};
};
LiftedTensor lift_multitensor(const Multicategory& C, const std::vector<LinFunctor>& xs, int stage_bound = 16,
                              int path_bound = 8);

// Lifted tensor of free E_1-algebras against E of the generators.
Report recover_on_free(const Multicategory& C, const std::vector<Family>& ys, int stage_bound = 16, int path_bound = 8);
// Lifted tensor against convolution: a natural bijection on classes.
Report day_compare(const Multicategory& C, const std::vector<LinFunctor>& xs, int stage_bound = 16, int path_bound = 8);

}  // namespace gop
