#pragma once

// h and r between reduced operads of adjacent dimensions, the unit nu: B -> r h B,
// and lifting of contractions along both.
//
// h(B)_p = B_[p].  r(A)_p is the product of A over the columns p_i of p (the
// subtrees above the height-1 nodes).  A one-column tree carries its single
// component unchanged, so h(r(A)) and A agree as strings; other trees encode
// the tuple as a json array.

#include <functional>

#include "gop/contraction.hpp"
#include "gop/operad.hpp"

namespace gop {

Op encode_columns(const Tree& p, const std::vector<Op>& comps);
std::vector<Op> decode_columns(const Tree& p, const Op& x);

// Index bookkeeping for f: P -> Q of stage >= 1.
struct ColumnTable {
    std::vector<int> leaf_column;          // per leaf of Q: its height-1 ancestor, -1 for a root leaf
    std::vector<int> leaf_local;           // index among the leaves of that column
    std::vector<int> column;               // per column t of P: f(t)
    std::vector<int> position;             // rank of t among the columns over f(t)
    std::vector<std::vector<int>> over;    // per column j of Q: columns of P over j
};
ColumnTable column_table(const TreeMorphism& f);

// Both throw when the input is not reduced within the bound.
OperadPtr apply_h(OperadPtr B, int bound);
OperadPtr apply_r(OperadPtr A, int bound);

// Component at p is (B(pi_i) b)_i, read from the pointing of B.
struct Nu {
    OperadPtr B, hB, rhB;
    Collection pointing;
    Op apply(const Tree& p, const Op& b) const;
};
Nu compute_nu(OperadPtr B, int bound);
// Same with a given pointing table (for mutation tests).
Nu nu_from_pointing(OperadPtr B, Collection pointing, int bound);

using OpMap = std::function<Op(const Tree&, const Op&)>;
// Typing, boundaries, units and substitution of a fibrewise map A -> B.
Report check_operad_map(const Operad& A, const Operad& B, const OpMap& m, int bound);

// nu as an operad map, and again column by column through the projections.
Report check_nu_operadic(const Nu& nu, int bound);
// h(r(A)) = A: fibres, boundaries, units and substitution.
Report check_rh_identity(OperadPtr A, int bound);
// h(nu_B) = id.
Report check_h_nu_identity(const Nu& nu, int bound);
// nu_{r(A)} = id.
Report check_nu_r_identity(OperadPtr A, int bound);
// All of the above for A of dimension n and B of dimension n + 1.
Report check_adjunction(OperadPtr A, OperadPtr B, int bound);

// g'(p, a, b) = g([p], a, b) on h(B) within `bound`; g must cover B up to bound + 1.
// Throws when g is not unital or lacks an entry.
ContractionChoice lift_contraction_h(OperadPtr B, const ContractionChoice& g, int bound);
// psi'(p, a, b) = (psi(p_i, a_i, b_i))_i on r(A).
ContractionChoice lift_contraction_r(OperadPtr A, const ContractionChoice& psi, int bound);
// nu(g(p, a, b)) = g''(p, nu a, nu b) with g'' the r-lift of the h-lift, and
// pi_i g(p, a, b) = g([p_i], pi_i a, pi_i b) per column.
Report check_nu_contraction(const Nu& nu, const ContractionChoice& g, int bound);

}  // namespace gop
