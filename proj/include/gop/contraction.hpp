#pragma once

// Contractions (chosen fillers for parallel pairs), their unitality along
// inclusions, strictness at the top stage, and the shuffle-scheme model of
// orders on 2-cell columns.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gop/collection.hpp"

namespace gop {

struct ContractionChoice {
    // normalized: every tree of stage 1..dim; reduced/pointed: non-linear trees only
    CollectionKind base = CollectionKind::pointed;
    std::map<std::string, std::map<std::pair<Op, Op>, Op>> table;  // by tree_key

    bool in_scope(const Tree& p) const;
    void set(const Tree& p, const Op& a, const Op& b, const Op& x);
    std::optional<Op> get(const Tree& p, const Op& a, const Op& b) const;
    bool operator==(const ContractionChoice&) const = default;
};

Report check_contraction(const Collection& A, const ContractionChoice& g);
// Fillers unique at every non-linear tree of the top stage.
Report check_top_strict(const Collection& A);
// act(f)(g(p,a,b)) = g(q, act(tr f)(a), act(tr f)(b)) for inclusions f: q -> p.
Report check_unital(const Collection& P, const ContractionChoice& g);

struct SearchResult {
    bool found = false;
    ContractionChoice choice;
    Report report{"search-contraction"};
};

// Depth-first over (tree, pair) in tree order then pair order; fillers tried in
// name order.  With `unital` the equations of check_unital prune the search.
SearchResult search_contraction(const Collection& A, bool unital, long max_steps = 10000000);

// Stage-1 bracketing choices for bracketing2: "left", "right", "parity"
// (left for even leaf counts, right for odd) or "parity-rl".  Top fillers are
// the unique ones.
ContractionChoice bracketing_contraction(const Collection& P, const std::string& mode);

// ---------------------------------------------------------------- shuffles

// Height-2 node of a stage-2 tree as (column, row), 0-based.
using Cell = std::pair<int, int>;
using ShuffleOrder = std::vector<Cell>;

// Column sizes of a stage-2 tree.
std::vector<int> column_sizes(const Tree& p);
std::vector<ShuffleOrder> shuffle_orders(const Tree& p);
bool is_compatible(const Tree& p, const ShuffleOrder& o);

struct ShuffleScheme {
    std::string name;
    std::map<std::string, ShuffleOrder> table;  // explicit orders, by tree_key
    ShuffleOrder order(const Tree& p) const;
};

// "col-lr", "col-rl", "row-reading"; "table" uses only the explicit table.
ShuffleScheme named_scheme(const std::string& name);
const std::vector<std::string>& scheme_names();

// Node index at height 2 of a cell, and back.
int cell_index(const Tree& p, Cell c);
Cell index_cell(const Tree& p, int i);

// Witness when s(p) restricted along f differs from s(q).
std::optional<json> scheme_restriction_violation(const ShuffleScheme& s, const TreeMorphism& f);
Report check_scheme_unital(const ShuffleScheme& s, int bound);

}  // namespace gop
