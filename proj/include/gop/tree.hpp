#pragma once

// k-stage trees (globular pasting schemes) in nested form, their level form,
// and tree morphisms with fibres, substitution and inclusions.
//
// Nodes are addressed by (height, index) where index runs left to right
// within a level.  Leaves are ordered depth-first, left to right.

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "gop/error.hpp"

namespace gop {

struct Tree {
    int stage = 0;
    std::vector<Tree> kids;

    Tree() = default;
    Tree(int s, std::vector<Tree> k) : stage(s), kids(std::move(k)) {}

    bool operator==(const Tree&) const = default;
    std::strong_ordering operator<=>(const Tree& o) const;
};

struct NodeId {
    int height = 0;
    int index = 0;
    bool operator==(const NodeId&) const = default;
    auto operator<=>(const NodeId&) const = default;
};

// Accepts `*`, `[t1,...,tm]` and an optional `@k` suffix fixing the stage.
// Without the suffix the stage is inferred: exact when the text contains `*`,
// otherwise the bracket depth.
Tree parse_tree(std::string_view text);
Tree parse_tree(std::string_view text, int stage);

std::string serialize(const Tree& p);
// serialize(p), plus "@k" when parse_tree would otherwise infer another stage.
std::string tree_key(const Tree& p);

Tree unit_tree(int k);                 // U_k
Tree truncate(const Tree& p, int r);   // tr^{stage-r}
Tree tr(const Tree& p);                // one step, stage >= 1
Tree suspend(const Tree& p);           // z
Tree bracket(const Tree& p);           // [p]: new root below the old one

int node_count(const Tree& p);         // nodes above the root
std::vector<int> level_counts(const Tree& p);  // nodes per height, root included
std::vector<NodeId> leaves(const Tree& p);
int leaf_count(const Tree& p);
bool is_linear(const Tree& p);
int nonlinear_height(const Tree& p);   // ht(p)

// Level form: parent[r][i] is the parent (at height r-1) of node i at height r,
// for 1 <= r <= stage.  parent[0] is empty.
struct LevelTree {
    int stage = 0;
    std::vector<std::vector<int>> parent;
    int count(int r) const { return r == 0 ? 1 : static_cast<int>(parent[r].size()); }
    bool operator==(const LevelTree&) const = default;
};

LevelTree to_levels(const Tree& p);
Tree from_levels(const LevelTree& l);

// Ancestor of node at the given lower height.
NodeId ancestor(const LevelTree& l, NodeId x, int height);
std::vector<int> children(const LevelTree& l, NodeId x);

struct TreeMorphism {
    Tree source;
    Tree target;
    std::vector<std::vector<int>> maps;  // maps[i]: source^(i) -> target^(i)
    bool operator==(const TreeMorphism&) const = default;
};

// Empty string when valid, otherwise a description of the first defect.
std::string check_morphism(const TreeMorphism& f);
void require_morphism(const TreeMorphism& f);

TreeMorphism identity_morphism(const Tree& p);
TreeMorphism compose(const TreeMorphism& g, const TreeMorphism& f);  // g after f
TreeMorphism truncate(const TreeMorphism& f);                        // tr f
TreeMorphism bracket(const TreeMorphism& f);                         // [f]
TreeMorphism terminal_morphism(const Tree& p);                       // p -> U_k

struct Substitution {
    Tree tree;
    TreeMorphism morphism;
};

// Substitutes parts[i] at the i-th leaf of q.  Throws gop::Error on length,
// stage or truncation-compatibility mismatch.
Substitution substitute(const Tree& q, const std::vector<Tree>& parts);

// Height of the highest common ancestor of consecutive leaves i and i+1.
std::vector<int> junction_heights(const Tree& q);

struct MorphismFibres {
    std::vector<Tree> fibres;      // one per leaf of the target
    std::vector<Tree> truncated;   // fibres[i] truncated to junction_heights[i]
    // Per leaf of tr(target): the first and last target leaf above it, and
    // whether those sit one level higher (stage >= 1 only).
    std::vector<int> lower_first, lower_last;
    std::vector<char> lower_cut;
};

MorphismFibres analyze_morphism(const TreeMorphism& f);
// f^{-1} of y and its ancestors, a tree of stage height(y).
Tree preimage(const TreeMorphism& f, NodeId y);

// For composable f: p -> q and g: q -> r and a leaf z of r, the morphism
// (g f)^{-1}(z) -> g^{-1}(z) induced by f, with the q-index of every node of
// g^{-1}(z) per height.
struct FibreRestriction {
    TreeMorphism morphism;
    std::vector<std::vector<int>> target_nodes;
};
FibreRestriction restrict_over(const TreeMorphism& f, const TreeMorphism& g, NodeId z);
FibreRestriction restrict_over(const TreeMorphism& f, const TreeMorphism& g, NodeId z,
                               const LevelTree& lp, const LevelTree& lq, const LevelTree& lr);

bool is_inclusion(const TreeMorphism& f);

struct InclusionDecomposition {
    std::vector<int> subsequence;            // f^(1)
    std::vector<TreeMorphism> components;    // q_t -> p_{f(t)}
};

InclusionDecomposition decompose_inclusion(const TreeMorphism& f);
// [p_{idx_0},...] -> p
TreeMorphism subsequence_inclusion(const Tree& p, const std::vector<int>& idx);
// [q_1..q_l] -> [p_1..p_l] from componentwise morphisms q_t -> p_t of the given stage
TreeMorphism bracket_components(const std::vector<TreeMorphism>& comps, int stage);
// pi_i : [p_i] -> p, 0-based i
TreeMorphism canonical_inclusion(const Tree& p, int i);
// Restriction of f to the t-th height-1 node of its source: q_t -> p_{f(t)}.
TreeMorphism restrict_to_column(const TreeMorphism& f, int t);

std::vector<Tree> enumerate_trees(int stage, int max_nodes);
std::vector<Tree> enumerate_trees_upto(int max_stage, int max_nodes);  // stages 0..max_stage
std::vector<TreeMorphism> enumerate_morphisms(const Tree& p, const Tree& q);
std::vector<TreeMorphism> enumerate_inclusions(const Tree& q, const Tree& p);

std::string morphism_key(const TreeMorphism& f);
TreeMorphism parse_morphism_key(std::string_view key);

}  // namespace gop
