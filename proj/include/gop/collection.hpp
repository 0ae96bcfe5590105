#pragma once

// Tree-indexed operation sets with source/target maps, optionally reduced
// (linear fibres are singletons) and pointed (actions along inclusions).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gop/report.hpp"
#include "gop/tree.hpp"

namespace gop {

using Op = std::string;

enum class CollectionKind { normalized, reduced, pointed };

std::string kind_name(CollectionKind k);
CollectionKind parse_kind(const std::string& s);

struct Fibre {
    std::vector<Op> ops;               // sorted, duplicate free
    std::map<Op, Op> src, tgt;         // into the fibre at tr p; unused at stage 1
    bool operator==(const Fibre&) const = default;
};

// Name used for the implicit U_0 operation and for omitted linear fibres.
inline const Op kPoint = "*";
inline const Op kUnitOp = "1";

struct Collection {
    CollectionKind kind = CollectionKind::normalized;
    int dim = 0;
    int bound = 5;
    std::map<std::string, Fibre> fibres;                      // by tree_key
    std::map<std::string, std::map<Op, Op>> act;              // by morphism_key

    bool in_scope(const Tree& p) const;
    void require_scope(const Tree& p) const;
    Op point() const;
    std::vector<Op> ops(const Tree& p) const;
    bool contains(const Tree& p, const Op& a) const;
    Op src(const Tree& p, const Op& a) const;
    Op tgt(const Tree& p, const Op& a) const;
    // act(f)(a) for an inclusion f: q -> p and a in A_p.
    Op act_apply(const TreeMorphism& f, const Op& a) const;
    // All trees of stage 1..dim within the bound, by node count then key.
    std::vector<Tree> trees() const;
};

struct ParallelPair {
    Tree tree;
    Op a, b;
    bool operator==(const ParallelPair&) const = default;
};

Report validate(const Collection& c);
ParallelPair boundary_of(const Collection& c, const Tree& p, const Op& a);
std::vector<ParallelPair> parallel_pairs(const Collection& c, const Tree& p);

struct FillerReport {
    bool exists = true;
    bool unique = true;
    json witnesses = json::array();
};
FillerReport unique_filler_report(const Collection& c, const Tree& p);

Collection forget_pointing(const Collection& c);

// Seeded random normalized collection: fibre sizes up to max_ops, with
// boundaries drawn from the parallel pairs one stage down.
Collection random_collection(std::uint64_t seed, int dim, int bound, int max_ops = 3);

// Trees sorted by node count, then key.
std::vector<Tree> trees_by_size(int min_stage, int max_stage, int max_nodes);

}  // namespace gop
