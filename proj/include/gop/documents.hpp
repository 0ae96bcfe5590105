#pragma once

// JSON documents for every module, and the stock examples.  Every document is
// an object with a "type" field: collection, operad, contraction, scheme,
// multicategory or enriched (a multicategory with a graph and/or functors).
// Malformed documents raise gop::Error.

#include <optional>
#include <string>
#include <vector>

#include "gop/contraction.hpp"
#include "gop/enrich.hpp"
#include "gop/operad.hpp"

namespace gop {

json collection_to_json(const Collection& c);
Collection collection_from_json(const json& j);

// Rule-backed operads: {"rule": "terminal" | "rgr", "dim": n}, {"rule": "bracketing2"},
// {"rule": "h" | "r", "of": operad}.  Otherwise a collection with "units" and "subst".
json operad_rule(const std::string& rule, int dim = 0);
json operad_to_json(const TableOperad& t);
OperadPtr operad_from_json(const json& j, int bound);

json contraction_to_json(const ContractionChoice& g);
ContractionChoice contraction_from_json(const json& j);

json scheme_to_json(const ShuffleScheme& s);
ShuffleScheme scheme_from_json(const json& j);

// {"rule": "terminal", "max_arity", "min_arity"}, {"rule": "one-arrow", "max_arity"},
// {"rule": "free", "objects", "generators", "max_arity"}, or explicit tables.
json multicategory_to_json(const Multicategory& C);
Multicategory multicategory_from_json(const json& j);

// Families and graphs key their sets by object name of C.
json family_to_json(const Multicategory& C, const Family& f);
Family family_from_json(const Multicategory& C, const json& j);
json graph_to_json(const Multicategory& C, const Graph& g);
Graph graph_from_json(const Multicategory& C, const json& j);
json functor_to_json(const Multicategory& C, const LinFunctor& f);
LinFunctor functor_from_json(const Multicategory& C, const json& j);

struct Enriched {
    json multicategory_doc;
    Multicategory C;
    std::optional<Graph> graph;
    std::vector<LinFunctor> functors;
    std::vector<Family> families;
};
Enriched enriched_from_json(const json& j);

// terminal-<n>, rgr-<n>, bracketing2, shuffle-col-lr, shuffle-col-rl,
// shuffle-row-reading, one-arrow-multicat, chain-<k>.
std::vector<std::string> example_names();
json example_document(const std::string& name);

}  // namespace gop
