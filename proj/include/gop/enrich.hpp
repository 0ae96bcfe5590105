#pragma once

// Finite multicategories, the multitensor they induce on families over the
// object set, the free-category monad on family-enriched graphs, categories
// enriched in the multitensor, and convolution over the linear part.
//
// Elements of every set are json values.  The tensor tags its elements as
// [multimap, x_1, .., x_k]; Gamma tags them as [[x_0, .., x_n], tensor element].

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gop/report.hpp"

namespace gop {

using Elem = json;
using ESet = std::vector<Elem>;  // sorted, duplicate free

void normalize(ESet& s);
bool contains(const ESet& s, const Elem& e);

struct Multimap {
    std::string name;
    std::vector<int> in;
    int out = 0;
};

class Multicategory {
public:
    std::vector<std::string> objects;
    int max_arity = 4;
    std::vector<Multimap> maps;
    std::vector<int> identities;                              // per object
    std::map<std::pair<int, std::vector<int>>, int> table;   // composites of arity <= max_arity

    // Call after filling the fields above.
    void index();
    int object(const std::string& name) const;
    int find(const std::string& name) const;  // -1 when absent
    int at(const std::string& name) const;    // throws when absent
    int arity(int m) const { return static_cast<int>(maps[m].in.size()); }
    bool is_identity(int m) const;
    // C(in; out)
    const std::vector<int>& hom(const std::vector<int>& in, int out) const;
    // Multimaps with the given output, all arities.
    const std::vector<int>& into(int out) const;
    // Linear maps a -> b.
    const std::vector<int>& linear(int a, int b) const { return hom({a}, b); }
    // outer o (inner...); nullopt when the arity exceeds the bound.  Throws on mistyped input.
    std::optional<int> try_compose(int outer, const std::vector<int>& inner) const;
    int compose(int outer, const std::vector<int>& inner) const;

private:
    std::map<std::string, int> by_name_;
    std::map<std::string, int> by_object_;
    std::map<std::pair<std::vector<int>, int>, std::vector<int>> by_profile_;
    std::vector<std::vector<int>> by_out_;
};

// Unit, associativity, typing and totality of the table within the arity bound.
Report check_multicategory(const Multicategory& C);

// One object "*", one multimap m_k per arity min_arity..max_arity.
Multicategory terminal_multicategory(int max_arity, int min_arity = 0);

struct Generator {
    std::string name;
    std::vector<std::string> in;
    std::string out;
};
// Free multicategory on generators of positive arity whose unary generators
// form an acyclic graph.  Composites are named by terms, e.g. "m(u,_)".
Multicategory free_multicategory(const std::vector<std::string>& objects, const std::vector<Generator>& gens,
                                 int max_arity);
// Objects D, D'; u: D -> D' and m: (D', D') -> D', freely.
Multicategory one_arrow_multicategory(int max_arity = 4);

// ------------------------------------------------------------------ families

// A set per object of C.
struct Family {
    std::vector<ESet> at;
    bool operator==(const Family&) const = default;
    size_t size() const;
};

Family empty_family(const Multicategory& C);

// (E(X_1..X_k))(c) = sum over C(c_1..c_k; c) of the products of X_i(c_i).
Family eval_tensor(const Multicategory& C, const std::vector<Family>& xs);
// E(f_1..f_k) on one element.
using ElemMap = std::function<Elem(int colour, const Elem&)>;
Elem tensor_map(const Multicategory& C, const std::vector<ElemMap>& fs, const Elem& e);
int colour_of(const Multicategory& C, const Elem& tensor_elem);

// E(.., X ⊔ X', ..) against E(.., X, ..) ⊔ E(.., X', ..) at position i.
Report check_distributive(const Multicategory& C, const std::vector<Family>& xs, int i, const Family& extra);

// -------------------------------------------------------------------- graphs

struct Graph {
    int objects = 0;
    int colours = 1;
    std::map<std::pair<int, int>, Family> homs;  // absent homs are empty

    const ESet& at(int a, int b, int c) const;
    Family hom(int a, int b) const;
    void set(int a, int b, int c, ESet s);
    bool operator==(const Graph&) const = default;
};

// Object map plus hom maps; the hom map at (a, b, colour) sends X(a,b)(c) to Y(obj a, obj b)(c).
struct GraphMorphism {
    std::vector<int> obj;
    std::function<Elem(int a, int b, int c, const Elem&)> hom;
};

// The graph 0 -> 1 -> .. -> k with X_i between i-1 and i.
Graph sequence_graph(const std::vector<Family>& xs, int colours);
// Nonempty-hom digraph: cyclic (loops count) and longest path otherwise.
struct PathInfo {
    bool cyclic = false;
    int longest = 0;
};
PathInfo path_info(const Graph& X);

struct GammaResult {
    Graph graph;
    bool exact = true;
    json details = json::object();
};
// Gamma E X, summing over paths of length <= path_bound.  Exact when the
// nonempty-hom digraph is acyclic and its paths fit both bounds.
GammaResult gamma_apply(const Multicategory& C, const Graph& X, int path_bound);

// Monad structure of Gamma E, elementwise.
Elem gamma_unit(const Multicategory& C, int a, int b, int c, const Elem& h);
Elem gamma_mult(const Multicategory& C, const Elem& t);
// Gamma E on an identity-on-objects morphism given by its hom maps.
Elem gamma_map(const Multicategory& C, const std::function<Elem(int, int, int, const Elem&)>& f, const Elem& t);

// Unit and associativity of (Gamma E, eta, mu) on X, T X and T^2 X, and
// that all three graphs keep the objects of X.
Report check_monad_laws(const Multicategory& C, const Graph& X, int path_bound);

// Endofunctors of graphs over Set, for path-likeness and Ebar.
class GraphFunctor {
public:
    virtual ~GraphFunctor() = default;
    virtual std::string name() const = 0;
    virtual Graph apply(const Graph& X) const = 0;
    // T(f) on an element of T X(a, b)(c).
    virtual Elem map(const GraphMorphism& f, int a, int b, int c, const Elem& t) const = 0;
};

class GammaFunctor : public GraphFunctor {
public:
    GammaFunctor(const Multicategory& C, int path_bound) : C_(C), bound_(path_bound) {}
    std::string name() const override { return "gamma"; }
    Graph apply(const Graph& X) const override;
    Elem map(const GraphMorphism& f, int a, int b, int c, const Elem& t) const override;

private:
    const Multicategory& C_;
    int bound_;
};

// Every hom of T X is {"*"}.
class ConstantFunctor : public GraphFunctor {
public:
    std::string name() const override { return "constant"; }
    Graph apply(const Graph& X) const override;
    Elem map(const GraphMorphism&, int, int, int, const Elem&) const override { return "*"; }
};

// Tbar(X_1..X_k) = T(X_1..X_k)(0, k).
Family extract_Ebar(const GraphFunctor& T, const Multicategory& C, const std::vector<Family>& xs);
// pi_{T,X,a,b} built from T(xbar) over object sequences of length <= path_bound;
// reports "not-injective" / "not-surjective" per (a, b, colour).
Report check_path_like(const GraphFunctor& T, const Graph& X, int path_bound);
// Ebar(Gamma E)(xs) against E(xs) through [[0..k], e] -> e.
Report check_Ebar_roundtrip(const Multicategory& C, const std::vector<Family>& xs, int path_bound);

// --------------------------------------------------------------- E-categories

struct ECategory {
    Graph graph;
    // kappa per object sequence: tensor element [theta, h_1..h_n] -> hom element
    std::map<std::vector<int>, std::map<Elem, Elem>> kappa;
};

// Unit, associativity and totality for sequences of length <= bound, plus the
// action of unary sequences making each hom an E_1-algebra.
Report check_ecategory(const Multicategory& C, const ECategory& A, int bound);
// Gamma E Y with kappa from the multiplication.  Throws when Gamma is not exact.
ECategory free_ecategory(const Multicategory& C, const Graph& Y, int path_bound);
// kappa is constant on convolution classes and natural for the unary action.
Report check_descends(const Multicategory& C, const ECategory& A, int bound);

// --------------------------------------------------------------- convolution

// A functor on the linear part: sets per object and the action of every
// non-identity linear map (identities act trivially).
struct LinFunctor {
    Family values;
    std::map<std::string, std::map<Elem, Elem>> action;
    Elem act(const Multicategory& C, int f, const Elem& x) const;
};

Report check_functor(const Multicategory& C, const LinFunctor& F);
LinFunctor free_e1_algebra(const Multicategory& C, const Family& X);

struct Convolution {
    LinFunctor functor;                          // values are class representatives
    Family raw;                                  // eval_tensor of the underlying families
    std::vector<std::map<Elem, Elem>> klass;     // per colour: raw element -> representative
};
// Coend of C(c_1..c_k; -) x prod X_i(c_i) by union-find over the relation
// (theta o (f_1..f_k), x) ~ (theta, f_1 x_1, .., f_k x_k).  Throws on non-functorial input.
Convolution convolve(const Multicategory& C, const std::vector<LinFunctor>& xs);

}  // namespace gop
