#pragma once

// Operads over tree-indexed collections: substitution along tree morphisms,
// the axiom checker, reducedness and the derived pointing.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gop/collection.hpp"

namespace gop {

class Operad {
public:
    virtual ~Operad() = default;
    virtual std::string name() const = 0;
    virtual int dim() const = 0;
    // Fibre at p, sorted.  Stage 0 is a singleton.
    virtual std::vector<Op> ops(const Tree& p) const = 0;
    virtual Op src(const Tree& p, const Op& a) const = 0;
    virtual Op tgt(const Tree& p, const Op& a) const = 0;
    virtual Op unit(int k) const = 0;
    // sigma_f(b; parts) for f: p -> q, b in A_q, parts[i] in the fibre over leaf i.
    // Inputs are assumed valid; see substitute_ops for the checked entry point.
    virtual Op subst(const TreeMorphism& f, const MorphismFibres& fib, const Op& b,
                     const std::vector<Op>& parts) const = 0;

    Op subst(const TreeMorphism& f, const Op& b, const std::vector<Op>& parts) const;
    bool contains(const Tree& p, const Op& a) const;
    // Iterated source/target down to stage r.
    Op boundary(const Tree& p, const Op& a, int r, bool source) const;
};

using OperadPtr = std::shared_ptr<const Operad>;

// Parts for tr f induced by parts for f, on the source (or target) side.
std::vector<Op> boundary_parts(const Operad& A, const TreeMorphism& f, const MorphismFibres& fib,
                               const std::vector<Op>& parts, bool source);

// Empty when parts lie in the fibre product, else a description.
std::string check_parts(const Operad& A, const MorphismFibres& fib, const std::vector<Op>& parts);

// All tuples in the fibre product over the truncated fibres.
std::vector<std::vector<Op>> compatible_tuples(const Operad& A, const MorphismFibres& fib);

// Checked substitution; throws gop::Error on arity, fibre-product or bound violations.
Op substitute_ops(const Operad& A, const TreeMorphism& f, const Op& b, const std::vector<Op>& parts,
                  int bound);

Report check_operad(const Operad& A, int bound);
bool is_reduced(const Operad& A, int bound);

// Explicit collection of A within the bound.
Collection to_collection(const Operad& A, int bound);

// Operad whose structure is stored in tables.
class TableOperad : public Operad {
public:
    std::string label = "table";
    Collection carrier;
    std::vector<Op> units;
    std::map<std::string, Op> table;   // by subst_key

    std::string name() const override { return label; }
    int dim() const override { return carrier.dim; }
    std::vector<Op> ops(const Tree& p) const override { return carrier.ops(p); }
    Op src(const Tree& p, const Op& a) const override { return carrier.src(p, a); }
    Op tgt(const Tree& p, const Op& a) const override { return carrier.tgt(p, a); }
    Op unit(int k) const override;
    using Operad::subst;
    Op subst(const TreeMorphism& f, const MorphismFibres& fib, const Op& b,
             const std::vector<Op>& parts) const override;
};

std::string subst_key(const TreeMorphism& f, const Op& b, const std::vector<Op>& parts);
std::shared_ptr<TableOperad> materialize(const Operad& A, int bound);

// act(f)(b) = sigma_f(b; units) for every inclusion between non-linear trees.
// Throws gop::Error when A is not reduced within the bound.
Collection derive_pointing(const Operad& A, int bound);

// Stock operads.
OperadPtr terminal_operad(int n);
OperadPtr rgr_operad(int n);
OperadPtr bracketing_operad();

// Bracketing words over 'x': all binary bracketings of m letters ("e" for m = 0).
std::vector<std::string> bracketings(int m);
std::string left_bracketing(int m);
std::string right_bracketing(int m);

}  // namespace gop
