#ifndef WMSO_DERIVED_HPP
#define WMSO_DERIVED_HPP

#include <optional>

#include "wmso/formula.hpp"

namespace wmso {

/// phi(Psi, r): holds at (w,sigma) iff the step formula evaluates to r.
/// phi(r,r) = true; phi(r',r) = !true; conditionals split on the guard.
MsoPtr build_phi_step(const StepPtr& psi, WeightId r);

/// phi_{Psi1,Psi2}: holds at a position iff both step formulas give the
/// same weight there. !true when the weight sets are disjoint, else the
/// disjunction over shared weights of phi(Psi1,r) & phi(Psi2,r).
MsoPtr build_prod_eq(const StepPtr& psi1, const StepPtr& psi2);

/// A core formula of shape sum_{X...} (phi ? prod_x Psi : zero), the
/// second-normal-form building block. Degenerate shapes are admitted:
/// a bare product reads as an empty sum prefix with guard true.
struct GuardedProduct {
    std::vector<Variable> sum_vars; // outermost first
    MsoPtr guard;
    Variable prod_var;
    StepPtr step;
};

std::optional<GuardedProduct> as_guarded_product(const CorePtr& f);

/// The multiplicity-domination formula Phi1 <=_l Phi2 for two
/// second-normal-form operands: a conjunction over m = 1..l of blocks
/// "any m distinct sum-variable tuples giving one weight string under Phi1
/// are matched by m distinct tuples giving that string under Phi2".
/// Requires the two sum prefixes to have equal length and componentwise
/// equal variable order (first/second).
MsoPtr build_leq_formula(const CorePtr& phi1, const CorePtr& phi2, std::size_t l);

} // namespace wmso

#endif
