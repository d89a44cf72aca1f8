#ifndef WMSO_FORMULA_HPP
#define WMSO_FORMULA_HPP

#include <memory>
#include <set>
#include <vector>

#include "wmso/session.hpp"

namespace wmso {

struct MsoFormula;
struct StepFormula;
struct CoreFormula;
using MsoPtr = std::shared_ptr<const MsoFormula>;
using StepPtr = std::shared_ptr<const StepFormula>;
using CorePtr = std::shared_ptr<const CoreFormula>;

enum class Layer : std::uint8_t { mso, step, core };

/// MSO over finite nonempty words, core constructors only. Derived
/// connectives (or, implies, iff, exists, =, <) are desugared at
/// construction time.
struct MsoFormula {
    enum class Kind : std::uint8_t {
        truth,        // top
        letter_at,    // P_a(x)
        leq,          // x <= y
        membership,   // x in X
        negation,     // !phi
        conjunction,  // phi & psi
        forall_fo,    // forall x. phi
        forall_so,    // forall X. phi
    };

    Kind kind;
    LetterId letter = 0;   // letter_at
    Variable var;          // letter_at / leq / membership / quantifiers
    Variable var2;         // leq (rhs) / membership (the set)
    MsoPtr left, right;    // negation & quantifiers use left only
};

/// step-wMSO: a single weight or an MSO-guarded conditional.
struct StepFormula {
    enum class Kind : std::uint8_t { constant, conditional };

    Kind kind;
    WeightId weight = 0;           // constant
    MsoPtr guard;                  // conditional
    StepPtr then_branch, else_branch;
};

/// core-wMSO: multiset-valued layer.
struct CoreFormula {
    enum class Kind : std::uint8_t { zero, product, conditional, plus, sum_fo, sum_so };

    Kind kind;
    Variable var;                  // product / sum_fo / sum_so binder
    StepPtr step;                  // product body
    MsoPtr guard;                  // conditional
    CorePtr left, right;           // conditional branches / plus operands / sum body (left)
};

// Constructors. The mso_* family performs the desugaring listed in the
// grammar notes; everything bottoms out in the eight core constructors.
MsoPtr mso_true();
MsoPtr mso_false(); // !true
MsoPtr mso_letter(LetterId a, Variable x);
MsoPtr mso_leq(Variable x, Variable y);
MsoPtr mso_in(Variable x, Variable X);
MsoPtr mso_not(MsoPtr f);
MsoPtr mso_and(MsoPtr a, MsoPtr b);
MsoPtr mso_or(MsoPtr a, MsoPtr b);
MsoPtr mso_implies(MsoPtr a, MsoPtr b);
MsoPtr mso_iff(MsoPtr a, MsoPtr b);
MsoPtr mso_eq(Variable x, Variable y);
MsoPtr mso_lt(Variable x, Variable y);
MsoPtr mso_forall(Variable v, MsoPtr body);
MsoPtr mso_exists(Variable v, MsoPtr body);
MsoPtr mso_and_all(const std::vector<MsoPtr>& fs); // empty conjunction = true
MsoPtr mso_or_all(const std::vector<MsoPtr>& fs);  // empty disjunction = !true

StepPtr step_const(WeightId r);
StepPtr step_cond(MsoPtr guard, StepPtr t, StepPtr e);

CorePtr core_zero();
CorePtr core_product(Variable x, StepPtr body);
CorePtr core_cond(MsoPtr guard, CorePtr t, CorePtr e);
CorePtr core_plus(CorePtr a, CorePtr b);
CorePtr core_sum(Variable v, CorePtr body); // first- or second-order by v

// Structural equality.
bool equal(const MsoPtr& a, const MsoPtr& b);
bool equal(const StepPtr& a, const StepPtr& b);
bool equal(const CorePtr& a, const CorePtr& b);

// Free variables (binders remove their variable).
std::set<Variable> free_vars(const MsoPtr& f);
std::set<Variable> free_vars(const StepPtr& f);
std::set<Variable> free_vars(const CorePtr& f);

// All variables, free and bound.
std::set<Variable> all_vars(const MsoPtr& f);
std::set<Variable> all_vars(const StepPtr& f);
std::set<Variable> all_vars(const CorePtr& f);

// Renames free occurrences of `from` to `to`. Stops at a binder that
// re-introduces `from`; with alpha-unique formulas and a fresh `to` this is
// capture-free substitution, which is all the axioms need.
MsoPtr rename_free(const MsoPtr& f, const Variable& from, const Variable& to);
StepPtr rename_free(const StepPtr& f, const Variable& from, const Variable& to);
CorePtr rename_free(const CorePtr& f, const Variable& from, const Variable& to);

/// Weights that syntactically appear in a step formula, R(Psi), in
/// declared weight order.
std::vector<WeightId> weights_of(const StepPtr& f);

/// A name like `hint`, `hint1`, `hint2`, ... whose Variable (with the
/// order implied by the hint's case) avoids everything in `taken`.
Variable fresh_variable(const std::string& hint, const std::set<Variable>& taken);

/// True when no two binders in the formula share a variable and no binder
/// shadows a free variable - the normal form established by the parser.
bool alpha_unique(const MsoPtr& f);
bool alpha_unique(const StepPtr& f);
bool alpha_unique(const CorePtr& f);

} // namespace wmso

#endif
