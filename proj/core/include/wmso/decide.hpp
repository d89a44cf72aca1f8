#ifndef WMSO_DECIDE_HPP
#define WMSO_DECIDE_HPP

#include <optional>

#include "wmso/eval.hpp"
#include "wmso/wa.hpp"

namespace wmso {

struct EqualityDecision {
    bool equal = true;
    std::optional<PointedWord> counterexample;
};

/// Decides Phi1 ~_Gamma Phi2 exactly: both guarded formulas
/// (and-of-gamma ? Phi_i : zero) are compiled over the joint track alphabet
/// and handed to the polynomial-time automata equivalence; witnesses are
/// decoded back into pointed words (which satisfy Gamma by the guard
/// construction).
EqualityDecision decide_equality(const std::vector<MsoPtr>& gamma, const CorePtr& phi1,
                                 const CorePtr& phi2, const Session& session);

struct BoundedSatResult {
    std::optional<PointedWord> witness;
    std::size_t bound = 0; // the searched bound when no witness was found
};

/// Bounded equational satisfiability for core-wMSO: searches all pointed
/// words of length <= max_len for one where the two formulas evaluate to
/// the same multiset. The negative answer only speaks up to the bound -
/// the unbounded problem is undecidable.
BoundedSatResult equational_sat_bounded(const CorePtr& phi1, const CorePtr& phi2,
                                        std::size_t max_len, const Session& session);

/// Exact equational satisfiability for step-wMSO via MSO satisfiability of
/// the shared-weight agreement disjunction.
std::optional<PointedWord> step_equational_sat(const StepPtr& psi1, const StepPtr& psi2,
                                               const Session& session);

/// Weighted model checking: does the formula evaluate to the given value
/// on the given pointed word?
bool weighted_model_check(const StepPtr& psi, const PointedWord& pw, WeightId v);
bool weighted_model_check(const CorePtr& phi, const PointedWord& pw, const WeightMultiset& v);

/// r-satisfiability for step-wMSO: a pointed word on which the formula
/// evaluates to r, decided exactly via phi(Psi,r).
std::optional<PointedWord> r_sat_step(const StepPtr& psi, WeightId r, const Session& session);

} // namespace wmso

#endif
