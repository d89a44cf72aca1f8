#ifndef WMSO_COMPILE_CORE_HPP
#define WMSO_COMPILE_CORE_HPP

#include "wmso/mso_compile.hpp"
#include "wmso/wa.hpp"

namespace wmso {

/// Compiles prod_x Psi over the given outer tracks into an unambiguous
/// weighted automaton: exactly one accepting run per well-formed encoded
/// input, whose weight string is the position-wise step value. Inputs that
/// are ill-formed on a first-order track yield the empty multiset.
WeightedAutomaton compile_step_product(const StepPtr& psi, const Variable& x,
                                       const std::vector<Variable>& outer_tracks,
                                       const Session& session);

/// Structural compilation of core-wMSO to weighted automata over the
/// track-extended alphabet: wa_eval(compile_core(Phi), encode(pw)) equals
/// eval_core(Phi, pw) as exact multisets for every pointed word covering
/// the tracks. The result is pruned to useful states and BFS-renumbered.
WeightedAutomaton compile_core(const CorePtr& phi, const std::vector<Variable>& tracks,
                               const Session& session);

/// A sound word-length bound for Gamma-equivalence of two core formulas:
/// compiles (and-of-gamma ? Phi_i : zero) for both sides over the joint
/// track alphabet and returns n1 + n2 - 1 from the pruned state counts.
/// Agreement on all pointed words up to this length implies full
/// Gamma-equivalence.
std::size_t ell_bound(const CorePtr& phi1, const CorePtr& phi2,
                      const std::vector<MsoPtr>& gamma, const Session& session);

/// Run-preserving product of a weighted automaton with a complete DFA over
/// the same track alphabet: accepting runs on accepted words correspond
/// one-to-one, weight strings unchanged; rejected words give the empty
/// multiset.
WeightedAutomaton wa_dfa_product(const WeightedAutomaton& a, const Dfa& d);

/// Disjoint union (second operand's states shifted).
WeightedAutomaton wa_disjoint_union(const WeightedAutomaton& a, const WeightedAutomaton& b);

/// Identity-preserving projection: drops one track from every transition
/// letter; parallel transitions that collapse to the same letter stay
/// distinct.
WeightedAutomaton wa_erase_track(const WeightedAutomaton& a, const Variable& track);

} // namespace wmso

#endif
