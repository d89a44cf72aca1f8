#ifndef WMSO_EVAL_HPP
#define WMSO_EVAL_HPP

#include <functional>
#include <optional>
#include <variant>

#include "wmso/formula.hpp"
#include "wmso/multiset.hpp"
#include "wmso/pointed_word.hpp"

namespace wmso {

// Reference evaluator: direct enumeration semantics on pointed words. A
// free variable not covered by the valuation is a hard error; surplus
// assignments are ignored.
bool mso_holds(const MsoPtr& f, const PointedWord& pw);
WeightId eval_step(const StepPtr& f, const PointedWord& pw);
WeightMultiset eval_core(const CorePtr& f, const PointedWord& pw);

/// pw satisfies every formula of gamma (empty gamma: every pointed word).
bool satisfies_all(const std::vector<MsoPtr>& gamma, const PointedWord& pw);

/// Enumerates every pointed word with 1 <= |w| <= max_len whose valuation
/// covers exactly `vars`, in canonical order: length, then word
/// (lexicographic by letter index), then variable values (variables in
/// canonical order, later variables varying fastest; first-order positions
/// ascending, second-order subsets in binary counting order). Stops early
/// when the visitor returns false.
void enumerate_pointed_words(const Alphabet& alphabet, const std::set<Variable>& vars,
                             std::size_t max_len,
                             const std::function<bool(const PointedWord&)>& visit);

struct GammaEquivResult {
    bool equal = true;
    std::optional<PointedWord> witness;
};

/// Bounded semantic Gamma-equivalence oracle: compares chi1 and chi2 (same
/// layer) on every pointed word of length <= max_len that satisfies gamma;
/// returns the first differing pointed word in enumeration order.
GammaEquivResult gamma_equiv_bounded(const std::vector<MsoPtr>& gamma, const StepPtr& chi1,
                                     const StepPtr& chi2, std::size_t max_len,
                                     const Alphabet& alphabet);
GammaEquivResult gamma_equiv_bounded(const std::vector<MsoPtr>& gamma, const CorePtr& chi1,
                                     const CorePtr& chi2, std::size_t max_len,
                                     const Alphabet& alphabet);

} // namespace wmso

#endif
