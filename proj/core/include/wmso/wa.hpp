#ifndef WMSO_WA_HPP
#define WMSO_WA_HPP

#include <optional>

#include "wmso/dfa.hpp"
#include "wmso/multiset.hpp"

namespace wmso {

/// Weighted automaton (Q, Delta, wgt, I, F) with abstract multiset
/// semantics. Transitions form an identity-bearing list: the list index is
/// the transition's identity, runs are sequences of indices, and duplicate
/// (from, letter, to, weight) entries are distinct. Projection inside the
/// formula compiler relies on this.
struct WaTransition {
    std::uint32_t from;
    std::uint32_t letter; // extended-letter index
    std::uint32_t to;
    WeightId weight;

    friend bool operator==(const WaTransition&, const WaTransition&) = default;
};

struct WeightedAutomaton {
    TrackAlphabet alphabet;
    WeightSet weights;
    std::size_t num_states = 0;
    std::vector<WaTransition> transitions;
    std::vector<std::uint32_t> initial, final; // sorted, unique

    bool operator==(const WeightedAutomaton&) const = default;
};

/// Per-state run multiplicities, the Q_i(S,w,gamma) vectors of the
/// bounded-equivalence argument.
struct CountVector {
    std::vector<Count> at;

    bool is_zero() const;
    friend bool operator==(const CountVector&, const CountVector&) = default;
};

CountVector indicator(std::size_t num_states, const std::vector<std::uint32_t>& states);

/// One counting step: state q receives the sum of vec[q'] over transitions
/// (q', letter, q) of the given weight; duplicate transitions contribute
/// additively.
CountVector count_step(const WeightedAutomaton& a, const CountVector& vec, std::uint32_t letter,
                       WeightId weight);

/// Multiset of weight strings of accepting runs on w (|w| >= 1).
WeightMultiset wa_eval(const WeightedAutomaton& a, const ExtWord& w);

struct WaDisagreement {
    ExtWord word;
    WeightString gamma;
    Count count1, count2;
};

struct WaEquivResult {
    bool equal = true;
    std::optional<WaDisagreement> witness;
};

/// Exhaustive comparison over all words of length 1..n, words in canonical
/// order, weight strings restricted to weights on either automaton's
/// transitions. Returns the first disagreement.
WaEquivResult equiv_bounded(const WeightedAutomaton& a1, const WeightedAutomaton& a2,
                            std::size_t n);

/// The polynomial-time equivalence decision: joint counting vectors over
/// Q1 + Q2 are extended letter-by-letter for |Q1|+|Q2| rounds, reduced to a
/// maximal linearly independent subset (exact rational arithmetic) after
/// each round, and rejected as soon as a vector's final-state sums differ
/// between the two automata. Each kept vector carries its generating word
/// and weight string, so the rejection immediately names a witness.
WaEquivResult equiv_poly(const WeightedAutomaton& a1, const WeightedAutomaton& a2);

std::string wa_to_json(const WeightedAutomaton& a);
WeightedAutomaton wa_from_json(std::string_view text);

/// Drops states that are not both reachable and co-reachable, then
/// renumbers the survivors in BFS order. Preserves wa_eval.
WeightedAutomaton prune_useful(const WeightedAutomaton& a);

} // namespace wmso

#endif
