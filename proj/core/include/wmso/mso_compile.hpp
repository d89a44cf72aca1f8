#ifndef WMSO_MSO_COMPILE_HPP
#define WMSO_MSO_COMPILE_HPP

#include <optional>

#include "wmso/dfa.hpp"
#include "wmso/formula.hpp"

namespace wmso {

/// The universe automaton over the given tracks: nonempty words whose
/// first-order tracks each carry exactly one 1. Every compiled formula
/// DFA recognizes a subset of this language.
Dfa universe_dfa(const Alphabet& base, const std::vector<Variable>& tracks);

/// MSO-to-DFA compilation over the track-extended alphabet. The result is
/// the minimized complete DFA whose language is the set of well-formed
/// track encodings of the pointed words satisfying the formula; membership
/// of encode(pw) agrees with mso_holds for every pw covering the tracks.
Dfa compile_mso(const MsoPtr& f, const std::vector<Variable>& tracks, const Alphabet& base);

struct MsoWitness {
    ExtWord ext;
    PointedWord pointed;
};

/// Emptiness test of the compiled automaton. When satisfiable, returns the
/// shortest, lexicographically least witness (by extended-letter order),
/// decoded into a pointed word over the given tracks.
std::optional<MsoWitness> mso_sat(const MsoPtr& f, const std::vector<Variable>& tracks,
                                  const Alphabet& base);

/// Semantic entailment: every pointed word satisfying gamma satisfies f.
/// Decided exactly through automata.
bool mso_entails(const std::vector<MsoPtr>& gamma, const MsoPtr& f, const Alphabet& base);

/// Canonical track list for a set of variables (first-order before
/// second-order, each sorted by name).
std::vector<Variable> canonical_tracks(const std::set<Variable>& vars);

} // namespace wmso

#endif
