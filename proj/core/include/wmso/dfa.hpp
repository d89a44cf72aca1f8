#ifndef WMSO_DFA_HPP
#define WMSO_DFA_HPP

#include <optional>
#include <tuple>
#include <vector>

#include "wmso/pointed_word.hpp"
#include "wmso/session.hpp"

namespace wmso {

struct AutomatonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Base alphabet extended with one bit track per variable. An extended
/// letter is (base letter, bit per track), encoded as
/// base_letter * 2^k + bits with track i at bit i. The numeric encoding is
/// the canonical extended-letter order: base letter major, bits minor.
struct TrackAlphabet {
    Alphabet base;
    std::vector<Variable> tracks;

    std::size_t num_letters() const { return base.size() << tracks.size(); }
    std::uint32_t encode(LetterId base_letter, std::uint32_t bits) const {
        return static_cast<std::uint32_t>((base_letter << tracks.size()) | bits);
    }
    LetterId base_of(std::uint32_t ext) const {
        return static_cast<LetterId>(ext >> tracks.size());
    }
    std::uint32_t bits_of(std::uint32_t ext) const {
        return ext & ((1u << tracks.size()) - 1u);
    }
    bool bit_of(std::uint32_t ext, std::size_t track_index) const {
        return (ext >> track_index) & 1u;
    }
    std::optional<std::size_t> track_index(const Variable& v) const;

    bool operator==(const TrackAlphabet&) const = default;
};

/// A word over the extended alphabet.
using ExtWord = std::vector<std::uint32_t>;

/// Track-encodes a pointed word: position i carries bit 1 on track v iff
/// sigma(v) = i (first-order) or i in sigma(v) (second-order). The
/// valuation must cover every track variable.
ExtWord encode_pointed_word(const PointedWord& pw, const TrackAlphabet& alphabet);

/// Inverse of encode_pointed_word; fails if a first-order track does not
/// carry exactly one 1.
PointedWord decode_ext_word(const ExtWord& w, const TrackAlphabet& alphabet);

/// Complete deterministic automaton over a track alphabet.
struct Dfa {
    TrackAlphabet alphabet;
    std::size_t initial = 0;
    std::vector<bool> final;                     // size num_states()
    std::vector<std::vector<std::uint32_t>> delta; // [state][letter]

    std::size_t num_states() const { return delta.size(); }
    std::uint32_t step(std::uint32_t q, std::uint32_t letter) const {
        return delta[q][letter];
    }
    bool accepts(const ExtWord& w) const;
};

struct Nfa {
    TrackAlphabet alphabet;
    std::vector<std::uint32_t> initial, final; // sorted, unique
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> transitions;
    std::size_t num_states = 0;
};

enum class BoolOp : std::uint8_t { conjunction, disjunction };

/// Flips acceptance; the result recognizes the set-theoretic complement
/// over the full extended alphabet.
Dfa complement(const Dfa& d);

/// Product automaton combining acceptance with the given connective.
Dfa product(const Dfa& a, const Dfa& b, BoolOp op);

/// Drops the named track from every letter; the result is nondeterministic.
Nfa project(const Dfa& d, const Variable& track);
Nfa project(const Nfa& n, const Variable& track);

/// Subset construction; the result is complete.
Dfa determinize(const Nfa& n);

/// Hopcroft minimization followed by canonical BFS renumbering; the result
/// is the unique minimal complete DFA, so equal languages give structurally
/// equal automata.
Dfa minimize(const Dfa& d);

/// Minimization refining an arbitrary initial partition (Moore classifier
/// support); `cls[q]` is the class label of state q. Returns the renumbered
/// automaton and the label of each new state.
std::pair<Dfa, std::vector<int>> minimize_with_classes(const Dfa& d, const std::vector<int>& cls);

/// Shortest accepted word, lexicographically least in extended-letter
/// order; nullopt when the language is empty.
std::optional<ExtWord> shortest_word(const Dfa& d);
std::optional<ExtWord> shortest_word(const Nfa& n);
bool is_empty(const Dfa& d);
bool is_empty(const Nfa& n);

bool language_equal(const Dfa& a, const Dfa& b);

/// JSON with states count, initial/final index arrays and transition
/// records carrying per-track bits.
std::string dfa_to_json(const Dfa& d);
std::string nfa_to_json(const Nfa& n);

} // namespace wmso

#endif
