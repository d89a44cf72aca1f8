#ifndef WMSO_POINTED_WORD_HPP
#define WMSO_POINTED_WORD_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wmso/session.hpp"

namespace wmso {

/// A nonempty word together with a valuation of first- and second-order
/// variables. Positions are 1-based, matching {1, ..., |w|}.
struct PointedWord {
    std::vector<LetterId> word;
    std::map<Variable, std::size_t> fo_val;
    std::map<Variable, std::set<std::size_t>> so_val;

    std::size_t length() const { return word.size(); }
    PointedWord with_fo(const Variable& x, std::size_t i) const;
    PointedWord with_so(const Variable& X, std::set<std::size_t> I) const;

    /// The variables the valuation covers.
    std::set<Variable> assigned() const;

    bool operator==(const PointedWord&) const = default;

    /// Text format: `word=abaa; x=3; y=4; X={1,4}`.
    static PointedWord from_text(std::string_view text, const Session& session);
    std::string to_text(const Session& session) const;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A free variable the valuation does not cover.
struct UncoveredVariableError : EvalError {
    using EvalError::EvalError;
};

} // namespace wmso

#endif
