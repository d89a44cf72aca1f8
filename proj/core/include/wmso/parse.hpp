#ifndef WMSO_PARSE_HPP
#define WMSO_PARSE_HPP

#include <string>
#include <string_view>
#include <variant>

#include "wmso/formula.hpp"

namespace wmso {

struct ParseError : std::runtime_error {
    ParseError(std::string msg, std::size_t position)
        : std::runtime_error(std::move(msg)), position(position) {}
    std::size_t position; // byte offset into the input
};

using ParsedFormula = std::variant<MsoPtr, StepPtr, CorePtr>;

// Parses the concrete one-line syntax. Derived connectives are desugared,
// the `phi ? chi` sugar is expanded (default weight in the step layer,
// `zero` in the core layer) and bound variables are made alpha-unique.
// Passing alpha_normalize = false skips the renaming pass; proof files
// rely on this so that a subformula shared across judgement positions
// parses to one and the same tree.
MsoPtr parse_mso(std::string_view text, const Session& session, bool alpha_normalize = true);
StepPtr parse_step(std::string_view text, const Session& session, bool alpha_normalize = true);
CorePtr parse_core(std::string_view text, const Session& session, bool alpha_normalize = true);
ParsedFormula parse_formula(std::string_view text, Layer layer, const Session& session,
                            bool alpha_normalize = true);

/// 1-based line/column for an error offset, for diagnostics.
std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t position);

} // namespace wmso

#endif
