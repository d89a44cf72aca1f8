#ifndef WMSO_PRINT_HPP
#define WMSO_PRINT_HPP

#include <string>

#include "wmso/formula.hpp"

namespace wmso {

// Deterministic one-line rendering of the core constructors. Reparsing the
// output yields a structurally equal formula.
std::string print_formula(const MsoPtr& f, const Session& session);
std::string print_formula(const StepPtr& f, const Session& session);
std::string print_formula(const CorePtr& f, const Session& session);

} // namespace wmso

#endif
