#ifndef WMSO_NORMALIZE_HPP
#define WMSO_NORMALIZE_HPP

#include "wmso/formula.hpp"

namespace wmso {

/// True when the formula uses no sum binders (the ?,+ fragment).
bool in_plus_fragment(const CorePtr& f);

/// The ?,+ normal form: conditionals strictly outermost over sums of
/// products (N ::= phi ? N : N | M | zero; M ::= prod | M + M).
bool is_normal_form_plus(const CorePtr& f);

/// Second normal form: the binary + does not occur.
bool is_second_normal_form(const CorePtr& f);

/// Rewrites a ?,+ fragment formula into the N/M normal form by floating
/// conditionals over +. Semantics-preserving; rejects inputs with sums.
CorePtr normalize_plus(const CorePtr& f);

/// Rewrites any core formula into second normal form: a conditional tree
/// over leaves of shape sum_{Z...} (phi ? prod_x Psi : zero), eliminating
/// every + by the fresh-set-variable merge (disambiguators
/// "forall u. !(u in Z)" / "forall u. u in Z") and padding sum prefixes
/// with uniquely-satisfied dummies where needed.
CorePtr normalize_second(const CorePtr& f);

} // namespace wmso

#endif
