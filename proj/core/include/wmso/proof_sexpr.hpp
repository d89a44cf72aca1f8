#ifndef WMSO_PROOF_SEXPR_HPP
#define WMSO_PROOF_SEXPR_HPP

#include "wmso/proof.hpp"

namespace wmso {

struct ProofFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Proof file format: one parenthesized group per node,
//   (S4 :phi "<mso>" :concl "{<mso> ; ...} |- <lhs> ~~ <rhs>" (<sub1>) (<sub2>))
// with :l <n> on C17 nodes. Formulas use the ordinary one-line syntax.
std::string proof_to_sexpr(const ProofPtr& p, const Session& session);
ProofPtr proof_from_sexpr(std::string_view text, const Session& session);

std::string judgement_to_text(const Judgement& j, const Session& session);
Judgement judgement_from_text(std::string_view text, const Session& session);

} // namespace wmso

#endif
