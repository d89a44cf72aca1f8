#ifndef WMSO_PROOF_HPP
#define WMSO_PROOF_HPP

#include <optional>

#include "wmso/eval.hpp"
#include "wmso/formula.hpp"

namespace wmso {

/// Equational rules: the equational-logic core, the step-wMSO table, the
/// core-wMSO(?,+) table and the full core-wMSO table. c11f..c16f are the
/// first-order analogues of c11..c16 (sum over a first-order variable).
enum class Rule : std::uint8_t {
    ref, sym, trans, cong_cond, cong_plus,
    s1, s2, s3, s4,
    c1, c2, c3, c4, c5, c6, c7, c8, c9, c10,
    c11, c12, c13, c14, c15, c16, c17,
    c11f, c12f, c13f, c14f, c15f, c16f,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);

/// Gamma |- lhs ~~ rhs with both sides in one layer.
struct Judgement {
    std::vector<MsoPtr> gamma; // set semantics, duplicates removed
    Layer layer = Layer::step;
    StepPtr step_lhs, step_rhs;
    CorePtr core_lhs, core_rhs;
};

Judgement judgement(std::vector<MsoPtr> gamma, StepPtr lhs, StepPtr rhs);
Judgement judgement(std::vector<MsoPtr> gamma, CorePtr lhs, CorePtr rhs);

// Gamma-set helpers (structural equality).
bool gamma_contains(const std::vector<MsoPtr>& gamma, const MsoPtr& f);
std::vector<MsoPtr> gamma_add(std::vector<MsoPtr> gamma, const MsoPtr& f);
bool gamma_equal(const std::vector<MsoPtr>& a, const std::vector<MsoPtr>& b);

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
    Rule rule;
    Judgement conclusion;
    std::vector<ProofPtr> premises;
    MsoPtr pivot;                    // S-rule / conditional-rule parameter, optional
    std::optional<long long> c17_l;  // the l of a C17 node
};

ProofPtr make_node(Rule rule, Judgement conclusion, std::vector<ProofPtr> premises = {},
                   MsoPtr pivot = nullptr, std::optional<long long> c17_l = std::nullopt);

struct CheckConfig {
    const Session* session = nullptr;
    long long c17_cap = 2;
};

struct CheckResult {
    bool accepted = true;
    std::string reason; // machine-readable head, empty when accepted
    std::string where;  // node path, e.g. "root/premise2"
};

/// Verifies every node: premise arities and shapes, conclusion shapes, and
/// all side conditions. MSO side conditions Gamma |- phi are discharged
/// semantically through the automata backend. A C17 node whose l exceeds
/// the configured cap is rejected with reason "c17_cap_exceeded".
CheckResult check_proof(const ProofPtr& p, const CheckConfig& config);

struct StepSynthesis {
    ProofPtr proof;                         // set iff equivalent
    std::optional<PointedWord> counterexample; // set iff not equivalent
};

/// Decides Psi1 ~_Gamma Psi2 exactly (via MSO satisfiability of a
/// disagreement formula) and either synthesizes a derivation following the
/// step-wMSO completeness argument - peel conditionals with S4, close
/// leaves by reflexivity or the inconsistency derivation - or reports a
/// pointed word on which the values differ inside Gamma.
StepSynthesis synth_step_proof(const std::vector<MsoPtr>& gamma, const StepPtr& psi1,
                               const StepPtr& psi2, const Session& session);

/// Deduction tactic: from accepted proofs of Gamma u {phi_m} |- lhs ~~ rhs
/// for every m and MSO validity of Gamma -> (phi_1 | ... | phi_n),
/// assembles a proof of Gamma |- lhs ~~ rhs by induction on n.
ProofPtr assemble_deduction(const std::vector<MsoPtr>& gamma,
                            const std::vector<MsoPtr>& disjuncts,
                            const std::vector<ProofPtr>& premise_proofs,
                            const Session& session);

} // namespace wmso

#endif
