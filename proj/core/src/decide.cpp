#include "wmso/decide.hpp"

#include "wmso/compile_core.hpp"
#include "wmso/derived.hpp"
#include "wmso/mso_compile.hpp"

namespace wmso {

EqualityDecision decide_equality(const std::vector<MsoPtr>& gamma, const CorePtr& phi1,
                                 const CorePtr& phi2, const Session& session) {
    std::set<Variable> vars = free_vars(phi1);
    for (const auto& v : free_vars(phi2)) vars.insert(v);
    for (const auto& g : gamma)
        for (const auto& v : free_vars(g)) vars.insert(v);
    std::vector<Variable> tracks = canonical_tracks(vars);
    MsoPtr guard = mso_and_all(gamma);
    WeightedAutomaton a1 = compile_core(core_cond(guard, phi1, core_zero()), tracks, session);
    WeightedAutomaton a2 = compile_core(core_cond(guard, phi2, core_zero()), tracks, session);
    WaEquivResult r = equiv_poly(a1, a2);
    if (r.equal) return {};
    PointedWord pw = decode_ext_word(r.witness->word, a1.alphabet);
    // the guard construction keeps non-Gamma words at the empty multiset on
    // both sides, so the witness must lie inside Gamma and differ
    if (!satisfies_all(gamma, pw) || eval_core(phi1, pw) == eval_core(phi2, pw))
        throw EvalError("internal: equivalence witness fails to refute");
    return {false, pw};
}

BoundedSatResult equational_sat_bounded(const CorePtr& phi1, const CorePtr& phi2,
                                        std::size_t max_len, const Session& session) {
    if (max_len < 1) throw EvalError("equational satisfiability needs a bound >= 1");
    std::set<Variable> vars = free_vars(phi1);
    for (const auto& v : free_vars(phi2)) vars.insert(v);
    BoundedSatResult result;
    result.bound = max_len;
    enumerate_pointed_words(session.alphabet, vars, max_len, [&](const PointedWord& pw) {
        if (eval_core(phi1, pw) == eval_core(phi2, pw)) {
            result.witness = pw;
            return false;
        }
        return true;
    });
    return result;
}

std::optional<PointedWord> step_equational_sat(const StepPtr& psi1, const StepPtr& psi2,
                                               const Session& session) {
    auto r1 = weights_of(psi1);
    auto r2 = weights_of(psi2);
    std::vector<MsoPtr> agree;
    for (WeightId r : r1)
        if (std::find(r2.begin(), r2.end(), r) != r2.end())
            agree.push_back(mso_and(build_phi_step(psi1, r), build_phi_step(psi2, r)));
    if (agree.empty()) return std::nullopt; // disjoint weight sets
    MsoPtr query = mso_or_all(agree);
    auto witness = mso_sat(query, canonical_tracks(free_vars(query)), session.alphabet);
    if (!witness) return std::nullopt;
    return witness->pointed;
}

bool weighted_model_check(const StepPtr& psi, const PointedWord& pw, WeightId v) {
    return eval_step(psi, pw) == v;
}

bool weighted_model_check(const CorePtr& phi, const PointedWord& pw, const WeightMultiset& v) {
    return eval_core(phi, pw) == v;
}

std::optional<PointedWord> r_sat_step(const StepPtr& psi, WeightId r, const Session& session) {
    MsoPtr query = build_phi_step(psi, r);
    std::set<Variable> vars = free_vars(psi); // the formula's tracks, even if simplified away
    auto witness = mso_sat(query, canonical_tracks(vars), session.alphabet);
    if (!witness) return std::nullopt;
    return witness->pointed;
}

} // namespace wmso
