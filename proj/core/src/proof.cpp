#include "wmso/proof.hpp"

#include <algorithm>

#include "wmso/compile_core.hpp"
#include "wmso/derived.hpp"
#include "wmso/mso_compile.hpp"

namespace wmso {

namespace {
using MK = MsoFormula::Kind;
using SK = StepFormula::Kind;
using CK = CoreFormula::Kind;
} // namespace

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::ref: return "ref";
        case Rule::sym: return "sym";
        case Rule::trans: return "trans";
        case Rule::cong_cond: return "cong?";
        case Rule::cong_plus: return "cong+";
        case Rule::s1: return "S1";
        case Rule::s2: return "S2";
        case Rule::s3: return "S3";
        case Rule::s4: return "S4";
        case Rule::c1: return "C1";
        case Rule::c2: return "C2";
        case Rule::c3: return "C3";
        case Rule::c4: return "C4";
        case Rule::c5: return "C5";
        case Rule::c6: return "C6";
        case Rule::c7: return "C7";
        case Rule::c8: return "C8";
        case Rule::c9: return "C9";
        case Rule::c10: return "C10";
        case Rule::c11: return "C11";
        case Rule::c12: return "C12";
        case Rule::c13: return "C13";
        case Rule::c14: return "C14";
        case Rule::c15: return "C15";
        case Rule::c16: return "C16";
        case Rule::c17: return "C17";
        case Rule::c11f: return "C11f";
        case Rule::c12f: return "C12f";
        case Rule::c13f: return "C13f";
        case Rule::c14f: return "C14f";
        case Rule::c15f: return "C15f";
        case Rule::c16f: return "C16f";
    }
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    static const std::pair<std::string_view, Rule> table[] = {
        {"ref", Rule::ref},       {"sym", Rule::sym},     {"trans", Rule::trans},
        {"cong?", Rule::cong_cond}, {"cong+", Rule::cong_plus},
        {"S1", Rule::s1},         {"S2", Rule::s2},       {"S3", Rule::s3},
        {"S4", Rule::s4},         {"C1", Rule::c1},       {"C2", Rule::c2},
        {"C3", Rule::c3},         {"C4", Rule::c4},       {"C5", Rule::c5},
        {"C6", Rule::c6},         {"C7", Rule::c7},       {"C8", Rule::c8},
        {"C9", Rule::c9},         {"C10", Rule::c10},     {"C11", Rule::c11},
        {"C12", Rule::c12},       {"C13", Rule::c13},     {"C14", Rule::c14},
        {"C15", Rule::c15},       {"C16", Rule::c16},     {"C17", Rule::c17},
        {"C11f", Rule::c11f},     {"C12f", Rule::c12f},   {"C13f", Rule::c13f},
        {"C14f", Rule::c14f},     {"C15f", Rule::c15f},   {"C16f", Rule::c16f},
    };
    for (const auto& [n, r] : table)
        if (n == name) return r;
    return std::nullopt;
}

Judgement judgement(std::vector<MsoPtr> gamma, StepPtr lhs, StepPtr rhs) {
    Judgement j;
    for (auto& g : gamma) j.gamma = gamma_add(std::move(j.gamma), g);
    j.layer = Layer::step;
    j.step_lhs = std::move(lhs);
    j.step_rhs = std::move(rhs);
    return j;
}

Judgement judgement(std::vector<MsoPtr> gamma, CorePtr lhs, CorePtr rhs) {
    Judgement j;
    for (auto& g : gamma) j.gamma = gamma_add(std::move(j.gamma), g);
    j.layer = Layer::core;
    j.core_lhs = std::move(lhs);
    j.core_rhs = std::move(rhs);
    return j;
}

bool gamma_contains(const std::vector<MsoPtr>& gamma, const MsoPtr& f) {
    return std::any_of(gamma.begin(), gamma.end(),
                       [&](const MsoPtr& g) { return equal(g, f); });
}

std::vector<MsoPtr> gamma_add(std::vector<MsoPtr> gamma, const MsoPtr& f) {
    if (!gamma_contains(gamma, f)) gamma.push_back(f);
    return gamma;
}

bool gamma_equal(const std::vector<MsoPtr>& a, const std::vector<MsoPtr>& b) {
    if (a.size() != b.size()) return false;
    for (const auto& f : a)
        if (!gamma_contains(b, f)) return false;
    return true;
}

ProofPtr make_node(Rule rule, Judgement conclusion, std::vector<ProofPtr> premises, MsoPtr pivot,
                   std::optional<long long> c17_l) {
    ProofNode n;
    n.rule = rule;
    n.conclusion = std::move(conclusion);
    n.premises = std::move(premises);
    n.pivot = std::move(pivot);
    n.c17_l = c17_l;
    return std::make_shared<const ProofNode>(std::move(n));
}

// ---------------------------------------------------------------------------
// checker

namespace {

bool is_step_rule(Rule r) {
    return r == Rule::s1 || r == Rule::s2 || r == Rule::s3 || r == Rule::s4;
}
bool is_core_rule(Rule r) {
    return r >= Rule::c1 && r <= Rule::c16f && r != Rule::ref;
}

struct Checker {
    const CheckConfig& config;

    CheckResult ok() const { return {}; }
    CheckResult fail(std::string reason, const std::string& where) const {
        return {false, std::move(reason), where};
    }

    bool entails(const std::vector<MsoPtr>& gamma, const MsoPtr& phi) const {
        return mso_entails(gamma, phi, config.session->alphabet);
    }

    // Gamma' == Gamma u {phi}?
    static bool is_extension_by(const std::vector<MsoPtr>& base,
                                const std::vector<MsoPtr>& extended, const MsoPtr& phi) {
        return gamma_equal(extended, gamma_add(base, phi));
    }

    CheckResult check(const ProofPtr& p, const std::string& where) const {
        if (!p) return fail("malformed_tree: null node", where);
        const Judgement& j = p->conclusion;
        if (j.layer == Layer::step && (!j.step_lhs || !j.step_rhs))
            return fail("malformed_tree: step judgement misses a side", where);
        if (j.layer == Layer::core && (!j.core_lhs || !j.core_rhs))
            return fail("malformed_tree: core judgement misses a side", where);
        if (j.layer == Layer::mso) return fail("malformed_tree: MSO judgement", where);
        for (std::size_t i = 0; i < p->premises.size(); ++i) {
            auto r = check(p->premises[i], where + "/premise" + std::to_string(i + 1));
            if (!r.accepted) return r;
        }
        if (is_step_rule(p->rule) && j.layer != Layer::step)
            return fail("layer_mismatch: step rule on a core judgement", where);
        if (is_core_rule(p->rule) && j.layer != Layer::core)
            return fail("layer_mismatch: core rule on a step judgement", where);
        return check_local(p, where);
    }

    CheckResult arity(const ProofPtr& p, std::size_t n, const std::string& where) const {
        if (p->premises.size() != n)
            return fail("arity_mismatch: " + std::string(rule_name(p->rule)) + " needs " +
                            std::to_string(n) + " premises, got " +
                            std::to_string(p->premises.size()),
                        where);
        return ok();
    }

    // premise layers always match the conclusion layer except for C4
    CheckResult premise_layers(const ProofPtr& p, const std::string& where) const {
        for (const auto& q : p->premises)
            if (q->conclusion.layer != p->conclusion.layer)
                return fail("layer_mismatch: premise layer differs", where);
        return ok();
    }

    CheckResult check_local(const ProofPtr& p, const std::string& where) const;

    // Uniform access to conditional shape per layer.
    struct CondShape {
        MsoPtr guard;
        StepPtr s_then, s_else;
        CorePtr c_then, c_else;
        bool is_cond = false;
    };
    static CondShape cond_of(const Judgement& j, bool lhs) {
        CondShape c;
        if (j.layer == Layer::step) {
            const StepPtr& f = lhs ? j.step_lhs : j.step_rhs;
            if (f->kind == SK::conditional) {
                c.is_cond = true;
                c.guard = f->guard;
                c.s_then = f->then_branch;
                c.s_else = f->else_branch;
            }
        } else {
            const CorePtr& f = lhs ? j.core_lhs : j.core_rhs;
            if (f->kind == CK::conditional) {
                c.is_cond = true;
                c.guard = f->guard;
                c.c_then = f->left;
                c.c_else = f->right;
            }
        }
        return c;
    }

    static bool sides_equal(const Judgement& a, bool a_lhs, const Judgement& b, bool b_lhs) {
        if (a.layer != b.layer) return false;
        if (a.layer == Layer::step)
            return equal(a_lhs ? a.step_lhs : a.step_rhs, b_lhs ? b.step_lhs : b.step_rhs);
        return equal(a_lhs ? a.core_lhs : a.core_rhs, b_lhs ? b.core_lhs : b.core_rhs);
    }
};

// exists-unique formula for the C16 side condition
MsoPtr exists_unique(const Variable& x, const MsoPtr& phi) {
    std::set<Variable> taken = all_vars(phi);
    taken.insert(x);
    if (x.is_first_order()) {
        Variable y = fresh_variable(x.name + "_uq", taken);
        return mso_exists(
            x, mso_and(phi, mso_forall(y, mso_implies(rename_free(phi, x, y), mso_eq(x, y)))));
    }
    Variable y = fresh_variable("Y_uq", taken);
    taken.insert(y);
    Variable z = fresh_variable("z_uq", taken);
    MsoPtr same_set = mso_forall(z, mso_iff(mso_in(z, x), mso_in(z, y)));
    return mso_exists(
        x, mso_and(phi, mso_forall(y, mso_implies(rename_free(phi, x, y), same_set))));
}

CheckResult Checker::check_local(const ProofPtr& p, const std::string& where) const {
    const Judgement& j = p->conclusion;
    const auto require = [&](bool cond, const char* reason) -> std::optional<CheckResult> {
        if (!cond) return fail(std::string("conclusion_shape: ") + reason, where);
        return std::nullopt;
    };

    switch (p->rule) {
        case Rule::ref: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            bool eq = j.layer == Layer::step ? equal(j.step_lhs, j.step_rhs)
                                             : equal(j.core_lhs, j.core_rhs);
            if (!eq) return fail("conclusion_shape: ref needs identical sides", where);
            return ok();
        }
        case Rule::sym: {
            if (auto r = arity(p, 1, where); !r.accepted) return r;
            if (auto r = premise_layers(p, where); !r.accepted) return r;
            const Judgement& q = p->premises[0]->conclusion;
            if (!gamma_equal(q.gamma, j.gamma)) return fail("gamma_mismatch: sym", where);
            if (!(sides_equal(j, true, q, false) && sides_equal(j, false, q, true)))
                return fail("conclusion_shape: sym does not flip the premise", where);
            return ok();
        }
        case Rule::trans: {
            if (auto r = arity(p, 2, where); !r.accepted) return r;
            if (auto r = premise_layers(p, where); !r.accepted) return r;
            const Judgement& q1 = p->premises[0]->conclusion;
            const Judgement& q2 = p->premises[1]->conclusion;
            if (!gamma_equal(q1.gamma, j.gamma) || !gamma_equal(q2.gamma, j.gamma))
                return fail("gamma_mismatch: trans", where);
            if (!sides_equal(j, true, q1, true))
                return fail("conclusion_shape: trans lhs differs from first premise", where);
            if (!sides_equal(q1, false, q2, true))
                return fail("conclusion_shape: trans middle terms differ", where);
            if (!sides_equal(j, false, q2, false))
                return fail("conclusion_shape: trans rhs differs from second premise", where);
            return ok();
        }
        case Rule::cong_cond: {
            if (auto r = arity(p, 2, where); !r.accepted) return r;
            if (auto r = premise_layers(p, where); !r.accepted) return r;
            CondShape l = cond_of(j, true), r2 = cond_of(j, false);
            if (!l.is_cond || !r2.is_cond)
                return fail("conclusion_shape: cong? needs conditionals on both sides", where);
            if (!equal(l.guard, r2.guard))
                return fail("conclusion_shape: cong? guards differ", where);
            const Judgement& q1 = p->premises[0]->conclusion;
            const Judgement& q2 = p->premises[1]->conclusion;
            if (!gamma_equal(q1.gamma, j.gamma) || !gamma_equal(q2.gamma, j.gamma))
                return fail("gamma_mismatch: cong?", where);
            bool branches_ok =
                j.layer == Layer::step
                    ? (equal(q1.step_lhs, l.s_then) && equal(q1.step_rhs, r2.s_then) &&
                       equal(q2.step_lhs, l.s_else) && equal(q2.step_rhs, r2.s_else))
                    : (equal(q1.core_lhs, l.c_then) && equal(q1.core_rhs, r2.c_then) &&
                       equal(q2.core_lhs, l.c_else) && equal(q2.core_rhs, r2.c_else));
            if (!branches_ok)
                return fail("conclusion_shape: cong? premises do not match the branches", where);
            return ok();
        }
        case Rule::cong_plus: {
            if (auto r = arity(p, 2, where); !r.accepted) return r;
            if (auto r = premise_layers(p, where); !r.accepted) return r;
            if (j.layer != Layer::core)
                return fail("layer_mismatch: cong+ is core-only", where);
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != CK::plus || r2->kind != CK::plus)
                return fail("conclusion_shape: cong+ needs sums on both sides", where);
            const Judgement& q1 = p->premises[0]->conclusion;
            const Judgement& q2 = p->premises[1]->conclusion;
            if (!gamma_equal(q1.gamma, j.gamma) || !gamma_equal(q2.gamma, j.gamma))
                return fail("gamma_mismatch: cong+", where);
            if (!(equal(q1.core_lhs, l->left) && equal(q1.core_rhs, r2->left) &&
                  equal(q2.core_lhs, l->right) && equal(q2.core_rhs, r2->right)))
                return fail("conclusion_shape: cong+ premises do not match the operands", where);
            return ok();
        }
        case Rule::s1:
        case Rule::c6: {
            if (auto r = arity(p, 1, where); !r.accepted) return r;
            if (auto r = premise_layers(p, where); !r.accepted) return r;
            const Judgement& q = p->premises[0]->conclusion;
            if (!(sides_equal(j, true, q, true) && sides_equal(j, false, q, false)))
                return fail("conclusion_shape: weakening changes the equation", where);
            if (p->pivot) {
                if (!is_extension_by(q.gamma, j.gamma, p->pivot))
                    return fail("gamma_mismatch: conclusion gamma is not premise + pivot", where);
            } else {
                for (const auto& g : q.gamma)
                    if (!gamma_contains(j.gamma, g))
                        return fail("gamma_mismatch: weakening dropped an assumption", where);
                std::size_t extra = 0;
                for (const auto& g : j.gamma)
                    if (!gamma_contains(q.gamma, g)) ++extra;
                if (extra > 1)
                    return fail("gamma_mismatch: weakening adds more than one formula", where);
            }
            return ok();
        }
        case Rule::s2:
        case Rule::c7: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            CondShape l = cond_of(j, true), r2 = cond_of(j, false);
            if (!l.is_cond || !r2.is_cond)
                return fail("conclusion_shape: negation-swap needs conditionals", where);
            if (l.guard->kind != MK::negation)
                return fail("conclusion_shape: lhs guard must be a negation", where);
            MsoPtr phi = l.guard->left;
            if (p->pivot && !equal(p->pivot, phi))
                return fail("pivot_mismatch: stated pivot differs from the lhs guard", where);
            if (!equal(r2.guard, phi))
                return fail("conclusion_shape: rhs guard must drop the negation", where);
            bool swapped = j.layer == Layer::step
                               ? (equal(l.s_then, r2.s_else) && equal(l.s_else, r2.s_then))
                               : (equal(l.c_then, r2.c_else) && equal(l.c_else, r2.c_then));
            if (!swapped)
                return fail("conclusion_shape: branches must swap across the negation", where);
            return ok();
        }
        case Rule::s3:
        case Rule::c8: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            CondShape l = cond_of(j, true);
            if (!l.is_cond)
                return fail("conclusion_shape: lhs must be a conditional", where);
            if (p->pivot && !equal(p->pivot, l.guard))
                return fail("pivot_mismatch: stated pivot differs from the lhs guard", where);
            bool takes_then = j.layer == Layer::step ? equal(j.step_rhs, l.s_then)
                                                     : equal(j.core_rhs, l.c_then);
            if (!takes_then)
                return fail("conclusion_shape: rhs must be the then-branch", where);
            if (!entails(j.gamma, l.guard))
                return fail("side_condition_failed: Gamma does not entail the guard", where);
            return ok();
        }
        case Rule::s4:
        case Rule::c9: {
            if (auto r = arity(p, 2, where); !r.accepted) return r;
            if (auto r = premise_layers(p, where); !r.accepted) return r;
            CondShape l = cond_of(j, true);
            if (!l.is_cond)
                return fail("conclusion_shape: lhs must be a conditional", where);
            if (p->pivot && !equal(p->pivot, l.guard))
                return fail("pivot_mismatch: stated pivot differs from the lhs guard", where);
            const Judgement& q1 = p->premises[0]->conclusion;
            const Judgement& q2 = p->premises[1]->conclusion;
            if (!is_extension_by(j.gamma, q1.gamma, l.guard))
                return fail("gamma_mismatch: first premise must assume the guard", where);
            if (!is_extension_by(j.gamma, q2.gamma, mso_not(l.guard)))
                return fail("gamma_mismatch: second premise must assume the negated guard",
                            where);
            bool branch_ok = j.layer == Layer::step
                                 ? (equal(q1.step_lhs, l.s_then) && equal(q2.step_lhs, l.s_else))
                                 : (equal(q1.core_lhs, l.c_then) && equal(q2.core_lhs, l.c_else));
            if (!branch_ok)
                return fail("conclusion_shape: premises do not rewrite the two branches", where);
            if (!(sides_equal(q1, false, j, false) && sides_equal(q2, false, j, false)))
                return fail("conclusion_shape: premises must share the conclusion rhs", where);
            return ok();
        }
        case Rule::c1: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            const CorePtr& l = j.core_lhs;
            if (l->kind != CK::plus || l->right->kind != CK::zero)
                return fail("conclusion_shape: lhs must be Phi + zero", where);
            if (!equal(l->left, j.core_rhs))
                return fail("conclusion_shape: rhs must be the left summand", where);
            return ok();
        }
        case Rule::c2: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != CK::plus || r2->kind != CK::plus)
                return fail("conclusion_shape: both sides must be sums", where);
            if (!(equal(l->left, r2->right) && equal(l->right, r2->left)))
                return fail("conclusion_shape: rhs must swap the summands", where);
            return ok();
        }
        case Rule::c3: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != CK::plus || l->left->kind != CK::plus || r2->kind != CK::plus ||
                r2->right->kind != CK::plus)
                return fail("conclusion_shape: sides must be (A+B)+C and A+(B+C)", where);
            if (!(equal(l->left->left, r2->left) && equal(l->left->right, r2->right->left) &&
                  equal(l->right, r2->right->right)))
                return fail("conclusion_shape: reassociation mismatch", where);
            return ok();
        }
        case Rule::c4: {
            if (auto r = arity(p, 1, where); !r.accepted) return r;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != CK::product || r2->kind != CK::product)
                return fail("conclusion_shape: both sides must be products", where);
            if (!(l->var == r2->var))
                return fail("conclusion_shape: products must share the binder", where);
            const Judgement& q = p->premises[0]->conclusion;
            if (q.layer != Layer::step)
                return fail("layer_mismatch: C4 premise must be a step judgement", where);
            if (!gamma_equal(q.gamma, j.gamma)) return fail("gamma_mismatch: C4", where);
            if (!(equal(q.step_lhs, l->step) && equal(q.step_rhs, r2->step)))
                return fail("conclusion_shape: premise does not equate the product bodies",
                            where);
            for (const auto& g : j.gamma)
                if (free_vars(g).count(l->var))
                    return fail("side_condition_failed: binder is free in Gamma", where);
            return ok();
        }
        case Rule::c5: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != CK::product || r2->kind != CK::product)
                return fail("conclusion_shape: both sides must be products", where);
            const Variable& x = l->var;
            const Variable& y = r2->var;
            if (!(x == y) && all_vars(l->step).count(y))
                return fail("side_condition_failed: target variable occurs in the body", where);
            if (!equal(r2->step, rename_free(l->step, x, y)))
                return fail("conclusion_shape: rhs body is not the renamed lhs body", where);
            return ok();
        }
        case Rule::c10: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != CK::plus || l->left->kind != CK::conditional ||
                r2->kind != CK::conditional || r2->left->kind != CK::plus ||
                r2->right->kind != CK::plus)
                return fail("conclusion_shape: sides must be (phi?A:B)+C and phi?(A+C):(B+C)",
                            where);
            const CorePtr& cond = l->left;
            if (!equal(cond->guard, r2->guard))
                return fail("conclusion_shape: C10 guards differ", where);
            if (!(equal(cond->left, r2->left->left) && equal(l->right, r2->left->right) &&
                  equal(cond->right, r2->right->left) && equal(l->right, r2->right->right)))
                return fail("conclusion_shape: C10 distribution mismatch", where);
            return ok();
        }
        case Rule::c11:
        case Rule::c11f: {
            if (auto r = arity(p, 1, where); !r.accepted) return r;
            if (auto r = premise_layers(p, where); !r.accepted) return r;
            CK want = p->rule == Rule::c11 ? CK::sum_so : CK::sum_fo;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != want || r2->kind != want || !(l->var == r2->var))
                return fail("conclusion_shape: both sides must sum over the same variable",
                            where);
            const Judgement& q = p->premises[0]->conclusion;
            if (!gamma_equal(q.gamma, j.gamma)) return fail("gamma_mismatch: C11", where);
            if (!(equal(q.core_lhs, l->left) && equal(q.core_rhs, r2->left)))
                return fail("conclusion_shape: premise does not equate the sum bodies", where);
            for (const auto& g : j.gamma)
                if (free_vars(g).count(l->var))
                    return fail("side_condition_failed: sum variable is free in Gamma", where);
            return ok();
        }
        case Rule::c12:
        case Rule::c12f: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            CK want = p->rule == Rule::c12 ? CK::sum_so : CK::sum_fo;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != want || r2->kind != want)
                return fail("conclusion_shape: both sides must be sums of the right order",
                            where);
            const Variable& x = l->var;
            const Variable& y = r2->var;
            if (!(x == y) && all_vars(l->left).count(y))
                return fail("side_condition_failed: target variable occurs in the body", where);
            if (!equal(r2->left, rename_free(l->left, x, y)))
                return fail("conclusion_shape: rhs body is not the renamed lhs body", where);
            return ok();
        }
        case Rule::c13:
        case Rule::c13f: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            CK want = p->rule == Rule::c13 ? CK::sum_so : CK::sum_fo;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != want || l->left->kind != want || r2->kind != want ||
                r2->left->kind != want)
                return fail("conclusion_shape: sides must be doubly nested sums", where);
            if (!(l->var == r2->left->var && l->left->var == r2->var))
                return fail("conclusion_shape: sum variables must swap", where);
            if (!equal(l->left->left, r2->left->left))
                return fail("conclusion_shape: sum bodies differ", where);
            return ok();
        }
        case Rule::c14:
        case Rule::c14f: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            CK want = p->rule == Rule::c14 ? CK::sum_so : CK::sum_fo;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != want || l->left->kind != CK::plus || r2->kind != CK::plus ||
                r2->left->kind != want || r2->right->kind != want)
                return fail("conclusion_shape: sides must be sum-of-plus and plus-of-sums",
                            where);
            if (!(l->var == r2->left->var && l->var == r2->right->var))
                return fail("conclusion_shape: sum variables differ", where);
            if (!(equal(l->left->left, r2->left->left) && equal(l->left->right, r2->right->left)))
                return fail("conclusion_shape: distributed operands differ", where);
            return ok();
        }
        case Rule::c15:
        case Rule::c15f: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            CK want = p->rule == Rule::c15 ? CK::sum_so : CK::sum_fo;
            const CorePtr& l = j.core_lhs;
            const CorePtr& r2 = j.core_rhs;
            if (l->kind != CK::conditional || l->left->kind != want || l->right->kind != want ||
                r2->kind != want || r2->left->kind != CK::conditional)
                return fail("conclusion_shape: sides must be phi?sum:sum and sum-of-conditional",
                            where);
            const Variable& X = r2->var;
            if (!(l->left->var == X && l->right->var == X))
                return fail("conclusion_shape: sum variables differ", where);
            if (!equal(l->guard, r2->left->guard))
                return fail("conclusion_shape: guards differ", where);
            if (!(equal(l->left->left, r2->left->left) && equal(l->right->left, r2->left->right)))
                return fail("conclusion_shape: branches do not line up", where);
            if (free_vars(l->guard).count(X))
                return fail("side_condition_failed: sum variable is free in the guard", where);
            return ok();
        }
        case Rule::c16:
        case Rule::c16f: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            CK want = p->rule == Rule::c16 ? CK::sum_so : CK::sum_fo;
            const CorePtr& r2 = j.core_rhs;
            if (r2->kind != want || r2->left->kind != CK::conditional ||
                r2->left->right->kind != CK::zero)
                return fail("conclusion_shape: rhs must be sum of (phi ? Phi : zero)", where);
            const Variable& X = r2->var;
            const MsoPtr& phi = r2->left->guard;
            if (!equal(j.core_lhs, r2->left->left))
                return fail("conclusion_shape: lhs must be the guarded body", where);
            if (all_vars(j.core_lhs).count(X))
                return fail("side_condition_failed: sum variable occurs in the body", where);
            if (!entails(j.gamma, exists_unique(X, phi)))
                return fail("side_condition_failed: Gamma does not entail unique existence",
                            where);
            return ok();
        }
        case Rule::c17: {
            if (auto r = arity(p, 0, where); !r.accepted) return r;
            auto g1 = as_guarded_product(j.core_lhs);
            auto g2 = as_guarded_product(j.core_rhs);
            if (!g1 || !g2)
                return fail("conclusion_shape: C17 sides must be sums over a guarded product",
                            where);
            if (g1->sum_vars.size() != g2->sum_vars.size())
                return fail("conclusion_shape: C17 needs aligned sum prefixes (use C12/C16)",
                            where);
            for (std::size_t i = 0; i < g1->sum_vars.size(); ++i)
                if (g1->sum_vars[i].order != g2->sum_vars[i].order)
                    return fail("conclusion_shape: C17 sum prefixes differ in variable order",
                                where);
            if (!p->c17_l) return fail("malformed_tree: C17 misses its l parameter", where);
            long long l = *p->c17_l;
            if (l < 1) return fail("c17_l_mismatch: l must be positive", where);
            if (l > config.c17_cap) return fail("c17_cap_exceeded", where);
            // required l = 2^(ell * max(|X|,|Y|)) from the compiled-size bound
            std::size_t ell = ell_bound(j.core_lhs, j.core_rhs, j.gamma, *config.session);
            std::size_t k = std::max(g1->sum_vars.size(), g2->sum_vars.size());
            long long required;
            if (k == 0) {
                required = 1;
            } else if (ell * k > 62) {
                return fail("c17_l_mismatch: required l = 2^" + std::to_string(ell * k) +
                                " cannot equal the stated l",
                            where);
            } else {
                required = 1LL << (ell * k);
            }
            if (l != required)
                return fail("c17_l_mismatch: stated l = " + std::to_string(l) +
                                " but the rule requires l = " + std::to_string(required),
                            where);
            MsoPtr leq12 = build_leq_formula(j.core_lhs, j.core_rhs, static_cast<std::size_t>(l));
            MsoPtr leq21 = build_leq_formula(j.core_rhs, j.core_lhs, static_cast<std::size_t>(l));
            if (!entails(j.gamma, leq12))
                return fail("side_condition_failed: Gamma does not entail lhs <=_l rhs", where);
            if (!entails(j.gamma, leq21))
                return fail("side_condition_failed: Gamma does not entail rhs <=_l lhs", where);
            return ok();
        }
        default:
            break;
    }
    (void)require;
    return fail("malformed_tree: unknown rule", where);
}

} // namespace

CheckResult check_proof(const ProofPtr& p, const CheckConfig& config) {
    if (!config.session) return {false, "no_session", "root"};
    Checker c{config};
    return c.check(p, "root");
}

// ---------------------------------------------------------------------------
// step-layer proof synthesis

namespace {

ProofPtr d_ref_step(const std::vector<MsoPtr>& gamma, const StepPtr& psi) {
    return make_node(Rule::ref, judgement(gamma, psi, psi));
}
ProofPtr d_sym(const ProofPtr& p) {
    const Judgement& j = p->conclusion;
    Judgement flipped = j.layer == Layer::step ? judgement(j.gamma, j.step_rhs, j.step_lhs)
                                               : judgement(j.gamma, j.core_rhs, j.core_lhs);
    return make_node(Rule::sym, std::move(flipped), {p});
}
ProofPtr d_trans(const ProofPtr& p, const ProofPtr& q) {
    const Judgement& a = p->conclusion;
    const Judgement& b = q->conclusion;
    Judgement j = a.layer == Layer::step ? judgement(a.gamma, a.step_lhs, b.step_rhs)
                                         : judgement(a.gamma, a.core_lhs, b.core_rhs);
    return make_node(Rule::trans, std::move(j), {p, q});
}

// Gamma |- top ? psi1 : psi2 ~~ psi1 (S3 with a trivially entailed guard,
// or with an inconsistent Gamma)
ProofPtr d_s3(const std::vector<MsoPtr>& gamma, const MsoPtr& phi, const StepPtr& t,
              const StepPtr& e) {
    return make_node(Rule::s3, judgement(gamma, step_cond(phi, t, e), t), {}, phi);
}
ProofPtr d_s2(const std::vector<MsoPtr>& gamma, const MsoPtr& phi, const StepPtr& a,
              const StepPtr& b) {
    return make_node(Rule::s2,
                     judgement(gamma, step_cond(mso_not(phi), a, b), step_cond(phi, b, a)), {},
                     phi);
}

// Principle of explosion: under an inconsistent Gamma any two step
// formulas are provably equal (S3 on top and !top, bridged with S2).
ProofPtr explosion_step(const std::vector<MsoPtr>& gamma, const StepPtr& psi1,
                        const StepPtr& psi2) {
    MsoPtr top = mso_true();
    ProofPtr n1 = d_s3(gamma, top, psi1, psi2);            // top?p1:p2 ~~ p1
    ProofPtr n2 = d_s3(gamma, mso_not(top), psi2, psi1);   // !top?p2:p1 ~~ p2
    ProofPtr n3 = d_s2(gamma, top, psi2, psi1);            // !top?p2:p1 ~~ top?p1:p2
    return d_trans(d_trans(d_sym(n1), d_sym(n3)), n2);
}

ProofPtr build_step_proof(const std::vector<MsoPtr>& gamma, const StepPtr& psi1,
                          const StepPtr& psi2, const Session& session) {
    if (psi1->kind == SK::constant && psi2->kind == SK::constant) {
        if (psi1->weight == psi2->weight) return d_ref_step(gamma, psi1);
        // equivalent but distinct constants: Gamma is inconsistent
        return explosion_step(gamma, psi1, psi2);
    }
    if (psi1->kind == SK::conditional) {
        const MsoPtr& phi = psi1->guard;
        ProofPtr p_then =
            build_step_proof(gamma_add(gamma, phi), psi1->then_branch, psi2, session);
        ProofPtr p_else =
            build_step_proof(gamma_add(gamma, mso_not(phi)), psi1->else_branch, psi2, session);
        return make_node(Rule::s4, judgement(gamma, psi1, psi2), {p_then, p_else}, phi);
    }
    // psi1 is a constant, psi2 a conditional: peel psi2 instead
    return d_sym(build_step_proof(gamma, psi2, psi1, session));
}

} // namespace

StepSynthesis synth_step_proof(const std::vector<MsoPtr>& gamma, const StepPtr& psi1,
                               const StepPtr& psi2, const Session& session) {
    // disagreement formula: Gamma holds and the two step values differ
    std::vector<MsoPtr> cases;
    for (WeightId r1 : weights_of(psi1))
        for (WeightId r2 : weights_of(psi2))
            if (r1 != r2)
                cases.push_back(mso_and(build_phi_step(psi1, r1), build_phi_step(psi2, r2)));
    MsoPtr disagree = mso_and(mso_and_all(gamma), mso_or_all(cases));
    std::set<Variable> vars = free_vars(disagree);
    auto witness = mso_sat(disagree, canonical_tracks(vars), session.alphabet);
    if (witness) return {nullptr, witness->pointed};
    return {build_step_proof(gamma, psi1, psi2, session), std::nullopt};
}

// ---------------------------------------------------------------------------
// deduction tactic

namespace {

struct LayerRules {
    Rule weaken, if_true, cases;
};
LayerRules rules_for(Layer layer) {
    return layer == Layer::step ? LayerRules{Rule::s1, Rule::s3, Rule::s4}
                                : LayerRules{Rule::c6, Rule::c8, Rule::c9};
}

Judgement with_gamma(const Judgement& j, std::vector<MsoPtr> gamma) {
    return j.layer == Layer::step ? judgement(std::move(gamma), j.step_lhs, j.step_rhs)
                                  : judgement(std::move(gamma), j.core_lhs, j.core_rhs);
}

bool sides_match(const Judgement& a, const Judgement& b) {
    if (a.layer != b.layer) return false;
    if (a.layer == Layer::step)
        return equal(a.step_lhs, b.step_lhs) && equal(a.step_rhs, b.step_rhs);
    return equal(a.core_lhs, b.core_lhs) && equal(a.core_rhs, b.core_rhs);
}

ProofPtr weaken_with(const ProofPtr& p, const MsoPtr& phi) {
    const Judgement& j = p->conclusion;
    return make_node(rules_for(j.layer).weaken, with_gamma(j, gamma_add(j.gamma, phi)), {p}, phi);
}

ProofPtr assemble(const std::vector<MsoPtr>& gamma, const std::vector<MsoPtr>& disjuncts,
                  const std::vector<ProofPtr>& proofs) {
    const Judgement& shape = proofs.front()->conclusion;
    LayerRules lr = rules_for(shape.layer);
    auto ref_with = [&](const std::vector<MsoPtr>& g, bool lhs_side) {
        Judgement r = shape.layer == Layer::step
                          ? judgement(g, lhs_side ? shape.step_lhs : shape.step_rhs,
                                      lhs_side ? shape.step_lhs : shape.step_rhs)
                          : judgement(g, lhs_side ? shape.core_lhs : shape.core_rhs,
                                      lhs_side ? shape.core_lhs : shape.core_rhs);
        return make_node(Rule::ref, std::move(r));
    };

    if (disjuncts.size() == 1) {
        const MsoPtr& phi = disjuncts[0];
        const ProofPtr& p = proofs[0];
        // cases: Gamma u {phi} |- L ~~ R and Gamma u {!phi} |- R ~~ R
        // give Gamma |- phi?L:R ~~ R
        ProofPtr else_ref = ref_with(gamma_add(gamma, mso_not(phi)), false);
        Judgement cases_j =
            shape.layer == Layer::step
                ? judgement(gamma, step_cond(phi, shape.step_lhs, shape.step_rhs), shape.step_rhs)
                : judgement(gamma, core_cond(phi, shape.core_lhs, shape.core_rhs),
                            shape.core_rhs);
        ProofPtr q1 = make_node(lr.cases, cases_j, {p, else_ref}, phi);
        // if_true: Gamma |- phi?L:R ~~ L (side condition: Gamma entails phi)
        Judgement take_j =
            shape.layer == Layer::step
                ? judgement(gamma, step_cond(phi, shape.step_lhs, shape.step_rhs), shape.step_lhs)
                : judgement(gamma, core_cond(phi, shape.core_lhs, shape.core_rhs),
                            shape.core_lhs);
        ProofPtr q2 = make_node(lr.if_true, std::move(take_j), {}, phi);
        return d_trans(d_sym(q2), q1); // L ~~ phi?L:R ~~ R
    }

    const MsoPtr& phi_n = disjuncts.back();
    MsoPtr not_phi_n = mso_not(phi_n);
    std::vector<MsoPtr> rest(disjuncts.begin(), disjuncts.end() - 1);
    std::vector<ProofPtr> weakened;
    for (std::size_t m = 0; m + 1 < proofs.size(); ++m)
        weakened.push_back(weaken_with(proofs[m], not_phi_n));
    ProofPtr under_neg = assemble(gamma_add(gamma, not_phi_n), rest, weakened);

    // cases on phi_n: Gamma |- phi_n ? L : L ~~ R
    Judgement split_j =
        shape.layer == Layer::step
            ? judgement(gamma, step_cond(phi_n, shape.step_lhs, shape.step_lhs), shape.step_rhs)
            : judgement(gamma, core_cond(phi_n, shape.core_lhs, shape.core_lhs), shape.core_rhs);
    ProofPtr a = make_node(lr.cases, std::move(split_j), {proofs.back(), under_neg}, phi_n);
    // phi_n ? L : L ~~ L
    ProofPtr ref_then = ref_with(gamma_add(gamma, phi_n), true);
    ProofPtr ref_else = ref_with(gamma_add(gamma, not_phi_n), true);
    Judgement collapse_j =
        shape.layer == Layer::step
            ? judgement(gamma, step_cond(phi_n, shape.step_lhs, shape.step_lhs), shape.step_lhs)
            : judgement(gamma, core_cond(phi_n, shape.core_lhs, shape.core_lhs), shape.core_lhs);
    ProofPtr b = make_node(lr.cases, std::move(collapse_j), {ref_then, ref_else}, phi_n);
    return d_trans(d_sym(b), a); // L ~~ phi_n?L:L ~~ R
}

} // namespace

ProofPtr assemble_deduction(const std::vector<MsoPtr>& gamma,
                            const std::vector<MsoPtr>& disjuncts,
                            const std::vector<ProofPtr>& premise_proofs,
                            const Session& session) {
    if (disjuncts.empty() || disjuncts.size() != premise_proofs.size())
        throw EvalError("deduction needs one premise proof per disjunct");
    const Judgement& shape = premise_proofs.front()->conclusion;
    for (std::size_t m = 0; m < disjuncts.size(); ++m) {
        const Judgement& q = premise_proofs[m]->conclusion;
        if (q.layer != shape.layer || !sides_match(q, shape))
            throw EvalError("deduction premises must share one equation");
        if (!gamma_equal(q.gamma, gamma_add(gamma, disjuncts[m])))
            throw EvalError("premise " + std::to_string(m + 1) +
                            " does not assume its disjunct");
    }
    if (!mso_entails(gamma, mso_or_all(disjuncts), session.alphabet))
        throw EvalError("Gamma does not entail the disjunction");
    return assemble(gamma, disjuncts, premise_proofs);
}

} // namespace wmso
