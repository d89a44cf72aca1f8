#include "wmso/derived.hpp"

#include <algorithm>

#include "wmso/pointed_word.hpp"

namespace wmso {

MsoPtr build_phi_step(const StepPtr& psi, WeightId r) {
    if (psi->kind == StepFormula::Kind::constant)
        return psi->weight == r ? mso_true() : mso_false();
    return mso_or(mso_and(psi->guard, build_phi_step(psi->then_branch, r)),
                  mso_and(mso_not(psi->guard), build_phi_step(psi->else_branch, r)));
}

MsoPtr build_prod_eq(const StepPtr& psi1, const StepPtr& psi2) {
    auto r1 = weights_of(psi1);
    auto r2 = weights_of(psi2);
    std::vector<WeightId> shared;
    std::set_intersection(r1.begin(), r1.end(), r2.begin(), r2.end(),
                          std::back_inserter(shared));
    if (shared.empty()) return mso_false();
    std::vector<MsoPtr> disjuncts;
    for (WeightId r : shared)
        disjuncts.push_back(mso_and(build_phi_step(psi1, r), build_phi_step(psi2, r)));
    return mso_or_all(disjuncts);
}

std::optional<GuardedProduct> as_guarded_product(const CorePtr& f) {
    using CK = CoreFormula::Kind;
    GuardedProduct out;
    CorePtr cur = f;
    while (cur->kind == CK::sum_fo || cur->kind == CK::sum_so) {
        out.sum_vars.push_back(cur->var);
        cur = cur->left;
    }
    if (cur->kind == CK::product) {
        out.guard = mso_true();
        out.prod_var = cur->var;
        out.step = cur->step;
        return out;
    }
    if (cur->kind == CK::conditional && cur->left->kind == CK::product &&
        cur->right->kind == CK::zero) {
        out.guard = cur->guard;
        out.prod_var = cur->left->var;
        out.step = cur->left->step;
        return out;
    }
    return std::nullopt;
}

namespace {

struct CopyNames {
    // fresh copies of the sum variables, one vector per copy index
    std::vector<std::vector<Variable>> copies;
};

CopyNames make_copies(const std::vector<Variable>& vars, std::size_t m, const char* tag,
                      std::set<Variable>& taken) {
    CopyNames out;
    out.copies.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& v : vars) {
            Variable fresh =
                fresh_variable(v.name + tag + std::to_string(i + 1), taken);
            taken.insert(fresh);
            out.copies[i].push_back(fresh);
        }
    return out;
}

MsoPtr rename_all(MsoPtr f, const std::vector<Variable>& from, const std::vector<Variable>& to) {
    for (std::size_t i = 0; i < from.size(); ++i) f = rename_free(f, from[i], to[i]);
    return f;
}

StepPtr rename_all(StepPtr f, const std::vector<Variable>& from,
                   const std::vector<Variable>& to) {
    for (std::size_t i = 0; i < from.size(); ++i) f = rename_free(f, from[i], to[i]);
    return f;
}

// Tuple inequality: some component differs. For second-order components a
// position witnesses the symmetric difference; first-order components just
// hold different positions.
MsoPtr tuple_neq(const std::vector<Variable>& a, const std::vector<Variable>& b,
                 std::set<Variable>& taken) {
    std::vector<MsoPtr> diffs;
    for (std::size_t t = 0; t < a.size(); ++t) {
        if (a[t].is_first_order()) {
            diffs.push_back(mso_not(mso_eq(a[t], b[t])));
        } else {
            Variable z = fresh_variable("z_neq", taken);
            taken.insert(z);
            MsoPtr in_a = mso_in(z, a[t]);
            MsoPtr in_b = mso_in(z, b[t]);
            diffs.push_back(mso_exists(
                z, mso_or(mso_and(in_a, mso_not(in_b)), mso_and(mso_not(in_a), in_b))));
        }
    }
    return mso_or_all(diffs);
}

} // namespace

MsoPtr build_leq_formula(const CorePtr& phi1, const CorePtr& phi2, std::size_t l) {
    auto g1 = as_guarded_product(phi1);
    auto g2 = as_guarded_product(phi2);
    if (!g1 || !g2)
        throw EvalError("operands of <=_l must be in second normal form "
                        "(sums over a guarded product)");
    if (g1->sum_vars.size() != g2->sum_vars.size())
        throw EvalError("<=_l operands must have sum prefixes of equal length");
    for (std::size_t i = 0; i < g1->sum_vars.size(); ++i)
        if (g1->sum_vars[i].order != g2->sum_vars[i].order)
            throw EvalError("<=_l operands must have componentwise matching sum prefixes");
    if (l < 1) throw EvalError("<=_l needs l >= 1");

    std::set<Variable> taken = all_vars(phi1);
    for (const auto& v : all_vars(phi2)) taken.insert(v);

    // shared position variable for the pointwise step comparisons
    Variable pos = fresh_variable("p_cmp", taken);
    taken.insert(pos);
    StepPtr step1 = rename_free(g1->step, g1->prod_var, pos);
    StepPtr step2 = rename_free(g2->step, g2->prod_var, pos);
    std::vector<WeightId> r1 = weights_of(step1);
    std::vector<WeightId> r2 = weights_of(step2);

    std::vector<MsoPtr> blocks;
    for (std::size_t m = 1; m <= l; ++m) {
        CopyNames xs = make_copies(g1->sum_vars, m, "_c", taken);
        CopyNames ys = make_copies(g2->sum_vars, m, "_d", taken);

        auto guard1_at = [&](std::size_t i) {
            return rename_all(g1->guard, g1->sum_vars, xs.copies[i]);
        };
        auto guard2_at = [&](std::size_t i) {
            return rename_all(g2->guard, g2->sum_vars, ys.copies[i]);
        };
        auto step1_at = [&](std::size_t i) {
            return rename_all(step1, g1->sum_vars, xs.copies[i]);
        };
        auto step2_at = [&](std::size_t i) {
            return rename_all(step2, g2->sum_vars, ys.copies[i]);
        };
        // forall pos: both copies classify every position identically
        auto same_value = [&](const StepPtr& a, const StepPtr& b,
                              const std::vector<WeightId>& rs) {
            std::vector<MsoPtr> eqs;
            for (WeightId r : rs)
                eqs.push_back(mso_iff(build_phi_step(a, r), build_phi_step(b, r)));
            return mso_forall(pos, mso_and_all(eqs));
        };

        std::vector<MsoPtr> a1, c1, a2, c2;
        for (std::size_t i = 0; i < m; ++i) {
            a1.push_back(guard1_at(i));
            c1.push_back(guard2_at(i));
            a2.push_back(guard1_at(i));
            c2.push_back(guard2_at(i));
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                a1.push_back(tuple_neq(xs.copies[i], xs.copies[j], taken));
                c1.push_back(tuple_neq(ys.copies[i], ys.copies[j], taken));
                a2.push_back(same_value(step1_at(i), step1_at(j), r1));
                c2.push_back(same_value(step2_at(i), step2_at(j), r2));
            }
        c2.push_back(same_value(step1_at(0), step2_at(0), r1));

        MsoPtr body = mso_and(mso_implies(mso_and_all(a1), mso_and_all(c1)),
                              mso_implies(mso_and_all(a2), mso_and_all(c2)));
        for (std::size_t i = ys.copies.size(); i-- > 0;)
            for (std::size_t t = ys.copies[i].size(); t-- > 0;)
                body = mso_exists(ys.copies[i][t], body);
        for (std::size_t i = xs.copies.size(); i-- > 0;)
            for (std::size_t t = xs.copies[i].size(); t-- > 0;)
                body = mso_forall(xs.copies[i][t], body);
        blocks.push_back(body);
    }
    return mso_and_all(blocks);
}

} // namespace wmso
