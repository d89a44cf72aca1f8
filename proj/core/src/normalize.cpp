#include "wmso/normalize.hpp"

#include <algorithm>

#include "wmso/derived.hpp"
#include "wmso/pointed_word.hpp"

namespace wmso {

namespace {
using CK = CoreFormula::Kind;
}

bool in_plus_fragment(const CorePtr& f) {
    switch (f->kind) {
        case CK::zero:
        case CK::product: return true;
        case CK::conditional:
        case CK::plus: return in_plus_fragment(f->left) && in_plus_fragment(f->right);
        case CK::sum_fo:
        case CK::sum_so: return false;
    }
    return false;
}

namespace {

bool is_m_form(const CorePtr& f) {
    if (f->kind == CK::product) return true;
    if (f->kind == CK::plus) return is_m_form(f->left) && is_m_form(f->right);
    return false;
}

} // namespace

bool is_normal_form_plus(const CorePtr& f) {
    if (f->kind == CK::zero || is_m_form(f)) return true;
    if (f->kind == CK::conditional)
        return is_normal_form_plus(f->left) && is_normal_form_plus(f->right);
    return false;
}

bool is_second_normal_form(const CorePtr& f) {
    switch (f->kind) {
        case CK::zero:
        case CK::product: return true;
        case CK::plus: return false;
        case CK::conditional:
            return is_second_normal_form(f->left) && is_second_normal_form(f->right);
        case CK::sum_fo:
        case CK::sum_so: return is_second_normal_form(f->left);
    }
    return false;
}

namespace {

// lemma-style merge: float conditionals of either summand above the +
CorePtr merge_plus(const CorePtr& a, const CorePtr& b) {
    if (a->kind == CK::conditional)
        return core_cond(a->guard, merge_plus(a->left, b), merge_plus(a->right, b));
    if (b->kind == CK::conditional)
        return core_cond(b->guard, merge_plus(a, b->left), merge_plus(a, b->right));
    if (a->kind == CK::zero) return b;
    if (b->kind == CK::zero) return a;
    return core_plus(a, b);
}

} // namespace

CorePtr normalize_plus(const CorePtr& f) {
    if (!in_plus_fragment(f))
        throw EvalError("normalize_plus expects a formula without sum binders");
    switch (f->kind) {
        case CK::zero:
        case CK::product: return f;
        case CK::conditional:
            return core_cond(f->guard, normalize_plus(f->left), normalize_plus(f->right));
        case CK::plus: return merge_plus(normalize_plus(f->left), normalize_plus(f->right));
        default: break;
    }
    throw EvalError("unreachable");
}

// ---------------------------------------------------------------------------
// second normal form

namespace {

CorePtr make_leaf(const GuardedProduct& g) {
    CorePtr s = core_cond(g.guard, core_product(g.prod_var, g.step), core_zero());
    for (std::size_t i = g.sum_vars.size(); i-- > 0;) s = core_sum(g.sum_vars[i], s);
    return s;
}

struct SecondNormalizer {
    std::set<Variable> taken;

    Variable fresh(const std::string& hint) {
        Variable v = fresh_variable(hint, taken);
        taken.insert(v);
        return v;
    }

    // Phase 1: conditional tree over "+"-combinations of guarded-product
    // leaves. Conditionals whose guard does not mention the sum variable
    // stay outside; everything else is flattened into the leaf guards.
    CorePtr fnf(const CorePtr& f) {
        switch (f->kind) {
            case CK::zero: return core_zero();
            case CK::product:
                return make_leaf({{}, mso_true(), f->var, f->step});
            case CK::conditional:
                return core_cond(f->guard, fnf(f->left), fnf(f->right));
            case CK::plus: return merge_plus(fnf(f->left), fnf(f->right));
            case CK::sum_fo:
            case CK::sum_so: return sum_over(f->var, fnf(f->left));
        }
        throw EvalError("unreachable");
    }

    CorePtr sum_over(const Variable& v, const CorePtr& q) {
        if (q->kind == CK::zero) return core_zero();
        if (q->kind == CK::conditional && !free_vars(q->guard).count(v))
            return core_cond(q->guard, sum_over(v, q->left), sum_over(v, q->right));
        std::vector<GuardedProduct> items;
        flatten(q, mso_true(), items);
        if (items.empty()) return core_zero();
        CorePtr acc;
        for (auto& item : items) {
            item.sum_vars.insert(item.sum_vars.begin(), v);
            CorePtr leaf = make_leaf(item);
            acc = acc ? core_plus(acc, leaf) : leaf;
        }
        return acc;
    }

    // Pushes accumulated path guards into the leaves. Sound because the
    // leaves' sum variables never occur in the guards (alpha-uniqueness of
    // the input, fresh names for everything we introduce).
    void flatten(const CorePtr& q, const MsoPtr& path, std::vector<GuardedProduct>& out) {
        switch (q->kind) {
            case CK::zero: return;
            case CK::conditional:
                flatten(q->left, mso_and(path, q->guard), out);
                flatten(q->right, mso_and(path, mso_not(q->guard)), out);
                return;
            case CK::plus:
                flatten(q->left, path, out);
                flatten(q->right, path, out);
                return;
            default: {
                auto g = as_guarded_product(q);
                if (!g) throw EvalError("internal: phase-1 leaf is not a guarded product");
                bool trivial_path = path->kind == MsoFormula::Kind::truth;
                out.push_back({g->sum_vars,
                               trivial_path ? g->guard : mso_and(path, g->guard), g->prod_var,
                               g->step});
                return;
            }
        }
    }

    // Phase 2: merge every "+" of leaves into a single leaf.
    CorePtr snd(const CorePtr& q) {
        switch (q->kind) {
            case CK::zero: return q;
            case CK::conditional: return core_cond(q->guard, snd(q->left), snd(q->right));
            case CK::plus: {
                std::vector<GuardedProduct> items;
                collect_leaves(q, items);
                GuardedProduct acc = items.front();
                for (std::size_t i = 1; i < items.size(); ++i) acc = merge_pair(acc, items[i]);
                return make_leaf(acc);
            }
            default: {
                auto g = as_guarded_product(q);
                if (!g) throw EvalError("internal: phase-2 leaf is not a guarded product");
                return make_leaf(*g);
            }
        }
    }

    void collect_leaves(const CorePtr& q, std::vector<GuardedProduct>& out) {
        if (q->kind == CK::plus) {
            collect_leaves(q->left, out);
            collect_leaves(q->right, out);
            return;
        }
        auto g = as_guarded_product(q);
        if (!g) throw EvalError("internal: summand is not a guarded product");
        out.push_back(*g);
    }

    // Reorders a sum prefix second-order-first (sums commute) and pads it
    // with dummy variables whose guards pin a unique value: the empty set
    // for a second-order dummy, the first position for a first-order one.
    GuardedProduct align(GuardedProduct g, std::size_t so_count, std::size_t fo_count) {
        std::vector<Variable> so_vars, fo_vars;
        for (const auto& v : g.sum_vars)
            (v.is_second_order() ? so_vars : fo_vars).push_back(v);
        MsoPtr guard = g.guard;
        while (so_vars.size() < so_count) {
            Variable w = fresh("Zpad");
            Variable u = fresh("upad");
            so_vars.push_back(w);
            guard = mso_and(guard, mso_forall(u, mso_not(mso_in(u, w))));
        }
        while (fo_vars.size() < fo_count) {
            Variable w = fresh("wpad");
            Variable u = fresh("vpad");
            fo_vars.push_back(w);
            guard = mso_and(guard, mso_forall(u, mso_leq(w, u)));
        }
        std::vector<Variable> prefix = so_vars;
        prefix.insert(prefix.end(), fo_vars.begin(), fo_vars.end());
        return {std::move(prefix), std::move(guard), g.prod_var, g.step};
    }

    GuardedProduct merge_pair(const GuardedProduct& a_in, const GuardedProduct& b_in) {
        auto count = [](const GuardedProduct& g, VarOrder o) {
            return static_cast<std::size_t>(
                std::count_if(g.sum_vars.begin(), g.sum_vars.end(),
                              [&](const Variable& v) { return v.order == o; }));
        };
        std::size_t so_count =
            std::max(count(a_in, VarOrder::second), count(b_in, VarOrder::second));
        std::size_t fo_count = std::max(count(a_in, VarOrder::first), count(b_in, VarOrder::first));
        GuardedProduct a = align(a_in, so_count, fo_count);
        GuardedProduct b = align(b_in, so_count, fo_count);

        // common fresh prefix
        std::vector<Variable> prefix;
        for (std::size_t t = 0; t < a.sum_vars.size(); ++t)
            prefix.push_back(fresh(a.sum_vars[t].is_second_order() ? "Zm" : "zm"));
        MsoPtr guard_a = a.guard, guard_b = b.guard;
        StepPtr step_a = a.step, step_b = b.step;
        for (std::size_t t = 0; t < prefix.size(); ++t) {
            guard_a = rename_free(guard_a, a.sum_vars[t], prefix[t]);
            step_a = rename_free(step_a, a.sum_vars[t], prefix[t]);
            guard_b = rename_free(guard_b, b.sum_vars[t], prefix[t]);
            step_b = rename_free(step_b, b.sum_vars[t], prefix[t]);
        }
        // common product variable
        Variable x = fresh("xm");
        step_a = rename_free(step_a, a.prod_var, x);
        step_b = rename_free(step_b, b.prod_var, x);

        // the fresh-set disambiguators of the merge
        Variable z0 = fresh("Zsel");
        Variable u1 = fresh("usel");
        Variable u2 = fresh("vsel");
        MsoPtr pick_a = mso_forall(u1, mso_not(mso_in(u1, z0))); // Z empty
        MsoPtr pick_b = mso_forall(u2, mso_in(u2, z0));          // Z full
        MsoPtr left = mso_and(pick_a, guard_a);
        MsoPtr right = mso_and(pick_b, guard_b);

        GuardedProduct merged;
        merged.sum_vars.push_back(z0);
        merged.sum_vars.insert(merged.sum_vars.end(), prefix.begin(), prefix.end());
        merged.guard = mso_or(left, right);
        merged.prod_var = x;
        merged.step = step_cond(left, step_a, step_b);
        return merged;
    }
};

} // namespace

CorePtr normalize_second(const CorePtr& f) {
    SecondNormalizer n;
    n.taken = all_vars(f);
    return n.snd(n.fnf(f));
}

} // namespace wmso
