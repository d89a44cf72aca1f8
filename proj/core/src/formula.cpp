#include "wmso/formula.hpp"

#include <algorithm>

namespace wmso {

namespace {
using MK = MsoFormula::Kind;
using SK = StepFormula::Kind;
using CK = CoreFormula::Kind;

MsoPtr mk(MsoFormula f) { return std::make_shared<const MsoFormula>(std::move(f)); }
StepPtr mk(StepFormula f) { return std::make_shared<const StepFormula>(std::move(f)); }
CorePtr mk(CoreFormula f) { return std::make_shared<const CoreFormula>(std::move(f)); }

void require_first(const Variable& v, const char* where) {
    if (!v.is_first_order())
        throw SessionError(std::string(where) + ": expected a first-order variable, got " + v.name);
}
void require_second(const Variable& v, const char* where) {
    if (!v.is_second_order())
        throw SessionError(std::string(where) + ": expected a second-order variable, got " + v.name);
}
} // namespace

MsoPtr mso_true() {
    static const MsoPtr t = mk(MsoFormula{MK::truth});
    return t;
}
MsoPtr mso_false() { return mso_not(mso_true()); }

MsoPtr mso_letter(LetterId a, Variable x) {
    require_first(x, "P_a(x)");
    MsoFormula f{MK::letter_at};
    f.letter = a;
    f.var = std::move(x);
    return mk(std::move(f));
}

MsoPtr mso_leq(Variable x, Variable y) {
    require_first(x, "x <= y");
    require_first(y, "x <= y");
    MsoFormula f{MK::leq};
    f.var = std::move(x);
    f.var2 = std::move(y);
    return mk(std::move(f));
}

MsoPtr mso_in(Variable x, Variable X) {
    require_first(x, "x in X");
    require_second(X, "x in X");
    MsoFormula f{MK::membership};
    f.var = std::move(x);
    f.var2 = std::move(X);
    return mk(std::move(f));
}

MsoPtr mso_not(MsoPtr f) {
    MsoFormula g{MK::negation};
    g.left = std::move(f);
    return mk(std::move(g));
}

MsoPtr mso_and(MsoPtr a, MsoPtr b) {
    MsoFormula g{MK::conjunction};
    g.left = std::move(a);
    g.right = std::move(b);
    return mk(std::move(g));
}

MsoPtr mso_or(MsoPtr a, MsoPtr b) { return mso_not(mso_and(mso_not(a), mso_not(b))); }
MsoPtr mso_implies(MsoPtr a, MsoPtr b) { return mso_or(mso_not(a), b); }
MsoPtr mso_iff(MsoPtr a, MsoPtr b) { return mso_and(mso_implies(a, b), mso_implies(b, a)); }
MsoPtr mso_eq(Variable x, Variable y) { return mso_and(mso_leq(x, y), mso_leq(y, x)); }
MsoPtr mso_lt(Variable x, Variable y) { return mso_not(mso_leq(y, x)); }

MsoPtr mso_forall(Variable v, MsoPtr body) {
    MsoFormula g{v.is_first_order() ? MK::forall_fo : MK::forall_so};
    g.var = std::move(v);
    g.left = std::move(body);
    return mk(std::move(g));
}

MsoPtr mso_exists(Variable v, MsoPtr body) {
    return mso_not(mso_forall(std::move(v), mso_not(std::move(body))));
}

MsoPtr mso_and_all(const std::vector<MsoPtr>& fs) {
    if (fs.empty()) return mso_true();
    MsoPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = mso_and(acc, fs[i]);
    return acc;
}

MsoPtr mso_or_all(const std::vector<MsoPtr>& fs) {
    if (fs.empty()) return mso_false();
    MsoPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = mso_or(acc, fs[i]);
    return acc;
}

StepPtr step_const(WeightId r) {
    StepFormula f{SK::constant};
    f.weight = r;
    return mk(std::move(f));
}

StepPtr step_cond(MsoPtr guard, StepPtr t, StepPtr e) {
    StepFormula f{SK::conditional};
    f.guard = std::move(guard);
    f.then_branch = std::move(t);
    f.else_branch = std::move(e);
    return mk(std::move(f));
}

CorePtr core_zero() {
    static const CorePtr z = mk(CoreFormula{CK::zero});
    return z;
}

CorePtr core_product(Variable x, StepPtr body) {
    require_first(x, "prod binder");
    CoreFormula f{CK::product};
    f.var = std::move(x);
    f.step = std::move(body);
    return mk(std::move(f));
}

CorePtr core_cond(MsoPtr guard, CorePtr t, CorePtr e) {
    CoreFormula f{CK::conditional};
    f.guard = std::move(guard);
    f.left = std::move(t);
    f.right = std::move(e);
    return mk(std::move(f));
}

CorePtr core_plus(CorePtr a, CorePtr b) {
    CoreFormula f{CK::plus};
    f.left = std::move(a);
    f.right = std::move(b);
    return mk(std::move(f));
}

CorePtr core_sum(Variable v, CorePtr body) {
    CoreFormula f{v.is_first_order() ? CK::sum_fo : CK::sum_so};
    f.var = std::move(v);
    f.left = std::move(body);
    return mk(std::move(f));
}

bool equal(const MsoPtr& a, const MsoPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case MK::truth: return true;
        case MK::letter_at: return a->letter == b->letter && a->var == b->var;
        case MK::leq:
        case MK::membership: return a->var == b->var && a->var2 == b->var2;
        case MK::negation: return equal(a->left, b->left);
        case MK::conjunction: return equal(a->left, b->left) && equal(a->right, b->right);
        case MK::forall_fo:
        case MK::forall_so: return a->var == b->var && equal(a->left, b->left);
    }
    return false;
}

bool equal(const StepPtr& a, const StepPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    if (a->kind == SK::constant) return a->weight == b->weight;
    return equal(a->guard, b->guard) && equal(a->then_branch, b->then_branch) &&
           equal(a->else_branch, b->else_branch);
}

bool equal(const CorePtr& a, const CorePtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case CK::zero: return true;
        case CK::product: return a->var == b->var && equal(a->step, b->step);
        case CK::conditional:
            return equal(a->guard, b->guard) && equal(a->left, b->left) &&
                   equal(a->right, b->right);
        case CK::plus: return equal(a->left, b->left) && equal(a->right, b->right);
        case CK::sum_fo:
        case CK::sum_so: return a->var == b->var && equal(a->left, b->left);
    }
    return false;
}

namespace {

void collect_mso(const MsoPtr& f, std::set<Variable>& free, std::set<Variable>* all,
                 std::set<Variable> bound) {
    switch (f->kind) {
        case MK::truth: return;
        case MK::letter_at:
            if (all) all->insert(f->var);
            if (!bound.count(f->var)) free.insert(f->var);
            return;
        case MK::leq:
        case MK::membership:
            if (all) all->insert(f->var), all->insert(f->var2);
            if (!bound.count(f->var)) free.insert(f->var);
            if (!bound.count(f->var2)) free.insert(f->var2);
            return;
        case MK::negation: collect_mso(f->left, free, all, bound); return;
        case MK::conjunction:
            collect_mso(f->left, free, all, bound);
            collect_mso(f->right, free, all, std::move(bound));
            return;
        case MK::forall_fo:
        case MK::forall_so:
            if (all) all->insert(f->var);
            bound.insert(f->var);
            collect_mso(f->left, free, all, std::move(bound));
            return;
    }
}

void collect_step(const StepPtr& f, std::set<Variable>& free, std::set<Variable>* all,
                  const std::set<Variable>& bound) {
    if (f->kind == SK::constant) return;
    collect_mso(f->guard, free, all, bound);
    collect_step(f->then_branch, free, all, bound);
    collect_step(f->else_branch, free, all, bound);
}

void collect_core(const CorePtr& f, std::set<Variable>& free, std::set<Variable>* all,
                  std::set<Variable> bound) {
    switch (f->kind) {
        case CK::zero: return;
        case CK::product: {
            if (all) all->insert(f->var);
            auto b = bound;
            b.insert(f->var);
            collect_step(f->step, free, all, b);
            return;
        }
        case CK::conditional:
            collect_mso(f->guard, free, all, bound);
            collect_core(f->left, free, all, bound);
            collect_core(f->right, free, all, std::move(bound));
            return;
        case CK::plus:
            collect_core(f->left, free, all, bound);
            collect_core(f->right, free, all, std::move(bound));
            return;
        case CK::sum_fo:
        case CK::sum_so:
            if (all) all->insert(f->var);
            bound.insert(f->var);
            collect_core(f->left, free, all, std::move(bound));
            return;
    }
}

} // namespace

std::set<Variable> free_vars(const MsoPtr& f) {
    std::set<Variable> free;
    collect_mso(f, free, nullptr, {});
    return free;
}
std::set<Variable> free_vars(const StepPtr& f) {
    std::set<Variable> free;
    collect_step(f, free, nullptr, {});
    return free;
}
std::set<Variable> free_vars(const CorePtr& f) {
    std::set<Variable> free;
    collect_core(f, free, nullptr, {});
    return free;
}

std::set<Variable> all_vars(const MsoPtr& f) {
    std::set<Variable> free, all;
    collect_mso(f, free, &all, {});
    return all;
}
std::set<Variable> all_vars(const StepPtr& f) {
    std::set<Variable> free, all;
    collect_step(f, free, &all, {});
    return all;
}
std::set<Variable> all_vars(const CorePtr& f) {
    std::set<Variable> free, all;
    collect_core(f, free, &all, {});
    return all;
}

MsoPtr rename_free(const MsoPtr& f, const Variable& from, const Variable& to) {
    switch (f->kind) {
        case MK::truth: return f;
        case MK::letter_at:
            return f->var == from ? mso_letter(f->letter, to) : f;
        case MK::leq: {
            if (f->var != from && f->var2 != from) return f;
            return mso_leq(f->var == from ? to : f->var, f->var2 == from ? to : f->var2);
        }
        case MK::membership: {
            if (f->var != from && f->var2 != from) return f;
            return mso_in(f->var == from ? to : f->var, f->var2 == from ? to : f->var2);
        }
        case MK::negation: {
            auto l = rename_free(f->left, from, to);
            return l == f->left ? f : mso_not(l);
        }
        case MK::conjunction: {
            auto l = rename_free(f->left, from, to);
            auto r = rename_free(f->right, from, to);
            return (l == f->left && r == f->right) ? f : mso_and(l, r);
        }
        case MK::forall_fo:
        case MK::forall_so: {
            if (f->var == from) return f; // shadowed
            auto l = rename_free(f->left, from, to);
            return l == f->left ? f : mso_forall(f->var, l);
        }
    }
    return f;
}

StepPtr rename_free(const StepPtr& f, const Variable& from, const Variable& to) {
    if (f->kind == SK::constant) return f;
    auto g = rename_free(f->guard, from, to);
    auto t = rename_free(f->then_branch, from, to);
    auto e = rename_free(f->else_branch, from, to);
    if (g == f->guard && t == f->then_branch && e == f->else_branch) return f;
    return step_cond(g, t, e);
}

CorePtr rename_free(const CorePtr& f, const Variable& from, const Variable& to) {
    switch (f->kind) {
        case CK::zero: return f;
        case CK::product: {
            if (f->var == from) return f;
            auto s = rename_free(f->step, from, to);
            return s == f->step ? f : core_product(f->var, s);
        }
        case CK::conditional: {
            auto g = rename_free(f->guard, from, to);
            auto l = rename_free(f->left, from, to);
            auto r = rename_free(f->right, from, to);
            if (g == f->guard && l == f->left && r == f->right) return f;
            return core_cond(g, l, r);
        }
        case CK::plus: {
            auto l = rename_free(f->left, from, to);
            auto r = rename_free(f->right, from, to);
            if (l == f->left && r == f->right) return f;
            return core_plus(l, r);
        }
        case CK::sum_fo:
        case CK::sum_so: {
            if (f->var == from) return f;
            auto l = rename_free(f->left, from, to);
            return l == f->left ? f : core_sum(f->var, l);
        }
    }
    return f;
}

std::vector<WeightId> weights_of(const StepPtr& f) {
    std::set<WeightId> seen;
    auto walk = [&](auto&& self, const StepPtr& g) -> void {
        if (g->kind == SK::constant) {
            seen.insert(g->weight);
        } else {
            self(self, g->then_branch);
            self(self, g->else_branch);
        }
    };
    walk(walk, f);
    return {seen.begin(), seen.end()};
}

Variable fresh_variable(const std::string& hint, const std::set<Variable>& taken) {
    Variable v = make_variable(hint);
    if (!taken.count(v)) return v;
    for (std::size_t i = 1;; ++i) {
        Variable w = make_variable(hint + std::to_string(i));
        if (!taken.count(w)) return w;
    }
}

namespace {

bool binders_ok_mso(const MsoPtr& f, std::set<Variable>& binders);
bool binders_ok_step(const StepPtr& f, std::set<Variable>& binders);
bool binders_ok_core(const CorePtr& f, std::set<Variable>& binders);

bool binders_ok_mso(const MsoPtr& f, std::set<Variable>& binders) {
    switch (f->kind) {
        case MK::truth:
        case MK::letter_at:
        case MK::leq:
        case MK::membership: return true;
        case MK::negation: return binders_ok_mso(f->left, binders);
        case MK::conjunction:
            return binders_ok_mso(f->left, binders) && binders_ok_mso(f->right, binders);
        case MK::forall_fo:
        case MK::forall_so:
            if (!binders.insert(f->var).second) return false;
            return binders_ok_mso(f->left, binders);
    }
    return true;
}

bool binders_ok_step(const StepPtr& f, std::set<Variable>& binders) {
    if (f->kind == SK::constant) return true;
    return binders_ok_mso(f->guard, binders) && binders_ok_step(f->then_branch, binders) &&
           binders_ok_step(f->else_branch, binders);
}

bool binders_ok_core(const CorePtr& f, std::set<Variable>& binders) {
    switch (f->kind) {
        case CK::zero: return true;
        case CK::product:
            if (!binders.insert(f->var).second) return false;
            return binders_ok_step(f->step, binders);
        case CK::conditional:
            return binders_ok_mso(f->guard, binders) && binders_ok_core(f->left, binders) &&
                   binders_ok_core(f->right, binders);
        case CK::plus:
            return binders_ok_core(f->left, binders) && binders_ok_core(f->right, binders);
        case CK::sum_fo:
        case CK::sum_so:
            if (!binders.insert(f->var).second) return false;
            return binders_ok_core(f->left, binders);
    }
    return true;
}

template <typename Ptr>
bool alpha_unique_impl(const Ptr& f) {
    std::set<Variable> binders;
    bool ok;
    if constexpr (std::is_same_v<Ptr, MsoPtr>)
        ok = binders_ok_mso(f, binders);
    else if constexpr (std::is_same_v<Ptr, StepPtr>)
        ok = binders_ok_step(f, binders);
    else
        ok = binders_ok_core(f, binders);
    if (!ok) return false;
    for (const auto& v : free_vars(f))
        if (binders.count(v)) return false;
    return true;
}

} // namespace

bool alpha_unique(const MsoPtr& f) { return alpha_unique_impl(f); }
bool alpha_unique(const StepPtr& f) { return alpha_unique_impl(f); }
bool alpha_unique(const CorePtr& f) { return alpha_unique_impl(f); }

} // namespace wmso
