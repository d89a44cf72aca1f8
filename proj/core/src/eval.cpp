#include "wmso/eval.hpp"

namespace wmso {

namespace {
using MK = MsoFormula::Kind;
using SK = StepFormula::Kind;
using CK = CoreFormula::Kind;

std::size_t fo_value(const PointedWord& pw, const Variable& v) {
    auto it = pw.fo_val.find(v);
    if (it == pw.fo_val.end())
        throw UncoveredVariableError("free variable " + v.name + " not covered by the valuation");
    return it->second;
}

const std::set<std::size_t>& so_value(const PointedWord& pw, const Variable& v) {
    auto it = pw.so_val.find(v);
    if (it == pw.so_val.end())
        throw UncoveredVariableError("free variable " + v.name + " not covered by the valuation");
    return it->second;
}

} // namespace

bool mso_holds(const MsoPtr& f, const PointedWord& pw) {
    switch (f->kind) {
        case MK::truth: return true;
        case MK::letter_at: return pw.word.at(fo_value(pw, f->var) - 1) == f->letter;
        case MK::leq: return fo_value(pw, f->var) <= fo_value(pw, f->var2);
        case MK::membership: return so_value(pw, f->var2).count(fo_value(pw, f->var)) != 0;
        case MK::negation: return !mso_holds(f->left, pw);
        case MK::conjunction: return mso_holds(f->left, pw) && mso_holds(f->right, pw);
        case MK::forall_fo: {
            for (std::size_t i = 1; i <= pw.length(); ++i)
                if (!mso_holds(f->left, pw.with_fo(f->var, i))) return false;
            return true;
        }
        case MK::forall_so: {
            std::size_t n = pw.length();
            for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
                std::set<std::size_t> I;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (1ull << i)) I.insert(i + 1);
                if (!mso_holds(f->left, pw.with_so(f->var, std::move(I)))) return false;
            }
            return true;
        }
    }
    throw EvalError("corrupt MSO formula");
}

WeightId eval_step(const StepPtr& f, const PointedWord& pw) {
    if (f->kind == SK::constant) return f->weight;
    return mso_holds(f->guard, pw) ? eval_step(f->then_branch, pw)
                                   : eval_step(f->else_branch, pw);
}

WeightMultiset eval_core(const CorePtr& f, const PointedWord& pw) {
    switch (f->kind) {
        case CK::zero: return {};
        case CK::product: {
            WeightString s;
            s.reserve(pw.length());
            for (std::size_t i = 1; i <= pw.length(); ++i)
                s.push_back(eval_step(f->step, pw.with_fo(f->var, i)));
            WeightMultiset m;
            m.add(s);
            return m;
        }
        case CK::conditional:
            return mso_holds(f->guard, pw) ? eval_core(f->left, pw) : eval_core(f->right, pw);
        case CK::plus:
            return WeightMultiset::multiset_union(eval_core(f->left, pw),
                                                  eval_core(f->right, pw));
        case CK::sum_fo: {
            WeightMultiset m;
            for (std::size_t i = 1; i <= pw.length(); ++i)
                m = WeightMultiset::multiset_union(m, eval_core(f->left, pw.with_fo(f->var, i)));
            return m;
        }
        case CK::sum_so: {
            WeightMultiset m;
            std::size_t n = pw.length();
            for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
                std::set<std::size_t> I;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (1ull << i)) I.insert(i + 1);
                m = WeightMultiset::multiset_union(
                    m, eval_core(f->left, pw.with_so(f->var, std::move(I))));
            }
            return m;
        }
    }
    throw EvalError("corrupt core formula");
}

bool satisfies_all(const std::vector<MsoPtr>& gamma, const PointedWord& pw) {
    for (const auto& g : gamma)
        if (!mso_holds(g, pw)) return false;
    return true;
}

void enumerate_pointed_words(const Alphabet& alphabet, const std::set<Variable>& vars,
                             std::size_t max_len,
                             const std::function<bool(const PointedWord&)>& visit) {
    std::vector<Variable> vs(vars.begin(), vars.end());
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<LetterId> word(len, 0);
        bool words_done = false;
        while (!words_done) {
            // valuation odometer, last variable fastest
            std::vector<std::uint64_t> val(vs.size(), 0);
            bool vals_done = false;
            while (!vals_done) {
                PointedWord pw;
                pw.word = word;
                for (std::size_t k = 0; k < vs.size(); ++k) {
                    if (vs[k].is_first_order()) {
                        pw.fo_val[vs[k]] = val[k] + 1;
                    } else {
                        std::set<std::size_t> I;
                        for (std::size_t i = 0; i < len; ++i)
                            if (val[k] & (1ull << i)) I.insert(i + 1);
                        pw.so_val[vs[k]] = std::move(I);
                    }
                }
                if (!visit(pw)) return;
                // advance valuation
                vals_done = true;
                for (std::size_t k = vs.size(); k-- > 0;) {
                    std::uint64_t limit =
                        vs[k].is_first_order() ? len : (1ull << len);
                    if (++val[k] < limit) {
                        vals_done = false;
                        break;
                    }
                    val[k] = 0;
                }
                if (vs.empty()) vals_done = true;
            }
            // advance word
            words_done = true;
            for (std::size_t p = len; p-- > 0;) {
                if (++word[p] < alphabet.size()) {
                    words_done = false;
                    break;
                }
                word[p] = 0;
            }
        }
    }
}

namespace {

template <typename Ptr, typename Eval>
GammaEquivResult gamma_equiv_impl(const std::vector<MsoPtr>& gamma, const Ptr& chi1,
                                  const Ptr& chi2, std::size_t max_len,
                                  const Alphabet& alphabet, Eval&& eval) {
    std::set<Variable> vars = free_vars(chi1);
    for (const auto& v : free_vars(chi2)) vars.insert(v);
    for (const auto& g : gamma)
        for (const auto& v : free_vars(g)) vars.insert(v);
    GammaEquivResult result;
    enumerate_pointed_words(alphabet, vars, max_len, [&](const PointedWord& pw) {
        if (!satisfies_all(gamma, pw)) return true;
        if (eval(chi1, pw) != eval(chi2, pw)) {
            result.equal = false;
            result.witness = pw;
            return false;
        }
        return true;
    });
    return result;
}

} // namespace

GammaEquivResult gamma_equiv_bounded(const std::vector<MsoPtr>& gamma, const StepPtr& chi1,
                                     const StepPtr& chi2, std::size_t max_len,
                                     const Alphabet& alphabet) {
    return gamma_equiv_impl(gamma, chi1, chi2, max_len, alphabet,
                            [](const StepPtr& f, const PointedWord& pw) {
                                return eval_step(f, pw);
                            });
}

GammaEquivResult gamma_equiv_bounded(const std::vector<MsoPtr>& gamma, const CorePtr& chi1,
                                     const CorePtr& chi2, std::size_t max_len,
                                     const Alphabet& alphabet) {
    return gamma_equiv_impl(gamma, chi1, chi2, max_len, alphabet,
                            [](const CorePtr& f, const PointedWord& pw) {
                                return eval_core(f, pw);
                            });
}

} // namespace wmso
