#include "wmso/print.hpp"

namespace wmso {

namespace {
using MK = MsoFormula::Kind;
using SK = StepFormula::Kind;
using CK = CoreFormula::Kind;

// MSO levels: quantifier 0, conjunction 3, negation 4, atoms 5.
int mso_level(const MsoPtr& f) {
    switch (f->kind) {
        case MK::forall_fo:
        case MK::forall_so: return 0;
        case MK::conjunction: return 3;
        case MK::negation: return 4;
        default: return 5;
    }
}

void print_mso(std::string& out, const MsoPtr& f, const Session& s, int min_level) {
    bool parens = mso_level(f) < min_level;
    if (parens) out += '(';
    switch (f->kind) {
        case MK::truth: out += "true"; break;
        case MK::letter_at:
            out += 'P';
            out += s.alphabet.name(f->letter);
            out += '(';
            out += f->var.name;
            out += ')';
            break;
        case MK::leq:
            out += f->var.name;
            out += " <= ";
            out += f->var2.name;
            break;
        case MK::membership:
            out += f->var.name;
            out += " in ";
            out += f->var2.name;
            break;
        case MK::negation:
            out += '!';
            print_mso(out, f->left, s, 4);
            break;
        case MK::conjunction:
            print_mso(out, f->left, s, 3);
            out += " & ";
            print_mso(out, f->right, s, 4);
            break;
        case MK::forall_fo:
        case MK::forall_so:
            out += "forall ";
            out += f->var.name;
            out += ". ";
            print_mso(out, f->left, s, 0);
            break;
    }
    if (parens) out += ')';
}

// Guards are parenthesized unless atomic.
void print_guard(std::string& out, const MsoPtr& g, const Session& s) {
    print_mso(out, g, s, 5);
}

void print_step(std::string& out, const StepPtr& f, const Session& s, bool parenthesize_cond) {
    if (f->kind == SK::constant) {
        out += s.weights.name(f->weight);
        return;
    }
    if (parenthesize_cond) out += '(';
    print_guard(out, f->guard, s);
    out += " ? ";
    print_step(out, f->then_branch, s, true);
    out += " : ";
    print_step(out, f->else_branch, s, false);
    if (parenthesize_cond) out += ')';
}

// Core levels: conditional/binders 0, plus 1, zero 2.
int core_level(const CorePtr& f) {
    switch (f->kind) {
        case CK::zero: return 2;
        case CK::plus: return 1;
        default: return 0;
    }
}

void print_core(std::string& out, const CorePtr& f, const Session& s, int min_level) {
    bool parens = core_level(f) < min_level;
    if (parens) out += '(';
    switch (f->kind) {
        case CK::zero: out += "zero"; break;
        case CK::product:
            out += "prod ";
            out += f->var.name;
            out += ". ";
            print_step(out, f->step, s, false);
            break;
        case CK::conditional:
            print_guard(out, f->guard, s);
            out += " ? ";
            print_core(out, f->left, s, 0);
            out += " : ";
            print_core(out, f->right, s, 0);
            break;
        case CK::plus:
            print_core(out, f->left, s, 1);
            out += " + ";
            print_core(out, f->right, s, 2);
            break;
        case CK::sum_fo:
        case CK::sum_so:
            out += "sum ";
            out += f->var.name;
            out += ". ";
            print_core(out, f->left, s, 0);
            break;
    }
    if (parens) out += ')';
}

} // namespace

std::string print_formula(const MsoPtr& f, const Session& session) {
    std::string out;
    print_mso(out, f, session, 0);
    return out;
}

std::string print_formula(const StepPtr& f, const Session& session) {
    std::string out;
    print_step(out, f, session, false);
    return out;
}

std::string print_formula(const CorePtr& f, const Session& session) {
    std::string out;
    print_core(out, f, session, 0);
    return out;
}

} // namespace wmso
