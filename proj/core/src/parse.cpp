#include "wmso/parse.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace wmso {

namespace {

enum class Tok : std::uint8_t {
    word,    // identifier or digit run
    lparen, rparen, dot,
    bang, amp, pipe, arrow, darrow,
    leq, lt, eq,
    question, colon, plus,
    end,
};

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t pos;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) { tokenize(); }
    const std::vector<Token>& tokens() const { return tokens_; }

  private:
    void tokenize() {
        std::size_t i = 0;
        auto push = [&](Tok k, std::size_t start, std::size_t len) {
            tokens_.push_back({k, text_.substr(start, len), start});
        };
        while (i < text_.size()) {
            char c = text_[i];
            if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = i;
                while (i < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_'))
                    ++i;
                push(Tok::word, start, i - start);
                continue;
            }
            switch (c) {
                case '(': push(Tok::lparen, i, 1); ++i; break;
                case ')': push(Tok::rparen, i, 1); ++i; break;
                case '.': push(Tok::dot, i, 1); ++i; break;
                case '!': push(Tok::bang, i, 1); ++i; break;
                case '&': push(Tok::amp, i, 1); ++i; break;
                case '|': push(Tok::pipe, i, 1); ++i; break;
                case '?': push(Tok::question, i, 1); ++i; break;
                case ':': push(Tok::colon, i, 1); ++i; break;
                case '+': push(Tok::plus, i, 1); ++i; break;
                case '-':
                    if (i + 1 < text_.size() && text_[i + 1] == '>') {
                        push(Tok::arrow, i, 2); i += 2; break;
                    }
                    throw ParseError("stray '-'", i);
                case '<':
                    if (i + 2 < text_.size() && text_[i + 1] == '-' && text_[i + 2] == '>') {
                        push(Tok::darrow, i, 3); i += 3; break;
                    }
                    if (i + 1 < text_.size() && text_[i + 1] == '=') {
                        push(Tok::leq, i, 2); i += 2; break;
                    }
                    push(Tok::lt, i, 1); ++i; break;
                case '=': push(Tok::eq, i, 1); ++i; break;
                default:
                    throw ParseError(std::string("unexpected character '") + c + "'", i);
            }
        }
        tokens_.push_back({Tok::end, {}, text_.size()});
    }

    std::string_view text_;
    std::vector<Token> tokens_;
};

bool is_keyword(std::string_view w) {
    return w == "true" || w == "zero" || w == "sum" || w == "prod" || w == "forall" ||
           w == "exists" || w == "in";
}

class Parser {
  public:
    Parser(std::string_view text, const Session& session)
        : lexer_(text), session_(session) {}

    MsoPtr mso(bool alpha_normalize) {
        auto f = parse_iff();
        expect_end();
        return alpha_normalize ? alpha(f) : f;
    }
    StepPtr step(bool alpha_normalize) {
        auto f = parse_step();
        expect_end();
        return alpha_normalize ? alpha(f) : f;
    }
    CorePtr core(bool alpha_normalize) {
        auto f = parse_core();
        expect_end();
        return alpha_normalize ? alpha(f) : f;
    }

  private:
    const Token& peek() const { return lexer_.tokens()[pos_]; }
    const Token& next() { return lexer_.tokens()[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) { ++pos_; return true; }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().pos);
    }
    void expect_end() {
        if (peek().kind != Tok::end)
            throw ParseError("trailing input after formula", peek().pos);
    }
    bool at_word(std::string_view w) const {
        return peek().kind == Tok::word && peek().text == w;
    }

    Variable parse_var(bool want_first, bool want_second) {
        if (peek().kind != Tok::word || is_keyword(peek().text) ||
            std::isdigit(static_cast<unsigned char>(peek().text[0])))
            throw ParseError("expected a variable name", peek().pos);
        Variable v = make_variable(std::string(next().text));
        if (want_first && !v.is_first_order())
            throw ParseError("expected a first-order (lowercase) variable", peek().pos);
        if (want_second && !v.is_second_order())
            throw ParseError("expected a second-order (uppercase) variable", peek().pos);
        return v;
    }

    // --- MSO layer ------------------------------------------------------

    MsoPtr parse_iff() {
        auto lhs = parse_impl();
        while (accept(Tok::darrow)) lhs = mso_iff(lhs, parse_impl());
        return lhs;
    }

    MsoPtr parse_impl() {
        auto lhs = parse_or();
        if (accept(Tok::arrow)) return mso_implies(lhs, parse_impl());
        return lhs;
    }

    MsoPtr parse_or() {
        auto lhs = parse_and();
        while (accept(Tok::pipe)) lhs = mso_or(lhs, parse_and());
        return lhs;
    }

    MsoPtr parse_and() {
        auto lhs = parse_unary();
        while (accept(Tok::amp)) lhs = mso_and(lhs, parse_unary());
        return lhs;
    }

    MsoPtr parse_unary() {
        if (accept(Tok::bang)) return mso_not(parse_unary());
        if (at_word("forall") || at_word("exists")) {
            bool universal = peek().text == "forall";
            ++pos_;
            Variable v = parse_var(false, false);
            expect(Tok::dot, "'.' after quantified variable");
            auto body = parse_iff();
            return universal ? mso_forall(v, body) : mso_exists(v, body);
        }
        return parse_atom();
    }

    MsoPtr parse_atom() {
        const Token& t = peek();
        if (accept(Tok::lparen)) {
            auto f = parse_iff();
            expect(Tok::rparen, "')'");
            return f;
        }
        if (t.kind != Tok::word) throw ParseError("expected an atomic formula", t.pos);
        if (t.text == "true") { ++pos_; return mso_true(); }
        if (is_keyword(t.text)) throw ParseError("unexpected keyword in formula", t.pos);

        // P<letter>(x) when followed by '('.
        if (t.text.size() > 1 && t.text[0] == 'P' &&
            lexer_.tokens()[pos_ + 1].kind == Tok::lparen) {
            std::string_view letter = t.text.substr(1);
            auto id = session_.alphabet.find(letter);
            if (!id)
                throw ParseError("unknown letter '" + std::string(letter) + "'", t.pos);
            ++pos_;
            expect(Tok::lparen, "'('");
            Variable x = parse_var(true, false);
            expect(Tok::rparen, "')'");
            return mso_letter(*id, x);
        }

        Variable x = parse_var(false, false);
        if (accept(Tok::leq)) return mso_leq(x, parse_var(true, false));
        if (accept(Tok::lt)) return mso_lt(x, parse_var(true, false));
        if (accept(Tok::eq)) return mso_eq(x, parse_var(true, false));
        if (peek().kind == Tok::word && peek().text == "in") {
            ++pos_;
            return mso_in(x, parse_var(false, true));
        }
        throw ParseError("expected a relation after variable '" + x.name + "'", peek().pos);
    }

    // Tries to parse an MSO formula followed by '?'. On failure the token
    // position is restored and nullopt returned.
    std::optional<MsoPtr> try_guard() {
        std::size_t save = pos_;
        try {
            auto g = parse_iff();
            if (accept(Tok::question)) return g;
        } catch (const ParseError&) {
        }
        pos_ = save;
        return std::nullopt;
    }

    // --- step layer -----------------------------------------------------

    StepPtr parse_step() {
        if (auto g = try_guard()) {
            auto then_branch = parse_step();
            StepPtr else_branch = accept(Tok::colon) ? parse_step()
                                                     : step_const(session_.default_weight);
            return step_cond(*g, then_branch, else_branch);
        }
        const Token& t = peek();
        if (accept(Tok::lparen)) {
            auto f = parse_step();
            expect(Tok::rparen, "')'");
            return f;
        }
        if (t.kind == Tok::word && !is_keyword(t.text)) {
            auto id = session_.weights.find(t.text);
            if (!id) throw ParseError("unknown weight '" + std::string(t.text) + "'", t.pos);
            ++pos_;
            return step_const(*id);
        }
        throw ParseError("expected a step formula (weight or conditional)", t.pos);
    }

    // --- core layer -----------------------------------------------------

    CorePtr parse_core() {
        if (auto g = try_guard()) {
            auto then_branch = parse_core();
            CorePtr else_branch = accept(Tok::colon) ? parse_core() : core_zero();
            return core_cond(*g, then_branch, else_branch);
        }
        return parse_core_sum();
    }

    CorePtr parse_core_sum() {
        auto lhs = parse_core_term();
        while (accept(Tok::plus)) lhs = core_plus(lhs, parse_core_term());
        return lhs;
    }

    CorePtr parse_core_term() {
        const Token& t = peek();
        if (accept(Tok::lparen)) {
            auto f = parse_core();
            expect(Tok::rparen, "')'");
            return f;
        }
        if (at_word("zero")) { ++pos_; return core_zero(); }
        if (at_word("prod")) {
            ++pos_;
            Variable x = parse_var(true, false);
            expect(Tok::dot, "'.' after prod binder");
            return core_product(x, parse_step());
        }
        if (at_word("sum")) {
            ++pos_;
            Variable v = parse_var(false, false);
            expect(Tok::dot, "'.' after sum binder");
            return core_sum(v, parse_core());
        }
        throw ParseError("expected a core formula", t.pos);
    }

    // --- alpha-renaming -------------------------------------------------
    //
    // Renames binders so that no two binders share a variable and no binder
    // shadows a free variable; substitution in the axioms is then plain
    // renaming.

    struct AlphaState {
        std::set<Variable> taken;
        std::map<Variable, Variable> env;
    };

    Variable alpha_bind(AlphaState& st, const Variable& v, Variable& saved, bool& had) {
        had = st.env.count(v) != 0;
        if (had) saved = st.env.at(v);
        Variable fresh = st.taken.count(v) ? fresh_variable(v.name, st.taken) : v;
        st.taken.insert(fresh);
        st.env[v] = fresh;
        return fresh;
    }
    void alpha_unbind(AlphaState& st, const Variable& v, const Variable& saved, bool had) {
        if (had)
            st.env[v] = saved;
        else
            st.env.erase(v);
    }
    Variable alpha_use(AlphaState& st, const Variable& v) {
        auto it = st.env.find(v);
        return it == st.env.end() ? v : it->second;
    }

    MsoPtr alpha_mso(const MsoPtr& f, AlphaState& st) {
        using MK = MsoFormula::Kind;
        switch (f->kind) {
            case MK::truth: return f;
            case MK::letter_at: return mso_letter(f->letter, alpha_use(st, f->var));
            case MK::leq: return mso_leq(alpha_use(st, f->var), alpha_use(st, f->var2));
            case MK::membership: return mso_in(alpha_use(st, f->var), alpha_use(st, f->var2));
            case MK::negation: return mso_not(alpha_mso(f->left, st));
            case MK::conjunction: {
                auto l = alpha_mso(f->left, st);
                auto r = alpha_mso(f->right, st);
                return mso_and(std::move(l), std::move(r));
            }
            case MK::forall_fo:
            case MK::forall_so: {
                Variable saved; bool had;
                Variable v = alpha_bind(st, f->var, saved, had);
                auto body = alpha_mso(f->left, st);
                alpha_unbind(st, f->var, saved, had);
                return mso_forall(v, body);
            }
        }
        return f;
    }

    StepPtr alpha_step(const StepPtr& f, AlphaState& st) {
        if (f->kind == StepFormula::Kind::constant) return f;
        auto g = alpha_mso(f->guard, st);
        auto t = alpha_step(f->then_branch, st);
        auto e = alpha_step(f->else_branch, st);
        return step_cond(g, t, e);
    }

    CorePtr alpha_core(const CorePtr& f, AlphaState& st) {
        using CK = CoreFormula::Kind;
        switch (f->kind) {
            case CK::zero: return f;
            case CK::product: {
                Variable saved; bool had;
                Variable v = alpha_bind(st, f->var, saved, had);
                auto body = alpha_step(f->step, st);
                alpha_unbind(st, f->var, saved, had);
                return core_product(v, body);
            }
            case CK::conditional: {
                auto g = alpha_mso(f->guard, st);
                auto l = alpha_core(f->left, st);
                auto r = alpha_core(f->right, st);
                return core_cond(std::move(g), std::move(l), std::move(r));
            }
            case CK::plus: {
                auto l = alpha_core(f->left, st);
                auto r = alpha_core(f->right, st);
                return core_plus(std::move(l), std::move(r));
            }
            case CK::sum_fo:
            case CK::sum_so: {
                Variable saved; bool had;
                Variable v = alpha_bind(st, f->var, saved, had);
                auto body = alpha_core(f->left, st);
                alpha_unbind(st, f->var, saved, had);
                return core_sum(v, body);
            }
        }
        return f;
    }

    template <typename Ptr>
    Ptr alpha(const Ptr& f) {
        AlphaState st;
        st.taken = free_vars(f);
        if constexpr (std::is_same_v<Ptr, MsoPtr>)
            return alpha_mso(f, st);
        else if constexpr (std::is_same_v<Ptr, StepPtr>)
            return alpha_step(f, st);
        else
            return alpha_core(f, st);
    }

    Lexer lexer_;
    const Session& session_;
    std::size_t pos_ = 0;
};

} // namespace

MsoPtr parse_mso(std::string_view text, const Session& session, bool alpha_normalize) {
    return Parser(text, session).mso(alpha_normalize);
}
StepPtr parse_step(std::string_view text, const Session& session, bool alpha_normalize) {
    return Parser(text, session).step(alpha_normalize);
}
CorePtr parse_core(std::string_view text, const Session& session, bool alpha_normalize) {
    return Parser(text, session).core(alpha_normalize);
}

ParsedFormula parse_formula(std::string_view text, Layer layer, const Session& session,
                            bool alpha_normalize) {
    switch (layer) {
        case Layer::mso: return parse_mso(text, session, alpha_normalize);
        case Layer::step: return parse_step(text, session, alpha_normalize);
        case Layer::core: return parse_core(text, session, alpha_normalize);
    }
    throw ParseError("unknown layer", 0);
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t position) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < position && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
    return {line, col};
}

} // namespace wmso
