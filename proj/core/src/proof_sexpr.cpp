#include "wmso/proof_sexpr.hpp"

#include <cctype>

#include "wmso/parse.hpp"
#include "wmso/print.hpp"

namespace wmso {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

void write_node(std::string& out, const ProofPtr& p, const Session& session, int depth) {
    std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    out += indent;
    out += '(';
    out += rule_name(p->rule);
    if (p->pivot) {
        out += " :phi ";
        out += quote(print_formula(p->pivot, session));
    }
    if (p->c17_l) {
        out += " :l ";
        out += std::to_string(*p->c17_l);
    }
    out += " :concl ";
    out += quote(judgement_to_text(p->conclusion, session));
    for (const auto& q : p->premises) {
        out += '\n';
        write_node(out, q, session, depth + 1);
    }
    out += ')';
}

struct SexprParser {
    std::string_view text;
    std::size_t pos = 0;
    const Session& session;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void err(const std::string& msg) const {
        throw ProofFormatError(msg + " at offset " + std::to_string(pos));
    }

    std::string parse_string() {
        if (pos >= text.size() || text[pos] != '"') err("expected a quoted string");
        ++pos;
        std::string out;
        while (pos < text.size() && text[pos] != '"') {
            if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
            out += text[pos++];
        }
        if (pos >= text.size()) err("unterminated string");
        ++pos;
        return out;
    }

    std::string parse_atom() {
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (start == pos) err("expected an atom");
        return std::string(text.substr(start, pos - start));
    }

    ProofPtr parse_node() {
        skip_ws();
        if (pos >= text.size() || text[pos] != '(') err("expected '('");
        ++pos;
        skip_ws();
        std::string name = parse_atom();
        auto rule = rule_from_name(name);
        if (!rule) err("unknown rule '" + name + "'");

        MsoPtr pivot;
        std::optional<long long> l;
        std::optional<Judgement> concl;
        std::vector<ProofPtr> premises;
        while (true) {
            skip_ws();
            if (pos >= text.size()) err("unterminated node");
            if (text[pos] == ')') {
                ++pos;
                break;
            }
            if (text[pos] == '(') {
                premises.push_back(parse_node());
                continue;
            }
            std::string key = parse_atom();
            skip_ws();
            if (key == ":phi") {
                pivot = parse_mso(parse_string(), session, /*alpha_normalize=*/false);
            } else if (key == ":l") {
                l = std::stoll(parse_atom());
            } else if (key == ":concl") {
                concl = judgement_from_text(parse_string(), session);
            } else {
                err("unknown key '" + key + "'");
            }
        }
        if (!concl) err("node misses :concl");
        return make_node(*rule, std::move(*concl), std::move(premises), std::move(pivot), l);
    }
};

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

std::string judgement_to_text(const Judgement& j, const Session& session) {
    std::string out = "{";
    for (std::size_t i = 0; i < j.gamma.size(); ++i) {
        if (i) out += " ; ";
        out += print_formula(j.gamma[i], session);
    }
    out += "} |- ";
    if (j.layer == Layer::step) {
        out += print_formula(j.step_lhs, session);
        out += " ~~ ";
        out += print_formula(j.step_rhs, session);
    } else {
        out += print_formula(j.core_lhs, session);
        out += " ~~ ";
        out += print_formula(j.core_rhs, session);
    }
    return out;
}

Judgement judgement_from_text(std::string_view text, const Session& session) {
    std::string_view s = trim_view(text);
    if (s.empty() || s.front() != '{')
        throw ProofFormatError("judgement must start with a {Gamma} list");
    std::size_t close = s.find('}');
    if (close == std::string_view::npos) throw ProofFormatError("unterminated Gamma list");
    std::string_view gamma_part = s.substr(1, close - 1);
    std::string_view rest = s.substr(close + 1);
    std::size_t turnstile = rest.find("|-");
    if (turnstile == std::string_view::npos) throw ProofFormatError("judgement misses '|-'");
    rest = rest.substr(turnstile + 2);
    std::size_t approx = rest.find("~~");
    if (approx == std::string_view::npos) throw ProofFormatError("judgement misses '~~'");
    std::string lhs(trim_view(rest.substr(0, approx)));
    std::string rhs(trim_view(rest.substr(approx + 2)));

    std::vector<MsoPtr> gamma;
    std::size_t start = 0;
    std::string gamma_str(gamma_part);
    while (start <= gamma_str.size()) {
        std::size_t semi = gamma_str.find(';', start);
        std::string item(trim_view(std::string_view(gamma_str).substr(
            start, semi == std::string::npos ? std::string::npos : semi - start)));
        if (!item.empty())
            gamma.push_back(parse_mso(item, session, /*alpha_normalize=*/false));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }

    // the layers are syntactically disjoint: try step first, then core
    try {
        StepPtr l = parse_step(lhs, session, /*alpha_normalize=*/false);
        StepPtr r = parse_step(rhs, session, /*alpha_normalize=*/false);
        return judgement(std::move(gamma), std::move(l), std::move(r));
    } catch (const ParseError&) {
    }
    CorePtr l = parse_core(lhs, session, /*alpha_normalize=*/false);
    CorePtr r = parse_core(rhs, session, /*alpha_normalize=*/false);
    return judgement(std::move(gamma), std::move(l), std::move(r));
}

std::string proof_to_sexpr(const ProofPtr& p, const Session& session) {
    std::string out;
    write_node(out, p, session, 0);
    out += '\n';
    return out;
}

ProofPtr proof_from_sexpr(std::string_view text, const Session& session) {
    SexprParser parser{text, 0, session};
    ProofPtr p = parser.parse_node();
    parser.skip_ws();
    if (parser.pos != text.size())
        throw ProofFormatError("trailing input after the proof");
    return p;
}

} // namespace wmso
