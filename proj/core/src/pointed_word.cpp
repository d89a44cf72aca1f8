#include "wmso/pointed_word.hpp"

#include <cctype>
#include <sstream>

namespace wmso {

PointedWord PointedWord::with_fo(const Variable& x, std::size_t i) const {
    PointedWord r = *this;
    r.fo_val[x] = i;
    return r;
}

PointedWord PointedWord::with_so(const Variable& X, std::set<std::size_t> I) const {
    PointedWord r = *this;
    r.so_val[X] = std::move(I);
    return r;
}

std::set<Variable> PointedWord::assigned() const {
    std::set<Variable> out;
    for (const auto& [v, _] : fo_val) out.insert(v);
    for (const auto& [v, _] : so_val) out.insert(v);
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<LetterId> parse_word(std::string_view text, const Alphabet& alphabet,
                                 const std::string& context) {
    // Greedy longest-match segmentation into declared letters.
    std::vector<LetterId> out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t best_len = 0;
        LetterId best = 0;
        for (LetterId a = 0; a < alphabet.size(); ++a) {
            const std::string& name = alphabet.name(a);
            if (name.size() > best_len && text.compare(i, name.size(), name) == 0) {
                best_len = name.size();
                best = a;
            }
        }
        if (best_len == 0)
            throw EvalError(context + ": cannot read a letter at '" +
                            std::string(text.substr(i)) + "'");
        out.push_back(best);
        i += best_len;
    }
    if (out.empty()) throw EvalError(context + ": word must be nonempty");
    return out;
}

} // namespace

PointedWord PointedWord::from_text(std::string_view text, const Session& session) {
    PointedWord pw;
    std::size_t start = 0;
    bool saw_word = false;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        std::string_view item = trim(text.substr(
            start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
        start = semi == std::string_view::npos ? text.size() + 1 : semi + 1;
        if (item.empty()) continue;
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos)
            throw EvalError("pointed word item needs '=': " + std::string(item));
        std::string_view key = trim(item.substr(0, eq));
        std::string_view val = trim(item.substr(eq + 1));
        if (key == "word") {
            pw.word = parse_word(val, session.alphabet, "pointed word");
            saw_word = true;
            continue;
        }
        Variable v = make_variable(std::string(key));
        if (v.is_first_order()) {
            std::size_t pos = 0;
            try {
                pos = std::stoull(std::string(val));
            } catch (...) {
                throw EvalError("bad position for " + v.name + ": " + std::string(val));
            }
            pw.fo_val[v] = pos;
        } else {
            if (val.size() < 2 || val.front() != '{' || val.back() != '}')
                throw EvalError("second-order value must be {..}: " + std::string(val));
            std::set<std::size_t> set;
            std::string inner(val.substr(1, val.size() - 2));
            std::istringstream ss(inner);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                auto t = trim(tok);
                if (t.empty()) continue;
                try {
                    set.insert(std::stoull(std::string(t)));
                } catch (...) {
                    throw EvalError("bad position in set for " + v.name + ": " + std::string(t));
                }
            }
            pw.so_val[v] = std::move(set);
        }
    }
    if (!saw_word) throw EvalError("pointed word needs a 'word=' item");
    for (const auto& [v, i] : pw.fo_val)
        if (i < 1 || i > pw.word.size())
            throw EvalError("position of " + v.name + " out of range");
    for (const auto& [v, s] : pw.so_val)
        for (auto i : s)
            if (i < 1 || i > pw.word.size())
                throw EvalError("position in " + v.name + " out of range");
    return pw;
}

std::string PointedWord::to_text(const Session& session) const {
    std::string out = "word=";
    for (auto a : word) out += session.alphabet.name(a);
    for (const auto& [v, i] : fo_val) {
        out += "; ";
        out += v.name;
        out += '=';
        out += std::to_string(i);
    }
    for (const auto& [v, s] : so_val) {
        out += "; ";
        out += v.name;
        out += "={";
        bool first = true;
        for (auto i : s) {
            if (!first) out += ',';
            first = false;
            out += std::to_string(i);
        }
        out += '}';
    }
    return out;
}

} // namespace wmso
