#include "wmso/multiset.hpp"

#include <json.hpp>

#include "wmso/pointed_word.hpp"

namespace wmso {

void WeightMultiset::add(const WeightString& s, const Count& n) {
    if (n == 0) return;
    if (!entries_.empty() && entries_.begin()->first.size() != s.size())
        throw EvalError("weight strings of mixed lengths in one multiset");
    entries_[s] += n;
}

Count WeightMultiset::count_of(const WeightString& s) const {
    auto it = entries_.find(s);
    return it == entries_.end() ? Count(0) : it->second;
}

Count WeightMultiset::total() const {
    Count t = 0;
    for (const auto& [_, n] : entries_) t += n;
    return t;
}

WeightMultiset WeightMultiset::multiset_union(const WeightMultiset& a, const WeightMultiset& b) {
    WeightMultiset out = a;
    for (const auto& [s, n] : b.entries_) out.add(s, n);
    return out;
}

std::string weight_string_key(const WeightString& s, const WeightSet& weights) {
    std::string key;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) key += '.';
        key += weights.name(s[i]);
    }
    return key;
}

std::string WeightMultiset::to_json(const WeightSet& weights) const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [s, n] : entries_) j[weight_string_key(s, weights)] = n.str();
    return j.dump();
}

WeightMultiset WeightMultiset::from_json(std::string_view text, const WeightSet& weights) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw EvalError(std::string("multiset is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw EvalError("multiset JSON must be an object");
    WeightMultiset out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        WeightString s;
        const std::string& key = it.key();
        std::size_t start = 0;
        while (start <= key.size() && !key.empty()) {
            std::size_t dot = key.find('.', start);
            std::string part = key.substr(
                start, dot == std::string::npos ? std::string::npos : dot - start);
            auto id = weights.find(part);
            if (!id) throw EvalError("unknown weight '" + part + "' in multiset key");
            s.push_back(*id);
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        Count n = it.value().is_string() ? Count(it.value().template get<std::string>())
                                         : Count(it.value().template get<std::int64_t>());
        out.add(s, n);
    }
    return out;
}

std::string WeightMultiset::to_text(const WeightSet& weights) const {
    std::string out = "{";
    bool first = true;
    for (const auto& [s, n] : entries_) {
        if (!first) out += ", ";
        first = false;
        out += weight_string_key(s, weights);
        if (n != 1) {
            out += " x";
            out += n.str();
        }
    }
    out += '}';
    return out;
}

} // namespace wmso
