#include "wmso/session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wmso {

namespace {

void check_distinct(const std::vector<std::string>& items, const char* what) {
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i + 1; j < items.size(); ++j)
            if (items[i] == items[j])
                throw SessionError(std::string("duplicate ") + what + ": " + items[i]);
}

} // namespace

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw SessionError("alphabet must be nonempty");
    check_distinct(letters_, "letter");
}

std::optional<LetterId> Alphabet::find(std::string_view name) const {
    for (std::size_t i = 0; i < letters_.size(); ++i)
        if (letters_[i] == name) return static_cast<LetterId>(i);
    return std::nullopt;
}

WeightSet::WeightSet(std::vector<std::string> names) : names_(std::move(names)) {
    check_distinct(names_, "weight");
    for (const auto& n : names_)
        if (n.find('.') != std::string::npos)
            throw SessionError("weight names must be dot-free: " + n);
}

std::optional<WeightId> WeightSet::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<WeightId>(i);
    return std::nullopt;
}

Variable make_variable(std::string name) {
    if (name.empty()) throw SessionError("empty variable name");
    VarOrder order = std::isupper(static_cast<unsigned char>(name[0])) ? VarOrder::second
                                                                       : VarOrder::first;
    return Variable{std::move(name), order};
}

Session Session::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SessionError(std::string("session header is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("alphabet") || !j.contains("weights"))
        throw SessionError("session header needs \"alphabet\" and \"weights\" arrays");
    Session s;
    s.alphabet = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
    s.weights = WeightSet(j.at("weights").get<std::vector<std::string>>());
    if (j.contains("default_weight")) {
        auto name = j.at("default_weight").get<std::string>();
        auto id = s.weights.find(name);
        if (!id) throw SessionError("default_weight \"" + name + "\" not in weight set");
        s.default_weight = *id;
    } else if (s.weights.size() == 0) {
        throw SessionError("empty weight set needs no default, but formulas need weights");
    }
    return s;
}

Session Session::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SessionError("cannot open session header: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string Session::to_json_text() const {
    nlohmann::ordered_json j;
    j["alphabet"] = alphabet.names();
    j["weights"] = weights.names();
    j["default_weight"] = weights.name(default_weight);
    return j.dump();
}

} // namespace wmso
