#ifndef WMSO_SESSION_HPP
#define WMSO_SESSION_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wmso {

/// Index of a letter in the session alphabet.
using LetterId = std::uint32_t;
/// Index of a weight symbol in the session weight set.
using WeightId = std::uint32_t;

struct SessionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite ordered alphabet. Letters are interned strings; the position in
/// `letters` is the letter's id and fixes the canonical letter order.
class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> letters);

    std::size_t size() const { return letters_.size(); }
    const std::string& name(LetterId id) const { return letters_.at(id); }
    const std::vector<std::string>& names() const { return letters_; }
    std::optional<LetterId> find(std::string_view name) const;

    bool operator==(const Alphabet&) const = default;

  private:
    std::vector<std::string> letters_;
};

/// Finite ordered set of weight symbols with exact symbol equality.
class WeightSet {
  public:
    WeightSet() = default;
    explicit WeightSet(std::vector<std::string> names);

    std::size_t size() const { return names_.size(); }
    const std::string& name(WeightId id) const { return names_.at(id); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<WeightId> find(std::string_view name) const;

    bool operator==(const WeightSet&) const = default;

  private:
    std::vector<std::string> names_;
};

enum class VarOrder : std::uint8_t { first, second };

/// A logical variable. First-order and second-order variables live in
/// disjoint namespaces distinguished by the order tag; in the concrete
/// syntax the case of the leading character encodes the order.
struct Variable {
    std::string name;
    VarOrder order = VarOrder::first;

    bool is_first_order() const { return order == VarOrder::first; }
    bool is_second_order() const { return order == VarOrder::second; }

    friend bool operator==(const Variable&, const Variable&) = default;
    friend auto operator<=>(const Variable& a, const Variable& b) {
        if (auto c = a.order <=> b.order; c != 0) return c;
        return a.name <=> b.name;
    }
};

/// Derives the variable order from the spelling: identifiers starting with
/// an uppercase letter are second-order, everything else first-order.
Variable make_variable(std::string name);

/// A session fixes the alphabet, the declared finite weight set and the
/// designated default weight used when the step-layer `phi ? Psi` sugar is
/// expanded. Loaded from the JSON header file.
struct Session {
    Alphabet alphabet;
    WeightSet weights;
    WeightId default_weight = 0;

    static Session from_json_text(std::string_view text);
    static Session from_json_file(const std::string& path);
    std::string to_json_text() const;
};

} // namespace wmso

#endif
