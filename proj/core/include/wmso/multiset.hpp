#ifndef WMSO_MULTISET_HPP
#define WMSO_MULTISET_HPP

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wmso/session.hpp"

namespace wmso {

/// Multiplicities are exact; second-order sums reach 2^(|w|*k).
using Count = boost::multiprecision::cpp_int;

/// A string of weight symbols, one per word position.
using WeightString = std::vector<WeightId>;

/// Finite multiset of equal-length weight strings, the abstract semantic
/// value of a core-wMSO formula. The map keeps strings in canonical order
/// (lexicographic by weight index); zero counts are never stored.
class WeightMultiset {
  public:
    WeightMultiset() = default;

    void add(const WeightString& s, const Count& n = 1);
    bool empty() const { return entries_.empty(); }
    const std::map<WeightString, Count>& entries() const { return entries_; }
    Count count_of(const WeightString& s) const;

    /// Sum of all multiplicities.
    Count total() const;

    /// Pointwise count addition; operands must hold strings of one common
    /// length unless one of them is empty.
    static WeightMultiset multiset_union(const WeightMultiset& a, const WeightMultiset& b);

    bool operator==(const WeightMultiset&) const = default;

    /// JSON object mapping weight strings (names joined with ".") to
    /// decimal counts, keys emitted in canonical order.
    std::string to_json(const WeightSet& weights) const;
    static WeightMultiset from_json(std::string_view text, const WeightSet& weights);

    std::string to_text(const WeightSet& weights) const;

  private:
    std::map<WeightString, Count> entries_;
};

std::string weight_string_key(const WeightString& s, const WeightSet& weights);

} // namespace wmso

#endif
