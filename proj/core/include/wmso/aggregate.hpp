#ifndef WMSO_AGGREGATE_HPP
#define WMSO_AGGREGATE_HPP

#include <functional>
#include <optional>

#include "wmso/multiset.hpp"

namespace wmso {

/// Carrier value of a demo aggregation semiring. `minus_infinity` is the
/// max-plus zero; ordinary semirings leave it unset.
struct AggValue {
    bool minus_infinity = false;
    long long value = 0;

    friend bool operator==(const AggValue&, const AggValue&) = default;
    std::string to_string() const {
        return minus_infinity ? "-inf" : std::to_string(value);
    }
};

/// A semiring structure plus an interpretation of the weight symbols.
/// aggregate() maps a multiset of weight strings into the carrier by
/// interpreting multiset union as `plus` and string concatenation as
/// `times`; the empty multiset maps to `zero`.
struct AggregationScheme {
    std::string name;
    AggValue zero, one;
    std::function<AggValue(AggValue, AggValue)> plus, times;
    std::map<WeightId, AggValue> weight_interp;
};

AggValue aggregate(const WeightMultiset& m, const AggregationScheme& scheme);

/// (N u {-inf}, max, +, -inf, 0) with each weight read as its decimal
/// value; weight names that are not integers are rejected at construction.
AggregationScheme maxplus_scheme(const WeightSet& weights);

/// (Z, +, *, 0, 1), same weight interpretation. Exists mainly to exercise
/// the semiring-law test suite on a second structure.
AggregationScheme sum_product_scheme(const WeightSet& weights);

std::optional<AggregationScheme> scheme_by_name(const std::string& name,
                                                const WeightSet& weights);

} // namespace wmso

#endif
