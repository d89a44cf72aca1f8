#include "wmso/aggregate.hpp"

#include "wmso/pointed_word.hpp"

namespace wmso {

AggValue aggregate(const WeightMultiset& m, const AggregationScheme& scheme) {
    AggValue acc = scheme.zero;
    for (const auto& [s, n] : m.entries()) {
        AggValue prod = scheme.one;
        for (WeightId w : s) {
            auto it = scheme.weight_interp.find(w);
            if (it == scheme.weight_interp.end())
                throw EvalError("scheme '" + scheme.name + "' does not interpret weight #" +
                                std::to_string(w));
            prod = scheme.times(prod, it->second);
        }
        for (Count i = 0; i < n; ++i) acc = scheme.plus(acc, prod);
    }
    return acc;
}

namespace {

std::map<WeightId, AggValue> numeric_interp(const WeightSet& weights) {
    std::map<WeightId, AggValue> interp;
    for (WeightId i = 0; i < weights.size(); ++i) {
        try {
            interp[i] = AggValue{false, std::stoll(weights.name(i))};
        } catch (...) {
            throw EvalError("weight '" + weights.name(i) +
                            "' is not numeric; numeric schemes cannot interpret it");
        }
    }
    return interp;
}

} // namespace

AggregationScheme maxplus_scheme(const WeightSet& weights) {
    AggregationScheme s;
    s.name = "maxplus";
    s.zero = AggValue{true, 0};
    s.one = AggValue{false, 0};
    s.plus = [](AggValue a, AggValue b) {
        if (a.minus_infinity) return b;
        if (b.minus_infinity) return a;
        return AggValue{false, std::max(a.value, b.value)};
    };
    s.times = [](AggValue a, AggValue b) {
        if (a.minus_infinity || b.minus_infinity) return AggValue{true, 0};
        return AggValue{false, a.value + b.value};
    };
    s.weight_interp = numeric_interp(weights);
    return s;
}

AggregationScheme sum_product_scheme(const WeightSet& weights) {
    AggregationScheme s;
    s.name = "sumproduct";
    s.zero = AggValue{false, 0};
    s.one = AggValue{false, 1};
    s.plus = [](AggValue a, AggValue b) { return AggValue{false, a.value + b.value}; };
    s.times = [](AggValue a, AggValue b) { return AggValue{false, a.value * b.value}; };
    s.weight_interp = numeric_interp(weights);
    return s;
}

std::optional<AggregationScheme> scheme_by_name(const std::string& name,
                                                const WeightSet& weights) {
    if (name == "maxplus") return maxplus_scheme(weights);
    if (name == "sumproduct") return sum_product_scheme(weights);
    return std::nullopt;
}

} // namespace wmso
