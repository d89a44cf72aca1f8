#ifndef WMSO_TESTS_FIXTURES_HPP
#define WMSO_TESTS_FIXTURES_HPP

#include <wmso/eval.hpp>
#include <wmso/parse.hpp>
#include <wmso/print.hpp>
#include <wmso/session.hpp>

namespace wmso::tests {

inline const Session& session01() {
    static const Session s =
        Session::from_json_text(R"({"alphabet":["a","b"],"weights":["0","1"],"default_weight":"0"})");
    return s;
}

inline const Session& session012() {
    static const Session s = Session::from_json_text(
        R"({"alphabet":["a","b"],"weights":["0","1","2"],"default_weight":"0"})");
    return s;
}

// the consecutive-a's formula: sum x. prod y. (x<=y & forall z ...) ? 1 : 0
inline CorePtr example1_formula(const Session& s = session01()) {
    return parse_core(
        "sum x. prod y. (x <= y & forall z. ((x <= z & z <= y) -> Pa(z))) ? 1 : 0", s);
}

inline PointedWord abaa(const Session& s = session01()) {
    return PointedWord::from_text("word=abaa", s);
}

inline WeightString ws(std::initializer_list<WeightId> items) { return WeightString(items); }

inline WeightMultiset multiset_of(std::initializer_list<WeightString> strings) {
    WeightMultiset m;
    for (const auto& s : strings) m.add(s);
    return m;
}

} // namespace wmso::tests

#endif
