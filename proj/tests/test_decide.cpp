#include <doctest.h>

#include <wmso/decide.hpp>
#include <wmso/parse.hpp>

#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace wmso;
using namespace wmso::tests;

TEST_CASE("decide_equality") {
    const Session& s = session01();
    CorePtr pa = parse_core("prod x. (Pa(x) ? 1 : 0)", s);
    CorePtr pb = parse_core("prod y. (Pb(y) ? 1 : 0)", s);
    SUBCASE("commutativity of +") {
        CHECK(decide_equality({}, core_plus(pa, pb), core_plus(pb, pa), s).equal);
    }
    SUBCASE("assumed guard picks the branch") {
        MsoPtr phi = parse_mso("exists u. Pa(u)", s);
        CHECK(decide_equality({phi}, core_cond(phi, pa, pb), pa, s).equal);
    }
    SUBCASE("counterexample on distinct products") {
        CorePtr p1 = parse_core("prod x. 1", s);
        CorePtr p0 = parse_core("prod y. 0", s);
        auto d = decide_equality({}, p1, p0, s);
        REQUIRE_FALSE(d.equal);
        CHECK(d.counterexample->length() == 1);
    }
    SUBCASE("agrees with the bounded oracle at the compiled-size bound") {
        Rng rng(20240818);
        for (int i = 0; i < 12; ++i) {
            FormulaGen gen{s, rng};
            CorePtr f1 = gen.core(2, {}, {});
            FormulaGen gen2{s, rng};
            CorePtr f2 = gen2.core(2, {}, {});
            auto d = decide_equality({}, f1, f2, s);
            auto bounded = gamma_equiv_bounded({}, f1, f2, 4, s.alphabet);
            if (!bounded.equal) CHECK_FALSE(d.equal);
            if (d.equal) CHECK(bounded.equal);
            if (!d.equal)
                CHECK(eval_core(f1, *d.counterexample) != eval_core(f2, *d.counterexample));
        }
    }
}

TEST_CASE("equational_sat_bounded") {
    const Session& s = session01();
    SUBCASE("reflexive at length one") {
        CorePtr f = parse_core("prod x. 1", s);
        auto r = equational_sat_bounded(f, f, 1, s);
        REQUIRE(r.witness);
        CHECK(r.witness->length() == 1);
    }
    SUBCASE("disjoint strings never meet") {
        auto r = equational_sat_bounded(parse_core("prod x. 1", s), parse_core("prod y. 0", s),
                                        5, s);
        CHECK_FALSE(r.witness.has_value());
        CHECK(r.bound == 5);
    }
    SUBCASE("sum against doubled product meets at length two") {
        CorePtr f1 = parse_core("sum x. prod y. 1", s);
        CorePtr f2 = parse_core("prod u. 1 + prod v. 1", s);
        auto r = equational_sat_bounded(f1, f2, 3, s);
        REQUIRE(r.witness);
        CHECK(r.witness->length() == 2);
    }
}

TEST_CASE("step_equational_sat") {
    const Session& s = session01();
    StepPtr one = step_const(*s.weights.find("1"));
    StepPtr zero = step_const(*s.weights.find("0"));
    SUBCASE("a formula meets itself") {
        StepPtr psi = parse_step("Pa(x) ? 1 : 0", s);
        CHECK(step_equational_sat(psi, psi, s).has_value());
    }
    SUBCASE("disjoint constants are unsat") {
        CHECK_FALSE(step_equational_sat(one, zero, s).has_value());
    }
    SUBCASE("guarded vs constant") {
        StepPtr psi = parse_step("Pa(x) ? 1 : 0", s);
        auto w = step_equational_sat(psi, one, s);
        REQUIRE(w);
        Variable x = make_variable("x");
        CHECK(w->word[w->fo_val.at(x) - 1] == *s.alphabet.find("a"));
    }
}

TEST_CASE("weighted_model_check") {
    const Session& s = session01();
    CHECK(weighted_model_check(example1_formula(), abaa(),
                               multiset_of({ws({1, 0, 0, 0}), ws({0, 0, 0, 0}),
                                            ws({0, 0, 1, 1}), ws({0, 0, 0, 1})})));
    CHECK(weighted_model_check(core_zero(), abaa(), WeightMultiset{}));
    CHECK_FALSE(weighted_model_check(example1_formula(), abaa(),
                                     multiset_of({ws({0, 0, 0, 0})})));
    StepPtr psi = parse_step("Pa(x) ? 1 : 0", s);
    PointedWord pw = PointedWord::from_text("word=abaa; x=1", s);
    CHECK(weighted_model_check(psi, pw, *s.weights.find("1")));
}

TEST_CASE("r_sat_step") {
    const Session& s = session01();
    WeightId one = *s.weights.find("1");
    WeightId zero = *s.weights.find("0");
    SUBCASE("constants") {
        CHECK(r_sat_step(step_const(one), one, s).has_value());
        CHECK_FALSE(r_sat_step(step_const(one), zero, s).has_value());
    }
    SUBCASE("guarded formula hits its then weight") {
        StepPtr psi = parse_step("Pa(x) ? 1 : 0", s);
        auto w = r_sat_step(psi, one, s);
        REQUIRE(w);
        Variable x = make_variable("x");
        CHECK(w->word[w->fo_val.at(x) - 1] == *s.alphabet.find("a"));
        CHECK(eval_step(psi, *w) == one);
    }
}

TEST_CASE("decision procedures agree with brute force on random instances") {
    const Session& s = session01();
    Rng rng(20240819);
    for (int i = 0; i < 40; ++i) {
        FormulaGen gen{s, rng};
        Variable x = make_variable("x");
        StepPtr p1 = gen.step(2, {x}, {});
        StepPtr p2 = gen.step(2, {x}, {});
        WeightId r = static_cast<WeightId>(pick(rng, s.weights.size()));

        // brute-force oracles over |w| <= 3
        bool bf_rsat = false, bf_eqsat = false;
        std::set<Variable> vars = free_vars(p1);
        for (const auto& v : free_vars(p2)) vars.insert(v);
        vars.insert(x);
        enumerate_pointed_words(s.alphabet, vars, 3, [&](const PointedWord& pw) {
            if (eval_step(p1, pw) == r) bf_rsat = true;
            if (eval_step(p1, pw) == eval_step(p2, pw)) bf_eqsat = true;
            return !(bf_rsat && bf_eqsat);
        });
        auto rsat = r_sat_step(p1, r, s);
        auto eqsat = step_equational_sat(p1, p2, s);
        // exact procedures see at least as much as the bounded oracle
        if (bf_rsat) CHECK(rsat.has_value());
        if (bf_eqsat) CHECK(eqsat.has_value());
        if (rsat) CHECK(eval_step(p1, *rsat) == r);
        if (eqsat) {
            PointedWord padded = *eqsat;
            CHECK(eval_step(p1, padded) == eval_step(p2, padded));
        }
    }
}
