#include <doctest.h>

#include <wmso/compile_core.hpp>
#include <wmso/eval.hpp>
#include <wmso/normalize.hpp>
#include <wmso/parse.hpp>
#include <wmso/proof.hpp>
#include <wmso/proof_sexpr.hpp>

#include "support/corpus.hpp"
#include "support/generators.hpp"

using namespace wmso;
using namespace wmso::tests;

namespace {

CheckConfig config(const Session& s, long long cap = 2) { return CheckConfig{&s, cap}; }

// checker-soundness audit: an accepted conclusion must hold semantically
void audit(const Judgement& j, const Session& s, std::size_t max_len = 4) {
    if (j.layer == Layer::step) {
        auto r = gamma_equiv_bounded(j.gamma, j.step_lhs, j.step_rhs, max_len, s.alphabet);
        CHECK(r.equal);
    } else {
        auto r = gamma_equiv_bounded(j.gamma, j.core_lhs, j.core_rhs, max_len, s.alphabet);
        CHECK(r.equal);
    }
}

} // namespace

TEST_CASE("the nine derived theorems are accepted and sound") {
    const Session& s = session01();
    auto corpus = proposition_corpus(s);
    REQUIRE(corpus.size() == 9);
    for (const auto& entry : corpus) {
        CAPTURE(entry.name);
        CheckResult r = check_proof(entry.proof, config(s));
        CAPTURE(r.where);
        CAPTURE(r.reason);
        CHECK(r.accepted);
        audit(entry.proof->conclusion, s);
    }
}

TEST_CASE("corpus proofs survive the s-expression round trip") {
    const Session& s = session01();
    for (const auto& entry : proposition_corpus(s)) {
        CAPTURE(entry.name);
        std::string text = proof_to_sexpr(entry.proof, s);
        ProofPtr back = proof_from_sexpr(text, s);
        CHECK(check_proof(back, config(s)).accepted);
        CHECK(proof_to_sexpr(back, s) == text);
    }
}

TEST_CASE("mutated proofs are rejected with specific reasons") {
    const Session& s = session01();
    StepPtr one = step_const(*s.weights.find("1"));
    StepPtr zero = step_const(*s.weights.find("0"));
    MsoPtr some_a = parse_mso("exists x. Pa(x)", s);
    MsoPtr some_b = parse_mso("exists x. Pb(x)", s);

    struct Mutation {
        std::string name;
        ProofPtr proof;
        std::string reason_prefix;
    };
    std::vector<Mutation> mutations;

    // 1: dropped premise on S4
    {
        ProofPtr good = p_collapse({}, some_a, one);
        ProofPtr bad = make_node(Rule::s4, good->conclusion, {good->premises[0]}, good->pivot);
        mutations.push_back({"dropped_premise", bad, "arity_mismatch"});
    }
    // 2: wrong pivot on S4
    {
        ProofPtr good = p_collapse({}, some_a, one);
        ProofPtr bad = make_node(Rule::s4, good->conclusion, good->premises, some_b);
        mutations.push_back({"wrong_pivot", bad, "pivot_mismatch"});
    }
    // 3: S3 whose conclusion takes the wrong branch
    {
        Judgement j = judgement({some_a}, step_cond(some_a, one, zero), zero);
        mutations.push_back({"wrong_branch", make_node(Rule::s3, j, {}, some_a),
                             "conclusion_shape"});
    }
    // 4: S3 side condition fails under a consistent Gamma
    {
        Judgement j = judgement({}, step_cond(some_a, one, zero), one);
        mutations.push_back({"invalid_guard", make_node(Rule::s3, j, {}, some_a),
                             "side_condition_failed"});
    }
    // 5: S2 without swapping the branches
    {
        Judgement j = judgement({}, step_cond(mso_not(some_a), one, zero),
                                step_cond(some_a, one, zero));
        mutations.push_back({"unswapped_s2", make_node(Rule::s2, j), "conclusion_shape"});
    }
    // 6: trans with mismatched middle terms
    {
        ProofPtr r1 = p_ref({}, one);
        ProofPtr r2 = p_ref({}, zero);
        Judgement j = judgement({}, one, zero);
        mutations.push_back({"broken_trans", make_node(Rule::trans, j, {r1, r2}),
                             "conclusion_shape"});
    }
    // 7: sym that does not flip
    {
        ProofPtr r1 = p_s3({some_a}, some_a, one, zero);
        mutations.push_back({"non_flipping_sym",
                             make_node(Rule::sym, r1->conclusion, {r1}), "conclusion_shape"});
    }
    // 8: ref with different sides
    {
        mutations.push_back({"bad_ref", make_node(Rule::ref, judgement({}, one, zero)),
                             "conclusion_shape"});
    }
    // 9: S4 premise missing the pivot assumption
    {
        ProofPtr then_p = p_ref({}, one); // should assume some_a
        ProofPtr else_p = p_ref(gamma_add({}, mso_not(some_a)), one);
        Judgement j = judgement({}, step_cond(some_a, one, one), one);
        mutations.push_back({"missing_assumption",
                             make_node(Rule::s4, j, {then_p, else_p}, some_a),
                             "gamma_mismatch"});
    }
    // 10: weakening that drops an assumption
    {
        ProofPtr p = p_ref({some_a}, one);
        Judgement j = judgement({some_b}, one, one);
        mutations.push_back({"dropping_weakening", make_node(Rule::s1, j, {p}),
                             "gamma_mismatch"});
    }
    // 11: cong? with differing guards
    {
        ProofPtr p1 = p_ref({}, one);
        ProofPtr p2 = p_ref({}, zero);
        Judgement j = judgement({}, step_cond(some_a, one, zero), step_cond(some_b, one, zero));
        mutations.push_back({"cong_guard", make_node(Rule::cong_cond, j, {p1, p2}),
                             "conclusion_shape"});
    }
    // 12: C1 with the wrong survivor
    {
        CorePtr prod = parse_core("prod x. 1", s);
        CorePtr other = parse_core("prod x. 0", s);
        Judgement j = judgement({}, core_plus(prod, core_zero()), other);
        mutations.push_back({"bad_c1", make_node(Rule::c1, j), "conclusion_shape"});
    }
    // 13: C4 with the product variable free in Gamma
    {
        MsoPtr gam = parse_mso("Pa(x)", s);
        Variable x = make_variable("x");
        ProofPtr prem = make_node(Rule::ref, judgement({gam}, one, one));
        Judgement j = judgement({gam}, core_product(x, one), core_product(x, one));
        mutations.push_back({"c4_freeness", make_node(Rule::c4, j, {prem}),
                             "side_condition_failed"});
    }
    // 14: C5 renaming onto a variable of the body
    {
        Variable x = make_variable("x");
        Variable y = make_variable("y");
        StepPtr body = parse_step("x <= y ? 1 : 0", s); // mentions y already
        Judgement j = judgement({}, core_product(x, body),
                                core_product(y, rename_free(body, x, y)));
        mutations.push_back({"c5_capture", make_node(Rule::c5, j), "side_condition_failed"});
    }
    // 15: C12 renaming onto a used variable
    {
        Variable X = make_variable("X");
        Variable Y = make_variable("Y");
        CorePtr body = parse_core("prod x. (x in X ? 1 : x in Y ? 1 : 0)", s);
        Judgement j = judgement({}, core_sum(X, body), core_sum(Y, rename_free(body, X, Y)));
        mutations.push_back({"c12_capture", make_node(Rule::c12, j), "side_condition_failed"});
    }
    // 16: C16 without unique existence
    {
        Variable X = make_variable("X");
        CorePtr body = parse_core("prod x. 1", s);
        MsoPtr phi = parse_mso("exists u. u in X", s); // many such sets
        Judgement j = judgement({}, body, core_sum(X, core_cond(phi, body, core_zero())));
        mutations.push_back({"c16_not_unique", make_node(Rule::c16, j), "side_condition_failed"});
    }
    // 17: C17 beyond the cap
    {
        CorePtr f = parse_core("sum X. (exists x. x in X) ? prod y. 1 : zero", s);
        Judgement j = judgement({}, f, f);
        mutations.push_back({"c17_cap", make_node(Rule::c17, j, {}, nullptr, 1000),
                             "c17_cap_exceeded"});
    }
    // 18: C17 with a permitted but wrong l
    {
        CorePtr f1 = parse_core("(exists x. Pa(x)) ? prod y. 1 : zero", s);
        CorePtr f2 = parse_core("(!(forall x. !Pa(x))) ? prod z. 1 : zero", s);
        Judgement j = judgement({}, f1, f2);
        mutations.push_back({"c17_wrong_l", make_node(Rule::c17, j, {}, nullptr, 2),
                             "c17_l_mismatch"});
    }
    // 19: C17 whose domination fails
    {
        CorePtr f1 = parse_core("true ? prod y. 1 : zero", s);
        CorePtr f2 = parse_core("true ? prod z. 0 : zero", s);
        Judgement j = judgement({}, f1, f2);
        mutations.push_back({"c17_unsound", make_node(Rule::c17, j, {}, nullptr, 1),
                             "side_condition_failed"});
    }
    // 20: a step rule applied to a core judgement
    {
        CorePtr prod = parse_core("prod x. 1", s);
        Judgement j = judgement({}, core_cond(some_a, prod, prod), prod);
        mutations.push_back({"layer_abuse", make_node(Rule::s3, j, {}, some_a),
                             "layer_mismatch"});
    }
    // 21: C15 with the sum variable free in the guard
    {
        Variable X = make_variable("X");
        MsoPtr phi = parse_mso("exists u. u in X", s);
        CorePtr a = parse_core("prod x. (x in X ? 1 : 0)", s);
        CorePtr b = parse_core("prod y. (y in X ? 0 : 1)", s);
        // rebuild bodies over the same X binder
        Judgement j = judgement({}, core_cond(phi, core_sum(X, a), core_sum(X, b)),
                                core_sum(X, core_cond(phi, a, b)));
        mutations.push_back({"c15_capture", make_node(Rule::c15, j), "side_condition_failed"});
    }
    // 22: C10 distributing the wrong tail
    {
        CorePtr a = parse_core("prod x. 1", s);
        CorePtr b = parse_core("prod y. 0", s);
        CorePtr c = parse_core("prod z. 1", s);
        Judgement j = judgement({}, core_plus(core_cond(some_a, a, b), c),
                                core_cond(some_a, core_plus(a, c), core_plus(b, b)));
        mutations.push_back({"c10_tail", make_node(Rule::c10, j), "conclusion_shape"});
    }

    CHECK(mutations.size() >= 20);
    for (const auto& m : mutations) {
        CAPTURE(m.name);
        CheckResult r = check_proof(m.proof, config(s));
        CHECK_FALSE(r.accepted);
        CAPTURE(r.reason);
        CHECK(r.reason.substr(0, m.reason_prefix.size()) == m.reason_prefix);
    }
}

TEST_CASE("core-layer table rules are accepted on well-formed instances") {
    const Session& s = session01();
    CorePtr pa = parse_core("prod x. (Pa(x) ? 1 : 0)", s);
    CorePtr pb = parse_core("prod y. (Pb(y) ? 1 : 0)", s);

    SUBCASE("C1 C2 C3") {
        CHECK(check_proof(make_node(Rule::c1, judgement({}, core_plus(pa, core_zero()), pa)),
                          config(s))
                  .accepted);
        CHECK(check_proof(
                  make_node(Rule::c2, judgement({}, core_plus(pa, pb), core_plus(pb, pa))),
                  config(s))
                  .accepted);
        CorePtr pc = parse_core("prod z. 1", s);
        CHECK(check_proof(make_node(Rule::c3,
                                    judgement({}, core_plus(core_plus(pa, pb), pc),
                                              core_plus(pa, core_plus(pb, pc)))),
                          config(s))
                  .accepted);
    }
    SUBCASE("C4 over a fresh binder") {
        MsoPtr gam = parse_mso("exists u. Pa(u)", s);
        Variable x = make_variable("x");
        StepPtr lhs = parse_step("(exists u2. Pa(u2)) ? 1 : 0", s);
        StepPtr rhs = step_const(*s.weights.find("1"));
        ProofPtr prem = make_node(Rule::s3, judgement({gam}, lhs, rhs), {}, lhs->guard);
        Judgement j = judgement({gam}, core_product(x, lhs), core_product(x, rhs));
        auto r = check_proof(make_node(Rule::c4, j, {prem}), config(s));
        CAPTURE(r.reason);
        CHECK(r.accepted);
        audit(j, s);
    }
    SUBCASE("C5 renames a product binder") {
        Variable x = make_variable("x");
        Variable y = make_variable("y");
        StepPtr body = parse_step("Pa(x) ? 1 : 0", s);
        Judgement j =
            judgement({}, core_product(x, body), core_product(y, rename_free(body, x, y)));
        CHECK(check_proof(make_node(Rule::c5, j), config(s)).accepted);
        audit(j, s);
    }
    SUBCASE("C7 C8 C9 C10") {
        MsoPtr phi = parse_mso("exists u. Pa(u)", s);
        Judgement j7 = judgement({}, core_cond(mso_not(phi), pa, pb), core_cond(phi, pb, pa));
        CHECK(check_proof(make_node(Rule::c7, j7), config(s)).accepted);
        Judgement j8 = judgement({phi}, core_cond(phi, pa, pb), pa);
        CHECK(check_proof(make_node(Rule::c8, j8, {}, phi), config(s)).accepted);
        ProofPtr t = make_node(Rule::ref, judgement(gamma_add({}, phi), pa, pa));
        ProofPtr e = make_node(Rule::ref, judgement(gamma_add({}, mso_not(phi)), pa, pa));
        Judgement j9 = judgement({}, core_cond(phi, pa, pa), pa);
        CHECK(check_proof(make_node(Rule::c9, j9, {t, e}, phi), config(s)).accepted);
        CorePtr c = parse_core("prod w. 0", s);
        Judgement j10 = judgement({}, core_plus(core_cond(phi, pa, pb), c),
                                  core_cond(phi, core_plus(pa, c), core_plus(pb, c)));
        CHECK(check_proof(make_node(Rule::c10, j10), config(s)).accepted);
        audit(j7, s);
        audit(j10, s);
    }
    SUBCASE("C11-C14 and first-order analogues") {
        Variable X = make_variable("X");
        CorePtr body1 = parse_core("prod x. (x in X ? 1 : 0)", s);
        CorePtr body2 = parse_core("prod y. (y in X ? 1 : 0)", s);
        ProofPtr prem = make_node(
            Rule::c5, judgement({}, body1, body2));
        Judgement j11 = judgement({}, core_sum(X, body1), core_sum(X, body2));
        CHECK(check_proof(make_node(Rule::c11, j11, {prem}), config(s)).accepted);
        audit(j11, s);

        Variable Y = make_variable("Y");
        Judgement j12 =
            judgement({}, core_sum(X, body1), core_sum(Y, rename_free(body1, X, Y)));
        CHECK(check_proof(make_node(Rule::c12, j12), config(s)).accepted);
        audit(j12, s);

        Variable Z = make_variable("Z");
        CorePtr body3 = parse_core("prod x. (x in X ? 1 : x in Z ? 1 : 0)", s);
        Judgement j13 = judgement({}, core_sum(X, core_sum(Z, body3)),
                                  core_sum(Z, core_sum(X, body3)));
        CHECK(check_proof(make_node(Rule::c13, j13), config(s)).accepted);
        audit(j13, s);

        Judgement j14 = judgement({}, core_sum(X, core_plus(body1, body1)),
                                  core_plus(core_sum(X, body1), core_sum(X, body1)));
        CHECK(check_proof(make_node(Rule::c14, j14), config(s)).accepted);
        audit(j14, s);

        Variable u = make_variable("u");
        CorePtr fo_body = parse_core("prod x. (x <= u ? 1 : 0)", s);
        Variable v = make_variable("v");
        Judgement j12f =
            judgement({}, core_sum(u, fo_body), core_sum(v, rename_free(fo_body, u, v)));
        CHECK(check_proof(make_node(Rule::c12f, j12f), config(s)).accepted);
        audit(j12f, s);
    }
    SUBCASE("C15 pushes an independent conditional inside") {
        Variable X = make_variable("X");
        MsoPtr phi = parse_mso("exists u. Pa(u)", s);
        CorePtr a = parse_core("prod x. (x in X ? 1 : 0)", s);
        CorePtr b = parse_core("prod y. (y in X ? 0 : 1)", s);
        Judgement j = judgement({}, core_cond(phi, core_sum(X, a), core_sum(X, b)),
                                core_sum(X, core_cond(phi, a, b)));
        CHECK(check_proof(make_node(Rule::c15, j), config(s)).accepted);
        audit(j, s);
    }
    SUBCASE("C16 introduces a uniquely satisfied sum") {
        Variable X = make_variable("X");
        Variable u = make_variable("u");
        MsoPtr empty_set = mso_forall(u, mso_not(mso_in(u, X)));
        Judgement j = judgement({}, pa, core_sum(X, core_cond(empty_set, pa, core_zero())));
        auto r = check_proof(make_node(Rule::c16, j), config(s));
        CAPTURE(r.reason);
        CHECK(r.accepted);
        audit(j, s);
    }
}

TEST_CASE("C17 accepts an aligned guarded-product pair") {
    const Session& s = session01();
    // no sum binders: required l = 2^0 = 1
    CorePtr f1 = parse_core("(exists x. Pa(x)) ? prod y. 1 : zero", s);
    CorePtr f2 = parse_core("(!(forall x. !Pa(x))) ? prod z. 1 : zero", s);
    Judgement j = judgement({}, f1, f2);
    auto r = check_proof(make_node(Rule::c17, j, {}, nullptr, 1), config(s));
    CAPTURE(r.reason);
    CHECK(r.accepted);
    audit(j, s);
}

TEST_CASE("C17 rejects misaligned prefixes") {
    const Session& s = session01();
    CorePtr f1 = parse_core("sum X. true ? prod y. 1 : zero", s);
    CorePtr f2 = parse_core("true ? prod z. 1 : zero", s);
    Judgement j = judgement({}, f1, f2);
    auto r = check_proof(make_node(Rule::c17, j, {}, nullptr, 1), config(s));
    CHECK_FALSE(r.accepted);
    CHECK(r.reason.substr(0, 16) == "conclusion_shape");
}

TEST_CASE("synth_step_proof") {
    const Session& s = session01();
    StepPtr one = step_const(*s.weights.find("1"));
    StepPtr zero = step_const(*s.weights.find("0"));
    MsoPtr phi = parse_mso("exists x. Pa(x)", s);

    SUBCASE("reflexive instance gives a one-node proof") {
        auto r = synth_step_proof({}, one, one, s);
        REQUIRE(r.proof);
        CHECK(r.proof->rule == Rule::ref);
        CHECK(check_proof(r.proof, config(s)).accepted);
    }
    SUBCASE("assumed guard lets the conditional collapse") {
        auto r = synth_step_proof({phi}, step_cond(phi, one, zero), one, s);
        REQUIRE(r.proof);
        CHECK(check_proof(r.proof, config(s)).accepted);
    }
    SUBCASE("counterexamples name a refuting pointed word") {
        StepPtr psi = parse_step("Pa(x) ? 1 : 0", s);
        auto r = synth_step_proof({}, psi, one, s);
        REQUIRE_FALSE(r.proof);
        REQUIRE(r.counterexample);
        CHECK(eval_step(psi, *r.counterexample) != eval_step(one, *r.counterexample));
        // the witness puts a b at x
        Variable x = make_variable("x");
        CHECK(r.counterexample->word[r.counterexample->fo_val.at(x) - 1] ==
              *s.alphabet.find("b"));
    }
    SUBCASE("random instances: proof iff bounded-equivalent, else refuted") {
        Rng rng(20240817);
        int proofs = 0, refutations = 0;
        for (int i = 0; i < 60; ++i) {
            FormulaGen gen{s, rng};
            Variable x = make_variable("x");
            StepPtr p1 = gen.step(2, {x}, {});
            StepPtr p2 = gen.step(2, {x}, {});
            std::vector<MsoPtr> gamma;
            if (pick(rng, 2)) gamma.push_back(gen.mso(1, {x}, {}));
            auto r = synth_step_proof(gamma, p1, p2, s);
            auto oracle = gamma_equiv_bounded(gamma, p1, p2, 4, s.alphabet);
            if (r.proof) {
                ++proofs;
                CHECK(oracle.equal);
                CHECK(check_proof(r.proof, config(s)).accepted);
            } else {
                ++refutations;
                REQUIRE(r.counterexample);
                CHECK(satisfies_all(gamma, *r.counterexample));
                CHECK(eval_step(p1, *r.counterexample) != eval_step(p2, *r.counterexample));
            }
        }
        CHECK(proofs > 0);
        CHECK(refutations > 0);
    }
}

TEST_CASE("deduction tactic assembles a case split") {
    const Session& s = session01();
    MsoPtr pa = parse_mso("Pa(x)", s);
    MsoPtr pb = parse_mso("Pb(x)", s);
    StepPtr lhs = step_cond(pa, step_const(1), step_const(0));
    StepPtr rhs = step_cond(mso_not(pb), step_const(1), step_const(0));

    // under {Pa(x)}: both sides are 1; under {Pb(x)}: both sides are 0
    auto prove_under = [&](const MsoPtr& assumption) {
        auto r = synth_step_proof({assumption}, lhs, rhs, s);
        REQUIRE(r.proof);
        return r.proof;
    };
    ProofPtr pa_proof = prove_under(pa);
    ProofPtr pb_proof = prove_under(pb);
    ProofPtr assembled = assemble_deduction({}, {pa, pb}, {pa_proof, pb_proof}, s);
    REQUIRE(assembled);
    CHECK(gamma_equal(assembled->conclusion.gamma, {}));
    CHECK(equal(assembled->conclusion.step_lhs, lhs));
    CHECK(equal(assembled->conclusion.step_rhs, rhs));
    auto r = check_proof(assembled, config(s));
    CAPTURE(r.where);
    CAPTURE(r.reason);
    CHECK(r.accepted);
    audit(assembled->conclusion, s);
}

TEST_CASE("deduction tactic rejects a non-exhaustive split") {
    const Session& s = session01();
    MsoPtr pa = parse_mso("Pa(x)", s);
    StepPtr one = step_const(*s.weights.find("1"));
    ProofPtr p = make_node(Rule::ref, judgement(gamma_add({}, pa), one, one));
    CHECK_THROWS_AS(assemble_deduction({}, {pa}, {p}, s), EvalError);
}
