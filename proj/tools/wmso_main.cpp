// Batch front end for the weighted-MSO toolkit: evaluation, compilation to
// weighted automata, equivalence and satisfiability decisions, proof
// checking and synthesis, and the normal-form rewriters.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <wmso/aggregate.hpp>
#include <wmso/compile_core.hpp>
#include <wmso/decide.hpp>
#include <wmso/eval.hpp>
#include <wmso/mso_compile.hpp>
#include <wmso/normalize.hpp>
#include <wmso/parse.hpp>
#include <wmso/print.hpp>
#include <wmso/proof.hpp>
#include <wmso/proof_sexpr.hpp>
#include <wmso/wa.hpp>

namespace {

using namespace wmso;

constexpr int exit_ok = 0;
constexpr int exit_witness = 1;
constexpr int exit_error = 2;
constexpr int exit_uncovered = 3;

struct Options {
    std::string session_path;
    std::string layer = "core";
    std::string format = "json";
    std::string aggregate_name;
    std::string gamma_path;
    std::string mode = "plus";
    std::string value;
    long long c17_cap = 2;
    unsigned long long seed = 20240801ull; // reserved for randomized tooling
    std::optional<std::size_t> bound;
    std::vector<std::string> inputs;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EvalError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string strip(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

Layer layer_of(const std::string& name) {
    if (name == "mso") return Layer::mso;
    if (name == "step") return Layer::step;
    if (name == "core") return Layer::core;
    throw EvalError("unknown layer: " + name);
}

std::vector<MsoPtr> load_gamma(const Options& opt, const Session& session) {
    std::vector<MsoPtr> gamma;
    if (opt.gamma_path.empty()) return gamma;
    std::istringstream in(slurp(opt.gamma_path));
    std::string line;
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty() || line[0] == '#') continue;
        gamma.push_back(parse_mso(line, session));
    }
    return gamma;
}

bool looks_like_json(const std::string& text) {
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
    return false;
}

void print_multiset(const WeightMultiset& m, const Session& session, const Options& opt) {
    if (opt.format == "text")
        std::cout << m.to_text(session.weights) << "\n";
    else
        std::cout << m.to_json(session.weights) << "\n";
}

int cmd_eval(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 2) throw EvalError("eval needs <formula-file> <word-file>");
    std::string text = strip(slurp(opt.inputs[0]));
    PointedWord pw = PointedWord::from_text(strip(slurp(opt.inputs[1])), session);
    Layer layer = layer_of(opt.layer);
    if (layer == Layer::mso) {
        std::cout << (mso_holds(parse_mso(text, session), pw) ? "true" : "false") << "\n";
        return exit_ok;
    }
    if (layer == Layer::step) {
        WeightId r = eval_step(parse_step(text, session), pw);
        std::cout << session.weights.name(r) << "\n";
        return exit_ok;
    }
    WeightMultiset m = eval_core(parse_core(text, session), pw);
    if (!opt.aggregate_name.empty()) {
        auto scheme = scheme_by_name(opt.aggregate_name, session.weights);
        if (!scheme) throw EvalError("unknown aggregation scheme: " + opt.aggregate_name);
        std::cout << aggregate(m, *scheme).to_string() << "\n";
        return exit_ok;
    }
    print_multiset(m, session, opt);
    return exit_ok;
}

int cmd_compile(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 1) throw EvalError("compile needs <formula-file>");
    std::string text = strip(slurp(opt.inputs[0]));
    Layer layer = layer_of(opt.layer);
    if (layer == Layer::mso) {
        MsoPtr f = parse_mso(text, session);
        Dfa d = compile_mso(f, canonical_tracks(free_vars(f)), session.alphabet);
        std::cout << dfa_to_json(d) << "\n";
        return exit_ok;
    }
    if (layer != Layer::core) throw EvalError("compile supports --layer core or mso");
    CorePtr f = parse_core(text, session);
    WeightedAutomaton a = compile_core(f, canonical_tracks(free_vars(f)), session);
    std::cout << wa_to_json(a) << "\n";
    return exit_ok;
}

int cmd_mc(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 2 && !(opt.inputs.size() == 3 && opt.value.empty()))
        throw EvalError("mc needs <formula-file> <word-file> and --value (or a third argument)");
    std::string value = opt.value.empty() ? opt.inputs.at(2) : opt.value;
    std::string text = strip(slurp(opt.inputs[0]));
    PointedWord pw = PointedWord::from_text(strip(slurp(opt.inputs[1])), session);
    Layer layer = layer_of(opt.layer);
    bool holds;
    if (layer == Layer::step) {
        auto r = session.weights.find(value);
        if (!r) throw EvalError("unknown weight: " + value);
        holds = weighted_model_check(parse_step(text, session), pw, *r);
    } else if (layer == Layer::core) {
        std::string v = looks_like_json(value) ? value : slurp(value);
        holds = weighted_model_check(parse_core(text, session), pw,
                                     WeightMultiset::from_json(v, session.weights));
    } else {
        throw EvalError("mc supports --layer step or core");
    }
    std::cout << (holds ? "holds" : "differs") << "\n";
    return holds ? exit_ok : exit_witness;
}

int cmd_equiv(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 2) throw EvalError("equiv needs two formula or automaton files");
    std::string a_text = slurp(opt.inputs[0]);
    std::string b_text = slurp(opt.inputs[1]);
    bool a_json = looks_like_json(a_text), b_json = looks_like_json(b_text);
    if (a_json != b_json)
        throw EvalError("equiv needs two inputs of the same kind (formulas or automata)");
    if (a_json) {
        WeightedAutomaton a = wa_from_json(a_text);
        WeightedAutomaton b = wa_from_json(b_text);
        WaEquivResult r = equiv_poly(a, b);
        if (r.equal) {
            std::cout << "equal\n";
            return exit_ok;
        }
        std::cout << "witness word=";
        for (auto l : r.witness->word) std::cout << a.alphabet.base.name(a.alphabet.base_of(l));
        std::cout << " gamma=" << weight_string_key(r.witness->gamma, a.weights)
                  << " counts=" << r.witness->count1.str() << "," << r.witness->count2.str()
                  << "\n";
        return exit_witness;
    }
    std::vector<MsoPtr> gamma = load_gamma(opt, session);
    CorePtr f1 = parse_core(strip(a_text), session);
    CorePtr f2 = parse_core(strip(b_text), session);
    EqualityDecision d = decide_equality(gamma, f1, f2, session);
    if (d.equal) {
        std::cout << "equal\n";
        return exit_ok;
    }
    std::cout << "witness " << d.counterexample->to_text(session) << "\n";
    return exit_witness;
}

int cmd_sat(const Options& opt, const Session& session) {
    Layer layer = layer_of(opt.layer);
    if (!opt.value.empty()) {
        // r-satisfiability
        if (opt.inputs.size() != 1) throw EvalError("sat --value needs one formula file");
        if (layer != Layer::step) throw EvalError("r-satisfiability is exact for --layer step only");
        StepPtr psi = parse_step(strip(slurp(opt.inputs[0])), session);
        auto r = session.weights.find(opt.value);
        if (!r) throw EvalError("unknown weight: " + opt.value);
        auto w = r_sat_step(psi, *r, session);
        if (w) {
            std::cout << "sat " << w->to_text(session) << "\n";
            return exit_ok;
        }
        std::cout << "unsat\n";
        return exit_witness;
    }
    if (opt.inputs.size() != 2) throw EvalError("sat needs two formula files");
    if (layer == Layer::step) {
        StepPtr f1 = parse_step(strip(slurp(opt.inputs[0])), session);
        StepPtr f2 = parse_step(strip(slurp(opt.inputs[1])), session);
        auto w = step_equational_sat(f1, f2, session);
        if (w) {
            std::cout << "sat " << w->to_text(session) << "\n";
            return exit_ok;
        }
        std::cout << "unsat\n";
        return exit_witness;
    }
    if (layer != Layer::core) throw EvalError("sat supports --layer step or core");
    if (!opt.bound) {
        std::cerr << "equational satisfiability for core-wMSO is undecidable; supply --bound\n";
        return exit_error;
    }
    CorePtr f1 = parse_core(strip(slurp(opt.inputs[0])), session);
    CorePtr f2 = parse_core(strip(slurp(opt.inputs[1])), session);
    BoundedSatResult r = equational_sat_bounded(f1, f2, *opt.bound, session);
    if (r.witness) {
        std::cout << "sat " << r.witness->to_text(session) << "\n";
        return exit_ok;
    }
    std::cout << "not_found_up_to_" << r.bound << "\n";
    return exit_witness;
}

int cmd_validity(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 2) throw EvalError("validity needs two formula files");
    std::vector<MsoPtr> gamma = load_gamma(opt, session);
    CorePtr f1 = parse_core(strip(slurp(opt.inputs[0])), session);
    CorePtr f2 = parse_core(strip(slurp(opt.inputs[1])), session);
    EqualityDecision d = decide_equality(gamma, f1, f2, session);
    if (d.equal) {
        std::cout << "valid\n";
        return exit_ok;
    }
    std::cout << "counterexample " << d.counterexample->to_text(session) << "\n";
    return exit_witness;
}

int cmd_check_proof(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 1) throw EvalError("check-proof needs one proof file");
    ProofPtr p = proof_from_sexpr(slurp(opt.inputs[0]), session);
    CheckConfig config{&session, opt.c17_cap};
    CheckResult r = check_proof(p, config);
    if (r.accepted) {
        std::cout << "accepted\n";
        return exit_ok;
    }
    std::cout << "rejected at " << r.where << ": " << r.reason << "\n";
    return exit_witness;
}

int cmd_prove_step(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 2) throw EvalError("prove-step needs two step formula files");
    std::vector<MsoPtr> gamma = load_gamma(opt, session);
    StepPtr f1 = parse_step(strip(slurp(opt.inputs[0])), session);
    StepPtr f2 = parse_step(strip(slurp(opt.inputs[1])), session);
    StepSynthesis r = synth_step_proof(gamma, f1, f2, session);
    if (r.proof) {
        std::cout << proof_to_sexpr(r.proof, session);
        return exit_ok;
    }
    std::cout << "counterexample " << r.counterexample->to_text(session) << "\n";
    return exit_witness;
}

int cmd_normalize(const Options& opt, const Session& session) {
    if (opt.inputs.size() != 1) throw EvalError("normalize needs one formula file");
    CorePtr f = parse_core(strip(slurp(opt.inputs[0])), session);
    CorePtr out;
    if (opt.mode == "plus")
        out = normalize_plus(f);
    else if (opt.mode == "second")
        out = normalize_second(f);
    else
        throw EvalError("normalize --mode must be plus or second");
    std::cout << print_formula(out, session) << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted MSO toolkit"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--session", opt.session_path, "session header JSON")->required();
    app.add_option("--bound", opt.bound, "word-length bound for bounded searches");
    app.add_option("--c17-cap", opt.c17_cap, "largest l checked literally in C17");
    app.add_option("--aggregate", opt.aggregate_name, "aggregation scheme (maxplus)");
    app.add_option("--seed", opt.seed, "seed for randomized tooling");
    app.add_option("--format", opt.format, "output format: json|text");
    app.add_option("--layer", opt.layer, "formula layer: mso|step|core");
    app.add_option("--gamma", opt.gamma_path, "file with one MSO assumption per line");
    app.add_option("--mode", opt.mode, "normalize mode: plus|second");
    app.add_option("--value", opt.value, "expected value (weight name or multiset JSON)");

    std::map<std::string, int (*)(const Options&, const Session&)> commands = {
        {"eval", cmd_eval},         {"compile", cmd_compile},
        {"mc", cmd_mc},             {"equiv", cmd_equiv},
        {"sat", cmd_sat},           {"validity", cmd_validity},
        {"check-proof", cmd_check_proof}, {"prove-step", cmd_prove_step},
        {"normalize", cmd_normalize},
    };
    for (auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("inputs", opt.inputs, "input files");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Session session = Session::from_json_file(opt.session_path);
        auto* sub = app.get_subcommands().front();
        return commands.at(sub->get_name())(opt, session);
    } catch (const wmso::ParseError& e) {
        std::cerr << "parse error at offset " << e.position << ": " << e.what() << "\n";
        return exit_error;
    } catch (const wmso::UncoveredVariableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_uncovered;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
}
