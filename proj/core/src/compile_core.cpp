#include "wmso/compile_core.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "wmso/derived.hpp"

namespace wmso {

namespace {
using CK = CoreFormula::Kind;

// The two letters of the classifier alphabet (x appended as last track)
// that a result letter expands to.
struct XSplit {
    std::size_t outer_track_count;
    std::uint32_t zero(std::uint32_t ext) const {
        std::uint32_t base = ext >> outer_track_count;
        std::uint32_t bits = ext & ((1u << outer_track_count) - 1u);
        return (base << (outer_track_count + 1)) | bits;
    }
    std::uint32_t one(std::uint32_t ext) const {
        return zero(ext) | (1u << outer_track_count);
    }
};

} // namespace

WeightedAutomaton compile_step_product(const StepPtr& psi_in, const Variable& x_in,
                                       const std::vector<Variable>& outer_tracks,
                                       const Session& session) {
    StepPtr psi = psi_in;
    Variable x = x_in;
    if (std::find(outer_tracks.begin(), outer_tracks.end(), x) != outer_tracks.end()) {
        std::set<Variable> taken = all_vars(psi);
        taken.insert(outer_tracks.begin(), outer_tracks.end());
        Variable fresh = fresh_variable(x.name, taken);
        psi = rename_free(psi, x, fresh);
        x = fresh;
    }

    std::vector<WeightId> weights = weights_of(psi);
    std::vector<Variable> inner_tracks = outer_tracks;
    inner_tracks.push_back(x);

    // Classifier: the product of the phi(Psi,r) automata, every state
    // labeled with the unique weight whose component accepts there. The
    // phi(Psi,r) languages partition the well-formed encodings, so a
    // reachable state accepts in at most one component.
    std::vector<Dfa> components;
    for (WeightId r : weights)
        components.push_back(compile_mso(build_phi_step(psi, r), inner_tracks, session.alphabet));

    std::size_t letters = components.front().alphabet.num_letters();
    std::map<std::vector<std::uint32_t>, std::uint32_t> index;
    std::deque<std::vector<std::uint32_t>> queue;
    Dfa raw;
    raw.alphabet = components.front().alphabet;
    std::vector<int> labels;
    auto intern = [&](std::vector<std::uint32_t> tuple) {
        auto [it, fresh] = index.try_emplace(tuple, static_cast<std::uint32_t>(index.size()));
        if (fresh) {
            queue.push_back(tuple);
            raw.delta.emplace_back(letters, 0);
            int label = -1;
            for (std::size_t i = 0; i < components.size(); ++i)
                if (components[i].final[tuple[i]]) {
                    if (label != -1)
                        throw AutomatonError("phi(Psi,r) family failed to partition");
                    label = static_cast<int>(weights[i]);
                }
            labels.push_back(label);
            raw.final.push_back(label != -1);
        }
        return it->second;
    };
    {
        std::vector<std::uint32_t> init;
        for (const auto& c : components) init.push_back(static_cast<std::uint32_t>(c.initial));
        raw.initial = intern(std::move(init));
    }
    while (!queue.empty()) {
        auto tuple = queue.front();
        queue.pop_front();
        std::uint32_t q = index.at(tuple);
        for (std::uint32_t l = 0; l < letters; ++l) {
            std::vector<std::uint32_t> next(tuple.size());
            for (std::size_t i = 0; i < tuple.size(); ++i)
                next[i] = components[i].delta[tuple[i]][l];
            raw.delta[q][l] = intern(std::move(next));
        }
    }
    auto [classifier, class_of] = minimize_with_classes(raw, labels);

    // Result states are pairs (f, g): f is the classifier state reached on
    // the prefix with the x track all 0; g maps classifier states to the
    // class reached from them across the 0-suffix. f runs forward
    // deterministically, g backward deterministically, so each well-formed
    // input has exactly one accepting run, and the weight emitted at a
    // position is the class of the full word with x placed there.
    TrackAlphabet result_alphabet{session.alphabet, outer_tracks};
    std::size_t result_letters = result_alphabet.num_letters();
    XSplit split{outer_tracks.size()};

    std::vector<std::uint32_t> f_states;
    {
        std::vector<bool> seen(classifier.num_states(), false);
        std::deque<std::uint32_t> bfs{static_cast<std::uint32_t>(classifier.initial)};
        seen[classifier.initial] = true;
        while (!bfs.empty()) {
            auto q = bfs.front();
            bfs.pop_front();
            f_states.push_back(q);
            for (std::uint32_t l = 0; l < result_letters; ++l) {
                auto to = classifier.delta[q][split.zero(l)];
                if (!seen[to]) { seen[to] = true; bfs.push_back(to); }
            }
        }
    }
    std::vector<std::uint32_t> f_index(classifier.num_states(), UINT32_MAX);
    for (std::uint32_t i = 0; i < f_states.size(); ++i) f_index[f_states[i]] = i;

    // closure of the final classification under 0-letter pre-composition
    std::vector<std::vector<int>> g_funcs;
    std::map<std::vector<int>, std::uint32_t> g_index;
    std::deque<std::uint32_t> g_queue;
    auto intern_g = [&](std::vector<int> g) {
        auto [it, fresh] = g_index.try_emplace(g, static_cast<std::uint32_t>(g_index.size()));
        if (fresh) {
            g_funcs.push_back(std::move(g));
            g_queue.push_back(it->second);
        }
        return it->second;
    };
    std::uint32_t g0 = intern_g(class_of);
    // predecessor map per result letter: g |-> g o delta_(l,0)
    std::vector<std::vector<std::uint32_t>> g_pred; // [g][letter]
    while (!g_queue.empty()) {
        std::uint32_t gi = g_queue.front();
        g_queue.pop_front();
        if (g_pred.size() <= gi) g_pred.resize(gi + 1);
        g_pred[gi].assign(result_letters, 0);
        for (std::uint32_t l = 0; l < result_letters; ++l) {
            std::vector<int> pre(classifier.num_states());
            for (std::uint32_t c = 0; c < classifier.num_states(); ++c)
                pre[c] = g_funcs[gi][classifier.delta[c][split.zero(l)]];
            g_pred[gi][l] = intern_g(std::move(pre));
        }
    }

    WeightedAutomaton out;
    out.alphabet = result_alphabet;
    out.weights = session.weights;
    std::size_t num_g = g_funcs.size();
    out.num_states = f_states.size() * num_g;
    auto state_id = [&](std::uint32_t f_pos, std::uint32_t g_pos) {
        return static_cast<std::uint32_t>(f_pos * num_g + g_pos);
    };
    for (std::uint32_t gi = 0; gi < num_g; ++gi)
        for (std::uint32_t l = 0; l < result_letters; ++l) {
            std::uint32_t g_from = g_pred[gi][l];
            for (std::uint32_t fp = 0; fp < f_states.size(); ++fp) {
                std::uint32_t f = f_states[fp];
                std::uint32_t f_to = f_index[classifier.delta[f][split.zero(l)]];
                int w = g_funcs[gi][classifier.delta[f][split.one(l)]];
                if (w < 0) continue;
                out.transitions.push_back(
                    {state_id(fp, g_from), l, state_id(f_to, gi), static_cast<WeightId>(w)});
            }
        }
    for (std::uint32_t gi = 0; gi < num_g; ++gi)
        out.initial.push_back(state_id(f_index[classifier.initial], gi));
    for (std::uint32_t fp = 0; fp < f_states.size(); ++fp)
        out.final.push_back(state_id(fp, g0));
    std::sort(out.initial.begin(), out.initial.end());
    std::sort(out.final.begin(), out.final.end());
    return prune_useful(out);
}

WeightedAutomaton wa_dfa_product(const WeightedAutomaton& a, const Dfa& d) {
    if (!(a.alphabet == d.alphabet))
        throw AutomatonError("weighted product over mismatched track alphabets");
    std::size_t nd = d.num_states();
    WeightedAutomaton out;
    out.alphabet = a.alphabet;
    out.weights = a.weights;
    out.num_states = a.num_states * nd;
    auto id = [&](std::uint32_t q, std::uint32_t s) {
        return static_cast<std::uint32_t>(q * nd + s);
    };
    for (const auto& t : a.transitions)
        for (std::uint32_t s = 0; s < nd; ++s)
            out.transitions.push_back({id(t.from, s), t.letter, id(t.to, d.delta[s][t.letter]),
                                       t.weight});
    for (auto q : a.initial) out.initial.push_back(id(q, static_cast<std::uint32_t>(d.initial)));
    for (auto q : a.final)
        for (std::uint32_t s = 0; s < nd; ++s)
            if (d.final[s]) out.final.push_back(id(q, s));
    std::sort(out.initial.begin(), out.initial.end());
    std::sort(out.final.begin(), out.final.end());
    return out;
}

WeightedAutomaton wa_disjoint_union(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    if (!(a.alphabet == b.alphabet))
        throw AutomatonError("disjoint union over mismatched track alphabets");
    WeightedAutomaton out = a;
    auto off = static_cast<std::uint32_t>(a.num_states);
    out.num_states += b.num_states;
    for (auto t : b.transitions) {
        t.from += off;
        t.to += off;
        out.transitions.push_back(t);
    }
    for (auto q : b.initial) out.initial.push_back(q + off);
    for (auto q : b.final) out.final.push_back(q + off);
    return out;
}

WeightedAutomaton wa_erase_track(const WeightedAutomaton& a, const Variable& track) {
    auto pos = a.alphabet.track_index(track);
    if (!pos) throw AutomatonError("no track for variable " + track.name);
    WeightedAutomaton out;
    out.alphabet.base = a.alphabet.base;
    for (std::size_t i = 0; i < a.alphabet.tracks.size(); ++i)
        if (i != *pos) out.alphabet.tracks.push_back(a.alphabet.tracks[i]);
    out.weights = a.weights;
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.final = a.final;
    for (auto t : a.transitions) {
        std::uint32_t bits = a.alphabet.bits_of(t.letter);
        std::uint32_t low = bits & ((1u << *pos) - 1u);
        std::uint32_t high = bits >> (*pos + 1);
        t.letter = out.alphabet.encode(a.alphabet.base_of(t.letter), (high << *pos) | low);
        out.transitions.push_back(t);
    }
    return out;
}

namespace {

// "Exactly one 1 on this track", complete DFA used before erasing a
// first-order sum variable.
Dfa exactly_one_track_dfa(const TrackAlphabet& ext, std::size_t track) {
    Dfa d;
    d.alphabet = ext;
    d.initial = 0;
    d.delta.assign(3, std::vector<std::uint32_t>(ext.num_letters(), 0));
    d.final = {false, true, false};
    for (std::uint32_t l = 0; l < ext.num_letters(); ++l) {
        bool on = ext.bit_of(l, track);
        d.delta[0][l] = on ? 1 : 0;
        d.delta[1][l] = on ? 2 : 1;
        d.delta[2][l] = 2;
    }
    return d;
}

struct CoreCompiler {
    const Session& session;

    WeightedAutomaton go(const CorePtr& phi, const std::vector<Variable>& tracks) {
        switch (phi->kind) {
            case CK::zero: {
                WeightedAutomaton a;
                a.alphabet = TrackAlphabet{session.alphabet, tracks};
                a.weights = session.weights;
                a.num_states = 1;
                a.initial = {0};
                return a;
            }
            case CK::product:
                return compile_step_product(phi->step, phi->var, tracks, session);
            case CK::conditional: {
                Dfa d_then = compile_mso(phi->guard, tracks, session.alphabet);
                Dfa d_else = compile_mso(mso_not(phi->guard), tracks, session.alphabet);
                WeightedAutomaton a = wa_dfa_product(go(phi->left, tracks), d_then);
                WeightedAutomaton b = wa_dfa_product(go(phi->right, tracks), d_else);
                return prune_useful(wa_disjoint_union(a, b));
            }
            case CK::plus:
                return prune_useful(
                    wa_disjoint_union(go(phi->left, tracks), go(phi->right, tracks)));
            case CK::sum_fo:
            case CK::sum_so: {
                Variable v = phi->var;
                CorePtr body = phi->left;
                if (std::find(tracks.begin(), tracks.end(), v) != tracks.end()) {
                    std::set<Variable> taken = all_vars(body);
                    taken.insert(tracks.begin(), tracks.end());
                    Variable fresh = fresh_variable(v.name, taken);
                    body = rename_free(body, v, fresh);
                    v = fresh;
                }
                std::vector<Variable> inner = tracks;
                inner.push_back(v);
                WeightedAutomaton a = go(body, inner);
                if (phi->kind == CK::sum_fo) {
                    auto pos = a.alphabet.track_index(v);
                    a = wa_dfa_product(a, exactly_one_track_dfa(a.alphabet, *pos));
                }
                return prune_useful(wa_erase_track(a, v));
            }
        }
        throw AutomatonError("corrupt core formula");
    }
};

} // namespace

WeightedAutomaton compile_core(const CorePtr& phi, const std::vector<Variable>& tracks,
                               const Session& session) {
    for (const auto& v : free_vars(phi))
        if (std::find(tracks.begin(), tracks.end(), v) == tracks.end())
            throw AutomatonError("track set does not cover free variable " + v.name);
    CoreCompiler c{session};
    return prune_useful(c.go(phi, tracks));
}

std::size_t ell_bound(const CorePtr& phi1, const CorePtr& phi2, const std::vector<MsoPtr>& gamma,
                      const Session& session) {
    std::set<Variable> vars = free_vars(phi1);
    for (const auto& v : free_vars(phi2)) vars.insert(v);
    for (const auto& g : gamma)
        for (const auto& v : free_vars(g)) vars.insert(v);
    std::vector<Variable> tracks = canonical_tracks(vars);
    MsoPtr guard = mso_and_all(gamma);
    WeightedAutomaton a1 = compile_core(core_cond(guard, phi1, core_zero()), tracks, session);
    WeightedAutomaton a2 = compile_core(core_cond(guard, phi2, core_zero()), tracks, session);
    return a1.num_states + a2.num_states - 1;
}

} // namespace wmso
