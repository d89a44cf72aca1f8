#include "wmso/wa.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace wmso {

using Rational = boost::multiprecision::cpp_rational;

bool CountVector::is_zero() const {
    return std::all_of(at.begin(), at.end(), [](const Count& c) { return c == 0; });
}

CountVector indicator(std::size_t num_states, const std::vector<std::uint32_t>& states) {
    CountVector v;
    v.at.assign(num_states, 0);
    for (auto q : states) v.at.at(q) = 1;
    return v;
}

CountVector count_step(const WeightedAutomaton& a, const CountVector& vec, std::uint32_t letter,
                       WeightId weight) {
    CountVector out;
    out.at.assign(a.num_states, 0);
    for (const auto& t : a.transitions)
        if (t.letter == letter && t.weight == weight && vec.at[t.from] != 0)
            out.at[t.to] += vec.at[t.from];
    return out;
}

namespace {

Count final_sum(const CountVector& v, const std::vector<std::uint32_t>& final,
                std::uint32_t offset = 0) {
    Count s = 0;
    for (auto q : final) s += v.at[q + offset];
    return s;
}

std::vector<WeightId> transition_weights(const WeightedAutomaton& a) {
    std::set<WeightId> ws;
    for (const auto& t : a.transitions) ws.insert(t.weight);
    return {ws.begin(), ws.end()};
}

} // namespace

WeightMultiset wa_eval(const WeightedAutomaton& a, const ExtWord& w) {
    if (w.empty()) throw EvalError("wa_eval needs a nonempty word");
    for (auto l : w)
        if (l >= a.alphabet.num_letters()) throw EvalError("letter outside the automaton's alphabet");
    std::map<WeightString, CountVector> front;
    front.emplace(WeightString{}, indicator(a.num_states, a.initial));
    for (auto letter : w) {
        std::map<WeightString, CountVector> next;
        for (const auto& [gamma, vec] : front) {
            for (const auto& t : a.transitions) {
                if (t.letter != letter || vec.at[t.from] == 0) continue;
                WeightString g2 = gamma;
                g2.push_back(t.weight);
                auto [it, fresh] = next.try_emplace(std::move(g2));
                if (fresh) it->second.at.assign(a.num_states, 0);
                it->second.at[t.to] += vec.at[t.from];
            }
        }
        front = std::move(next);
    }
    WeightMultiset out;
    for (const auto& [gamma, vec] : front) {
        Count c = final_sum(vec, a.final);
        if (c != 0) out.add(gamma, c);
    }
    return out;
}

namespace {

// Disjoint union over a shared alphabet/weight set, Q2 shifted past Q1.
WeightedAutomaton joint_automaton(const WeightedAutomaton& a1, const WeightedAutomaton& a2) {
    if (!(a1.alphabet == a2.alphabet))
        throw EvalError("equivalence needs a shared (track) alphabet");
    if (!(a1.weights == a2.weights))
        throw EvalError("equivalence needs a shared weight set");
    WeightedAutomaton j;
    j.alphabet = a1.alphabet;
    j.weights = a1.weights;
    j.num_states = a1.num_states + a2.num_states;
    j.transitions = a1.transitions;
    auto off = static_cast<std::uint32_t>(a1.num_states);
    for (auto t : a2.transitions) {
        t.from += off;
        t.to += off;
        j.transitions.push_back(t);
    }
    j.initial = a1.initial;
    for (auto q : a2.initial) j.initial.push_back(q + off);
    j.final = a1.final;
    for (auto q : a2.final) j.final.push_back(q + off);
    return j;
}

} // namespace

WaEquivResult equiv_bounded(const WeightedAutomaton& a1, const WeightedAutomaton& a2,
                            std::size_t n) {
    WeightedAutomaton joint = joint_automaton(a1, a2);
    auto weights = transition_weights(joint);
    std::size_t letters = joint.alphabet.num_letters();
    auto off = static_cast<std::uint32_t>(a1.num_states);

    // canonical word order: by length, then lexicographic by letter
    for (std::size_t len = 1; len <= n; ++len) {
        ExtWord word(len, 0);
        bool done = false;
        while (!done) {
            std::map<WeightString, CountVector> front;
            front.emplace(WeightString{}, indicator(joint.num_states, joint.initial));
            for (auto letter : word) {
                std::map<WeightString, CountVector> next;
                for (const auto& [gamma, vec] : front)
                    for (WeightId r : weights) {
                        CountVector v = count_step(joint, vec, letter, r);
                        if (v.is_zero()) continue;
                        WeightString g2 = gamma;
                        g2.push_back(r);
                        next.emplace(std::move(g2), std::move(v));
                    }
                front = std::move(next);
            }
            for (const auto& [gamma, vec] : front) {
                Count c1 = final_sum(vec, a1.final);
                Count c2 = final_sum(vec, a2.final, off);
                if (c1 != c2)
                    return {false, WaDisagreement{word, gamma, c1, c2}};
            }
            done = true;
            for (std::size_t p = len; p-- > 0;) {
                if (++word[p] < letters) { done = false; break; }
                word[p] = 0;
            }
        }
    }
    return {};
}

namespace {

struct TaggedVector {
    CountVector vec;
    ExtWord word;
    WeightString gamma;
};

// Echelon basis over the rationals; rows normalized to pivot 1.
class RationalBasis {
  public:
    explicit RationalBasis(std::size_t dim) : dim_(dim) {}

    std::size_t size() const { return rows_.size(); }

    // Returns true (and absorbs the reduced row) when v is independent of
    // the rows seen so far.
    bool try_insert(const CountVector& v) {
        std::vector<Rational> row(dim_);
        for (std::size_t i = 0; i < dim_; ++i) row[i] = Rational(v.at[i]);
        for (const auto& r : rows_) {
            const Rational& factor = row[r.pivot];
            if (factor != 0)
                for (std::size_t i = r.pivot; i < dim_; ++i) row[i] -= factor * r.entries[i];
        }
        std::size_t pivot = dim_;
        for (std::size_t i = 0; i < dim_; ++i)
            if (row[i] != 0) { pivot = i; break; }
        if (pivot == dim_) return false;
        Rational lead = row[pivot];
        for (std::size_t i = pivot; i < dim_; ++i) row[i] /= lead;
        rows_.push_back({pivot, std::move(row)});
        return true;
    }

  private:
    struct Row {
        std::size_t pivot;
        std::vector<Rational> entries;
    };
    std::size_t dim_;
    std::vector<Row> rows_;
};

} // namespace

WaEquivResult equiv_poly(const WeightedAutomaton& a1, const WeightedAutomaton& a2) {
    WeightedAutomaton joint = joint_automaton(a1, a2);
    auto weights = transition_weights(joint);
    std::size_t letters = joint.alphabet.num_letters();
    std::size_t dim = joint.num_states;
    auto off = static_cast<std::uint32_t>(a1.num_states);

    std::vector<TaggedVector> lambda;
    lambda.push_back({indicator(dim, joint.initial), {}, {}});

    std::size_t rounds = a1.num_states + a2.num_states;
    for (std::size_t round = 0; round < rounds; ++round) {
        // extend every vector by every (letter, weight), in canonical order
        std::vector<TaggedVector> extended;
        for (const auto& tv : lambda)
            for (std::uint32_t letter = 0; letter < letters; ++letter)
                for (WeightId r : weights) {
                    CountVector v = count_step(joint, tv.vec, letter, r);
                    if (v.is_zero()) continue;
                    TaggedVector
                        ext{std::move(v), tv.word, tv.gamma};
                    ext.word.push_back(letter);
                    ext.gamma.push_back(r);
                    Count c1 = final_sum(ext.vec, a1.final);
                    Count c2 = final_sum(ext.vec, a2.final, off);
                    if (c1 != c2)
                        return {false, WaDisagreement{ext.word, ext.gamma, c1, c2}};
                    extended.push_back(std::move(ext));
                }
        // reduce to a maximal linearly independent subset, keeping the
        // earliest generators
        RationalBasis basis(dim);
        std::vector<TaggedVector> reduced;
        for (auto& tv : extended)
            if (basis.try_insert(tv.vec)) reduced.push_back(std::move(tv));
        lambda = std::move(reduced);
        if (lambda.empty()) break;
    }
    return {};
}

WeightedAutomaton prune_useful(const WeightedAutomaton& a) {
    std::vector<std::vector<std::uint32_t>> fwd(a.num_states), bwd(a.num_states);
    for (const auto& t : a.transitions) {
        fwd[t.from].push_back(t.to);
        bwd[t.to].push_back(t.from);
    }
    auto closure = [&](const std::vector<std::uint32_t>& seed,
                       const std::vector<std::vector<std::uint32_t>>& edges) {
        std::vector<bool> seen(a.num_states, false);
        std::deque<std::uint32_t> queue(seed.begin(), seed.end());
        for (auto q : seed) seen[q] = true;
        while (!queue.empty()) {
            auto q = queue.front();
            queue.pop_front();
            for (auto to : edges[q])
                if (!seen[to]) { seen[to] = true; queue.push_back(to); }
        }
        return seen;
    };
    auto reach = closure(a.initial, fwd);
    auto coreach = closure(a.final, bwd);

    // BFS renumbering of useful states from the initial set
    std::vector<std::uint32_t> order(a.num_states, UINT32_MAX);
    std::uint32_t next = 0;
    std::deque<std::uint32_t> queue;
    auto visit = [&](std::uint32_t q) {
        if (reach[q] && coreach[q] && order[q] == UINT32_MAX) {
            order[q] = next++;
            queue.push_back(q);
        }
    };
    for (auto q : a.initial) visit(q);
    // edges in transition-list order give the deterministic BFS
    std::vector<std::vector<std::uint32_t>> out_edges(a.num_states);
    for (const auto& t : a.transitions) out_edges[t.from].push_back(t.to);
    while (!queue.empty()) {
        auto q = queue.front();
        queue.pop_front();
        for (auto to : out_edges[q]) visit(to);
    }

    WeightedAutomaton b;
    b.alphabet = a.alphabet;
    b.weights = a.weights;
    b.num_states = next == 0 ? 1 : next; // keep one dead state if nothing is useful
    for (const auto& t : a.transitions)
        if (order[t.from] != UINT32_MAX && order[t.to] != UINT32_MAX)
            b.transitions.push_back({order[t.from], t.letter, order[t.to], t.weight});
    for (auto q : a.initial)
        if (order[q] != UINT32_MAX) b.initial.push_back(order[q]);
    for (auto q : a.final)
        if (order[q] != UINT32_MAX) b.final.push_back(order[q]);
    std::sort(b.initial.begin(), b.initial.end());
    std::sort(b.final.begin(), b.final.end());
    if (next == 0) b.initial = {0};
    return b;
}

std::string wa_to_json(const WeightedAutomaton& a) {
    nlohmann::ordered_json j;
    j["states"] = a.num_states;
    j["initial"] = a.initial;
    j["final"] = a.final;
    j["alphabet"] = a.alphabet.base.names();
    j["weights"] = a.weights.names();
    std::vector<std::string> tracks;
    for (const auto& t : a.alphabet.tracks) tracks.push_back(t.name);
    j["tracks"] = tracks;
    j["transitions"] = nlohmann::ordered_json::array();
    for (const auto& t : a.transitions) {
        nlohmann::ordered_json r;
        r["from"] = t.from;
        r["letter"] = a.alphabet.base.name(a.alphabet.base_of(t.letter));
        if (!a.alphabet.tracks.empty()) {
            nlohmann::ordered_json bits = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < a.alphabet.tracks.size(); ++i)
                bits[a.alphabet.tracks[i].name] = a.alphabet.bit_of(t.letter, i) ? 1 : 0;
            r["tracks"] = bits;
        }
        r["to"] = t.to;
        r["weight"] = a.weights.name(t.weight);
        j["transitions"].push_back(r);
    }
    return j.dump(2);
}

WeightedAutomaton wa_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw EvalError(std::string("automaton file is not valid JSON: ") + e.what());
    }
    WeightedAutomaton a;
    try {
        a.num_states = j.at("states").get<std::size_t>();
        a.alphabet.base = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
        a.weights = WeightSet(j.at("weights").get<std::vector<std::string>>());
        if (j.contains("tracks"))
            for (const auto& name : j.at("tracks").get<std::vector<std::string>>())
                a.alphabet.tracks.push_back(make_variable(name));
        a.initial = j.at("initial").get<std::vector<std::uint32_t>>();
        a.final = j.at("final").get<std::vector<std::uint32_t>>();
        for (const auto& r : j.at("transitions")) {
            WaTransition t;
            t.from = r.at("from").get<std::uint32_t>();
            t.to = r.at("to").get<std::uint32_t>();
            auto letter = a.alphabet.base.find(r.at("letter").get<std::string>());
            if (!letter) throw EvalError("transition letter not in alphabet");
            std::uint32_t bits = 0;
            if (!a.alphabet.tracks.empty()) {
                if (!r.contains("tracks"))
                    throw EvalError("transition misses its per-track bits");
                for (std::size_t i = 0; i < a.alphabet.tracks.size(); ++i) {
                    int bit = r.at("tracks").at(a.alphabet.tracks[i].name).get<int>();
                    if (bit != 0 && bit != 1) throw EvalError("track bit must be 0 or 1");
                    if (bit) bits |= 1u << i;
                }
            }
            t.letter = a.alphabet.encode(*letter, bits);
            auto w = a.weights.find(r.at("weight").get<std::string>());
            if (!w) throw EvalError("transition weight not in weight set");
            t.weight = *w;
            a.transitions.push_back(t);
        }
    } catch (const nlohmann::json::exception& e) {
        throw EvalError(std::string("automaton JSON does not match the schema: ") + e.what());
    }
    for (auto q : a.initial)
        if (q >= a.num_states) throw EvalError("initial state index out of range");
    for (auto q : a.final)
        if (q >= a.num_states) throw EvalError("final state index out of range");
    for (const auto& t : a.transitions)
        if (t.from >= a.num_states || t.to >= a.num_states)
            throw EvalError("transition references a state index >= the state count");
    std::sort(a.initial.begin(), a.initial.end());
    a.initial.erase(std::unique(a.initial.begin(), a.initial.end()), a.initial.end());
    std::sort(a.final.begin(), a.final.end());
    a.final.erase(std::unique(a.final.begin(), a.final.end()), a.final.end());
    return a;
}

} // namespace wmso
