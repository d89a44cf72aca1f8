#include "wmso/dfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include <json.hpp>

namespace wmso {

std::optional<std::size_t> TrackAlphabet::track_index(const Variable& v) const {
    for (std::size_t i = 0; i < tracks.size(); ++i)
        if (tracks[i] == v) return i;
    return std::nullopt;
}

ExtWord encode_pointed_word(const PointedWord& pw, const TrackAlphabet& alphabet) {
    ExtWord out;
    out.reserve(pw.length());
    for (std::size_t pos = 1; pos <= pw.length(); ++pos) {
        std::uint32_t bits = 0;
        for (std::size_t t = 0; t < alphabet.tracks.size(); ++t) {
            const Variable& v = alphabet.tracks[t];
            bool on;
            if (v.is_first_order()) {
                auto it = pw.fo_val.find(v);
                if (it == pw.fo_val.end())
                    throw AutomatonError("valuation does not cover track variable " + v.name);
                on = it->second == pos;
            } else {
                auto it = pw.so_val.find(v);
                if (it == pw.so_val.end())
                    throw AutomatonError("valuation does not cover track variable " + v.name);
                on = it->second.count(pos) != 0;
            }
            if (on) bits |= 1u << t;
        }
        out.push_back(alphabet.encode(pw.word[pos - 1], bits));
    }
    return out;
}

PointedWord decode_ext_word(const ExtWord& w, const TrackAlphabet& alphabet) {
    PointedWord pw;
    for (auto ext : w) pw.word.push_back(alphabet.base_of(ext));
    for (std::size_t t = 0; t < alphabet.tracks.size(); ++t) {
        const Variable& v = alphabet.tracks[t];
        if (v.is_first_order()) {
            std::size_t where = 0, count = 0;
            for (std::size_t pos = 1; pos <= w.size(); ++pos)
                if (alphabet.bit_of(w[pos - 1], t)) { where = pos; ++count; }
            if (count != 1)
                throw AutomatonError("first-order track " + v.name +
                                     " does not carry exactly one 1");
            pw.fo_val[v] = where;
        } else {
            std::set<std::size_t> I;
            for (std::size_t pos = 1; pos <= w.size(); ++pos)
                if (alphabet.bit_of(w[pos - 1], t)) I.insert(pos);
            pw.so_val[v] = std::move(I);
        }
    }
    return pw;
}

bool Dfa::accepts(const ExtWord& w) const {
    std::uint32_t q = static_cast<std::uint32_t>(initial);
    for (auto a : w) q = delta[q][a];
    return final[q];
}

Dfa complement(const Dfa& d) {
    Dfa out = d;
    for (std::size_t q = 0; q < out.final.size(); ++q) out.final[q] = !out.final[q];
    return out;
}

Dfa product(const Dfa& a, const Dfa& b, BoolOp op) {
    if (!(a.alphabet == b.alphabet))
        throw AutomatonError("product over mismatched track alphabets");
    std::size_t letters = a.alphabet.num_letters();
    Dfa out;
    out.alphabet = a.alphabet;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;
    auto intern = [&](std::uint32_t qa, std::uint32_t qb) {
        auto [it, fresh] = index.try_emplace({qa, qb}, static_cast<std::uint32_t>(index.size()));
        if (fresh) {
            queue.emplace_back(qa, qb);
            out.delta.emplace_back(letters, 0);
            bool fa = a.final[qa], fb = b.final[qb];
            out.final.push_back(op == BoolOp::conjunction ? (fa && fb) : (fa || fb));
        }
        return it->second;
    };
    out.initial = intern(static_cast<std::uint32_t>(a.initial),
                         static_cast<std::uint32_t>(b.initial));
    while (!queue.empty()) {
        auto [qa, qb] = queue.front();
        queue.pop_front();
        std::uint32_t q = index.at({qa, qb});
        for (std::uint32_t l = 0; l < letters; ++l)
            out.delta[q][l] = intern(a.delta[qa][l], b.delta[qb][l]);
    }
    return out;
}

namespace {

TrackAlphabet drop_track(const TrackAlphabet& alphabet, const Variable& track,
                         std::size_t& index) {
    auto pos = alphabet.track_index(track);
    if (!pos) throw AutomatonError("no track for variable " + track.name);
    index = *pos;
    TrackAlphabet out;
    out.base = alphabet.base;
    for (std::size_t i = 0; i < alphabet.tracks.size(); ++i)
        if (i != *pos) out.tracks.push_back(alphabet.tracks[i]);
    return out;
}

std::uint32_t drop_bit(const TrackAlphabet& from, std::uint32_t ext, std::size_t index,
                       const TrackAlphabet& to) {
    std::uint32_t bits = from.bits_of(ext);
    std::uint32_t low = bits & ((1u << index) - 1u);
    std::uint32_t high = bits >> (index + 1);
    return to.encode(from.base_of(ext), (high << index) | low);
}

} // namespace

Nfa project(const Dfa& d, const Variable& track) {
    std::size_t index;
    Nfa out;
    out.alphabet = drop_track(d.alphabet, track, index);
    out.num_states = d.num_states();
    out.initial = {static_cast<std::uint32_t>(d.initial)};
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
        if (d.final[q]) out.final.push_back(q);
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
        for (std::uint32_t l = 0; l < d.alphabet.num_letters(); ++l)
            out.transitions.emplace_back(
                q, drop_bit(d.alphabet, l, index, out.alphabet), d.delta[q][l]);
    return out;
}

Nfa project(const Nfa& n, const Variable& track) {
    std::size_t index;
    Nfa out;
    out.alphabet = drop_track(n.alphabet, track, index);
    out.num_states = n.num_states;
    out.initial = n.initial;
    out.final = n.final;
    for (const auto& [from, letter, to] : n.transitions)
        out.transitions.emplace_back(from, drop_bit(n.alphabet, letter, index, out.alphabet),
                                     to);
    return out;
}

Dfa determinize(const Nfa& n) {
    std::size_t letters = n.alphabet.num_letters();
    // successor lists per (state, letter)
    std::vector<std::vector<std::vector<std::uint32_t>>> succ(
        n.num_states, std::vector<std::vector<std::uint32_t>>(letters));
    for (const auto& [from, letter, to] : n.transitions) succ[from][letter].push_back(to);

    std::vector<bool> is_final(n.num_states, false);
    for (auto q : n.final) is_final[q] = true;

    Dfa out;
    out.alphabet = n.alphabet;
    std::map<std::vector<std::uint32_t>, std::uint32_t> index;
    std::deque<std::vector<std::uint32_t>> queue;
    auto intern = [&](std::vector<std::uint32_t> set) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        auto [it, fresh] = index.try_emplace(set, static_cast<std::uint32_t>(index.size()));
        if (fresh) {
            queue.push_back(set);
            out.delta.emplace_back(letters, 0);
            bool f = false;
            for (auto q : set) f = f || is_final[q];
            out.final.push_back(f);
        }
        return it->second;
    };
    out.initial = intern(n.initial);
    while (!queue.empty()) {
        auto set = queue.front();
        queue.pop_front();
        std::uint32_t q = index.at(set);
        for (std::uint32_t l = 0; l < letters; ++l) {
            std::vector<std::uint32_t> next;
            for (auto s : set)
                next.insert(next.end(), succ[s][l].begin(), succ[s][l].end());
            out.delta[q][l] = intern(std::move(next));
        }
    }
    return out;
}

namespace {

// Canonical renumbering: BFS from the initial state with letters in
// ascending order; unreachable states are dropped (minimization keeps the
// automaton complete, so dropping them is safe only after reachability was
// already established by construction - both call sites guarantee it).
Dfa bfs_renumber(const Dfa& d, const std::vector<std::uint32_t>& state_class,
                 std::size_t num_classes, std::vector<int>* class_labels,
                 const std::vector<int>* labels) {
    std::size_t letters = d.alphabet.num_letters();
    std::vector<std::uint32_t> order(num_classes, UINT32_MAX);
    std::vector<std::uint32_t> repr(num_classes, UINT32_MAX);
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
        if (repr[state_class[q]] == UINT32_MAX) repr[state_class[q]] = q;

    std::deque<std::uint32_t> queue;
    std::uint32_t next_id = 0;
    auto visit = [&](std::uint32_t cls) {
        if (order[cls] == UINT32_MAX) {
            order[cls] = next_id++;
            queue.push_back(cls);
        }
    };
    visit(state_class[d.initial]);
    Dfa out;
    out.alphabet = d.alphabet;
    while (!queue.empty()) {
        std::uint32_t cls = queue.front();
        queue.pop_front();
        for (std::uint32_t l = 0; l < letters; ++l) visit(state_class[d.delta[repr[cls]][l]]);
    }
    std::size_t reachable = next_id;
    out.delta.assign(reachable, std::vector<std::uint32_t>(letters, 0));
    out.final.assign(reachable, false);
    if (class_labels) class_labels->assign(reachable, -1);
    out.initial = order[state_class[d.initial]];
    for (std::uint32_t cls = 0; cls < num_classes; ++cls) {
        if (order[cls] == UINT32_MAX) continue;
        std::uint32_t q = repr[cls];
        out.final[order[cls]] = d.final[q];
        if (class_labels) (*class_labels)[order[cls]] = (*labels)[q];
        for (std::uint32_t l = 0; l < letters; ++l)
            out.delta[order[cls]][l] = order[state_class[d.delta[q][l]]];
    }
    return out;
}

// Hopcroft partition refinement from an initial partition.
std::pair<std::vector<std::uint32_t>, std::size_t> refine(const Dfa& d,
                                                          std::vector<std::uint32_t> block_of,
                                                          std::size_t num_blocks) {
    std::size_t n = d.num_states();
    std::size_t letters = d.alphabet.num_letters();
    std::vector<std::vector<std::vector<std::uint32_t>>> pred(
        n, std::vector<std::vector<std::uint32_t>>(letters));
    for (std::uint32_t q = 0; q < n; ++q)
        for (std::uint32_t l = 0; l < letters; ++l) pred[d.delta[q][l]][l].push_back(q);

    std::vector<std::vector<std::uint32_t>> blocks(num_blocks);
    for (std::uint32_t q = 0; q < n; ++q) blocks[block_of[q]].push_back(q);

    std::deque<std::pair<std::uint32_t, std::uint32_t>> worklist; // (block, letter)
    for (std::uint32_t b = 0; b < num_blocks; ++b)
        for (std::uint32_t l = 0; l < letters; ++l) worklist.emplace_back(b, l);

    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> count_in(blocks.size(), 0);
    while (!worklist.empty()) {
        auto [splitter, letter] = worklist.front();
        worklist.pop_front();
        // states with a `letter`-edge into `splitter`
        std::vector<std::uint32_t> incoming;
        for (auto q : blocks[splitter])
            for (auto p : pred[q][letter]) incoming.push_back(p);
        if (incoming.empty()) continue;

        touched.clear();
        count_in.assign(blocks.size(), 0);
        for (auto p : incoming) {
            if (count_in[block_of[p]]++ == 0) touched.push_back(block_of[p]);
        }
        std::sort(incoming.begin(), incoming.end());
        incoming.erase(std::unique(incoming.begin(), incoming.end()), incoming.end());
        count_in.assign(blocks.size(), 0);
        for (auto p : incoming) ++count_in[block_of[p]];

        for (auto b : touched) {
            if (count_in[b] == 0 || count_in[b] == blocks[b].size()) continue;
            // split block b
            std::uint32_t nb = static_cast<std::uint32_t>(blocks.size());
            std::vector<std::uint32_t> stay, move;
            std::vector<bool> in_incoming(n, false);
            for (auto p : incoming)
                if (block_of[p] == b) in_incoming[p] = true;
            for (auto q : blocks[b]) (in_incoming[q] ? move : stay).push_back(q);
            blocks[b] = std::move(stay);
            blocks.push_back(std::move(move));
            count_in.push_back(0);
            for (auto q : blocks[nb]) block_of[q] = nb;
            for (std::uint32_t l = 0; l < letters; ++l) worklist.emplace_back(nb, l);
        }
    }
    // compact block ids
    std::vector<std::uint32_t> remap(blocks.size(), 0);
    std::size_t id = 0;
    for (std::uint32_t b = 0; b < blocks.size(); ++b)
        if (!blocks[b].empty()) remap[b] = static_cast<std::uint32_t>(id++);
    for (std::uint32_t q = 0; q < n; ++q) block_of[q] = remap[block_of[q]];
    return {block_of, id};
}

} // namespace

Dfa minimize(const Dfa& d) {
    // start from the reachable part
    std::vector<std::uint32_t> ident(d.num_states());
    std::iota(ident.begin(), ident.end(), 0);
    Dfa reach = bfs_renumber(d, ident, d.num_states(), nullptr, nullptr);

    std::vector<std::uint32_t> block_of(reach.num_states());
    for (std::uint32_t q = 0; q < reach.num_states(); ++q) block_of[q] = reach.final[q] ? 1 : 0;
    std::size_t blocks = 2;
    // all-final or all-nonfinal automata start from one block
    if (std::all_of(reach.final.begin(), reach.final.end(), [](bool f) { return f; }) ||
        std::none_of(reach.final.begin(), reach.final.end(), [](bool f) { return f; })) {
        std::fill(block_of.begin(), block_of.end(), 0);
        blocks = 1;
    }
    auto [cls, n] = refine(reach, std::move(block_of), blocks);
    return bfs_renumber(reach, cls, n, nullptr, nullptr);
}

std::pair<Dfa, std::vector<int>> minimize_with_classes(const Dfa& d,
                                                       const std::vector<int>& cls_in) {
    std::vector<std::uint32_t> ident(d.num_states());
    std::iota(ident.begin(), ident.end(), 0);
    Dfa reach = bfs_renumber(d, ident, d.num_states(), nullptr, nullptr);
    // recompute labels for the reachable renumbering via a parallel pass
    std::vector<int> labels(reach.num_states(), -1);
    {
        // replay the BFS to map old states to new ids
        std::vector<std::uint32_t> order(d.num_states(), UINT32_MAX);
        std::deque<std::uint32_t> queue;
        std::uint32_t next_id = 0;
        auto visit = [&](std::uint32_t q) {
            if (order[q] == UINT32_MAX) {
                order[q] = next_id++;
                queue.push_back(q);
            }
        };
        visit(static_cast<std::uint32_t>(d.initial));
        while (!queue.empty()) {
            std::uint32_t q = queue.front();
            queue.pop_front();
            for (std::uint32_t l = 0; l < d.alphabet.num_letters(); ++l) visit(d.delta[q][l]);
        }
        for (std::uint32_t q = 0; q < d.num_states(); ++q)
            if (order[q] != UINT32_MAX) labels[order[q]] = cls_in[q];
    }
    // initial partition by (label, final)
    std::map<std::pair<int, bool>, std::uint32_t> key;
    std::vector<std::uint32_t> block_of(reach.num_states());
    for (std::uint32_t q = 0; q < reach.num_states(); ++q) {
        auto [it, _] = key.try_emplace({labels[q], reach.final[q]},
                                       static_cast<std::uint32_t>(key.size()));
        block_of[q] = it->second;
    }
    auto [cls, n] = refine(reach, std::move(block_of), key.size());
    std::vector<int> out_labels;
    Dfa out = bfs_renumber(reach, cls, n, &out_labels, &labels);
    return {out, out_labels};
}

namespace {

template <typename Step>
std::optional<ExtWord> shortest_word_impl(std::size_t num_states, std::size_t letters,
                                          const std::vector<std::uint32_t>& initial,
                                          const std::vector<bool>& final, Step&& step) {
    struct Item { std::uint32_t state; std::uint32_t via_letter; std::int64_t parent; };
    std::vector<Item> bfs;
    std::vector<bool> seen(num_states, false);
    for (auto q : initial) {
        if (seen[q]) continue;
        seen[q] = true;
        bfs.push_back({q, 0, -1});
    }
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        if (final[bfs[i].state]) {
            ExtWord w;
            for (std::int64_t j = static_cast<std::int64_t>(i); bfs[j].parent >= 0;
                 j = bfs[j].parent)
                w.push_back(bfs[j].via_letter);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (std::uint32_t l = 0; l < letters; ++l)
            step(bfs[i].state, l, [&](std::uint32_t to) {
                if (!seen[to]) {
                    seen[to] = true;
                    bfs.push_back({to, l, static_cast<std::int64_t>(i)});
                }
            });
    }
    return std::nullopt;
}

} // namespace

std::optional<ExtWord> shortest_word(const Dfa& d) {
    return shortest_word_impl(
        d.num_states(), d.alphabet.num_letters(), {static_cast<std::uint32_t>(d.initial)},
        d.final, [&](std::uint32_t q, std::uint32_t l, auto&& push) { push(d.delta[q][l]); });
}

std::optional<ExtWord> shortest_word(const Nfa& n) {
    std::vector<std::vector<std::vector<std::uint32_t>>> succ(
        n.num_states, std::vector<std::vector<std::uint32_t>>(n.alphabet.num_letters()));
    for (const auto& [from, letter, to] : n.transitions) succ[from][letter].push_back(to);
    std::vector<bool> final(n.num_states, false);
    for (auto q : n.final) final[q] = true;
    return shortest_word_impl(n.num_states, n.alphabet.num_letters(), n.initial, final,
                              [&](std::uint32_t q, std::uint32_t l, auto&& push) {
                                  for (auto to : succ[q][l]) push(to);
                              });
}

bool is_empty(const Dfa& d) { return !shortest_word(d).has_value(); }
bool is_empty(const Nfa& n) { return !shortest_word(n).has_value(); }

bool language_equal(const Dfa& a, const Dfa& b) {
    Dfa axb = product(a, complement(b), BoolOp::conjunction);
    if (!is_empty(axb)) return false;
    Dfa bxa = product(b, complement(a), BoolOp::conjunction);
    return is_empty(bxa);
}

namespace {

nlohmann::ordered_json transition_record(const TrackAlphabet& alphabet, std::uint32_t from,
                                         std::uint32_t letter, std::uint32_t to) {
    nlohmann::ordered_json t;
    t["from"] = from;
    t["letter"] = alphabet.base.name(alphabet.base_of(letter));
    if (!alphabet.tracks.empty()) {
        nlohmann::ordered_json bits = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < alphabet.tracks.size(); ++i)
            bits[alphabet.tracks[i].name] = alphabet.bit_of(letter, i) ? 1 : 0;
        t["tracks"] = bits;
    }
    t["to"] = to;
    return t;
}

} // namespace

std::string dfa_to_json(const Dfa& d) {
    nlohmann::ordered_json j;
    j["states"] = d.num_states();
    j["initial"] = std::vector<std::size_t>{d.initial};
    std::vector<std::size_t> finals;
    for (std::size_t q = 0; q < d.num_states(); ++q)
        if (d.final[q]) finals.push_back(q);
    j["final"] = finals;
    j["alphabet"] = d.alphabet.base.names();
    std::vector<std::string> tracks;
    for (const auto& t : d.alphabet.tracks) tracks.push_back(t.name);
    j["tracks"] = tracks;
    j["transitions"] = nlohmann::ordered_json::array();
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
        for (std::uint32_t l = 0; l < d.alphabet.num_letters(); ++l)
            j["transitions"].push_back(transition_record(d.alphabet, q, l, d.delta[q][l]));
    return j.dump(2);
}

std::string nfa_to_json(const Nfa& n) {
    nlohmann::ordered_json j;
    j["states"] = n.num_states;
    j["initial"] = n.initial;
    j["final"] = n.final;
    j["alphabet"] = n.alphabet.base.names();
    std::vector<std::string> tracks;
    for (const auto& t : n.alphabet.tracks) tracks.push_back(t.name);
    j["tracks"] = tracks;
    j["transitions"] = nlohmann::ordered_json::array();
    for (const auto& [from, letter, to] : n.transitions)
        j["transitions"].push_back(transition_record(n.alphabet, from, letter, to));
    return j.dump(2);
}

} // namespace wmso
