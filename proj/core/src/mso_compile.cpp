#include "wmso/mso_compile.hpp"

#include <algorithm>

namespace wmso {

namespace {
using MK = MsoFormula::Kind;

TrackAlphabet make_ext(const Alphabet& base, const std::vector<Variable>& tracks) {
    if (tracks.size() > 20)
        throw AutomatonError("track alphabet too wide (" + std::to_string(tracks.size()) +
                             " tracks)");
    return TrackAlphabet{base, tracks};
}

// Builds a DFA from an explicit transition table description.
struct DfaBuilder {
    TrackAlphabet alphabet;
    std::vector<std::vector<std::uint32_t>> delta;
    std::vector<bool> final;

    explicit DfaBuilder(TrackAlphabet a, std::size_t states)
        : alphabet(std::move(a)),
          delta(states, std::vector<std::uint32_t>(alphabet.num_letters(), 0)),
          final(states, false) {}

    Dfa done(std::size_t initial) {
        Dfa d;
        d.alphabet = std::move(alphabet);
        d.initial = initial;
        d.delta = std::move(delta);
        d.final = std::move(final);
        return d;
    }
};

// "Exactly one 1 on track t" over the full extended alphabet:
// 0 = none seen, 1 = one seen, 2 = dead.
Dfa exactly_one_dfa(const TrackAlphabet& ext, std::size_t track) {
    DfaBuilder b(ext, 3);
    for (std::uint32_t l = 0; l < ext.num_letters(); ++l) {
        bool on = ext.bit_of(l, track);
        b.delta[0][l] = on ? 1 : 0;
        b.delta[1][l] = on ? 2 : 1;
        b.delta[2][l] = 2;
    }
    b.final[1] = true;
    return b.done(0);
}

// Nonempty word.
Dfa nonempty_dfa(const TrackAlphabet& ext) {
    DfaBuilder b(ext, 2);
    for (std::uint32_t l = 0; l < ext.num_letters(); ++l) {
        b.delta[0][l] = 1;
        b.delta[1][l] = 1;
    }
    b.final[1] = true;
    return b.done(0);
}

} // namespace

Dfa universe_dfa(const Alphabet& base, const std::vector<Variable>& tracks) {
    TrackAlphabet ext = make_ext(base, tracks);
    Dfa u = nonempty_dfa(ext);
    for (std::size_t t = 0; t < tracks.size(); ++t)
        if (tracks[t].is_first_order())
            u = product(u, exactly_one_dfa(ext, t), BoolOp::conjunction);
    return minimize(u);
}

namespace {

// Complement inside the universe: well-formed nonempty encodings only.
Dfa complement_u(const Dfa& d, const Dfa& universe) {
    return minimize(product(complement(d), universe, BoolOp::conjunction));
}

struct MsoCompiler {
    const Alphabet& base;

    Dfa compile(const MsoPtr& f, const std::vector<Variable>& tracks) {
        TrackAlphabet ext = make_ext(base, tracks);
        Dfa universe = universe_dfa(base, tracks);
        return go(f, tracks, ext, universe);
    }

    Dfa go(const MsoPtr& f, const std::vector<Variable>& tracks, const TrackAlphabet& ext,
           const Dfa& universe) {
        switch (f->kind) {
            case MK::truth:
                return universe;
            case MK::letter_at:
                return atom_letter(f->letter, f->var, tracks, ext, universe);
            case MK::leq:
                return atom_leq(f->var, f->var2, tracks, ext, universe);
            case MK::membership:
                return atom_in(f->var, f->var2, tracks, ext, universe);
            case MK::negation:
                return complement_u(go(f->left, tracks, ext, universe), universe);
            case MK::conjunction:
                return minimize(product(go(f->left, tracks, ext, universe),
                                        go(f->right, tracks, ext, universe),
                                        BoolOp::conjunction));
            case MK::forall_fo:
            case MK::forall_so: {
                // forall v. phi  =  !exists v. !phi
                Variable v = f->var;
                MsoPtr body = f->left;
                if (std::find(tracks.begin(), tracks.end(), v) != tracks.end()) {
                    // binder shadows a track variable; rename it away
                    std::set<Variable> taken = all_vars(body);
                    taken.insert(tracks.begin(), tracks.end());
                    Variable fresh = fresh_variable(v.name, taken);
                    body = rename_free(body, v, fresh);
                    v = fresh;
                }
                std::vector<Variable> inner_tracks = tracks;
                inner_tracks.push_back(v);
                TrackAlphabet inner_ext = make_ext(base, inner_tracks);
                Dfa inner_universe = universe_dfa(base, inner_tracks);
                Dfa not_phi = complement_u(go(body, inner_tracks, inner_ext, inner_universe),
                                           inner_universe);
                Dfa exists = minimize(determinize(project(not_phi, v)));
                return complement_u(exists, universe);
            }
        }
        throw AutomatonError("corrupt MSO formula");
    }

    std::size_t need_track(const Variable& v, const std::vector<Variable>& tracks) const {
        for (std::size_t i = 0; i < tracks.size(); ++i)
            if (tracks[i] == v) return i;
        throw AutomatonError("track set does not cover free variable " + v.name);
    }

    // P_a(x): the position with the x-bit carries letter a.
    Dfa atom_letter(LetterId a, const Variable& x, const std::vector<Variable>& tracks,
                    const TrackAlphabet& ext, const Dfa& universe) {
        std::size_t tx = need_track(x, tracks);
        DfaBuilder b(ext, 3); // 0: before x, 1: after x, 2: dead
        for (std::uint32_t l = 0; l < ext.num_letters(); ++l) {
            bool on = ext.bit_of(l, tx);
            bool is_a = ext.base_of(l) == a;
            b.delta[0][l] = on ? (is_a ? 1u : 2u) : 0u;
            b.delta[1][l] = on ? 2u : 1u;
            b.delta[2][l] = 2;
        }
        b.final[1] = true;
        return minimize(product(b.done(0), universe, BoolOp::conjunction));
    }

    // x <= y: the x-position is at or before the y-position.
    Dfa atom_leq(const Variable& x, const Variable& y, const std::vector<Variable>& tracks,
                 const TrackAlphabet& ext, const Dfa& universe) {
        std::size_t tx = need_track(x, tracks);
        std::size_t ty = need_track(y, tracks);
        // 0: neither seen, 1: x seen, 2: both seen, 3: dead
        DfaBuilder b(ext, 4);
        for (std::uint32_t l = 0; l < ext.num_letters(); ++l) {
            bool on_x = ext.bit_of(l, tx);
            bool on_y = tx == ty ? on_x : ext.bit_of(l, ty);
            b.delta[0][l] = on_x ? (on_y ? 2u : 1u) : (on_y ? 3u : 0u);
            b.delta[1][l] = on_x ? 3u : (on_y ? 2u : 1u);
            b.delta[2][l] = (on_x || on_y) ? 3u : 2u;
            b.delta[3][l] = 3;
        }
        b.final[2] = true;
        return minimize(product(b.done(0), universe, BoolOp::conjunction));
    }

    // x in X: the x-position also carries the X-bit.
    Dfa atom_in(const Variable& x, const Variable& X, const std::vector<Variable>& tracks,
                const TrackAlphabet& ext, const Dfa& universe) {
        std::size_t tx = need_track(x, tracks);
        std::size_t tX = need_track(X, tracks);
        DfaBuilder b(ext, 3); // 0: before x, 1: after x, 2: dead
        for (std::uint32_t l = 0; l < ext.num_letters(); ++l) {
            bool on_x = ext.bit_of(l, tx);
            bool on_X = ext.bit_of(l, tX);
            b.delta[0][l] = on_x ? (on_X ? 1u : 2u) : 0u;
            b.delta[1][l] = on_x ? 2u : 1u;
            b.delta[2][l] = 2;
        }
        b.final[1] = true;
        return minimize(product(b.done(0), universe, BoolOp::conjunction));
    }
};

} // namespace

Dfa compile_mso(const MsoPtr& f, const std::vector<Variable>& tracks, const Alphabet& base) {
    for (const auto& v : free_vars(f))
        if (std::find(tracks.begin(), tracks.end(), v) == tracks.end())
            throw AutomatonError("track set does not cover free variable " + v.name);
    MsoCompiler c{base};
    return c.compile(f, tracks);
}

std::optional<MsoWitness> mso_sat(const MsoPtr& f, const std::vector<Variable>& tracks,
                                  const Alphabet& base) {
    Dfa d = compile_mso(f, tracks, base);
    auto w = shortest_word(d);
    if (!w) return std::nullopt;
    MsoWitness out;
    out.ext = *w;
    out.pointed = decode_ext_word(*w, d.alphabet);
    return out;
}

bool mso_entails(const std::vector<MsoPtr>& gamma, const MsoPtr& f, const Alphabet& base) {
    MsoPtr query = mso_and(mso_and_all(gamma), mso_not(f));
    std::set<Variable> vars = free_vars(f);
    for (const auto& g : gamma)
        for (const auto& v : free_vars(g)) vars.insert(v);
    return !mso_sat(query, canonical_tracks(vars), base).has_value();
}

std::vector<Variable> canonical_tracks(const std::set<Variable>& vars) {
    return {vars.begin(), vars.end()};
}

} // namespace wmso
