#include <benchmark/benchmark.h>

#include <wmso/wa.hpp>

#include "support/generators.hpp"

using namespace wmso;
using namespace wmso::tests;

namespace {

// |Sigma| = 2, 4 weights, 2 edges per state, mirroring the polynomial-time
// sanity-curve setup.
WeightedAutomaton sized_wa(const Session& session, Rng& rng, std::size_t n) {
    WeightedAutomaton w;
    w.alphabet = TrackAlphabet{session.alphabet, {}};
    w.weights = session.weights;
    w.num_states = n;
    for (std::size_t e = 0; e < 2 * n; ++e)
        w.transitions.push_back({static_cast<std::uint32_t>(pick(rng, n)),
                                 static_cast<std::uint32_t>(pick(rng, 2)),
                                 static_cast<std::uint32_t>(pick(rng, n)),
                                 static_cast<WeightId>(pick(rng, 4))});
    for (std::uint32_t q = 0; q < n; ++q) {
        if (pick(rng, 2)) w.initial.push_back(q);
        if (pick(rng, 2)) w.final.push_back(q);
    }
    if (w.initial.empty()) w.initial.push_back(0);
    if (w.final.empty()) w.final.push_back(static_cast<std::uint32_t>(n - 1));
    return w;
}

void bench_equiv_poly(benchmark::State& state) {
    static const Session session = Session::from_json_text(
        R"({"alphabet":["a","b"],"weights":["0","1","2","3"],"default_weight":"0"})");
    Rng rng(42);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    WeightedAutomaton a = sized_wa(session, rng, n);
    WeightedAutomaton b = sized_wa(session, rng, n);
    for (auto _ : state) {
        auto r = equiv_poly(a, b);
        benchmark::DoNotOptimize(r.equal);
    }
}

} // namespace

BENCHMARK(bench_equiv_poly)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
