#include <benchmark/benchmark.h>

#include <wmso/compile_core.hpp>
#include <wmso/eval.hpp>
#include <wmso/parse.hpp>

using namespace wmso;

namespace {

const Session& session() {
    static const Session s = Session::from_json_text(
        R"({"alphabet":["a","b"],"weights":["0","1"],"default_weight":"0"})");
    return s;
}

void bench_compile_consecutive_as(benchmark::State& state) {
    CorePtr phi = parse_core(
        "sum x. prod y. (x <= y & forall z. ((x <= z & z <= y) -> Pa(z))) ? 1 : 0", session());
    for (auto _ : state) {
        auto a = compile_core(phi, {}, session());
        benchmark::DoNotOptimize(a.num_states);
    }
}

void bench_eval_consecutive_as(benchmark::State& state) {
    CorePtr phi = parse_core(
        "sum x. prod y. (x <= y & forall z. ((x <= z & z <= y) -> Pa(z))) ? 1 : 0", session());
    PointedWord pw = PointedWord::from_text("word=abaabbaa", session());
    for (auto _ : state) {
        auto m = eval_core(phi, pw);
        benchmark::DoNotOptimize(m.total());
    }
}

} // namespace

BENCHMARK(bench_compile_consecutive_as)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_eval_consecutive_as)->Unit(benchmark::kMillisecond);
