#include <benchmark/benchmark.h>

#include "andcoop/channel.hpp"
#include "andcoop/engine.hpp"
#include "andcoop/link_math.hpp"
#include "andcoop/oracle.hpp"
#include "andcoop/protocol.hpp"

namespace {

using namespace andcoop;

void BM_FailProb(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    FailProbParams params{m, 30e6, 20e6, 1e-3, dbm_to_watts(-174.0)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fail_prob_m(params));
    }
}
BENCHMARK(BM_FailProb)->Arg(1)->Arg(4)->Arg(16);

void BM_SampleCycle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const LinkStatics statics = iid_link_statics(3, n, 10.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_cycle(statics, 0, CsiMode::perfect, seed++));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(3 * n + n * (n - 1) / 2));
}
BENCHMARK(BM_SampleCycle)->Arg(10)->Arg(50);

void BM_FullCycle(benchmark::State& state) {
    NetworkConfig cfg;
    cfg.n_devices = static_cast<int>(state.range(0));
    cfg.n_aps = 3;
    ProtocolParams params;
    params.beta = 0.5;
    const LinkStatics statics = iid_link_statics(cfg.n_aps, cfg.n_devices, 10.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const ChannelRealization real = sample_cycle(statics, 0, CsiMode::perfect, seed++);
        const Schedule schedule = build_schedule(real, params, cfg);
        benchmark::DoNotOptimize(run_cycle(real, schedule, params, cfg));
    }
}
BENCHMARK(BM_FullCycle)->Arg(10)->Arg(50);

void BM_ClosedFormDeepTail(benchmark::State& state) {
    IidScenario scn;
    scn.n_devices = 50;
    scn.n_aps = 3;
    scn.nominal_snr = 1.0;
    scn.bandwidth_hz = 20e6;
    scn.rate_b_bps = 40e6;
    scn.rate_r_bps = 40e6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p2h_closed_form(scn, 1e10));
    }
}
BENCHMARK(BM_ClosedFormDeepTail);

void BM_EngineRun(benchmark::State& state) {
    RunSpec spec;
    spec.cfg.n_devices = 10;
    spec.cfg.n_aps = 2;
    spec.iid_snr = 10.0;
    spec.n_cycles = 10000;
    spec.collect_energy_samples = false;
    for (auto _ : state) {
        spec.master_seed++;
        benchmark::DoNotOptimize(run(spec, static_cast<int>(state.range(0))));
    }
    state.SetItemsProcessed(state.iterations() * spec.n_cycles);
}
BENCHMARK(BM_EngineRun)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
