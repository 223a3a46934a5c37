// Serial reference paths versus their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "tmimo/harness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace tmimo;

struct DemapFixture {
  LinkConfig link;
  Permutation perm = Permutation::build(link.code_length, 7);
  TransmittedFrame tx = transmit_frame(link, perm, snr_to_noise_var(10.0, link.m_t), 7, 0);
  std::vector<double> l_a = std::vector<double>(link.code_length, 0.0);
  std::vector<std::uint8_t> flags = std::vector<std::uint8_t>(link.code_length, 0);
};

const DemapFixture& demap_fixture() {
  static const DemapFixture f;
  return f;
}

void demap_block(benchmark::State& state, Execution exec, ClipMode mode) {
  const auto& f = demap_fixture();
  const auto c = Constellation::by_name(f.link.constellation);
  const SdConfig cfg{mode, clips(mode) ? ter_threshold(2e-3) : kInf};
  const std::size_t k = f.link.code_length;
  std::vector<double> app(k), ext(k), prev(k, 0.0);
  std::size_t nodes = 0;
  for (auto _ : state) {
    nodes = demap_all_uses(f.tx.uses, c, f.l_a, f.flags, cfg, prev, prev, app, ext, exec);
    benchmark::DoNotOptimize(app.data());
  }
  state.counters["nodes"] = static_cast<double>(nodes);
  state.counters["uses/s"] =
      benchmark::Counter(static_cast<double>(f.tx.uses.size()), benchmark::Counter::kIsIterationInvariantRate);
}

void campaign(benchmark::State& state, Execution exec) {
  RunConfig cfg;
  cfg.link.code_length = 4608;
  cfg.snr_db = {10.0};
  cfg.modes = {ClipMode::kSuDapdc};
  cfg.frames = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg, exec).rows.size());
  state.counters["frames/s"] =
      benchmark::Counter(static_cast<double>(cfg.frames), benchmark::Counter::kIsIterationInvariantRate);
}

BENCHMARK_CAPTURE(demap_block, serial_exact, Execution::kSerial, ClipMode::kExact)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(demap_block, parallel_exact, Execution::kParallel, ClipMode::kExact)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(demap_block, serial_su_dapdc, Execution::kSerial, ClipMode::kSuDapdc)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(demap_block, parallel_su_dapdc, Execution::kParallel, ClipMode::kSuDapdc)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(campaign, serial, Execution::kSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(campaign, parallel, Execution::kParallel)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
#endif
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
