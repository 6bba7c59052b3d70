#include <benchmark/benchmark.h>

#include <numbers>

#include "zerosheet/search.hpp"
#include "zerosheet/search_kernels.hpp"

using namespace zerosheet;

namespace {

const BivariatePoly& protocol_poly() {
  static const BivariatePoly poly = [] {
    Image g = synth_image(40, 40, 7);
    for (auto [w, h, seed] : {std::array<std::size_t, 3>{2, 2, 8}, {2, 3, 9}, {3, 3, 10}}) {
      g = convolve(g, synth_blur(w, h, seed));
    }
    return ztransform(g).normalized();
  }();
  return poly;
}

std::vector<double> path_phases(std::size_t count) {
  std::vector<double> phases(count);
  for (std::size_t i = 0; i < count; ++i) phases[i] = 0.3 + 2 * std::numbers::pi * double(i) / double(count);
  return phases;
}

// Tracks that pair roots by index, which is enough to time the nullspace test.
struct TrackSet {
  std::vector<SamplePoint> points;
  std::vector<SheetTrack> tracks;
};

const TrackSet& track_set() {
  static const TrackSet set = [] {
    TrackSet s;
    SearchConfig cfg;
    cfg.blur_m = 3;
    cfg.blur_n = 3;
    const BivariatePoly& poly = protocol_poly();
    s.points = choose_sample_points(compute_q(3, 3), cfg, poly);
    std::vector<RootSlice> slices;
    for (const SamplePoint& p : s.points) slices.push_back(solve_slice(poly, p.value));
    Combinations gen(slices.front().count(), 2);
    std::vector<std::size_t> combination;
    while (gen.next(combination)) {
      SheetTrack t;
      t.combination = combination;
      for (const RootSlice& sl : slices) t.per_point_roots.push_back({sl.roots[combination[0]], sl.roots[combination[1]]});
      s.tracks.push_back(std::move(t));
    }
    return s;
  }();
  return set;
}

void BM_SolvePathSerial(benchmark::State& state) {
  const auto phases = path_phases(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::solve_path_serial(protocol_poly(), phases, 44, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SolvePathOmp(benchmark::State& state) {
  const auto phases = path_phases(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::solve_path_omp(protocol_poly(), phases, 44, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateTracksSerial(benchmark::State& state) {
  const TrackSet& s = track_set();
  const SearchConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::evaluate_tracks_serial(s.tracks, s.points, 3, 3, cfg));
  state.SetItemsProcessed(state.iterations() * std::int64_t(s.tracks.size()));
}

void BM_EvaluateTracksOmp(benchmark::State& state) {
  const TrackSet& s = track_set();
  const SearchConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::evaluate_tracks_omp(s.tracks, s.points, 3, 3, cfg));
  state.SetItemsProcessed(state.iterations() * std::int64_t(s.tracks.size()));
}

void BM_SearchBlur(benchmark::State& state) {
  SearchConfig cfg;
  const Execution exec = state.range(0) ? Execution::kParallel : Execution::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(search_blur(protocol_poly(), cfg, exec));
}

}  // namespace

BENCHMARK(BM_SolvePathSerial)->Arg(64)->Arg(628)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolvePathOmp)->Arg(64)->Arg(628)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateTracksSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateTracksOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SearchBlur)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
