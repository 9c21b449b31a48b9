// Serial reference versus OpenMP path for each parallel kernel.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "omaf/geometry.hpp"
#include "omaf/playback.hpp"
#include "omaf/strategy.hpp"

namespace {

using namespace omaf;

const SphereRegion kViewport{{20, 10, 0}, 100, 70};
const SphereRegion kTile{{45, 0, 0}, 90, 90};

std::vector<SphereRegion> tile_regions() {
  std::vector<SphereRegion> out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 4; ++c) out.push_back({{135.0 - 90 * c, 45.0 - 90 * r, 0}, 90, 90});
  }
  return out;
}

void BM_Overlap(benchmark::State& state, bool parallel) {
  const geo::SamplingGrid grid{static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? geo::region_overlap_fraction(kViewport, kTile, grid)
                                      : geo::region_overlap_fraction_serial(kViewport, kTile, grid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_Coverage(benchmark::State& state, bool parallel) {
  const geo::SamplingGrid grid{static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  const auto cover = tile_regions();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? geo::coverage_fraction(kViewport, cover, grid)
                                      : geo::coverage_fraction_serial(kViewport, cover, grid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

playback::Raster noise(std::uint32_t w, std::uint32_t h, std::mt19937& rng) {
  auto r = playback::Raster::filled(w, h, 0, 0, 0);
  for (auto& px : r.pixels) px = static_cast<std::uint8_t>(rng());
  return r;
}

void BM_Compose(benchmark::State& state, bool parallel) {
  std::mt19937 rng(7);
  const auto side = static_cast<std::uint32_t>(state.range(0));
  const auto bg = noise(side, side, rng);
  const std::vector<playback::Layer> layers{{noise(side / 2, side / 2, rng), 0.6, {0, 0, side, side}, true},
                                            {noise(64, 64, rng), 0.8, {side / 4, side / 4, side / 2, side / 2}, false}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? playback::compose(bg, layers) : playback::compose_serial(bg, layers));
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_Session(benchmark::State& state, bool parallel) {
  TileGroup group{1, {}};
  std::vector<strategy::QualityVariant> variants;
  for (std::uint32_t r = 0; r < 2; ++r) {
    for (std::uint32_t c = 0; c < 4; ++c) {
      const std::uint32_t cell = r * 4 + c;
      group.members.push_back({cell + 1, c, r, {c * 960, r * 960, 960, 960}});
      for (std::uint32_t rank = 1; rank <= 3; ++rank) {
        variants.push_back({100 * rank + cell, c, r, rank, 6'000'000u / rank});
      }
    }
  }
  std::vector<strategy::TraceSample> trace;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    trace.push_back({i * 40, {std::fmod(i * 1.5, 360.0) - 180.0, 30.0 * std::sin(i * 0.01), 0.0}});
  }
  const auto budget = strategy::BudgetModel::constant(25'000'000);
  const strategy::SessionConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? strategy::simulate_session(trace, group, variants, budget, config)
                                      : strategy::simulate_session_serial(trace, group, variants, budget, config));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Overlap, serial, false)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_Overlap, omp, true)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_Coverage, serial, false)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_Coverage, omp, true)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_Compose, serial, false)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(BM_Compose, omp, true)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(BM_Session, serial, false)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Session, omp, true)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
