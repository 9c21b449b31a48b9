#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <limits>

#include "gen.hpp"
#include "omaf/error.hpp"
#include "omaf/strategy.hpp"
#include "oracles.hpp"

namespace {

using namespace omaf;
using namespace omaf::strategy;
using omaf::gen::Rng;

// 4x2 grid over 3840x1920, two variants per cell: rank 1 at 4 Mbps, rank 2
// at 1 Mbps.
gen::StrategyInstance uniform_4x2() {
  gen::StrategyInstance inst;
  inst.group.group_id = 1;
  for (std::uint32_t r = 0; r < 2; ++r) {
    for (std::uint32_t c = 0; c < 4; ++c) {
      const std::uint32_t cell = r * 4 + c;
      inst.group.members.push_back({10 + cell, c, r, {c * 960, r * 960, 960, 960}});
      inst.variants.push_back({100 + cell, c, r, 1, 4'000'000});
      inst.variants.push_back({200 + cell, c, r, 2, 1'000'000});
    }
  }
  return inst;
}

constexpr std::uint64_t kTwoUpgrades = 8 * 1'000'000 + 2 * 3'000'000;

std::vector<std::uint32_t> ranks(std::span<const QualityVariant> selection) {
  std::vector<std::uint32_t> out;
  for (const auto& v : selection) out.push_back(v.quality_rank);
  return out;
}

TEST(Strategy, MakeGridRejectsBrokenInputs) {
  auto inst = uniform_4x2();
  const auto grid = make_grid(inst.group, inst.variants);
  EXPECT_EQ(grid.cols, 4u);
  EXPECT_EQ(grid.rows, 2u);
  for (const auto& cell : grid.variants) {
    ASSERT_EQ(cell.size(), 2u);
    EXPECT_LT(cell[0].quality_rank, cell[1].quality_rank);
  }
  auto code_of = [](const TileGroup& g, std::span<const QualityVariant> v) {
    try {
      make_grid(g, v);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::io;
  };
  auto missing = inst.group;
  missing.members.pop_back();
  EXPECT_EQ(code_of(missing, inst.variants), Errc::layout);
  auto gap = inst.group;
  gap.members[0].source_rect.width = 900;
  EXPECT_EQ(code_of(gap, inst.variants), Errc::layout);
  auto no_variant = inst.variants;
  no_variant.erase(std::remove_if(no_variant.begin(), no_variant.end(),
                                  [](const QualityVariant& v) { return v.col == 3 && v.row == 1; }),
                   no_variant.end());
  EXPECT_EQ(code_of(inst.group, no_variant), Errc::usage);
  auto same_rank = inst.variants;
  same_rank[1].quality_rank = 1;
  EXPECT_EQ(code_of(inst.group, same_rank), Errc::usage);
}

TEST(Strategy, CellOrderKeys) {
  const std::vector<double> overlaps{0.2, 0.5, 0.5, 0.0};
  EXPECT_EQ(cell_order(overlaps, std::vector<double>(4, 1.0)), (std::vector<std::size_t>{1, 2, 0, 3}));
  EXPECT_EQ(cell_order(overlaps, std::vector<double>{1, 1, 1, 9}), (std::vector<std::size_t>{1, 2, 0, 3}));
  EXPECT_EQ(cell_order(std::vector<double>(4, 0.0), std::vector<double>{0, 0, 0, 8}),
            (std::vector<std::size_t>{3, 0, 1, 2}));
}

TEST(Strategy, ViewportOverlapsSumToOne) {
  const auto inst = uniform_4x2();
  const auto grid = make_grid(inst.group, inst.variants);
  const auto overlaps = viewport_overlaps(grid, {0, 0, 0}, 90, 90);
  double sum = 0.0;
  for (double o : overlaps) sum += o;
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_EQ(overlaps[0], 0.0);
  EXPECT_EQ(overlaps[3], 0.0);
  EXPECT_NEAR(overlaps[1], 0.25, 1e-9);
  EXPECT_NEAR(overlaps[6], 0.25, 1e-9);
}

TEST(Strategy, BudgetExtremes) {
  const auto inst = uniform_4x2();
  const auto grid = make_grid(inst.group, inst.variants);
  EXPECT_EQ(minimum_budget(grid), 8'000'000u);
  const auto overlaps = viewport_overlaps(grid, {0, 0, 0}, 90, 90);
  EXPECT_EQ(ranks(select_tiles(grid, overlaps, 32'000'000)), std::vector<std::uint32_t>(8, 1));
  EXPECT_EQ(ranks(select_tiles(grid, overlaps, 8'000'000)), std::vector<std::uint32_t>(8, 2));
  try {
    select_tiles(grid, overlaps, 7'999'999);
    FAIL();
  } catch (const BudgetInfeasible& e) {
    EXPECT_EQ(e.required_bps(), 8'000'000u);
    EXPECT_EQ(e.code_name(), "BUDGET_INFEASIBLE");
  }
}

TEST(Strategy, TwoUpgradesGoToTheViewport) {
  const auto inst = uniform_4x2();
  const auto sel = select_tiles({0, 0, 0}, inst.group, inst.variants, kTwoUpgrades);
  EXPECT_EQ(ranks(sel), (std::vector<std::uint32_t>{2, 1, 1, 2, 2, 2, 2, 2}));
  EXPECT_EQ(total_bitrate(sel), kTwoUpgrades);
  const auto grid = make_grid(inst.group, inst.variants);
  const auto overlaps = viewport_overlaps(grid, {0, 0, 0}, 90, 90);
  const auto best = gen::exhaustive_best_rank(grid, overlaps, kTwoUpgrades);
  ASSERT_TRUE(best);
  EXPECT_NEAR(viewport_weighted_rank(sel, overlaps), *best, 1e-12);
  EXPECT_NEAR(*best, 1.5, 1e-9);
}

TEST(Strategy, GreedyAgainstExhaustiveIsPinned) {
  const auto study = gen::run_ratio_study(gen::kRatioSeed, gen::kRatioInstances);
  RecordProperty("min_ratio", std::to_string(study.min_ratio));
  RecordProperty("mean_ratio", std::to_string(study.mean_ratio));
  std::printf("greedy/exhaustive ratio: min %.12f mean %.12f\n", study.min_ratio, study.mean_ratio);
  EXPECT_LE(study.min_ratio, 1.0 + 1e-12);
  EXPECT_NEAR(study.min_ratio, gen::kPinnedMinRatio, 1e-9);
  EXPECT_NEAR(study.mean_ratio, gen::kPinnedMeanRatio, 1e-9);
}

TEST(Strategy, RandomInstancesKeepCoverageAndBudget) {
  Rng rng(71);
  for (int i = 0; i < 500; ++i) {
    const auto failure = gen::check_random_strategy_instance(rng);
    ASSERT_TRUE(failure.empty()) << "instance " << i << ": " << failure;
  }
}

TEST(Strategy, HeatmapWeights) {
  ErpRegionPayload two_by_one{2, 1, {1, 3}, ErpValueKind::heatmap};
  EXPECT_EQ(apply_heatmap_bias(two_by_one, 4, 2),
            (std::vector<double>{0.5, 0.5, 1.5, 1.5, 0.5, 0.5, 1.5, 1.5}));
  ErpRegionPayload zeros{1, 1, {0}, ErpValueKind::heatmap};
  EXPECT_EQ(apply_heatmap_bias(zeros, 4, 2), std::vector<double>(8, 1.0));
  try {
    apply_heatmap_bias({3, 1, {1, 1, 1}, ErpValueKind::heatmap}, 4, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::grid_mismatch);
  }
  try {
    apply_heatmap_bias({2, 1, {1, 1}, ErpValueKind::quality_rank}, 4, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::usage);
  }
}

TEST(Strategy, HeatmapBiasChangesTheOrder) {
  const auto inst = uniform_4x2();
  SelectOptions uniform;
  uniform.weights = apply_heatmap_bias({1, 1, {5}, ErpValueKind::heatmap}, 4, 2);
  const auto plain = select_tiles({0, 0, 0}, inst.group, inst.variants, kTwoUpgrades);
  EXPECT_EQ(select_tiles({0, 0, 0}, inst.group, inst.variants, kTwoUpgrades, uniform), plain);

  ErpRegionPayload hot{4, 2, std::vector<std::uint32_t>(8, 0), ErpValueKind::heatmap};
  hot.cell_values[4] = 10;  // col 0, row 1: outside the viewport
  SelectOptions biased;
  biased.weights = apply_heatmap_bias(hot, 4, 2);
  const auto sel = select_tiles({0, 0, 0}, inst.group, inst.variants, kTwoUpgrades, biased);
  EXPECT_LT(sel[4].quality_rank, plain[4].quality_rank);
}

TEST(Strategy, BindTilesPartitionsThePicture) {
  const auto inst = uniform_4x2();
  const auto sel = select_tiles({0, 0, 0}, inst.group, inst.variants, kTwoUpgrades);
  const auto tiles = bind_tiles(sel, inst.group);
  ASSERT_EQ(tiles.size(), 8u);
  std::uint64_t area = 0;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    area += tiles[i].dest_rect.area();
    for (std::size_t j = i + 1; j < tiles.size(); ++j) EXPECT_FALSE(geo::overlaps(tiles[i].dest_rect, tiles[j].dest_rect));
    const auto& member = *std::find_if(inst.group.members.begin(), inst.group.members.end(), [&](const TileMember& m) {
      return m.col == tiles[i].col && m.row == tiles[i].row;
    });
    EXPECT_EQ(tiles[i].dest_rect, member.source_rect);
    EXPECT_EQ(tiles[i].source_track_id, sel[tiles[i].row * 4 + tiles[i].col].track_id);
  }
  EXPECT_EQ(area, 3840u * 1920u);

  auto partial = sel;
  partial.pop_back();
  EXPECT_THROW(bind_tiles(partial, inst.group), Error);
  auto overlapping = inst.group;
  overlapping.members[1].source_rect.x = 900;
  EXPECT_THROW(bind_tiles(sel, overlapping), Error);
}

TEST(Sessions, StaticTraceRepeatsTheSelection) {
  const auto inst = uniform_4x2();
  const std::vector<TraceSample> trace{{0, {30, 10, 0}}, {5000, {30, 10, 0}}};
  const auto m = simulate_session(trace, inst.group, inst.variants, BudgetModel::constant(kTwoUpgrades), {});
  ASSERT_EQ(m.segments.size(), 6u);
  for (const auto& s : m.segments) {
    EXPECT_EQ(s.selection, m.segments[0].selection);
    EXPECT_EQ(s.bytes, kTwoUpgrades / 8);
    EXPECT_GE(s.coverage, 0.0);
    EXPECT_LE(s.coverage, 1.0);
  }
}

TEST(Sessions, AzimuthStepDipsForOneSegment) {
  const auto inst = uniform_4x2();
  const auto grid = make_grid(inst.group, inst.variants);
  const std::vector<TraceSample> trace{{0, {0, 0, 0}}, {2500, {-180, 0, 0}}, {5999, {-180, 0, 0}}};
  const auto m = simulate_session(trace, inst.group, inst.variants, BudgetModel::constant(kTwoUpgrades), {});
  ASSERT_EQ(m.segments.size(), 6u);

  const auto front = viewport_overlaps(grid, {0, 0, 0}, 90, 90);
  const auto back = viewport_overlaps(grid, {-180, 0, 0}, 90, 90);
  const auto front_sel = select_tiles(grid, front, kTwoUpgrades);
  const auto back_sel = select_tiles(grid, back, kTwoUpgrades);
  const double good = gen::weighted_rank_oracle(front_sel, front);
  const double stale = gen::weighted_rank_oracle(front_sel, back);
  EXPECT_NEAR(good, gen::weighted_rank_oracle(back_sel, back), 1e-12);
  EXPECT_GT(stale, good);
  for (std::size_t i : {0u, 1u, 3u, 4u, 5u}) EXPECT_NEAR(m.segments[i].weighted_mean_rank, good, 1e-12) << i;
  EXPECT_NEAR(m.segments[2].weighted_mean_rank, 0.5 * good + 0.5 * stale, 1e-12);
  EXPECT_EQ(m.segments[2].selection, front_sel);
  EXPECT_EQ(m.segments[3].selection, back_sel);
}

TEST(Sessions, UnlimitedBudgetCoversEverything) {
  const auto inst = uniform_4x2();
  const auto trace = gen::sweep_trace(200);
  const auto m = simulate_session(trace, inst.group, inst.variants,
                                  BudgetModel::constant(std::numeric_limits<std::uint64_t>::max() / 2), {});
  for (const auto& s : m.segments) {
    EXPECT_EQ(s.coverage, 1.0);
    EXPECT_EQ(s.weighted_mean_rank, 1.0);
  }
}

TEST(Sessions, SerialAndParallelAgree) {
  Rng rng(72);
  const auto inst = gen::random_strategy_instance(rng, 4, 2, 3);
  const auto trace = gen::sweep_trace(1000);
  BudgetModel budget{{{0, 12'000'000}, {10'000, 20'000'000}, {25'000, 9'000'000}}};
  SessionConfig config;
  config.segment_ms = 500;
  try {
    EXPECT_EQ(simulate_session(trace, inst.group, inst.variants, budget, config),
              simulate_session_serial(trace, inst.group, inst.variants, budget, config));
  } catch (const BudgetInfeasible&) {
    budget = BudgetModel::constant(100'000'000);
    EXPECT_EQ(simulate_session(trace, inst.group, inst.variants, budget, config),
              simulate_session_serial(trace, inst.group, inst.variants, budget, config));
  }
}

TEST(Sessions, RejectsBadTraces) {
  const auto inst = uniform_4x2();
  const auto budget = BudgetModel::constant(kTwoUpgrades);
  EXPECT_THROW(simulate_session({}, inst.group, inst.variants, budget, {}), Error);
  const std::vector<TraceSample> backwards{{10, {}}, {10, {}}};
  EXPECT_THROW(simulate_session(backwards, inst.group, inst.variants, budget, {}), Error);
  SessionConfig zero;
  zero.segment_ms = 0;
  const std::vector<TraceSample> one{{0, {}}};
  EXPECT_THROW(simulate_session(one, inst.group, inst.variants, budget, zero), Error);
  EXPECT_THROW(simulate_session(one, inst.group, inst.variants, BudgetModel::constant(1), {}), BudgetInfeasible);
}

TEST(Formats, CsvReadersAndWriters) {
  const auto trace = read_trace_csv("time_ms,azimuth,elevation,tilt\n0,10,5,0\n40,12.5,-3,1\n");
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_EQ(trace[1].time_ms, 40);
  EXPECT_EQ(trace[1].orientation.azimuth, 12.5);
  EXPECT_EQ(trace[1].orientation.elevation, -3);
  EXPECT_THROW(read_trace_csv("time,az\n0,1\n"), ParseError);
  EXPECT_THROW(read_trace_csv("time_ms,azimuth,elevation,tilt\n0,x,0,0\n"), ParseError);

  const auto bw = read_bandwidth_csv("time_ms,bps\n0,1000\n500,2000\n");
  EXPECT_EQ(bw.at(-5), 1000u);
  EXPECT_EQ(bw.at(499), 1000u);
  EXPECT_EQ(bw.at(500), 2000u);

  const auto inst = uniform_4x2();
  const std::vector<TraceSample> two{{0, {0, 0, 0}}, {1000, {0, 0, 0}}};
  const auto m = simulate_session(two, inst.group, inst.variants, BudgetModel::constant(kTwoUpgrades), {});
  const auto csv = metrics_to_csv(m);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "segment,start_ms,budget_bps,bitrate_bps,bytes,weighted_mean_rank,coverage");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  const auto j = to_json(m, true);
  ASSERT_EQ(j["segments"].size(), 2u);
  EXPECT_EQ(j["segments"][0]["selection"].size(), 8u);
  EXPECT_FALSE(to_json(m, false)["segments"][0].contains("selection"));
}

TEST(Formats, TilingJson) {
  const auto j = nlohmann::json::parse(R"({
    "tile_group": {"group_id": 1, "members": [
      {"track_id": 1, "grid_position": {"col": 0, "row": 0}, "source_rect": {"x": 0, "y": 0, "width": 100, "height": 100}},
      {"track_id": 2, "grid_position": {"col": 1, "row": 0}, "source_rect": {"x": 100, "y": 0, "width": 100, "height": 100}}]},
    "variants": [{"track_id": 11, "col": 0, "row": 0, "quality_rank": 1, "bitrate_bps": 5},
                 {"track_id": 12, "col": 1, "row": 0, "quality_rank": 1, "bitrate_bps": 6}]})");
  const auto t = tiling_from_json(j);
  ASSERT_EQ(t.group.members.size(), 2u);
  EXPECT_EQ(t.group.members[1].source_rect.x, 100u);
  EXPECT_EQ(t.variants[1].bitrate_bps, 6u);
  EXPECT_THROW(tiling_from_json(nlohmann::json::parse(R"({"variants": []})")), Error);
}

}  // namespace
