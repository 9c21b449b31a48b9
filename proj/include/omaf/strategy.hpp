#pragma once

// Viewport-dependent tile streaming simulator over ERP tile grids.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "omaf/geometry.hpp"
#include "omaf/model.hpp"

namespace omaf::strategy {

struct QualityVariant {
  std::uint32_t track_id = 0;
  std::uint32_t col = 0;
  std::uint32_t row = 0;
  std::uint32_t quality_rank = 1;  // lower is better
  std::uint64_t bitrate_bps = 0;

  friend bool operator==(const QualityVariant&, const QualityVariant&) = default;
};

// Resolved grid: cells in row-major order with their sphere regions.
struct TileGrid {
  std::uint32_t cols = 0;
  std::uint32_t rows = 0;
  Rect2D bounds;
  std::vector<TileMember> members;            // row-major
  std::vector<SphereRegion> regions;          // row-major
  std::vector<std::vector<QualityVariant>> variants;  // row-major, rank ascending

  std::size_t cell(std::uint32_t col, std::uint32_t row) const { return std::size_t{row} * cols + col; }
};

// Throws Error(Errc::layout) unless the members form a complete cols x rows
// grid partitioning its bounding box, and Error(Errc::usage) unless every
// cell has at least one variant with distinct positive ranks.
TileGrid make_grid(const TileGroup& group, std::span<const QualityVariant> variants);

struct SelectOptions {
  double hfov = 90.0;
  double vfov = 90.0;
  geo::SamplingGrid sampling{};
  std::vector<double> weights;  // per cell, row-major; empty = uniform
};

// Fraction of the viewport that falls in each cell, row-major.
std::vector<double> viewport_overlaps(const TileGrid& grid, const ViewingOrientation& orientation,
                                      double hfov, double vfov, geo::SamplingGrid sampling = {});

// Cell visiting order: overlap * weight descending, then weight, then
// overlap, then row-major position.
std::vector<std::size_t> cell_order(std::span<const double> overlaps, std::span<const double> weights);

// Greedy selection, one variant per cell in row-major order. Every cell
// starts at its cheapest variant; cells are then visited in cell_order and
// raised to their best rank while the total stays within budget. The first
// cell that cannot afford its best rank takes the best variant the remainder
// allows and the walk stops there.
// Throws BudgetInfeasible when the cheapest full selection exceeds budget.
std::vector<QualityVariant> select_tiles(const TileGrid& grid, std::span<const double> overlaps,
                                         std::uint64_t budget_bps, std::span<const double> weights = {});

std::vector<QualityVariant> select_tiles(const ViewingOrientation& orientation, const TileGroup& group,
                                         std::span<const QualityVariant> variants, std::uint64_t budget_bps,
                                         const SelectOptions& options = {});

std::uint64_t total_bitrate(std::span<const QualityVariant> selection);

// Smallest budget select_tiles accepts.
std::uint64_t minimum_budget(const TileGrid& grid);

// Overlap-weighted mean rank of a selection; lower is better.
double viewport_weighted_rank(std::span<const QualityVariant> selection, std::span<const double> overlaps);

// Per-cell weights from an ERP-region heatmap whose grid divides the tile
// grid evenly; normalized to mean 1 (all-zero maps become uniform).
// Throws Error(Errc::grid_mismatch) otherwise, Error(Errc::usage) for
// non-heatmap payloads.
std::vector<double> apply_heatmap_bias(const ErpRegionPayload& heatmap, std::uint32_t cols, std::uint32_t rows);

struct BoundTile {
  std::uint32_t col = 0;
  std::uint32_t row = 0;
  std::uint32_t source_track_id = 0;
  Rect2D source_rect;
  Rect2D dest_rect;

  friend bool operator==(const BoundTile&, const BoundTile&) = default;
};

// Extractor-style binding: each cell keeps its position in the merged
// picture and reads from the selected track. Throws Error(Errc::layout) for
// overlapping or gapped layouts and for selections that miss a cell.
std::vector<BoundTile> bind_tiles(std::span<const QualityVariant> selection, const TileGroup& group);

// ---- sessions --------------------------------------------------------------

struct TraceSample {
  std::int64_t time_ms = 0;
  ViewingOrientation orientation;

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

// Piecewise-constant bandwidth: the last step at or before t applies; times
// before the first step use the first step.
struct BudgetModel {
  std::vector<std::pair<std::int64_t, std::uint64_t>> steps;  // (time_ms, bps), ascending

  static BudgetModel constant(std::uint64_t bps) { return {{{0, bps}}}; }
  std::uint64_t at(std::int64_t t_ms) const;
};

struct SessionConfig {
  std::int64_t segment_ms = 1000;
  SelectOptions select;
};

struct SegmentMetrics {
  std::size_t index = 0;
  std::int64_t start_ms = 0;
  std::uint64_t budget_bps = 0;
  std::vector<QualityVariant> selection;  // row-major
  std::uint64_t bytes = 0;
  // Time-weighted over the orientations in effect during the segment.
  double weighted_mean_rank = 0.0;
  double coverage = 0.0;  // viewport fraction inside best-rank cells

  friend bool operator==(const SegmentMetrics&, const SegmentMetrics&) = default;
};

struct SessionMetrics {
  std::vector<SegmentMetrics> segments;

  friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

// floor((t_last - t_first) / segment_ms) + 1 segments. The orientation at
// each segment start drives the selection. Throws Error(Errc::usage) for an
// empty or non-increasing trace or a non-positive segment length.
SessionMetrics simulate_session(std::span<const TraceSample> trace, const TileGroup& group,
                                std::span<const QualityVariant> variants, const BudgetModel& budget,
                                const SessionConfig& config);
SessionMetrics simulate_session_serial(std::span<const TraceSample> trace, const TileGroup& group,
                                       std::span<const QualityVariant> variants, const BudgetModel& budget,
                                       const SessionConfig& config);

// ---- file formats ----------------------------------------------------------

// CSV with header time_ms,azimuth,elevation,tilt.
std::vector<TraceSample> read_trace_csv(std::string_view text);
// CSV with header time_ms,bps.
BudgetModel read_bandwidth_csv(std::string_view text);

// {"tile_group": {...}, "variants": [{track_id, col, row, quality_rank, bitrate_bps}]}
struct Tiling {
  TileGroup group;
  std::vector<QualityVariant> variants;
};
Tiling tiling_from_json(const nlohmann::json& j);

std::string metrics_to_csv(const SessionMetrics& m);
nlohmann::json to_json(const SessionMetrics& m, bool include_selections);
nlohmann::json to_json(std::span<const QualityVariant> selection);

}  // namespace omaf::strategy
