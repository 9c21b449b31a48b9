#include "omaf/strategy.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <numeric>
#include <tuple>

#include "omaf/error.hpp"
#include "omaf/validate.hpp"

namespace omaf::strategy {

namespace {

const QualityVariant& cheapest(const std::vector<QualityVariant>& cell) {
  // Variants are rank-ascending, so the first minimum is also the best-ranked
  // among equally cheap ones.
  return *std::min_element(cell.begin(), cell.end(), [](const QualityVariant& a, const QualityVariant& b) {
    return a.bitrate_bps < b.bitrate_bps;
  });
}

std::vector<double> uniform_if_empty(std::span<const double> weights, std::size_t cells) {
  if (weights.empty()) return std::vector<double>(cells, 1.0);
  if (weights.size() != cells) {
    throw Error(Errc::usage, "expected " + std::to_string(cells) + " cell weights, got " +
                                 std::to_string(weights.size()));
  }
  return {weights.begin(), weights.end()};
}

std::size_t orientation_index(std::span<const TraceSample> trace, std::int64_t t) {
  const auto it = std::upper_bound(trace.begin(), trace.end(), t,
                                   [](std::int64_t v, const TraceSample& s) { return v < s.time_ms; });
  return it == trace.begin() ? 0 : static_cast<std::size_t>(std::prev(it) - trace.begin());
}

void check_trace(std::span<const TraceSample> trace, const SessionConfig& config) {
  if (trace.empty()) throw Error(Errc::usage, "orientation trace is empty");
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].time_ms <= trace[i - 1].time_ms) {
      throw Error(Errc::usage, "trace times must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
  if (config.segment_ms <= 0) throw Error(Errc::usage, "segment length must be positive");
}

SegmentMetrics run_segment(std::size_t index, std::span<const TraceSample> trace, const TileGrid& grid,
                           const BudgetModel& budget, const SessionConfig& config) {
  const auto& opt = config.select;
  SegmentMetrics m;
  m.index = index;
  m.start_ms = trace.front().time_ms + static_cast<std::int64_t>(index) * config.segment_ms;
  const std::int64_t end_ms = m.start_ms + config.segment_ms;
  m.budget_bps = budget.at(m.start_ms);

  const auto weights = uniform_if_empty(opt.weights, grid.regions.size());
  std::size_t k = orientation_index(trace, m.start_ms);
  const auto start_overlaps = viewport_overlaps(grid, trace[k].orientation, opt.hfov, opt.vfov, opt.sampling);
  m.selection = select_tiles(grid, start_overlaps, m.budget_bps, weights);
  m.bytes = total_bitrate(m.selection) * static_cast<std::uint64_t>(config.segment_ms) / 8000;

  std::vector<SphereRegion> best_cells;
  for (std::size_t c = 0; c < m.selection.size(); ++c) {
    if (m.selection[c].quality_rank == grid.variants[c].front().quality_rank) best_cells.push_back(grid.regions[c]);
  }

  // Pieces of the segment with a constant orientation.
  std::int64_t t = m.start_ms;
  double rank_sum = 0.0;
  double coverage_sum = 0.0;
  while (t < end_ms) {
    const std::int64_t next = k + 1 < trace.size() ? std::min(end_ms, trace[k + 1].time_ms) : end_ms;
    const auto& o = trace[k].orientation;
    const auto overlaps = t == m.start_ms ? start_overlaps : viewport_overlaps(grid, o, opt.hfov, opt.vfov, opt.sampling);
    const double duration = static_cast<double>(next - t);
    rank_sum += duration * viewport_weighted_rank(m.selection, overlaps);
    coverage_sum += duration * geo::coverage_fraction(geo::viewport_region(o, opt.hfov, opt.vfov), best_cells,
                                                      opt.sampling);
    t = next;
    if (k + 1 < trace.size() && trace[k + 1].time_ms <= t) ++k;
  }
  m.weighted_mean_rank = rank_sum / static_cast<double>(config.segment_ms);
  m.coverage = std::clamp(coverage_sum / static_cast<double>(config.segment_ms), 0.0, 1.0);
  return m;
}

std::size_t segment_count(std::span<const TraceSample> trace, const SessionConfig& config) {
  return static_cast<std::size_t>((trace.back().time_ms - trace.front().time_ms) / config.segment_ms) + 1;
}

}  // namespace

TileGrid make_grid(const TileGroup& group, std::span<const QualityVariant> variants) {
  if (group.members.empty()) throw Error(Errc::layout, "tile group has no members");
  TileGrid grid;
  for (const auto& m : group.members) {
    grid.cols = std::max(grid.cols, m.col + 1);
    grid.rows = std::max(grid.rows, m.row + 1);
  }
  const std::size_t cells = std::size_t{grid.cols} * grid.rows;
  if (cells != group.members.size()) {
    throw Error(Errc::layout, "tile group members do not form a complete " + std::to_string(grid.cols) + "x" +
                                  std::to_string(grid.rows) + " grid");
  }
  std::vector<const TileMember*> by_cell(cells, nullptr);
  std::vector<Rect2D> rects;
  for (const auto& m : group.members) {
    auto& slot = by_cell[grid.cell(m.col, m.row)];
    if (slot) throw Error(Errc::layout, "two members share grid cell (" + std::to_string(m.col) + ", " +
                                            std::to_string(m.row) + ")");
    slot = &m;
    rects.push_back(m.source_rect);
  }
  if (const auto problem = check_tile_partition(rects); !problem.empty()) throw Error(Errc::layout, problem);

  std::uint32_t x0 = by_cell.front()->source_rect.x;
  std::uint32_t y0 = by_cell.front()->source_rect.y;
  std::uint64_t x1 = 0;
  std::uint64_t y1 = 0;
  for (const auto* m : by_cell) {
    x0 = std::min(x0, m->source_rect.x);
    y0 = std::min(y0, m->source_rect.y);
    x1 = std::max(x1, m->source_rect.right());
    y1 = std::max(y1, m->source_rect.bottom());
  }
  grid.bounds = {x0, y0, static_cast<std::uint32_t>(x1 - x0), static_cast<std::uint32_t>(y1 - y0)};
  const PictureDims dims{grid.bounds.width, grid.bounds.height};
  for (const auto* m : by_cell) {
    grid.members.push_back(*m);
    Rect2D local = m->source_rect;
    local.x -= x0;
    local.y -= y0;
    grid.regions.push_back(geo::erp_rect_region(local, dims));
  }

  grid.variants.assign(cells, {});
  for (const auto& v : variants) {
    if (v.col >= grid.cols || v.row >= grid.rows) {
      throw Error(Errc::usage, "variant of track " + std::to_string(v.track_id) + " lies outside the grid");
    }
    if (v.quality_rank == 0) throw Error(Errc::usage, "quality ranks must be positive");
    grid.variants[grid.cell(v.col, v.row)].push_back(v);
  }
  for (std::size_t c = 0; c < cells; ++c) {
    auto& cell = grid.variants[c];
    if (cell.empty()) {
      throw Error(Errc::usage, "grid cell (" + std::to_string(c % grid.cols) + ", " + std::to_string(c / grid.cols) +
                                   ") has no variant");
    }
    std::sort(cell.begin(), cell.end(),
              [](const QualityVariant& a, const QualityVariant& b) { return a.quality_rank < b.quality_rank; });
    for (std::size_t i = 1; i < cell.size(); ++i) {
      if (cell[i].quality_rank == cell[i - 1].quality_rank) {
        throw Error(Errc::usage, "duplicate quality rank " + std::to_string(cell[i].quality_rank) + " in one cell");
      }
    }
  }
  return grid;
}

std::vector<double> viewport_overlaps(const TileGrid& grid, const ViewingOrientation& orientation, double hfov,
                                      double vfov, geo::SamplingGrid sampling) {
  const auto viewport = geo::viewport_region(orientation, hfov, vfov);
  std::vector<double> out;
  out.reserve(grid.regions.size());
  for (const auto& r : grid.regions) out.push_back(geo::region_overlap_fraction(viewport, r, sampling));
  return out;
}

std::vector<std::size_t> cell_order(std::span<const double> overlaps, std::span<const double> weights) {
  std::vector<std::size_t> order(overlaps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ka = overlaps[a] * weights[a];
    const double kb = overlaps[b] * weights[b];
    if (ka != kb) return ka > kb;
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return overlaps[a] > overlaps[b];
  });
  return order;
}

std::uint64_t minimum_budget(const TileGrid& grid) {
  std::uint64_t sum = 0;
  for (const auto& cell : grid.variants) sum += cheapest(cell).bitrate_bps;
  return sum;
}

std::vector<QualityVariant> select_tiles(const TileGrid& grid, std::span<const double> overlaps,
                                         std::uint64_t budget_bps, std::span<const double> weights) {
  const std::size_t cells = grid.variants.size();
  if (overlaps.size() != cells) throw Error(Errc::usage, "one overlap value per cell is required");
  const auto w = uniform_if_empty(weights, cells);

  const std::uint64_t required = minimum_budget(grid);
  if (required > budget_bps) throw BudgetInfeasible(budget_bps, required);

  std::vector<QualityVariant> selection;
  selection.reserve(cells);
  for (const auto& cell : grid.variants) selection.push_back(cheapest(cell));
  std::uint64_t total = required;

  for (const std::size_t c : cell_order(overlaps, w)) {
    const auto& cell = grid.variants[c];
    const auto& base = selection[c];
    const auto& best = cell.front();
    if (total - base.bitrate_bps + best.bitrate_bps <= budget_bps) {
      total = total - base.bitrate_bps + best.bitrate_bps;
      selection[c] = best;
      continue;
    }
    const std::uint64_t room = budget_bps - (total - base.bitrate_bps);
    for (const auto& v : cell) {
      if (v.bitrate_bps <= room) {
        total = total - base.bitrate_bps + v.bitrate_bps;
        selection[c] = v;
        break;
      }
    }
    break;
  }
  return selection;
}

std::vector<QualityVariant> select_tiles(const ViewingOrientation& orientation, const TileGroup& group,
                                         std::span<const QualityVariant> variants, std::uint64_t budget_bps,
                                         const SelectOptions& options) {
  const auto grid = make_grid(group, variants);
  const auto overlaps = viewport_overlaps(grid, orientation, options.hfov, options.vfov, options.sampling);
  return select_tiles(grid, overlaps, budget_bps, options.weights);
}

std::uint64_t total_bitrate(std::span<const QualityVariant> selection) {
  std::uint64_t sum = 0;
  for (const auto& v : selection) sum += v.bitrate_bps;
  return sum;
}

double viewport_weighted_rank(std::span<const QualityVariant> selection, std::span<const double> overlaps) {
  double weighted = 0.0;
  double total = 0.0;
  double plain = 0.0;
  for (std::size_t c = 0; c < selection.size(); ++c) {
    weighted += overlaps[c] * selection[c].quality_rank;
    total += overlaps[c];
    plain += selection[c].quality_rank;
  }
  if (total <= 0.0) return selection.empty() ? 0.0 : plain / static_cast<double>(selection.size());
  return weighted / total;
}

std::vector<double> apply_heatmap_bias(const ErpRegionPayload& heatmap, std::uint32_t cols, std::uint32_t rows) {
  if (heatmap.value_kind != ErpValueKind::heatmap) {
    throw Error(Errc::usage, "only heatmap ERP-region payloads can bias tile selection");
  }
  if (heatmap.grid_cols == 0 || heatmap.grid_rows == 0 || cols % heatmap.grid_cols != 0 ||
      rows % heatmap.grid_rows != 0 ||
      heatmap.cell_values.size() != std::size_t{heatmap.grid_cols} * heatmap.grid_rows) {
    throw Error(Errc::grid_mismatch, "heatmap grid " + std::to_string(heatmap.grid_cols) + "x" +
                                         std::to_string(heatmap.grid_rows) + " does not divide tile grid " +
                                         std::to_string(cols) + "x" + std::to_string(rows));
  }
  const std::uint32_t bw = cols / heatmap.grid_cols;
  const std::uint32_t bh = rows / heatmap.grid_rows;
  std::vector<double> weights;
  weights.reserve(std::size_t{cols} * rows);
  double sum = 0.0;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      const double v = heatmap.cell_values[std::size_t{r / bh} * heatmap.grid_cols + c / bw];
      weights.push_back(v);
      sum += v;
    }
  }
  if (sum <= 0.0) return std::vector<double>(weights.size(), 1.0);
  const double mean = sum / static_cast<double>(weights.size());
  for (auto& w : weights) w /= mean;
  return weights;
}

std::vector<BoundTile> bind_tiles(std::span<const QualityVariant> selection, const TileGroup& group) {
  std::vector<Rect2D> rects;
  for (const auto& m : group.members) rects.push_back(m.source_rect);
  if (const auto problem = check_tile_partition(rects); !problem.empty()) throw Error(Errc::layout, problem);

  std::map<std::pair<std::uint32_t, std::uint32_t>, const QualityVariant*> chosen;
  for (const auto& v : selection) chosen[{v.row, v.col}] = &v;

  std::vector<const TileMember*> members;
  for (const auto& m : group.members) members.push_back(&m);
  std::sort(members.begin(), members.end(), [](const TileMember* a, const TileMember* b) {
    return std::tie(a->row, a->col) < std::tie(b->row, b->col);
  });

  std::vector<BoundTile> out;
  for (const auto* m : members) {
    const auto it = chosen.find({m->row, m->col});
    if (it == chosen.end()) {
      throw Error(Errc::layout, "selection has no variant for cell (" + std::to_string(m->col) + ", " +
                                    std::to_string(m->row) + ")");
    }
    out.push_back({m->col, m->row, it->second->track_id, m->source_rect, m->source_rect});
  }
  return out;
}

std::uint64_t BudgetModel::at(std::int64_t t_ms) const {
  if (steps.empty()) throw Error(Errc::usage, "budget model has no steps");
  std::uint64_t bps = steps.front().second;
  for (const auto& [time, value] : steps) {
    if (time > t_ms) break;
    bps = value;
  }
  return bps;
}

SessionMetrics simulate_session(std::span<const TraceSample> trace, const TileGroup& group,
                                std::span<const QualityVariant> variants, const BudgetModel& budget,
                                const SessionConfig& config) {
  check_trace(trace, config);
  const auto grid = make_grid(group, variants);
  const std::size_t n = segment_count(trace, config);

  SessionMetrics out;
  out.segments.resize(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out.segments[idx] = run_segment(idx, trace, grid, budget, config);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SessionMetrics simulate_session_serial(std::span<const TraceSample> trace, const TileGroup& group,
                                       std::span<const QualityVariant> variants, const BudgetModel& budget,
                                       const SessionConfig& config) {
  check_trace(trace, config);
  const auto grid = make_grid(group, variants);
  const std::size_t n = segment_count(trace, config);

  SessionMetrics out;
  for (std::size_t i = 0; i < n; ++i) out.segments.push_back(run_segment(i, trace, grid, budget, config));
  return out;
}

}  // namespace omaf::strategy
