#include "omaf/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace omaf {

namespace {

using namespace codes;

std::string idx(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

class Checker {
 public:
  explicit Checker(const Presentation& p) : p_(p) {}

  ValidationReport run() {
    collect_ids();
    for (std::size_t i = 0; i < p_.tracks.size(); ++i) check_track(i);
    for (std::size_t i = 0; i < p_.viewpoints.size(); ++i) check_viewpoint(i);
    for (std::size_t i = 0; i < p_.overlays.size(); ++i) check_overlay(i);
    for (std::size_t i = 0; i < p_.timed_metadata.size(); ++i) check_timed_metadata(i);
    for (std::size_t i = 0; i < p_.tile_groups.size(); ++i) check_tile_group(i);
    if (p_.viewing_space) check_viewing_space();
    return std::move(report_);
  }

 private:
  void error(const char* code, std::string path, std::string message) {
    report_.issues.push_back({Severity::error, code, std::move(message), std::move(path)});
  }
  void warning(const char* code, std::string path, std::string message) {
    report_.issues.push_back({Severity::warning, code, std::move(message), std::move(path)});
  }

  void collect_ids() {
    for (const auto& t : p_.tracks) ++track_id_count_[t.track_id];
    for (const auto& t : p_.timed_metadata) ++track_id_count_[t.track_id];
    for (const auto& v : p_.viewpoints) ++viewpoint_id_count_[v.viewpoint_id];
    for (const auto& o : p_.overlays) ++overlay_id_count_[o.overlay_id];
    for (const auto& g : p_.tile_groups) ++group_id_count_[g.group_id];
    for (const auto& t : p_.timed_metadata) {
      for (const auto& s : t.samples) {
        if (t.kind == MetadataKind::dynamic_viewpoint) {
          if (const auto* d = std::get_if<DynamicViewpointSample>(&s.payload)) {
            dynamic_viewpoint_refs_.insert(d->viewpoint_id);
          }
        } else if (t.kind == MetadataKind::overlay_controls) {
          if (const auto* c = std::get_if<OverlayControlSample>(&s.payload)) {
            overlay_control_refs_.insert(c->overlay_id);
          }
        }
      }
    }
  }

  void check_track_id(std::uint32_t id, const std::string& path) {
    if (id == 0) error(kIdNotPositive, path, "track_id must be positive");
    if (track_id_count_[id] > 1) {
      error(kDuplicateId, path, "track_id " + std::to_string(id) + " is used more than once");
    }
  }

  void check_region(const SphereRegion& r, const std::string& path) {
    if (!geo::is_valid(r)) {
      error(kRegionRange, path, "sphere region center or ranges out of range");
    }
  }

  void check_orientation(const ViewingOrientation& o, const std::string& path) {
    if (!geo::is_normalized(o)) {
      error(kOrientationRange, path, "orientation angles out of range");
    }
  }

  void check_gps(const GpsPosition& g, const std::string& path) {
    if (!(g.latitude >= -90.0 && g.latitude <= 90.0 && g.longitude >= -180.0 &&
          g.longitude < 180.0) ||
        (g.altitude && !std::isfinite(*g.altitude))) {
      error(kGpsRange, path, "GPS latitude/longitude out of range");
    }
  }

  void check_rect(const Rect2D& r, const std::optional<PictureDims>& host, const std::string& path) {
    if (r.width == 0 || r.height == 0) {
      error(kRectInvalid, path, "rectangle must have positive width and height");
    } else if (host && geo::is_valid(*host) && !geo::fits_within(r, *host)) {
      error(kRectOutOfBounds, path, "rectangle does not fit its host picture");
    }
  }

  void check_track(std::size_t i) {
    const auto& t = p_.tracks[i];
    const std::string base = idx("tracks", i);
    check_track_id(t.track_id, base + ".track_id");

    if (codec_has_levels(t.codec) != t.level.has_value()) {
      error(kLevelPresence, base + ".level",
            t.level ? "codec " + std::string(to_string(t.codec)) + " has no levels"
                    : "codec " + std::string(to_string(t.codec)) + " requires a level");
    }
    const bool visual = t.media_kind == MediaKind::video || t.media_kind == MediaKind::image;
    if (visual != t.projection.has_value()) {
      error(kProjectionPresence, base + ".projection",
            visual ? "video and image tracks require a projection"
                   : "projection is only allowed on video and image tracks");
    }
    if (t.dims) {
      if (!geo::is_valid(*t.dims)) {
        error(kDimsInvalid, base + ".dims", "picture dimensions must be positive");
      } else if (t.projection == Projection::ERP &&
                 std::uint64_t{t.dims->width} != 2 * std::uint64_t{t.dims->height}) {
        warning(kErpAspect, base + ".dims", "ERP picture width is not twice its height");
      }
    }
    if (t.coverage) {
      if (t.projection != Projection::ERP && t.projection != Projection::CMP) {
        error(kCoverageProjection, base + ".coverage", "coverage requires ERP or CMP projection");
      }
      check_region(*t.coverage, base + ".coverage");
    }
  }

  void check_viewpoint(std::size_t i) {
    const auto& v = p_.viewpoints[i];
    const std::string base = idx("viewpoints", i);
    if (v.viewpoint_id.empty()) error(kIdEmpty, base + ".viewpoint_id", "viewpoint_id is empty");
    if (viewpoint_id_count_[v.viewpoint_id] > 1) {
      error(kDuplicateId, base + ".viewpoint_id",
            "viewpoint_id '" + v.viewpoint_id + "' is used more than once");
    }
    if (v.gps) check_gps(*v.gps, base + ".gps");
    check_orientation({v.orientation.yaw, v.orientation.pitch, v.orientation.roll},
                      base + ".orientation");
    if (v.north_offset && !(*v.north_offset >= -180.0 && *v.north_offset < 180.0)) {
      error(kOrientationRange, base + ".north_offset", "north_offset out of [-180, 180)");
    }
    for (std::size_t k = 0; k < v.track_ids.size(); ++k) {
      if (!find_track(p_, v.track_ids[k])) {
        error(kDanglingRef, idx(base + ".track_ids", k),
              "track " + std::to_string(v.track_ids[k]) + " does not exist");
      }
    }

    std::size_t defaults = 0;
    for (std::size_t k = 0; k < v.switch_rules.size(); ++k) {
      const auto& rule = v.switch_rules[k];
      const std::string rpath = idx(base + ".switch_rules", k);
      if (!find_viewpoint(p_, rule.target_viewpoint_id)) {
        error(kDanglingRef, rpath + ".target_viewpoint_id",
              "target viewpoint '" + rule.target_viewpoint_id + "' does not exist");
      }
      if (rule.activation_region) check_region(*rule.activation_region, rpath + ".activation_region");
      if ((rule.timeline_mode == TimelineMode::offset) != rule.offset_ms.has_value()) {
        error(kOffsetMode, rpath + ".offset_ms", "offset_ms is required iff timeline_mode is offset");
      }
      if (rule.offset_ms && *rule.offset_ms < 0) {
        error(kOffsetMode, rpath + ".offset_ms", "offset_ms must not be negative");
      }
      if (rule.selection_window_ms && *rule.selection_window_ms == 0) {
        error(kSelectionWindow, rpath + ".selection_window_ms", "selection window must be positive");
      }
      if (rule.is_default) ++defaults;
    }
    if (defaults > 1) {
      error(kMultipleDefaultRules, base + ".switch_rules", "more than one default switch rule");
    }
    if (v.loop && !(v.loop->loop_start_ms >= 0 && v.loop->loop_start_ms < v.loop->loop_end_ms)) {
      error(kLoopRange, base + ".loop", "loop requires 0 <= loop_start_ms < loop_end_ms");
    }
    if (v.dynamic && !dynamic_viewpoint_refs_.contains(v.viewpoint_id)) {
      error(kDynamicNoTrack, base + ".dynamic",
            "dynamic viewpoint '" + v.viewpoint_id + "' has no dynamic_viewpoint metadata track");
    }
  }

  // ref_id must name a track (or recommended-viewport metadata track) of the
  // kind the source type implies; the region is checked against its dims.
  void check_overlay_source(const OverlaySource& s, const std::string& base) {
    const bool external = s.kind == OverlaySourceKind::external;
    if (external == s.ref_id.has_value()) {
      error(kSourceRef, base + ".ref_id",
            external ? "external sources have no ref_id" : "source requires a ref_id");
    }
    const bool region_kind = s.kind == OverlaySourceKind::region_of_track ||
                             s.kind == OverlaySourceKind::region_of_image;
    if (region_kind != s.region.has_value()) {
      error(kSourceRegion, base + ".region",
            region_kind ? "region source requires a region" : "region given for a non-region source");
    }
    if (!s.ref_id) return;

    std::optional<PictureDims> host;
    bool resolved = false;
    switch (s.kind) {
      case OverlaySourceKind::video_track:
      case OverlaySourceKind::region_of_track:
      case OverlaySourceKind::image_item:
      case OverlaySourceKind::region_of_image: {
        const bool wants_video = s.kind == OverlaySourceKind::video_track ||
                                 s.kind == OverlaySourceKind::region_of_track;
        const auto* t = find_track(p_, *s.ref_id);
        if (t && t->media_kind == (wants_video ? MediaKind::video : MediaKind::image)) {
          resolved = true;
          host = t->dims;
        }
        break;
      }
      case OverlaySourceKind::recommended_viewport: {
        const auto* t = find_timed_metadata(p_, *s.ref_id);
        resolved = t && t->kind == MetadataKind::recommended_viewport;
        break;
      }
      case OverlaySourceKind::external:
        break;
    }
    if (!resolved) {
      error(kDanglingRef, base + ".ref_id",
            "overlay source " + std::to_string(*s.ref_id) + " does not resolve to a " +
                std::string(to_string(s.kind)) + " source");
    }
    if (s.region) check_rect(*s.region, host, base + ".region");
  }

  void check_rendering(const OverlayRendering& r, const std::string& base) {
    const bool want_vp = r.kind == OverlayRenderingKind::viewport_relative;
    const bool want_sphere = r.kind == OverlayRenderingKind::sphere_relative_omni;
    const bool want_plane = r.kind == OverlayRenderingKind::sphere_relative_2d;
    if (want_vp != r.viewport_rect.has_value() || want_sphere != r.sphere_position.has_value() ||
        want_plane != r.plane_position.has_value()) {
      error(kRenderingFields, base,
            "rendering fields do not match kind " + std::string(to_string(r.kind)));
    }
    if (r.viewport_rect) {
      const auto& n = *r.viewport_rect;
      const bool ok = n.x >= 0.0 && n.y >= 0.0 && n.width > 0.0 && n.height > 0.0 &&
                      n.x + n.width <= 1.0 && n.y + n.height <= 1.0;
      if (!ok) error(kNormalizedRect, base + ".viewport_rect", "viewport_rect must lie within [0, 1]");
    }
    if (r.sphere_position) check_region(*r.sphere_position, base + ".sphere_position");
    if (r.plane_position) {
      const auto& pl = *r.plane_position;
      check_orientation(pl.center, base + ".plane_position.center");
      if (!(pl.distance > 0.0 && pl.distance <= 1.0)) {
        error(kPlaneDistance, base + ".plane_position.distance", "distance must be in (0, 1]");
      }
      if (!(pl.width > 0.0 && pl.height > 0.0 && std::isfinite(pl.width) &&
            std::isfinite(pl.height))) {
        error(kPlaneSize, base + ".plane_position", "plane width and height must be positive");
      }
    }
  }

  void check_overlay(std::size_t i) {
    const auto& o = p_.overlays[i];
    const std::string base = idx("overlays", i);
    if (o.overlay_id == 0) error(kIdNotPositive, base + ".overlay_id", "overlay_id must be positive");
    if (overlay_id_count_[o.overlay_id] > 1) {
      error(kDuplicateId, base + ".overlay_id",
            "overlay_id " + std::to_string(o.overlay_id) + " is used more than once");
    }
    check_overlay_source(o.source, base + ".source");
    check_rendering(o.rendering, base + ".rendering");
    if (!(o.properties.opacity >= 0.0 && o.properties.opacity <= 1.0)) {
      error(kOpacityRange, base + ".properties.opacity", "opacity must be in [0, 1]");
    }
    if (o.interaction.toggle_region) {
      if (!o.interaction.allowed_controls.contains(OverlayControl::switch_on_off)) {
        error(kToggleRequiresSwitch, base + ".interaction.toggle_region",
              "toggle_region requires the switch_on_off control");
      }
      check_region(*o.interaction.toggle_region, base + ".interaction.toggle_region");
    }
    if (o.controls_timing == ControlsTiming::timed && !overlay_control_refs_.contains(o.overlay_id)) {
      error(kTimedNoTrack, base + ".controls_timing",
            "timed overlay controls require an overlay_controls metadata track");
    }
  }

  void check_payload(const TimedPayload& payload, const std::string& path) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ViewingOrientation>) {
            check_orientation(v, path);
          } else if constexpr (std::is_same_v<T, SphereRegion>) {
            check_region(v, path);
          } else if constexpr (std::is_same_v<T, RwqrPayload>) {
            if (v.entries.empty()) error(kRwqrEmpty, path, "RWQR payload has no entries");
            for (std::size_t k = 0; k < v.entries.size(); ++k) {
              const auto epath = idx(path + ".entries", k);
              if (v.entries[k].quality_rank == 0) {
                error(kRwqrRank, epath + ".quality_rank", "quality_rank must be positive");
              }
              if (const auto* r = std::get_if<SphereRegion>(&v.entries[k].region)) {
                check_region(*r, epath + ".region");
              } else {
                check_rect(std::get<Rect2D>(v.entries[k].region), std::nullopt, epath + ".region");
              }
            }
          } else if constexpr (std::is_same_v<T, ErpRegionPayload>) {
            if (v.grid_cols == 0 || v.grid_rows == 0 ||
                v.cell_values.size() != std::uint64_t{v.grid_cols} * v.grid_rows) {
              error(kErpGrid, path, "ERP grid must be positive and hold cols x rows values");
            }
          } else if constexpr (std::is_same_v<T, DynamicViewpointSample>) {
            if (!find_viewpoint(p_, v.viewpoint_id)) {
              error(kDanglingRef, path + ".viewpoint_id",
                    "viewpoint '" + v.viewpoint_id + "' does not exist");
            }
            if (v.gps) check_gps(*v.gps, path + ".gps");
          } else if constexpr (std::is_same_v<T, OverlayControlSample>) {
            if (!find_overlay(p_, v.overlay_id)) {
              error(kDanglingRef, path + ".overlay_id",
                    "overlay " + std::to_string(v.overlay_id) + " does not exist");
            }
            if (v.opacity && !(*v.opacity >= 0.0 && *v.opacity <= 1.0)) {
              error(kOpacityRange, path + ".opacity", "opacity must be in [0, 1]");
            }
          }
        },
        payload);
  }

  void check_timed_metadata(std::size_t i) {
    const auto& t = p_.timed_metadata[i];
    const std::string base = idx("timed_metadata", i);
    check_track_id(t.track_id, base + ".track_id");
    for (std::size_t k = 0; k < t.samples.size(); ++k) {
      const auto& s = t.samples[k];
      const std::string spath = idx(base + ".samples", k);
      if (k > 0 && s.time_ms <= t.samples[k - 1].time_ms) {
        error(kSampleOrder, spath + ".time_ms", "sample times must be strictly increasing");
      }
      if (payload_kind(s.payload) != t.kind) {
        error(kPayloadKind, spath + ".payload",
              "payload does not match track kind " + std::string(to_string(t.kind)));
        continue;
      }
      check_payload(s.payload, spath + ".payload");
    }
  }

  void check_tile_group(std::size_t i) {
    const auto& g = p_.tile_groups[i];
    const std::string base = idx("tile_groups", i);
    if (group_id_count_[g.group_id] > 1) {
      error(kDuplicateId, base + ".group_id",
            "group_id " + std::to_string(g.group_id) + " is used more than once");
    }
    if (g.members.empty()) {
      error(kTileLayout, base + ".members", "tile group has no members");
      return;
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> cells;
    std::vector<Rect2D> rects;
    bool rects_ok = true;
    for (std::size_t k = 0; k < g.members.size(); ++k) {
      const auto& m = g.members[k];
      const std::string mpath = idx(base + ".members", k);
      const auto* t = find_track(p_, m.track_id);
      if (!t || t->media_kind != MediaKind::video) {
        error(kDanglingRef, mpath + ".track_id",
              "video track " + std::to_string(m.track_id) + " does not exist");
      }
      if (!cells.insert({m.col, m.row}).second) {
        error(kTileLayout, mpath + ".grid_position", "grid position used more than once");
      }
      if (m.source_rect.width == 0 || m.source_rect.height == 0) {
        error(kRectInvalid, mpath + ".source_rect", "rectangle must have positive width and height");
        rects_ok = false;
      }
      rects.push_back(m.source_rect);
    }
    if (rects_ok) {
      if (auto problem = check_tile_partition(rects); !problem.empty()) {
        error(kTileLayout, base + ".members", problem);
      }
    }
  }

  void check_viewing_space() {
    const auto& vs = *p_.viewing_space;
    const std::size_t want = vs.shape == ViewingSpaceShape::sphere ? 1 : 3;
    const bool positive = std::all_of(vs.extent_mm.begin(), vs.extent_mm.end(),
                                      [](std::uint32_t e) { return e > 0; });
    if (vs.extent_mm.size() != want || !positive) {
      error(kViewingSpace, "viewing_space.extent_mm",
            "viewing space needs " + std::to_string(want) + " positive extent value(s)");
    }
  }

  const Presentation& p_;
  ValidationReport report_;
  std::map<std::uint32_t, int> track_id_count_;
  std::map<std::string, int> viewpoint_id_count_;
  std::map<std::uint32_t, int> overlay_id_count_;
  std::map<std::uint32_t, int> group_id_count_;
  std::set<std::string> dynamic_viewpoint_refs_;
  std::set<std::uint32_t> overlay_control_refs_;
};

std::string format_report(const ValidationReport& report) {
  std::string out;
  for (const auto& issue : report.issues) {
    if (issue.severity != Severity::error) continue;
    out += "\n  " + issue.code + " at " + issue.path + ": " + issue.message;
  }
  return out;
}

}  // namespace

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const Issue& i) {
    return i.severity == Severity::error;
  }));
}

std::size_t ValidationReport::warning_count() const { return issues.size() - error_count(); }

ValidationReport validate_presentation(const Presentation& p) { return Checker(p).run(); }

ValidationFailed::ValidationFailed(ValidationReport report)
    : Error(Errc::validation, "presentation failed validation:" + format_report(report)),
      report_(std::move(report)) {}

void require_valid(const Presentation& p) {
  auto report = validate_presentation(p);
  if (!report.ok()) throw ValidationFailed(std::move(report));
}

std::string check_tile_partition(const std::vector<Rect2D>& rects) {
  if (rects.empty()) return "no rectangles";
  std::uint64_t min_x = rects[0].x, min_y = rects[0].y, max_x = 0, max_y = 0;
  std::uint64_t area = 0;
  for (const auto& r : rects) {
    min_x = std::min<std::uint64_t>(min_x, r.x);
    min_y = std::min<std::uint64_t>(min_y, r.y);
    max_x = std::max(max_x, r.right());
    max_y = std::max(max_y, r.bottom());
    area += r.area();
  }
  for (std::size_t a = 0; a < rects.size(); ++a) {
    for (std::size_t b = a + 1; b < rects.size(); ++b) {
      if (geo::overlaps(rects[a], rects[b])) {
        return "rectangles " + std::to_string(a) + " and " + std::to_string(b) + " overlap";
      }
    }
  }
  if (area != (max_x - min_x) * (max_y - min_y)) return "rectangles leave a gap in their bounding box";
  return {};
}

}  // namespace omaf
