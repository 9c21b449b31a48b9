#include "gen.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace omaf::gen {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

ViewingOrientation random_orientation(Rng& rng, double max_abs_elevation) {
  return {uniform(rng, -180.0, 180.0), uniform(rng, -max_abs_elevation, max_abs_elevation),
          uniform(rng, -180.0, 180.0)};
}

SphereRegion random_region(Rng& rng) {
  SphereRegion r;
  r.center = random_orientation(rng);
  r.azimuth_range = uniform(rng, 1.0, 360.0);
  r.elevation_range = uniform(rng, 1.0, 180.0);
  return r;
}

GpsPosition random_gps(Rng& rng) {
  GpsPosition g{uniform(rng, -90.0, 90.0), uniform(rng, -180.0, 180.0), std::nullopt};
  if (coin(rng)) g.altitude = uniform(rng, -100.0, 5000.0);
  return g;
}

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(v.size()) - 1))];
}

Level random_level(Rng& rng) {
  return {static_cast<std::uint8_t>(uniform_int(rng, 3, 6)), static_cast<std::uint8_t>(uniform_int(rng, 0, 2))};
}

Rect2D random_rect_within(Rng& rng, std::uint32_t w, std::uint32_t h) {
  Rect2D r;
  r.width = static_cast<std::uint32_t>(uniform_int(rng, 1, static_cast<int>(w)));
  r.height = static_cast<std::uint32_t>(uniform_int(rng, 1, static_cast<int>(h)));
  r.x = static_cast<std::uint32_t>(uniform_int(rng, 0, static_cast<int>(w - r.width)));
  r.y = static_cast<std::uint32_t>(uniform_int(rng, 0, static_cast<int>(h - r.height)));
  return r;
}

std::string random_label(Rng& rng) {
  static const std::vector<std::string> words = {"stage", "lobby", "north", "balcony", "pit lane", "éclair"};
  return pick(rng, words) + " " + std::to_string(uniform_int(rng, 0, 99));
}

TrackDescriptor random_track(Rng& rng, std::uint32_t id) {
  TrackDescriptor t;
  t.track_id = id;
  const int kind = uniform_int(rng, 0, 9);
  if (kind <= 4) {
    t.media_kind = MediaKind::video;
    t.codec = pick(rng, std::vector{Codec::HEVC_Main10, Codec::AVC_ProgressiveHigh, Codec::AVC_High});
  } else if (kind <= 6) {
    t.media_kind = MediaKind::audio;
    t.codec = pick(rng, std::vector{Codec::MPEGH_LC, Codec::AAC_HEv2});
    if (coin(rng)) t.sample_rate_hz = pick(rng, std::vector<std::uint32_t>{44100, 48000, 96000});
  } else if (kind == 7) {
    t.media_kind = MediaKind::image;
    t.codec = pick(rng, std::vector{Codec::JPEG, Codec::HEVC_Main10});
  } else if (kind == 8) {
    t.media_kind = MediaKind::timed_text;
    t.codec = pick(rng, std::vector{Codec::IMSC1_Text, Codec::IMSC1_Image, Codec::WebVTT});
  } else {
    t.media_kind = MediaKind::timed_metadata;
    t.codec = Codec::metadata;
  }
  if (codec_has_levels(t.codec)) t.level = random_level(rng);
  if (t.media_kind == MediaKind::video || t.media_kind == MediaKind::image) {
    t.projection = pick(rng, std::vector{Projection::ERP, Projection::ERP, Projection::CMP, Projection::fisheye,
                                         Projection::mesh, Projection::none});
    t.stereo = coin(rng, 0.3);
    if (coin(rng, 0.8)) {
      const auto h = static_cast<std::uint32_t>(uniform_int(rng, 1, 40) * 64);
      t.dims = PictureDims{*t.projection == Projection::ERP ? 2 * h : static_cast<std::uint32_t>(uniform_int(rng, 1, 40) * 64), h};
    }
    if ((*t.projection == Projection::ERP || *t.projection == Projection::CMP) && coin(rng, 0.4)) {
      t.coverage = random_region(rng);
    }
  }
  return t;
}

TimedPayload random_payload(Rng& rng, MetadataKind kind, const std::vector<std::string>& viewpoint_ids,
                            const std::vector<std::uint32_t>& overlay_ids) {
  switch (kind) {
    case MetadataKind::initial_viewing_orientation:
      return random_orientation(rng);
    case MetadataKind::recommended_viewport:
      return random_region(rng);
    case MetadataKind::rwqr: {
      RwqrPayload q;
      const int n = uniform_int(rng, 1, 3);
      for (int i = 0; i < n; ++i) {
        RwqrEntry e;
        if (coin(rng)) {
          e.region = random_region(rng);
        } else {
          e.region = random_rect_within(rng, 4096, 2048);
        }
        e.quality_rank = static_cast<std::uint32_t>(uniform_int(rng, 1, 10));
        q.entries.push_back(e);
      }
      return q;
    }
    case MetadataKind::erp_region: {
      ErpRegionPayload e;
      e.grid_cols = static_cast<std::uint32_t>(uniform_int(rng, 1, 4));
      e.grid_rows = static_cast<std::uint32_t>(uniform_int(rng, 1, 3));
      for (std::uint32_t i = 0; i < e.grid_cols * e.grid_rows; ++i) {
        e.cell_values.push_back(static_cast<std::uint32_t>(uniform_int(rng, 0, 100)));
      }
      e.value_kind = pick(rng, std::vector{ErpValueKind::quality_rank, ErpValueKind::priority, ErpValueKind::heatmap});
      return e;
    }
    case MetadataKind::dynamic_viewpoint: {
      DynamicViewpointSample d;
      d.viewpoint_id = pick(rng, viewpoint_ids);
      d.position_xyz = {uniform_int(rng, -50000, 50000), uniform_int(rng, -50000, 50000), uniform_int(rng, -5000, 5000)};
      if (coin(rng)) d.gps = random_gps(rng);
      return d;
    }
    case MetadataKind::overlay_controls: {
      OverlayControlSample c;
      c.overlay_id = pick(rng, overlay_ids);
      c.active = coin(rng);
      if (coin(rng)) c.opacity = uniform(rng, 0.0, 1.0);
      return c;
    }
  }
  return ViewingOrientation{};
}

}  // namespace

Presentation random_presentation(Rng& rng, const GenOptions& options) {
  Presentation p;
  for (const char* b : {"omaf", "xvpt", "xovl", "isom"}) {
    if (coin(rng, 0.4)) p.brands.insert(b);
  }

  std::uint32_t next_track = static_cast<std::uint32_t>(uniform_int(rng, 1, 5));
  const int n_tracks = uniform_int(rng, 0, options.max_tracks);
  for (int i = 0; i < n_tracks; ++i) {
    p.tracks.push_back(random_track(rng, next_track));
    next_track += static_cast<std::uint32_t>(uniform_int(rng, 1, 3));
  }

  if (options.tile_groups && coin(rng, 0.3)) {
    const auto cols = static_cast<std::uint32_t>(uniform_int(rng, 1, 3));
    const auto rows = static_cast<std::uint32_t>(uniform_int(rng, 1, 2));
    const std::uint32_t tw = 640, th = 640;
    TileGroup g;
    g.group_id = static_cast<std::uint32_t>(uniform_int(rng, 1, 1000));
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        TrackDescriptor t;
        t.track_id = next_track++;
        t.media_kind = MediaKind::video;
        t.codec = Codec::HEVC_Main10;
        t.level = Level{5, 1};
        t.projection = Projection::ERP;
        t.dims = PictureDims{tw, th};
        p.tracks.push_back(t);
        g.members.push_back({t.track_id, c, r, Rect2D{c * tw, r * th, tw, th}});
      }
    }
    std::shuffle(g.members.begin(), g.members.end(), rng);
    p.tile_groups.push_back(g);
  }

  std::vector<const TrackDescriptor*> videos, images;
  for (const auto& t : p.tracks) {
    if (t.media_kind == MediaKind::video) videos.push_back(&t);
    if (t.media_kind == MediaKind::image) images.push_back(&t);
  }

  // Recommended-viewport tracks are planned first so overlays can use them.
  std::vector<std::uint32_t> viewport_tracks;
  if (coin(rng, 0.3)) viewport_tracks.push_back(next_track++);

  const int n_viewpoints = uniform_int(rng, 0, options.max_viewpoints);
  std::vector<std::string> viewpoint_ids;
  for (int i = 0; i < n_viewpoints; ++i) {
    std::string id = "vp" + std::to_string(i);
    if (options.awkward_ids && coin(rng, 0.3)) id += pick(rng, std::vector<std::string>{",a", "%20", "_x y", "%,"});
    viewpoint_ids.push_back(id);
  }
  std::vector<bool> video_taken(videos.size(), false);
  for (int i = 0; i < n_viewpoints; ++i) {
    Viewpoint v;
    v.viewpoint_id = viewpoint_ids[static_cast<std::size_t>(i)];
    if (coin(rng)) v.label = random_label(rng);
    v.position_xyz = {uniform_int(rng, -100000, 100000), uniform_int(rng, -100000, 100000),
                      uniform_int(rng, -10000, 10000)};
    if (coin(rng, 0.6)) v.gps = random_gps(rng);
    v.orientation = {uniform(rng, -180.0, 180.0), uniform(rng, -90.0, 90.0), uniform(rng, -180.0, 180.0)};
    if (coin(rng, 0.3)) v.north_offset = uniform(rng, -180.0, 180.0);
    v.group_id = static_cast<std::uint32_t>(uniform_int(rng, 0, 3));
    const int n_rules = uniform_int(rng, 0, 3);
    bool has_default = false;
    for (int k = 0; k < n_rules; ++k) {
      SwitchRule rule;
      rule.target_viewpoint_id = pick(rng, viewpoint_ids);
      if (coin(rng, 0.4)) rule.activation_region = random_region(rng);
      rule.timeline_mode = pick(rng, std::vector{TimelineMode::continue_time, TimelineMode::reset_to_zero,
                                                 TimelineMode::offset});
      if (rule.timeline_mode == TimelineMode::offset) rule.offset_ms = uniform_int(rng, 0, 5000);
      if (!has_default && coin(rng, 0.4)) rule.is_default = has_default = true;
      if (coin(rng, 0.4)) rule.selection_window_ms = static_cast<std::uint32_t>(uniform_int(rng, 1, 10000));
      v.switch_rules.push_back(rule);
    }
    if (coin(rng, 0.3)) {
      LoopInfo l;
      l.loop_start_ms = uniform_int(rng, 0, 1000);
      l.loop_end_ms = l.loop_start_ms + uniform_int(rng, 1, 5000);
      l.max_loops = static_cast<std::uint32_t>(uniform_int(rng, 0, 3));
      v.loop = l;
    }
    v.dynamic = coin(rng, 0.2);
    for (std::size_t k = 0; k < videos.size(); ++k) {
      if (!video_taken[k] && coin(rng, 0.5)) {
        video_taken[k] = true;
        v.track_ids.push_back(videos[k]->track_id);
      }
    }
    p.viewpoints.push_back(std::move(v));
  }

  const int n_overlays = uniform_int(rng, 0, options.max_overlays);
  std::uint32_t next_overlay = static_cast<std::uint32_t>(uniform_int(rng, 1, 4));
  std::vector<std::uint32_t> overlay_ids;
  for (int i = 0; i < n_overlays; ++i) {
    Overlay o;
    o.overlay_id = next_overlay;
    next_overlay += static_cast<std::uint32_t>(uniform_int(rng, 1, 3));

    std::vector<OverlaySourceKind> kinds = {OverlaySourceKind::external};
    if (!videos.empty()) {
      kinds.push_back(OverlaySourceKind::video_track);
      kinds.push_back(OverlaySourceKind::video_track);
      kinds.push_back(OverlaySourceKind::region_of_track);
    }
    if (!images.empty()) {
      kinds.push_back(OverlaySourceKind::image_item);
      kinds.push_back(OverlaySourceKind::region_of_image);
    }
    if (!viewport_tracks.empty()) kinds.push_back(OverlaySourceKind::recommended_viewport);
    o.source.kind = pick(rng, kinds);
    const TrackDescriptor* host = nullptr;
    switch (o.source.kind) {
      case OverlaySourceKind::video_track:
      case OverlaySourceKind::region_of_track:
        host = pick(rng, videos);
        break;
      case OverlaySourceKind::image_item:
      case OverlaySourceKind::region_of_image:
        host = pick(rng, images);
        break;
      case OverlaySourceKind::recommended_viewport:
        o.source.ref_id = pick(rng, viewport_tracks);
        break;
      case OverlaySourceKind::external:
        break;
    }
    if (host) o.source.ref_id = host->track_id;
    if (o.source.kind == OverlaySourceKind::region_of_track || o.source.kind == OverlaySourceKind::region_of_image) {
      const auto dims = host->dims.value_or(PictureDims{1920, 1080});
      o.source.region = random_rect_within(rng, dims.width, dims.height);
    }

    o.rendering.kind = pick(rng, std::vector{OverlayRenderingKind::viewport_relative,
                                             OverlayRenderingKind::sphere_relative_omni,
                                             OverlayRenderingKind::sphere_relative_2d, OverlayRenderingKind::mesh_3d});
    switch (o.rendering.kind) {
      case OverlayRenderingKind::viewport_relative: {
        NormalizedRect n;
        n.x = uniform(rng, 0.0, 0.5);
        n.y = uniform(rng, 0.0, 0.5);
        n.width = uniform(rng, 0.01, 0.5);
        n.height = uniform(rng, 0.01, 0.5);
        o.rendering.viewport_rect = n;
        break;
      }
      case OverlayRenderingKind::sphere_relative_omni:
        o.rendering.sphere_position = random_region(rng);
        break;
      case OverlayRenderingKind::sphere_relative_2d:
        o.rendering.plane_position =
            PlanePosition{random_orientation(rng), uniform(rng, 0.05, 1.0), uniform(rng, 0.01, 2.0),
                          uniform(rng, 0.01, 2.0)};
        break;
      case OverlayRenderingKind::mesh_3d:
        break;
    }
    o.properties.layering_order = uniform_int(rng, -5, 5);
    o.properties.opacity = uniform(rng, 0.0, 1.0);
    o.properties.priority = static_cast<std::uint32_t>(uniform_int(rng, 0, 3));
    o.properties.has_alpha_plane = coin(rng);
    for (auto c : {OverlayControl::move, OverlayControl::resize, OverlayControl::rotate,
                   OverlayControl::switch_on_off, OverlayControl::change_opacity}) {
      if (coin(rng)) o.interaction.allowed_controls.insert(c);
    }
    if (coin(rng, 0.3)) o.interaction.label = random_label(rng);
    if (o.interaction.allowed_controls.contains(OverlayControl::switch_on_off) && coin(rng, 0.4)) {
      o.interaction.toggle_region = random_region(rng);
    }
    o.controls_timing = coin(rng, 0.3) ? ControlsTiming::timed : ControlsTiming::static_controls;
    overlay_ids.push_back(o.overlay_id);
    p.overlays.push_back(std::move(o));
  }

  std::vector<std::pair<std::uint32_t, MetadataKind>> planned;
  for (auto id : viewport_tracks) planned.emplace_back(id, MetadataKind::recommended_viewport);
  std::vector<MetadataKind> kinds = {MetadataKind::initial_viewing_orientation, MetadataKind::recommended_viewport,
                                     MetadataKind::rwqr, MetadataKind::erp_region};
  if (!viewpoint_ids.empty()) kinds.push_back(MetadataKind::dynamic_viewpoint);
  if (!overlay_ids.empty()) kinds.push_back(MetadataKind::overlay_controls);
  const int n_meta = uniform_int(rng, 0, options.max_timed_metadata);
  for (int i = 0; i < n_meta; ++i) planned.emplace_back(next_track++, pick(rng, kinds));
  for (const auto& [id, kind] : planned) {
    TimedMetadataTrack t;
    t.track_id = id;
    t.kind = kind;
    std::int64_t time = uniform_int(rng, 0, 500);
    const int n_samples = uniform_int(rng, 0, 4);
    for (int s = 0; s < n_samples; ++s) {
      t.samples.push_back({time, random_payload(rng, kind, viewpoint_ids, overlay_ids)});
      time += uniform_int(rng, 1, 2000);
    }
    p.timed_metadata.push_back(std::move(t));
  }

  // Dynamic viewpoints and timed overlays need a sample naming them.
  auto track_of_kind = [&](MetadataKind kind) -> TimedMetadataTrack& {
    for (auto& t : p.timed_metadata) {
      if (t.kind == kind) return t;
    }
    TimedMetadataTrack t;
    t.track_id = next_track++;
    t.kind = kind;
    p.timed_metadata.push_back(std::move(t));
    return p.timed_metadata.back();
  };
  auto append = [&](TimedMetadataTrack& t, TimedPayload payload) {
    const std::int64_t time = t.samples.empty() ? 0 : t.samples.back().time_ms + uniform_int(rng, 1, 1000);
    t.samples.push_back({time, std::move(payload)});
  };
  for (const auto& v : p.viewpoints) {
    if (!v.dynamic) continue;
    DynamicViewpointSample d;
    d.viewpoint_id = v.viewpoint_id;
    d.position_xyz = v.position_xyz;
    d.gps = v.gps;
    append(track_of_kind(MetadataKind::dynamic_viewpoint), d);
  }
  for (const auto& o : p.overlays) {
    if (o.controls_timing != ControlsTiming::timed) continue;
    append(track_of_kind(MetadataKind::overlay_controls), OverlayControlSample{o.overlay_id, coin(rng), std::nullopt});
  }

  if (coin(rng, 0.3)) {
    ViewingSpace vs;
    vs.shape = coin(rng) ? ViewingSpaceShape::sphere : ViewingSpaceShape::cuboid;
    const int n = vs.shape == ViewingSpaceShape::sphere ? 1 : 3;
    for (int i = 0; i < n; ++i) vs.extent_mm.push_back(static_cast<std::uint32_t>(uniform_int(rng, 1, 5000)));
    p.viewing_space = vs;
  }

  if (options.extras) {
    const std::size_t known = 1 + p.tracks.size() + p.viewpoints.size() + p.overlays.size() +
                              p.timed_metadata.size() + p.tile_groups.size() + (p.viewing_space ? 1 : 0);
    const int n_extras = uniform_int(rng, 0, 2);
    const std::size_t total = known + static_cast<std::size_t>(n_extras);
    std::vector<std::size_t> slots(total - 1);
    std::iota(slots.begin(), slots.end(), std::size_t{1});
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(static_cast<std::size_t>(n_extras));
    std::sort(slots.begin(), slots.end());
    for (int i = 0; i < n_extras; ++i) {
      OpaqueBox b;
      b.fourcc = {'x', 't', 'r', static_cast<char>('0' + i)};
      const int len = uniform_int(rng, 0, 24);
      for (int k = 0; k < len; ++k) b.payload.push_back(static_cast<std::uint8_t>(uniform_int(rng, 0, 255)));
      b.position = slots[static_cast<std::size_t>(i)];
      p.extras.push_back(std::move(b));
    }
  }
  return p;
}

}  // namespace omaf::gen
