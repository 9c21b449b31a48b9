#include "omaf/builder.hpp"

#include <algorithm>

#include "omaf/validate.hpp"

namespace omaf {

PresentationBuilder& PresentationBuilder::brand(std::string brand) {
  p_.brands.insert(std::move(brand));
  return *this;
}

std::uint32_t PresentationBuilder::next_track_id() const {
  std::uint32_t max_id = 0;
  for (const auto& t : p_.tracks) max_id = std::max(max_id, t.track_id);
  for (const auto& t : p_.timed_metadata) max_id = std::max(max_id, t.track_id);
  return max_id + 1;
}

std::uint32_t PresentationBuilder::add_track(TrackDescriptor track) {
  if (track.track_id == 0) track.track_id = next_track_id();
  p_.tracks.push_back(std::move(track));
  return p_.tracks.back().track_id;
}

std::uint32_t PresentationBuilder::add_timed_metadata(TimedMetadataTrack track) {
  if (track.track_id == 0) track.track_id = next_track_id();
  p_.timed_metadata.push_back(std::move(track));
  return p_.timed_metadata.back().track_id;
}

PresentationBuilder& PresentationBuilder::add_viewpoint(Viewpoint viewpoint) {
  p_.viewpoints.push_back(std::move(viewpoint));
  return *this;
}

std::uint32_t PresentationBuilder::add_overlay(Overlay overlay) {
  if (overlay.overlay_id == 0) {
    std::uint32_t max_id = 0;
    for (const auto& o : p_.overlays) max_id = std::max(max_id, o.overlay_id);
    overlay.overlay_id = max_id + 1;
  }
  p_.overlays.push_back(std::move(overlay));
  return p_.overlays.back().overlay_id;
}

std::uint32_t PresentationBuilder::add_erp_tile_grid(std::uint32_t cols, std::uint32_t rows,
                                                     PictureDims full, Codec codec, Level level) {
  TileGroup group;
  for (const auto& g : p_.tile_groups) group.group_id = std::max(group.group_id, g.group_id + 1);
  const std::uint32_t w = full.width / cols;
  const std::uint32_t h = full.height / rows;
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      const Rect2D rect{c * w, r * h, w, h};
      TrackDescriptor t = make_video_track(codec, level, Projection::ERP, {w, h});
      t.coverage = geo::erp_rect_region(rect, full);
      const auto id = add_track(std::move(t));
      group.members.push_back({id, c, r, rect});
    }
  }
  p_.tile_groups.push_back(std::move(group));
  return p_.tile_groups.back().group_id;
}

PresentationBuilder& PresentationBuilder::viewing_space(ViewingSpace space) {
  p_.viewing_space = std::move(space);
  return *this;
}

Presentation PresentationBuilder::build() const {
  PresentationBuilder copy = *this;
  Presentation& p = copy.p_;

  auto has_dynamic_sample = [&](const std::string& id) {
    for (const auto& t : p.timed_metadata) {
      for (const auto& s : t.samples) {
        const auto* d = std::get_if<DynamicViewpointSample>(&s.payload);
        if (t.kind == MetadataKind::dynamic_viewpoint && d && d->viewpoint_id == id) return true;
      }
    }
    return false;
  };
  auto has_control_sample = [&](std::uint32_t id) {
    for (const auto& t : p.timed_metadata) {
      for (const auto& s : t.samples) {
        const auto* c = std::get_if<OverlayControlSample>(&s.payload);
        if (t.kind == MetadataKind::overlay_controls && c && c->overlay_id == id) return true;
      }
    }
    return false;
  };

  for (const auto& v : p.viewpoints) {
    if (!v.dynamic || has_dynamic_sample(v.viewpoint_id)) continue;
    TimedMetadataTrack track{0, MetadataKind::dynamic_viewpoint, {}};
    track.samples.push_back({0, DynamicViewpointSample{v.viewpoint_id, v.position_xyz, v.gps}});
    copy.add_timed_metadata(std::move(track));
  }
  for (const auto& o : p.overlays) {
    if (o.controls_timing != ControlsTiming::timed || has_control_sample(o.overlay_id)) continue;
    TimedMetadataTrack track{0, MetadataKind::overlay_controls, {}};
    track.samples.push_back({0, OverlayControlSample{o.overlay_id, true, std::nullopt}});
    copy.add_timed_metadata(std::move(track));
  }

  require_valid(p);
  return p;
}

TrackDescriptor make_video_track(Codec codec, Level level, Projection projection, PictureDims dims,
                                 bool stereo) {
  TrackDescriptor t;
  t.media_kind = MediaKind::video;
  t.codec = codec;
  if (codec_has_levels(codec)) t.level = level;
  t.projection = projection;
  t.stereo = stereo;
  t.dims = dims;
  return t;
}

}  // namespace omaf
