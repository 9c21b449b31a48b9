#include "omaf/model.hpp"

#include <algorithm>
#include <charconv>

#include "omaf/error.hpp"

namespace omaf {

namespace {

template <typename Enum>
struct EnumNames;

#define OMAF_ENUM_NAMES(Enum, ...)                                   \
  template <>                                                        \
  struct EnumNames<Enum> {                                           \
    static constexpr std::string_view kTypeName = #Enum;             \
    static constexpr std::string_view kNames[] = {__VA_ARGS__};      \
  };

OMAF_ENUM_NAMES(MediaKind, "video", "audio", "image", "timed_text", "timed_metadata")
OMAF_ENUM_NAMES(Codec, "HEVC_Main10", "AVC_ProgressiveHigh", "AVC_High", "JPEG", "MPEGH_LC",
                "AAC_HEv2", "IMSC1_Text", "IMSC1_Image", "WebVTT", "metadata")
OMAF_ENUM_NAMES(Projection, "ERP", "CMP", "fisheye", "mesh", "none")
OMAF_ENUM_NAMES(TimelineMode, "continue_time", "reset_to_zero", "offset")
OMAF_ENUM_NAMES(OverlaySourceKind, "video_track", "image_item", "region_of_track",
                "region_of_image", "recommended_viewport", "external")
OMAF_ENUM_NAMES(OverlayRenderingKind, "viewport_relative", "sphere_relative_omni",
                "sphere_relative_2d", "mesh_3d")
OMAF_ENUM_NAMES(OverlayControl, "move", "resize", "rotate", "switch_on_off", "change_opacity")
OMAF_ENUM_NAMES(ControlsTiming, "static", "timed")
OMAF_ENUM_NAMES(MetadataKind, "initial_viewing_orientation", "recommended_viewport", "rwqr",
                "erp_region", "dynamic_viewpoint", "overlay_controls")
OMAF_ENUM_NAMES(ErpValueKind, "quality_rank", "priority", "heatmap")
OMAF_ENUM_NAMES(ViewingSpaceShape, "sphere", "cuboid")

#undef OMAF_ENUM_NAMES

template <typename Enum>
std::string_view name_of(Enum v) {
  const auto index = static_cast<std::size_t>(v);
  const auto& names = EnumNames<Enum>::kNames;
  if (index >= std::size(names)) return "?";
  return names[index];
}

void normalize_region(SphereRegion& r) { r.center = geo::normalize(r.center); }

}  // namespace

template <typename Enum>
Enum enum_from_string(std::string_view name) {
  const auto& names = EnumNames<Enum>::kNames;
  for (std::size_t i = 0; i < std::size(names); ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  throw ParseError("unknown " + std::string(EnumNames<Enum>::kTypeName) + " value '" +
                       std::string(name) + "'",
                   0);
}

template MediaKind enum_from_string<MediaKind>(std::string_view);
template Codec enum_from_string<Codec>(std::string_view);
template Projection enum_from_string<Projection>(std::string_view);
template TimelineMode enum_from_string<TimelineMode>(std::string_view);
template OverlaySourceKind enum_from_string<OverlaySourceKind>(std::string_view);
template OverlayRenderingKind enum_from_string<OverlayRenderingKind>(std::string_view);
template OverlayControl enum_from_string<OverlayControl>(std::string_view);
template ControlsTiming enum_from_string<ControlsTiming>(std::string_view);
template MetadataKind enum_from_string<MetadataKind>(std::string_view);
template ErpValueKind enum_from_string<ErpValueKind>(std::string_view);
template ViewingSpaceShape enum_from_string<ViewingSpaceShape>(std::string_view);

std::string_view to_string(MediaKind v) { return name_of(v); }
std::string_view to_string(Codec v) { return name_of(v); }
std::string_view to_string(Projection v) { return name_of(v); }
std::string_view to_string(TimelineMode v) { return name_of(v); }
std::string_view to_string(OverlaySourceKind v) { return name_of(v); }
std::string_view to_string(OverlayRenderingKind v) { return name_of(v); }
std::string_view to_string(OverlayControl v) { return name_of(v); }
std::string_view to_string(ControlsTiming v) { return name_of(v); }
std::string_view to_string(MetadataKind v) { return name_of(v); }
std::string_view to_string(ErpValueKind v) { return name_of(v); }
std::string_view to_string(ViewingSpaceShape v) { return name_of(v); }

std::string to_string(Level level) {
  return std::to_string(level.major) + "." + std::to_string(level.minor);
}

Level parse_level(std::string_view text) {
  auto parse_part = [&](std::string_view part) -> std::uint8_t {
    unsigned value = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (part.empty() || ec != std::errc{} || ptr != end || value > 255) {
      throw ParseError("invalid codec level '" + std::string(text) + "'", 0);
    }
    return static_cast<std::uint8_t>(value);
  };
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return {parse_part(text), 0};
  return {parse_part(text.substr(0, dot)), parse_part(text.substr(dot + 1))};
}

bool codec_has_levels(Codec codec) {
  switch (codec) {
    case Codec::HEVC_Main10:
    case Codec::AVC_ProgressiveHigh:
    case Codec::AVC_High:
    case Codec::MPEGH_LC:
    case Codec::AAC_HEv2:
      return true;
    default:
      return false;
  }
}

MetadataKind payload_kind(const TimedPayload& payload) {
  return static_cast<MetadataKind>(payload.index());
}

const TrackDescriptor* find_track(const Presentation& p, std::uint32_t track_id) {
  auto it = std::find_if(p.tracks.begin(), p.tracks.end(),
                         [&](const TrackDescriptor& t) { return t.track_id == track_id; });
  return it == p.tracks.end() ? nullptr : &*it;
}

const TimedMetadataTrack* find_timed_metadata(const Presentation& p, std::uint32_t track_id) {
  auto it = std::find_if(p.timed_metadata.begin(), p.timed_metadata.end(),
                         [&](const TimedMetadataTrack& t) { return t.track_id == track_id; });
  return it == p.timed_metadata.end() ? nullptr : &*it;
}

const Viewpoint* find_viewpoint(const Presentation& p, std::string_view viewpoint_id) {
  auto it = std::find_if(p.viewpoints.begin(), p.viewpoints.end(),
                         [&](const Viewpoint& v) { return v.viewpoint_id == viewpoint_id; });
  return it == p.viewpoints.end() ? nullptr : &*it;
}

const Overlay* find_overlay(const Presentation& p, std::uint32_t overlay_id) {
  auto it = std::find_if(p.overlays.begin(), p.overlays.end(),
                         [&](const Overlay& o) { return o.overlay_id == overlay_id; });
  return it == p.overlays.end() ? nullptr : &*it;
}

Presentation normalize_angles(Presentation p) {
  for (auto& t : p.tracks) {
    if (t.coverage) normalize_region(*t.coverage);
  }
  for (auto& v : p.viewpoints) {
    // Pitch folds like an elevation.
    const auto folded = geo::normalize({v.orientation.yaw, v.orientation.pitch, v.orientation.roll});
    v.orientation = {folded.azimuth, folded.elevation, folded.tilt};
    if (v.north_offset) v.north_offset = geo::wrap_azimuth(*v.north_offset);
    if (v.gps) v.gps->longitude = geo::wrap_azimuth(v.gps->longitude);
    for (auto& rule : v.switch_rules) {
      if (rule.activation_region) normalize_region(*rule.activation_region);
    }
  }
  for (auto& o : p.overlays) {
    if (o.rendering.sphere_position) normalize_region(*o.rendering.sphere_position);
    if (o.rendering.plane_position) {
      o.rendering.plane_position->center = geo::normalize(o.rendering.plane_position->center);
    }
    if (o.interaction.toggle_region) normalize_region(*o.interaction.toggle_region);
  }
  for (auto& track : p.timed_metadata) {
    for (auto& sample : track.samples) {
      std::visit(
          [](auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, ViewingOrientation>) {
              payload = geo::normalize(payload);
            } else if constexpr (std::is_same_v<T, SphereRegion>) {
              normalize_region(payload);
            } else if constexpr (std::is_same_v<T, RwqrPayload>) {
              for (auto& e : payload.entries) {
                if (auto* r = std::get_if<SphereRegion>(&e.region)) normalize_region(*r);
              }
            } else if constexpr (std::is_same_v<T, DynamicViewpointSample>) {
              if (payload.gps) payload.gps->longitude = geo::wrap_azimuth(payload.gps->longitude);
            }
          },
          sample.payload);
    }
  }
  return p;
}

}  // namespace omaf
