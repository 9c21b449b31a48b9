#pragma once

// Presentation document model. Values are plain aggregates; they are never
// normalized or mutated by validation.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "omaf/geometry.hpp"

namespace omaf {

using geo::PictureDims;
using geo::Rect2D;
using geo::SphereRegion;
using geo::ViewingOrientation;

enum class MediaKind : std::uint8_t { video, audio, image, timed_text, timed_metadata };

enum class Codec : std::uint8_t {
  HEVC_Main10,
  AVC_ProgressiveHigh,
  AVC_High,
  JPEG,
  MPEGH_LC,
  AAC_HEv2,
  IMSC1_Text,
  IMSC1_Image,
  WebVTT,
  metadata,
};

enum class Projection : std::uint8_t { ERP, CMP, fisheye, mesh, none };

// Codec level compared as a (major, minor) pair so "5.1" and "5.10" never
// collide the way floats would.
struct Level {
  std::uint8_t major = 0;
  std::uint8_t minor = 0;

  friend bool operator==(const Level&, const Level&) = default;
  friend auto operator<=>(const Level&, const Level&) = default;
};

std::string to_string(Level level);
// Accepts "5", "5.1"; throws ParseError otherwise.
Level parse_level(std::string_view text);

bool codec_has_levels(Codec codec);

struct TrackDescriptor {
  std::uint32_t track_id = 0;
  MediaKind media_kind = MediaKind::video;
  Codec codec = Codec::HEVC_Main10;
  std::optional<Level> level;
  std::optional<Projection> projection;
  bool stereo = false;
  std::optional<PictureDims> dims;
  std::optional<SphereRegion> coverage;
  std::optional<std::uint32_t> sample_rate_hz;

  friend bool operator==(const TrackDescriptor&, const TrackDescriptor&) = default;
};

struct GpsPosition {
  double latitude = 0.0;   // [-90, 90]
  double longitude = 0.0;  // [-180, 180)
  std::optional<double> altitude;

  friend bool operator==(const GpsPosition&, const GpsPosition&) = default;
};

struct PositionMm {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  friend bool operator==(const PositionMm&, const PositionMm&) = default;
};

// Rotation of a viewpoint's global coordinate system relative to the common
// reference coordinate system.
struct Rotation {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;

  friend bool operator==(const Rotation&, const Rotation&) = default;
};

enum class TimelineMode : std::uint8_t { continue_time, reset_to_zero, offset };

struct SwitchRule {
  std::string target_viewpoint_id;
  std::optional<SphereRegion> activation_region;
  TimelineMode timeline_mode = TimelineMode::continue_time;
  std::optional<std::int64_t> offset_ms;  // present iff timeline_mode == offset
  bool is_default = false;
  std::optional<std::uint32_t> selection_window_ms;

  friend bool operator==(const SwitchRule&, const SwitchRule&) = default;
};

struct LoopInfo {
  std::int64_t loop_start_ms = 0;
  std::int64_t loop_end_ms = 0;
  std::uint32_t max_loops = 0;  // 0 = unbounded

  friend bool operator==(const LoopInfo&, const LoopInfo&) = default;
};

struct Viewpoint {
  std::string viewpoint_id;
  std::string label;
  PositionMm position_xyz;
  std::optional<GpsPosition> gps;
  Rotation orientation;
  std::optional<double> north_offset;
  std::uint32_t group_id = 0;
  std::vector<SwitchRule> switch_rules;
  std::optional<LoopInfo> loop;
  bool dynamic = false;
  // Background media tracks captured from this viewpoint.
  std::vector<std::uint32_t> track_ids;

  friend bool operator==(const Viewpoint&, const Viewpoint&) = default;
};

enum class OverlaySourceKind : std::uint8_t {
  video_track,
  image_item,
  region_of_track,
  region_of_image,
  recommended_viewport,
  external,
};

struct OverlaySource {
  OverlaySourceKind kind = OverlaySourceKind::video_track;
  std::optional<std::uint32_t> ref_id;
  std::optional<Rect2D> region;

  friend bool operator==(const OverlaySource&, const OverlaySource&) = default;
};

enum class OverlayRenderingKind : std::uint8_t {
  viewport_relative,
  sphere_relative_omni,
  sphere_relative_2d,
  mesh_3d,
};

// Fractions of the viewport width/height.
struct NormalizedRect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const NormalizedRect&, const NormalizedRect&) = default;
};

struct PlanePosition {
  ViewingOrientation center;
  double distance = 1.0;  // fraction of the unit-sphere radius, (0, 1]
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const PlanePosition&, const PlanePosition&) = default;
};

struct OverlayRendering {
  OverlayRenderingKind kind = OverlayRenderingKind::viewport_relative;
  std::optional<NormalizedRect> viewport_rect;
  std::optional<SphereRegion> sphere_position;
  std::optional<PlanePosition> plane_position;

  friend bool operator==(const OverlayRendering&, const OverlayRendering&) = default;
};

struct OverlayProperties {
  std::int32_t layering_order = 0;
  double opacity = 1.0;
  std::uint32_t priority = 0;  // 0 = essential
  bool has_alpha_plane = false;

  friend bool operator==(const OverlayProperties&, const OverlayProperties&) = default;
};

enum class OverlayControl : std::uint8_t { move, resize, rotate, switch_on_off, change_opacity };

struct OverlayInteraction {
  std::set<OverlayControl> allowed_controls;
  std::optional<std::string> label;
  std::optional<SphereRegion> toggle_region;

  friend bool operator==(const OverlayInteraction&, const OverlayInteraction&) = default;
};

enum class ControlsTiming : std::uint8_t { static_controls, timed };

struct Overlay {
  std::uint32_t overlay_id = 0;
  OverlaySource source;
  OverlayRendering rendering;
  OverlayProperties properties;
  OverlayInteraction interaction;
  ControlsTiming controls_timing = ControlsTiming::static_controls;

  friend bool operator==(const Overlay&, const Overlay&) = default;
};

enum class MetadataKind : std::uint8_t {
  initial_viewing_orientation,
  recommended_viewport,
  rwqr,
  erp_region,
  dynamic_viewpoint,
  overlay_controls,
};

struct RwqrEntry {
  std::variant<SphereRegion, Rect2D> region;
  std::uint32_t quality_rank = 1;  // lower is better

  friend bool operator==(const RwqrEntry&, const RwqrEntry&) = default;
};

struct RwqrPayload {
  std::vector<RwqrEntry> entries;
  friend bool operator==(const RwqrPayload&, const RwqrPayload&) = default;
};

enum class ErpValueKind : std::uint8_t { quality_rank, priority, heatmap };

struct ErpRegionPayload {
  std::uint32_t grid_cols = 0;
  std::uint32_t grid_rows = 0;
  std::vector<std::uint32_t> cell_values;  // row-major, cols x rows
  ErpValueKind value_kind = ErpValueKind::heatmap;

  friend bool operator==(const ErpRegionPayload&, const ErpRegionPayload&) = default;
};

struct DynamicViewpointSample {
  std::string viewpoint_id;
  PositionMm position_xyz;
  std::optional<GpsPosition> gps;

  friend bool operator==(const DynamicViewpointSample&, const DynamicViewpointSample&) = default;
};

struct OverlayControlSample {
  std::uint32_t overlay_id = 0;
  bool active = true;
  std::optional<double> opacity;

  friend bool operator==(const OverlayControlSample&, const OverlayControlSample&) = default;
};

// Alternative index matches MetadataKind.
using TimedPayload = std::variant<ViewingOrientation, SphereRegion, RwqrPayload, ErpRegionPayload,
                                  DynamicViewpointSample, OverlayControlSample>;

MetadataKind payload_kind(const TimedPayload& payload);

struct TimedSample {
  std::int64_t time_ms = 0;
  TimedPayload payload;

  friend bool operator==(const TimedSample&, const TimedSample&) = default;
};

struct TimedMetadataTrack {
  std::uint32_t track_id = 0;
  MetadataKind kind = MetadataKind::initial_viewing_orientation;
  std::vector<TimedSample> samples;

  friend bool operator==(const TimedMetadataTrack&, const TimedMetadataTrack&) = default;
};

struct TileMember {
  std::uint32_t track_id = 0;
  std::uint32_t col = 0;
  std::uint32_t row = 0;
  Rect2D source_rect;

  friend bool operator==(const TileMember&, const TileMember&) = default;
};

struct TileGroup {
  std::uint32_t group_id = 0;
  std::vector<TileMember> members;

  friend bool operator==(const TileGroup&, const TileGroup&) = default;
};

enum class ViewingSpaceShape : std::uint8_t { sphere, cuboid };

struct ViewingSpace {
  ViewingSpaceShape shape = ViewingSpaceShape::sphere;
  // One radius for a sphere; x, y, z edge lengths for a cuboid.
  std::vector<std::uint32_t> extent_mm;

  friend bool operator==(const ViewingSpace&, const ViewingSpace&) = default;
};

// Top-level box whose type the decoder did not recognize, kept verbatim so it
// can be written back. `position` is its index among the top-level boxes.
struct OpaqueBox {
  std::array<char, 4> fourcc{};
  std::vector<std::uint8_t> payload;
  std::size_t position = 0;

  friend bool operator==(const OpaqueBox&, const OpaqueBox&) = default;
};

struct Presentation {
  std::set<std::string> brands;
  std::vector<TrackDescriptor> tracks;
  std::vector<Viewpoint> viewpoints;
  std::vector<Overlay> overlays;
  std::vector<TimedMetadataTrack> timed_metadata;
  std::vector<TileGroup> tile_groups;
  std::optional<ViewingSpace> viewing_space;
  std::vector<OpaqueBox> extras;

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

// Lookups; nullptr when absent.
const TrackDescriptor* find_track(const Presentation& p, std::uint32_t track_id);
const TimedMetadataTrack* find_timed_metadata(const Presentation& p, std::uint32_t track_id);
const Viewpoint* find_viewpoint(const Presentation& p, std::string_view viewpoint_id);
const Overlay* find_overlay(const Presentation& p, std::uint32_t overlay_id);

// Enum <-> name, names as used in the JSON manifest.
std::string_view to_string(MediaKind v);
std::string_view to_string(Codec v);
std::string_view to_string(Projection v);
std::string_view to_string(TimelineMode v);
std::string_view to_string(OverlaySourceKind v);
std::string_view to_string(OverlayRenderingKind v);
std::string_view to_string(OverlayControl v);
std::string_view to_string(ControlsTiming v);
std::string_view to_string(MetadataKind v);
std::string_view to_string(ErpValueKind v);
std::string_view to_string(ViewingSpaceShape v);

template <typename Enum>
Enum enum_from_string(std::string_view name);  // throws ParseError on unknown names

// Wraps every angle into its canonical range. Validation never does this
// implicitly.
Presentation normalize_angles(Presentation p);

}  // namespace omaf
