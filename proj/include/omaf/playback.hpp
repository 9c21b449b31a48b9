#pragma once

// Playback state engines. Every transition is a pure function from the old
// state to a new one.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "omaf/model.hpp"

namespace omaf::playback {

// ---- overlays --------------------------------------------------------------

struct OverlayStatus {
  bool active = true;       // author / timeline controlled
  bool switched_on = true;  // user controlled

  friend bool operator==(const OverlayStatus&, const OverlayStatus&) = default;
};

using OverlayState = std::map<std::uint32_t, OverlayStatus>;

// Every overlay active and switched on.
OverlayState initial_overlay_state(const Presentation& p);

// Applies the latest overlay_controls sample at or before t_ms to `active`.
// switched_on is left alone.
OverlayState overlay_state_at(const Presentation& p, std::int64_t t_ms, OverlayState state);

// Throws Error(Errc::lookup) when the state has no entry for the overlay.
bool overlay_displayed(const Overlay& o, const OverlayState& s);

enum class DrawGroup { sphere, viewport };

struct DrawItem {
  std::uint32_t overlay_id = 0;
  DrawGroup group = DrawGroup::sphere;
  double distance = 1.0;  // from the sphere centre; 0 for viewport overlays
  std::int32_t layering_order = 0;

  friend bool operator==(const DrawItem&, const DrawItem&) = default;
};

// Back-to-front: sphere-relative overlays far to near, then viewport-relative
// ones; layering order ascending within equal distance, then overlay id.
// Omnidirectional and mesh overlays sit at distance 1.
std::vector<DrawItem> resolve_draw_order(std::span<const Overlay> overlays, const OverlayState& state);

// Keeps every priority-0 overlay and fills the remaining capacity by
// ascending (priority, id). Returns ids ascending. Throws EssentialOverflow
// when the essential overlays alone exceed the capacity.
std::vector<std::uint32_t> cull_by_priority(std::span<const Overlay> displayed, std::size_t capacity);

// ---- composition -----------------------------------------------------------

struct Raster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;  // RGBA, row-major

  static Raster filled(std::uint32_t width, std::uint32_t height, std::uint8_t r, std::uint8_t g,
                       std::uint8_t b, std::uint8_t a = 255);
  std::uint8_t* at(std::uint32_t x, std::uint32_t y) { return pixels.data() + 4 * (std::size_t{y} * width + x); }
  const std::uint8_t* at(std::uint32_t x, std::uint32_t y) const {
    return pixels.data() + 4 * (std::size_t{y} * width + x);
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

struct Layer {
  Raster raster;
  double opacity = 1.0;
  Rect2D placement;  // in background pixels; the source is scaled to fit
  bool use_alpha = false;
};

// out = a*src + (1-a)*dst per channel, a = opacity * (alpha/255 when
// use_alpha), rounded half away from zero. Layers apply in list order.
// Throws Error(Errc::geometry) for placements outside the background.
Raster compose(const Raster& background, std::span<const Layer> layers);
Raster compose_serial(const Raster& background, std::span<const Layer> layers);

// Binary P6 plus an optional P5 alpha plane. Without a sidecar the alpha
// channel is 255.
Raster read_ppm(const std::string& path, const std::optional<std::string>& alpha_path = std::nullopt);
void write_ppm(const Raster& raster, const std::string& path,
               const std::optional<std::string>& alpha_path = std::nullopt);

// ---- viewpoints ------------------------------------------------------------

struct PlaybackState {
  std::string current_viewpoint_id;
  std::int64_t media_time_ms = 0;
  std::uint32_t loop_count = 0;
  ViewingOrientation orientation;
  // Milliseconds left before the default switch rule fires.
  std::optional<std::int64_t> selection_deadline_ms;

  friend bool operator==(const PlaybackState&, const PlaybackState&) = default;
};

// State at t = 0 in the given viewpoint, with its selection window armed.
PlaybackState initial_state(const Presentation& p, const std::string& viewpoint_id);

// `rule` must equal one of the current viewpoint's rules (Errc::usage
// otherwise). Resets loop_count, clears any pending window and arms the
// target's own window, if it has a default rule with one.
PlaybackState switch_viewpoint(const Presentation& p, const PlaybackState& state, const SwitchRule& rule);

// Applies `user_choice` (an index into the current viewpoint's switch rules)
// first, then advances by dt_ms. Loop wraps and window expiries are handled
// in time order; when both fall on the same instant the wrap goes first.
PlaybackState tick(const Presentation& p, const PlaybackState& state, std::int64_t dt_ms,
                   std::optional<std::size_t> user_choice = std::nullopt);

inline constexpr double kEarthRadiusM = 6'371'000.0;

double haversine_m(const GpsPosition& a, const GpsPosition& b);

// Nearest viewpoint by great-circle distance, ties to the smaller id.
// Throws Error(Errc::no_candidate) when no viewpoint has a GPS position.
std::string select_viewpoint_by_gps(std::span<const Viewpoint> viewpoints, const GpsPosition& device);

// ---- timed metadata --------------------------------------------------------

// Payload of the last sample with time_ms <= t_ms; nullopt before the first
// sample. Throws Error(Errc::usage) for an empty track.
std::optional<TimedPayload> sample_timed_metadata(const TimedMetadataTrack& track, std::int64_t t_ms);

// ---- traces ----------------------------------------------------------------

struct TraceStep {
  std::int64_t dt_ms = 0;
  std::optional<std::size_t> choice;
};

// Event list: [{"dt_ms": 100}, {"dt_ms": 0, "choice": 1}, ...].
std::vector<TraceStep> trace_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PlaybackState& s);

// One state per step, after the step applied.
std::vector<PlaybackState> replay(const Presentation& p, PlaybackState state, std::span<const TraceStep> steps);

}  // namespace omaf::playback
