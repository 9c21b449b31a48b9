#include "omaf/playback.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "omaf/error.hpp"

namespace omaf::playback {

namespace {

const Viewpoint& require_viewpoint(const Presentation& p, const std::string& id) {
  const auto* v = find_viewpoint(p, id);
  if (!v) throw Error(Errc::lookup, "unknown viewpoint '" + id + "'");
  return *v;
}

std::optional<std::int64_t> default_window(const Viewpoint& v) {
  for (const auto& r : v.switch_rules) {
    if (r.is_default && r.selection_window_ms) return std::int64_t{*r.selection_window_ms};
  }
  return std::nullopt;
}

const SwitchRule* default_rule(const Viewpoint& v) {
  for (const auto& r : v.switch_rules) {
    if (r.is_default) return &r;
  }
  return nullptr;
}

double draw_distance(const Overlay& o) {
  switch (o.rendering.kind) {
    case OverlayRenderingKind::viewport_relative: return 0.0;
    case OverlayRenderingKind::sphere_relative_2d:
      return o.rendering.plane_position ? o.rendering.plane_position->distance : 1.0;
    default: return 1.0;
  }
}

double radians(double deg) { return deg * geo::kPi / 180.0; }

}  // namespace

// ---- overlays --------------------------------------------------------------

OverlayState initial_overlay_state(const Presentation& p) {
  OverlayState s;
  for (const auto& o : p.overlays) s[o.overlay_id] = {};
  return s;
}

OverlayState overlay_state_at(const Presentation& p, std::int64_t t_ms, OverlayState state) {
  std::vector<std::tuple<std::int64_t, std::size_t, const OverlayControlSample*>> applied;
  for (std::size_t k = 0; k < p.timed_metadata.size(); ++k) {
    const auto& track = p.timed_metadata[k];
    if (track.kind != MetadataKind::overlay_controls) continue;
    for (const auto& s : track.samples) {
      if (s.time_ms > t_ms) break;
      if (const auto* c = std::get_if<OverlayControlSample>(&s.payload)) applied.emplace_back(s.time_ms, k, c);
    }
  }
  std::stable_sort(applied.begin(), applied.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  for (const auto& [time, track, sample] : applied) {
    const auto it = state.find(sample->overlay_id);
    if (it != state.end()) it->second.active = sample->active;
  }
  return state;
}

bool overlay_displayed(const Overlay& o, const OverlayState& s) {
  const auto it = s.find(o.overlay_id);
  if (it == s.end()) throw Error(Errc::lookup, "no state for overlay " + std::to_string(o.overlay_id));
  return it->second.active && it->second.switched_on;
}

std::vector<DrawItem> resolve_draw_order(std::span<const Overlay> overlays, const OverlayState& state) {
  std::vector<DrawItem> items;
  for (const auto& o : overlays) {
    if (!overlay_displayed(o, state)) continue;
    const bool viewport = o.rendering.kind == OverlayRenderingKind::viewport_relative;
    items.push_back({o.overlay_id, viewport ? DrawGroup::viewport : DrawGroup::sphere, draw_distance(o),
                     o.properties.layering_order});
  }
  std::sort(items.begin(), items.end(), [](const DrawItem& a, const DrawItem& b) {
    if (a.group != b.group) return a.group == DrawGroup::sphere;
    if (a.distance != b.distance) return a.distance > b.distance;
    if (a.layering_order != b.layering_order) return a.layering_order < b.layering_order;
    return a.overlay_id < b.overlay_id;
  });
  return items;
}

std::vector<std::uint32_t> cull_by_priority(std::span<const Overlay> displayed, std::size_t capacity) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> keyed;  // (priority, id)
  std::size_t essential = 0;
  for (const auto& o : displayed) {
    keyed.emplace_back(o.properties.priority, o.overlay_id);
    if (o.properties.priority == 0) ++essential;
  }
  if (capacity < essential) throw EssentialOverflow(essential, capacity);
  std::sort(keyed.begin(), keyed.end());
  keyed.resize(std::min(capacity, keyed.size()));
  std::vector<std::uint32_t> ids;
  for (const auto& [priority, id] : keyed) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Raster Raster::filled(std::uint32_t width, std::uint32_t height, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b, std::uint8_t a) {
  Raster out;
  out.width = width;
  out.height = height;
  out.pixels.resize(4 * std::size_t{width} * height);
  for (std::size_t i = 0; i < out.pixels.size(); i += 4) {
    out.pixels[i] = r;
    out.pixels[i + 1] = g;
    out.pixels[i + 2] = b;
    out.pixels[i + 3] = a;
  }
  return out;
}

// ---- viewpoints ------------------------------------------------------------

PlaybackState initial_state(const Presentation& p, const std::string& viewpoint_id) {
  const auto& v = require_viewpoint(p, viewpoint_id);
  PlaybackState s;
  s.current_viewpoint_id = viewpoint_id;
  s.selection_deadline_ms = default_window(v);
  return s;
}

PlaybackState switch_viewpoint(const Presentation& p, const PlaybackState& state, const SwitchRule& rule) {
  const auto& current = require_viewpoint(p, state.current_viewpoint_id);
  if (std::find(current.switch_rules.begin(), current.switch_rules.end(), rule) == current.switch_rules.end()) {
    throw Error(Errc::usage, "switch rule does not belong to viewpoint '" + state.current_viewpoint_id + "'");
  }
  const auto& target = require_viewpoint(p, rule.target_viewpoint_id);

  PlaybackState next = state;
  next.current_viewpoint_id = target.viewpoint_id;
  switch (rule.timeline_mode) {
    case TimelineMode::continue_time: break;
    case TimelineMode::reset_to_zero: next.media_time_ms = 0; break;
    case TimelineMode::offset: next.media_time_ms = std::max<std::int64_t>(0, rule.offset_ms.value_or(0)); break;
  }
  next.loop_count = 0;
  next.selection_deadline_ms = default_window(target);
  return next;
}

PlaybackState tick(const Presentation& p, const PlaybackState& state, std::int64_t dt_ms,
                   std::optional<std::size_t> user_choice) {
  if (dt_ms < 0) throw Error(Errc::usage, "dt_ms must not be negative");
  PlaybackState s = state;
  if (user_choice) {
    const auto& v = require_viewpoint(p, s.current_viewpoint_id);
    if (*user_choice >= v.switch_rules.size()) {
      throw Error(Errc::usage, "viewpoint '" + v.viewpoint_id + "' has no switch rule " +
                                   std::to_string(*user_choice));
    }
    s = switch_viewpoint(p, s, v.switch_rules[*user_choice]);
  }

  std::int64_t remaining = dt_ms;
  while (true) {
    const auto& v = require_viewpoint(p, s.current_viewpoint_id);
    const LoopInfo* loop = nullptr;
    if (v.loop && s.media_time_ms < v.loop->loop_end_ms &&
        (v.loop->max_loops == 0 || s.loop_count < v.loop->max_loops)) {
      loop = &*v.loop;
    }

    // Whole loops that finish before both the deadline and the end of dt are
    // skipped arithmetically.
    if (loop && s.media_time_ms == loop->loop_start_ms) {
      const std::int64_t length = loop->loop_end_ms - loop->loop_start_ms;
      std::int64_t n = remaining / length;
      if (s.selection_deadline_ms) n = std::min(n, *s.selection_deadline_ms / length);
      if (loop->max_loops != 0) n = std::min<std::int64_t>(n, loop->max_loops - s.loop_count - 1);
      if (n > 0) {
        remaining -= n * length;
        if (s.selection_deadline_ms) *s.selection_deadline_ms -= n * length;
        s.loop_count += static_cast<std::uint32_t>(n);
      }
    }

    std::int64_t step = remaining;
    if (loop) step = std::min(step, loop->loop_end_ms - s.media_time_ms);
    if (s.selection_deadline_ms) step = std::min(step, *s.selection_deadline_ms);

    s.media_time_ms += step;
    remaining -= step;
    if (s.selection_deadline_ms) *s.selection_deadline_ms -= step;

    bool event = false;
    if (loop && s.media_time_ms == loop->loop_end_ms) {
      s.media_time_ms = loop->loop_start_ms;
      ++s.loop_count;
      event = true;
    }
    if (s.selection_deadline_ms && *s.selection_deadline_ms <= 0) {
      const auto* rule = default_rule(v);
      s.selection_deadline_ms.reset();
      if (rule) s = switch_viewpoint(p, s, *rule);
      event = true;
    }
    if (remaining == 0 && !event) break;
  }
  return s;
}

double haversine_m(const GpsPosition& a, const GpsPosition& b) {
  const double dlat = radians(b.latitude - a.latitude);
  const double dlon = radians(b.longitude - a.longitude);
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(radians(a.latitude)) * std::cos(radians(b.latitude)) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

std::string select_viewpoint_by_gps(std::span<const Viewpoint> viewpoints, const GpsPosition& device) {
  std::vector<const Viewpoint*> candidates;
  for (const auto& v : viewpoints) {
    if (v.gps) candidates.push_back(&v);
  }
  if (candidates.empty()) throw Error(Errc::no_candidate, "no viewpoint carries a GPS position");
  std::sort(candidates.begin(), candidates.end(),
            [](const Viewpoint* a, const Viewpoint* b) { return a->viewpoint_id < b->viewpoint_id; });
  const Viewpoint* best = nullptr;
  double best_distance = 0.0;
  for (const auto* v : candidates) {
    const double d = haversine_m(*v->gps, device);
    if (!best || d < best_distance) {
      best = v;
      best_distance = d;
    }
  }
  return best->viewpoint_id;
}

// ---- timed metadata --------------------------------------------------------

std::optional<TimedPayload> sample_timed_metadata(const TimedMetadataTrack& track, std::int64_t t_ms) {
  if (track.samples.empty()) {
    throw Error(Errc::usage, "timed metadata track " + std::to_string(track.track_id) + " has no samples");
  }
  const auto it = std::upper_bound(track.samples.begin(), track.samples.end(), t_ms,
                                   [](std::int64_t t, const TimedSample& s) { return t < s.time_ms; });
  if (it == track.samples.begin()) return std::nullopt;
  return std::prev(it)->payload;
}

// ---- traces ----------------------------------------------------------------

std::vector<TraceStep> trace_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("trace must be a JSON array", 0);
  std::vector<TraceStep> steps;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = "trace[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("dt_ms") || !e["dt_ms"].is_number_integer()) {
      throw ParseError(where + ": expected an object with integer dt_ms", 0);
    }
    TraceStep step;
    step.dt_ms = e["dt_ms"].get<std::int64_t>();
    if (step.dt_ms < 0) throw ParseError(where + ": dt_ms must not be negative", 0);
    if (e.contains("choice")) {
      if (!e["choice"].is_number_unsigned()) throw ParseError(where + ": choice must be a rule index", 0);
      step.choice = e["choice"].get<std::size_t>();
    }
    steps.push_back(step);
  }
  return steps;
}

nlohmann::json to_json(const PlaybackState& s) {
  nlohmann::json j = {{"viewpoint", s.current_viewpoint_id},
                      {"media_time_ms", s.media_time_ms},
                      {"loop_count", s.loop_count}};
  j["selection_deadline_ms"] = s.selection_deadline_ms ? nlohmann::json(*s.selection_deadline_ms) : nullptr;
  return j;
}

std::vector<PlaybackState> replay(const Presentation& p, PlaybackState state, std::span<const TraceStep> steps) {
  std::vector<PlaybackState> out;
  out.reserve(steps.size());
  for (const auto& step : steps) {
    state = tick(p, state, step.dt_ms, step.choice);
    out.push_back(state);
  }
  return out;
}

}  // namespace omaf::playback
