#include "omaf/manifest_json.hpp"

#include <cstdio>
#include <limits>

#include "omaf/error.hpp"

namespace omaf {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError("manifest: " + what, 0); }

const json& member(const json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field '") + key + "'");
  return *it;
}

bool has(const json& j, const char* key) {
  if (!j.is_object()) return false;
  auto it = j.find(key);
  return it != j.end() && !it->is_null();
}

std::uint32_t as_u32(const json& v, const char* key) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    fail(std::string("'") + key + "' must be an unsigned 32-bit integer");
  }
  return v.get<std::uint32_t>();
}

std::int64_t as_i64(const json& v, const char* key) {
  if (!v.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  if (v.is_number_unsigned() &&
      v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    fail(std::string("'") + key + "' is out of range");
  }
  return v.get<std::int64_t>();
}

std::int32_t as_i32(const json& v, const char* key) {
  const auto x = as_i64(v, key);
  if (x < std::numeric_limits<std::int32_t>::min() || x > std::numeric_limits<std::int32_t>::max()) {
    fail(std::string("'") + key + "' must fit a signed 32-bit integer");
  }
  return static_cast<std::int32_t>(x);
}

double as_f64(const json& v, const char* key) {
  if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

bool as_bool(const json& v, const char* key) {
  if (!v.is_boolean()) fail(std::string("'") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const char* key) {
  if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

template <typename Enum>
Enum as_enum(const json& v, const char* key) {
  return enum_from_string<Enum>(as_string(v, key));
}

const json& array_member(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_array()) fail(std::string("'") + key + "' must be an array");
  return v;
}

// Optional helpers: absent or null maps to the default.
std::uint32_t opt_u32(const json& j, const char* key, std::uint32_t def) {
  return has(j, key) ? as_u32(j[key], key) : def;
}
bool opt_bool(const json& j, const char* key, bool def) {
  return has(j, key) ? as_bool(j[key], key) : def;
}
double opt_f64(const json& j, const char* key, double def) {
  return has(j, key) ? as_f64(j[key], key) : def;
}

json dims_json(const PictureDims& d) { return {{"width", d.width}, {"height", d.height}}; }

PictureDims dims_from_json(const json& j) {
  return {as_u32(member(j, "width"), "width"), as_u32(member(j, "height"), "height")};
}

json gps_json(const GpsPosition& g) {
  json j = {{"latitude", g.latitude}, {"longitude", g.longitude}};
  if (g.altitude) j["altitude"] = *g.altitude;
  return j;
}

json position_json(const PositionMm& p) { return {{"x", p.x}, {"y", p.y}, {"z", p.z}}; }

PositionMm position_from_json(const json& j) {
  return {as_i32(member(j, "x"), "x"), as_i32(member(j, "y"), "y"), as_i32(member(j, "z"), "z")};
}

std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> hex_decode(const std::string& text) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (text.size() % 2 != 0) fail("hex payload has odd length");
  std::vector<std::uint8_t> out(text.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(text[2 * i]);
    const int lo = nibble(text[2 * i + 1]);
    if (hi < 0 || lo < 0) fail("invalid hex digit in payload");
    out[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return out;
}

json switch_rule_json(const SwitchRule& r) {
  json j = {{"target_viewpoint_id", r.target_viewpoint_id},
            {"timeline_mode", to_string(r.timeline_mode)},
            {"is_default", r.is_default}};
  if (r.activation_region) j["activation_region"] = to_json(*r.activation_region);
  if (r.offset_ms) j["offset_ms"] = *r.offset_ms;
  if (r.selection_window_ms) j["selection_window_ms"] = *r.selection_window_ms;
  return j;
}

SwitchRule switch_rule_from_json(const json& j) {
  SwitchRule r;
  r.target_viewpoint_id = as_string(member(j, "target_viewpoint_id"), "target_viewpoint_id");
  if (has(j, "activation_region")) r.activation_region = region_from_json(j["activation_region"]);
  if (has(j, "timeline_mode")) r.timeline_mode = as_enum<TimelineMode>(j["timeline_mode"], "timeline_mode");
  if (has(j, "offset_ms")) r.offset_ms = as_i64(j["offset_ms"], "offset_ms");
  r.is_default = opt_bool(j, "is_default", false);
  if (has(j, "selection_window_ms")) {
    r.selection_window_ms = as_u32(j["selection_window_ms"], "selection_window_ms");
  }
  return r;
}

json viewpoint_json(const Viewpoint& v) {
  json j = {{"viewpoint_id", v.viewpoint_id},
            {"label", v.label},
            {"position_xyz", position_json(v.position_xyz)},
            {"orientation",
             {{"yaw", v.orientation.yaw}, {"pitch", v.orientation.pitch}, {"roll", v.orientation.roll}}},
            {"group_id", v.group_id},
            {"dynamic", v.dynamic},
            {"track_ids", v.track_ids}};
  if (v.gps) j["gps"] = gps_json(*v.gps);
  if (v.north_offset) j["north_offset"] = *v.north_offset;
  json rules = json::array();
  for (const auto& r : v.switch_rules) rules.push_back(switch_rule_json(r));
  j["switch_rules"] = std::move(rules);
  if (v.loop) {
    j["loop"] = {{"loop_start_ms", v.loop->loop_start_ms},
                 {"loop_end_ms", v.loop->loop_end_ms},
                 {"max_loops", v.loop->max_loops}};
  }
  return j;
}

Viewpoint viewpoint_from_json(const json& j) {
  Viewpoint v;
  v.viewpoint_id = as_string(member(j, "viewpoint_id"), "viewpoint_id");
  if (has(j, "label")) v.label = as_string(j["label"], "label");
  if (has(j, "position_xyz")) v.position_xyz = position_from_json(j["position_xyz"]);
  if (has(j, "gps")) v.gps = gps_from_json(j["gps"]);
  if (has(j, "orientation")) {
    const json& o = j["orientation"];
    v.orientation = {opt_f64(o, "yaw", 0.0), opt_f64(o, "pitch", 0.0), opt_f64(o, "roll", 0.0)};
  }
  if (has(j, "north_offset")) v.north_offset = as_f64(j["north_offset"], "north_offset");
  v.group_id = opt_u32(j, "group_id", 0);
  if (has(j, "switch_rules")) {
    for (const auto& r : array_member(j, "switch_rules")) v.switch_rules.push_back(switch_rule_from_json(r));
  }
  if (has(j, "loop")) {
    const json& l = j["loop"];
    v.loop = LoopInfo{as_i64(member(l, "loop_start_ms"), "loop_start_ms"),
                      as_i64(member(l, "loop_end_ms"), "loop_end_ms"), opt_u32(l, "max_loops", 0)};
  }
  v.dynamic = opt_bool(j, "dynamic", false);
  if (has(j, "track_ids")) {
    for (const auto& id : array_member(j, "track_ids")) v.track_ids.push_back(as_u32(id, "track_ids"));
  }
  return v;
}

json overlay_json(const Overlay& o) {
  json source = {{"kind", to_string(o.source.kind)}};
  if (o.source.ref_id) source["ref_id"] = *o.source.ref_id;
  if (o.source.region) source["region"] = to_json(*o.source.region);

  json rendering = {{"kind", to_string(o.rendering.kind)}};
  if (const auto& n = o.rendering.viewport_rect) {
    rendering["viewport_rect"] = {{"x", n->x}, {"y", n->y}, {"width", n->width}, {"height", n->height}};
  }
  if (o.rendering.sphere_position) rendering["sphere_position"] = to_json(*o.rendering.sphere_position);
  if (const auto& pl = o.rendering.plane_position) {
    rendering["plane_position"] = {{"center", to_json(pl->center)},
                                   {"distance", pl->distance},
                                   {"width", pl->width},
                                   {"height", pl->height}};
  }

  json controls = json::array();
  for (auto c : o.interaction.allowed_controls) controls.push_back(to_string(c));
  json interaction = {{"allowed_controls", std::move(controls)}};
  if (o.interaction.label) interaction["label"] = *o.interaction.label;
  if (o.interaction.toggle_region) interaction["toggle_region"] = to_json(*o.interaction.toggle_region);

  return {{"overlay_id", o.overlay_id},
          {"source", std::move(source)},
          {"rendering", std::move(rendering)},
          {"properties",
           {{"layering_order", o.properties.layering_order},
            {"opacity", o.properties.opacity},
            {"priority", o.properties.priority},
            {"has_alpha_plane", o.properties.has_alpha_plane}}},
          {"interaction", std::move(interaction)},
          {"controls_timing", to_string(o.controls_timing)}};
}

Overlay overlay_from_json(const json& j) {
  Overlay o;
  o.overlay_id = as_u32(member(j, "overlay_id"), "overlay_id");

  const json& s = member(j, "source");
  o.source.kind = as_enum<OverlaySourceKind>(member(s, "kind"), "kind");
  if (has(s, "ref_id")) o.source.ref_id = as_u32(s["ref_id"], "ref_id");
  if (has(s, "region")) o.source.region = rect_from_json(s["region"]);

  const json& r = member(j, "rendering");
  o.rendering.kind = as_enum<OverlayRenderingKind>(member(r, "kind"), "kind");
  if (has(r, "viewport_rect")) {
    const json& n = r["viewport_rect"];
    o.rendering.viewport_rect = NormalizedRect{as_f64(member(n, "x"), "x"), as_f64(member(n, "y"), "y"),
                                               as_f64(member(n, "width"), "width"),
                                               as_f64(member(n, "height"), "height")};
  }
  if (has(r, "sphere_position")) o.rendering.sphere_position = region_from_json(r["sphere_position"]);
  if (has(r, "plane_position")) {
    const json& pl = r["plane_position"];
    o.rendering.plane_position =
        PlanePosition{orientation_from_json(member(pl, "center")), as_f64(member(pl, "distance"), "distance"),
                      as_f64(member(pl, "width"), "width"), as_f64(member(pl, "height"), "height")};
  }

  if (has(j, "properties")) {
    const json& p = j["properties"];
    if (has(p, "layering_order")) o.properties.layering_order = as_i32(p["layering_order"], "layering_order");
    o.properties.opacity = opt_f64(p, "opacity", 1.0);
    o.properties.priority = opt_u32(p, "priority", 0);
    o.properties.has_alpha_plane = opt_bool(p, "has_alpha_plane", false);
  }
  if (has(j, "interaction")) {
    const json& in = j["interaction"];
    if (has(in, "allowed_controls")) {
      for (const auto& c : array_member(in, "allowed_controls")) {
        o.interaction.allowed_controls.insert(as_enum<OverlayControl>(c, "allowed_controls"));
      }
    }
    if (has(in, "label")) o.interaction.label = as_string(in["label"], "label");
    if (has(in, "toggle_region")) o.interaction.toggle_region = region_from_json(in["toggle_region"]);
  }
  if (has(j, "controls_timing")) {
    o.controls_timing = as_enum<ControlsTiming>(j["controls_timing"], "controls_timing");
  }
  return o;
}

json payload_json(const TimedPayload& payload) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ViewingOrientation>) {
          return to_json(v);
        } else if constexpr (std::is_same_v<T, SphereRegion>) {
          return to_json(v);
        } else if constexpr (std::is_same_v<T, RwqrPayload>) {
          json entries = json::array();
          for (const auto& e : v.entries) {
            json region = std::holds_alternative<SphereRegion>(e.region)
                              ? to_json(std::get<SphereRegion>(e.region))
                              : to_json(std::get<Rect2D>(e.region));
            entries.push_back({{"region", std::move(region)}, {"quality_rank", e.quality_rank}});
          }
          return {{"entries", std::move(entries)}};
        } else if constexpr (std::is_same_v<T, ErpRegionPayload>) {
          return {{"grid_cols", v.grid_cols},
                  {"grid_rows", v.grid_rows},
                  {"cell_values", v.cell_values},
                  {"value_kind", to_string(v.value_kind)}};
        } else if constexpr (std::is_same_v<T, DynamicViewpointSample>) {
          json j = {{"viewpoint_id", v.viewpoint_id}, {"position_xyz", position_json(v.position_xyz)}};
          if (v.gps) j["gps"] = gps_json(*v.gps);
          return j;
        } else {
          json j = {{"overlay_id", v.overlay_id}, {"active", v.active}};
          if (v.opacity) j["opacity"] = *v.opacity;
          return j;
        }
      },
      payload);
}

TimedPayload payload_from_json(MetadataKind kind, const json& j) {
  switch (kind) {
    case MetadataKind::initial_viewing_orientation:
      return orientation_from_json(j);
    case MetadataKind::recommended_viewport:
      return region_from_json(j);
    case MetadataKind::rwqr: {
      RwqrPayload p;
      for (const auto& e : array_member(j, "entries")) {
        const json& region = member(e, "region");
        RwqrEntry entry;
        if (has(region, "center")) {
          entry.region = region_from_json(region);
        } else {
          entry.region = rect_from_json(region);
        }
        entry.quality_rank = as_u32(member(e, "quality_rank"), "quality_rank");
        p.entries.push_back(std::move(entry));
      }
      return p;
    }
    case MetadataKind::erp_region:
      return erp_region_from_json(j);
    case MetadataKind::dynamic_viewpoint: {
      DynamicViewpointSample d;
      d.viewpoint_id = as_string(member(j, "viewpoint_id"), "viewpoint_id");
      if (has(j, "position_xyz")) d.position_xyz = position_from_json(j["position_xyz"]);
      if (has(j, "gps")) d.gps = gps_from_json(j["gps"]);
      return d;
    }
    case MetadataKind::overlay_controls: {
      OverlayControlSample c;
      c.overlay_id = as_u32(member(j, "overlay_id"), "overlay_id");
      c.active = opt_bool(j, "active", true);
      if (has(j, "opacity")) c.opacity = as_f64(j["opacity"], "opacity");
      return c;
    }
  }
  fail("unknown metadata kind");
}

Presentation from_json_impl(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  Presentation p;
  if (has(j, "brands")) {
    for (const auto& b : array_member(j, "brands")) p.brands.insert(as_string(b, "brands"));
  }
  if (has(j, "tracks")) {
    for (const auto& t : array_member(j, "tracks")) p.tracks.push_back(track_from_json(t));
  }
  if (has(j, "viewpoints")) {
    for (const auto& v : array_member(j, "viewpoints")) p.viewpoints.push_back(viewpoint_from_json(v));
  }
  if (has(j, "overlays")) {
    for (const auto& o : array_member(j, "overlays")) p.overlays.push_back(overlay_from_json(o));
  }
  if (has(j, "timed_metadata")) {
    for (const auto& t : array_member(j, "timed_metadata")) {
      TimedMetadataTrack track;
      track.track_id = as_u32(member(t, "track_id"), "track_id");
      track.kind = as_enum<MetadataKind>(member(t, "kind"), "kind");
      if (has(t, "samples")) {
        for (const auto& s : array_member(t, "samples")) {
          track.samples.push_back(
              {as_i64(member(s, "time_ms"), "time_ms"), payload_from_json(track.kind, member(s, "payload"))});
        }
      }
      p.timed_metadata.push_back(std::move(track));
    }
  }
  if (has(j, "tile_groups")) {
    for (const auto& g : array_member(j, "tile_groups")) p.tile_groups.push_back(tile_group_from_json(g));
  }
  if (has(j, "viewing_space")) {
    const json& vs = j["viewing_space"];
    ViewingSpace space;
    space.shape = as_enum<ViewingSpaceShape>(member(vs, "shape"), "shape");
    for (const auto& e : array_member(vs, "extent_mm")) space.extent_mm.push_back(as_u32(e, "extent_mm"));
    p.viewing_space = std::move(space);
  }
  if (has(j, "extras")) {
    for (const auto& e : array_member(j, "extras")) {
      const std::string fourcc = as_string(member(e, "fourcc"), "fourcc");
      if (fourcc.size() != 4) fail("extras fourcc must be 4 characters");
      OpaqueBox box;
      std::copy(fourcc.begin(), fourcc.end(), box.fourcc.begin());
      box.payload = hex_decode(as_string(member(e, "payload_hex"), "payload_hex"));
      box.position = opt_u32(e, "position", 0);
      p.extras.push_back(std::move(box));
    }
  }
  return p;
}

}  // namespace

json to_json(const ViewingOrientation& o) {
  return {{"azimuth", o.azimuth}, {"elevation", o.elevation}, {"tilt", o.tilt}};
}

json to_json(const SphereRegion& r) {
  return {{"center", to_json(r.center)},
          {"azimuth_range", r.azimuth_range},
          {"elevation_range", r.elevation_range}};
}

json to_json(const Rect2D& r) {
  return {{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

json to_json(const TrackDescriptor& t) {
  json j = {{"track_id", t.track_id},
            {"media_kind", to_string(t.media_kind)},
            {"codec", to_string(t.codec)},
            {"stereo", t.stereo}};
  if (t.level) j["level"] = to_string(*t.level);
  if (t.projection) j["projection"] = to_string(*t.projection);
  if (t.dims) j["dims"] = dims_json(*t.dims);
  if (t.coverage) j["coverage"] = to_json(*t.coverage);
  if (t.sample_rate_hz) j["sample_rate_hz"] = *t.sample_rate_hz;
  return j;
}

json to_json(const TileGroup& g) {
  json members = json::array();
  for (const auto& m : g.members) {
    members.push_back({{"track_id", m.track_id},
                       {"grid_position", {{"col", m.col}, {"row", m.row}}},
                       {"source_rect", to_json(m.source_rect)}});
  }
  return {{"group_id", g.group_id}, {"members", std::move(members)}};
}

json to_json(const Presentation& p) {
  json j;
  j["brands"] = json(p.brands);
  json tracks = json::array();
  for (const auto& t : p.tracks) tracks.push_back(to_json(t));
  j["tracks"] = std::move(tracks);
  json viewpoints = json::array();
  for (const auto& v : p.viewpoints) viewpoints.push_back(viewpoint_json(v));
  j["viewpoints"] = std::move(viewpoints);
  json overlays = json::array();
  for (const auto& o : p.overlays) overlays.push_back(overlay_json(o));
  j["overlays"] = std::move(overlays);
  json metadata = json::array();
  for (const auto& t : p.timed_metadata) {
    json samples = json::array();
    for (const auto& s : t.samples) samples.push_back({{"time_ms", s.time_ms}, {"payload", payload_json(s.payload)}});
    metadata.push_back({{"track_id", t.track_id}, {"kind", to_string(t.kind)}, {"samples", std::move(samples)}});
  }
  j["timed_metadata"] = std::move(metadata);
  json groups = json::array();
  for (const auto& g : p.tile_groups) groups.push_back(to_json(g));
  j["tile_groups"] = std::move(groups);
  if (p.viewing_space) {
    j["viewing_space"] = {{"shape", to_string(p.viewing_space->shape)},
                          {"extent_mm", p.viewing_space->extent_mm}};
  }
  if (!p.extras.empty()) {
    json extras = json::array();
    for (const auto& e : p.extras) {
      extras.push_back({{"fourcc", std::string(e.fourcc.begin(), e.fourcc.end())},
                        {"payload_hex", hex_encode(e.payload)},
                        {"position", e.position}});
    }
    j["extras"] = std::move(extras);
  }
  return j;
}

ViewingOrientation orientation_from_json(const json& j) {
  return {as_f64(member(j, "azimuth"), "azimuth"), as_f64(member(j, "elevation"), "elevation"),
          opt_f64(j, "tilt", 0.0)};
}

SphereRegion region_from_json(const json& j) {
  return {orientation_from_json(member(j, "center")), as_f64(member(j, "azimuth_range"), "azimuth_range"),
          as_f64(member(j, "elevation_range"), "elevation_range")};
}

Rect2D rect_from_json(const json& j) {
  return {as_u32(member(j, "x"), "x"), as_u32(member(j, "y"), "y"), as_u32(member(j, "width"), "width"),
          as_u32(member(j, "height"), "height")};
}

GpsPosition gps_from_json(const json& j) {
  GpsPosition g{as_f64(member(j, "latitude"), "latitude"), as_f64(member(j, "longitude"), "longitude"),
                std::nullopt};
  if (has(j, "altitude")) g.altitude = as_f64(j["altitude"], "altitude");
  return g;
}

TrackDescriptor track_from_json(const json& j) {
  TrackDescriptor t;
  t.track_id = as_u32(member(j, "track_id"), "track_id");
  t.media_kind = as_enum<MediaKind>(member(j, "media_kind"), "media_kind");
  t.codec = as_enum<Codec>(member(j, "codec"), "codec");
  if (has(j, "level")) {
    const json& l = j["level"];
    // Accept 5.1 as a number as well as "5.1"; the string form is canonical.
    if (l.is_number()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", l.get<double>());
      t.level = parse_level(buf);
    } else {
      t.level = parse_level(as_string(l, "level"));
    }
  }
  if (has(j, "projection")) t.projection = as_enum<Projection>(j["projection"], "projection");
  t.stereo = opt_bool(j, "stereo", false);
  if (has(j, "dims")) t.dims = dims_from_json(j["dims"]);
  if (has(j, "coverage")) t.coverage = region_from_json(j["coverage"]);
  if (has(j, "sample_rate_hz")) t.sample_rate_hz = as_u32(j["sample_rate_hz"], "sample_rate_hz");
  return t;
}

TileGroup tile_group_from_json(const json& j) {
  TileGroup g;
  g.group_id = opt_u32(j, "group_id", 0);
  for (const auto& m : array_member(j, "members")) {
    const json& pos = member(m, "grid_position");
    g.members.push_back({as_u32(member(m, "track_id"), "track_id"), as_u32(member(pos, "col"), "col"),
                         as_u32(member(pos, "row"), "row"), rect_from_json(member(m, "source_rect"))});
  }
  return g;
}

ErpRegionPayload erp_region_from_json(const json& j) {
  ErpRegionPayload p;
  p.grid_cols = as_u32(member(j, "grid_cols"), "grid_cols");
  p.grid_rows = as_u32(member(j, "grid_rows"), "grid_rows");
  for (const auto& v : array_member(j, "cell_values")) p.cell_values.push_back(as_u32(v, "cell_values"));
  if (has(j, "value_kind")) p.value_kind = as_enum<ErpValueKind>(j["value_kind"], "value_kind");
  return p;
}

Presentation presentation_from_json(const json& j) {
  try {
    return from_json_impl(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

std::string write_manifest(const Presentation& p) { return to_json(p).dump(2) + "\n"; }

Presentation read_manifest(std::string_view text) { return presentation_from_json(parse_json_text(text)); }

}  // namespace omaf
