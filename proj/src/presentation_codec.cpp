#include <algorithm>
#include <bit>
#include <cstring>

#include "omaf/codec.hpp"
#include "omaf/error.hpp"
#include "omaf/validate.hpp"

namespace omaf::codec {

namespace {

constexpr FourCC kHeader = fourcc("omhd");
constexpr FourCC kTrack = fourcc("trkd");
constexpr FourCC kViewpoint = fourcc("vwpt");
constexpr FourCC kViewpointInfo = fourcc("vpif");
constexpr FourCC kSwitchRule = fourcc("swrl");
constexpr FourCC kViewpointLoop = fourcc("vplp");
constexpr FourCC kOverlay = fourcc("ovly");
constexpr FourCC kTimedMetadata = fourcc("tmtd");
constexpr FourCC kTimedHeader = fourcc("tmhd");
constexpr FourCC kTimedSample = fourcc("tmsp");
constexpr FourCC kTileGroup = fourcc("tilg");
constexpr FourCC kViewingSpace = fourcc("vwsp");

bool is_registered(const FourCC& t) {
  for (const auto& known : {kHeader, kTrack, kViewpoint, kViewpointInfo, kSwitchRule, kViewpointLoop,
                            kOverlay, kTimedMetadata, kTimedHeader, kTimedSample, kTileGroup,
                            kViewingSpace}) {
    if (t == known) return true;
  }
  return false;
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  void u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v >> 32));
    u32(static_cast<std::uint32_t>(v));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void boolean(bool v) { u8(v ? 1 : 0); }
  void angle(double degrees) { i32(angle_to_fixed(degrees)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  template <typename T, typename F>
  void opt(const std::optional<T>& v, F&& write) {
    boolean(v.has_value());
    if (v) write(*v);
  }

  void orientation(const ViewingOrientation& o) {
    angle(o.azimuth);
    angle(o.elevation);
    angle(o.tilt);
  }
  void region(const SphereRegion& r) {
    orientation(r.center);
    angle(r.azimuth_range);
    angle(r.elevation_range);
  }
  void rect(const Rect2D& r) {
    u32(r.x);
    u32(r.y);
    u32(r.width);
    u32(r.height);
  }
  void position(const PositionMm& p) {
    i32(p.x);
    i32(p.y);
    i32(p.z);
  }
  void gps(const GpsPosition& g) {
    f64(g.latitude);
    f64(g.longitude);
    opt(g.altitude, [&](double a) { f64(a); });
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t base, FourCC type)
      : bytes_(bytes), base_(base), type_(type) {}

  std::uint8_t u8(const char* field) { return take(1, field)[0]; }
  std::uint16_t u16(const char* field) {
    const auto* p = take(2, field);
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
  }
  std::uint32_t u32(const char* field) {
    const auto* p = take(4, field);
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
           std::uint32_t{p[3]};
  }
  std::uint64_t u64(const char* field) {
    const std::uint64_t hi = u32(field);
    return (hi << 32) | u32(field);
  }
  std::int32_t i32(const char* field) { return static_cast<std::int32_t>(u32(field)); }
  std::int64_t i64(const char* field) { return static_cast<std::int64_t>(u64(field)); }
  double f64(const char* field) { return std::bit_cast<double>(u64(field)); }
  bool boolean(const char* field) {
    const auto at = pos_;
    const auto v = u8(field);
    if (v > 1) fail_at(at, std::string("flag '") + field + "' must be 0 or 1");
    return v == 1;
  }
  double angle(const char* field) { return fixed_to_angle(i32(field)); }
  std::string str(const char* field) {
    const auto n = u32(field);
    const auto* p = take(n, field);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  template <typename Enum>
  Enum enumeration(const char* field, std::size_t count) {
    const auto at = pos_;
    const auto v = u8(field);
    if (v >= count) fail_at(at, std::string("invalid value for '") + field + "'");
    return static_cast<Enum>(v);
  }
  template <typename F>
  auto opt(const char* field, F&& read) -> std::optional<decltype(read())> {
    if (!boolean(field)) return std::nullopt;
    return read();
  }
  // Guards list counts against absurd allocations: each item needs at least
  // `min_item_size` bytes.
  std::uint32_t count(const char* field, std::size_t min_item_size) {
    const auto at = pos_;
    const auto n = u32(field);
    if (min_item_size > 0 && n > (bytes_.size() - pos_) / min_item_size) {
      fail_at(at, std::string("list '") + field + "' declares more items than the payload holds", field);
    }
    return n;
  }

  ViewingOrientation orientation(const char* field) {
    ViewingOrientation o;
    o.azimuth = angle(field);
    o.elevation = angle(field);
    o.tilt = angle(field);
    return o;
  }
  SphereRegion region(const char* field) {
    SphereRegion r;
    r.center = orientation(field);
    r.azimuth_range = angle(field);
    r.elevation_range = angle(field);
    return r;
  }
  Rect2D rect(const char* field) {
    Rect2D r;
    r.x = u32(field);
    r.y = u32(field);
    r.width = u32(field);
    r.height = u32(field);
    return r;
  }
  PositionMm position(const char* field) {
    PositionMm p;
    p.x = i32(field);
    p.y = i32(field);
    p.z = i32(field);
    return p;
  }
  GpsPosition gps(const char* field) {
    GpsPosition g;
    g.latitude = f64(field);
    g.longitude = f64(field);
    g.altitude = opt(field, [&] { return f64(field); });
    return g;
  }

  void finish() {
    if (pos_ != bytes_.size()) {
      fail_at(pos_, std::to_string(bytes_.size() - pos_) + " trailing bytes");
    }
  }

 private:
  const std::uint8_t* take(std::size_t n, const char* field) {
    if (n > bytes_.size() - pos_) {
      fail_at(pos_, std::string("payload too short: missing field '") + field + "'", field);
    }
    const auto* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  [[noreturn]] void fail_at(std::size_t at, const std::string& message, const char* field = "") {
    throw ParseError("'" + to_string(type_) + "': " + message, base_ + at, to_string(type_), field);
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t base_;
  FourCC type_;
  std::size_t pos_ = 0;
};

Box raw_box(FourCC type, Writer& w) { return Box{type, w.take()}; }

// ---- encoding -------------------------------------------------------------

Box encode_header(const Presentation& p) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(kFormatVersion));
  w.u8(0);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(p.brands.size()));
  for (const auto& b : p.brands) w.str(b);
  return raw_box(kHeader, w);
}

Box encode_track(const TrackDescriptor& t) {
  Writer w;
  w.u32(t.track_id);
  w.u8(static_cast<std::uint8_t>(t.media_kind));
  w.u8(static_cast<std::uint8_t>(t.codec));
  w.opt(t.level, [&](Level l) {
    w.u8(l.major);
    w.u8(l.minor);
  });
  w.opt(t.projection, [&](Projection pr) { w.u8(static_cast<std::uint8_t>(pr)); });
  w.boolean(t.stereo);
  w.opt(t.dims, [&](const PictureDims& d) {
    w.u32(d.width);
    w.u32(d.height);
  });
  w.opt(t.coverage, [&](const SphereRegion& r) { w.region(r); });
  w.opt(t.sample_rate_hz, [&](std::uint32_t hz) { w.u32(hz); });
  return raw_box(kTrack, w);
}

Box encode_viewpoint(const Viewpoint& v) {
  std::vector<Box> children;
  {
    Writer w;
    w.str(v.viewpoint_id);
    w.str(v.label);
    w.position(v.position_xyz);
    w.opt(v.gps, [&](const GpsPosition& g) { w.gps(g); });
    w.angle(v.orientation.yaw);
    w.angle(v.orientation.pitch);
    w.angle(v.orientation.roll);
    w.opt(v.north_offset, [&](double d) { w.angle(d); });
    w.u32(v.group_id);
    w.boolean(v.dynamic);
    w.u32(static_cast<std::uint32_t>(v.track_ids.size()));
    for (auto id : v.track_ids) w.u32(id);
    children.push_back(raw_box(kViewpointInfo, w));
  }
  for (const auto& r : v.switch_rules) {
    Writer w;
    w.str(r.target_viewpoint_id);
    w.opt(r.activation_region, [&](const SphereRegion& reg) { w.region(reg); });
    w.u8(static_cast<std::uint8_t>(r.timeline_mode));
    w.opt(r.offset_ms, [&](std::int64_t ms) { w.i64(ms); });
    w.boolean(r.is_default);
    w.opt(r.selection_window_ms, [&](std::uint32_t ms) { w.u32(ms); });
    children.push_back(raw_box(kSwitchRule, w));
  }
  if (v.loop) {
    Writer w;
    w.i64(v.loop->loop_start_ms);
    w.i64(v.loop->loop_end_ms);
    w.u32(v.loop->max_loops);
    children.push_back(raw_box(kViewpointLoop, w));
  }
  return Box{kViewpoint, std::move(children)};
}

std::uint8_t control_mask(const std::set<OverlayControl>& controls) {
  std::uint8_t mask = 0;
  for (auto c : controls) mask |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  return mask;
}

Box encode_overlay(const Overlay& o) {
  Writer w;
  w.u32(o.overlay_id);

  w.u8(static_cast<std::uint8_t>(o.source.kind));
  w.opt(o.source.ref_id, [&](std::uint32_t id) { w.u32(id); });
  w.opt(o.source.region, [&](const Rect2D& r) { w.rect(r); });

  w.u8(static_cast<std::uint8_t>(o.rendering.kind));
  w.opt(o.rendering.viewport_rect, [&](const NormalizedRect& n) {
    w.f64(n.x);
    w.f64(n.y);
    w.f64(n.width);
    w.f64(n.height);
  });
  w.opt(o.rendering.sphere_position, [&](const SphereRegion& r) { w.region(r); });
  w.opt(o.rendering.plane_position, [&](const PlanePosition& pl) {
    w.orientation(pl.center);
    w.f64(pl.distance);
    w.f64(pl.width);
    w.f64(pl.height);
  });

  w.i32(o.properties.layering_order);
  w.f64(o.properties.opacity);
  w.u32(o.properties.priority);
  w.boolean(o.properties.has_alpha_plane);

  w.u8(control_mask(o.interaction.allowed_controls));
  w.opt(o.interaction.label, [&](const std::string& s) { w.str(s); });
  w.opt(o.interaction.toggle_region, [&](const SphereRegion& r) { w.region(r); });

  w.u8(static_cast<std::uint8_t>(o.controls_timing));
  return raw_box(kOverlay, w);
}

void encode_payload(Writer& w, const TimedPayload& payload) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ViewingOrientation>) {
          w.orientation(v);
        } else if constexpr (std::is_same_v<T, SphereRegion>) {
          w.region(v);
        } else if constexpr (std::is_same_v<T, RwqrPayload>) {
          w.u32(static_cast<std::uint32_t>(v.entries.size()));
          for (const auto& e : v.entries) {
            if (const auto* r = std::get_if<SphereRegion>(&e.region)) {
              w.u8(0);
              w.region(*r);
            } else {
              w.u8(1);
              w.rect(std::get<Rect2D>(e.region));
            }
            w.u32(e.quality_rank);
          }
        } else if constexpr (std::is_same_v<T, ErpRegionPayload>) {
          w.u32(v.grid_cols);
          w.u32(v.grid_rows);
          w.u8(static_cast<std::uint8_t>(v.value_kind));
          w.u32(static_cast<std::uint32_t>(v.cell_values.size()));
          for (auto c : v.cell_values) w.u32(c);
        } else if constexpr (std::is_same_v<T, DynamicViewpointSample>) {
          w.str(v.viewpoint_id);
          w.position(v.position_xyz);
          w.opt(v.gps, [&](const GpsPosition& g) { w.gps(g); });
        } else {
          w.u32(v.overlay_id);
          w.boolean(v.active);
          w.opt(v.opacity, [&](double o) { w.f64(o); });
        }
      },
      payload);
}

Box encode_timed_metadata(const TimedMetadataTrack& t) {
  std::vector<Box> children;
  {
    Writer w;
    w.u32(t.track_id);
    w.u8(static_cast<std::uint8_t>(t.kind));
    children.push_back(raw_box(kTimedHeader, w));
  }
  for (const auto& s : t.samples) {
    Writer w;
    w.i64(s.time_ms);
    encode_payload(w, s.payload);
    children.push_back(raw_box(kTimedSample, w));
  }
  return Box{kTimedMetadata, std::move(children)};
}

Box encode_tile_group(const TileGroup& g) {
  Writer w;
  w.u32(g.group_id);
  w.u32(static_cast<std::uint32_t>(g.members.size()));
  for (const auto& m : g.members) {
    w.u32(m.track_id);
    w.u32(m.col);
    w.u32(m.row);
    w.rect(m.source_rect);
  }
  return raw_box(kTileGroup, w);
}

Box encode_viewing_space(const ViewingSpace& vs) {
  Writer w;
  w.u8(static_cast<std::uint8_t>(vs.shape));
  w.u32(static_cast<std::uint32_t>(vs.extent_mm.size()));
  for (auto e : vs.extent_mm) w.u32(e);
  return raw_box(kViewingSpace, w);
}

// ---- decoding -------------------------------------------------------------

struct Located {
  const Box* box;
  std::size_t offset;  // absolute offset of the box header
};

std::vector<Located> locate(const std::vector<Box>& boxes, std::size_t base) {
  std::vector<Located> out;
  std::size_t offset = base;
  for (const auto& b : boxes) {
    out.push_back({&b, offset});
    offset += static_cast<std::size_t>(b.encoded_size());
  }
  return out;
}

Reader reader_for(const Located& l) { return Reader(l.box->bytes(), l.offset + 8, l.box->type); }

[[noreturn]] void structure_error(const Located& l, const std::string& message) {
  throw ParseError("'" + to_string(l.box->type) + "': " + message, l.offset, to_string(l.box->type));
}

void decode_header(const Located& l, Presentation& p) {
  Reader r = reader_for(l);
  const auto version = r.u8("version");
  if (version != kFormatVersion) structure_error(l, "unsupported format version " + std::to_string(version));
  r.u8("flags");
  r.u16("reserved");
  const auto n = r.count("brands", 4);
  for (std::uint32_t i = 0; i < n; ++i) p.brands.insert(r.str("brands"));
  r.finish();
}

TrackDescriptor decode_track(const Located& l) {
  Reader r = reader_for(l);
  TrackDescriptor t;
  t.track_id = r.u32("track_id");
  t.media_kind = r.enumeration<MediaKind>("media_kind", 5);
  t.codec = r.enumeration<Codec>("codec", 10);
  t.level = r.opt("level", [&] {
    Level lv;
    lv.major = r.u8("level");
    lv.minor = r.u8("level");
    return lv;
  });
  t.projection = r.opt("projection", [&] { return r.enumeration<Projection>("projection", 5); });
  t.stereo = r.boolean("stereo");
  t.dims = r.opt("dims", [&] {
    PictureDims d;
    d.width = r.u32("dims");
    d.height = r.u32("dims");
    return d;
  });
  t.coverage = r.opt("coverage", [&] { return r.region("coverage"); });
  t.sample_rate_hz = r.opt("sample_rate_hz", [&] { return r.u32("sample_rate_hz"); });
  r.finish();
  return t;
}

Viewpoint decode_viewpoint(const Located& l) {
  const auto children = locate(l.box->children(), l.offset + 8);
  if (children.empty() || children[0].box->type != kViewpointInfo) {
    structure_error(l, "first child must be 'vpif'");
  }
  Viewpoint v;
  {
    Reader r = reader_for(children[0]);
    v.viewpoint_id = r.str("viewpoint_id");
    v.label = r.str("label");
    v.position_xyz = r.position("position_xyz");
    v.gps = r.opt("gps", [&] { return r.gps("gps"); });
    v.orientation.yaw = r.angle("orientation");
    v.orientation.pitch = r.angle("orientation");
    v.orientation.roll = r.angle("orientation");
    v.north_offset = r.opt("north_offset", [&] { return r.angle("north_offset"); });
    v.group_id = r.u32("group_id");
    v.dynamic = r.boolean("dynamic");
    const auto n = r.count("track_ids", 4);
    for (std::uint32_t i = 0; i < n; ++i) v.track_ids.push_back(r.u32("track_ids"));
    r.finish();
  }
  bool loop_seen = false;
  for (std::size_t i = 1; i < children.size(); ++i) {
    const auto& c = children[i];
    if (c.box->type == kSwitchRule && !loop_seen) {
      Reader r = reader_for(c);
      SwitchRule rule;
      rule.target_viewpoint_id = r.str("target_viewpoint_id");
      rule.activation_region = r.opt("activation_region", [&] { return r.region("activation_region"); });
      rule.timeline_mode = r.enumeration<TimelineMode>("timeline_mode", 3);
      rule.offset_ms = r.opt("offset_ms", [&] { return r.i64("offset_ms"); });
      rule.is_default = r.boolean("is_default");
      rule.selection_window_ms = r.opt("selection_window_ms", [&] { return r.u32("selection_window_ms"); });
      r.finish();
      v.switch_rules.push_back(std::move(rule));
    } else if (c.box->type == kViewpointLoop && !loop_seen) {
      Reader r = reader_for(c);
      LoopInfo loop;
      loop.loop_start_ms = r.i64("loop_start_ms");
      loop.loop_end_ms = r.i64("loop_end_ms");
      loop.max_loops = r.u32("max_loops");
      r.finish();
      v.loop = loop;
      loop_seen = true;
    } else {
      structure_error(c, "unexpected child of 'vwpt'");
    }
  }
  return v;
}

Overlay decode_overlay(const Located& l) {
  Reader r = reader_for(l);
  Overlay o;
  o.overlay_id = r.u32("overlay_id");

  o.source.kind = r.enumeration<OverlaySourceKind>("source.kind", 6);
  o.source.ref_id = r.opt("source.ref_id", [&] { return r.u32("source.ref_id"); });
  o.source.region = r.opt("source.region", [&] { return r.rect("source.region"); });

  o.rendering.kind = r.enumeration<OverlayRenderingKind>("rendering.kind", 4);
  o.rendering.viewport_rect = r.opt("rendering.viewport_rect", [&] {
    NormalizedRect n;
    n.x = r.f64("rendering.viewport_rect");
    n.y = r.f64("rendering.viewport_rect");
    n.width = r.f64("rendering.viewport_rect");
    n.height = r.f64("rendering.viewport_rect");
    return n;
  });
  o.rendering.sphere_position =
      r.opt("rendering.sphere_position", [&] { return r.region("rendering.sphere_position"); });
  o.rendering.plane_position = r.opt("rendering.plane_position", [&] {
    PlanePosition pl;
    pl.center = r.orientation("rendering.plane_position");
    pl.distance = r.f64("rendering.plane_position");
    pl.width = r.f64("rendering.plane_position");
    pl.height = r.f64("rendering.plane_position");
    return pl;
  });

  o.properties.layering_order = r.i32("properties.layering_order");
  o.properties.opacity = r.f64("properties.opacity");
  o.properties.priority = r.u32("properties.priority");
  o.properties.has_alpha_plane = r.boolean("properties.has_alpha_plane");

  const auto mask = r.u8("interaction.allowed_controls");
  if (mask >= (1u << 5)) structure_error(l, "unknown bits in interaction.allowed_controls");
  for (unsigned bit = 0; bit < 5; ++bit) {
    if (mask & (1u << bit)) o.interaction.allowed_controls.insert(static_cast<OverlayControl>(bit));
  }
  o.interaction.label = r.opt("interaction.label", [&] { return r.str("interaction.label"); });
  o.interaction.toggle_region =
      r.opt("interaction.toggle_region", [&] { return r.region("interaction.toggle_region"); });

  o.controls_timing = r.enumeration<ControlsTiming>("controls_timing", 2);
  r.finish();
  return o;
}

TimedPayload decode_payload(Reader& r, MetadataKind kind) {
  switch (kind) {
    case MetadataKind::initial_viewing_orientation:
      return r.orientation("payload");
    case MetadataKind::recommended_viewport:
      return r.region("payload");
    case MetadataKind::rwqr: {
      RwqrPayload p;
      const auto n = r.count("entries", 21);
      for (std::uint32_t i = 0; i < n; ++i) {
        RwqrEntry e;
        const auto type = r.u8("entries.region_type");
        if (type == 0) {
          e.region = r.region("entries.region");
        } else if (type == 1) {
          e.region = r.rect("entries.region");
        } else {
          throw ParseError("'tmsp': invalid RWQR region type", 0, "tmsp", "entries.region_type");
        }
        e.quality_rank = r.u32("entries.quality_rank");
        p.entries.push_back(std::move(e));
      }
      return p;
    }
    case MetadataKind::erp_region: {
      ErpRegionPayload p;
      p.grid_cols = r.u32("grid_cols");
      p.grid_rows = r.u32("grid_rows");
      p.value_kind = r.enumeration<ErpValueKind>("value_kind", 3);
      const auto n = r.count("cell_values", 4);
      p.cell_values.reserve(n);
      for (std::uint32_t i = 0; i < n; ++i) p.cell_values.push_back(r.u32("cell_values"));
      return p;
    }
    case MetadataKind::dynamic_viewpoint: {
      DynamicViewpointSample d;
      d.viewpoint_id = r.str("viewpoint_id");
      d.position_xyz = r.position("position_xyz");
      d.gps = r.opt("gps", [&] { return r.gps("gps"); });
      return d;
    }
    case MetadataKind::overlay_controls: {
      OverlayControlSample c;
      c.overlay_id = r.u32("overlay_id");
      c.active = r.boolean("active");
      c.opacity = r.opt("opacity", [&] { return r.f64("opacity"); });
      return c;
    }
  }
  return ViewingOrientation{};
}

TimedMetadataTrack decode_timed_metadata(const Located& l) {
  const auto children = locate(l.box->children(), l.offset + 8);
  if (children.empty() || children[0].box->type != kTimedHeader) {
    structure_error(l, "first child must be 'tmhd'");
  }
  TimedMetadataTrack t;
  {
    Reader r = reader_for(children[0]);
    t.track_id = r.u32("track_id");
    t.kind = r.enumeration<MetadataKind>("kind", 6);
    r.finish();
  }
  for (std::size_t i = 1; i < children.size(); ++i) {
    const auto& c = children[i];
    if (c.box->type != kTimedSample) structure_error(c, "unexpected child of 'tmtd'");
    Reader r = reader_for(c);
    TimedSample s;
    s.time_ms = r.i64("time_ms");
    try {
      s.payload = decode_payload(r, t.kind);
    } catch (const ParseError& e) {
      if (e.offset() != 0) throw;
      throw ParseError(e.what(), c.offset, e.fourcc(), e.field());
    }
    r.finish();
    t.samples.push_back(std::move(s));
  }
  return t;
}

TileGroup decode_tile_group(const Located& l) {
  Reader r = reader_for(l);
  TileGroup g;
  g.group_id = r.u32("group_id");
  const auto n = r.count("members", 28);
  for (std::uint32_t i = 0; i < n; ++i) {
    TileMember m;
    m.track_id = r.u32("members.track_id");
    m.col = r.u32("members.col");
    m.row = r.u32("members.row");
    m.source_rect = r.rect("members.source_rect");
    g.members.push_back(m);
  }
  r.finish();
  return g;
}

ViewingSpace decode_viewing_space(const Located& l) {
  Reader r = reader_for(l);
  ViewingSpace vs;
  vs.shape = r.enumeration<ViewingSpaceShape>("shape", 2);
  const auto n = r.count("extent_mm", 4);
  for (std::uint32_t i = 0; i < n; ++i) vs.extent_mm.push_back(r.u32("extent_mm"));
  r.finish();
  return vs;
}

void quantize_region(SphereRegion& r) {
  r.center.azimuth = quantize_angle(r.center.azimuth);
  r.center.elevation = quantize_angle(r.center.elevation);
  r.center.tilt = quantize_angle(r.center.tilt);
  r.azimuth_range = quantize_angle(r.azimuth_range);
  r.elevation_range = quantize_angle(r.elevation_range);
}

void quantize_orientation(ViewingOrientation& o) {
  o.azimuth = quantize_angle(o.azimuth);
  o.elevation = quantize_angle(o.elevation);
  o.tilt = quantize_angle(o.tilt);
}

}  // namespace

Presentation quantize(Presentation p) {
  for (auto& t : p.tracks) {
    if (t.coverage) quantize_region(*t.coverage);
  }
  for (auto& v : p.viewpoints) {
    v.orientation.yaw = quantize_angle(v.orientation.yaw);
    v.orientation.pitch = quantize_angle(v.orientation.pitch);
    v.orientation.roll = quantize_angle(v.orientation.roll);
    if (v.north_offset) v.north_offset = quantize_angle(*v.north_offset);
    for (auto& rule : v.switch_rules) {
      if (rule.activation_region) quantize_region(*rule.activation_region);
    }
  }
  for (auto& o : p.overlays) {
    if (o.rendering.sphere_position) quantize_region(*o.rendering.sphere_position);
    if (o.rendering.plane_position) quantize_orientation(o.rendering.plane_position->center);
    if (o.interaction.toggle_region) quantize_region(*o.interaction.toggle_region);
  }
  for (auto& t : p.timed_metadata) {
    for (auto& s : t.samples) {
      if (auto* o = std::get_if<ViewingOrientation>(&s.payload)) quantize_orientation(*o);
      if (auto* r = std::get_if<SphereRegion>(&s.payload)) quantize_region(*r);
      if (auto* q = std::get_if<RwqrPayload>(&s.payload)) {
        for (auto& e : q->entries) {
          if (auto* r = std::get_if<SphereRegion>(&e.region)) quantize_region(*r);
        }
      }
    }
  }
  return p;
}

std::vector<std::uint8_t> encode_presentation(const Presentation& p) {
  require_valid(p);

  std::vector<Box> boxes;
  boxes.push_back(encode_header(p));
  for (const auto& t : p.tracks) boxes.push_back(encode_track(t));
  for (const auto& v : p.viewpoints) boxes.push_back(encode_viewpoint(v));
  for (const auto& o : p.overlays) boxes.push_back(encode_overlay(o));
  for (const auto& t : p.timed_metadata) boxes.push_back(encode_timed_metadata(t));
  for (const auto& g : p.tile_groups) boxes.push_back(encode_tile_group(g));
  if (p.viewing_space) boxes.push_back(encode_viewing_space(*p.viewing_space));

  std::vector<const OpaqueBox*> extras;
  for (const auto& e : p.extras) {
    if (is_registered(e.fourcc)) {
      throw Error(Errc::usage, "opaque box uses the registered type '" + to_string(e.fourcc) + "'");
    }
    extras.push_back(&e);
  }
  std::stable_sort(extras.begin(), extras.end(),
                   [](const OpaqueBox* a, const OpaqueBox* b) { return a->position < b->position; });
  for (const auto* e : extras) {
    // The header stays first.
    const std::size_t at = std::clamp<std::size_t>(e->position, 1, boxes.size());
    boxes.insert(boxes.begin() + static_cast<std::ptrdiff_t>(at), Box{e->fourcc, e->payload});
  }
  return encode_box_tree(boxes);
}

Presentation decode_presentation(std::span<const std::uint8_t> bytes) {
  const auto boxes = decode_box_tree(bytes);
  const auto located = locate(boxes, 0);
  if (located.empty() || boxes[0].type != kHeader) {
    throw ParseError("missing 'omhd' header box", 0, "omhd");
  }

  Presentation p;
  bool viewing_space_seen = false;
  for (std::size_t i = 0; i < located.size(); ++i) {
    const auto& l = located[i];
    const FourCC& type = l.box->type;
    if (type == kHeader) {
      if (i != 0) structure_error(l, "header box must appear exactly once, first");
      decode_header(l, p);
    } else if (type == kTrack) {
      p.tracks.push_back(decode_track(l));
    } else if (type == kViewpoint) {
      p.viewpoints.push_back(decode_viewpoint(l));
    } else if (type == kOverlay) {
      p.overlays.push_back(decode_overlay(l));
    } else if (type == kTimedMetadata) {
      p.timed_metadata.push_back(decode_timed_metadata(l));
    } else if (type == kTileGroup) {
      p.tile_groups.push_back(decode_tile_group(l));
    } else if (type == kViewingSpace) {
      if (viewing_space_seen) structure_error(l, "more than one viewing space box");
      p.viewing_space = decode_viewing_space(l);
      viewing_space_seen = true;
    } else if (is_registered(type)) {
      structure_error(l, "box type is not allowed at top level");
    } else {
      p.extras.push_back({type, l.box->bytes(), i});
    }
  }
  return p;
}

}  // namespace omaf::codec
