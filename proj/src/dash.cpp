#include "omaf/dash.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "omaf/error.hpp"
#include "omaf/validate.hpp"

namespace omaf::dash {

namespace {

namespace pt = boost::property_tree;

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Only the list separator and the escape character itself are encoded.
std::string percent_encode(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ',') {
      out += "%2C";
    } else if (c == '%') {
      out += "%25";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    const int hi = i + 2 < s.size() ? hex_value(s[i + 1]) : -1;
    const int lo = i + 2 < s.size() ? hex_value(s[i + 2]) : -1;
    if (hi < 0 || lo < 0) throw ParseError("bad percent escape in descriptor value", 0);
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(s) + "'", 0);
  }
  return v;
}

std::string join_u32(const std::vector<std::uint32_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<std::uint32_t> parse_u32_list(std::string_view s, const char* what) {
  std::vector<std::uint32_t> out;
  for (auto part : split(s, ',')) out.push_back(parse_number<std::uint32_t>(part, what));
  return out;
}

std::string vwpt_value(const VwptDescriptor& d) {
  std::string v = percent_encode(d.viewpoint_id) + "," + std::to_string(d.position_xyz.x) + "," +
                  std::to_string(d.position_xyz.y) + "," + std::to_string(d.position_xyz.z) + "," +
                  std::to_string(d.group_id);
  if (d.gps) {
    v += "," + format_double(d.gps->latitude) + "," + format_double(d.gps->longitude);
    if (d.gps->altitude) v += "," + format_double(*d.gps->altitude);
  }
  return v;
}

VwptDescriptor parse_vwpt_value(std::string_view value) {
  const auto parts = split(value, ',');
  if (parts.size() != 5 && parts.size() != 7 && parts.size() != 8) {
    throw ParseError("VWPT value needs 5, 7 or 8 fields, got " + std::to_string(parts.size()), 0);
  }
  VwptDescriptor d;
  d.viewpoint_id = percent_decode(parts[0]);
  d.position_xyz.x = parse_number<std::int32_t>(parts[1], "VWPT x");
  d.position_xyz.y = parse_number<std::int32_t>(parts[2], "VWPT y");
  d.position_xyz.z = parse_number<std::int32_t>(parts[3], "VWPT z");
  d.group_id = parse_number<std::uint32_t>(parts[4], "VWPT group");
  if (parts.size() >= 7) {
    GpsPosition g;
    g.latitude = parse_number<double>(parts[5], "VWPT latitude");
    g.longitude = parse_number<double>(parts[6], "VWPT longitude");
    if (parts.size() == 8) g.altitude = parse_number<double>(parts[7], "VWPT altitude");
    d.gps = g;
  }
  return d;
}

std::string_view local_name(std::string_view name) {
  const auto colon = name.rfind(':');
  return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

std::optional<std::string> attribute(const pt::ptree& node, std::string_view name) {
  const auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  for (const auto& [key, value] : *attrs) {
    if (local_name(key) == name) return value.data();
  }
  return std::nullopt;
}

std::string_view content_type(ContentKind k) {
  switch (k) {
    case ContentKind::audio: return "audio";
    case ContentKind::metadata: return "application";
    default: return "video";
  }
}

AdaptationSet parse_adaptation_set(const pt::ptree& node, const Urns& urns) {
  AdaptationSet set;
  if (const auto id = attribute(node, "id")) set.id = parse_number<std::uint32_t>(*id, "AdaptationSet id");
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (local_name(name) == "Representation") {
      if (const auto id = attribute(child, "id")) set.representation_ids.push_back(*id);
      continue;
    }
    const auto scheme = attribute(child, "schemeIdUri");
    if (!scheme) continue;
    if (*scheme == urns.vwpt) {
      if (set.vwpt) throw ParseError("adaptation set carries more than one VWPT descriptor", 0);
      set.vwpt = parse_vwpt_value(attribute(child, "value").value_or(""));
    } else if (*scheme == urns.ovly) {
      if (set.ovly) throw ParseError("adaptation set carries more than one OVLY descriptor", 0);
      OvlyDescriptor d;
      d.overlay_ids = parse_u32_list(attribute(child, "value").value_or(""), "OVLY overlay id");
      if (const auto pr = attribute(child, "priority")) {
        d.priorities = parse_u32_list(*pr, "OVLY priority");
        if (d.priorities->size() != d.overlay_ids.size()) {
          throw Error(Errc::priority_len_mismatch,
                      "OVLY lists " + std::to_string(d.overlay_ids.size()) + " overlay ids but " +
                          std::to_string(d.priorities->size()) + " priorities");
        }
      }
      set.ovly = std::move(d);
    }
  }
  if (set.vwpt) {
    set.kind = ContentKind::background;
  } else if (set.ovly) {
    set.kind = ContentKind::overlay;
  } else {
    const auto type = attribute(node, "contentType").value_or("");
    if (type == "audio") {
      set.kind = ContentKind::audio;
    } else if (type == "application" || type == "text") {
      set.kind = ContentKind::metadata;
    } else {
      set.kind = ContentKind::background;
    }
  }
  return set;
}

}  // namespace

std::string_view to_string(ContentKind k) {
  switch (k) {
    case ContentKind::background: return "background";
    case ContentKind::overlay: return "overlay";
    case ContentKind::audio: return "audio";
    case ContentKind::metadata: return "metadata";
  }
  return "?";
}

MpdDocument describe(const Presentation& p) {
  require_valid(p);

  MpdDocument doc;
  std::set<std::uint32_t> placed;
  auto add_set = [&](ContentKind kind, std::vector<std::uint32_t> tracks) -> AdaptationSet& {
    AdaptationSet set;
    set.id = static_cast<std::uint32_t>(doc.adaptation_sets.size() + 1);
    set.kind = kind;
    for (auto t : tracks) {
      set.representation_ids.push_back(std::to_string(t));
      placed.insert(t);
    }
    doc.adaptation_sets.push_back(std::move(set));
    return doc.adaptation_sets.back();
  };

  for (const auto& v : p.viewpoints) {
    auto& set = add_set(ContentKind::background, v.track_ids);
    set.vwpt = VwptDescriptor{v.viewpoint_id, v.position_xyz, v.group_id, v.gps};
  }

  std::map<std::uint32_t, std::vector<const Overlay*>> by_source;
  for (const auto& o : p.overlays) {
    if (o.source.ref_id) by_source[*o.source.ref_id].push_back(&o);
  }
  for (const auto& [track, overlays] : by_source) {
    if (!placed.contains(track)) add_set(ContentKind::overlay, {track});
  }

  std::map<std::uint32_t, ContentKind> remaining;
  for (const auto& t : p.tracks) {
    if (placed.contains(t.track_id)) continue;
    switch (t.media_kind) {
      case MediaKind::audio: remaining[t.track_id] = ContentKind::audio; break;
      case MediaKind::timed_text:
      case MediaKind::timed_metadata: remaining[t.track_id] = ContentKind::metadata; break;
      default: remaining[t.track_id] = ContentKind::background;
    }
  }
  for (const auto& t : p.timed_metadata) {
    if (!placed.contains(t.track_id)) remaining[t.track_id] = ContentKind::metadata;
  }
  for (const auto& [track, kind] : remaining) add_set(kind, {track});

  for (auto& set : doc.adaptation_sets) {
    std::vector<const Overlay*> overlays;
    for (const auto& rep : set.representation_ids) {
      const auto it = by_source.find(static_cast<std::uint32_t>(std::stoul(rep)));
      if (it != by_source.end()) overlays.insert(overlays.end(), it->second.begin(), it->second.end());
    }
    if (overlays.empty()) continue;
    std::sort(overlays.begin(), overlays.end(),
              [](const Overlay* a, const Overlay* b) { return a->overlay_id < b->overlay_id; });
    OvlyDescriptor d;
    d.priorities.emplace();
    for (const auto* o : overlays) {
      d.overlay_ids.push_back(o->overlay_id);
      d.priorities->push_back(o->properties.priority);
    }
    set.ovly = std::move(d);
  }
  return doc;
}

std::string to_xml(const MpdDocument& doc, const Urns& urns) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<MPD xmlns=\"urn:mpeg:dash:schema:mpd:2011\" type=\"static\" "
         "profiles=\"urn:mpeg:dash:profile:isoff-on-demand:2011\">\n";
  out << "  <Period id=\"0\">\n";
  for (const auto& set : doc.adaptation_sets) {
    out << "    <AdaptationSet id=\"" << set.id << "\" contentType=\"" << content_type(set.kind) << "\">\n";
    if (set.vwpt) {
      out << "      <Viewpoint schemeIdUri=\"" << escape_xml(urns.vwpt) << "\" value=\""
          << escape_xml(vwpt_value(*set.vwpt)) << "\"/>\n";
    }
    if (set.ovly) {
      out << "      <SupplementalProperty schemeIdUri=\"" << escape_xml(urns.ovly) << "\" value=\""
          << join_u32(set.ovly->overlay_ids) << "\"";
      if (set.ovly->priorities) out << " priority=\"" << join_u32(*set.ovly->priorities) << "\"";
      out << "/>\n";
    }
    for (const auto& rep : set.representation_ids) {
      out << "      <Representation id=\"" << escape_xml(rep) << "\"/>\n";
    }
    out << "    </AdaptationSet>\n";
  }
  out << "  </Period>\n";
  out << "</MPD>\n";
  return out.str();
}

std::string generate_mpd(const Presentation& p, const Urns& urns) { return to_xml(describe(p), urns); }

MpdDocument parse_mpd(std::string_view xml, const Urns& urns) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML at line " + std::to_string(e.line()) + ": " + e.message(), 0);
  }

  const pt::ptree* mpd = nullptr;
  for (const auto& [name, child] : tree) {
    if (local_name(name) == "MPD") mpd = &child;
  }
  if (!mpd) throw ParseError("document root is not an MPD element", 0);

  MpdDocument doc;
  for (const auto& [name, period] : *mpd) {
    if (local_name(name) != "Period") continue;
    for (const auto& [set_name, set] : period) {
      if (local_name(set_name) == "AdaptationSet") doc.adaptation_sets.push_back(parse_adaptation_set(set, urns));
    }
  }
  return doc;
}

}  // namespace omaf::dash
