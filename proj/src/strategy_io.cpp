#include <charconv>
#include <sstream>

#include "omaf/error.hpp"
#include "omaf/manifest_json.hpp"
#include "omaf/strategy.hpp"

namespace omaf::strategy {

namespace {

using nlohmann::json;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T number(std::string_view s, std::size_t line, const char* column) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ParseError("line " + std::to_string(line) + ": invalid " + column + " '" + std::string(s) + "'", 0, "",
                     column);
  }
  return v;
}

// Yields (line number, fields) for every non-empty line after the header.
template <typename F>
void for_each_row(std::string_view text, std::string_view header, F&& row) {
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (!header_seen) {
      header_seen = true;
      std::string normalized;
      for (auto f : split_fields(line)) normalized += std::string(f) + ",";
      if (!normalized.empty()) normalized.pop_back();
      if (normalized != header) {
        throw ParseError("line " + std::to_string(line_no) + ": expected header '" + std::string(header) + "'", 0);
      }
      continue;
    }
    row(line_no, split_fields(line));
  }
  if (!header_seen) throw ParseError("empty CSV input", 0);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t as_u64(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw ParseError(std::string("'") + key + "' must be a non-negative integer", 0, "", key);
  }
  return j[key].get<std::uint64_t>();
}

std::uint32_t as_u32(const json& j, const char* key) {
  const auto v = as_u64(j, key);
  if (v > 0xFFFFFFFFull) throw ParseError(std::string("'") + key + "' exceeds 32 bits", 0, "", key);
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<TraceSample> read_trace_csv(std::string_view text) {
  std::vector<TraceSample> trace;
  for_each_row(text, "time_ms,azimuth,elevation,tilt", [&](std::size_t line, const auto& f) {
    if (f.size() != 4) throw ParseError("line " + std::to_string(line) + ": expected 4 fields", 0);
    TraceSample s;
    s.time_ms = number<std::int64_t>(f[0], line, "time_ms");
    s.orientation.azimuth = number<double>(f[1], line, "azimuth");
    s.orientation.elevation = number<double>(f[2], line, "elevation");
    s.orientation.tilt = number<double>(f[3], line, "tilt");
    if (!trace.empty() && s.time_ms <= trace.back().time_ms) {
      throw ParseError("line " + std::to_string(line) + ": time_ms must increase strictly", 0, "", "time_ms");
    }
    trace.push_back(s);
  });
  if (trace.empty()) throw ParseError("trace has no samples", 0);
  return trace;
}

BudgetModel read_bandwidth_csv(std::string_view text) {
  BudgetModel model;
  for_each_row(text, "time_ms,bps", [&](std::size_t line, const auto& f) {
    if (f.size() != 2) throw ParseError("line " + std::to_string(line) + ": expected 2 fields", 0);
    const auto t = number<std::int64_t>(f[0], line, "time_ms");
    const auto bps = number<std::uint64_t>(f[1], line, "bps");
    if (!model.steps.empty() && t <= model.steps.back().first) {
      throw ParseError("line " + std::to_string(line) + ": time_ms must increase strictly", 0, "", "time_ms");
    }
    model.steps.emplace_back(t, bps);
  });
  if (model.steps.empty()) throw ParseError("bandwidth file has no rows", 0);
  return model;
}

Tiling tiling_from_json(const json& j) {
  if (!j.is_object() || !j.contains("tile_group") || !j.contains("variants") || !j["variants"].is_array()) {
    throw ParseError("tiling needs 'tile_group' and a 'variants' array", 0);
  }
  Tiling t;
  t.group = tile_group_from_json(j["tile_group"]);
  for (const auto& v : j["variants"]) {
    if (!v.is_object()) throw ParseError("variants must be objects", 0);
    t.variants.push_back({as_u32(v, "track_id"), as_u32(v, "col"), as_u32(v, "row"), as_u32(v, "quality_rank"),
                          as_u64(v, "bitrate_bps")});
  }
  return t;
}

std::string metrics_to_csv(const SessionMetrics& m) {
  std::ostringstream out;
  out << "segment,start_ms,budget_bps,bitrate_bps,bytes,weighted_mean_rank,coverage\n";
  for (const auto& s : m.segments) {
    out << s.index << ',' << s.start_ms << ',' << s.budget_bps << ',' << total_bitrate(s.selection) << ','
        << s.bytes << ',' << format_double(s.weighted_mean_rank) << ',' << format_double(s.coverage) << '\n';
  }
  return out.str();
}

json to_json(std::span<const QualityVariant> selection) {
  json out = json::array();
  for (const auto& v : selection) {
    out.push_back({{"col", v.col},
                   {"row", v.row},
                   {"track_id", v.track_id},
                   {"quality_rank", v.quality_rank},
                   {"bitrate_bps", v.bitrate_bps}});
  }
  return out;
}

json to_json(const SessionMetrics& m, bool include_selections) {
  json segments = json::array();
  for (const auto& s : m.segments) {
    json j = {{"segment", s.index},
              {"start_ms", s.start_ms},
              {"budget_bps", s.budget_bps},
              {"bitrate_bps", total_bitrate(s.selection)},
              {"bytes", s.bytes},
              {"weighted_mean_rank", s.weighted_mean_rank},
              {"coverage", s.coverage}};
    if (include_selections) j["selection"] = to_json(std::span<const QualityVariant>(s.selection));
    segments.push_back(std::move(j));
  }
  return {{"segments", std::move(segments)}};
}

}  // namespace omaf::strategy
