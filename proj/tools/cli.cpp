#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "omaf/codec.hpp"
#include "omaf/conformance.hpp"
#include "omaf/dash.hpp"
#include "omaf/error.hpp"
#include "omaf/manifest_json.hpp"
#include "omaf/playback.hpp"
#include "omaf/strategy.hpp"
#include "omaf/validate.hpp"

namespace omaf::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Defaults, optionally overridden by the file named in OMAF_TOOLKIT_CONFIG.
struct Config {
  double hfov = 90.0;
  double vfov = 90.0;
  int samples_az = 64;
  int samples_el = 64;
  std::string vwpt_urn = dash::Urns{}.vwpt;
  std::string ovly_urn = dash::Urns{}.ovly;
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

Config load_config() {
  Config c;
  const char* path = std::getenv("OMAF_TOOLKIT_CONFIG");
  if (!path || !*path) return c;
  std::istringstream in(read_text(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(path) + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw Error(Errc::usage, where + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (key == "hfov") {
        c.hfov = std::stod(value);
      } else if (key == "vfov") {
        c.vfov = std::stod(value);
      } else if (key == "samples_az") {
        c.samples_az = std::stoi(value);
      } else if (key == "samples_el") {
        c.samples_el = std::stoi(value);
      } else if (key == "vwpt_urn") {
        c.vwpt_urn = value;
      } else if (key == "ovly_urn") {
        c.ovly_urn = value;
      } else {
        throw Error(Errc::usage, where + ": unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw Error(Errc::usage, where + ": bad value for '" + key + "'");
    }
  }
  return c;
}

bool looks_like_json(std::string_view bytes) {
  const auto first = bytes.find_first_not_of(" \t\r\n");
  return first != std::string_view::npos && bytes[first] == '{';
}

bool is_json_path(const std::string& path) { return fs::path(path).extension() == ".json"; }

Presentation load_presentation(const std::string& path) {
  const auto bytes = read_text(path);
  if (is_json_path(path) || (fs::path(path).extension() != ".omb" && looks_like_json(bytes))) {
    return read_manifest(bytes);
  }
  return codec::decode_presentation(
      std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string_view severity_name(Severity s) { return s == Severity::error ? "error" : "warning"; }

json report_json(const ValidationReport& r) {
  json issues = json::array();
  for (const auto& i : r.issues) {
    issues.push_back(
        {{"severity", severity_name(i.severity)}, {"code", i.code}, {"path", i.path}, {"message", i.message}});
  }
  return {{"errors", r.error_count()}, {"warnings", r.warning_count()}, {"issues", std::move(issues)}};
}

void print_report(const ValidationReport& r, std::ostream& os) {
  for (const auto& i : r.issues) {
    os << severity_name(i.severity) << " " << i.code << " " << i.path << ": " << i.message << "\n";
  }
  os << r.error_count() << " errors, " << r.warning_count() << " warnings\n";
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json_output = false;
  bool timestamps = false;

  void emit(json j) const {
    if (timestamps && j.is_object()) j["generated_at"] = utc_now();
    out << j.dump(2) << "\n";
  }
};

// ---- subcommands -----------------------------------------------------------

void dump_boxes(const std::vector<codec::Box>& boxes, std::uint64_t offset, int depth, std::ostream& os) {
  for (const auto& b : boxes) {
    os << std::string(2 * static_cast<std::size_t>(depth), ' ') << codec::to_string(b.type) << " @" << offset
       << " size " << b.encoded_size() << "\n";
    if (b.is_container()) dump_boxes(b.children(), offset + 8, depth + 1, os);
    offset += b.encoded_size();
  }
}

void print_summary(const Presentation& p, std::ostream& os) {
  os << "brands:";
  for (const auto& b : p.brands) os << " " << b;
  os << "\n";
  for (const auto& t : p.tracks) {
    os << "track " << t.track_id << ": " << to_string(t.media_kind) << " " << to_string(t.codec);
    if (t.level) os << " level " << to_string(*t.level);
    if (t.projection) os << " " << to_string(*t.projection);
    if (t.dims) os << " " << t.dims->width << "x" << t.dims->height;
    if (t.stereo) os << " stereo";
    os << "\n";
  }
  for (const auto& v : p.viewpoints) {
    os << "viewpoint " << v.viewpoint_id << " (group " << v.group_id << ", " << v.switch_rules.size()
       << " switch rules" << (v.dynamic ? ", dynamic" : "") << ")\n";
  }
  for (const auto& o : p.overlays) {
    os << "overlay " << o.overlay_id << ": " << to_string(o.rendering.kind) << ", priority "
       << o.properties.priority << ", layer " << o.properties.layering_order << "\n";
  }
  for (const auto& t : p.timed_metadata) {
    os << "metadata " << t.track_id << ": " << to_string(t.kind) << ", " << t.samples.size() << " samples\n";
  }
  for (const auto& g : p.tile_groups) os << "tile group " << g.group_id << ": " << g.members.size() << " tiles\n";
  if (!p.extras.empty()) os << p.extras.size() << " unrecognized boxes kept\n";
}

int cmd_inspect(const Context& ctx, const std::string& path) {
  const auto bytes = read_text(path);
  const bool manifest = is_json_path(path) || (fs::path(path).extension() != ".omb" && looks_like_json(bytes));
  const auto p = load_presentation(path);
  if (ctx.json_output) {
    ctx.emit(to_json(p));
    return kOk;
  }
  if (!manifest) {
    dump_boxes(codec::decode_box_tree(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size())),
               0, 0, ctx.out);
  }
  print_summary(p, ctx.out);
  return kOk;
}

int cmd_validate(const Context& ctx, const std::string& path) {
  const auto report = validate_presentation(load_presentation(path));
  if (ctx.json_output) {
    ctx.emit(report_json(report));
  } else {
    print_report(report, ctx.out);
  }
  return report.ok() ? kOk : kFailures;
}

int cmd_convert(const Context& ctx, const std::string& in, std::string out_path) {
  const auto p = load_presentation(in);
  const auto report = validate_presentation(p);
  if (!report.ok()) {
    print_report(report, ctx.err);
    return kFailures;
  }
  const bool to_omb = is_json_path(in);
  if (out_path.empty()) out_path = fs::path(in).replace_extension(to_omb ? ".omb" : ".json").string();
  if (to_omb) {
    const auto bytes = codec::encode_presentation(p);
    write_bytes(out_path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } else {
    write_bytes(out_path, write_manifest(p));
  }
  if (ctx.json_output) {
    ctx.emit({{"input", in}, {"output", out_path}});
  } else {
    ctx.err << "wrote " << out_path << "\n";
  }
  return kOk;
}

void print_track_reports(const std::vector<conformance::TrackReport>& reports, std::string_view title,
                         std::ostream& os) {
  os << title << "\n";
  for (const auto& r : reports) {
    os << "  track " << r.track_id << "\n";
    for (const auto& m : r.matched) os << "    match  " << m << "\n";
    for (const auto& m : r.unmatched) os << "    fail   " << m.profile << " (" << conformance::to_string(m.failed) << ")\n";
  }
}

int cmd_conformance(const Context& ctx, const std::string& path, bool gpp, bool vrif) {
  const auto p = load_presentation(path);
  const auto report = conformance::check_presentation(p, gpp);
  std::vector<conformance::VrifFinding> findings;
  if (vrif) findings = conformance::vrif_recommendation_report(p);

  bool unmatched = false;
  for (const auto& r : report.media_profiles) unmatched = unmatched || r.matched.empty();

  if (ctx.json_output) {
    auto j = conformance::to_json(report);
    if (vrif) j["vrif"] = conformance::to_json(findings);
    ctx.emit(std::move(j));
  } else {
    print_track_reports(report.media_profiles, "media profiles", ctx.out);
    if (gpp) print_track_reports(report.operation_points, "3GPP operation points", ctx.out);
    if (vrif) {
      ctx.out << "VRIF\n";
      for (const auto& f : findings) {
        ctx.out << "  " << conformance::to_string(f.kind) << ": " << f.subject;
        if (!f.track_ids.empty()) {
          ctx.out << " [tracks";
          for (auto id : f.track_ids) ctx.out << " " << id;
          ctx.out << "]";
        }
        ctx.out << " - " << f.message << "\n";
      }
    }
  }
  return unmatched ? kFailures : kOk;
}

json mpd_json(const dash::MpdDocument& doc) {
  json sets = json::array();
  for (const auto& s : doc.adaptation_sets) {
    json j = {{"id", s.id}, {"kind", dash::to_string(s.kind)}, {"representations", s.representation_ids}};
    if (s.vwpt) {
      json v = {{"viewpoint_id", s.vwpt->viewpoint_id},
                {"position_xyz", {s.vwpt->position_xyz.x, s.vwpt->position_xyz.y, s.vwpt->position_xyz.z}},
                {"group_id", s.vwpt->group_id}};
      if (s.vwpt->gps) {
        v["gps"] = {{"latitude", s.vwpt->gps->latitude}, {"longitude", s.vwpt->gps->longitude}};
        if (s.vwpt->gps->altitude) v["gps"]["altitude"] = *s.vwpt->gps->altitude;
      }
      j["vwpt"] = std::move(v);
    }
    if (s.ovly) {
      j["ovly"] = {{"overlay_ids", s.ovly->overlay_ids}};
      if (s.ovly->priorities) j["ovly"]["priorities"] = *s.ovly->priorities;
    }
    sets.push_back(std::move(j));
  }
  return {{"adaptation_sets", std::move(sets)}};
}

int cmd_mpd_gen(const Context& ctx, const std::string& path, const std::string& out_path, const dash::Urns& urns) {
  const auto xml = dash::generate_mpd(load_presentation(path), urns);
  if (out_path.empty()) {
    ctx.out << xml;
  } else {
    write_bytes(out_path, xml);
  }
  return kOk;
}

int cmd_mpd_parse(const Context& ctx, const std::string& path, const dash::Urns& urns) {
  const auto doc = dash::parse_mpd(read_text(path), urns);
  if (ctx.json_output) {
    ctx.emit(mpd_json(doc));
    return kOk;
  }
  for (const auto& s : doc.adaptation_sets) {
    ctx.out << "adaptation set " << s.id << ": " << dash::to_string(s.kind) << ", " << s.representation_ids.size()
            << " representations\n";
    if (s.vwpt) ctx.out << "  VWPT " << s.vwpt->viewpoint_id << " group " << s.vwpt->group_id << "\n";
    if (s.ovly) {
      ctx.out << "  OVLY";
      for (std::size_t i = 0; i < s.ovly->overlay_ids.size(); ++i) {
        ctx.out << " " << s.ovly->overlay_ids[i];
        if (s.ovly->priorities) ctx.out << "(p" << (*s.ovly->priorities)[i] << ")";
      }
      ctx.out << "\n";
    }
  }
  return kOk;
}

int cmd_compose(const Context& ctx, const std::string& background_path, const std::string& layers_path,
                const std::string& out_path, const std::string& background_alpha, const std::string& alpha_out) {
  const auto background = playback::read_ppm(
      background_path, background_alpha.empty() ? std::nullopt : std::optional<std::string>(background_alpha));
  const auto spec = parse_json_text(read_text(layers_path));
  if (!spec.is_array()) throw ParseError("layer file must hold a JSON array", 0);
  const auto base = fs::path(layers_path).parent_path();
  std::vector<playback::Layer> layers;
  for (const auto& l : spec) {
    if (!l.is_object() || !l.contains("ppm") || !l["ppm"].is_string() || !l.contains("placement")) {
      throw ParseError("each layer needs 'ppm' and 'placement'", 0);
    }
    std::optional<std::string> alpha;
    if (l.contains("alpha")) alpha = (base / l["alpha"].get<std::string>()).string();
    playback::Layer layer;
    layer.raster = playback::read_ppm((base / l["ppm"].get<std::string>()).string(), alpha);
    layer.placement = rect_from_json(l["placement"]);
    if (l.contains("opacity")) {
      if (!l["opacity"].is_number()) throw ParseError("opacity must be a number", 0);
      layer.opacity = l["opacity"].get<double>();
    }
    if (l.contains("use_alpha")) {
      if (!l["use_alpha"].is_boolean()) throw ParseError("use_alpha must be a boolean", 0);
      layer.use_alpha = l["use_alpha"].get<bool>();
    }
    layers.push_back(std::move(layer));
  }
  const auto out = playback::compose(background, layers);
  playback::write_ppm(out, out_path, alpha_out.empty() ? std::nullopt : std::optional<std::string>(alpha_out));
  if (ctx.json_output) ctx.emit({{"output", out_path}, {"width", out.width}, {"height", out.height}});
  return kOk;
}

struct SimulateArgs {
  std::string trace;
  std::string tiling;
  std::optional<std::uint64_t> budget_bps;
  std::string bandwidth;
  std::int64_t segment_ms = 1000;
  std::optional<double> hfov;
  std::optional<double> vfov;
  std::string heatmap;
  std::string output;
  bool selections = false;
  bool serial = false;
};

int cmd_simulate(const Context& ctx, const SimulateArgs& a, const Config& config) {
  if (a.budget_bps.has_value() == !a.bandwidth.empty()) {
    throw Error(Errc::usage, "exactly one of --budget-bps and --bandwidth is required");
  }
  const auto trace = strategy::read_trace_csv(read_text(a.trace));
  const auto tiling = strategy::tiling_from_json(parse_json_text(read_text(a.tiling)));
  const auto budget = a.budget_bps ? strategy::BudgetModel::constant(*a.budget_bps)
                                   : strategy::read_bandwidth_csv(read_text(a.bandwidth));
  strategy::SessionConfig sc;
  sc.segment_ms = a.segment_ms;
  sc.select.hfov = a.hfov.value_or(config.hfov);
  sc.select.vfov = a.vfov.value_or(config.vfov);
  sc.select.sampling = {config.samples_az, config.samples_el};
  if (!a.heatmap.empty()) {
    const auto grid = strategy::make_grid(tiling.group, tiling.variants);
    sc.select.weights =
        strategy::apply_heatmap_bias(erp_region_from_json(parse_json_text(read_text(a.heatmap))), grid.cols, grid.rows);
  }
  const auto metrics = a.serial ? strategy::simulate_session_serial(trace, tiling.group, tiling.variants, budget, sc)
                                : strategy::simulate_session(trace, tiling.group, tiling.variants, budget, sc);

  if (!a.output.empty()) write_bytes(a.output, strategy::metrics_to_csv(metrics));
  if (ctx.json_output) {
    ctx.emit(strategy::to_json(metrics, a.selections));
  } else if (a.output.empty()) {
    ctx.out << strategy::metrics_to_csv(metrics);
  }
  return kOk;
}

int cmd_gps_select(const Context& ctx, const std::string& path, double lat, double lon) {
  const auto p = load_presentation(path);
  const auto id = playback::select_viewpoint_by_gps(p.viewpoints, GpsPosition{lat, lon, std::nullopt});
  if (ctx.json_output) {
    ctx.emit({{"viewpoint_id", id}});
  } else {
    ctx.out << id << "\n";
  }
  return kOk;
}

int cmd_play(const Context& ctx, const std::string& path, const std::string& events, std::string viewpoint) {
  const auto p = load_presentation(path);
  require_valid(p);
  if (viewpoint.empty()) {
    if (p.viewpoints.empty()) throw Error(Errc::usage, "presentation has no viewpoints");
    viewpoint = p.viewpoints.front().viewpoint_id;
  }
  const auto steps = playback::trace_from_json(parse_json_text(read_text(events)));
  const auto states = playback::replay(p, playback::initial_state(p, viewpoint), steps);
  json j = json::array();
  for (const auto& s : states) j.push_back(playback::to_json(s));
  ctx.emit({{"states", std::move(j)}});
  return kOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::usage: return kUsage;
    case Errc::parse:
    case Errc::io: return kIoError;
    default: return kFailures;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config config;
  try {
    config = load_config();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }

  CLI::App app{"Omnidirectional media toolkit", "omaf-tool"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_output = false;
  bool timestamps = false;
  app.add_flag("--json", json_output, "Machine-readable JSON on stdout");
  app.add_flag("--timestamps", timestamps, "Add a generated_at field to JSON output");

  std::string input;
  std::string second;
  std::string output;

  auto* inspect = app.add_subcommand("inspect", "Dump an OMB file or manifest");
  inspect->add_option("file", input, "OMB file or JSON manifest")->required();

  auto* validate = app.add_subcommand("validate", "Validate a presentation");
  validate->add_option("file", input, "OMB file or JSON manifest")->required();

  auto* convert = app.add_subcommand("convert", "Convert between JSON manifest and OMB");
  convert->add_option("input", input, "Input (.json or .omb)")->required();
  convert->add_option("-o,--output", output, "Output path");

  bool gpp = false;
  bool vrif = false;
  auto* conf = app.add_subcommand("conformance", "Match tracks against media profiles");
  conf->add_option("manifest", input, "OMB file or JSON manifest")->required();
  conf->add_flag("--3gpp", gpp, "Also match 3GPP VR video operation points");
  conf->add_flag("--vrif", vrif, "Report VRIF recommendations");

  dash::Urns urns{config.vwpt_urn, config.ovly_urn};
  auto* mpd = app.add_subcommand("mpd", "Generate or parse an MPD");
  mpd->require_subcommand(1);
  mpd->fallthrough();
  mpd->add_option("--vwpt-urn", urns.vwpt, "Scheme URI of the viewpoint descriptor");
  mpd->add_option("--ovly-urn", urns.ovly, "Scheme URI of the overlay descriptor");
  auto* mpd_gen = mpd->add_subcommand("gen", "Generate an MPD from a presentation");
  mpd_gen->add_option("manifest", input, "OMB file or JSON manifest")->required();
  mpd_gen->add_option("-o,--output", output, "Output path (default stdout)");
  auto* mpd_parse = mpd->add_subcommand("parse", "List the descriptors of an MPD");
  mpd_parse->add_option("mpd", input, "MPD file")->required();

  std::string background_alpha;
  std::string alpha_out;
  auto* compose = app.add_subcommand("compose", "Blend overlay layers onto a background raster");
  compose->add_option("background", input, "Background P6 PPM")->required();
  compose->add_option("layers", second, "JSON layer list")->required();
  compose->add_option("-o,--output", output, "Output P6 PPM")->required();
  compose->add_option("--background-alpha", background_alpha, "P5 alpha plane for the background");
  compose->add_option("--alpha-out", alpha_out, "Write the output alpha plane as P5");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a tile-streaming session");
  simulate->add_option("--trace", sim.trace, "Orientation trace CSV")->required();
  simulate->add_option("--tiling", sim.tiling, "Tile group and variants JSON")->required();
  simulate->add_option("--budget-bps", sim.budget_bps, "Constant bandwidth budget");
  simulate->add_option("--bandwidth", sim.bandwidth, "Piecewise-constant bandwidth CSV");
  simulate->add_option("--segment-ms", sim.segment_ms, "Segment duration")->check(CLI::PositiveNumber);
  simulate->add_option("--hfov", sim.hfov, "Horizontal field of view");
  simulate->add_option("--vfov", sim.vfov, "Vertical field of view");
  simulate->add_option("--heatmap", sim.heatmap, "ERP-region heatmap JSON");
  simulate->add_option("-o,--output", sim.output, "Metrics CSV path");
  simulate->add_flag("--selections", sim.selections, "Include per-segment selections in JSON output");
  simulate->add_flag("--serial", sim.serial, "Use the single-threaded reference path");

  double lat = 0.0;
  double lon = 0.0;
  auto* gps = app.add_subcommand("gps-select", "Pick the viewpoint nearest to a GPS position");
  gps->add_option("manifest", input, "OMB file or JSON manifest")->required();
  gps->add_option("--lat", lat, "Latitude in degrees")->required();
  gps->add_option("--lon", lon, "Longitude in degrees")->required();

  std::string start_viewpoint;
  auto* play = app.add_subcommand("play", "Replay a viewpoint event list");
  play->add_option("manifest", input, "OMB file or JSON manifest")->required();
  play->add_option("events", second, "JSON event list")->required();
  play->add_option("--viewpoint", start_viewpoint, "Starting viewpoint (default: first)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  const Context ctx{out, err, json_output, timestamps};
  try {
    if (*inspect) return cmd_inspect(ctx, input);
    if (*validate) return cmd_validate(ctx, input);
    if (*convert) return cmd_convert(ctx, input, output);
    if (*conf) return cmd_conformance(ctx, input, gpp, vrif);
    if (*mpd_gen) return cmd_mpd_gen(ctx, input, output, urns);
    if (*mpd_parse) return cmd_mpd_parse(ctx, input, urns);
    if (*compose) return cmd_compose(ctx, input, second, output, background_alpha, alpha_out);
    if (*simulate) return cmd_simulate(ctx, sim, config);
    if (*gps) return cmd_gps_select(ctx, input, lat, lon);
    if (*play) return cmd_play(ctx, input, second, start_viewpoint);
  } catch (const ValidationFailed& e) {
    print_report(e.report(), err);
    return kFailures;
  } catch (const Error& e) {
    err << "error: " << e.code_name() << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kUsage;
}

}  // namespace omaf::cli
