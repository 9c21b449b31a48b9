#include "omaf/conformance.hpp"

#include <algorithm>
#include <map>

#include "omaf/error.hpp"

namespace omaf::conformance {

namespace {

constexpr Level kLevel51{5, 1};
constexpr Level kLevel61{6, 1};

const std::string kHevcViewportIndependent = "HEVC-based viewport-independent OMAF video profile";
const std::string kUnconstrainedViewportIndependent =
    "Unconstrained HEVC-based viewport-independent OMAF video profile";
const std::string kHevcViewportDependent = "HEVC-based viewport-dependent OMAF video profile";
const std::string kAvcViewportDependent = "AVC-based viewport-dependent OMAF video profile";
const std::string kSimpleTiling = "Simple tiling OMAF video profile";
const std::string kAdvancedTiling = "Advanced tiling OMAF video profile";
const std::string kAudioBaseline = "OMAF 3D audio baseline profile";

bool is_full_coverage(const TrackDescriptor& t) {
  return !t.coverage || (t.coverage->azimuth_range >= 360.0 && t.coverage->elevation_range >= 180.0);
}

std::vector<std::uint32_t> tracks_matching(const Presentation& p, const std::string& profile) {
  std::vector<std::uint32_t> ids;
  for (const auto& t : p.tracks) {
    if (t.media_kind != MediaKind::video) continue;
    const auto report = match_video_profiles(t);
    if (std::find(report.matched.begin(), report.matched.end(), profile) != report.matched.end()) {
      ids.push_back(t.track_id);
    }
  }
  return ids;
}

}  // namespace

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::codec: return "codec";
    case Constraint::level: return "level";
    case Constraint::projection: return "projection";
    case Constraint::stereo: return "stereo";
    case Constraint::sample_rate: return "max sampling rate";
  }
  return "?";
}

std::string_view to_string(FindingKind k) {
  switch (k) {
    case FindingKind::recommended_video_profile: return "recommended_video_profile";
    case FindingKind::recommended_audio_profile: return "recommended_audio_profile";
    case FindingKind::recommended_for_8k: return "recommended_for_8k";
    case FindingKind::toolset_brand: return "toolset_brand";
    case FindingKind::fov_enhanced: return "fov_enhanced";
  }
  return "?";
}

const std::vector<ProfileRule>& video_profiles() {
  using P = Projection;
  static const std::vector<ProfileRule> rules = {
      {kHevcViewportIndependent, MediaKind::video, {Codec::HEVC_Main10}, kLevel51, {P::ERP}, true, {}},
      {kUnconstrainedViewportIndependent, MediaKind::video, {Codec::HEVC_Main10}, {}, {P::ERP}, true, {}},
      {kHevcViewportDependent, MediaKind::video, {Codec::HEVC_Main10}, kLevel51, {P::ERP, P::CMP}, true, {}},
      {kAvcViewportDependent, MediaKind::video, {Codec::AVC_ProgressiveHigh}, kLevel51, {P::ERP, P::CMP}, true, {}},
      {kSimpleTiling, MediaKind::video, {Codec::HEVC_Main10}, {}, {P::ERP, P::CMP}, true, {}},
      {kAdvancedTiling, MediaKind::video, {Codec::HEVC_Main10}, {}, {P::mesh}, true, {}},
  };
  return rules;
}

const std::vector<ProfileRule>& image_profiles() {
  static const std::vector<ProfileRule> rules = {
      {"OMAF HEVC image profile", MediaKind::image, {Codec::HEVC_Main10}, kLevel51, {}, true, {}},
      {"OMAF legacy image profile", MediaKind::image, {Codec::JPEG}, {}, {}, true, {}},
  };
  return rules;
}

const std::vector<ProfileRule>& audio_profiles() {
  static const std::vector<ProfileRule> rules = {
      {kAudioBaseline, MediaKind::audio, {Codec::MPEGH_LC}, Level{3, 0}, {}, true, 48000},
      {"OMAF 2D audio legacy profile", MediaKind::audio, {Codec::AAC_HEv2}, Level{4, 0}, {}, true, 48000},
  };
  return rules;
}

const std::vector<ProfileRule>& timed_text_profiles() {
  static const std::vector<ProfileRule> rules = {
      {"OMAF IMSC1 timed text profile", MediaKind::timed_text, {Codec::IMSC1_Text, Codec::IMSC1_Image}, {}, {}, true, {}},
      {"OMAF WebVTT timed text profile", MediaKind::timed_text, {Codec::WebVTT}, {}, {}, true, {}},
  };
  return rules;
}

const std::vector<ProfileRule>& operation_points_3gpp() {
  using P = Projection;
  static const std::vector<ProfileRule> rules = {
      {"Basic H.264/AVC", MediaKind::video, {Codec::AVC_High}, kLevel51, {P::ERP}, false, {}},
      {"Main H.265/HEVC", MediaKind::video, {Codec::HEVC_Main10}, kLevel51, {P::ERP}, true, {}},
      {"Main 8K H.265/HEVC", MediaKind::video, {Codec::HEVC_Main10}, kLevel61, {P::ERP}, true, {}},
      {"Flexible H.265/HEVC", MediaKind::video, {Codec::HEVC_Main10}, kLevel51, {P::ERP, P::CMP}, true, {}},
  };
  return rules;
}

std::optional<Constraint> check_rule(const ProfileRule& rule, const TrackDescriptor& t) {
  if (std::find(rule.codecs.begin(), rule.codecs.end(), t.codec) == rule.codecs.end()) {
    return Constraint::codec;
  }
  if (rule.max_level && (!t.level || *t.level > *rule.max_level)) return Constraint::level;
  if (!rule.projections.empty() &&
      (!t.projection ||
       std::find(rule.projections.begin(), rule.projections.end(), *t.projection) == rule.projections.end())) {
    return Constraint::projection;
  }
  if (!rule.stereo_allowed && t.stereo) return Constraint::stereo;
  if (rule.max_sample_rate_hz && (!t.sample_rate_hz || *t.sample_rate_hz > *rule.max_sample_rate_hz)) {
    return Constraint::sample_rate;
  }
  return std::nullopt;
}

TrackReport evaluate(std::span<const ProfileRule> rules, const TrackDescriptor& t) {
  TrackReport report;
  report.track_id = t.track_id;
  for (const auto& rule : rules) {
    if (const auto failed = check_rule(rule, t)) {
      report.unmatched.push_back({rule.name, *failed});
    } else {
      report.matched.push_back(rule.name);
    }
  }
  return report;
}

TrackReport match_video_profiles(const TrackDescriptor& t) {
  if (t.media_kind != MediaKind::video) {
    throw Error(Errc::usage, "video profiles apply to video tracks, got " + std::string(to_string(t.media_kind)));
  }
  return evaluate(video_profiles(), t);
}

TrackReport match_image_audio_text_profiles(const TrackDescriptor& t) {
  switch (t.media_kind) {
    case MediaKind::image: return evaluate(image_profiles(), t);
    case MediaKind::audio: return evaluate(audio_profiles(), t);
    case MediaKind::timed_text: return evaluate(timed_text_profiles(), t);
    default:
      throw Error(Errc::usage, "image/audio/timed-text profiles do not apply to " +
                                   std::string(to_string(t.media_kind)) + " tracks");
  }
}

TrackReport match_3gpp_operation_points(const TrackDescriptor& t) {
  if (t.media_kind != MediaKind::video) {
    throw Error(Errc::usage, "operation points apply to video tracks, got " + std::string(to_string(t.media_kind)));
  }
  return evaluate(operation_points_3gpp(), t);
}

PresentationReport check_presentation(const Presentation& p, bool include_3gpp) {
  PresentationReport report;
  for (const auto& t : p.tracks) {
    if (t.media_kind == MediaKind::timed_metadata) continue;
    report.media_profiles.push_back(t.media_kind == MediaKind::video ? match_video_profiles(t)
                                                                     : match_image_audio_text_profiles(t));
    if (include_3gpp && t.media_kind == MediaKind::video) {
      report.operation_points.push_back(match_3gpp_operation_points(t));
    }
  }
  return report;
}

std::vector<VrifFinding> vrif_recommendation_report(const Presentation& p) {
  std::vector<VrifFinding> findings;

  for (const auto* profile : {&kHevcViewportIndependent, &kUnconstrainedViewportIndependent,
                              &kHevcViewportDependent, &kSimpleTiling}) {
    auto ids = tracks_matching(p, *profile);
    if (ids.empty()) continue;
    findings.push_back({FindingKind::recommended_video_profile, *profile, std::move(ids),
                        "uses a recommended video profile"});
  }

  std::vector<std::uint32_t> audio;
  for (const auto& t : p.tracks) {
    if (t.media_kind == MediaKind::audio && !check_rule(audio_profiles()[0], t)) audio.push_back(t.track_id);
  }
  if (!audio.empty()) {
    findings.push_back({FindingKind::recommended_audio_profile, kAudioBaseline, std::move(audio),
                        "uses the recommended audio profile"});
  }

  std::vector<std::uint32_t> eight_k;
  for (const auto& t : p.tracks) {
    if (t.media_kind == MediaKind::video && t.dims && t.dims->width >= 8192) eight_k.push_back(t.track_id);
  }
  if (!eight_k.empty()) {
    for (const auto* profile : {&kUnconstrainedViewportIndependent, &kSimpleTiling}) {
      findings.push_back({FindingKind::recommended_for_8k, *profile, eight_k,
                          "recommended for 8K video"});
    }
  }

  // Full-coverage base track plus at least two partial-coverage tracks of the
  // same codec.
  std::map<Codec, std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> by_codec;
  for (const auto& t : p.tracks) {
    if (t.media_kind != MediaKind::video) continue;
    auto& [full, partial] = by_codec[t.codec];
    (is_full_coverage(t) ? full : partial).push_back(t.track_id);
  }
  for (const auto& [codec, split] : by_codec) {
    const auto& [full, partial] = split;
    if (full.empty() || partial.size() < 2) continue;
    std::vector<std::uint32_t> ids = full;
    ids.insert(ids.end(), partial.begin(), partial.end());
    std::sort(ids.begin(), ids.end());
    findings.push_back({FindingKind::fov_enhanced, std::string(to_string(codec)), std::move(ids),
                        "full-coverage track with partial-coverage sub-picture tracks (informational)"});
  }

  if (!p.viewpoints.empty() && !p.brands.contains(std::string(kViewpointBrand))) {
    findings.push_back({FindingKind::toolset_brand, std::string(kViewpointBrand), {},
                        "presentation has viewpoints; the viewpoint toolset brand is suggested"});
  }
  if (!p.overlays.empty() && !p.brands.contains(std::string(kOverlayBrand))) {
    findings.push_back({FindingKind::toolset_brand, std::string(kOverlayBrand), {},
                        "presentation has overlays; the overlay toolset brand is suggested"});
  }
  return findings;
}

nlohmann::json to_json(const TrackReport& r) {
  nlohmann::json unmatched = nlohmann::json::array();
  for (const auto& m : r.unmatched) {
    unmatched.push_back({{"profile", m.profile}, {"failed", std::string(to_string(m.failed))}});
  }
  return {{"track_id", r.track_id}, {"matched", r.matched}, {"unmatched", std::move(unmatched)}};
}

nlohmann::json to_json(const PresentationReport& r) {
  nlohmann::json media = nlohmann::json::array();
  for (const auto& t : r.media_profiles) media.push_back(to_json(t));
  nlohmann::json j = {{"media_profiles", std::move(media)}};
  if (!r.operation_points.empty()) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& t : r.operation_points) ops.push_back(to_json(t));
    j["operation_points_3gpp"] = std::move(ops);
  }
  return j;
}

nlohmann::json to_json(const std::vector<VrifFinding>& findings) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : findings) {
    out.push_back({{"kind", std::string(to_string(f.kind))},
                   {"subject", f.subject},
                   {"track_ids", f.track_ids},
                   {"message", f.message}});
  }
  return out;
}

}  // namespace omaf::conformance
