#pragma once

// Table-driven matching of track descriptors against the OMAF media profiles,
// the 3GPP VR video operation points, and the VRIF recommendations.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "omaf/model.hpp"

namespace omaf::conformance {

// Placeholder toolset brand names; the real four-character codes are not
// modeled.
inline constexpr std::string_view kViewpointBrand = "xvpt";
inline constexpr std::string_view kOverlayBrand = "xovl";
inline constexpr std::string_view kStorylineBrand = "xstl";

enum class Constraint { codec, level, projection, stereo, sample_rate };

// "codec", "level", "projection", "stereo", "max sampling rate".
std::string_view to_string(Constraint c);

struct ProfileRule {
  std::string name;
  MediaKind media_kind = MediaKind::video;
  std::vector<Codec> codecs;  // any of these
  std::optional<Level> max_level;  // nullopt: no level constraint
  std::vector<Projection> projections;  // empty: not constrained
  bool stereo_allowed = true;
  std::optional<std::uint32_t> max_sample_rate_hz;
};

const std::vector<ProfileRule>& video_profiles();
const std::vector<ProfileRule>& image_profiles();
const std::vector<ProfileRule>& audio_profiles();
const std::vector<ProfileRule>& timed_text_profiles();
const std::vector<ProfileRule>& operation_points_3gpp();

// First failing constraint in the order codec, level, projection, stereo,
// sample rate. A rule with a level cap fails "level" when the track carries
// no level.
std::optional<Constraint> check_rule(const ProfileRule& rule, const TrackDescriptor& t);

struct Mismatch {
  std::string profile;
  Constraint failed = Constraint::codec;

  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

// Every evaluated rule lands in exactly one of `matched` / `unmatched`, in
// table order.
struct TrackReport {
  std::uint32_t track_id = 0;
  std::vector<std::string> matched;
  std::vector<Mismatch> unmatched;

  friend bool operator==(const TrackReport&, const TrackReport&) = default;
};

TrackReport evaluate(std::span<const ProfileRule> rules, const TrackDescriptor& t);

// These throw Error(Errc::usage) on a media kind the tables do not cover.
TrackReport match_video_profiles(const TrackDescriptor& t);
TrackReport match_image_audio_text_profiles(const TrackDescriptor& t);
TrackReport match_3gpp_operation_points(const TrackDescriptor& t);

struct PresentationReport {
  std::vector<TrackReport> media_profiles;    // one per non-metadata track
  std::vector<TrackReport> operation_points;  // one per video track, when requested
};

PresentationReport check_presentation(const Presentation& p, bool include_3gpp);

enum class FindingKind {
  recommended_video_profile,
  recommended_audio_profile,
  recommended_for_8k,
  toolset_brand,
  fov_enhanced,
};

std::string_view to_string(FindingKind k);

struct VrifFinding {
  FindingKind kind = FindingKind::recommended_video_profile;
  std::string subject;  // profile name or brand
  std::vector<std::uint32_t> track_ids;
  std::string message;

  friend bool operator==(const VrifFinding&, const VrifFinding&) = default;
};

// Empty for an empty presentation.
std::vector<VrifFinding> vrif_recommendation_report(const Presentation& p);

nlohmann::json to_json(const TrackReport& r);
nlohmann::json to_json(const PresentationReport& r);
nlohmann::json to_json(const std::vector<VrifFinding>& findings);

}  // namespace omaf::conformance
