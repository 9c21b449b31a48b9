#pragma once

// Minimal DASH MPD carrying viewpoint (VWPT) and overlay (OVLY) descriptors.
// The accepted element and attribute grammar is in docs/mpd-subset.md.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omaf/model.hpp"

namespace omaf::dash {

struct Urns {
  std::string vwpt = "urn:example:omaf:vwpt";
  std::string ovly = "urn:example:omaf:ovly";
};

enum class ContentKind { background, overlay, audio, metadata };

std::string_view to_string(ContentKind k);

struct VwptDescriptor {
  std::string viewpoint_id;
  PositionMm position_xyz;
  std::uint32_t group_id = 0;
  std::optional<GpsPosition> gps;

  friend bool operator==(const VwptDescriptor&, const VwptDescriptor&) = default;
};

struct OvlyDescriptor {
  std::vector<std::uint32_t> overlay_ids;  // non-empty
  std::optional<std::vector<std::uint32_t>> priorities;  // same length when present

  friend bool operator==(const OvlyDescriptor&, const OvlyDescriptor&) = default;
};

struct AdaptationSet {
  std::uint32_t id = 0;
  ContentKind kind = ContentKind::background;
  std::vector<std::string> representation_ids;
  std::optional<VwptDescriptor> vwpt;
  std::optional<OvlyDescriptor> ovly;

  friend bool operator==(const AdaptationSet&, const AdaptationSet&) = default;
};

struct MpdDocument {
  std::vector<AdaptationSet> adaptation_sets;

  friend bool operator==(const MpdDocument&, const MpdDocument&) = default;
};

// Adaptation-set layout for a presentation, in emission order:
//  1. one set per viewpoint (VWPT), holding its background tracks;
//  2. one set per remaining overlay-source track, ascending track id;
//  3. one set per remaining track, ascending track id.
// Any set whose tracks feed overlays carries an OVLY descriptor listing those
// overlays by ascending id. Overlays with no source track are not signaled.
// Throws ValidationFailed for invalid presentations.
MpdDocument describe(const Presentation& p);

// Canonical text: fixed element/attribute order, two-space indentation.
std::string to_xml(const MpdDocument& doc, const Urns& urns = {});

std::string generate_mpd(const Presentation& p, const Urns& urns = {});

// Unknown elements and attributes are ignored, as are namespace prefixes.
// Descriptors are recognized by schemeIdUri on any child element of an
// AdaptationSet. Malformed XML raises ParseError; an OVLY whose priority list
// length differs from its id list raises Error(Errc::priority_len_mismatch).
MpdDocument parse_mpd(std::string_view xml, const Urns& urns = {});

}  // namespace omaf::dash
