#include <gtest/gtest.h>

#include <algorithm>

#include "gen.hpp"
#include "omaf/builder.hpp"
#include "omaf/dash.hpp"
#include "omaf/error.hpp"
#include "omaf/validate.hpp"

namespace {

using namespace omaf;
using namespace omaf::dash;
using omaf::gen::Rng;

bool has_rep(const AdaptationSet& set, std::uint32_t track_id) {
  const auto id = std::to_string(track_id);
  return std::find(set.representation_ids.begin(), set.representation_ids.end(), id) != set.representation_ids.end();
}

// Checks the parsed document against the presentation itself rather than
// against describe().
void expect_descriptors_preserved(const Presentation& p, const MpdDocument& doc) {
  for (const auto& v : p.viewpoints) {
    std::size_t found = 0;
    for (const auto& set : doc.adaptation_sets) {
      if (!set.vwpt || set.vwpt->viewpoint_id != v.viewpoint_id) continue;
      ++found;
      EXPECT_EQ(set.vwpt->position_xyz, v.position_xyz);
      EXPECT_EQ(set.vwpt->group_id, v.group_id);
      EXPECT_EQ(set.vwpt->gps, v.gps);
      std::vector<std::string> want;
      for (auto id : v.track_ids) want.push_back(std::to_string(id));
      EXPECT_EQ(set.representation_ids, want);
    }
    EXPECT_EQ(found, 1u) << v.viewpoint_id;
  }
  for (const auto& o : p.overlays) {
    std::size_t found = 0;
    for (const auto& set : doc.adaptation_sets) {
      if (!set.ovly) continue;
      const auto& ids = set.ovly->overlay_ids;
      const auto it = std::find(ids.begin(), ids.end(), o.overlay_id);
      if (it == ids.end()) continue;
      ++found;
      ASSERT_TRUE(set.ovly->priorities.has_value());
      EXPECT_EQ((*set.ovly->priorities)[static_cast<std::size_t>(it - ids.begin())], o.properties.priority);
      EXPECT_TRUE(has_rep(set, *o.source.ref_id));
    }
    EXPECT_EQ(found, o.source.ref_id ? 1u : 0u) << o.overlay_id;
  }
  for (const auto& set : doc.adaptation_sets) {
    if (set.ovly) {
      EXPECT_TRUE(std::is_sorted(set.ovly->overlay_ids.begin(), set.ovly->overlay_ids.end()));
    }
  }
}

TEST(Dash, RandomPresentationsRoundTrip) {
  Rng rng(606);
  for (int i = 0; i < 200; ++i) {
    const auto p = gen::random_presentation(rng);
    const auto xml = generate_mpd(p);
    const auto doc = parse_mpd(xml);
    ASSERT_EQ(doc, describe(p)) << xml;
    expect_descriptors_preserved(p, doc);
    EXPECT_EQ(to_xml(doc), xml);
  }
}

TEST(Dash, CustomUrnsRoundTrip) {
  Rng rng(607);
  const Urns urns{"urn:test:v", "urn:test:o"};
  for (int i = 0; i < 20; ++i) {
    const auto p = gen::random_presentation(rng);
    EXPECT_EQ(parse_mpd(generate_mpd(p, urns), urns), describe(p));
  }
}

Presentation two_overlays() {
  PresentationBuilder b;
  const auto bg = b.add_track(make_video_track(Codec::HEVC_Main10, {5, 1}, Projection::ERP, {3840, 1920}));
  const auto src = b.add_track(make_video_track(Codec::HEVC_Main10, {5, 1}, Projection::none, {1280, 720}));
  TrackDescriptor audio;
  audio.media_kind = MediaKind::audio;
  audio.codec = Codec::AAC_HEv2;
  audio.level = Level{4, 0};
  b.add_track(audio);
  Viewpoint v;
  v.viewpoint_id = "a,b";
  v.position_xyz = {1, -2, 3};
  v.track_ids = {bg};
  b.add_viewpoint(v);
  for (std::uint32_t prio : {3u, 0u}) {
    Overlay o;
    o.source = {OverlaySourceKind::video_track, src, std::nullopt};
    o.rendering.kind = OverlayRenderingKind::mesh_3d;
    o.properties.priority = prio;
    b.add_overlay(o);
  }
  Overlay external;
  external.source.kind = OverlaySourceKind::external;
  external.rendering.kind = OverlayRenderingKind::mesh_3d;
  b.add_overlay(external);
  return b.build();
}

TEST(Dash, DescribeLayout) {
  const auto doc = describe(two_overlays());
  ASSERT_EQ(doc.adaptation_sets.size(), 3u);
  const auto& vp = doc.adaptation_sets[0];
  EXPECT_EQ(vp.kind, ContentKind::background);
  ASSERT_TRUE(vp.vwpt);
  EXPECT_EQ(vp.vwpt->viewpoint_id, "a,b");
  EXPECT_FALSE(vp.ovly);
  const auto& ov = doc.adaptation_sets[1];
  EXPECT_EQ(ov.kind, ContentKind::overlay);
  EXPECT_EQ(ov.representation_ids, std::vector<std::string>{"2"});
  ASSERT_TRUE(ov.ovly);
  EXPECT_EQ(ov.ovly->overlay_ids, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(*ov.ovly->priorities, (std::vector<std::uint32_t>{3, 0}));
  EXPECT_EQ(doc.adaptation_sets[2].kind, ContentKind::audio);
}

TEST(Dash, XmlEscapesIdsAndListsPriorities) {
  const auto xml = generate_mpd(two_overlays());
  EXPECT_NE(xml.find(R"(value="a%2Cb,1,-2,3,0")"), std::string::npos) << xml;
  EXPECT_NE(xml.find(R"(value="1,2" priority="3,0")"), std::string::npos) << xml;
  EXPECT_NE(xml.find(R"(contentType="audio")"), std::string::npos);
  EXPECT_EQ(parse_mpd(xml).adaptation_sets[0].vwpt->viewpoint_id, "a,b");
}

const char* kMismatch = R"(<?xml version="1.0"?>
<MPD xmlns="urn:mpeg:dash:schema:mpd:2011"><Period>
  <AdaptationSet id="1" contentType="video">
    <SupplementalProperty schemeIdUri="urn:example:omaf:ovly" value="1,2" priority="0"/>
    <Representation id="5"/>
  </AdaptationSet>
</Period></MPD>)";

TEST(Dash, PriorityLengthMismatchIsRejected) {
  try {
    parse_mpd(kMismatch);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::priority_len_mismatch);
    EXPECT_EQ(e.code_name(), "PRIORITY_LEN_MISMATCH");
  }
}

TEST(Dash, PrefixesAndUnknownContentAreTolerated) {
  const char* xml = R"(<?xml version="1.0"?>
<mpd:MPD xmlns:mpd="urn:mpeg:dash:schema:mpd:2011" xmlns:x="urn:other">
  <mpd:BaseURL>http://example.com/</mpd:BaseURL>
  <mpd:Period id="p">
    <mpd:AdaptationSet id="7" contentType="video" x:extra="1">
      <mpd:EssentialProperty schemeIdUri="urn:example:omaf:ovly" value="4"/>
      <x:Unknown/>
      <mpd:Representation id="9" bandwidth="100"/>
    </mpd:AdaptationSet>
    <mpd:AdaptationSet id="8" contentType="text">
      <mpd:Representation id="10"/>
    </mpd:AdaptationSet>
  </mpd:Period>
</mpd:MPD>)";
  const auto doc = parse_mpd(xml);
  ASSERT_EQ(doc.adaptation_sets.size(), 2u);
  EXPECT_EQ(doc.adaptation_sets[0].id, 7u);
  EXPECT_EQ(doc.adaptation_sets[0].kind, ContentKind::overlay);
  EXPECT_EQ(doc.adaptation_sets[0].ovly->overlay_ids, std::vector<std::uint32_t>{4});
  EXPECT_FALSE(doc.adaptation_sets[0].ovly->priorities);
  EXPECT_EQ(doc.adaptation_sets[1].kind, ContentKind::metadata);
}

TEST(Dash, MalformedInputIsAParseError) {
  EXPECT_THROW(parse_mpd("<MPD><Period>"), ParseError);
  EXPECT_THROW(parse_mpd("<Other/>"), ParseError);
  EXPECT_THROW(parse_mpd(""), ParseError);
  const char* bad_value = R"(<MPD><Period><AdaptationSet id="1">
      <Viewpoint schemeIdUri="urn:example:omaf:vwpt" value="a,1,2"/></AdaptationSet></Period></MPD>)";
  EXPECT_THROW(parse_mpd(bad_value), ParseError);
  const char* bad_ids = R"(<MPD><Period><AdaptationSet id="1">
      <SupplementalProperty schemeIdUri="urn:example:omaf:ovly" value="1,x"/></AdaptationSet></Period></MPD>)";
  EXPECT_THROW(parse_mpd(bad_ids), ParseError);
}

TEST(Dash, DescribeRefusesInvalidPresentations) {
  Presentation p;
  Viewpoint v;
  p.viewpoints.push_back(v);
  EXPECT_THROW(describe(p), ValidationFailed);
}

TEST(Dash, GenerationIsDeterministic) {
  Rng a(9), b(9);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(generate_mpd(gen::random_presentation(a)), generate_mpd(gen::random_presentation(b)));
}

}  // namespace
