#include <gtest/gtest.h>

#include <functional>

#include "gen.hpp"
#include "omaf/builder.hpp"
#include "omaf/error.hpp"
#include "omaf/manifest_json.hpp"
#include "omaf/validate.hpp"

namespace {

using namespace omaf;
using omaf::gen::Rng;

// One background track, one image, two viewpoints, one overlay and one
// recommended-viewport track; every mutation below breaks exactly one rule.
Presentation base() {
  PresentationBuilder b;
  const auto video = b.add_track(make_video_track(Codec::HEVC_Main10, {5, 1}, Projection::ERP, {3840, 1920}));
  TrackDescriptor image;
  image.media_kind = MediaKind::image;
  image.codec = Codec::JPEG;
  image.projection = Projection::none;
  image.dims = PictureDims{640, 480};
  b.add_track(image);
  b.add_timed_metadata({0, MetadataKind::recommended_viewport, {{0, SphereRegion{}}}});

  Viewpoint a;
  a.viewpoint_id = "a";
  a.track_ids = {video};
  a.switch_rules.push_back({"b", std::nullopt, TimelineMode::continue_time, std::nullopt, true, 3000});
  Viewpoint c;
  c.viewpoint_id = "b";
  c.switch_rules.push_back({"a", std::nullopt, TimelineMode::offset, 500, false, std::nullopt});
  b.add_viewpoint(a).add_viewpoint(c);

  Overlay o;
  o.source = {OverlaySourceKind::region_of_image, 2, Rect2D{0, 0, 320, 240}};
  o.rendering.kind = OverlayRenderingKind::viewport_relative;
  o.rendering.viewport_rect = NormalizedRect{0.1, 0.1, 0.3, 0.3};
  b.add_overlay(o);
  return b.build();
}

struct Mutation {
  const char* name;
  std::function<void(Presentation&)> apply;
  const char* code;
  const char* path;
};

std::vector<Mutation> mutations() {
  return {
      {"duplicate track", [](Presentation& p) { p.tracks[1].track_id = p.tracks[0].track_id; }, codes::kDuplicateId,
       "tracks[0].track_id"},
      {"zero track id", [](Presentation& p) { p.tracks[0].track_id = 0; }, codes::kIdNotPositive,
       "tracks[0].track_id"},
      {"level on JPEG", [](Presentation& p) { p.tracks[1].level = Level{1, 0}; }, codes::kLevelPresence,
       "tracks[1].level"},
      {"missing level", [](Presentation& p) { p.tracks[0].level.reset(); }, codes::kLevelPresence,
       "tracks[0].level"},
      {"video without projection", [](Presentation& p) { p.tracks[0].projection.reset(); },
       codes::kProjectionPresence, "tracks[0].projection"},
      {"zero dims", [](Presentation& p) { p.tracks[0].dims = PictureDims{0, 10}; }, codes::kDimsInvalid,
       "tracks[0].dims"},
      {"coverage on fisheye",
       [](Presentation& p) {
         p.tracks[0].projection = Projection::fisheye;
         p.tracks[0].coverage = SphereRegion{};
       },
       codes::kCoverageProjection, "tracks[0].coverage"},
      {"coverage out of range", [](Presentation& p) { p.tracks[0].coverage = SphereRegion{{0, 0, 0}, 400, 10}; },
       codes::kRegionRange, "tracks[0].coverage"},
      {"empty viewpoint id", [](Presentation& p) { p.viewpoints[1].viewpoint_id.clear(); }, codes::kIdEmpty,
       "viewpoints[1].viewpoint_id"},
      {"gps out of range", [](Presentation& p) { p.viewpoints[0].gps = GpsPosition{91, 0, std::nullopt}; },
       codes::kGpsRange, "viewpoints[0].gps"},
      {"rotation out of range", [](Presentation& p) { p.viewpoints[0].orientation.pitch = 95; },
       codes::kOrientationRange, "viewpoints[0].orientation"},
      {"dangling viewpoint track", [](Presentation& p) { p.viewpoints[0].track_ids.push_back(77); },
       codes::kDanglingRef, "viewpoints[0].track_ids[1]"},
      {"dangling switch target", [](Presentation& p) { p.viewpoints[0].switch_rules[0].target_viewpoint_id = "zz"; },
       codes::kDanglingRef, "viewpoints[0].switch_rules[0].target_viewpoint_id"},
      {"offset without value", [](Presentation& p) { p.viewpoints[1].switch_rules[0].offset_ms.reset(); },
       codes::kOffsetMode, "viewpoints[1].switch_rules[0].offset_ms"},
      {"negative offset", [](Presentation& p) { p.viewpoints[1].switch_rules[0].offset_ms = -1; }, codes::kOffsetMode,
       "viewpoints[1].switch_rules[0].offset_ms"},
      {"zero window", [](Presentation& p) { p.viewpoints[0].switch_rules[0].selection_window_ms = 0; },
       codes::kSelectionWindow, "viewpoints[0].switch_rules[0].selection_window_ms"},
      {"two defaults",
       [](Presentation& p) { p.viewpoints[0].switch_rules.push_back(p.viewpoints[0].switch_rules[0]); },
       codes::kMultipleDefaultRules, "viewpoints[0].switch_rules"},
      {"empty loop", [](Presentation& p) { p.viewpoints[0].loop = LoopInfo{100, 100, 0}; }, codes::kLoopRange,
       "viewpoints[0].loop"},
      {"dynamic without track", [](Presentation& p) { p.viewpoints[0].dynamic = true; }, codes::kDynamicNoTrack,
       "viewpoints[0].dynamic"},
      {"zero overlay id", [](Presentation& p) { p.overlays[0].overlay_id = 0; }, codes::kIdNotPositive,
       "overlays[0].overlay_id"},
      {"external with ref", [](Presentation& p) {
         p.overlays[0].source = {OverlaySourceKind::external, 2, std::nullopt};
       },
       codes::kSourceRef, "overlays[0].source.ref_id"},
      {"region kind without region", [](Presentation& p) { p.overlays[0].source.region.reset(); },
       codes::kSourceRegion, "overlays[0].source.region"},
      {"image ref to video", [](Presentation& p) { p.overlays[0].source.ref_id = 1; }, codes::kDanglingRef,
       "overlays[0].source.ref_id"},
      {"region outside host", [](Presentation& p) { p.overlays[0].source.region = Rect2D{400, 0, 320, 240}; },
       codes::kRectOutOfBounds, "overlays[0].source.region"},
      {"empty region", [](Presentation& p) { p.overlays[0].source.region = Rect2D{0, 0, 0, 240}; },
       codes::kRectInvalid, "overlays[0].source.region"},
      {"rendering fields", [](Presentation& p) { p.overlays[0].rendering.sphere_position = SphereRegion{}; },
       codes::kRenderingFields, "overlays[0].rendering"},
      {"viewport rect overflow", [](Presentation& p) { p.overlays[0].rendering.viewport_rect->x = 0.8; },
       codes::kNormalizedRect, "overlays[0].rendering.viewport_rect"},
      {"plane distance",
       [](Presentation& p) {
         p.overlays[0].rendering = {OverlayRenderingKind::sphere_relative_2d, std::nullopt, std::nullopt,
                                    PlanePosition{{}, 1.5, 1, 1}};
       },
       codes::kPlaneDistance, "overlays[0].rendering.plane_position.distance"},
      {"plane size",
       [](Presentation& p) {
         p.overlays[0].rendering = {OverlayRenderingKind::sphere_relative_2d, std::nullopt, std::nullopt,
                                    PlanePosition{{}, 0.5, 0, 1}};
       },
       codes::kPlaneSize, "overlays[0].rendering.plane_position"},
      {"opacity", [](Presentation& p) { p.overlays[0].properties.opacity = 1.5; }, codes::kOpacityRange,
       "overlays[0].properties.opacity"},
      {"toggle without switch", [](Presentation& p) { p.overlays[0].interaction.toggle_region = SphereRegion{}; },
       codes::kToggleRequiresSwitch, "overlays[0].interaction.toggle_region"},
      {"timed without track", [](Presentation& p) { p.overlays[0].controls_timing = ControlsTiming::timed; },
       codes::kTimedNoTrack, "overlays[0].controls_timing"},
      {"sample order",
       [](Presentation& p) { p.timed_metadata[0].samples.push_back({0, SphereRegion{}}); },
       codes::kSampleOrder, "timed_metadata[0].samples[1].time_ms"},
      {"payload kind",
       [](Presentation& p) { p.timed_metadata[0].samples.push_back({10, ViewingOrientation{}}); },
       codes::kPayloadKind, "timed_metadata[0].samples[1].payload"},
      {"rwqr empty",
       [](Presentation& p) { p.timed_metadata.push_back({9, MetadataKind::rwqr, {{0, RwqrPayload{}}}}); },
       codes::kRwqrEmpty, "timed_metadata[1].samples[0].payload"},
      {"rwqr rank",
       [](Presentation& p) {
         p.timed_metadata.push_back({9, MetadataKind::rwqr, {{0, RwqrPayload{{{SphereRegion{}, 0}}}}}});
       },
       codes::kRwqrRank, "timed_metadata[1].samples[0].payload.entries[0].quality_rank"},
      {"erp grid",
       [](Presentation& p) {
         p.timed_metadata.push_back(
             {9, MetadataKind::erp_region, {{0, ErpRegionPayload{2, 2, {1, 2, 3}, ErpValueKind::heatmap}}}});
       },
       codes::kErpGrid, "timed_metadata[1].samples[0].payload"},
      {"dangling control",
       [](Presentation& p) {
         p.timed_metadata.push_back(
             {9, MetadataKind::overlay_controls, {{0, OverlayControlSample{42, true, std::nullopt}}}});
       },
       codes::kDanglingRef, "timed_metadata[1].samples[0].payload.overlay_id"},
      {"tile overlap",
       [](Presentation& p) {
         p.tile_groups.push_back({1, {{1, 0, 0, {0, 0, 10, 10}}, {1, 1, 0, {5, 0, 10, 10}}}});
       },
       codes::kTileLayout, "tile_groups[0].members"},
      {"tile gap",
       [](Presentation& p) {
         p.tile_groups.push_back({1, {{1, 0, 0, {0, 0, 10, 10}}, {1, 1, 0, {11, 0, 10, 10}}}});
       },
       codes::kTileLayout, "tile_groups[0].members"},
      {"tile non-video",
       [](Presentation& p) { p.tile_groups.push_back({1, {{2, 0, 0, {0, 0, 10, 10}}}}); }, codes::kDanglingRef,
       "tile_groups[0].members[0].track_id"},
      {"viewing space",
       [](Presentation& p) { p.viewing_space = ViewingSpace{ViewingSpaceShape::cuboid, {1, 2}}; },
       codes::kViewingSpace, "viewing_space.extent_mm"},
  };
}

TEST(Validate, BaseIsClean) {
  const auto report = validate_presentation(base());
  EXPECT_TRUE(report.issues.empty());
}

TEST(Validate, EachMutationRaisesItsCode) {
  for (const auto& m : mutations()) {
    auto p = base();
    m.apply(p);
    const auto report = validate_presentation(p);
    ASSERT_FALSE(report.ok()) << m.name;
    bool found = false;
    for (const auto& issue : report.issues) {
      if (issue.code == m.code && issue.path == m.path && issue.severity == Severity::error) found = true;
    }
    EXPECT_TRUE(found) << m.name << ": first issue " << report.issues[0].code << " at " << report.issues[0].path;
  }
}

TEST(Validate, ErpAspectIsOnlyAWarning) {
  auto p = base();
  p.tracks[0].dims = PictureDims{1000, 1000};
  const auto report = validate_presentation(p);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.warning_count(), 1u);
  EXPECT_EQ(report.issues[0].code, codes::kErpAspect);
}

TEST(Validate, DoesNotNormalize) {
  auto p = base();
  p.tracks[0].coverage = SphereRegion{{180.0, 0, 0}, 90, 90};
  EXPECT_FALSE(validate_presentation(p).ok());
  const auto fixed = normalize_angles(p);
  EXPECT_TRUE(validate_presentation(fixed).ok());
  EXPECT_DOUBLE_EQ(fixed.tracks[0].coverage->center.azimuth, -180.0);
}

TEST(Validate, RandomPresentationsAreValidAndDeterministic) {
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto p = gen::random_presentation(rng);
    const auto r1 = validate_presentation(p);
    ASSERT_TRUE(r1.ok()) << r1.issues[0].code << " at " << r1.issues[0].path;
    EXPECT_EQ(r1, validate_presentation(p));
  }
}

TEST(Validate, TilePartitionHelper) {
  EXPECT_EQ(check_tile_partition({{0, 0, 5, 5}, {5, 0, 5, 5}}), "");
  EXPECT_NE(check_tile_partition({{0, 0, 5, 5}, {6, 0, 5, 5}}), "");
  EXPECT_NE(check_tile_partition({}), "");
}

TEST(Builder, AssignsIdsAndAddsMissingMetadata) {
  PresentationBuilder b;
  const auto t1 = b.add_track(make_video_track(Codec::AVC_High, {5, 1}, Projection::ERP, {2048, 1024}));
  const auto t2 = b.add_track(make_video_track(Codec::AVC_High, {5, 1}, Projection::ERP, {2048, 1024}));
  EXPECT_EQ(t1, 1u);
  EXPECT_EQ(t2, 2u);
  Viewpoint v;
  v.viewpoint_id = "moving";
  v.dynamic = true;
  b.add_viewpoint(v);
  Overlay o;
  o.source = {OverlaySourceKind::video_track, t2, std::nullopt};
  o.rendering.kind = OverlayRenderingKind::mesh_3d;
  o.controls_timing = ControlsTiming::timed;
  EXPECT_EQ(b.add_overlay(o), 1u);
  EXPECT_EQ(b.add_overlay(o), 2u);
  const auto p = b.build();
  EXPECT_EQ(p.timed_metadata.size(), 3u);
  EXPECT_EQ(p.timed_metadata[0].kind, MetadataKind::dynamic_viewpoint);
  EXPECT_EQ(p.timed_metadata[0].track_id, 3u);
}

TEST(Builder, ErpTileGridPartitionsThePicture) {
  PresentationBuilder b;
  const auto gid = b.add_erp_tile_grid(4, 2, {3840, 1920});
  const auto p = b.build();
  ASSERT_EQ(p.tile_groups.size(), 1u);
  EXPECT_EQ(p.tile_groups[0].group_id, gid);
  EXPECT_EQ(p.tile_groups[0].members.size(), 8u);
  EXPECT_EQ(p.tracks.size(), 8u);
  EXPECT_DOUBLE_EQ(p.tracks[0].coverage->center.azimuth, 135.0);
}

TEST(Builder, RejectsInvalid) {
  PresentationBuilder b;
  Viewpoint v;
  b.add_viewpoint(v);
  EXPECT_THROW(b.build(), ValidationFailed);
}

TEST(Model, LevelParsingAndOrder) {
  EXPECT_EQ(parse_level("5.1"), (Level{5, 1}));
  EXPECT_EQ(parse_level("6"), (Level{6, 0}));
  EXPECT_LT(parse_level("5.1"), parse_level("5.10"));
  EXPECT_LT(parse_level("5.2"), parse_level("6"));
  EXPECT_EQ(to_string(Level{6, 1}), "6.1");
  for (const char* bad : {"", "5.", ".1", "x", "5.1.2", "300"}) EXPECT_THROW(parse_level(bad), ParseError) << bad;
}

TEST(Model, EnumNamesRoundTrip) {
  for (auto c : {Codec::HEVC_Main10, Codec::AVC_High, Codec::WebVTT, Codec::metadata}) {
    EXPECT_EQ(enum_from_string<Codec>(to_string(c)), c);
  }
  for (auto k : {MetadataKind::rwqr, MetadataKind::overlay_controls}) {
    EXPECT_EQ(enum_from_string<MetadataKind>(to_string(k)), k);
  }
  EXPECT_THROW(enum_from_string<Projection>("cylinder"), ParseError);
}

TEST(Model, PayloadKindMatchesVariantIndex) {
  EXPECT_EQ(payload_kind(TimedPayload{ViewingOrientation{}}), MetadataKind::initial_viewing_orientation);
  EXPECT_EQ(payload_kind(TimedPayload{OverlayControlSample{}}), MetadataKind::overlay_controls);
  EXPECT_EQ(payload_kind(TimedPayload{ErpRegionPayload{}}), MetadataKind::erp_region);
}

TEST(Manifest, RandomPresentationsRoundTripExactly) {
  Rng rng(1234);
  for (int i = 0; i < 300; ++i) {
    const auto p = gen::random_presentation(rng);
    const auto text = write_manifest(p);
    ASSERT_EQ(read_manifest(text), p) << "case " << i;
    EXPECT_EQ(write_manifest(read_manifest(text)), text);
  }
}

TEST(Manifest, ParseErrors) {
  EXPECT_THROW(read_manifest("{"), ParseError);
  EXPECT_THROW(read_manifest("[]"), ParseError);
  EXPECT_THROW(read_manifest(R"({"tracks": [{"track_id": 1, "media_kind": "hologram"}]})"), ParseError);
  EXPECT_THROW(read_manifest(R"({"tracks": [{"track_id": "one"}]})"), ParseError);
}

TEST(Manifest, ReadsDanglingRefsWithoutValidating) {
  const auto p = read_manifest(R"({"overlays": [{"overlay_id": 1,
      "source": {"kind": "video_track", "ref_id": 9},
      "rendering": {"kind": "mesh_3d"}}]})");
  ASSERT_EQ(p.overlays.size(), 1u);
  const auto report = validate_presentation(p);
  ASSERT_EQ(report.error_count(), 1u);
  EXPECT_EQ(report.issues[0].code, codes::kDanglingRef);
}

}  // namespace
