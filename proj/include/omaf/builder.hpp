#pragma once

#include <cstdint>
#include <string>

#include "omaf/model.hpp"

namespace omaf {

// Assembles presentations with automatic id assignment. build() validates and
// throws ValidationFailed, so anything it returns has zero errors.
class PresentationBuilder {
 public:
  PresentationBuilder& brand(std::string brand);

  // An id of 0 is replaced by the next free track id.
  std::uint32_t add_track(TrackDescriptor track);
  std::uint32_t add_timed_metadata(TimedMetadataTrack track);

  // A dynamic viewpoint without a dynamic_viewpoint metadata sample gets one
  // (at t = 0, carrying its static position) when build() runs.
  PresentationBuilder& add_viewpoint(Viewpoint viewpoint);

  // An id of 0 is replaced by the next free overlay id. Timed overlays
  // without control samples get an "active" sample at t = 0 on build().
  std::uint32_t add_overlay(Overlay overlay);

  // Adds cols x rows ERP video tracks of equal size covering `full` and a
  // tile group binding them; returns the group id.
  std::uint32_t add_erp_tile_grid(std::uint32_t cols, std::uint32_t rows, PictureDims full,
                                  Codec codec = Codec::HEVC_Main10, Level level = {5, 1});

  PresentationBuilder& viewing_space(ViewingSpace space);

  Presentation build() const;

 private:
  std::uint32_t next_track_id() const;

  Presentation p_;
};

TrackDescriptor make_video_track(Codec codec, Level level, Projection projection, PictureDims dims,
                                 bool stereo = false);

}  // namespace omaf
