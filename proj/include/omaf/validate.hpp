#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "omaf/error.hpp"
#include "omaf/model.hpp"

namespace omaf {

enum class Severity { error, warning };

struct Issue {
  Severity severity = Severity::error;
  std::string code;  // e.g. "DANGLING_REF"
  std::string message;
  std::string path;  // e.g. "overlays[0].source.ref_id"

  friend bool operator==(const Issue&, const Issue&) = default;
};

struct ValidationReport {
  std::vector<Issue> issues;  // document order

  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool ok() const { return error_count() == 0; }

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Validation codes. Each type invariant maps to at least one of these.
namespace codes {
inline constexpr const char* kDuplicateId = "DUPLICATE_ID";
inline constexpr const char* kIdNotPositive = "ID_NOT_POSITIVE";
inline constexpr const char* kIdEmpty = "ID_EMPTY";
inline constexpr const char* kDanglingRef = "DANGLING_REF";
inline constexpr const char* kOrientationRange = "ORIENTATION_RANGE";
inline constexpr const char* kRegionRange = "REGION_RANGE";
inline constexpr const char* kDimsInvalid = "DIMS_INVALID";
inline constexpr const char* kErpAspect = "ERP_ASPECT";  // warning
inline constexpr const char* kRectInvalid = "RECT_INVALID";
inline constexpr const char* kRectOutOfBounds = "RECT_OUT_OF_BOUNDS";
inline constexpr const char* kLevelPresence = "LEVEL_PRESENCE";
inline constexpr const char* kProjectionPresence = "PROJECTION_PRESENCE";
inline constexpr const char* kCoverageProjection = "COVERAGE_PROJECTION";
inline constexpr const char* kGpsRange = "GPS_RANGE";
inline constexpr const char* kDynamicNoTrack = "DYNAMIC_NO_TRACK";
inline constexpr const char* kMultipleDefaultRules = "MULTIPLE_DEFAULT_RULES";
inline constexpr const char* kOffsetMode = "OFFSET_MODE";
inline constexpr const char* kSelectionWindow = "SELECTION_WINDOW";
inline constexpr const char* kLoopRange = "LOOP_RANGE";
inline constexpr const char* kSourceRef = "SOURCE_REF";
inline constexpr const char* kSourceRegion = "SOURCE_REGION";
inline constexpr const char* kRenderingFields = "RENDERING_FIELDS";
inline constexpr const char* kPlaneDistance = "PLANE_DISTANCE";
inline constexpr const char* kPlaneSize = "PLANE_SIZE";
inline constexpr const char* kNormalizedRect = "NORMALIZED_RECT";
inline constexpr const char* kOpacityRange = "OPACITY_RANGE";
inline constexpr const char* kToggleRequiresSwitch = "TOGGLE_REQUIRES_SWITCH";
inline constexpr const char* kTimedNoTrack = "TIMED_NO_TRACK";
inline constexpr const char* kSampleOrder = "SAMPLE_ORDER";
inline constexpr const char* kPayloadKind = "PAYLOAD_KIND";
inline constexpr const char* kRwqrEmpty = "RWQR_EMPTY";
inline constexpr const char* kRwqrRank = "RWQR_RANK";
inline constexpr const char* kErpGrid = "ERP_GRID";
inline constexpr const char* kTileLayout = "TILE_LAYOUT";
inline constexpr const char* kViewingSpace = "VIEWING_SPACE";
}  // namespace codes

// Pure and deterministic; never throws for any input.
ValidationReport validate_presentation(const Presentation& p);

// Thrown by operations that refuse invalid presentations.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Throws ValidationFailed when the report has errors.
void require_valid(const Presentation& p);

// Checks that the rects tile their bounding box with no overlap or gap.
// Returns an empty string on success, a description otherwise.
std::string check_tile_partition(const std::vector<Rect2D>& rects);

}  // namespace omaf
