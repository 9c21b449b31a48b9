#pragma once

// JSON manifest mirroring Presentation field-for-field (see
// docs/manifest-schema.md). Read errors surface as ParseError.

#include <string>
#include <string_view>

#include <json.hpp>

#include "omaf/model.hpp"

namespace omaf {

nlohmann::json to_json(const Presentation& p);
nlohmann::json to_json(const TrackDescriptor& t);
nlohmann::json to_json(const SphereRegion& r);
nlohmann::json to_json(const ViewingOrientation& o);
nlohmann::json to_json(const Rect2D& r);
nlohmann::json to_json(const TileGroup& g);

Presentation presentation_from_json(const nlohmann::json& j);
TrackDescriptor track_from_json(const nlohmann::json& j);
SphereRegion region_from_json(const nlohmann::json& j);
ViewingOrientation orientation_from_json(const nlohmann::json& j);
Rect2D rect_from_json(const nlohmann::json& j);
GpsPosition gps_from_json(const nlohmann::json& j);
TileGroup tile_group_from_json(const nlohmann::json& j);
ErpRegionPayload erp_region_from_json(const nlohmann::json& j);

// Two-space indented, trailing newline.
std::string write_manifest(const Presentation& p);
Presentation read_manifest(std::string_view text);

// Parses text as JSON, mapping syntax errors to ParseError.
nlohmann::json parse_json_text(std::string_view text);

}  // namespace omaf
