#pragma once

// Sphere and projection math shared by the playback, strategy and CLI layers.
//
// Conventions used throughout the toolkit:
//  * Angles are double-precision degrees.
//  * Azimuth grows counter-clockwise seen from above the sphere, so positive
//    azimuth is to the viewer's left of the forward direction.
//  * Elevation is positive above the equator.
//  * ERP pictures put azimuth +180 at the left edge and -180 at the right
//    edge; elevation +90 is the top row.
//  * A SphereRegion is bounded by two azimuth circles and two elevation
//    circles (a rectangle in azimuth/elevation space).

#include <array>
#include <compare>
#include <cstdint>
#include <span>

namespace omaf::geo {

struct ViewingOrientation {
  double azimuth = 0.0;    // [-180, 180)
  double elevation = 0.0;  // [-90, 90]
  double tilt = 0.0;       // [-180, 180)

  friend bool operator==(const ViewingOrientation&, const ViewingOrientation&) = default;
};

struct SphereRegion {
  ViewingOrientation center;
  double azimuth_range = 360.0;   // (0, 360]
  double elevation_range = 180.0; // (0, 180]

  friend bool operator==(const SphereRegion&, const SphereRegion&) = default;
};

struct Rect2D {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  std::uint64_t right() const { return std::uint64_t{x} + width; }
  std::uint64_t bottom() const { return std::uint64_t{y} + height; }
  std::uint64_t area() const { return std::uint64_t{width} * height; }

  friend bool operator==(const Rect2D&, const Rect2D&) = default;
  friend auto operator<=>(const Rect2D&, const Rect2D&) = default;
};

struct PictureDims {
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  friend bool operator==(const PictureDims&, const PictureDims&) = default;
};

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

enum class CubeFace : std::uint8_t { pos_x, neg_x, pos_y, neg_y, pos_z, neg_z };

struct FacePixel {
  CubeFace face = CubeFace::pos_x;
  double u = 0.0;
  double v = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline constexpr double kPi = 3.14159265358979323846;

double wrap_azimuth(double degrees);  // into [-180, 180)

// Maps arbitrary angles into the canonical ranges. Elevations past a pole are
// reflected back and the azimuth is turned by 180 degrees.
ViewingOrientation normalize(const ViewingOrientation& o);

bool is_normalized(const ViewingOrientation& o);
bool is_valid(const SphereRegion& r);
bool is_valid(const PictureDims& d);

bool fits_within(const Rect2D& r, const PictureDims& d);
bool overlaps(const Rect2D& a, const Rect2D& b);

PixelCoord erp_sphere_to_pixel(const ViewingOrientation& o, const PictureDims& dims);

// Throws Error(Errc::domain) when (u, v) lies outside the picture.
ViewingOrientation erp_pixel_to_sphere(double u, double v, const PictureDims& dims);

// Unit direction for (azimuth, elevation) in the cube-map frame:
// +X forward, +Y up, +Z to the viewer's right (azimuth -90).
Vec3 direction(double azimuth_deg, double elevation_deg);

// Gnomonic cube-map projection. The face is the dominant axis of the unit
// direction; exact ties go to the earlier face in the order
// +X, -X, +Y, -Y, +Z, -Z. Face images are upright as seen from the sphere
// centre; the +Y face has forward at its bottom edge and -Y at its top edge.
FacePixel cmp_sphere_to_face_pixel(const ViewingOrientation& o, double face_size);

// Top-left corner of a face in the packed 3x2 layout
// (row 0: +X -X +Y, row 1: -Y +Z -Z).
PixelCoord cmp_face_origin(CubeFace face, double face_size);
PixelCoord cmp_sphere_to_packed_pixel(const ViewingOrientation& o, double face_size);

// Throws Error(Errc::domain) unless 0 < hfov <= 360 and 0 < vfov <= 180.
// Tilt is not represented in the resulting region.
SphereRegion viewport_region(const ViewingOrientation& o, double hfov, double vfov);

struct ElevationBounds {
  double min = -90.0;
  double max = 90.0;
};
ElevationBounds elevation_bounds(const SphereRegion& r);

bool contains(const SphereRegion& r, double azimuth, double elevation);

double region_solid_angle(const SphereRegion& r);

struct SamplingGrid {
  int azimuth_samples = 64;
  int elevation_samples = 64;
};

// Fraction of a's solid angle that lies inside b. `a` is sampled on an
// equal-area grid (uniform in azimuth and in sin(elevation)) at cell
// midpoints, so every sample carries the same weight and the result is an
// exact integer ratio, reproducible across runs and thread counts.
double region_overlap_fraction(const SphereRegion& a, const SphereRegion& b,
                               SamplingGrid grid = {});
double region_overlap_fraction_serial(const SphereRegion& a, const SphereRegion& b,
                                      SamplingGrid grid = {});

// Fraction of a's solid angle covered by the union of `cover`.
double coverage_fraction(const SphereRegion& a, std::span<const SphereRegion> cover,
                         SamplingGrid grid = {});
double coverage_fraction_serial(const SphereRegion& a, std::span<const SphereRegion> cover,
                                SamplingGrid grid = {});

// Sphere region spanned by a rectangle of an ERP picture.
SphereRegion erp_rect_region(const Rect2D& rect, const PictureDims& dims);

}  // namespace omaf::geo
