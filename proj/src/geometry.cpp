#include "omaf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "omaf/error.hpp"

namespace omaf::geo {

namespace {

constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

// Below this many samples the OpenMP fork/join costs more than the work.
constexpr std::int64_t kParallelSampleThreshold = 1 << 14;

double wrap_signed(double degrees) {
  double w = std::fmod(degrees + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  w -= 180.0;
  // fmod can round -180 - tiny into +180.
  if (w >= 180.0) w -= 360.0;
  return w;
}

struct SampleAxes {
  std::vector<double> azimuths;
  std::vector<double> elevations;
};

SampleAxes sample_axes(const SphereRegion& a, SamplingGrid grid) {
  if (grid.azimuth_samples <= 0 || grid.elevation_samples <= 0) {
    throw Error(Errc::domain, "sampling grid must be positive in both directions");
  }
  SampleAxes axes;
  axes.azimuths.resize(static_cast<std::size_t>(grid.azimuth_samples));
  axes.elevations.resize(static_cast<std::size_t>(grid.elevation_samples));

  const double az_step = a.azimuth_range / grid.azimuth_samples;
  const double az_begin = a.center.azimuth - a.azimuth_range / 2.0;
  for (int i = 0; i < grid.azimuth_samples; ++i) {
    axes.azimuths[static_cast<std::size_t>(i)] = az_begin + (i + 0.5) * az_step;
  }

  const auto bounds = elevation_bounds(a);
  const double z_lo = std::sin(bounds.min * kDegToRad);
  const double z_hi = std::sin(bounds.max * kDegToRad);
  const double z_step = (z_hi - z_lo) / grid.elevation_samples;
  for (int j = 0; j < grid.elevation_samples; ++j) {
    const double z = std::clamp(z_lo + (j + 0.5) * z_step, -1.0, 1.0);
    axes.elevations[static_cast<std::size_t>(j)] = std::asin(z) * kRadToDeg;
  }
  return axes;
}

bool covered(std::span<const SphereRegion> cover, double az, double el) {
  for (const auto& r : cover) {
    if (contains(r, az, el)) return true;
  }
  return false;
}

}  // namespace

double wrap_azimuth(double degrees) { return wrap_signed(degrees); }

ViewingOrientation normalize(const ViewingOrientation& o) {
  double az = o.azimuth;
  double el = wrap_signed(o.elevation);
  if (el > 90.0) {
    el = 180.0 - el;
    az += 180.0;
  } else if (el < -90.0) {
    el = -180.0 - el;
    az += 180.0;
  }
  return {wrap_signed(az), el, wrap_signed(o.tilt)};
}

bool is_normalized(const ViewingOrientation& o) {
  return o.azimuth >= -180.0 && o.azimuth < 180.0 && o.elevation >= -90.0 &&
         o.elevation <= 90.0 && o.tilt >= -180.0 && o.tilt < 180.0;
}

bool is_valid(const SphereRegion& r) {
  return is_normalized(r.center) && r.azimuth_range > 0.0 && r.azimuth_range <= 360.0 &&
         r.elevation_range > 0.0 && r.elevation_range <= 180.0;
}

bool is_valid(const PictureDims& d) { return d.width > 0 && d.height > 0; }

bool fits_within(const Rect2D& r, const PictureDims& d) {
  return r.width > 0 && r.height > 0 && r.right() <= d.width && r.bottom() <= d.height;
}

bool overlaps(const Rect2D& a, const Rect2D& b) {
  return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
}

PixelCoord erp_sphere_to_pixel(const ViewingOrientation& o, const PictureDims& dims) {
  return {(0.5 - o.azimuth / 360.0) * dims.width, (0.5 - o.elevation / 180.0) * dims.height};
}

ViewingOrientation erp_pixel_to_sphere(double u, double v, const PictureDims& dims) {
  if (!is_valid(dims)) throw Error(Errc::domain, "picture dimensions must be positive");
  if (!(u >= 0.0 && u <= dims.width && v >= 0.0 && v <= dims.height)) {
    throw Error(Errc::domain, "pixel coordinate outside the ERP picture");
  }
  const double az = (0.5 - u / dims.width) * 360.0;
  const double el = (0.5 - v / dims.height) * 180.0;
  return {wrap_signed(az), el, 0.0};
}

Vec3 direction(double azimuth_deg, double elevation_deg) {
  const double az = azimuth_deg * kDegToRad;
  const double el = elevation_deg * kDegToRad;
  return {std::cos(el) * std::cos(az), std::sin(el), -std::cos(el) * std::sin(az)};
}

FacePixel cmp_sphere_to_face_pixel(const ViewingOrientation& o, double face_size) {
  const Vec3 d = direction(o.azimuth, o.elevation);
  const double ax = std::abs(d.x);
  const double ay = std::abs(d.y);
  const double az = std::abs(d.z);

  // (s, t) in [-1, 1]: s grows to the face's right, t grows to its top.
  FacePixel out;
  double s = 0.0;
  double t = 0.0;
  if (ax >= ay && ax >= az) {
    if (d.x >= 0.0) {
      out.face = CubeFace::pos_x;
      s = d.z / ax;
    } else {
      out.face = CubeFace::neg_x;
      s = -d.z / ax;
    }
    t = d.y / ax;
  } else if (ay >= az) {
    s = d.z / ay;
    if (d.y >= 0.0) {
      out.face = CubeFace::pos_y;
      t = -d.x / ay;
    } else {
      out.face = CubeFace::neg_y;
      t = d.x / ay;
    }
  } else {
    if (d.z >= 0.0) {
      out.face = CubeFace::pos_z;
      s = -d.x / az;
    } else {
      out.face = CubeFace::neg_z;
      s = d.x / az;
    }
    t = d.y / az;
  }
  out.u = std::clamp((s + 1.0) * 0.5, 0.0, 1.0) * face_size;
  out.v = std::clamp((1.0 - t) * 0.5, 0.0, 1.0) * face_size;
  return out;
}

PixelCoord cmp_face_origin(CubeFace face, double face_size) {
  const int index = static_cast<int>(face);
  return {(index % 3) * face_size, (index / 3) * face_size};
}

PixelCoord cmp_sphere_to_packed_pixel(const ViewingOrientation& o, double face_size) {
  const FacePixel fp = cmp_sphere_to_face_pixel(o, face_size);
  const PixelCoord origin = cmp_face_origin(fp.face, face_size);
  return {origin.u + fp.u, origin.v + fp.v};
}

SphereRegion viewport_region(const ViewingOrientation& o, double hfov, double vfov) {
  if (!(hfov > 0.0 && hfov <= 360.0)) throw Error(Errc::domain, "hfov must be in (0, 360]");
  if (!(vfov > 0.0 && vfov <= 180.0)) throw Error(Errc::domain, "vfov must be in (0, 180]");
  return {o, hfov, vfov};
}

ElevationBounds elevation_bounds(const SphereRegion& r) {
  const double half = r.elevation_range / 2.0;
  return {std::max(-90.0, r.center.elevation - half), std::min(90.0, r.center.elevation + half)};
}

bool contains(const SphereRegion& r, double azimuth, double elevation) {
  const auto bounds = elevation_bounds(r);
  if (elevation < bounds.min || elevation > bounds.max) return false;
  if (r.azimuth_range >= 360.0) return true;
  return std::abs(wrap_signed(azimuth - r.center.azimuth)) <= r.azimuth_range / 2.0;
}

double region_solid_angle(const SphereRegion& r) {
  const auto bounds = elevation_bounds(r);
  return r.azimuth_range * kDegToRad *
         (std::sin(bounds.max * kDegToRad) - std::sin(bounds.min * kDegToRad));
}

double coverage_fraction_serial(const SphereRegion& a, std::span<const SphereRegion> cover,
                                SamplingGrid grid) {
  const SampleAxes axes = sample_axes(a, grid);
  std::int64_t hits = 0;
  for (double az : axes.azimuths) {
    for (double el : axes.elevations) {
      if (covered(cover, az, el)) ++hits;
    }
  }
  return static_cast<double>(hits) /
         (static_cast<double>(axes.azimuths.size()) * static_cast<double>(axes.elevations.size()));
}

double coverage_fraction(const SphereRegion& a, std::span<const SphereRegion> cover,
                         SamplingGrid grid) {
  const SampleAxes axes = sample_axes(a, grid);
  const auto n_az = static_cast<std::int64_t>(axes.azimuths.size());
  const auto n_el = static_cast<std::int64_t>(axes.elevations.size());
  const auto total = n_az * n_el * static_cast<std::int64_t>(std::max<std::size_t>(cover.size(), 1));

  std::int64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static) if (total >= kParallelSampleThreshold)
  for (std::int64_t i = 0; i < n_az; ++i) {
    const double az = axes.azimuths[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < n_el; ++j) {
      if (covered(cover, az, axes.elevations[static_cast<std::size_t>(j)])) ++hits;
    }
  }
  return static_cast<double>(hits) / (static_cast<double>(n_az) * static_cast<double>(n_el));
}

double region_overlap_fraction(const SphereRegion& a, const SphereRegion& b, SamplingGrid grid) {
  return coverage_fraction(a, std::span<const SphereRegion>(&b, 1), grid);
}

double region_overlap_fraction_serial(const SphereRegion& a, const SphereRegion& b,
                                      SamplingGrid grid) {
  return coverage_fraction_serial(a, std::span<const SphereRegion>(&b, 1), grid);
}

SphereRegion erp_rect_region(const Rect2D& rect, const PictureDims& dims) {
  if (!fits_within(rect, dims)) throw Error(Errc::geometry, "rect does not fit the ERP picture");
  const double cx = rect.x + rect.width / 2.0;
  const double cy = rect.y + rect.height / 2.0;
  SphereRegion region;
  region.center.azimuth = wrap_signed((0.5 - cx / dims.width) * 360.0);
  region.center.elevation = (0.5 - cy / dims.height) * 180.0;
  region.azimuth_range = 360.0 * rect.width / dims.width;
  region.elevation_range = 180.0 * rect.height / dims.height;
  return region;
}

}  // namespace omaf::geo
