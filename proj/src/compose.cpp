#include <cmath>
#include <cstddef>

#include "omaf/error.hpp"
#include "omaf/playback.hpp"

namespace omaf::playback {

namespace {

constexpr std::size_t kParallelPixelThreshold = 1 << 14;

void check_layer(const Raster& background, const Layer& layer, std::size_t index) {
  const auto& r = layer.placement;
  const std::string where = "layer " + std::to_string(index);
  if (r.width == 0 || r.height == 0 || r.right() > background.width || r.bottom() > background.height) {
    throw Error(Errc::geometry, where + ": placement lies outside the background");
  }
  const auto& src = layer.raster;
  if (src.width == 0 || src.height == 0 || src.pixels.size() != 4 * std::size_t{src.width} * src.height) {
    throw Error(Errc::geometry, where + ": source raster is empty or malformed");
  }
  if (!(layer.opacity >= 0.0 && layer.opacity <= 1.0)) {
    throw Error(Errc::domain, where + ": opacity must lie in [0, 1]");
  }
}

std::uint8_t blend(double alpha, std::uint8_t src, std::uint8_t dst) {
  const double v = std::round(alpha * src + (1.0 - alpha) * dst);
  return static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
}

// Blends one row of the placement; the source is sampled nearest-neighbour.
void blend_row(Raster& out, const Layer& layer, std::uint32_t row) {
  const auto& r = layer.placement;
  const auto& src = layer.raster;
  const std::uint32_t sy = static_cast<std::uint32_t>(std::uint64_t{row} * src.height / r.height);
  for (std::uint32_t col = 0; col < r.width; ++col) {
    const std::uint32_t sx = static_cast<std::uint32_t>(std::uint64_t{col} * src.width / r.width);
    const std::uint8_t* s = src.at(sx, sy);
    std::uint8_t* d = out.at(r.x + col, r.y + row);
    const double alpha = layer.opacity * (layer.use_alpha ? s[3] / 255.0 : 1.0);
    for (int c = 0; c < 4; ++c) d[c] = blend(alpha, s[c], d[c]);
  }
}

}  // namespace

Raster compose(const Raster& background, std::span<const Layer> layers) {
  Raster out = background;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    check_layer(background, layer, i);
    const auto rows = static_cast<std::int64_t>(layer.placement.height);
    const bool parallel = layer.placement.area() >= kParallelPixelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t row = 0; row < rows; ++row) blend_row(out, layer, static_cast<std::uint32_t>(row));
  }
  return out;
}

Raster compose_serial(const Raster& background, std::span<const Layer> layers) {
  Raster out = background;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    check_layer(background, layer, i);
    for (std::uint32_t row = 0; row < layer.placement.height; ++row) blend_row(out, layer, row);
  }
  return out;
}

}  // namespace omaf::playback
