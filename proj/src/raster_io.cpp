#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "omaf/error.hpp"
#include "omaf/playback.hpp"

namespace omaf::playback {

namespace {

struct Netpbm {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> samples;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Header tokens are separated by whitespace; '#' starts a comment that runs
// to the end of the line.
std::string next_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) && data[pos] != '#') ++pos;
  return data.substr(start, pos - start);
}

std::uint32_t header_number(const std::string& data, std::size_t& pos, const std::string& path) {
  const auto token = next_token(data, pos);
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(token, &used);
    if (used == token.size() && v > 0 && v <= 0xFFFFFFFFul) return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
  }
  throw ParseError(path + ": bad header value '" + token + "'", pos);
}

Netpbm read_netpbm(const std::string& path, const char* magic, int channels) {
  const auto data = read_file(path);
  std::size_t pos = 0;
  if (next_token(data, pos) != magic) throw ParseError(path + ": expected a " + magic + " file", 0);
  Netpbm img;
  img.width = header_number(data, pos, path);
  img.height = header_number(data, pos, path);
  if (header_number(data, pos, path) != 255) throw ParseError(path + ": only maxval 255 is supported", pos);
  ++pos;  // single whitespace byte before the raster
  const std::size_t need = std::size_t{img.width} * img.height * channels;
  if (pos > data.size() || data.size() - pos < need) throw ParseError(path + ": truncated raster", pos);
  img.samples.assign(data.begin() + static_cast<std::ptrdiff_t>(pos),
                     data.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

void write_netpbm(const std::string& path, const char* magic, std::uint32_t w, std::uint32_t h,
                  const std::vector<std::uint8_t>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path);
  out << magic << "\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

}  // namespace

Raster read_ppm(const std::string& path, const std::optional<std::string>& alpha_path) {
  const auto rgb = read_netpbm(path, "P6", 3);
  Raster r = Raster::filled(rgb.width, rgb.height, 0, 0, 0, 255);
  for (std::size_t i = 0, n = std::size_t{rgb.width} * rgb.height; i < n; ++i) {
    for (int c = 0; c < 3; ++c) r.pixels[4 * i + c] = rgb.samples[3 * i + c];
  }
  if (alpha_path) {
    const auto alpha = read_netpbm(*alpha_path, "P5", 1);
    if (alpha.width != r.width || alpha.height != r.height) {
      throw ParseError(*alpha_path + ": alpha plane size differs from " + path, 0);
    }
    for (std::size_t i = 0; i < alpha.samples.size(); ++i) r.pixels[4 * i + 3] = alpha.samples[i];
  }
  return r;
}

void write_ppm(const Raster& raster, const std::string& path, const std::optional<std::string>& alpha_path) {
  const std::size_t n = std::size_t{raster.width} * raster.height;
  std::vector<std::uint8_t> rgb(3 * n);
  std::vector<std::uint8_t> alpha(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) rgb[3 * i + c] = raster.pixels[4 * i + c];
    alpha[i] = raster.pixels[4 * i + 3];
  }
  write_netpbm(path, "P6", raster.width, raster.height, rgb);
  if (alpha_path) write_netpbm(*alpha_path, "P5", raster.width, raster.height, alpha);
}

}  // namespace omaf::playback
