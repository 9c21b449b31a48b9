#include <algorithm>
#include <cmath>
#include <limits>

#include "omaf/codec.hpp"
#include "omaf/error.hpp"

namespace omaf::codec {

namespace {

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<Box> decode_level(std::span<const std::uint8_t> bytes, std::size_t base, int depth) {
  if (depth > kMaxNesting) throw ParseError("box nesting too deep", base);
  std::vector<Box> boxes;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t remaining = bytes.size() - pos;
    if (remaining < 8) {
      throw ParseError("truncated box header (" + std::to_string(remaining) + " bytes left)", base + pos);
    }
    const std::uint32_t size = read_be32(bytes.data() + pos);
    Box box;
    std::copy_n(bytes.data() + pos + 4, 4, box.type.begin());
    if (size < 8) {
      throw ParseError("box size " + std::to_string(size) + " is below the 8-byte header", base + pos,
                       to_string(box.type));
    }
    if (size > remaining) {
      throw ParseError("box declares " + std::to_string(size) + " bytes but only " +
                           std::to_string(remaining) + " remain",
                       base + pos, to_string(box.type));
    }
    const auto payload = bytes.subspan(pos + 8, size - 8);
    if (is_container_type(box.type)) {
      box.payload = decode_level(payload, base + pos + 8, depth + 1);
    } else {
      box.payload = std::vector<std::uint8_t>(payload.begin(), payload.end());
    }
    boxes.push_back(std::move(box));
    pos += size;
  }
  return boxes;
}

void encode_into(std::vector<std::uint8_t>& out, const Box& box) {
  const std::uint64_t size = box.encoded_size();
  if (size - 8 > kMaxPayloadSize) {
    throw Error(Errc::capacity, "box '" + to_string(box.type) + "' payload exceeds 2^32-9 bytes");
  }
  write_be32(out, static_cast<std::uint32_t>(size));
  out.insert(out.end(), box.type.begin(), box.type.end());
  if (box.is_container()) {
    for (const auto& child : box.children()) encode_into(out, child);
  } else {
    out.insert(out.end(), box.bytes().begin(), box.bytes().end());
  }
}

}  // namespace

std::string to_string(const FourCC& type) {
  std::string s;
  for (char c : type) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7F) {
      s.push_back(c);
    } else {
      static constexpr char kDigits[] = "0123456789abcdef";
      s += "\\x";
      s.push_back(kDigits[u >> 4]);
      s.push_back(kDigits[u & 0xF]);
    }
  }
  return s;
}

std::uint64_t Box::encoded_size() const {
  std::uint64_t size = 8;
  if (is_container()) {
    for (const auto& child : children()) size += child.encoded_size();
  } else {
    size += bytes().size();
  }
  return size;
}

bool is_container_type(const FourCC& type) {
  return type == fourcc("vwpt") || type == fourcc("tmtd");
}

std::vector<Box> decode_box_tree(std::span<const std::uint8_t> bytes) {
  return decode_level(bytes, 0, 0);
}

std::vector<std::uint8_t> encode_box_tree(std::span<const Box> boxes) {
  std::vector<std::uint8_t> out;
  for (const auto& box : boxes) encode_into(out, box);
  return out;
}

std::int32_t angle_to_fixed(double degrees) {
  const double scaled = std::round(degrees * 65536.0);
  if (!(scaled >= std::numeric_limits<std::int32_t>::min() &&
        scaled <= std::numeric_limits<std::int32_t>::max())) {
    throw Error(Errc::domain, "angle " + std::to_string(degrees) + " is outside the fixed-point range");
  }
  return static_cast<std::int32_t>(scaled);
}

double fixed_to_angle(std::int32_t fixed) { return fixed / 65536.0; }

double quantize_angle(double degrees) { return fixed_to_angle(angle_to_fixed(degrees)); }

}  // namespace omaf::codec
