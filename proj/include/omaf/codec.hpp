#pragma once

// OMB container: a sequence of size-prefixed boxes (32-bit big-endian size
// including the 8-byte header, then a four-character type). The byte layout
// of every box is defined in docs/format.md.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "omaf/model.hpp"

namespace omaf::codec {

using FourCC = std::array<char, 4>;

constexpr FourCC fourcc(const char (&s)[5]) { return {s[0], s[1], s[2], s[3]}; }
std::string to_string(const FourCC& type);

struct Box {
  FourCC type{};
  std::variant<std::vector<std::uint8_t>, std::vector<Box>> payload;

  bool is_container() const { return payload.index() == 1; }
  const std::vector<std::uint8_t>& bytes() const { return std::get<0>(payload); }
  const std::vector<Box>& children() const { return std::get<1>(payload); }
  std::uint64_t encoded_size() const;

  friend bool operator==(const Box&, const Box&) = default;
};

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint64_t kMaxPayloadSize = 0xFFFFFFFFull - 8;
inline constexpr int kMaxNesting = 16;

// Types whose payload is itself a box sequence ('vwpt' and 'tmtd').
bool is_container_type(const FourCC& type);

// Consumes the whole input. Truncated or undersized boxes raise ParseError
// with the absolute byte offset of the offending header.
std::vector<Box> decode_box_tree(std::span<const std::uint8_t> bytes);

// Throws Error(Errc::capacity) when a payload exceeds kMaxPayloadSize.
std::vector<std::uint8_t> encode_box_tree(std::span<const Box> boxes);

// Angles travel as signed 32-bit fixed point in units of 2^-16 degree.
std::int32_t angle_to_fixed(double degrees);
double fixed_to_angle(std::int32_t fixed);
double quantize_angle(double degrees);

// Rounds every angle field to the fixed-point grid, i.e. the value
// decode_presentation(encode_presentation(p)) returns.
Presentation quantize(Presentation p);

// Refuses (ValidationFailed) presentations with validation errors.
std::vector<std::uint8_t> encode_presentation(const Presentation& p);

// Malformed input raises ParseError naming the box type and field where
// applicable. Unknown top-level boxes land in Presentation::extras.
Presentation decode_presentation(std::span<const std::uint8_t> bytes);

}  // namespace omaf::codec
