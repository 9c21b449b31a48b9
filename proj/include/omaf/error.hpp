#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace omaf {

enum class Errc {
  domain,
  parse,
  usage,
  capacity,
  lookup,
  geometry,
  layout,
  validation,
  io,
  budget_infeasible,
  essential_overflow,
  grid_mismatch,
  no_candidate,
  priority_len_mismatch,
};

// Stable upper-case name, e.g. "BUDGET_INFEASIBLE".
std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

// Raised by the box/presentation decoders and the text parsers. `offset` is
// the absolute byte offset (or 0 for text formats without one); `fourcc` and
// `field` are empty when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::string fourcc = {}, std::string field = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::string& fourcc() const noexcept { return fourcc_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t offset_;
  std::string fourcc_;
  std::string field_;
};

class BudgetInfeasible : public Error {
 public:
  BudgetInfeasible(std::uint64_t budget_bps, std::uint64_t required_bps);
  std::uint64_t required_bps() const noexcept { return required_bps_; }

 private:
  std::uint64_t required_bps_;
};

class EssentialOverflow : public Error {
 public:
  EssentialOverflow(std::size_t essential, std::size_t capacity);
  std::size_t shortfall() const noexcept { return shortfall_; }

 private:
  std::size_t shortfall_;
};

}  // namespace omaf
