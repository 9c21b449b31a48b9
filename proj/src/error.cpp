#include "omaf/error.hpp"

namespace omaf {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::domain: return "DOMAIN";
    case Errc::parse: return "PARSE";
    case Errc::usage: return "USAGE";
    case Errc::capacity: return "CAPACITY";
    case Errc::lookup: return "LOOKUP";
    case Errc::geometry: return "GEOMETRY";
    case Errc::layout: return "LAYOUT";
    case Errc::validation: return "VALIDATION";
    case Errc::io: return "IO";
    case Errc::budget_infeasible: return "BUDGET_INFEASIBLE";
    case Errc::essential_overflow: return "ESSENTIAL_OVERFLOW";
    case Errc::grid_mismatch: return "GRID_MISMATCH";
    case Errc::no_candidate: return "NO_CANDIDATE";
    case Errc::priority_len_mismatch: return "PRIORITY_LEN_MISMATCH";
  }
  return "UNKNOWN";
}

ParseError::ParseError(const std::string& message, std::size_t offset,
                       std::string fourcc, std::string field)
    : Error(Errc::parse, message),
      offset_(offset),
      fourcc_(std::move(fourcc)),
      field_(std::move(field)) {}

BudgetInfeasible::BudgetInfeasible(std::uint64_t budget_bps,
                                   std::uint64_t required_bps)
    : Error(Errc::budget_infeasible,
            "budget " + std::to_string(budget_bps) +
                " bps is below the cheapest full-coverage selection (" +
                std::to_string(required_bps) + " bps)"),
      required_bps_(required_bps) {}

EssentialOverflow::EssentialOverflow(std::size_t essential,
                                     std::size_t capacity)
    : Error(Errc::essential_overflow,
            std::to_string(essential) + " essential overlays exceed decoding capacity " +
                std::to_string(capacity) + " (short by " +
                std::to_string(essential - capacity) + ")"),
      shortfall_(essential - capacity) {}

}  // namespace omaf
