#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wcop {

enum class Errc {
  InvalidArgument,
  NonFinite,
  OrderMismatch,
  ZeroConstantTerm,
  Overflow,
  NotUnimodular,
  OutsideDisc,
  NearPole,
  Unavailable,
  ConditionFails,
  ZeroAtOrigin,
  NotElliptic,
  NotAutomorphism,
  PrecisionExhausted,
  PeriodicRotation,
  RefinementFailed,
  ContourRejected,
};

inline const char* to_string(Errc e) {
  switch (e) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonFinite: return "NonFinite";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::ZeroConstantTerm: return "ZeroConstantTerm";
    case Errc::Overflow: return "Overflow";
    case Errc::NotUnimodular: return "NotUnimodular";
    case Errc::OutsideDisc: return "OutsideDisc";
    case Errc::NearPole: return "NearPole";
    case Errc::Unavailable: return "Unavailable";
    case Errc::ConditionFails: return "ConditionFails";
    case Errc::ZeroAtOrigin: return "ZeroAtOrigin";
    case Errc::NotElliptic: return "NotElliptic";
    case Errc::NotAutomorphism: return "NotAutomorphism";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::PeriodicRotation: return "PeriodicRotation";
    case Errc::RefinementFailed: return "RefinementFailed";
    case Errc::ContourRejected: return "ContourRejected";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this type. `index()`
/// carries the offending coefficient index where one exists (for example the
/// pole index of a resolvent recurrence), otherwise -1.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::int64_t index = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  std::int64_t index() const noexcept { return index_; }

 private:
  Errc code_;
  std::int64_t index_;
};

}  // namespace wcop
