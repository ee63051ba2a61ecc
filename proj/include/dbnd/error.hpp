#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dbnd {

enum class Errc {
  kInvalidBiset,
  kNotLaminar,
  kModeMismatch,
  kNodeNotBounded,
  kTooLarge,
  kMalformedCut,
  kInfeasible,
  kBadAlpha,
  kBadParams,
  kStuck,
  kPrecondition,
  kBadR,
  kNotCompletable,
  kNoSwapFound,
  kInsufficientConnectivity,
  kNotTerminal,
  kValidation,
  kParse,
  kIterationCap,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::kInvalidBiset: return "InvalidBiset";
    case Errc::kNotLaminar: return "NotLaminar";
    case Errc::kModeMismatch: return "ModeMismatch";
    case Errc::kNodeNotBounded: return "NodeNotBounded";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kMalformedCut: return "MalformedCut";
    case Errc::kInfeasible: return "Infeasible";
    case Errc::kBadAlpha: return "BadAlpha";
    case Errc::kBadParams: return "BadParams";
    case Errc::kStuck: return "Stuck";
    case Errc::kPrecondition: return "Precondition";
    case Errc::kBadR: return "BadR";
    case Errc::kNotCompletable: return "NotCompletable";
    case Errc::kNoSwapFound: return "NoSwapFound";
    case Errc::kInsufficientConnectivity: return "InsufficientConnectivity";
    case Errc::kNotTerminal: return "NotTerminal";
    case Errc::kValidation: return "Validation";
    case Errc::kParse: return "Parse";
    case Errc::kIterationCap: return "IterationCap";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

  // Stuck and NoSwapFound mean a proven progress guarantee did not materialize.
  [[nodiscard]] bool is_theorem_violation() const noexcept {
    return code_ == Errc::kStuck || code_ == Errc::kNoSwapFound;
  }

 private:
  Errc code_;
};

}  // namespace dbnd
