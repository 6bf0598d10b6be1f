#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decayalg {

// Failure categories raised by the library. Each maps onto one of the named
// error conditions of the public operations; callers that need to branch on
// the failure mode inspect Error::kind().
enum class ErrorKind {
  InvalidArgument,
  ShapeMismatch,
  SymbolVanishes,
  AliasBudgetExceeded,
  NotContractive,
  Diverged,
  StepTooLarge,
  PathHitsSpectrum,
  NotShiftInvariant,
  NumericallySingular,
  MissingFactorization,
  Format,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace decayalg
