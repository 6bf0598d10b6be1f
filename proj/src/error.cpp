#include "decayalg/error.hpp"

namespace decayalg {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SymbolVanishes: return "SymbolVanishes";
    case ErrorKind::AliasBudgetExceeded: return "AliasBudgetExceeded";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::PathHitsSpectrum: return "PathHitsSpectrum";
    case ErrorKind::NotShiftInvariant: return "NotShiftInvariant";
    case ErrorKind::NumericallySingular: return "NumericallySingular";
    case ErrorKind::MissingFactorization: return "MissingFactorization";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace decayalg
