#include "idem/error.hpp"

namespace idem {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::AsymmetricDistance: return "AsymmetricDistance";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::NonpositiveOffDiagonal: return "NonpositiveOffDiagonal";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::EmptySpace: return "EmptySpace";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::EmptySupport: return "EmptySupport";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::PartialMap: return "PartialMap";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NegativeThreshold: return "NegativeThreshold";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::LevelTooLow: return "LevelTooLow";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::InvalidLevel: return "InvalidLevel";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind) {}

}  // namespace idem
