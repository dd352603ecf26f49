#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idem {

enum class ErrorKind {
  ShapeMismatch,
  DuplicateLabel,
  AsymmetricDistance,
  NonzeroDiagonal,
  NonpositiveOffDiagonal,
  TriangleViolation,
  EmptySpace,
  NotNormalized,
  EmptySupport,
  UnknownPoint,
  SpaceMismatch,
  PartialMap,
  NotAdmissible,
  Infeasible,
  NegativeThreshold,
  EmptyList,
  TooLarge,
  LevelTooLow,
  LevelMismatch,
  InvalidLevel,
  Parse,
};

std::string_view to_string(ErrorKind kind);

// Every validation failure in the library is reported through this type; the
// message always starts with the kind name so diagnostics can be grepped.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace idem
