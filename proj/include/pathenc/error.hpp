#pragma once

#include <stdexcept>
#include <string>

namespace pathenc {

enum class ErrorKind {
  NonHermitianDipole,
  NonzeroDiagonal,
  DimensionMismatch,
  ShapeMismatch,
  InvalidField,
  DisconnectedGraph,
  InvalidGraph,
  InvalidTree,
  EdgeInTree,
  EvenBase,
  InvalidBase,
  NoEncodedEdges,
  SchemeSystemMismatch,
  OutOfDomain,
  DigitOutOfRange,
  InvalidTransition,
  ModeMismatch,
  EnumerationOverflow,
  ConfigParse,
  MissingResults,
  Nonconvergence,
};

const char* to_string(ErrorKind kind) noexcept;

// Process exit code used by the command-line tool for each error kind.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pathenc
