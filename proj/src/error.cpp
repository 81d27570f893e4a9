#include "pathenc/error.hpp"

namespace pathenc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonHermitianDipole: return "NonHermitianDipole";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::InvalidGraph: return "InvalidGraph";
    case ErrorKind::InvalidTree: return "InvalidTree";
    case ErrorKind::EdgeInTree: return "EdgeInTree";
    case ErrorKind::EvenBase: return "EvenBase";
    case ErrorKind::InvalidBase: return "InvalidBase";
    case ErrorKind::NoEncodedEdges: return "NoEncodedEdges";
    case ErrorKind::SchemeSystemMismatch: return "SchemeSystemMismatch";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DigitOutOfRange: return "DigitOutOfRange";
    case ErrorKind::InvalidTransition: return "InvalidTransition";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::EnumerationOverflow: return "EnumerationOverflow";
    case ErrorKind::ConfigParse: return "ConfigParseError";
    case ErrorKind::MissingResults: return "MissingResults";
    case ErrorKind::Nonconvergence: return "Nonconvergence";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConfigParse: return 2;
    case ErrorKind::Nonconvergence: return 3;
    case ErrorKind::DisconnectedGraph: return 4;
    case ErrorKind::EvenBase:
    case ErrorKind::InvalidBase: return 5;
    case ErrorKind::NoEncodedEdges: return 6;
    case ErrorKind::MissingResults: return 7;
    case ErrorKind::NonHermitianDipole:
    case ErrorKind::NonzeroDiagonal:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::InvalidField:
    case ErrorKind::InvalidGraph:
    case ErrorKind::InvalidTree:
    case ErrorKind::SchemeSystemMismatch: return 8;
    case ErrorKind::EdgeInTree:
    case ErrorKind::OutOfDomain:
    case ErrorKind::DigitOutOfRange:
    case ErrorKind::InvalidTransition:
    case ErrorKind::ModeMismatch:
    case ErrorKind::EnumerationOverflow: return 9;
  }
  return 1;
}

}  // namespace pathenc
