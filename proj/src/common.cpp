#include "khflow/common.hpp"

namespace khflow {

const char* error_name(ErrorCode c) {
  switch (c) {
  case ErrorCode::MalformedPD: return "MalformedPD";
  case ErrorCode::InconsistentEdges: return "InconsistentEdges";
  case ErrorCode::NonOrientable: return "NonOrientable";
  case ErrorCode::LengthMismatch: return "LengthMismatch";
  case ErrorCode::EmbeddingFailure: return "EmbeddingFailure";
  case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorCode::SameComponent: return "SameComponent";
  case ErrorCode::InvalidArc: return "InvalidArc";
  case ErrorCode::NotASignAssignment: return "NotASignAssignment";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::IncompatiblePair: return "IncompatiblePair";
  case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
  case ErrorCode::NotCancellable: return "NotCancellable";
  case ErrorCode::GradingMismatch: return "GradingMismatch";
  case ErrorCode::NotOppositePair: return "NotOppositePair";
  case ErrorCode::Stuck: return "Stuck";
  case ErrorCode::NotAComplex: return "NotAComplex";
  case ErrorCode::NotACycle: return "NotACycle";
  case ErrorCode::NotAKnot: return "NotAKnot";
  case ErrorCode::InvalidSite: return "InvalidSite";
  case ErrorCode::NonComposable: return "NonComposable";
  case ErrorCode::NotConnectedCobordism: return "NotConnectedCobordism";
  case ErrorCode::InvalidScript: return "InvalidScript";
  case ErrorCode::Io: return "Io";
  }
  return "Error";
}

std::string mask_string(Mask m, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (bit(m, i)) s[i] = '1';
  return s;
}

} // namespace khflow
