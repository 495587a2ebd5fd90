#include "dml/error.hpp"

namespace dml {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::MissingValue: return "MissingValue";
    case Errc::NotSubset: return "NotSubset";
    case Errc::InconsistentCounts: return "InconsistentCounts";
    case Errc::DegenerateClass: return "DegenerateClass";
    case Errc::ZeroEvidence: return "ZeroEvidence";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyChain: return "EmptyChain";
    case Errc::ChainTooShort: return "ChainTooShort";
    case Errc::NotChordal: return "NotChordal";
    case Errc::ZeroExpectedNonzeroObserved: return "ZeroExpectedNonzeroObserved";
    case Errc::InvalidK: return "InvalidK";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::LearnerFailure: return "LearnerFailure";
    case Errc::SizeTooLarge: return "SizeTooLarge";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownColumn: return "UnknownColumn";
    case Errc::RaggedRow: return "RaggedRow";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace dml
