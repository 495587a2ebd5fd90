#pragma once

#include <stdexcept>
#include <string>

namespace dml {

enum class Errc {
  MissingValue,
  NotSubset,
  InconsistentCounts,
  DegenerateClass,
  ZeroEvidence,
  ShapeMismatch,
  LengthMismatch,
  EmptyChain,
  ChainTooShort,
  NotChordal,
  ZeroExpectedNonzeroObserved,
  InvalidK,
  KTooLarge,
  LearnerFailure,
  SizeTooLarge,
  ParseError,
  UnknownColumn,
  RaggedRow,
  InvalidArgument,
  Internal,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace dml
