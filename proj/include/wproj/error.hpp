#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wproj {

enum class ErrorCode {
  EmptySupport,
  DimMismatch,
  SizeLimit,
  MarginalMismatch,
  InvalidSpec,
  InvalidMeasure,
  GridTooCoarse,
  OverlapError,
  InfeasibleCapacity,
  AtomOutsideGrid,
  InfeasibleInput,
  DimensionTooSmall,
  NoSignChange,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to a message without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wproj
