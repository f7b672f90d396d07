#include "wproj/error.hpp"

namespace wproj {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::MarginalMismatch: return "MarginalMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::InfeasibleCapacity: return "InfeasibleCapacity";
    case ErrorCode::AtomOutsideGrid: return "AtomOutsideGrid";
    case ErrorCode::InfeasibleInput: return "InfeasibleInput";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace wproj
