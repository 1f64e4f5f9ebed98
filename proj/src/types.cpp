#include "macexp/types.hpp"

#include <sstream>

namespace macexp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RowSumMismatch: return "RowSumMismatch";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::NonMonotoneDetected: return "NonMonotoneDetected";
    case ErrorCode::AlphabetTooLarge: return "AlphabetTooLarge";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string join(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  for (const auto& v : violations) os << "; " << to_string(v.code) << " at " << v.where << ": " << v.message;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::InvalidArgument : violations.front().code, join(violations)),
      violations_(std::move(violations)) {}

std::optional<ErrorType> complement(ErrorType tau) {
  switch (tau) {
    case ErrorType::User1: return ErrorType::User2;
    case ErrorType::User2: return ErrorType::User1;
    case ErrorType::Both: return std::nullopt;
  }
  return std::nullopt;
}

const char* to_string(ErrorType tau) {
  switch (tau) {
    case ErrorType::User1: return "user1";
    case ErrorType::User2: return "user2";
    case ErrorType::Both: return "both";
  }
  return "?";
}

void Thresholds::validate() const {
  for (double g : {gamma1, gamma2}) {
    if (!(g >= 0.0 && g <= 1.0))
      throw Error(ErrorCode::ParameterOutOfRange, "threshold must lie in [0,1], got " + std::to_string(g));
  }
}

}  // namespace macexp
