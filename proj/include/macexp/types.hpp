#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace macexp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  NegativeEntry,
  RowSumMismatch,
  AlphabetMismatch,
  ParameterOutOfRange,
  DegenerateDistribution,
  NonMonotoneDetected,
  AlphabetTooLarge,
  DimensionTooLarge,
  AllZero,
  ConfigParse,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// One broken invariant, located by a human-readable path such as
/// "source[1][0]" or "bank[2][1]".
struct Violation {
  ErrorCode code;
  std::string where;
  std::string message;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Which users are decoded in error. The complement of User1 is User2 and
/// vice versa; Both has an empty complement.
enum class ErrorType { User1 = 0, User2 = 1, Both = 2 };

inline constexpr std::array<ErrorType, 3> kErrorTypes = {ErrorType::User1, ErrorType::User2,
                                                         ErrorType::Both};

std::optional<ErrorType> complement(ErrorType tau);
const char* to_string(ErrorType tau);

/// Message class index of one user: First collects messages whose marginal
/// probability is at least gamma^n, Second the rest.
enum class MessageClass { First = 1, Second = 2 };

struct ClassPair {
  MessageClass user1 = MessageClass::First;
  MessageClass user2 = MessageClass::First;

  MessageClass operator[](int user) const { return user == 0 ? user1 : user2; }
  friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

/// (1,1), (1,2), (2,1), (2,2): the column order used by every table.
inline constexpr std::array<ClassPair, 4> kClassPairs = {
    ClassPair{MessageClass::First, MessageClass::First},
    ClassPair{MessageClass::First, MessageClass::Second},
    ClassPair{MessageClass::Second, MessageClass::First},
    ClassPair{MessageClass::Second, MessageClass::Second}};

inline int index_of(ClassPair c) {
  return 2 * (static_cast<int>(c.user1) - 1) + (static_cast<int>(c.user2) - 1);
}

struct Thresholds {
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  double operator[](int user) const { return user == 0 ? gamma1 : gamma2; }
  void validate() const;
};

/// Extended-real exponent with the optimizing parameters that produced it.
/// Source terms use -inf for empty message classes; F-type terms use +inf
/// when built on such a source term.
struct ExponentValue {
  double value = 0.0;
  std::optional<double> rho;
  std::optional<std::array<double, 2>> lambda;

  bool finite() const { return std::isfinite(value); }
  bool is_pos_inf() const { return value == kInf; }
  bool is_neg_inf() const { return value == -kInf; }

  static ExponentValue pos_inf() { return {kInf, std::nullopt, std::nullopt}; }
  static ExponentValue neg_inf() { return {-kInf, std::nullopt, std::nullopt}; }
};

}  // namespace macexp
