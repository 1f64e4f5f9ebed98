#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "macexp/types.hpp"

namespace macexp {

using Matrix = std::vector<std::vector<double>>;
using Tensor3 = std::vector<std::vector<std::vector<double>>>;
/// bank[user][class]: user 0/1, class 0/1 (class index 0 is MessageClass::First).
using BankData = std::array<std::array<std::vector<double>, 2>, 2>;

inline constexpr double kSumTolerance = 1e-12;

/// Joint law of two correlated sources, p[u1][u2], stored row-major with
/// cached marginals and log-probabilities (log 0 is -inf).
class JointSource {
 public:
  /// Throws ValidationError listing every broken invariant.
  static JointSource from_matrix(const Matrix& p);

  std::size_t size1() const { return n1_; }
  std::size_t size2() const { return n2_; }
  std::size_t cells() const { return p_.size(); }

  double operator()(std::size_t u1, std::size_t u2) const { return p_[u1 * n2_ + u2]; }
  double log_prob(std::size_t u1, std::size_t u2) const { return logp_[u1 * n2_ + u2]; }
  std::span<const double> flat() const { return p_; }

  /// user is 0 or 1.
  std::span<const double> marginal(int user) const { return user == 0 ? p1_ : p2_; }
  std::span<const double> log_marginal(int user) const { return user == 0 ? logp1_ : logp2_; }

  /// Smallest and largest strictly positive marginal probability of a user.
  double min_marginal(int user) const;
  double max_marginal(int user) const;

  JointSource transposed() const;
  Matrix to_matrix() const;

 private:
  JointSource() = default;

  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::vector<double> p_, logp_;
  std::vector<double> p1_, p2_, logp1_, logp2_;
};

/// Two-user discrete memoryless MAC, w[x1][x2][y].
class MacChannel {
 public:
  static MacChannel from_tensor(const Tensor3& w);

  std::size_t size_x1() const { return nx1_; }
  std::size_t size_x2() const { return nx2_; }
  std::size_t size_y() const { return ny_; }

  double operator()(std::size_t x1, std::size_t x2, std::size_t y) const {
    return w_[(x1 * nx2_ + x2) * ny_ + y];
  }
  std::span<const double> row(std::size_t x1, std::size_t x2) const {
    return std::span<const double>(w_).subspan((x1 * nx2_ + x2) * ny_, ny_);
  }

  /// Same channel with the roles of the two inputs exchanged.
  MacChannel swapped_users() const;
  Tensor3 to_tensor() const;

 private:
  MacChannel() = default;

  std::size_t nx1_ = 0, nx2_ = 0, ny_ = 0;
  std::vector<double> w_;
};

/// Which of the two bank distributions serves class 1 for each user.
struct Assignment {
  bool swap_user1 = false;
  bool swap_user2 = false;

  int index() const { return (swap_user1 ? 1 : 0) + (swap_user2 ? 2 : 0); }
  static Assignment from_index(int i) { return {(i & 1) != 0, (i & 2) != 0}; }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

inline constexpr std::array<Assignment, 4> kAssignments = {
    Assignment{false, false}, Assignment{true, false}, Assignment{false, true},
    Assignment{true, true}};

/// Per user, the input distributions used for message classes 1 and 2.
class InputDistributionBank {
 public:
  static InputDistributionBank from_data(const BankData& q);

  std::span<const double> get(int user, MessageClass cls) const {
    return q_[user][static_cast<int>(cls) - 1];
  }
  std::size_t alphabet(int user) const { return q_[user][0].size(); }

  InputDistributionBank assigned(Assignment a) const;
  InputDistributionBank swapped_users() const;
  const BankData& data() const { return q_; }

 private:
  InputDistributionBank() = default;
  BankData q_;
};

struct Instance {
  JointSource source;
  MacChannel channel;
  InputDistributionBank bank;

  Instance with_assignment(Assignment a) const { return {source, channel, bank.assigned(a)}; }
  /// Relabels user 1 as user 2: transposed source, swapped channel inputs and bank.
  Instance swapped_users() const;
};

using ValidationOutcome = std::variant<Instance, std::vector<Violation>>;

/// Checks every invariant of the three inputs together, including that the
/// bank alphabets match the channel input alphabets.
ValidationOutcome validate_instance(const Matrix& source, const Tensor3& channel,
                                    const BankData& bank);

/// Throwing form of validate_instance.
Instance make_instance(const Matrix& source, const Tensor3& channel, const BankData& bank);

/// Throws ValidationError when v is empty, has a negative entry or does not
/// sum to 1 within kSumTolerance; `where` labels the violation.
void require_distribution(std::span<const double> v, const std::string& where);

std::pair<std::vector<double>, std::vector<double>> marginals(const JointSource& source);

/// The 6x6-input, 4-output example MAC. Documented rows are 1-based: the
/// distribution W(.|x1,x2) is row x1+6(x2-1) of the stacked 36x4 matrix
/// [W1; ...; W6]. Internally (0-based) that is block x2, row x1.
/// Requires 0 <= k1 <= 1/3 and 0 <= k2 <= 1/2.
MacChannel build_example_channel(double k1, double k2);

/// Stacked 36x4 form of build_example_channel, rows in the documented order.
Matrix example_channel_rows(double k1, double k2);

}  // namespace macexp
