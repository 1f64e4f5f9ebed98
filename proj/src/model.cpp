#include "macexp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace macexp {

namespace {

std::string at(std::string_view base, std::initializer_list<std::size_t> idx) {
  std::ostringstream os;
  os << base;
  for (auto i : idx) os << '[' << i << ']';
  return os.str();
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : -kInf; }

// Nonnegativity and unit mass of one probability vector.
void check_distribution(std::span<const double> v, const std::string& where,
                        std::vector<Violation>& out) {
  double sum = 0.0;
  bool bad = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << "entry " << i << " is " << v[i];
      out.push_back({ErrorCode::NegativeEntry, where, msg.str()});
      bad = true;
    }
    sum += v[i];
  }
  if (!bad && std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sums to " << sum;
    out.push_back({ErrorCode::RowSumMismatch, where, msg.str()});
  }
}

std::vector<Violation> check_source(const Matrix& p) {
  std::vector<Violation> out;
  if (p.empty() || p.front().empty()) {
    out.push_back({ErrorCode::AlphabetMismatch, "source", "empty matrix"});
    return out;
  }
  std::vector<double> flat;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != p.front().size()) {
      out.push_back({ErrorCode::AlphabetMismatch, at("source", {i}), "ragged row"});
      return out;
    }
    flat.insert(flat.end(), p[i].begin(), p[i].end());
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p[i].size(); ++j)
      if (!(p[i][j] >= 0.0) || !std::isfinite(p[i][j]))
        out.push_back({ErrorCode::NegativeEntry, at("source", {i, j}), "entry is " + std::to_string(p[i][j])});
  if (out.empty()) {
    const double sum = std::accumulate(flat.begin(), flat.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "total mass is " << sum;
      out.push_back({ErrorCode::RowSumMismatch, "source", msg.str()});
    }
  }
  return out;
}

std::vector<Violation> check_channel(const Tensor3& w) {
  std::vector<Violation> out;
  if (w.empty() || w.front().empty() || w.front().front().empty()) {
    out.push_back({ErrorCode::AlphabetMismatch, "channel", "empty tensor"});
    return out;
  }
  const std::size_t nx2 = w.front().size(), ny = w.front().front().size();
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (w[a].size() != nx2) {
      out.push_back({ErrorCode::AlphabetMismatch, at("channel", {a}), "ragged x2 dimension"});
      continue;
    }
    for (std::size_t b = 0; b < nx2; ++b) {
      if (w[a][b].size() != ny) {
        out.push_back({ErrorCode::AlphabetMismatch, at("channel", {a, b}), "ragged output dimension"});
        continue;
      }
      check_distribution(w[a][b], at("channel", {a, b}), out);
    }
  }
  return out;
}

std::vector<Violation> check_bank(const BankData& q) {
  std::vector<Violation> out;
  for (std::size_t u = 0; u < 2; ++u) {
    for (std::size_t c = 0; c < 2; ++c) {
      if (q[u][c].empty()) {
        out.push_back({ErrorCode::AlphabetMismatch, at("bank", {u, c}), "empty distribution"});
        continue;
      }
      check_distribution(q[u][c], at("bank", {u, c}), out);
    }
    if (q[u][0].size() != q[u][1].size())
      out.push_back({ErrorCode::AlphabetMismatch, at("bank", {u}), "class distributions differ in length"});
  }
  return out;
}

}  // namespace

void require_distribution(std::span<const double> v, const std::string& where) {
  std::vector<Violation> out;
  if (v.empty()) out.push_back({ErrorCode::AlphabetMismatch, where, "empty distribution"});
  check_distribution(v, where, out);
  if (!out.empty()) throw ValidationError(std::move(out));
}

JointSource JointSource::from_matrix(const Matrix& p) {
  if (auto v = check_source(p); !v.empty()) throw ValidationError(std::move(v));
  JointSource s;
  s.n1_ = p.size();
  s.n2_ = p.front().size();
  s.p1_.assign(s.n1_, 0.0);
  s.p2_.assign(s.n2_, 0.0);
  for (std::size_t i = 0; i < s.n1_; ++i) {
    for (std::size_t j = 0; j < s.n2_; ++j) {
      s.p_.push_back(p[i][j]);
      s.logp_.push_back(safe_log(p[i][j]));
      s.p1_[i] += p[i][j];
      s.p2_[j] += p[i][j];
    }
  }
  std::ranges::transform(s.p1_, std::back_inserter(s.logp1_), safe_log);
  std::ranges::transform(s.p2_, std::back_inserter(s.logp2_), safe_log);
  return s;
}

double JointSource::min_marginal(int user) const {
  double m = kInf;
  for (double v : marginal(user))
    if (v > 0.0) m = std::min(m, v);
  return m;
}

double JointSource::max_marginal(int user) const {
  const auto m = marginal(user);
  return *std::ranges::max_element(m);
}

JointSource JointSource::transposed() const {
  Matrix t(n2_, std::vector<double>(n1_));
  for (std::size_t i = 0; i < n1_; ++i)
    for (std::size_t j = 0; j < n2_; ++j) t[j][i] = (*this)(i, j);
  return from_matrix(t);
}

Matrix JointSource::to_matrix() const {
  Matrix m(n1_, std::vector<double>(n2_));
  for (std::size_t i = 0; i < n1_; ++i)
    for (std::size_t j = 0; j < n2_; ++j) m[i][j] = (*this)(i, j);
  return m;
}

MacChannel MacChannel::from_tensor(const Tensor3& w) {
  if (auto v = check_channel(w); !v.empty()) throw ValidationError(std::move(v));
  MacChannel ch;
  ch.nx1_ = w.size();
  ch.nx2_ = w.front().size();
  ch.ny_ = w.front().front().size();
  ch.w_.reserve(ch.nx1_ * ch.nx2_ * ch.ny_);
  for (const auto& a : w)
    for (const auto& b : a) ch.w_.insert(ch.w_.end(), b.begin(), b.end());
  return ch;
}

MacChannel MacChannel::swapped_users() const {
  Tensor3 t(nx2_, std::vector<std::vector<double>>(nx1_));
  for (std::size_t a = 0; a < nx1_; ++a)
    for (std::size_t b = 0; b < nx2_; ++b) {
      auto r = row(a, b);
      t[b][a].assign(r.begin(), r.end());
    }
  return from_tensor(t);
}

Tensor3 MacChannel::to_tensor() const {
  Tensor3 t(nx1_, std::vector<std::vector<double>>(nx2_));
  for (std::size_t a = 0; a < nx1_; ++a)
    for (std::size_t b = 0; b < nx2_; ++b) {
      auto r = row(a, b);
      t[a][b].assign(r.begin(), r.end());
    }
  return t;
}

InputDistributionBank InputDistributionBank::from_data(const BankData& q) {
  if (auto v = check_bank(q); !v.empty()) throw ValidationError(std::move(v));
  InputDistributionBank b;
  b.q_ = q;
  return b;
}

InputDistributionBank InputDistributionBank::assigned(Assignment a) const {
  InputDistributionBank b = *this;
  if (a.swap_user1) std::swap(b.q_[0][0], b.q_[0][1]);
  if (a.swap_user2) std::swap(b.q_[1][0], b.q_[1][1]);
  return b;
}

InputDistributionBank InputDistributionBank::swapped_users() const {
  InputDistributionBank b = *this;
  std::swap(b.q_[0], b.q_[1]);
  return b;
}

Instance Instance::swapped_users() const {
  return {source.transposed(), channel.swapped_users(), bank.swapped_users()};
}

ValidationOutcome validate_instance(const Matrix& source, const Tensor3& channel, const BankData& bank) {
  std::vector<Violation> out = check_source(source);
  auto ch = check_channel(channel);
  out.insert(out.end(), ch.begin(), ch.end());
  auto bk = check_bank(bank);
  out.insert(out.end(), bk.begin(), bk.end());
  if (ch.empty()) {
    const std::size_t dims[2] = {channel.size(), channel.front().size()};
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t c = 0; c < 2; ++c)
        if (!bank[u][c].empty() && bank[u][c].size() != dims[u]) {
          std::ostringstream msg;
          msg << "length " << bank[u][c].size() << " but channel input " << (u + 1) << " has "
              << dims[u] << " symbols";
          out.push_back({ErrorCode::AlphabetMismatch, at("bank", {u, c}), msg.str()});
        }
  }
  if (!out.empty()) return out;
  return Instance{JointSource::from_matrix(source), MacChannel::from_tensor(channel),
                  InputDistributionBank::from_data(bank)};
}

Instance make_instance(const Matrix& source, const Tensor3& channel, const BankData& bank) {
  auto outcome = validate_instance(source, channel, bank);
  if (auto* v = std::get_if<std::vector<Violation>>(&outcome)) throw ValidationError(std::move(*v));
  return std::get<Instance>(std::move(outcome));
}

std::pair<std::vector<double>, std::vector<double>> marginals(const JointSource& source) {
  auto a = source.marginal(0), b = source.marginal(1);
  return {{a.begin(), a.end()}, {b.begin(), b.end()}};
}

Matrix example_channel_rows(double k1, double k2) {
  if (!(k1 >= 0.0 && k1 <= 1.0 / 3.0) || !(k2 >= 0.0 && k2 <= 0.5))
    throw Error(ErrorCode::ParameterOutOfRange, "example channel needs 0<=k1<=1/3 and 0<=k2<=1/2");
  const double d = 1.0 - 3.0 * k1, h = 0.5 - k2;
  const Matrix w1 = {{d, k1, k1, k1}, {k1, d, k1, k1}, {k1, k1, d, k1},
                     {k1, k1, k1, d}, {h, h, k2, k2},  {k2, k2, h, h}};
  // Rows of W1 (1-based) that make up each block W1..W6.
  const int blocks[6][6] = {{1, 2, 3, 4, 5, 6}, {5, 5, 5, 5, 5, 5}, {6, 6, 6, 6, 6, 6},
                            {2, 3, 4, 1, 6, 5}, {3, 4, 1, 2, 5, 6}, {4, 1, 2, 3, 6, 5}};
  Matrix rows;
  for (const auto& block : blocks)
    for (int r : block) rows.push_back(w1[r - 1]);
  return rows;
}

MacChannel build_example_channel(double k1, double k2) {
  const Matrix rows = example_channel_rows(k1, k2);
  Tensor3 w(6, std::vector<std::vector<double>>(6));
  for (std::size_t x2 = 0; x2 < 6; ++x2)
    for (std::size_t x1 = 0; x1 < 6; ++x1) w[x1][x2] = rows[x1 + 6 * x2];
  return MacChannel::from_tensor(w);
}

}  // namespace macexp
