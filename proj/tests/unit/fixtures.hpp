#pragma once

#include <random>
#include <vector>

#include "macexp/model.hpp"

namespace fixtures {

inline const macexp::Matrix kExampleSource = {{0.0005, 0.0095}, {0.0005, 0.9895}};

inline macexp::BankData bank_of(std::vector<double> q11, std::vector<double> q12, std::vector<double> q21,
                                std::vector<double> q22) {
  macexp::BankData b;
  b[0] = {std::move(q11), std::move(q12)};
  b[1] = {std::move(q21), std::move(q22)};
  return b;
}

inline macexp::BankData example_bank() {
  const std::vector<double> narrow = {0, 0, 0, 0, 0.5, 0.5};
  const std::vector<double> wide = {0.25, 0.25, 0.25, 0.25, 0, 0};
  return bank_of(narrow, wide, narrow, wide);
}

inline macexp::Instance example_instance() {
  return macexp::make_instance(kExampleSource, macexp::build_example_channel(0.045, 0.01).to_tensor(),
                               example_bank());
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) s += (x = e(rng));
  for (auto& x : p) x /= s;
  return p;
}

inline macexp::Matrix random_rows(std::mt19937_64& rng, std::size_t nx, std::size_t ny) {
  macexp::Matrix m;
  for (std::size_t x = 0; x < nx; ++x) m.push_back(random_simplex(rng, ny));
  return m;
}

}  // namespace fixtures
