#include "macexp/channels.hpp"

namespace macexp {

SuperChannel superchannel(ErrorType tau, const MacChannel& mac, const InputDistributionBank& bank,
                          ClassPair classes) {
  const std::size_t n1 = mac.size_x1(), n2 = mac.size_x2(), ny = mac.size_y();
  if (bank.alphabet(0) != n1 || bank.alphabet(1) != n2)
    throw Error(ErrorCode::AlphabetMismatch, "bank alphabets do not match the channel inputs");
  const auto q1 = bank.get(0, classes.user1);
  const auto q2 = bank.get(1, classes.user2);

  SuperChannel sc;
  switch (tau) {
    case ErrorType::User1:
      sc.q.assign(q1.begin(), q1.end());
      sc.ch.nx = n1;
      sc.ch.ny = n2 * ny;
      sc.ch.w.resize(sc.ch.nx * sc.ch.ny);
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
          for (std::size_t y = 0; y < ny; ++y) sc.ch.w[a * sc.ch.ny + b * ny + y] = q2[b] * mac(a, b, y);
      break;
    case ErrorType::User2:
      sc.q.assign(q2.begin(), q2.end());
      sc.ch.nx = n2;
      sc.ch.ny = n1 * ny;
      sc.ch.w.resize(sc.ch.nx * sc.ch.ny);
      for (std::size_t b = 0; b < n2; ++b)
        for (std::size_t a = 0; a < n1; ++a)
          for (std::size_t y = 0; y < ny; ++y) sc.ch.w[b * sc.ch.ny + a * ny + y] = q1[a] * mac(a, b, y);
      break;
    case ErrorType::Both:
      sc.ch.nx = n1 * n2;
      sc.ch.ny = ny;
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
          sc.q.push_back(q1[a] * q2[b]);
          const auto r = mac.row(a, b);
          sc.ch.w.insert(sc.ch.w.end(), r.begin(), r.end());
        }
      break;
  }
  return sc;
}

SuperChannel reduce_to_support(const SuperChannel& sc) {
  std::vector<std::size_t> xs, ys;
  for (std::size_t x = 0; x < sc.ch.nx; ++x)
    if (sc.q[x] > 0.0) xs.push_back(x);
  for (std::size_t y = 0; y < sc.ch.ny; ++y) {
    bool used = false;
    for (std::size_t x : xs) used = used || sc.ch(x, y) > 0.0;
    if (used) ys.push_back(y);
  }
  SuperChannel out;
  out.ch.nx = xs.size();
  out.ch.ny = ys.size();
  for (std::size_t x : xs) {
    out.q.push_back(sc.q[x]);
    for (std::size_t y : ys) out.ch.w.push_back(sc.ch(x, y));
  }
  return out;
}

}  // namespace macexp
