#pragma once

#include <vector>

#include "macexp/gallager.hpp"
#include "macexp/model.hpp"

namespace macexp {

struct SuperChannel {
  std::vector<double> q;
  PointToPointChannel ch;
};

/// Point-to-point view of the MAC seen by error type tau.
///
///   User1: input x1 ~ Q_{1,i1}; output (x2, y) flattened as x2 * |Y| + y;
///          w(x2, y | x1) = Q_{2,i2}(x2) W(y | x1, x2).
///   User2: symmetric, output (x1, y) flattened as x1 * |Y| + y.
///   Both:  input (x1, x2) flattened as x1 * |X2| + x2 with the product
///          distribution Q_{1,i1} Q_{2,i2}; output y; rows are W itself.
SuperChannel superchannel(ErrorType tau, const MacChannel& mac, const InputDistributionBank& bank,
                          ClassPair classes);

/// Drops zero-probability inputs and all-zero output columns. The channel
/// function is unchanged by this reduction.
SuperChannel reduce_to_support(const SuperChannel& sc);

}  // namespace macexp
