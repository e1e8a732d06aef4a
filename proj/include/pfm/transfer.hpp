#pragma once

#include <span>
#include <vector>

#include "pfm/rng.hpp"

namespace pfm {

/// Hyperbolic-tangent transfer: tanh(|x|), in [0, 1).
double transfer_s(double x);

/// Maps raw coordinates to {0, 1}: bit d is 1 iff u_d < transfer_s(raw[d]),
/// with u_d uniform in [0, 1). Consumes exactly raw.size() draws.
/// Throws EvaluationError on a non-finite coordinate.
std::vector<double> binarize(std::span<const double> raw, Rng& rng);

}  // namespace pfm
