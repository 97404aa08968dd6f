#pragma once

#include <vector>

#include "ripple/core/linalg.hpp"

namespace ripple {

// Split-chain potential scale reduction for one parameter. Each chain is cut
// in half and the halves are treated as separate chains. Needs at least two
// chains of length >= 4.
double split_rhat(const std::vector<Vector>& chains);

// Split R-hat per column of per-chain draw matrices (rows = iterations).
Vector split_rhat_columns(const std::vector<Matrix>& chains);

}  // namespace ripple
