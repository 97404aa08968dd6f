#pragma once

#include <functional>
#include <span>

namespace ripple {

// sup_x |F_a(x) - F_b(x)| between the two empirical CDFs. Sorts copies of the
// inputs and sweeps them together, stepping past ties in both samples before
// comparing. Throws std::invalid_argument on empty input.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// sup_x |F_a(x) - cdf(x)| against a continuous reference CDF.
double ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf);

}  // namespace ripple
