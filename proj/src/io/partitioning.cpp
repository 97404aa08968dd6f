#include "ripple/io/partitioning.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ripple/core/random.hpp"

namespace ripple {

DataPartition make_partition(std::size_t n, const std::vector<std::size_t>& sizes, std::uint64_t seed,
                             std::string design_id) {
  if (sizes.empty()) throw std::invalid_argument("make_partition: no batch sizes");
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total != n) {
    throw std::invalid_argument("make_partition: sizes sum to " + std::to_string(total) + ", expected n = " +
                                std::to_string(n));
  }
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("make_partition: every batch needs at least one row");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream rng(seed, {0xBA7C4});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  std::vector<RowIndices> batches;
  std::size_t at = 0;
  for (std::size_t s : sizes) {
    RowIndices b(order.begin() + static_cast<std::ptrdiff_t>(at), order.begin() + static_cast<std::ptrdiff_t>(at + s));
    std::sort(b.begin(), b.end());
    batches.push_back(std::move(b));
    at += s;
  }
  return DataPartition(std::move(batches), n, std::move(design_id), seed);
}

std::vector<std::size_t> equal_sizes(std::size_t n, std::size_t j) {
  if (j == 0 || j > n) throw std::invalid_argument("equal_sizes: need 1 <= J <= n");
  std::vector<std::size_t> out(j, n / j);
  for (std::size_t i = 0; i < n % j; ++i) ++out[i];
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
  std::vector<std::size_t> out;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    try {
      const auto x = item.find('x');
      if (x == std::string::npos) {
        out.push_back(std::stoul(item));
      } else {
        const std::size_t size = std::stoul(item.substr(0, x));
        const std::size_t count = std::stoul(item.substr(x + 1));
        out.insert(out.end(), count, size);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("cannot parse batch sizes '" + spec + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty batch size list");
  return out;
}

}  // namespace ripple
