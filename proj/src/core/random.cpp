#include "ripple/core/random.hpp"

namespace ripple {

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t key : path) h = splitmix64(h ^ splitmix64(key + 0x632BE59BD9B4E019ULL));
  return h;
}

}  // namespace ripple
