#include "mpgraph/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mpgraph {

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t N,
                                                         std::size_t n) {
  if (n > N) throw std::invalid_argument("sample size exceeds population");
  std::vector<std::size_t> pool(N);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + uniform_below(N - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace mpgraph
