#include "tmimo/interleave.hpp"

#include <algorithm>
#include <numeric>

#include "tmimo/rng.hpp"

namespace tmimo {

Permutation::Permutation(std::vector<std::size_t> forward) : forward_(std::move(forward)) {
  inverse_.assign(forward_.size(), forward_.size());
  for (std::size_t j = 0; j < forward_.size(); ++j) {
    const std::size_t src = forward_[j];
    if (src >= forward_.size() || inverse_[src] != forward_.size())
      throw std::invalid_argument("permutation: not a bijection");
    inverse_[src] = j;
  }
}

Permutation Permutation::identity(std::size_t k) {
  std::vector<std::size_t> f(k);
  std::iota(f.begin(), f.end(), std::size_t{0});
  return Permutation(std::move(f));
}

Permutation Permutation::build(std::size_t k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("permutation: size must be >= 1");
  std::vector<std::size_t> f(k);
  std::iota(f.begin(), f.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(f.begin(), f.end(), rng);
  return Permutation(std::move(f));
}

Permutation Permutation::from_forward(std::vector<std::size_t> forward) { return Permutation(std::move(forward)); }

}  // namespace tmimo
