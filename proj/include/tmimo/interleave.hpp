#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tmimo {

/// Bit interleaver: interleaved[j] = input[forward[j]].
class Permutation {
 public:
  static Permutation identity(std::size_t k);
  /// Uniform random permutation from a seeded shuffle.
  static Permutation build(std::size_t k, std::uint64_t seed);
  static Permutation from_forward(std::vector<std::size_t> forward);

  std::size_t size() const { return forward_.size(); }
  const std::vector<std::size_t>& forward() const { return forward_; }
  const std::vector<std::size_t>& inverse() const { return inverse_; }

  template <typename T>
  std::vector<T> interleave(std::span<const T> v) const {
    check(v.size());
    std::vector<T> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[forward_[j]];
    return out;
  }

  template <typename T>
  std::vector<T> deinterleave(std::span<const T> v) const {
    check(v.size());
    std::vector<T> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[forward_[j]] = v[j];
    return out;
  }

  template <typename T>
  std::vector<T> interleave(const std::vector<T>& v) const { return interleave(std::span<const T>(v)); }
  template <typename T>
  std::vector<T> deinterleave(const std::vector<T>& v) const { return deinterleave(std::span<const T>(v)); }

 private:
  explicit Permutation(std::vector<std::size_t> forward);
  void check(std::size_t n) const {
    if (n != forward_.size()) throw std::invalid_argument("interleaver: length mismatch");
  }

  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

}  // namespace tmimo
