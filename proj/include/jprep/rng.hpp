#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace jprep {

// 64-bit FNV-1a. Used for record hashes, seed derivation and content digests.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64(std::string_view data, std::uint64_t state);

std::string hex64(std::uint64_t value);

// Derives a per-record seed from the run seed, a record id and a stage tag.
// Independent of processing order, so worker counts cannot change outputs.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view id,
                          std::string_view tag);

// mt19937_64 with explicit unbiased bounded draws. std::uniform_int_distribution
// and std::shuffle are implementation-defined, so all draws go through this.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform draw from [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform double in [0, 1) from the top 53 bits.
  double unit();

  bool coin() { return below(2) == 1; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i + 1));
      std::swap(items[i], items[j]);
    }
  }

  // k distinct indices from [0, n), returned in ascending order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace jprep
