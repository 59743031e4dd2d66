#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace cogalign {

// Identifies one seeded draw sequence: (task id, split id, instance index).
// Streams with different paths are statistically independent; the state is a
// pure function of (master_seed, path), which is what makes generation
// order- and worker-count-independent.
struct StreamPath {
  uint64_t task = 0;
  uint64_t split = 0;
  uint64_t index = 0;
};

// xoshiro256** seeded through a SplitMix64 hash chain over (seed, path).
// Distributions are implemented by hand: the standard library engines are
// portable but its distributions are not, and manifests must be byte-stable.
class RandomStream {
 public:
  RandomStream(uint64_t master_seed, StreamPath path);

  uint64_t next_u64();

  // Uniform double in [0, 1).
  double uniform();
  // Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi], inclusive, unbiased via rejection.
  int64_t uniform_int(int64_t lo, int64_t hi);
  bool bernoulli(double p);

  // Uniform element of a non-empty span.
  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[static_cast<size_t>(
        uniform_int(0, static_cast<int64_t>(items.size()) - 1))];
  }

  // Fisher-Yates over indices [0, n); deterministic given the stream state.
  template <typename Swap>
  void shuffle_indices(size_t n, Swap&& swap) {
    for (size_t i = n; i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      if (j != i - 1) swap(i - 1, j);
    }
  }

 private:
  std::array<uint64_t, 4> state_{};
};

RandomStream derive_stream(uint64_t master_seed, StreamPath path);

}  // namespace cogalign
