#pragma once

#include <cstdint>
#include <random>

namespace cstomo {

/// Reproducible random stream identified by (root_seed, stream_id).
///
/// The source is a value: engine() always starts the same sequence, so an
/// operation that takes a RandomSource is a pure function of it. Independent
/// tasks derive children with child(index); the child's root is a SplitMix64
/// mix of the parent's pair, so sibling streams are decorrelated and the
/// derivation is stable across platforms.
class RandomSource {
 public:
  RandomSource() = default;
  explicit RandomSource(std::uint64_t root_seed, std::uint64_t stream_id = 0)
      : root_seed_(root_seed), stream_id_(stream_id) {}

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  RandomSource child(std::uint64_t index) const;

  std::mt19937_64 engine() const;

 private:
  std::uint64_t root_seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace cstomo
