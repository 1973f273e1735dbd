#include "cstomo/random.hpp"

namespace cstomo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource RandomSource::child(std::uint64_t index) const {
  return RandomSource(splitmix64(root_seed_ ^ splitmix64(stream_id_ + 0x632be59bd9b4e019ULL)),
                      index);
}

std::mt19937_64 RandomSource::engine() const {
  const std::uint64_t a = splitmix64(root_seed_);
  const std::uint64_t b = splitmix64(a ^ stream_id_);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace cstomo
