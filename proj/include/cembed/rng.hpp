#pragma once

#include <cstdint>
#include <random>

namespace cembed {

std::uint64_t splitmix64(std::uint64_t& state);

// Independent stream per (seed, stream) pair: replication r of a batch uses
// Rng(seed, r), so results do not depend on thread scheduling.
// Normals by the Marsaglia polar method on 53-bit uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  double uniform();  // (0,1)
  double normal();
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cembed
