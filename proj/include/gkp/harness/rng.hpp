#pragma once

// Counter-based random streams.
//
// A stream is Philox4x32-10 keyed by the 64-bit master seed; the 128-bit
// counter is (stage, trial, lane, block) with block incremented per draw of
// four words.  Streams for distinct (stage, trial, lane) never overlap, so
// trials can run in any order on any thread and still see identical numbers.

#include <array>
#include <cstdint>

namespace gkp {

enum class Stage : std::uint32_t {
  Phantm = 1,
  Breeding = 2,
  QecNoise = 3,
  Bootstrap = 4,
  Test = 5,
};

class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint32_t stage, std::uint32_t trial, std::uint32_t lane);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform();  // [0, 1) with 53 random bits
  double normal();   // standard normal, Box-Muller

  // Reproducible child stream, used for retries and sub-runs.
  Rng split(std::uint32_t salt) const;

  std::uint64_t seed() const { return seed_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Rng seed_plan(std::uint64_t master_seed, Stage stage, std::uint32_t trial, std::uint32_t lane = 0);

// Bare Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

}  // namespace gkp
