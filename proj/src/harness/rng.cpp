#include "gkp/harness/rng.hpp"

#include <cmath>
#include <numbers>

namespace gkp {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

Rng::Rng(std::uint64_t master_seed, std::uint32_t stage, std::uint32_t trial, std::uint32_t lane)
    : seed_(master_seed), ctr_{stage, trial, lane, 0} {}

void Rng::refill() {
  buf_ = philox4x32(ctr_, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  ++ctr_[3];
  used_ = 0;
}

std::uint32_t Rng::next_u32() {
  if (used_ == 4) refill();
  return buf_[used_++];
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

Rng Rng::split(std::uint32_t salt) const {
  // Mix the salt into the lane word's upper half and the seed; the child
  // counter starts at block 0 of a stream no parent draw can reach.
  const std::uint64_t child_seed = seed_ ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(salt) + 1));
  return Rng(child_seed, ctr_[0], ctr_[1], ctr_[2] ^ (salt << 16) ^ 0x80000000u);
}

Rng seed_plan(std::uint64_t master_seed, Stage stage, std::uint32_t trial, std::uint32_t lane) {
  return Rng(master_seed, static_cast<std::uint32_t>(stage), trial, lane);
}

}  // namespace gkp
