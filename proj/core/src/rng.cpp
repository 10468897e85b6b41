#include "mcmp2/rng.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

namespace mcmp2 {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t(kMult0) * c[0];
  const std::uint64_t p1 = std::uint64_t(kMult1) * c[2];
  const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
  const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> PhiloxRng::block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    round_once(c, k);
  }
  return c;
}

PhiloxRng::PhiloxRng(std::uint64_t seed, std::uint32_t stream) {
  key_ = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
  counter_ = {0, 0, 0, stream};
}

void PhiloxRng::refill() {
  out_ = block(counter_, key_);
  // 96-bit per-stream counter; counter_[3] stays the stream id.
  if (++counter_[0] == 0 && ++counter_[1] == 0) ++counter_[2];
  idx_ = 0;
}

std::uint32_t PhiloxRng::next_u32() {
  if (idx_ >= 4) refill();
  return out_[idx_++];
}

std::uint64_t PhiloxRng::next_u64() {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double PhiloxRng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

std::array<double, 3> PhiloxRng::gaussian3() {
  const double u1 = uniform(), u2 = uniform(), u3 = uniform(), u4 = uniform();
  const double r1 = std::sqrt(-2.0 * std::log1p(-u1));
  const double r2 = std::sqrt(-2.0 * std::log1p(-u2));
  const double a1 = 2.0 * std::numbers::pi * u3;
  const double a2 = 2.0 * std::numbers::pi * u4;
  // fourth variate discarded so the state is the counter alone
  return {r1 * std::cos(a1), r1 * std::sin(a1), r2 * std::cos(a2)};
}

std::ostream& operator<<(std::ostream& os, const PhiloxRng& rng) {
  os << rng.key_[0] << ' ' << rng.key_[1];
  for (auto c : rng.counter_) os << ' ' << c;
  os << ' ' << rng.idx_;
  return os;
}

std::istream& operator>>(std::istream& is, PhiloxRng& rng) {
  is >> rng.key_[0] >> rng.key_[1];
  for (auto& c : rng.counter_) is >> c;
  is >> rng.idx_;
  if (rng.idx_ < 4) {
    // regenerate the partially consumed block from the previous counter
    std::array<std::uint32_t, 4> prev = rng.counter_;
    if (prev[0]-- == 0 && prev[1]-- == 0) --prev[2];
    rng.out_ = PhiloxRng::block(prev, rng.key_);
  }
  return is;
}

}  // namespace mcmp2
