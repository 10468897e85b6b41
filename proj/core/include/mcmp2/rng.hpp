#ifndef MCMP2_RNG_HPP
#define MCMP2_RNG_HPP

#include <array>
#include <cstdint>
#include <iosfwd>

namespace mcmp2 {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// Streams are split by seeding the key and dedicating one counter word
// to the stream index, so worker streams never overlap and the full
// state serializes as a handful of integers.
class PhiloxRng {
public:
  PhiloxRng() = default;
  PhiloxRng(std::uint64_t seed, std::uint32_t stream = 0);

  // One 128-bit block from the raw generator.
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                            const std::array<std::uint32_t, 2>& key);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0,1) with 53 random bits.
  double uniform();
  // Standard normal triple via Box-Muller; draws exactly four uniforms.
  std::array<double, 3> gaussian3();

  bool operator==(const PhiloxRng&) const = default;

  // Text round trip is bit exact.
  friend std::ostream& operator<<(std::ostream& os, const PhiloxRng& rng);
  friend std::istream& operator>>(std::istream& is, PhiloxRng& rng);

private:
  std::array<std::uint32_t, 2> key_{0, 0};
  std::array<std::uint32_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint32_t, 4> out_{0, 0, 0, 0};
  std::uint32_t idx_ = 4;  // 4 = buffer empty

  void refill();
};

}  // namespace mcmp2

#endif
