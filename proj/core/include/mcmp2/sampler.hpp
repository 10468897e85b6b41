#ifndef MCMP2_SAMPLER_HPP
#define MCMP2_SAMPLER_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mcmp2/rng.hpp"
#include "mcmp2/weights.hpp"

namespace mcmp2 {

struct WalkerPair {
  Vec3 r1, r2;
  double g1, g2;
  double weight;  // g1 g2 / (N_g r12)
};

class WalkerEnsemble {
public:
  int m() const { return int(pairs_.size()); }
  const std::vector<WalkerPair>& pairs() const { return pairs_; }
  double sigma_step() const { return sigma_step_; }
  void set_sigma_step(double s) { sigma_step_ = s; }
  PhiloxRng& rng() { return rng_; }
  const PhiloxRng& rng() const { return rng_; }

  long long proposed() const { return proposed_; }
  long long accepted() const { return accepted_; }
  double acceptance_fraction() const {
    return proposed_ ? double(accepted_) / double(proposed_) : 0.0;
  }
  void reset_counters() { proposed_ = accepted_ = 0; }

  void save(std::ostream& os) const;
  static WalkerEnsemble load(std::istream& is);

  friend WalkerEnsemble init_ensemble(int m, const Molecule& molecule, const WeightSpec& spec,
                                      std::uint64_t seed, std::uint32_t stream);
  friend int metropolis_step(WalkerEnsemble& ens, const WeightSpec& spec,
                             std::vector<std::uint8_t>* accepted_flags);

private:
  std::vector<WalkerPair> pairs_;
  double sigma_step_ = 1.0;
  PhiloxRng rng_;
  long long proposed_ = 0;
  long long accepted_ = 0;
};

// Electrons start near a uniformly chosen nucleus with a Gaussian spread of
// variance 1/(2 zeta1) taken from that nucleus's weight parameters.
WalkerEnsemble init_ensemble(int m, const Molecule& molecule, const WeightSpec& spec,
                             std::uint64_t seed, std::uint32_t stream = 0);

// One Metropolis sweep: both electrons of every pair get a simultaneous
// Gaussian displacement of scale sigma_step, accepted with min(1, w'/w).
// Returns the number of accepted pair moves.
int metropolis_step(WalkerEnsemble& ens, const WeightSpec& spec,
                    std::vector<std::uint8_t>* accepted_flags = nullptr);

// n_burn steps with sigma_step nudged toward 50% acceptance every 100 steps
// (x1.1 / /1.1); the scale is frozen afterwards and production counters reset.
void burn_in(WalkerEnsemble& ens, const WeightSpec& spec, long n_burn, bool adapt = true);

}  // namespace mcmp2

#endif
