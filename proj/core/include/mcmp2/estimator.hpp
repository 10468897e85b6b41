#ifndef MCMP2_ESTIMATOR_HPP
#define MCMP2_ESTIMATOR_HPP

#include <vector>

#include "mcmp2/greens.hpp"
#include "mcmp2/sampler.hpp"
#include "mcmp2/weights.hpp"

namespace mcmp2 {

// One weight-divided pair term. direct/exchange carry their Eq.-(15)
// prefactors (component convention via mp2_pair_prefactors) and the full
// weight division; the 1/r12 1/r34 potentials are cancelled analytically
// against the spatial weights and are never evaluated.
struct SampleTerm {
  Complex direct;
  Complex exchange;
  double total() const { return (direct + exchange).real(); }
  double imag() const { return (direct + exchange).imag(); }
};

struct StepEstimate {
  double value;  // I'_n, real part
  double imag;   // residue, diagnostic
};

// Scratch owned by one worker; holds the per-step spinor-value cache.
class EstimatorWorkspace {
public:
  EstimatorWorkspace(const SpinorSet& spinors, int m);
  TraceWorkspace& traces() { return traces_; }

  friend StepEstimate mc_step_estimate(const SpinorSet& spinors, const WalkerEnsemble& ens,
                                       double tau, const WeightSpec& spec,
                                       const TauSampler& sampler, EstimatorWorkspace& ws);
  friend SampleTerm sample_term(const SpinorSet& spinors, const WalkerPair& p,
                                const WalkerPair& q, double tau, const WeightSpec& spec,
                                const TauSampler& sampler);

private:
  SampleTerm pair_term(int p, int q, double inv_weight, const PairPrefactors& w);

  TraceWorkspace traces_;
  std::vector<Vec3> points_;
  MatrixXcd o1_, o2_, va_, vb_, vc_, vd_;
};

// Standalone pair term matching the spec's operation surface (used directly
// by tests; the production path amortizes the caches over all mC2 pairs).
SampleTerm sample_term(const SpinorSet& spinors, const WalkerPair& p, const WalkerPair& q,
                       double tau, const WeightSpec& spec, const TauSampler& sampler);

// I'_n over all p<q pairings against one shared tau.
StepEstimate mc_step_estimate(const SpinorSet& spinors, const WalkerEnsemble& ens, double tau,
                              const WeightSpec& spec, const TauSampler& sampler,
                              EstimatorWorkspace& ws);

// Flyvbjerg-Petersen blocked statistics.
class BlockingAccumulator {
public:
  explicit BlockingAccumulator(long block_size);

  void add(double value, double imag = 0.0);

  long long count() const { return n_; }
  long block_size() const { return nb_; }
  double mean() const { return n_ ? sum_ / double(n_) : 0.0; }
  double sigma() const;
  double sigma_bar() const;
  double imag_sum() const { return imag_sum_; }
  double real_sum() const { return sum_; }
  const std::vector<double>& block_means() const { return block_means_; }

  struct TracePoint {
    long long n;
    double mean;
    double sigma_bar;
  };
  // one point per completed block, reconstructed from the block-mean history
  std::vector<TracePoint> trace() const;

  // checkpoint restore
  void restore(long long n, double sum, double imag_sum, long in_block, double partial,
               std::vector<double> block_means);
  long in_block() const { return in_block_; }
  double partial() const { return partial_; }

private:
  long nb_;
  long long n_ = 0;
  double sum_ = 0.0;
  double imag_sum_ = 0.0;
  double partial_ = 0.0;
  long in_block_ = 0;
  std::vector<double> block_means_;
};

}  // namespace mcmp2

#endif
