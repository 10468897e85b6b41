#include "mcmp2/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace mcmp2 {

EstimatorWorkspace::EstimatorWorkspace(const SpinorSet& spinors, int m)
    : traces_(spinors, 2 * m) {
  points_.resize(2 * m);
  const int nc = spinors.ncomp();
  for (MatrixXcd* mat : {&o1_, &o2_, &va_, &vb_, &vc_, &vd_}) mat->resize(nc, nc);
}

SampleTerm EstimatorWorkspace::pair_term(int p, int q, double inv_weight,
                                         const PairPrefactors& w) {
  const int a = 2 * p, b = 2 * p + 1;  // (r1, r2) <- walker p
  const int c = 2 * q, d = 2 * q + 1;  // (r3, r4) <- walker q
  traces_.occupied(a, c, o1_);
  traces_.occupied(b, d, o2_);
  traces_.virtuals(c, a, va_);
  traces_.virtuals(d, b, vb_);
  traces_.virtuals(d, a, vc_);
  traces_.virtuals(c, b, vd_);

  const Complex f1d = (o1_.array() * va_.array()).sum();
  const Complex f2d = (o2_.array() * vb_.array()).sum();
  const Complex f1x = (o1_.array() * vc_.array()).sum();
  const Complex f2x = (o2_.array() * vd_.array()).sum();

  // Laplace transform carries a global minus sign
  return SampleTerm{-w.direct * f1d * f2d * inv_weight, -w.exchange * f1x * f2x * inv_weight};
}

StepEstimate mc_step_estimate(const SpinorSet& spinors, const WalkerEnsemble& ens, double tau,
                              const WeightSpec& spec, const TauSampler& sampler,
                              EstimatorWorkspace& ws) {
  const int m = ens.m();
  for (int p = 0; p < m; ++p) {
    ws.points_[2 * p] = ens.pairs()[p].r1;
    ws.points_[2 * p + 1] = ens.pairs()[p].r2;
  }
  ws.traces_.load_points({ws.points_.data(), std::size_t(2 * m)});
  ws.traces_.set_tau(tau);

  const PairPrefactors w = mp2_pair_prefactors(spinors.ncomp());
  const double ng2 = spec.ng() * spec.ng();
  const double wtau = sampler.pdf(tau);

  double sum = 0.0, imag = 0.0;
  for (int p = 0; p < m; ++p) {
    const auto& wp = ens.pairs()[p];
    for (int q = p + 1; q < m; ++q) {
      const auto& wq = ens.pairs()[q];
      const double inv_weight = ng2 / (wp.g1 * wp.g2 * wq.g1 * wq.g2 * wtau);
      const SampleTerm t = ws.pair_term(p, q, inv_weight, w);
      sum += t.total();
      imag += t.imag();
    }
  }
  const double npairs = 0.5 * m * (m - 1);
  return StepEstimate{sum / npairs, imag / npairs};
}

SampleTerm sample_term(const SpinorSet& spinors, const WalkerPair& p, const WalkerPair& q,
                       double tau, const WeightSpec& spec, const TauSampler& sampler) {
  if (tau < 0) throw std::invalid_argument("sample_term: tau must be non-negative");
  EstimatorWorkspace ws(spinors, 2);
  ws.points_ = {p.r1, p.r2, q.r1, q.r2};
  ws.traces_.load_points({ws.points_.data(), ws.points_.size()});
  ws.traces_.set_tau(tau);
  const double inv_weight =
      spec.ng() * spec.ng() / (p.g1 * p.g2 * q.g1 * q.g2 * sampler.pdf(tau));
  return ws.pair_term(0, 1, inv_weight, mp2_pair_prefactors(spinors.ncomp()));
}

BlockingAccumulator::BlockingAccumulator(long block_size) : nb_(block_size) {
  if (nb_ < 1) throw std::invalid_argument("BlockingAccumulator: block size must be >= 1");
}

void BlockingAccumulator::add(double value, double imag) {
  sum_ += value;
  imag_sum_ += imag;
  ++n_;
  partial_ += value;
  if (++in_block_ == nb_) {
    block_means_.push_back(partial_ / double(nb_));
    partial_ = 0.0;
    in_block_ = 0;
  }
}

double BlockingAccumulator::sigma() const {
  const std::size_t k = block_means_.size();
  if (k == 0) return 0.0;
  const double m = mean();
  double s2 = 0.0;
  for (double b : block_means_) s2 += (b - m) * (b - m);
  return std::sqrt(s2 / double(k));
}

double BlockingAccumulator::sigma_bar() const {
  const std::size_t k = block_means_.size();
  return k ? sigma() / std::sqrt(double(k)) : 0.0;
}

std::vector<BlockingAccumulator::TracePoint> BlockingAccumulator::trace() const {
  std::vector<TracePoint> out;
  out.reserve(block_means_.size());
  double cum = 0.0;
  for (std::size_t k = 0; k < block_means_.size(); ++k) {
    cum += block_means_[k];
    const double mean_k = cum / double(k + 1);
    double s2 = 0.0;
    for (std::size_t j = 0; j <= k; ++j)
      s2 += (block_means_[j] - mean_k) * (block_means_[j] - mean_k);
    const double sigma_k = std::sqrt(s2 / double(k + 1));
    out.push_back({(long long)(k + 1) * nb_, mean_k, sigma_k / std::sqrt(double(k + 1))});
  }
  return out;
}

void BlockingAccumulator::restore(long long n, double sum, double imag_sum, long in_block,
                                  double partial, std::vector<double> block_means) {
  n_ = n;
  sum_ = sum;
  imag_sum_ = imag_sum;
  in_block_ = in_block;
  partial_ = partial;
  block_means_ = std::move(block_means);
}

}  // namespace mcmp2
