#ifndef MCMP2_GREENS_HPP
#define MCMP2_GREENS_HPP

#include <span>
#include <vector>

#include "mcmp2/model.hpp"

namespace mcmp2 {

// entry (x,y) = sum_i phi^x_i(r_d) phi^{y*}_i(r_o) exp(+eps_i tau)
MatrixXcd occupied_trace(const SpinorSet& spinors, const Vec3& r_d, const Vec3& r_o, double tau);
// entry (x,y) = sum_a phi^x_a(r_d) phi^{y*}_a(r_o) exp(-eps_a tau)
MatrixXcd virtual_trace(const SpinorSet& spinors, const Vec3& r_d, const Vec3& r_o, double tau);

// vec[O]^T . vec[V], element-wise product sum without conjugation
Complex trace_pair_contraction(const MatrixXcd& o, const MatrixXcd& v);

// Per-MC-step cache: spinor values at each walker position are computed
// once and reused across all pair terms; tau enters through per-spinor
// exponential factors folded into a scaled copy of the point values.
class TraceWorkspace {
public:
  TraceWorkspace(const SpinorSet& spinors, int max_points);

  void load_points(std::span<const Vec3> points);
  void set_tau(double tau);

  int points() const { return npoints_; }

  // O(points[d], points[o], -tau) and V(points[d], points[o], +tau)
  void occupied(int d, int o, MatrixXcd& out) const;
  void virtuals(int d, int o, MatrixXcd& out) const;

private:
  const SpinorSet* spinors_;
  int npoints_ = 0;
  std::vector<MatrixXcd> occ_, vir_;    // raw values, ncomp x n
  std::vector<MatrixXcd> occw_, virw_;  // tau-weighted copies
  Eigen::VectorXd wocc_, wvir_;
};

// exp(eps tau) with the spec'd clamp: below -700 -> 0, above +700 aborts
double guarded_exp(double exponent, int spinor_index);

}  // namespace mcmp2

#endif
