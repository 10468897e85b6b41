#include "mcmp2/greens.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcmp2 {

double guarded_exp(double exponent, int spinor_index) {
  if (exponent > 700.0)
    throw std::runtime_error("greens: exponential overflow for spinor " +
                             std::to_string(spinor_index) +
                             " (positive occupied or negative virtual energy with large tau?)");
  if (exponent < -700.0) return 0.0;
  return std::exp(exponent);
}

MatrixXcd occupied_trace(const SpinorSet& spinors, const Vec3& r_d, const Vec3& r_o, double tau) {
  const MatrixXcd vd = spinors.evaluate(r_d, SpinorBlock::occupied);
  const MatrixXcd vo = spinors.evaluate(r_o, SpinorBlock::occupied);
  Eigen::VectorXd w(spinors.n_occ());
  for (int i = 0; i < spinors.n_occ(); ++i) w[i] = guarded_exp(spinors.energy(i) * tau, i);
  return (vd * w.asDiagonal()) * vo.adjoint();
}

MatrixXcd virtual_trace(const SpinorSet& spinors, const Vec3& r_d, const Vec3& r_o, double tau) {
  const MatrixXcd vd = spinors.evaluate(r_d, SpinorBlock::virtuals);
  const MatrixXcd vo = spinors.evaluate(r_o, SpinorBlock::virtuals);
  const int no = spinors.n_occ();
  Eigen::VectorXd w(spinors.n_vir());
  for (int a = 0; a < spinors.n_vir(); ++a)
    w[a] = guarded_exp(-spinors.energy(no + a) * tau, no + a);
  return (vd * w.asDiagonal()) * vo.adjoint();
}

Complex trace_pair_contraction(const MatrixXcd& o, const MatrixXcd& v) {
  if (o.rows() != v.rows() || o.cols() != v.cols())
    throw std::invalid_argument("trace_pair_contraction: dimension mismatch");
  return (o.array() * v.array()).sum();
}

TraceWorkspace::TraceWorkspace(const SpinorSet& spinors, int max_points) : spinors_(&spinors) {
  occ_.resize(max_points);
  vir_.resize(max_points);
  occw_.resize(max_points);
  virw_.resize(max_points);
  for (int i = 0; i < max_points; ++i) {
    occ_[i].resize(spinors.ncomp(), spinors.n_occ());
    vir_[i].resize(spinors.ncomp(), spinors.n_vir());
    occw_[i].resize(spinors.ncomp(), spinors.n_occ());
    virw_[i].resize(spinors.ncomp(), spinors.n_vir());
  }
  wocc_.resize(spinors.n_occ());
  wvir_.resize(spinors.n_vir());
}

void TraceWorkspace::load_points(std::span<const Vec3> points) {
  npoints_ = int(points.size());
  if (npoints_ > int(occ_.size())) throw std::invalid_argument("TraceWorkspace: too many points");
  for (int i = 0; i < npoints_; ++i) spinors_->evaluate_into(points[i], occ_[i], vir_[i]);
}

void TraceWorkspace::set_tau(double tau) {
  const int no = spinors_->n_occ(), nv = spinors_->n_vir();
  for (int i = 0; i < no; ++i) wocc_[i] = guarded_exp(spinors_->energy(i) * tau, i);
  for (int a = 0; a < nv; ++a) wvir_[a] = guarded_exp(-spinors_->energy(no + a) * tau, no + a);
  for (int p = 0; p < npoints_; ++p) {
    occw_[p] = occ_[p] * wocc_.asDiagonal();
    virw_[p] = vir_[p] * wvir_.asDiagonal();
  }
}

void TraceWorkspace::occupied(int d, int o, MatrixXcd& out) const {
  out.noalias() = occw_[d] * occ_[o].adjoint();
}

void TraceWorkspace::virtuals(int d, int o, MatrixXcd& out) const {
  out.noalias() = virw_[d] * vir_[o].adjoint();
}

}  // namespace mcmp2
