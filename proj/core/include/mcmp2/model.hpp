#ifndef MCMP2_MODEL_HPP
#define MCMP2_MODEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mcmp2/gaussian.hpp"

namespace mcmp2 {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;

struct Nucleus {
  double charge;
  Vec3 position;
};

class Molecule {
public:
  explicit Molecule(std::vector<Nucleus> nuclei);

  const std::vector<Nucleus>& nuclei() const { return nuclei_; }
  std::size_t size() const { return nuclei_.size(); }
  double nuclear_repulsion() const;

private:
  std::vector<Nucleus> nuclei_;
};

struct Primitive {
  double zeta;
  double coeff;
};

// Contracted real-solid-harmonic Gaussian, normalized to unit self-overlap.
class BasisFunction {
public:
  BasisFunction(const Vec3& center, int l, int m, std::vector<Primitive> primitives);

  const Vec3& center() const { return center_; }
  int l() const { return l_; }
  int m() const { return m_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }
  // contraction coefficient x primitive norm x contracted rescale
  const std::vector<double>& evaluation_coeffs() const { return eval_coeffs_; }

  double value(const Vec3& r) const;

private:
  Vec3 center_;
  int l_, m_;
  std::vector<Primitive> primitives_;
  std::vector<double> eval_coeffs_;
};

double contracted_overlap(const BasisFunction& a, const BasisFunction& b);
Eigen::MatrixXd overlap_matrix(const std::vector<BasisFunction>& basis);

enum class SpinorBlock { occupied, virtuals };

// Orbital convention carried by the component count: a 1-component set holds
// doubly occupied spatial orbitals of a closed-shell reference; 2- and
// 4-component sets hold explicit spinors.
struct PairPrefactors {
  double direct;
  double exchange;
};
PairPrefactors mp2_pair_prefactors(int ncomp);

class SpinorSet {
public:
  SpinorSet(int ncomp, std::vector<std::vector<BasisFunction>> basis,
            MatrixXcd coefficients, Eigen::VectorXd energies, int n_occ, int n_vir,
            std::optional<Molecule> molecule = std::nullopt);

  int ncomp() const { return ncomp_; }
  int n_occ() const { return n_occ_; }
  int n_vir() const { return n_vir_; }
  int n_spinor() const { return n_occ_ + n_vir_; }
  int rows() const { return int(coeff_.rows()); }
  const std::vector<BasisFunction>& basis(int comp) const { return basis_.at(comp); }
  const std::vector<std::vector<BasisFunction>>& basis() const { return basis_; }
  const MatrixXcd& coefficients() const { return coeff_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  double energy(int p) const { return energies_[p]; }
  const std::optional<Molecule>& molecule() const { return molecule_; }

  int component_row_offset(int comp) const { return row_offset_.at(comp); }
  // coefficient block of one component channel, all spinor columns
  Eigen::Block<const MatrixXcd> component_block(int comp) const;

  double homo_energy() const { return energies_[n_occ_ - 1]; }
  double lumo_energy() const { return energies_[n_occ_]; }

  // per-channel block-diagonal overlap metric over component-basis rows
  Eigen::MatrixXd overlap_metric() const;
  // max |C^H S C - I|
  double orthonormality_deviation() const;

  // entry (x,p) = sum_mu C^x_{mu p} chi^x_mu(point)
  MatrixXcd evaluate(const Vec3& point, SpinorBlock block) const;
  // both blocks at once into preallocated (ncomp x n_occ), (ncomp x n_vir)
  void evaluate_into(const Vec3& point, MatrixXcd& occ, MatrixXcd& vir) const;

private:
  int ncomp_;
  std::vector<std::vector<BasisFunction>> basis_;
  MatrixXcd coeff_;
  Eigen::VectorXd energies_;
  int n_occ_, n_vir_;
  std::vector<int> row_offset_;
  std::optional<Molecule> molecule_;
};

SpinorSet load_spinor_set(const std::string& path);
void save_spinor_set(const SpinorSet& set, const std::string& path);

// 17-significant-digit decimal, round-trips IEEE doubles exactly
std::string format_double(double x);

}  // namespace mcmp2

#endif
