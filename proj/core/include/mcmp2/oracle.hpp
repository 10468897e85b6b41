#ifndef MCMP2_ORACLE_HPP
#define MCMP2_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mcmp2/model.hpp"

namespace mcmp2 {

// Closed-form integrals over contracted s-type functions. Anything with
// l > 0 is rejected; the stochastic engine evaluates those pointwise but
// their deterministic validation is out of scope here.
double s_kinetic(const BasisFunction& a, const BasisFunction& b);
double s_nuclear(const BasisFunction& a, const BasisFunction& b, const Molecule& mol);
double eri_ssss(const BasisFunction& a, const BasisFunction& b, const BasisFunction& c,
                const BasisFunction& d);

// AO repulsion integrals (mu nu | kappa lambda) in chemists' notation,
// one dense block per component-channel pair.
class EriTensor {
public:
  EriTensor(int ncomp, std::vector<int> nbas);

  int ncomp() const { return ncomp_; }
  int nbas(int comp) const { return nbas_.at(comp); }
  double& at(int x, int y, int mu, int nu, int kappa, int lambda);
  double at(int x, int y, int mu, int nu, int kappa, int lambda) const;

private:
  int ncomp_;
  std::vector<int> nbas_;
  std::vector<std::vector<double>> blocks_;  // indexed x * ncomp + y
};

EriTensor compute_eri_tensor(const std::vector<std::vector<BasisFunction>>& basis);

// (ia|jb) over occupied x virtual x occupied x virtual spinors
class MoIntegralSet {
public:
  MoIntegralSet(int n_occ, int n_vir);

  int n_occ() const { return n_occ_; }
  int n_vir() const { return n_vir_; }
  Complex& at(int i, int a, int j, int b);
  Complex at(int i, int a, int j, int b) const;

private:
  int n_occ_, n_vir_;
  std::vector<Complex> values_;
};

// four quarter transformations per channel pair, bra coefficients conjugated
MoIntegralSet transform_eri(const EriTensor& eri, const SpinorSet& spinors);

// Eq.-(10)-style sum over the set's spinors; 1-component sets use the
// closed-shell spatial-orbital weights (see mp2_pair_prefactors).
double deterministic_mp2(const MoIntegralSet& mo, const Eigen::VectorXd& energies, int ncomp);

// convenience: ERI build + transform + sum
double oracle_mp2_energy(const SpinorSet& spinors);

struct RhfOptions {
  int max_iterations = 500;
  double density_tolerance = 1e-10;
  double damping = 0.5;  // fraction of the previous density kept
  bool random_guess = false;
  std::uint64_t guess_seed = 0;
};

struct RhfResult {
  SpinorSet spinors;
  double e_total;       // electronic + nuclear repulsion
  double e_electronic;
  int iterations;
};

RhfResult rhf_scf(const Molecule& molecule, const std::vector<BasisFunction>& basis,
                  const RhfOptions& options = {});

struct Fixture {
  std::string name;
  SpinorSet spinors;
  double e2;
};

// h2_svp, he_dz, syn4c
Fixture make_fixture(const std::string& name);
const std::vector<std::string>& fixture_names();
// writes <dir>/<name>.spinor and <dir>/<name>.e2 (12 significant digits)
Fixture write_fixture(const std::string& name, const std::string& directory);

// single-center even-tempered 1-component sets for cost-scaling studies;
// nbas must be a multiple of 8, spinor count equals nbas
SpinorSet make_scaling_set(int nbas, std::uint64_t seed = 7);

}  // namespace mcmp2

#endif
