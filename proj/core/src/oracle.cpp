#include "mcmp2/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "mcmp2/rng.hpp"

namespace mcmp2 {

namespace {

constexpr double kPi = std::numbers::pi;

void require_s(const BasisFunction& f, const char* where) {
  if (f.l() != 0)
    throw std::invalid_argument(std::string(where) + ": unsupported angular momentum l=" +
                                std::to_string(f.l()) + " (s functions only)");
}

// effective s coefficient of primitive k: contraction x norm x Y00
double s_coeff(const BasisFunction& f, std::size_t k) {
  return f.evaluation_coeffs()[k] * 0.28209479177387814;
}

}  // namespace

double s_kinetic(const BasisFunction& a, const BasisFunction& b) {
  require_s(a, "s_kinetic");
  require_s(b, "s_kinetic");
  const double r2 = (a.center() - b.center()).squaredNorm();
  double t = 0.0;
  for (std::size_t i = 0; i < a.primitives().size(); ++i) {
    for (std::size_t j = 0; j < b.primitives().size(); ++j) {
      const double za = a.primitives()[i].zeta, zb = b.primitives()[j].zeta;
      const double p = za + zb, mu = za * zb / p;
      t += s_coeff(a, i) * s_coeff(b, j) * mu * (3.0 - 2.0 * mu * r2) *
           std::pow(kPi / p, 1.5) * std::exp(-mu * r2);
    }
  }
  return t;
}

double s_nuclear(const BasisFunction& a, const BasisFunction& b, const Molecule& mol) {
  require_s(a, "s_nuclear");
  require_s(b, "s_nuclear");
  const double r2 = (a.center() - b.center()).squaredNorm();
  double v = 0.0;
  for (std::size_t i = 0; i < a.primitives().size(); ++i) {
    for (std::size_t j = 0; j < b.primitives().size(); ++j) {
      const double za = a.primitives()[i].zeta, zb = b.primitives()[j].zeta;
      const double p = za + zb, mu = za * zb / p;
      const Vec3 P = (za * a.center() + zb * b.center()) / p;
      const double pre = s_coeff(a, i) * s_coeff(b, j) * 2.0 * kPi / p * std::exp(-mu * r2);
      for (const auto& nuc : mol.nuclei())
        v -= pre * nuc.charge * boys_f0(p * (P - nuc.position).squaredNorm());
    }
  }
  return v;
}

double eri_ssss(const BasisFunction& a, const BasisFunction& b, const BasisFunction& c,
                const BasisFunction& d) {
  require_s(a, "eri_ssss");
  require_s(b, "eri_ssss");
  require_s(c, "eri_ssss");
  require_s(d, "eri_ssss");
  const double rab2 = (a.center() - b.center()).squaredNorm();
  const double rcd2 = (c.center() - d.center()).squaredNorm();
  double value = 0.0;
  for (std::size_t i = 0; i < a.primitives().size(); ++i) {
    for (std::size_t j = 0; j < b.primitives().size(); ++j) {
      const double za = a.primitives()[i].zeta, zb = b.primitives()[j].zeta;
      const double p = za + zb;
      const Vec3 P = (za * a.center() + zb * b.center()) / p;
      const double kab = std::exp(-za * zb / p * rab2);
      const double cij = s_coeff(a, i) * s_coeff(b, j);
      for (std::size_t k = 0; k < c.primitives().size(); ++k) {
        for (std::size_t l = 0; l < d.primitives().size(); ++l) {
          const double zc = c.primitives()[k].zeta, zd = d.primitives()[l].zeta;
          const double q = zc + zd;
          const Vec3 Q = (zc * c.center() + zd * d.center()) / q;
          const double kcd = std::exp(-zc * zd / q * rcd2);
          const double t = p * q / (p + q) * (P - Q).squaredNorm();
          value += cij * s_coeff(c, k) * s_coeff(d, l) * 2.0 * std::pow(kPi, 2.5) /
                   (p * q * std::sqrt(p + q)) * kab * kcd * boys_f0(t);
        }
      }
    }
  }
  return value;
}

EriTensor::EriTensor(int ncomp, std::vector<int> nbas) : ncomp_(ncomp), nbas_(std::move(nbas)) {
  if (int(nbas_.size()) != ncomp_) throw std::invalid_argument("EriTensor: one size per channel");
  blocks_.resize(ncomp_ * ncomp_);
  for (int x = 0; x < ncomp_; ++x)
    for (int y = 0; y < ncomp_; ++y) {
      const std::size_t nx = nbas_[x], ny = nbas_[y];
      blocks_[x * ncomp_ + y].assign(nx * nx * ny * ny, 0.0);
    }
}

double& EriTensor::at(int x, int y, int mu, int nu, int kappa, int lambda) {
  const std::size_t nx = nbas_[x], ny = nbas_[y];
  return blocks_[x * ncomp_ + y][((mu * nx + nu) * ny + kappa) * ny + lambda];
}

double EriTensor::at(int x, int y, int mu, int nu, int kappa, int lambda) const {
  const std::size_t nx = nbas_[x], ny = nbas_[y];
  return blocks_[x * ncomp_ + y][((mu * nx + nu) * ny + kappa) * ny + lambda];
}

EriTensor compute_eri_tensor(const std::vector<std::vector<BasisFunction>>& basis) {
  const int ncomp = int(basis.size());
  std::vector<int> sizes;
  for (const auto& b : basis) sizes.push_back(int(b.size()));
  EriTensor eri(ncomp, sizes);
  for (int x = 0; x < ncomp; ++x) {
    for (int y = 0; y < ncomp; ++y) {
      const auto& bx = basis[x];
      const auto& by = basis[y];
      const int nx = int(bx.size()), ny = int(by.size());
      for (int mu = 0; mu < nx; ++mu)
        for (int nu = 0; nu < nx; ++nu)
          for (int ka = 0; ka < ny; ++ka)
            for (int la = 0; la < ny; ++la)
              eri.at(x, y, mu, nu, ka, la) = eri_ssss(bx[mu], bx[nu], by[ka], by[la]);
    }
  }
  return eri;
}

MoIntegralSet::MoIntegralSet(int n_occ, int n_vir) : n_occ_(n_occ), n_vir_(n_vir) {
  values_.assign(std::size_t(n_occ) * n_vir * n_occ * n_vir, Complex(0, 0));
}

Complex& MoIntegralSet::at(int i, int a, int j, int b) {
  return values_[((std::size_t(i) * n_vir_ + a) * n_occ_ + j) * n_vir_ + b];
}

Complex MoIntegralSet::at(int i, int a, int j, int b) const {
  return values_[((std::size_t(i) * n_vir_ + a) * n_occ_ + j) * n_vir_ + b];
}

MoIntegralSet transform_eri(const EriTensor& eri, const SpinorSet& spinors) {
  const int no = spinors.n_occ(), nv = spinors.n_vir();
  if (eri.ncomp() != spinors.ncomp())
    throw std::invalid_argument("transform_eri: channel count mismatch");
  for (int x = 0; x < spinors.ncomp(); ++x)
    if (eri.nbas(x) != int(spinors.basis(x).size()))
      throw std::invalid_argument("transform_eri: AO dimension mismatch");

  MoIntegralSet mo(no, nv);
  for (int x = 0; x < spinors.ncomp(); ++x) {
    for (int y = 0; y < spinors.ncomp(); ++y) {
      const auto cx = spinors.component_block(x);
      const auto cy = spinors.component_block(y);
      const int nx = eri.nbas(x), ny = eri.nbas(y);

      // quarter 1: (mu nu|ka la) -> (i nu|ka la)
      std::vector<Complex> t1(std::size_t(no) * nx * ny * ny, Complex(0, 0));
      auto t1at = [&](int i, int nu, int ka, int la) -> Complex& {
        return t1[((std::size_t(i) * nx + nu) * ny + ka) * ny + la];
      };
      for (int i = 0; i < no; ++i)
        for (int mu = 0; mu < nx; ++mu) {
          const Complex c = std::conj(cx(mu, i));
          for (int nu = 0; nu < nx; ++nu)
            for (int ka = 0; ka < ny; ++ka)
              for (int la = 0; la < ny; ++la)
                t1at(i, nu, ka, la) += c * eri.at(x, y, mu, nu, ka, la);
        }

      // quarter 2: -> (i a|ka la)
      std::vector<Complex> t2(std::size_t(no) * nv * ny * ny, Complex(0, 0));
      auto t2at = [&](int i, int a, int ka, int la) -> Complex& {
        return t2[((std::size_t(i) * nv + a) * ny + ka) * ny + la];
      };
      for (int i = 0; i < no; ++i)
        for (int a = 0; a < nv; ++a)
          for (int nu = 0; nu < nx; ++nu) {
            const Complex c = cx(nu, no + a);
            for (int ka = 0; ka < ny; ++ka)
              for (int la = 0; la < ny; ++la) t2at(i, a, ka, la) += c * t1at(i, nu, ka, la);
          }

      // quarter 3: -> (i a|j la)
      std::vector<Complex> t3(std::size_t(no) * nv * no * ny, Complex(0, 0));
      auto t3at = [&](int i, int a, int j, int la) -> Complex& {
        return t3[((std::size_t(i) * nv + a) * no + j) * ny + la];
      };
      for (int i = 0; i < no; ++i)
        for (int a = 0; a < nv; ++a)
          for (int j = 0; j < no; ++j)
            for (int ka = 0; ka < ny; ++ka) {
              const Complex c = std::conj(cy(ka, j));
              for (int la = 0; la < ny; ++la) t3at(i, a, j, la) += c * t2at(i, a, ka, la);
            }

      // quarter 4: -> (i a|j b), accumulated over channel pairs
      for (int i = 0; i < no; ++i)
        for (int a = 0; a < nv; ++a)
          for (int j = 0; j < no; ++j)
            for (int b = 0; b < nv; ++b) {
              Complex acc(0, 0);
              for (int la = 0; la < ny; ++la) acc += cy(la, no + b) * t3at(i, a, j, la);
              mo.at(i, a, j, b) += acc;
            }
    }
  }
  return mo;
}

double deterministic_mp2(const MoIntegralSet& mo, const Eigen::VectorXd& energies, int ncomp) {
  const int no = mo.n_occ(), nv = mo.n_vir();
  const PairPrefactors w = mp2_pair_prefactors(ncomp);
  Complex e(0, 0);
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          const double denom =
              energies[i] + energies[j] - energies[no + a] - energies[no + b];
          if (std::abs(denom) < 1e-12)
            throw std::runtime_error("deterministic_mp2: vanishing denominator");
          const Complex iajb = mo.at(i, a, j, b);
          const Complex aibj = std::conj(iajb);             // (ai|bj)
          const Complex biaj = std::conj(mo.at(i, b, j, a));  // (bi|aj)
          e += (w.direct * iajb * aibj + w.exchange * iajb * biaj) / denom;
        }
  if (std::abs(e.imag()) > 1e-10)
    throw std::runtime_error("deterministic_mp2: imaginary residue above 1e-10");
  return e.real();
}

double oracle_mp2_energy(const SpinorSet& spinors) {
  const EriTensor eri = compute_eri_tensor(spinors.basis());
  const MoIntegralSet mo = transform_eri(eri, spinors);
  return deterministic_mp2(mo, spinors.energies(), spinors.ncomp());
}

RhfResult rhf_scf(const Molecule& molecule, const std::vector<BasisFunction>& basis,
                  const RhfOptions& options) {
  for (const auto& f : basis) require_s(f, "rhf_scf");
  const int n = int(basis.size());
  if (n == 0) throw std::invalid_argument("rhf_scf: empty basis");

  double zsum = 0.0;
  for (const auto& nuc : molecule.nuclei()) zsum += nuc.charge;
  const long nelec = std::lround(zsum);
  if (nelec <= 0 || nelec % 2 != 0)
    throw std::invalid_argument("rhf_scf: closed-shell (even, positive) electron count required");
  const int nocc = int(nelec / 2);
  if (nocc > n) throw std::invalid_argument("rhf_scf: more electron pairs than basis functions");

  Eigen::MatrixXd S(n, n), H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S(i, j) = contracted_overlap(basis[i], basis[j]);
      H(i, j) = s_kinetic(basis[i], basis[j]) + s_nuclear(basis[i], basis[j], molecule);
    }
  const EriTensor eri = compute_eri_tensor({basis});

  auto fock = [&](const Eigen::MatrixXd& P) {
    Eigen::MatrixXd F = H;
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        double acc = 0.0;
        for (int ka = 0; ka < n; ++ka)
          for (int la = 0; la < n; ++la)
            acc += P(ka, la) *
                   (eri.at(0, 0, mu, nu, ka, la) - 0.5 * eri.at(0, 0, mu, ka, nu, la));
        F(mu, nu) += acc;
      }
    return F;
  };

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  if (options.random_guess) {
    PhiloxRng rng(options.guess_seed, 0xACu);
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R(i, j) = rng.uniform() - 0.5;
    Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::MatrixXd shalf =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().transpose();
    const Eigen::MatrixXd C0 = shalf * Q;
    P = 2.0 * C0.leftCols(nocc) * C0.leftCols(nocc).transpose();
  }

  Eigen::MatrixXd C;
  Eigen::VectorXd eps;
  int iter = 0;
  for (;; ++iter) {
    if (iter >= options.max_iterations)
      throw std::runtime_error("rhf_scf: no convergence after " +
                               std::to_string(options.max_iterations) + " iterations");
    const Eigen::MatrixXd F = fock(P);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(F, S);
    C = ges.eigenvectors();
    eps = ges.eigenvalues();
    Eigen::MatrixXd Pnew = 2.0 * C.leftCols(nocc) * C.leftCols(nocc).transpose();
    const double change = (Pnew - P).cwiseAbs().maxCoeff();
    if (iter > 0) Pnew = (1.0 - options.damping) * Pnew + options.damping * P;
    P = Pnew;
    if (change < options.density_tolerance) break;
  }

  // fix column phases so fixtures are reproducible byte for byte
  for (int j = 0; j < n; ++j) {
    int arg = 0;
    C.col(j).cwiseAbs().maxCoeff(&arg);
    if (C(arg, j) < 0) C.col(j) = -C.col(j);
  }

  const Eigen::MatrixXd F = fock(P);
  const double e_elec = 0.5 * (P.array() * (H + F).array()).sum();
  const double e_total = e_elec + molecule.nuclear_repulsion();

  SpinorSet spinors(1, {basis}, C.cast<Complex>(), eps, nocc, n - nocc, molecule);
  return RhfResult{std::move(spinors), e_total, e_elec, iter + 1};
}

namespace {

std::vector<BasisFunction> hydrogen_s_basis(const Vec3& center) {
  return {
      BasisFunction(center, 0, 0,
                    {{13.010701, 0.019682158}, {1.9622572, 0.13796524}, {0.44453796, 0.47831935}}),
      BasisFunction(center, 0, 0, {{0.12194962, 1.0}}),
  };
}

std::vector<BasisFunction> helium_s_basis(const Vec3& center) {
  return {
      BasisFunction(center, 0, 0, {{38.36, 0.023809}, {5.77, 0.154891}, {1.24, 0.469987}}),
      BasisFunction(center, 0, 0, {{0.2976, 1.0}}),
  };
}

// time-reversal partner: (La,Lb,Sa,Sb) -> (-Lb*, La*, -Sb*, Sa*)
Eigen::VectorXcd kramers_partner(const Eigen::VectorXcd& v, int nbas) {
  Eigen::VectorXcd w(v.size());
  for (int d = 0; d < 2; ++d) {
    const int alpha = 2 * d * nbas, beta = (2 * d + 1) * nbas;
    w.segment(alpha, nbas) = -v.segment(beta, nbas).conjugate();
    w.segment(beta, nbas) = v.segment(alpha, nbas).conjugate();
  }
  return w;
}

Fixture make_syn4c() {
  const Vec3 origin(0, 0, 0);
  const Molecule mol({{29.0, origin}});
  std::vector<BasisFunction> aos;
  for (double zeta : {4.8, 1.4, 0.45, 0.14}) aos.emplace_back(origin, 0, 0, std::vector<Primitive>{{zeta, 1.0}});
  const int nbas = int(aos.size());
  const int nspin = 8;

  Eigen::MatrixXd s16 = Eigen::MatrixXd::Zero(4 * nbas, 4 * nbas);
  const Eigen::MatrixXd s4 = overlap_matrix(aos);
  for (int x = 0; x < 4; ++x) s16.block(x * nbas, x * nbas, nbas, nbas) = s4;

  auto sdot = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    return (u.adjoint() * s16 * v)(0, 0);
  };

  PhiloxRng rng(0x4c4c, 0);
  MatrixXcd C(4 * nbas, nspin);
  int col = 0;
  for (int pair = 0; pair < nspin / 2; ++pair) {
    Eigen::VectorXcd v(4 * nbas);
    for (int i = 0; i < v.size(); ++i)
      v[i] = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    for (int rep = 0; rep < 2; ++rep)
      for (int j = 0; j < col; ++j) v -= C.col(j) * sdot(C.col(j), v);
    v /= std::sqrt(sdot(v, v).real());
    C.col(col++) = v;
    C.col(col++) = kramers_partner(v, nbas);
  }

  Eigen::VectorXd eps(nspin);
  eps << -0.9, -0.9, 0.3, 0.3, 0.8, 0.8, 1.6, 1.6;

  SpinorSet spinors(4, {aos, aos, aos, aos}, std::move(C), eps, 2, 6, mol);
  const double e2 = oracle_mp2_energy(spinors);
  return Fixture{"syn4c", std::move(spinors), e2};
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"h2_svp", "he_dz", "syn4c"};
  return names;
}

Fixture make_fixture(const std::string& name) {
  if (name == "h2_svp") {
    const Molecule mol({{1.0, Vec3(0, 0, 0)}, {1.0, Vec3(0, 0, 1.4)}});
    std::vector<BasisFunction> basis = hydrogen_s_basis(Vec3(0, 0, 0));
    for (auto& f : hydrogen_s_basis(Vec3(0, 0, 1.4))) basis.push_back(f);
    RhfResult rhf = rhf_scf(mol, basis);
    const double e2 = oracle_mp2_energy(rhf.spinors);
    return Fixture{name, std::move(rhf.spinors), e2};
  }
  if (name == "he_dz") {
    const Molecule mol({{2.0, Vec3(0, 0, 0)}});
    RhfResult rhf = rhf_scf(mol, helium_s_basis(Vec3(0, 0, 0)));
    const double e2 = oracle_mp2_energy(rhf.spinors);
    return Fixture{name, std::move(rhf.spinors), e2};
  }
  if (name == "syn4c") return make_syn4c();
  throw std::invalid_argument("unknown fixture '" + name + "' (h2_svp, he_dz, syn4c)");
}

Fixture write_fixture(const std::string& name, const std::string& directory) {
  Fixture fx = make_fixture(name);
  const std::string stem = directory.empty() ? name : directory + "/" + name;
  save_spinor_set(fx.spinors, stem + ".spinor");
  std::ofstream side(stem + ".e2");
  if (!side) throw std::runtime_error("cannot write sidecar: " + stem + ".e2");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", fx.e2);
  side << buf << "\n";
  return fx;
}

SpinorSet make_scaling_set(int nbas, std::uint64_t seed) {
  if (nbas < 8 || nbas % 8 != 0)
    throw std::invalid_argument("make_scaling_set: nbas must be a positive multiple of 8");
  const int ncenters = nbas / 8;
  std::vector<Nucleus> nuclei;
  std::vector<BasisFunction> basis;
  for (int c = 0; c < ncenters; ++c) {
    const Vec3 pos(0, 0, 2.0 * c);
    nuclei.push_back({1.0, pos});
    double zeta = 0.13;
    for (int k = 0; k < 8; ++k) {
      basis.emplace_back(pos, 0, 0, std::vector<Primitive>{{zeta, 1.0}});
      zeta *= 2.4;
    }
  }
  const Molecule mol(std::move(nuclei));

  const Eigen::MatrixXd S = overlap_matrix(basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const Eigen::MatrixXd shalf = es.eigenvectors() *
                                es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                es.eigenvectors().transpose();
  PhiloxRng rng(seed, 0x5Cu);
  Eigen::MatrixXd R(nbas, nbas);
  for (int i = 0; i < nbas; ++i)
    for (int j = 0; j < nbas; ++j) R(i, j) = rng.uniform() - 0.5;
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ();
  const Eigen::MatrixXd C = shalf * Q;

  const int nocc = nbas / 2;
  Eigen::VectorXd eps(nbas);
  for (int i = 0; i < nocc; ++i) eps[i] = -2.0 + 1.0 * i / std::max(1, nocc - 1);
  for (int a = 0; a < nbas - nocc; ++a) eps[nocc + a] = 0.5 + 2.0 * a / std::max(1, nbas - nocc - 1);

  return SpinorSet(1, {std::move(basis)}, C.cast<Complex>(), eps, nocc, nbas - nocc, mol);
}

}  // namespace mcmp2
