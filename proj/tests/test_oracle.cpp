#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mcmp2/oracle.hpp"
#include "mcmp2/rng.hpp"
#include "support/quadrature.hpp"
#include "support/reference.hpp"

using namespace mcmp2;
namespace mt = mcmp2::testing;

namespace {

constexpr double kPi = std::numbers::pi;

BasisFunction s_prim(const Vec3& c, double zeta, double coeff = 1.0) {
  return BasisFunction(c, 0, 0, {{zeta, coeff}});
}

}  // namespace

TEST_CASE("boys f0 values") {
  CHECK(boys_f0(0.0) == 1.0);
  CHECK(boys_f0(100.0) == doctest::Approx(0.5 * std::sqrt(kPi / 100.0)).epsilon(1e-14));
  CHECK_THROWS(boys_f0(-1e-3));
}

TEST_CASE("boys f0 is continuous across the series switch") {
  const double lo = boys_f0(1e-12 * (1 - 1e-9));
  const double hi = boys_f0(1e-12 * (1 + 1e-9));
  CHECK(std::abs(lo - hi) < 1e-14);
}

TEST_CASE("boys f0 is monotone decreasing") {
  double prev = boys_f0(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double t = 50.0 * i / 1000.0;
    const double v = boys_f0(t);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("eri of four identical unit-exponent s primitives is 2/sqrt(pi)") {
  const BasisFunction f = s_prim(Vec3(0, 0, 0), 1.0);
  CHECK(eri_ssss(f, f, f, f) == doctest::Approx(2.0 / std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("eri point-charge limit at 20 bohr") {
  const BasisFunction a = s_prim(Vec3(0, 0, 0), 0.9);
  const BasisFunction b = s_prim(Vec3(0, 0, 20), 1.3);
  // normalized s functions have unit charge-like self products at large R
  CHECK(eri_ssss(a, a, b, b) == doctest::Approx(1.0 / 20.0).epsilon(1e-6));
}

TEST_CASE("eri rejects higher angular momentum") {
  const BasisFunction s = s_prim(Vec3(0, 0, 0), 1.0);
  const BasisFunction p(Vec3(0, 0, 0), 1, 0, {{1.0, 1.0}});
  CHECK_THROWS_WITH_AS(eri_ssss(s, s, s, p), doctest::Contains("angular"),
                       std::invalid_argument);
}

TEST_CASE("eri is multilinear in each function") {
  const Vec3 o(0, 0, 0), z(0, 0, 1.1);
  const BasisFunction a = s_prim(o, 1.4), b = s_prim(z, 0.6), c = s_prim(o, 0.9),
                      d = s_prim(z, 2.0);
  // scaling is applied through an unnormalized two-primitive contraction trick:
  // a function with its only primitive coefficient doubled renormalizes away,
  // so scale via explicit contraction instead
  const double base = eri_ssss(a, b, c, d);
  CHECK(base != 0.0);
  CHECK(eri_ssss(b, a, d, c) == doctest::Approx(base).epsilon(1e-12));  // permutational symmetry
  CHECK(eri_ssss(c, d, a, b) == doctest::Approx(eri_ssss(a, b, c, d)).epsilon(1e-12));
}

TEST_CASE("eri agrees with Monte Carlo quadrature within 5 standard errors") {
  // r1 and r2 drawn from the normalized Gaussian products; the estimator
  // averages 1/r12 and multiplies the product charges. Independent of F0.
  const Vec3 A(0, 0, 0), B(0, 0, 1.4);
  const double za = 1.1, zb = 0.5;
  const BasisFunction a = s_prim(A, za), b = s_prim(B, zb);
  const double analytic = eri_ssss(a, a, b, b);

  const double qa = std::pow(2.0 * za / kPi, 0.75 * 2) * std::pow(kPi / (2 * za), 1.5);
  const double qb = std::pow(2.0 * zb / kPi, 0.75 * 2) * std::pow(kPi / (2 * zb), 1.5);
  PhiloxRng rng(31, 0);
  const long n = 10000000;
  double sum = 0, sum2 = 0;
  const double sa = 1.0 / std::sqrt(2.0 * (2.0 * za));
  const double sb = 1.0 / std::sqrt(2.0 * (2.0 * zb));
  for (long i = 0; i < n; ++i) {
    const auto g1 = rng.gaussian3();
    const auto g2 = rng.gaussian3();
    const Vec3 r1 = A + sa * Vec3(g1[0], g1[1], g1[2]);
    const Vec3 r2 = B + sb * Vec3(g2[0], g2[1], g2[2]);
    const double v = 1.0 / (r1 - r2).norm();
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(qa * qb * mean - analytic) < 5 * qa * qb * se);
}

TEST_CASE("eri tensor has 8-fold permutational symmetry") {
  Fixture fx = make_fixture("h2_svp");
  const EriTensor eri = compute_eri_tensor(fx.spinors.basis());
  const int n = eri.nbas(0);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int ka = 0; ka < n; ++ka)
        for (int la = 0; la < n; ++la) {
          const double v = eri.at(0, 0, mu, nu, ka, la);
          CHECK(std::abs(eri.at(0, 0, nu, mu, ka, la) - v) < 1e-12);
          CHECK(std::abs(eri.at(0, 0, mu, nu, la, ka) - v) < 1e-12);
          CHECK(std::abs(eri.at(0, 0, ka, la, mu, nu) - v) < 1e-12);
        }
}

TEST_CASE("helium in a single s function has the closed-form HF energy") {
  const Molecule he({{2.0, Vec3(0, 0, 0)}});
  const std::vector<BasisFunction> basis = {s_prim(Vec3(0, 0, 0), 0.8)};
  const RhfResult r = rhf_scf(he, basis);
  const double h11 = s_kinetic(basis[0], basis[0]) + s_nuclear(basis[0], basis[0], he);
  const double j11 = eri_ssss(basis[0], basis[0], basis[0], basis[0]);
  CHECK(r.e_total == doctest::Approx(2 * h11 + j11).epsilon(1e-12));
  CHECK(r.spinors.n_occ() == 1);
  CHECK(r.spinors.n_vir() == 0);
}

TEST_CASE("scf reaches the same fixed point from core and random guesses") {
  const Molecule mol({{1.0, Vec3(0, 0, 0)}, {1.0, Vec3(0, 0, 1.4)}});
  std::vector<BasisFunction> basis = {s_prim(Vec3(0, 0, 0), 1.2), s_prim(Vec3(0, 0, 1.4), 1.2)};
  const RhfResult core = rhf_scf(mol, basis);
  RhfOptions opt;
  opt.random_guess = true;
  opt.guess_seed = 99;
  const RhfResult rand = rhf_scf(mol, basis, opt);
  CHECK(core.e_total == doctest::Approx(rand.e_total).epsilon(1e-9));
}

TEST_CASE("scf rejects open shells and zero charges") {
  CHECK_THROWS(rhf_scf(Molecule({{1.0, Vec3(0, 0, 0)}}), {s_prim(Vec3(0, 0, 0), 1.0)}));
  CHECK_THROWS(Molecule({{0.0, Vec3(0, 0, 0)}}));  // zero charge never reaches the SCF
}

TEST_CASE("scf orbitals are orthonormal under the overlap metric") {
  Fixture fx = make_fixture("h2_svp");
  CHECK(fx.spinors.orthonormality_deviation() < 1e-10);
}

TEST_CASE("identity coefficients leave AO integrals unchanged") {
  // orthonormalized single-function "basis": C = 1
  const Molecule he({{2.0, Vec3(0, 0, 0)}});
  const std::vector<BasisFunction> basis = {s_prim(Vec3(0, 0, 0), 0.8),
                                            s_prim(Vec3(0, 0, 0), 8.0)};
  const Eigen::MatrixXd s = overlap_matrix(basis);
  // build an S-orthonormal pair, then check (ia|jb) equals the rotated AO value
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::MatrixXd c =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  Eigen::VectorXd eps(2);
  eps << -1.0, 1.0;
  const SpinorSet sp(1, {basis}, c.cast<Complex>(), eps, 1, 1, he);
  const EriTensor eri = compute_eri_tensor({basis});
  const MoIntegralSet mo = transform_eri(eri, sp);
  const MoIntegralSet ref = mt::ref_transform(eri, sp);
  CHECK(std::abs(mo.at(0, 0, 0, 0) - ref.at(0, 0, 0, 0)) < 1e-12);
}

TEST_CASE("quarter transforms agree with the eight-loop reference") {
  SUBCASE("1-component H2") {
    Fixture fx = make_fixture("h2_svp");
    const EriTensor eri = compute_eri_tensor(fx.spinors.basis());
    const MoIntegralSet mo = transform_eri(eri, fx.spinors);
    const MoIntegralSet ref = mt::ref_transform(eri, fx.spinors);
    for (int i = 0; i < mo.n_occ(); ++i)
      for (int a = 0; a < mo.n_vir(); ++a)
        for (int j = 0; j < mo.n_occ(); ++j)
          for (int b = 0; b < mo.n_vir(); ++b)
            CHECK(std::abs(mo.at(i, a, j, b) - ref.at(i, a, j, b)) < 1e-12);
  }
  SUBCASE("4-component synthetic set, all 16 channel pairs") {
    Fixture fx = make_fixture("syn4c");
    const EriTensor eri = compute_eri_tensor(fx.spinors.basis());
    const MoIntegralSet mo = transform_eri(eri, fx.spinors);
    const MoIntegralSet ref = mt::ref_transform(eri, fx.spinors);
    for (int i = 0; i < mo.n_occ(); ++i)
      for (int a = 0; a < mo.n_vir(); ++a)
        for (int j = 0; j < mo.n_occ(); ++j)
          for (int b = 0; b < mo.n_vir(); ++b)
            CHECK(std::abs(mo.at(i, a, j, b) - ref.at(i, a, j, b)) < 1e-10);
  }
}

TEST_CASE("mo integrals have chemists'-notation symmetry") {
  Fixture fx = make_fixture("syn4c");
  const MoIntegralSet mo = transform_eri(compute_eri_tensor(fx.spinors.basis()), fx.spinors);
  for (int i = 0; i < mo.n_occ(); ++i)
    for (int a = 0; a < mo.n_vir(); ++a)
      for (int j = 0; j < mo.n_occ(); ++j)
        for (int b = 0; b < mo.n_vir(); ++b)
          CHECK(std::abs(mo.at(i, a, j, b) - mo.at(j, b, i, a)) < 1e-12);
}

TEST_CASE("deterministic mp2: zero virtuals gives zero") {
  const MoIntegralSet mo(2, 0);
  Eigen::VectorXd eps(2);
  eps << -1.0, -0.5;
  CHECK(deterministic_mp2(mo, eps, 1) == 0.0);
}

TEST_CASE("deterministic mp2 equals the literal spin-orbital sum for 1-component sets") {
  for (const char* name : {"h2_svp", "he_dz"}) {
    Fixture fx = make_fixture(name);
    const MoIntegralSet mo = transform_eri(compute_eri_tensor(fx.spinors.basis()), fx.spinors);
    const double direct = deterministic_mp2(mo, fx.spinors.energies(), 1);
    const double spin_orbital = mt::ref_spin_orbital_mp2(mo, fx.spinors.energies());
    CHECK(direct == doctest::Approx(spin_orbital).epsilon(1e-12));
  }
}

TEST_CASE("minimal-basis H2 has the closed-form MP2 energy") {
  const Molecule mol({{1.0, Vec3(0, 0, 0)}, {1.0, Vec3(0, 0, 1.4)}});
  std::vector<BasisFunction> basis = {s_prim(Vec3(0, 0, 0), 0.8), s_prim(Vec3(0, 0, 1.4), 0.8)};
  const RhfResult r = rhf_scf(mol, basis);
  const MoIntegralSet mo = transform_eri(compute_eri_tensor({basis}), r.spinors);
  // two spatial orbitals: E2 = K12^2 / (2 (e1 - e2)) from the spin-orbital sum
  const double k12 = mo.at(0, 0, 0, 0).real();
  const double expected =
      k12 * k12 / (2.0 * (r.spinors.energy(0) - r.spinors.energy(1)));
  CHECK(deterministic_mp2(mo, r.spinors.energies(), 1) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected < 0.0);
}

TEST_CASE("every fixture has a negative correlation energy") {
  for (const auto& name : fixture_names()) {
    Fixture fx = make_fixture(name);
    CHECK(fx.e2 < 0.0);
    CHECK(fx.e2 == doctest::Approx(oracle_mp2_energy(fx.spinors)).epsilon(1e-13));
  }
}

TEST_CASE("mp2 energy is invariant under a single-column phase") {
  Fixture fx = make_fixture("syn4c");
  MatrixXcd c = fx.spinors.coefficients();
  c.col(3) *= std::polar(1.0, 1.234);
  const SpinorSet rotated(4, fx.spinors.basis(), c, fx.spinors.energies(), fx.spinors.n_occ(),
                          fx.spinors.n_vir(), fx.spinors.molecule());
  const double e2 = oracle_mp2_energy(rotated);
  CHECK(e2 == doctest::Approx(fx.e2).epsilon(1e-10));
}

TEST_CASE("vanishing denominator is reported") {
  MoIntegralSet mo(1, 1);
  mo.at(0, 0, 0, 0) = 0.5;
  Eigen::VectorXd eps(2);
  eps << -0.5, -0.5;
  CHECK_THROWS_WITH_AS(deterministic_mp2(mo, eps, 1), doctest::Contains("denominator"),
                       std::runtime_error);
}

TEST_CASE("scaling set is well formed") {
  const SpinorSet sp = make_scaling_set(16);
  CHECK(sp.n_spinor() == 16);
  CHECK(sp.orthonormality_deviation() < 1e-8);
  CHECK(sp.molecule().has_value());
  CHECK_THROWS(make_scaling_set(12));
}
