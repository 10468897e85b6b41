#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mcmp2/oracle.hpp"
#include "mcmp2/rng.hpp"
#include "mcmp2/weights.hpp"
#include "support/quadrature.hpp"

using namespace mcmp2;
namespace mt = mcmp2::testing;

namespace {

constexpr double kPi = std::numbers::pi;

Molecule single_h() { return Molecule({{1.0, Vec3(0, 0, 0)}}); }

}  // namespace

TEST_CASE("g at the nucleus assembles Table-I parameters with s norms") {
  const WeightSpec spec(single_h());
  const double expected =
      0.25 * std::pow(2.0 * 0.06 / kPi, 0.75) + 0.15 * std::pow(2.0 * 0.6 / kPi, 0.75);
  CHECK(spec.g(Vec3(0, 0, 0)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("g decays far from all nuclei") {
  const WeightSpec spec(single_h());
  CHECK(spec.g(Vec3(50, 0, 0)) < 1e-15);
  CHECK(spec.g(Vec3(3, -4, 5)) > 0.0);
}

TEST_CASE("g is additive over nuclei") {
  const Molecule two({{1.0, Vec3(0, 0, 0)}, {1.0, Vec3(0, 0, 1.4)}});
  const WeightSpec sa(Molecule({{1.0, Vec3(0, 0, 0)}}));
  const WeightSpec sb(Molecule({{1.0, Vec3(0, 0, 1.4)}}));
  const WeightSpec sab(two);
  const Vec3 r(0.3, 0.2, 0.7);
  CHECK(sab.g(r) == doctest::Approx(sa.g(r) + sb.g(r)).epsilon(1e-14));
}

TEST_CASE("g is translation invariant") {
  // grid-representable coordinates keep the arithmetic exact under shifts
  const Vec3 shift(8.5, -3.25, 2.75);
  const Molecule mol({{1.0, Vec3(0.5, -0.25, 1.0)}});
  const Molecule shifted({{1.0, Vec3(0.5, -0.25, 1.0) + shift}});
  const WeightSpec a(mol), b(shifted);
  const Vec3 r(1.25, 0.75, -2.5);
  CHECK(a.g(r) == b.g(r + shift));
}

TEST_CASE("missing element parameters fail at construction") {
  const Molecule carbon({{6.0, Vec3(0, 0, 0)}});
  CHECK_THROWS_WITH_AS(WeightSpec(carbon), doctest::Contains("Z=6"), std::invalid_argument);
  // supplying parameters fixes it
  const WeightSpec ok(carbon, {{6, {0.5, 0.2, 0.5, 0.8}}});
  CHECK(ok.g(Vec3(0, 0, 0)) > 0);
}

TEST_CASE("normalization: single unit primitive gives 4 pi") {
  const Molecule mol({{1.0, Vec3(0, 0, 0)}});
  const WeightSpec spec(mol, {{1, {1.0, 1.0, 1e-8, 1.0}}});
  // second primitive's coefficient is negligible
  CHECK(spec.ng() == doctest::Approx(4.0 * kPi).epsilon(1e-6));
}

TEST_CASE("normalization matches an independent quadrature, single primitive") {
  // N_g = int g(r1) g(r2)/r12 with g = c N exp(-z r^2); substitute u = r1 - r2,
  // R = (r1+r2)/2: the R integral is Gaussian, the u integral is radial.
  const double z = 0.8, c = 0.7;
  const Molecule mol({{1.0, Vec3(0, 0, 0)}});
  const WeightSpec spec(mol, {{1, {c, z, 1e-12, 1.0}}});
  const double cn = c * std::pow(2.0 * z / kPi, 0.75);
  const double r_part = std::pow(kPi / (2.0 * z), 1.5);
  const double u_part =
      4.0 * kPi *
      mt::integrate_radial([&](double u) { return u * std::exp(-0.5 * z * u * u); }, 30.0, 200);
  CHECK(spec.ng() == doctest::Approx(cn * cn * r_part * u_part).epsilon(1e-6));
}

TEST_CASE("normalization tends to the point-charge limit at large separation") {
  const double sep = 60.0;
  const Molecule mol({{1.0, Vec3(0, 0, 0)}, {1.0, Vec3(0, 0, sep)}});
  const WeightSpec spec(mol);
  const WeightSpec one(Molecule({{1.0, Vec3(0, 0, 0)}}));
  // each nucleus's g integrates to a charge q; cross term tends to q^2/R
  const double q = 0.25 * std::pow(2.0 * 0.06 / kPi, 0.75) * std::pow(kPi / 0.06, 1.5) +
                   0.15 * std::pow(2.0 * 0.6 / kPi, 0.75) * std::pow(kPi / 0.6, 1.5);
  const double expected = 2.0 * one.ng() + 2.0 * q * q / sep;
  CHECK(spec.ng() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("scaling contraction coefficients scales N_g quadratically") {
  const Molecule mol({{1.0, Vec3(0, 0, 0)}});
  const WeightSpec a(mol, {{1, {0.3, 0.5, 0.2, 1.1}}});
  const WeightSpec b(mol, {{1, {0.6, 0.5, 0.4, 1.1}}});
  CHECK(b.ng() == doctest::Approx(4.0 * a.ng()).epsilon(1e-14));
}

TEST_CASE("pair weight: symmetry, coincidence, normalization") {
  const WeightSpec spec(single_h());
  const Vec3 r1(0.5, 0, 0), r2(-0.3, 0.8, 0.1);
  const PairWeight w12 = spec.pair_weight(r1, r2);
  const PairWeight w21 = spec.pair_weight(r2, r1);
  CHECK(w12.full() == w21.full());
  CHECK(w12.gg_over_ng > 0);
  const PairWeight same = spec.pair_weight(r1, r1);
  CHECK(std::isinf(same.full()));
  CHECK(same.gg_over_ng > 0);  // the singularity-free factor stays finite
}

TEST_CASE("tau sampling: inverse CDF") {
  const TauSampler ts(1.2);
  CHECK(ts.sample(0.0) == 0.0);
  CHECK(ts.sample(0.5) == doctest::Approx(std::log(2.0) / 1.2).epsilon(1e-12));
  CHECK_THROWS(TauSampler(0.0));
  CHECK_THROWS(TauSampler(-1.0));
}

TEST_CASE("tau sample mean approaches 1/lambda") {
  const TauSampler ts(1.2);
  PhiloxRng rng(17, 0);
  const long n = 1000000;
  double sum = 0, sum2 = 0;
  for (long i = 0; i < n; ++i) {
    const double t = ts.sample(rng.uniform());
    sum += t;
    sum2 += t * t;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0 / 1.2) < 5 * se);
}

TEST_CASE("tau histogram matches the exponential density at the 1% level") {
  const double lambda = 0.8;
  const TauSampler ts(lambda);
  PhiloxRng rng(23, 0);
  const long n = 100000;
  // 20 equal-probability bins; chi^2(19) at 1% is 36.19
  const int nbins = 20;
  std::vector<long> counts(nbins, 0);
  for (long i = 0; i < n; ++i) {
    const double t = ts.sample(rng.uniform());
    const double cdf = 1.0 - std::exp(-lambda * t);
    int bin = int(cdf * nbins);
    if (bin == nbins) bin = nbins - 1;
    ++counts[bin];
  }
  const double expect = double(n) / nbins;
  double chi2 = 0;
  for (long c : counts) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 36.19);
}

TEST_CASE("lambda from the HOMO-LUMO gap") {
  Fixture fx = make_fixture("h2_svp");
  const SpinorSet& sp = fx.spinors;
  CHECK(lambda_from_gap(sp) ==
        doctest::Approx(2.0 * (sp.lumo_energy() - sp.homo_energy())).epsilon(1e-14));

  // degenerate HOMO: the Kramers-paired fixture has equal top occupied energies
  Fixture k = make_fixture("syn4c");
  CHECK(k.spinors.energy(0) == k.spinors.energy(1));
  CHECK(lambda_from_gap(k.spinors) == doctest::Approx(2.0 * (0.3 - (-0.9))));
}

TEST_CASE("explicit lambda example") {
  // eps_HOMO = -0.5, eps_LUMO = +0.1 -> lambda = 1.2
  CHECK(2.0 * (0.1 - (-0.5)) == doctest::Approx(1.2));
}

TEST_CASE("a closed gap is rejected") {
  // the occupied/virtual overlap is caught when the set is assembled
  Fixture fx = make_fixture("h2_svp");
  Eigen::VectorXd eps = fx.spinors.energies();
  eps[1] = eps[0];  // eps_LUMO = eps_HOMO
  CHECK_THROWS_WITH_AS(SpinorSet(1, fx.spinors.basis(), fx.spinors.coefficients(), eps,
                                 fx.spinors.n_occ(), fx.spinors.n_vir(), fx.spinors.molecule()),
                       doctest::Contains("overlap"), std::runtime_error);
}
