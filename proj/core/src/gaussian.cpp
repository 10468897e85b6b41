#include "mcmp2/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcmp2 {

namespace {

constexpr double kS00 = 0.28209479177387814;   // 1/(2 sqrt(pi))
constexpr double kS1 = 0.4886025119029199;     // sqrt(3/4pi)
constexpr double kS2a = 1.0925484305920792;    // (1/2) sqrt(15/pi)
constexpr double kS2b = 0.31539156525252005;   // (1/4) sqrt(5/pi)
constexpr double kS2c = 0.5462742152960396;    // (1/4) sqrt(15/pi)
constexpr double kS3a = 0.5900435899266435;    // (1/4) sqrt(35/2pi)
constexpr double kS3b = 2.890611442640554;     // (1/2) sqrt(105/pi)
constexpr double kS3c = 0.4570457994644658;    // (1/4) sqrt(21/2pi)
constexpr double kS3d = 0.3731763325901154;    // (1/4) sqrt(7/pi)

constexpr SolidTerm kL0[] = {{0, 0, 0, kS00}};

constexpr SolidTerm kL1m[] = {{0, 1, 0, kS1}};
constexpr SolidTerm kL10[] = {{0, 0, 1, kS1}};
constexpr SolidTerm kL1p[] = {{1, 0, 0, kS1}};

constexpr SolidTerm kL2m2[] = {{1, 1, 0, kS2a}};
constexpr SolidTerm kL2m1[] = {{0, 1, 1, kS2a}};
constexpr SolidTerm kL20[] = {{0, 0, 2, 2 * kS2b}, {2, 0, 0, -kS2b}, {0, 2, 0, -kS2b}};
constexpr SolidTerm kL2p1[] = {{1, 0, 1, kS2a}};
constexpr SolidTerm kL2p2[] = {{2, 0, 0, kS2c}, {0, 2, 0, -kS2c}};

constexpr SolidTerm kL3m3[] = {{2, 1, 0, 3 * kS3a}, {0, 3, 0, -kS3a}};
constexpr SolidTerm kL3m2[] = {{1, 1, 1, kS3b}};
constexpr SolidTerm kL3m1[] = {{0, 1, 2, 4 * kS3c}, {2, 1, 0, -kS3c}, {0, 3, 0, -kS3c}};
constexpr SolidTerm kL30[] = {{0, 0, 3, 2 * kS3d}, {2, 0, 1, -3 * kS3d}, {0, 2, 1, -3 * kS3d}};
constexpr SolidTerm kL3p1[] = {{1, 0, 2, 4 * kS3c}, {3, 0, 0, -kS3c}, {1, 2, 0, -kS3c}};
constexpr SolidTerm kL3p2[] = {{2, 0, 1, kS2c}, {0, 2, 1, -kS2c}};
constexpr SolidTerm kL3p3[] = {{3, 0, 0, kS3a}, {1, 2, 0, -3 * kS3a}};

// Hermite expansion coefficient E_0^{ij} without the exp(-mu X^2) prefactor.
double e_coeff(int i, int j, int t, double inv2p, double xpa, double xpb) {
  if (t < 0 || t > i + j) return 0.0;
  if (i == 0 && j == 0) return t == 0 ? 1.0 : 0.0;
  if (i > 0) {
    return inv2p * e_coeff(i - 1, j, t - 1, inv2p, xpa, xpb) +
           xpa * e_coeff(i - 1, j, t, inv2p, xpa, xpb) +
           (t + 1) * e_coeff(i - 1, j, t + 1, inv2p, xpa, xpb);
  }
  return inv2p * e_coeff(i, j - 1, t - 1, inv2p, xpa, xpb) +
         xpb * e_coeff(i, j - 1, t, inv2p, xpa, xpb) +
         (t + 1) * e_coeff(i, j - 1, t + 1, inv2p, xpa, xpb);
}

}  // namespace

std::span<const SolidTerm> solid_harmonic_terms(int l, int m) {
  if (l < 0 || l > 3 || m < -l || m > l)
    throw std::invalid_argument("solid_harmonic_terms: l must be in [0,3], m in [-l,l]");
  switch (l) {
    case 0:
      return kL0;
    case 1:
      if (m == -1) return kL1m;
      return m == 0 ? std::span<const SolidTerm>(kL10) : std::span<const SolidTerm>(kL1p);
    case 2:
      switch (m) {
        case -2: return kL2m2;
        case -1: return kL2m1;
        case 0: return kL20;
        case 1: return kL2p1;
        default: return kL2p2;
      }
    default:
      switch (m) {
        case -3: return kL3m3;
        case -2: return kL3m2;
        case -1: return kL3m1;
        case 0: return kL30;
        case 1: return kL3p1;
        case 2: return kL3p2;
        default: return kL3p3;
      }
  }
}

double solid_harmonic(int l, int m, const Vec3& d) {
  double s = 0.0;
  for (const auto& t : solid_harmonic_terms(l, m))
    s += t.coef * std::pow(d.x(), t.ix) * std::pow(d.y(), t.iy) * std::pow(d.z(), t.iz);
  return s;
}

double primitive_norm(int l, double zeta) {
  if (zeta <= 0.0) throw std::invalid_argument("primitive_norm: exponent must be positive");
  return std::sqrt(2.0 * std::pow(2.0 * zeta, l + 1.5) / std::tgamma(l + 1.5));
}

double boys_f0(double t) {
  if (t < 0.0) throw std::invalid_argument("boys_f0: negative argument");
  if (t < 1e-12) return 1.0 - t / 3.0;
  const double st = std::sqrt(t);
  return 0.5 * std::sqrt(std::numbers::pi / t) * std::erf(st);
}

double primitive_overlap(int la, int ma, double a, const Vec3& A,
                         int lb, int mb, double b, const Vec3& B) {
  const double p = a + b;
  const double mu = a * b / p;
  const Vec3 P = (a * A + b * B) / p;
  const Vec3 AB = A - B;
  const Vec3 PA = P - A;
  const Vec3 PB = P - B;
  const double inv2p = 0.5 / p;
  const double pref =
      std::pow(std::numbers::pi / p, 1.5) * std::exp(-mu * AB.squaredNorm());

  double sum = 0.0;
  for (const auto& ta : solid_harmonic_terms(la, ma)) {
    for (const auto& tb : solid_harmonic_terms(lb, mb)) {
      const double ex = e_coeff(ta.ix, tb.ix, 0, inv2p, PA.x(), PB.x());
      const double ey = e_coeff(ta.iy, tb.iy, 0, inv2p, PA.y(), PB.y());
      const double ez = e_coeff(ta.iz, tb.iz, 0, inv2p, PA.z(), PB.z());
      sum += ta.coef * tb.coef * ex * ey * ez;
    }
  }
  return pref * sum;
}

}  // namespace mcmp2
