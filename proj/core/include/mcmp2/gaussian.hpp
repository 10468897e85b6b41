#ifndef MCMP2_GAUSSIAN_HPP
#define MCMP2_GAUSSIAN_HPP

#include <Eigen/Dense>
#include <span>

namespace mcmp2 {

using Vec3 = Eigen::Vector3d;

// One Cartesian monomial x^ix y^iy z^iz of a real solid harmonic.
struct SolidTerm {
  int ix, iy, iz;
  double coef;
};

// Real solid harmonics S_lm = r^l Y_lm with Y_lm orthonormal on the sphere,
// expanded in Cartesian monomials. l <= 3.
std::span<const SolidTerm> solid_harmonic_terms(int l, int m);
double solid_harmonic(int l, int m, const Vec3& d);

// Norm of S_lm(r) exp(-zeta r^2) to unit self-overlap.
double primitive_norm(int l, double zeta);

// F0(t) = (1/2) sqrt(pi/t) erf(sqrt(t)); series below t = 1e-12.
double boys_f0(double t);

// Overlap of two solid-harmonic primitives (unit radial prefactor,
// no normalization applied) via McMurchie-Davidson expansion.
double primitive_overlap(int la, int ma, double a, const Vec3& A,
                         int lb, int mb, double b, const Vec3& B);

}  // namespace mcmp2

#endif
