#ifndef MCMP2_TESTS_QUADRATURE_HPP
#define MCMP2_TESTS_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "mcmp2/gaussian.hpp"

namespace mcmp2::testing {

struct GaussLegendre {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]

  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

// integral over [a,b]^3
inline double integrate_box(const std::function<double(const Vec3&)>& f, double a, double b,
                            int n) {
  const GaussLegendre gl(n);
  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        sum += gl.w[i] * gl.w[j] * gl.w[k] *
               f(Vec3(c + h * gl.x[i], c + h * gl.x[j], c + h * gl.x[k]));
  return sum * h * h * h;
}

// integral over [0, rmax]
inline double integrate_radial(const std::function<double(double)>& f, double rmax, int n) {
  const GaussLegendre gl(n);
  const double h = 0.5 * rmax;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += gl.w[i] * f(h * (gl.x[i] + 1.0));
  return sum * h;
}

}  // namespace mcmp2::testing

#endif
