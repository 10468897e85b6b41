#ifndef MCMP2_WEIGHTS_HPP
#define MCMP2_WEIGHTS_HPP

#include <map>
#include <string>
#include <vector>

#include "mcmp2/model.hpp"

namespace mcmp2 {

// two contracted s primitives per nucleus
struct WeightParams {
  double c1, zeta1, c2, zeta2;
};

// H, O, Cu, Ag, Au defaults
const std::map<int, WeightParams>& default_weight_params();
std::string element_symbol(int z);
int atomic_number(const std::string& symbol);

struct PairWeight {
  double gg_over_ng;  // g(r1) g(r2) / N_g, singularity-free
  double r12;
  double full() const;  // gg_over_ng / r12, +inf at coincidence
};

class WeightSpec {
public:
  WeightSpec(const Molecule& molecule,
             const std::map<int, WeightParams>& overrides = {});

  double g(const Vec3& r) const;
  double ng() const { return ng_; }
  PairWeight pair_weight(const Vec3& r1, const Vec3& r2) const;

  struct SitePrimitive {
    double coeff;  // includes the primitive normalization
    double zeta;
  };
  struct Site {
    Vec3 position;
    std::vector<SitePrimitive> prims;
    double zeta1;  // leading exponent, used for walker initialization
  };
  const std::vector<Site>& sites() const { return sites_; }

private:
  std::vector<Site> sites_;
  double ng_;
};

class TauSampler {
public:
  explicit TauSampler(double lambda);
  double lambda() const { return lambda_; }
  // inverse CDF, tau = -ln(1-u)/lambda
  double sample(double u) const;
  double pdf(double tau) const;

private:
  double lambda_;
};

// lambda = 2 (eps_LUMO - eps_HOMO); throws on a non-positive gap
double lambda_from_gap(const SpinorSet& spinors);

}  // namespace mcmp2

#endif
