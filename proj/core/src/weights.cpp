#include "mcmp2/weights.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mcmp2 {

namespace {

const char* const kSymbols[] = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",
    "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh",
    "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re",
    "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr"};

// two-center Coulomb repulsion of two unnormalized s Gaussians
double coulomb_2c(double a, const Vec3& A, double b, const Vec3& B) {
  const double t = a * b / (a + b) * (A - B).squaredNorm();
  return 2.0 * std::pow(std::numbers::pi, 2.5) / (a * b * std::sqrt(a + b)) * boys_f0(t);
}

}  // namespace

const std::map<int, WeightParams>& default_weight_params() {
  static const std::map<int, WeightParams> table = {
      {1, {0.25, 0.06, 0.15, 0.6}},   // H
      {8, {0.8, 0.2, 1.0, 0.4}},      // O
      {29, {0.8, 0.35, 2.0, 0.6}},    // Cu
      {47, {0.1, 0.1, 0.8, 0.6}},     // Ag
      {79, {0.05, 0.6, 4.0, 0.8}},    // Au
  };
  return table;
}

std::string element_symbol(int z) {
  if (z < 1 || z > int(std::size(kSymbols))) throw std::invalid_argument("unknown atomic number");
  return kSymbols[z - 1];
}

int atomic_number(const std::string& symbol) {
  for (std::size_t i = 0; i < std::size(kSymbols); ++i)
    if (symbol == kSymbols[i]) return int(i) + 1;
  throw std::invalid_argument("unknown element symbol '" + symbol + "'");
}

double PairWeight::full() const {
  if (r12 == 0.0) return std::numeric_limits<double>::infinity();
  return gg_over_ng / r12;
}

WeightSpec::WeightSpec(const Molecule& molecule, const std::map<int, WeightParams>& overrides) {
  sites_.reserve(molecule.size());
  for (const auto& nuc : molecule.nuclei()) {
    const int z = int(std::lround(nuc.charge));
    const WeightParams* params = nullptr;
    if (auto it = overrides.find(z); it != overrides.end()) params = &it->second;
    else if (auto jt = default_weight_params().find(z); jt != default_weight_params().end())
      params = &jt->second;
    if (!params) {
      std::ostringstream os;
      os << "no weight parameters for element Z=" << z
         << "; supply them with a 'weight' configuration line";
      throw std::invalid_argument(os.str());
    }
    if (!(params->c1 > 0 && params->zeta1 > 0 && params->c2 > 0 && params->zeta2 > 0))
      throw std::invalid_argument("weight parameters must be positive");
    // s-type GTO normalization (2 zeta / pi)^{3/4}
    const double n1 = primitive_norm(0, params->zeta1) * 0.28209479177387814;
    const double n2 = primitive_norm(0, params->zeta2) * 0.28209479177387814;
    Site s;
    s.position = nuc.position;
    s.prims = {{params->c1 * n1, params->zeta1}, {params->c2 * n2, params->zeta2}};
    s.zeta1 = params->zeta1;
    sites_.push_back(s);
  }

  // N_g = integral g(r1) g(r2) / r12, closed form over primitive pairs
  ng_ = 0.0;
  for (const auto& si : sites_)
    for (const auto& pi : si.prims)
      for (const auto& sj : sites_)
        for (const auto& pj : sj.prims)
          ng_ += pi.coeff * pj.coeff * coulomb_2c(pi.zeta, si.position, pj.zeta, sj.position);
}

double WeightSpec::g(const Vec3& r) const {
  double v = 0.0;
  for (const auto& s : sites_) {
    const double d2 = (r - s.position).squaredNorm();
    for (const auto& p : s.prims) v += p.coeff * std::exp(-p.zeta * d2);
  }
  return v;
}

PairWeight WeightSpec::pair_weight(const Vec3& r1, const Vec3& r2) const {
  return {g(r1) * g(r2) / ng_, (r1 - r2).norm()};
}

TauSampler::TauSampler(double lambda) : lambda_(lambda) {
  if (!(lambda_ > 0.0)) throw std::invalid_argument("TauSampler: lambda must be positive");
}

double TauSampler::sample(double u) const { return -std::log1p(-u) / lambda_; }

double TauSampler::pdf(double tau) const { return lambda_ * std::exp(-lambda_ * tau); }

double lambda_from_gap(const SpinorSet& spinors) {
  if (spinors.n_occ() == 0 || spinors.n_vir() == 0)
    throw std::runtime_error("lambda_from_gap: needs both occupied and virtual spinors");
  const double gap = spinors.lumo_energy() - spinors.homo_energy();
  if (!(gap > 0.0))
    throw std::runtime_error("lambda_from_gap: non-positive HOMO-LUMO gap");
  return 2.0 * gap;
}

}  // namespace mcmp2
