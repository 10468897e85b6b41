#include "mcmp2/sampler.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "mcmp2/model.hpp"

namespace mcmp2 {

namespace {

Vec3 gaussian_displacement(PhiloxRng& rng, double scale) {
  const auto g = rng.gaussian3();
  return Vec3(g[0], g[1], g[2]) * scale;
}

}  // namespace

WalkerEnsemble init_ensemble(int m, const Molecule& molecule, const WeightSpec& spec,
                             std::uint64_t seed, std::uint32_t stream) {
  if (m < 2) throw std::invalid_argument("init_ensemble: at least two electron-pair walkers");
  if (spec.sites().size() != molecule.size())
    throw std::invalid_argument("init_ensemble: weight spec does not match the molecule");
  WalkerEnsemble ens;
  ens.rng_ = PhiloxRng(seed, stream);
  ens.pairs_.resize(m);
  const auto& sites = spec.sites();
  auto place = [&]() {
    const std::uint32_t idx =
        std::min<std::uint32_t>(std::uint32_t(ens.rng_.uniform() * sites.size()),
                                std::uint32_t(sites.size() - 1));
    const double spread = 1.0 / std::sqrt(2.0 * sites[idx].zeta1);
    return Vec3(sites[idx].position + gaussian_displacement(ens.rng_, spread));
  };
  for (auto& pair : ens.pairs_) {
    pair.r1 = place();
    do {
      pair.r2 = place();
    } while ((pair.r1 - pair.r2).squaredNorm() == 0.0);
    pair.g1 = spec.g(pair.r1);
    pair.g2 = spec.g(pair.r2);
    pair.weight = pair.g1 * pair.g2 / (spec.ng() * (pair.r1 - pair.r2).norm());
  }
  return ens;
}

int metropolis_step(WalkerEnsemble& ens, const WeightSpec& spec,
                    std::vector<std::uint8_t>* accepted_flags) {
  if (accepted_flags) accepted_flags->assign(ens.pairs_.size(), 0);
  int naccept = 0;
  for (std::size_t p = 0; p < ens.pairs_.size(); ++p) {
    auto& pair = ens.pairs_[p];
    Vec3 n1, n2;
    double r12;
    do {  // a proposal at exact coincidence is discarded and redrawn
      n1 = pair.r1 + gaussian_displacement(ens.rng_, ens.sigma_step_);
      n2 = pair.r2 + gaussian_displacement(ens.rng_, ens.sigma_step_);
      r12 = (n1 - n2).norm();
    } while (r12 == 0.0);
    const double g1 = spec.g(n1);
    const double g2 = spec.g(n2);
    const double wnew = g1 * g2 / (spec.ng() * r12);
    const double u = ens.rng_.uniform();
    ++ens.proposed_;
    if (u * pair.weight < wnew) {
      pair.r1 = n1;
      pair.r2 = n2;
      pair.g1 = g1;
      pair.g2 = g2;
      pair.weight = wnew;
      ++ens.accepted_;
      ++naccept;
      if (accepted_flags) (*accepted_flags)[p] = 1;
    }
  }
  return naccept;
}

void burn_in(WalkerEnsemble& ens, const WeightSpec& spec, long n_burn, bool adapt) {
  long long win_prop = 0, win_acc = 0;
  for (long s = 1; s <= n_burn; ++s) {
    win_acc += metropolis_step(ens, spec);
    win_prop += ens.m();
    if (adapt && s % 100 == 0) {
      const double rate = double(win_acc) / double(win_prop);
      ens.set_sigma_step(ens.sigma_step() * (rate > 0.5 ? 1.1 : 1.0 / 1.1));
      win_prop = win_acc = 0;
    }
  }
  ens.reset_counters();
}

void WalkerEnsemble::save(std::ostream& os) const {
  os << m() << ' ' << format_double(sigma_step_) << ' ' << proposed_ << ' ' << accepted_ << '\n';
  os << rng_ << '\n';
  for (const auto& p : pairs_) {
    os << format_double(p.r1.x()) << ' ' << format_double(p.r1.y()) << ' '
       << format_double(p.r1.z()) << ' ' << format_double(p.r2.x()) << ' '
       << format_double(p.r2.y()) << ' ' << format_double(p.r2.z()) << ' '
       << format_double(p.g1) << ' ' << format_double(p.g2) << ' ' << format_double(p.weight)
       << '\n';
  }
}

WalkerEnsemble WalkerEnsemble::load(std::istream& is) {
  WalkerEnsemble ens;
  int m = 0;
  is >> m >> ens.sigma_step_ >> ens.proposed_ >> ens.accepted_;
  is >> ens.rng_;
  if (!is || m < 2) throw std::runtime_error("checkpoint: malformed ensemble record");
  ens.pairs_.resize(m);
  for (auto& p : ens.pairs_) {
    is >> p.r1.x() >> p.r1.y() >> p.r1.z() >> p.r2.x() >> p.r2.y() >> p.r2.z() >> p.g1 >> p.g2 >>
        p.weight;
    if (!is) throw std::runtime_error("checkpoint: malformed walker record");
  }
  return ens;
}

}  // namespace mcmp2
