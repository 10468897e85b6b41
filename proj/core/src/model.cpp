#include "mcmp2/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcmp2 {

Molecule::Molecule(std::vector<Nucleus> nuclei) : nuclei_(std::move(nuclei)) {
  if (nuclei_.empty()) throw std::invalid_argument("Molecule: at least one nucleus required");
  for (const auto& n : nuclei_) {
    if (!(n.charge > 0.0))
      throw std::invalid_argument("Molecule: nuclear charges must be strictly positive");
    if (!n.position.allFinite())
      throw std::invalid_argument("Molecule: nuclear positions must be finite");
  }
}

double Molecule::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < nuclei_.size(); ++i)
    for (std::size_t j = i + 1; j < nuclei_.size(); ++j)
      e += nuclei_[i].charge * nuclei_[j].charge /
           (nuclei_[i].position - nuclei_[j].position).norm();
  return e;
}

BasisFunction::BasisFunction(const Vec3& center, int l, int m, std::vector<Primitive> primitives)
    : center_(center), l_(l), m_(m), primitives_(std::move(primitives)) {
  if (l_ < 0 || l_ > 3) throw std::invalid_argument("BasisFunction: l must be in [0,3]");
  if (m_ < -l_ || m_ > l_) throw std::invalid_argument("BasisFunction: m out of range");
  if (primitives_.empty()) throw std::invalid_argument("BasisFunction: needs at least one primitive");
  for (const auto& p : primitives_)
    if (!(p.zeta > 0.0))
      throw std::invalid_argument("BasisFunction: exponents must be strictly positive");

  eval_coeffs_.resize(primitives_.size());
  for (std::size_t k = 0; k < primitives_.size(); ++k)
    eval_coeffs_[k] = primitives_[k].coeff * primitive_norm(l_, primitives_[k].zeta);

  // rescale so the contracted self-overlap is exactly 1
  double s = 0.0;
  for (std::size_t k = 0; k < primitives_.size(); ++k)
    for (std::size_t n = 0; n < primitives_.size(); ++n)
      s += eval_coeffs_[k] * eval_coeffs_[n] *
           primitive_overlap(l_, m_, primitives_[k].zeta, center_, l_, m_, primitives_[n].zeta,
                             center_);
  if (!(s > 0.0)) throw std::invalid_argument("BasisFunction: vanishing contraction");
  const double rescale = 1.0 / std::sqrt(s);
  for (auto& c : eval_coeffs_) c *= rescale;
}

double BasisFunction::value(const Vec3& r) const {
  const Vec3 d = r - center_;
  const double ang = solid_harmonic(l_, m_, d);
  if (ang == 0.0) return 0.0;
  const double r2 = d.squaredNorm();
  double radial = 0.0;
  for (std::size_t k = 0; k < primitives_.size(); ++k)
    radial += eval_coeffs_[k] * std::exp(-primitives_[k].zeta * r2);
  return ang * radial;
}

double contracted_overlap(const BasisFunction& a, const BasisFunction& b) {
  double s = 0.0;
  const auto& ca = a.evaluation_coeffs();
  const auto& cb = b.evaluation_coeffs();
  for (std::size_t k = 0; k < ca.size(); ++k)
    for (std::size_t n = 0; n < cb.size(); ++n)
      s += ca[k] * cb[n] *
           primitive_overlap(a.l(), a.m(), a.primitives()[k].zeta, a.center(), b.l(), b.m(),
                             b.primitives()[n].zeta, b.center());
  return s;
}

Eigen::MatrixXd overlap_matrix(const std::vector<BasisFunction>& basis) {
  const int n = int(basis.size());
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s(i, j) = s(j, i) = contracted_overlap(basis[i], basis[j]);
  return s;
}

PairPrefactors mp2_pair_prefactors(int ncomp) {
  return ncomp == 1 ? PairPrefactors{2.0, -1.0} : PairPrefactors{0.5, -0.5};
}

SpinorSet::SpinorSet(int ncomp, std::vector<std::vector<BasisFunction>> basis,
                     MatrixXcd coefficients, Eigen::VectorXd energies, int n_occ, int n_vir,
                     std::optional<Molecule> molecule)
    : ncomp_(ncomp),
      basis_(std::move(basis)),
      coeff_(std::move(coefficients)),
      energies_(std::move(energies)),
      n_occ_(n_occ),
      n_vir_(n_vir),
      molecule_(std::move(molecule)) {
  if (ncomp_ != 1 && ncomp_ != 2 && ncomp_ != 4)
    throw std::invalid_argument("SpinorSet: component count must be 1, 2 or 4");
  if (int(basis_.size()) != ncomp_)
    throw std::invalid_argument("SpinorSet: one basis list per component required");
  if (n_occ_ < 0 || n_vir_ < 0 || n_occ_ + n_vir_ == 0)
    throw std::invalid_argument("SpinorSet: invalid occupied/virtual counts");

  int rows = 0;
  row_offset_.resize(ncomp_);
  for (int x = 0; x < ncomp_; ++x) {
    if (basis_[x].empty())
      throw std::invalid_argument("SpinorSet: empty basis list for a component");
    row_offset_[x] = rows;
    rows += int(basis_[x].size());
  }
  if (coeff_.rows() != rows)
    throw std::runtime_error("SpinorSet: coefficient rows do not match component basis sizes");
  if (coeff_.cols() != n_occ_ + n_vir_)
    throw std::runtime_error("SpinorSet: n_occ + n_vir does not match coefficient columns");
  if (energies_.size() != n_occ_ + n_vir_)
    throw std::runtime_error("SpinorSet: one energy per spinor required");

  for (int p = 1; p < n_occ_; ++p)
    if (energies_[p] < energies_[p - 1])
      throw std::runtime_error("SpinorSet: occupied energies not ascending");
  for (int p = n_occ_ + 1; p < n_occ_ + n_vir_; ++p)
    if (energies_[p] < energies_[p - 1])
      throw std::runtime_error("SpinorSet: virtual energies not ascending");
  if (n_occ_ > 0 && n_vir_ > 0 && !(homo_energy() < lumo_energy()))
    throw std::runtime_error("SpinorSet: occupied and virtual energies overlap");

  const double dev = orthonormality_deviation();
  if (!(dev < 1e-8)) {
    std::ostringstream os;
    os << "SpinorSet: coefficients not orthonormal, max deviation of C^H S C from identity is "
       << dev;
    throw std::runtime_error(os.str());
  }
}

Eigen::Block<const MatrixXcd> SpinorSet::component_block(int comp) const {
  return coeff_.block(row_offset_.at(comp), 0, int(basis_[comp].size()), coeff_.cols());
}

Eigen::MatrixXd SpinorSet::overlap_metric() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rows(), rows());
  for (int x = 0; x < ncomp_; ++x) {
    const int n = int(basis_[x].size());
    s.block(row_offset_[x], row_offset_[x], n, n) = overlap_matrix(basis_[x]);
  }
  return s;
}

double SpinorSet::orthonormality_deviation() const {
  const Eigen::MatrixXd s = overlap_metric();
  const MatrixXcd g = coeff_.adjoint() * s * coeff_;
  const MatrixXcd d = g - MatrixXcd::Identity(g.rows(), g.cols());
  return d.cwiseAbs().maxCoeff();
}

MatrixXcd SpinorSet::evaluate(const Vec3& point, SpinorBlock block) const {
  MatrixXcd occ(ncomp_, n_occ_), vir(ncomp_, n_vir_);
  evaluate_into(point, occ, vir);
  return block == SpinorBlock::occupied ? occ : vir;
}

void SpinorSet::evaluate_into(const Vec3& point, MatrixXcd& occ, MatrixXcd& vir) const {
  occ.resize(ncomp_, n_occ_);
  vir.resize(ncomp_, n_vir_);
  Eigen::RowVectorXd chi;
  for (int x = 0; x < ncomp_; ++x) {
    const auto& bas = basis_[x];
    chi.resize(int(bas.size()));
    for (int mu = 0; mu < int(bas.size()); ++mu) chi[mu] = bas[mu].value(point);
    const auto block = component_block(x);
    occ.row(x) = chi * block.leftCols(n_occ_);
    vir.row(x) = chi * block.rightCols(n_vir_);
  }
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

// token stream over the file with '#' comments stripped
class TokenReader {
public:
  explicit TokenReader(const std::string& path) : in_(path) {
    if (!in_) throw std::runtime_error("cannot open spinor file: " + path);
  }

  std::string next() {
    std::string tok;
    while (!(current_ >> tok)) {
      std::string line;
      if (!std::getline(in_, line)) throw std::runtime_error("spinor file: unexpected end of file");
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      current_ = std::istringstream(line);
    }
    return tok;
  }

  long next_long() {
    const std::string tok = next();
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("spinor file: expected integer, got '" + tok + "'");
    }
    if (used != tok.size())
      throw std::runtime_error("spinor file: expected integer, got '" + tok + "'");
    return v;
  }

  double next_double() {
    const std::string tok = next();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("spinor file: expected number, got '" + tok + "'");
    }
    if (used != tok.size())
      throw std::runtime_error("spinor file: expected number, got '" + tok + "'");
    return v;
  }

  void expect(const std::string& word) {
    const std::string tok = next();
    if (tok != word)
      throw std::runtime_error("spinor file: expected '" + word + "', got '" + tok + "'");
  }

  bool at_end() {
    std::string tok;
    if (current_ >> tok) {
      pushback_ = tok;
      return false;
    }
    std::string line;
    while (std::getline(in_, line)) {
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      std::istringstream probe(line);
      if (probe >> tok) {
        current_ = std::istringstream(line);
        return false;
      }
    }
    return true;
  }

  std::string take() {
    if (!pushback_.empty()) {
      std::string t = std::move(pushback_);
      pushback_.clear();
      return t;
    }
    return next();
  }

private:
  std::ifstream in_;
  std::istringstream current_;
  std::string pushback_;
};

}  // namespace

SpinorSet load_spinor_set(const std::string& path) {
  TokenReader r(path);
  r.expect("spinor-text");
  if (r.next_long() != 1) throw std::runtime_error("spinor file: unsupported format version");

  std::optional<Molecule> molecule;
  int ncomp = 0;
  std::vector<std::vector<BasisFunction>> basis;
  Eigen::VectorXd energies;
  int n_occ = -1, n_vir = -1;
  MatrixXcd coeff;
  bool have_coeff = false;

  while (!r.at_end()) {
    const std::string rec = r.take();
    if (rec == "nuclei") {
      const long n = r.next_long();
      std::vector<Nucleus> nuc(n);
      for (auto& nu : nuc) {
        nu.charge = r.next_double();
        nu.position = Vec3(r.next_double(), r.next_double(), r.next_double());
      }
      molecule.emplace(std::move(nuc));
    } else if (rec == "ncomp") {
      ncomp = int(r.next_long());
      if (ncomp != 1 && ncomp != 2 && ncomp != 4)
        throw std::runtime_error("spinor file: ncomp must be 1, 2 or 4");
      basis.resize(ncomp);
    } else if (rec == "basis") {
      if (ncomp == 0) throw std::runtime_error("spinor file: basis before ncomp");
      const long comp = r.next_long();
      if (comp < 0 || comp >= ncomp)
        throw std::runtime_error("spinor file: basis component index out of range");
      const long count = r.next_long();
      for (long i = 0; i < count; ++i) {
        const Vec3 center(r.next_double(), r.next_double(), r.next_double());
        r.expect(";");
        const int l = int(r.next_long());
        const int m = int(r.next_long());
        r.expect(";");
        const long nprim = r.next_long();
        r.expect(";");
        std::vector<Primitive> prims(nprim);
        for (auto& p : prims) {
          p.zeta = r.next_double();
          p.coeff = r.next_double();
        }
        basis[comp].emplace_back(center, l, m, std::move(prims));
      }
    } else if (rec == "energies") {
      n_occ = int(r.next_long());
      n_vir = int(r.next_long());
      energies.resize(n_occ + n_vir);
      for (int p = 0; p < n_occ + n_vir; ++p) energies[p] = r.next_double();
    } else if (rec == "coeff") {
      const long rows = r.next_long();
      const long cols = r.next_long();
      coeff.resize(rows, cols);
      for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) {
          const double re = r.next_double();
          const double im = r.next_double();
          coeff(i, j) = Complex(re, im);
        }
      have_coeff = true;
    } else {
      throw std::runtime_error("spinor file: unknown record '" + rec + "'");
    }
  }

  if (ncomp == 0) throw std::runtime_error("spinor file: missing ncomp record");
  if (n_occ < 0) throw std::runtime_error("spinor file: missing energies record");
  if (!have_coeff) throw std::runtime_error("spinor file: missing coeff record");

  return SpinorSet(ncomp, std::move(basis), std::move(coeff), std::move(energies), n_occ, n_vir,
                   std::move(molecule));
}

void save_spinor_set(const SpinorSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write spinor file: " + path);
  out << "spinor-text 1\n";
  if (set.molecule()) {
    out << "nuclei " << set.molecule()->size() << "\n";
    for (const auto& n : set.molecule()->nuclei())
      out << format_double(n.charge) << ' ' << format_double(n.position.x()) << ' '
          << format_double(n.position.y()) << ' ' << format_double(n.position.z()) << "\n";
  }
  out << "ncomp " << set.ncomp() << "\n";
  for (int x = 0; x < set.ncomp(); ++x) {
    const auto& bas = set.basis(x);
    out << "basis " << x << ' ' << bas.size() << "\n";
    for (const auto& f : bas) {
      out << format_double(f.center().x()) << ' ' << format_double(f.center().y()) << ' '
          << format_double(f.center().z()) << " ; " << f.l() << ' ' << f.m() << " ; "
          << f.primitives().size() << " ;";
      for (const auto& p : f.primitives())
        out << ' ' << format_double(p.zeta) << ' ' << format_double(p.coeff);
      out << "\n";
    }
  }
  out << "energies " << set.n_occ() << ' ' << set.n_vir() << "\n";
  for (int p = 0; p < set.n_spinor(); ++p) out << format_double(set.energy(p)) << "\n";
  out << "coeff " << set.rows() << ' ' << set.n_spinor() << "\n";
  for (int i = 0; i < set.rows(); ++i) {
    for (int j = 0; j < set.n_spinor(); ++j) {
      if (j) out << ' ';
      out << format_double(set.coefficients()(i, j).real()) << ' '
          << format_double(set.coefficients()(i, j).imag());
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("failed writing spinor file: " + path);
}

}  // namespace mcmp2
