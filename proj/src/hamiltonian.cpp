#include "usctopo/hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "usctopo/errors.hpp"

namespace usctopo {

namespace {

void check_frequency(double omega0) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw DomainError("omega0 must be positive and finite, got " + std::to_string(omega0));
  }
}

void check_coupling(const char* name, double j) {
  if (!(j >= 0.0) || !std::isfinite(j)) {
    throw DomainError(std::string(name) + " must be non-negative and finite, got " +
                      std::to_string(j));
  }
}

// Shared by the real and complex matrix-free paths.
template <typename Vector>
Vector apply_chain_impl(const ChainSpec& spec, const Vector& x) {
  spec.validate();
  const std::size_t dim = std::size_t{1} << spec.n_sites;
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw DimensionMismatch("vector of size " + std::to_string(x.size()) +
                            " applied to operator of dimension " + std::to_string(dim));
  }
  const auto bonds = chain_bonds(spec);
  Vector y(x.size());
  for (std::size_t m = 0; m < dim; ++m) {
    const auto i = static_cast<Eigen::Index>(m);
    y[i] = spec.omega0 * popcount(static_cast<Mask>(m)) * x[i];
  }
  for (const auto& bond : bonds) {
    const Mask flip = (Mask{1} << (bond.site_a - 1)) | (Mask{1} << (bond.site_b - 1));
    for (Mask m = 0; m < dim; ++m) {
      const Mask partner = m ^ flip;
      if (spec.rwa && popcount(m & flip) != 1) continue;
      y[m] += bond.coupling * x[partner];
    }
  }
  return y;
}

}  // namespace

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

Boundary parse_boundary(const std::string& text) {
  if (text == "open") return Boundary::open;
  if (text == "periodic") return Boundary::periodic;
  throw DomainError("boundary must be 'open' or 'periodic', got '" + text + "'");
}

ChainSpec ChainSpec::from_couplings(int n_sites, double omega0, double j1, double j2, bool rwa,
                                    Boundary boundary) {
  ChainSpec spec{n_sites, omega0, j1, j2, rwa, boundary};
  spec.validate();
  return spec;
}

ChainSpec ChainSpec::from_dimerization(int n_sites, double omega0, double epsilon, double jbar,
                                       bool rwa, Boundary boundary) {
  if (!(epsilon >= -1.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in [-1, 1], got " + std::to_string(epsilon));
  }
  check_coupling("jbar", jbar);
  if (jbar == 0.0) epsilon = 0.0;
  return from_couplings(n_sites, omega0, 0.5 * (1.0 + epsilon) * jbar,
                        0.5 * (1.0 - epsilon) * jbar, rwa, boundary);
}

double ChainSpec::epsilon() const {
  const double total = jbar();
  return total == 0.0 ? 0.0 : (j1 - j2) / total;
}

void ChainSpec::validate() const {
  if (n_sites < 1 || n_sites > kMaxDenseSites) {
    throw SizeError("n_sites=" + std::to_string(n_sites) + " outside dense range 1.." +
                    std::to_string(kMaxDenseSites));
  }
  check_frequency(omega0);
  check_coupling("j1", j1);
  check_coupling("j2", j2);
  if (boundary == Boundary::periodic && n_sites % 2 != 0) {
    throw DomainError("periodic boundary requires an even number of sites, got " +
                      std::to_string(n_sites));
  }
}

std::string describe(const ChainSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "chain(N=" << spec.n_sites << ", omega0=" << spec.omega0 << ", j1=" << spec.j1
     << ", j2=" << spec.j2 << ", rwa=" << (spec.rwa ? "true" : "false")
     << ", boundary=" << to_string(spec.boundary) << ")";
  return os.str();
}

std::vector<Bond> chain_bonds(const ChainSpec& spec) {
  const int n = spec.n_sites;
  std::vector<Bond> bonds;
  for (int k = 1; k <= n / 2; ++k) bonds.push_back({2 * k - 1, 2 * k, spec.j1});
  for (int k = 1; k <= (n - 1) / 2; ++k) bonds.push_back({2 * k, 2 * k + 1, spec.j2});
  if (spec.boundary == Boundary::periodic) bonds.push_back({n, 1, spec.j2});
  return bonds;
}

std::string Provenance::describe() const {
  switch (kind) {
    case OperatorKind::dimer:
      return "dimer " + (spec ? usctopo::describe(*spec) : std::string{});
    case OperatorKind::chain:
      return spec ? usctopo::describe(*spec) : std::string{"chain"};
    case OperatorKind::number:
      return "number operator";
    case OperatorKind::custom:
      break;
  }
  return "custom matrix";
}

HermitianOperator::HermitianOperator(Eigen::MatrixXd matrix, Provenance provenance)
    : matrix_(std::move(matrix)), provenance_(std::move(provenance)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionMismatch("operator matrix must be square, got " +
                            std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()));
  }
  if (matrix_.rows() == 0) throw DimensionMismatch("operator matrix is empty");
}

HermitianOperator HermitianOperator::from_matrix(Eigen::MatrixXd matrix, double energy_scale,
                                                 bool conserves_excitations) {
  Provenance p;
  p.kind = OperatorKind::custom;
  p.energy_scale = energy_scale;
  p.conserves_excitations = conserves_excitations;
  return HermitianOperator(std::move(matrix), std::move(p));
}

int HermitianOperator::n_sites() const {
  const auto d = static_cast<std::uint64_t>(dim());
  if (!std::has_single_bit(d)) return -1;
  return std::countr_zero(d);
}

double HermitianOperator::hermiticity_defect() const {
  const double scale = matrix_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() / scale;
}

HermitianOperator build_dimer(double omega0, double j, bool rwa) {
  check_frequency(omega0);
  check_coupling("j", j);
  // Rows/cols: |0,0>, |1,0>, |0,1>, |1,1>.
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(1, 1) = omega0;
  h(2, 2) = omega0;
  h(3, 3) = 2.0 * omega0;
  h(1, 2) = h(2, 1) = j;  // sigma_1^dag sigma_2 + h.c.
  if (!rwa) h(0, 3) = h(3, 0) = j;  // sigma_1 sigma_2 + h.c.
  Provenance p;
  p.kind = OperatorKind::dimer;
  p.spec = ChainSpec{2, omega0, j, 0.0, rwa, Boundary::open};
  p.conserves_excitations = rwa;
  p.energy_scale = omega0;
  return HermitianOperator(h, std::move(p));
}

HermitianOperator build_chain(const ChainSpec& spec, const SectorTable& basis) {
  spec.validate();
  if (spec.n_sites != basis.n_sites()) {
    throw DimensionMismatch("spec has N=" + std::to_string(spec.n_sites) + " but basis has N=" +
                            std::to_string(basis.n_sites()));
  }
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m) h(m, m) = spec.omega0 * popcount(static_cast<Mask>(m));
  for (const auto& bond : chain_bonds(spec)) {
    const Mask flip = (Mask{1} << (bond.site_a - 1)) | (Mask{1} << (bond.site_b - 1));
    for (Mask m = 0; m < static_cast<Mask>(dim); ++m) {
      // Hopping flips one occupied and one empty site; the counter-rotating
      // pair terms flip two equal sites.
      if (spec.rwa && popcount(m & flip) != 1) continue;
      h(m ^ flip, m) += bond.coupling;
    }
  }
  Provenance p;
  p.kind = OperatorKind::chain;
  p.spec = spec;
  p.conserves_excitations = spec.rwa;
  p.energy_scale = spec.omega0;
  return HermitianOperator(std::move(h), std::move(p));
}

HermitianOperator number_operator(const SectorTable& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  Eigen::VectorXd diag(dim);
  for (Eigen::Index m = 0; m < dim; ++m) diag[m] = popcount(static_cast<Mask>(m));
  Provenance p;
  p.kind = OperatorKind::number;
  p.conserves_excitations = true;
  return HermitianOperator(diag.asDiagonal().toDenseMatrix(), std::move(p));
}

Eigen::VectorXd apply_chain(const ChainSpec& spec, const Eigen::VectorXd& x) {
  return apply_chain_impl(spec, x);
}

Eigen::VectorXcd apply_chain(const ChainSpec& spec, const Eigen::VectorXcd& x) {
  return apply_chain_impl(spec, x);
}

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& is) {
  std::array<char, sizeof(T)> bytes;
  if (!is.read(bytes.data(), bytes.size())) throw IoError("truncated matrix dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

constexpr std::uint32_t kFlagConserving = 1u;
constexpr std::uint32_t kFlagPeriodic = 2u;

}  // namespace

void write_matrix_dump(const HermitianOperator& op, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write("USCH", 4);
  std::uint32_t flags = 0;
  if (op.provenance().conserves_excitations) flags |= kFlagConserving;
  if (op.provenance().spec && op.provenance().spec->boundary == Boundary::periodic) {
    flags |= kFlagPeriodic;
  }
  put_le(os, static_cast<std::uint32_t>(op.dim()));
  put_le(os, flags);
  for (Eigen::Index r = 0; r < op.dim(); ++r) {
    for (Eigen::Index c = 0; c < op.dim(); ++c) put_le(os, op.matrix()(r, c));
  }
  if (!os) throw IoError("write failed for " + path.string());
}

HermitianOperator read_matrix_dump(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "USCH", 4) != 0) {
    throw IoError(path.string() + " is not a USCH matrix dump");
  }
  const auto dim = get_le<std::uint32_t>(is);
  const auto flags = get_le<std::uint32_t>(is);
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = get_le<double>(is);
  }
  return HermitianOperator::from_matrix(std::move(m), 1.0, (flags & kFlagConserving) != 0);
}

}  // namespace usctopo
