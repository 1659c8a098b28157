#include "usctopo/dynamics.hpp"

#include <cmath>
#include <complex>

#include "usctopo/errors.hpp"

namespace usctopo {

std::string to_string(TimeUnit unit) {
  return unit == TimeUnit::inverse_coupling ? "1/J" : "1/omega0";
}

TimeGrid::TimeGrid(double t_start, double t_end, int n_points, TimeUnit unit)
    : t_start_(t_start), t_end_(t_end), n_points_(n_points), unit_(unit) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || t_start < 0.0) {
    throw DomainError("time grid must start at a finite t >= 0");
  }
  if (n_points < 2) throw DomainError("time grid needs at least 2 points");
  if (!(t_end > t_start)) throw DomainError("time grid must be strictly increasing");
}

TimeGrid TimeGrid::dimer_default() { return TimeGrid(0.0, 7.0, 1000, TimeUnit::inverse_coupling); }

double TimeGrid::at(int i) const {
  if (i < 0 || i >= n_points_) throw DomainError("time index out of range");
  if (i == n_points_ - 1) return t_end_;
  return t_start_ + i * step();
}

std::vector<double> TimeGrid::values() const {
  std::vector<double> out(static_cast<std::size_t>(n_points_));
  for (int i = 0; i < n_points_; ++i) out[static_cast<std::size_t>(i)] = at(i);
  return out;
}

std::vector<double> TimeGrid::physical_times(double omega0, double coupling) const {
  const double scale = unit_ == TimeUnit::inverse_coupling ? coupling : omega0;
  if (!(scale > 0.0)) {
    throw DomainError("time grid in units of " + to_string(unit_) +
                      " needs a positive frequency scale");
  }
  auto out = values();
  for (auto& t : out) t /= scale;
  return out;
}

double dimer_envelope(double omega0, double j, double t) {
  const double renorm = std::hypot(omega0, j);
  const double c = std::cos(renorm * t);
  const double s = std::sin(renorm * t);
  const double ratio = omega0 / renorm;
  return c * c + ratio * ratio * s * s;
}

DimerCorrelations dimer_mean_correlations(double omega0, double j, const TimeGrid& grid) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("omega0 must be positive");
  if (!(j >= 0.0) || !std::isfinite(j)) throw DomainError("j must be non-negative");
  DimerCorrelations out;
  out.unit = grid.unit();
  out.time = grid.values();
  const auto times = grid.physical_times(omega0, j);
  out.site1.reserve(times.size());
  out.site2.reserve(times.size());
  for (double t : times) {
    const double f = dimer_envelope(omega0, j, t);
    const double c = std::cos(j * t);
    const double s = std::sin(j * t);
    out.site1.push_back(f * c * c);
    out.site2.push_back(f * s * s);
  }
  return out;
}

std::vector<Eigen::VectorXcd> evolve_at(const Spectrum& spectrum, const Eigen::VectorXcd& initial,
                                        const std::vector<double>& times) {
  if (initial.size() != spectrum.eigenvectors.rows()) {
    throw DimensionMismatch("initial state has size " + std::to_string(initial.size()) +
                            ", spectrum dimension is " +
                            std::to_string(spectrum.eigenvectors.rows()));
  }
  const double norm = initial.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw NormalizationError("initial state norm^2 is " + std::to_string(norm));
  }
  const Eigen::MatrixXcd vectors = spectrum.eigenvectors.cast<std::complex<double>>();
  const Eigen::VectorXcd overlaps = vectors.adjoint() * initial;
  std::vector<Eigen::VectorXcd> out;
  out.reserve(times.size());
  Eigen::VectorXcd phased(overlaps.size());
  for (double t : times) {
    for (Eigen::Index k = 0; k < overlaps.size(); ++k) {
      phased[k] = std::polar(1.0, -spectrum.eigenvalues[k] * t) * overlaps[k];
    }
    out.push_back(vectors * phased);
  }
  return out;
}

std::vector<Eigen::VectorXcd> evolve(const Spectrum& spectrum, const Eigen::VectorXcd& initial,
                                     const TimeGrid& grid) {
  const auto& prov = spectrum.provenance;
  const double omega0 = prov.spec ? prov.spec->omega0 : prov.energy_scale;
  const double coupling = prov.spec ? prov.spec->jbar() : 0.0;
  return evolve_at(spectrum, initial, grid.physical_times(omega0, coupling));
}

std::vector<double> expectation_series(const std::vector<Eigen::VectorXcd>& states,
                                       const HermitianOperator& op) {
  const Eigen::MatrixXcd o = op.matrix().cast<std::complex<double>>();
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& psi : states) {
    if (psi.size() != op.dim()) {
      throw DimensionMismatch("state of size " + std::to_string(psi.size()) +
                              " vs operator dimension " + std::to_string(op.dim()));
    }
    out.push_back(psi.dot(o * psi).real());
  }
  return out;
}

HermitianOperator site_occupation(const SectorTable& basis, int site) {
  if (site < 1 || site > basis.n_sites()) throw DomainError("site out of range");
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  Eigen::VectorXd diag(dim);
  for (Eigen::Index m = 0; m < dim; ++m) diag[m] = (m >> (site - 1)) & 1;
  Provenance p;
  p.kind = OperatorKind::custom;
  p.conserves_excitations = true;
  return HermitianOperator(diag.asDiagonal().toDenseMatrix(), std::move(p));
}

}  // namespace usctopo
