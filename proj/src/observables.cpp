#include "usctopo/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "usctopo/errors.hpp"

namespace usctopo {

namespace {

template <typename Vector>
Eigen::VectorXd probabilities(const Vector& state) {
  Eigen::VectorXd p = state.cwiseAbs2();
  const double norm = p.sum();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormalizationTolerance) {
    throw NormalizationError("state norm^2 is " + std::to_string(norm) + ", expected 1");
  }
  return p;
}

void check_dim(Eigen::Index size, const SectorTable& basis) {
  if (static_cast<std::size_t>(size) != basis.dim()) {
    throw DimensionMismatch("state of size " + std::to_string(size) +
                            " does not match basis dimension " + std::to_string(basis.dim()));
  }
}

double weight_on(const Eigen::VectorXd& p, const std::vector<Mask>& masks) {
  double total = 0.0;
  for (Mask m : masks) total += p[m];
  return total;
}

std::vector<Mask> region_bits(int n_sites, int region_sites) {
  if (region_sites < 1) throw DomainError("edge region must contain at least one site");
  std::vector<Mask> bits;
  for (int s = 1; s <= std::min(region_sites, n_sites); ++s) {
    bits.push_back(Mask{1} << (s - 1));
    bits.push_back(Mask{1} << (n_sites - s));
  }
  std::sort(bits.begin(), bits.end());
  bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
  return bits;
}

template <typename Vector>
double pr_impl(const Vector& state) {
  const Eigen::VectorXd p = probabilities(state);
  return 1.0 / p.squaredNorm();
}

template <typename Vector>
double edge_impl(const Vector& state, const SectorTable& basis, int region_sites) {
  check_dim(state.size(), basis);
  return weight_on(probabilities(state), edge_masks(basis.n_sites(), region_sites));
}

template <typename Vector>
double anti_edge_impl(const Vector& state, const SectorTable& basis, int region_sites) {
  check_dim(state.size(), basis);
  return weight_on(probabilities(state), anti_edge_masks(basis.n_sites(), region_sites));
}

}  // namespace

std::vector<Mask> edge_masks(int n_sites, int region_sites) {
  return region_bits(n_sites, region_sites);
}

std::vector<Mask> anti_edge_masks(int n_sites, int region_sites) {
  const Mask full = (Mask{1} << n_sites) - 1;
  std::vector<Mask> out;
  for (Mask bit : region_bits(n_sites, region_sites)) out.push_back(full ^ bit);
  std::sort(out.begin(), out.end());
  return out;
}

double participation_ratio(const Eigen::VectorXd& state) { return pr_impl(state); }
double participation_ratio(const Eigen::VectorXcd& state) { return pr_impl(state); }

double edge_weight(const Eigen::VectorXd& state, const SectorTable& basis, int region_sites) {
  return edge_impl(state, basis, region_sites);
}
double edge_weight(const Eigen::VectorXcd& state, const SectorTable& basis, int region_sites) {
  return edge_impl(state, basis, region_sites);
}

double anti_edge_weight(const Eigen::VectorXd& state, const SectorTable& basis,
                        int region_sites) {
  return anti_edge_impl(state, basis, region_sites);
}
double anti_edge_weight(const Eigen::VectorXcd& state, const SectorTable& basis,
                        int region_sites) {
  return anti_edge_impl(state, basis, region_sites);
}

std::vector<double> sector_weights(const Eigen::VectorXd& state, const SectorTable& basis) {
  check_dim(state.size(), basis);
  const Eigen::VectorXd p = probabilities(state);
  std::vector<double> w(static_cast<std::size_t>(basis.n_sites()) + 1, 0.0);
  for (Eigen::Index m = 0; m < p.size(); ++m) {
    w[static_cast<std::size_t>(popcount(static_cast<Mask>(m)))] += p[m];
  }
  return w;
}

SectorDominance dominant_sector(const Eigen::VectorXd& state, const SectorTable& basis) {
  const auto w = sector_weights(state, basis);
  SectorDominance best{0, w[0]};
  for (std::size_t s = 1; s < w.size(); ++s) {
    if (w[s] > best.fraction) best = {static_cast<int>(s), w[s]};
  }
  return best;
}

GroundStateOccupancy ground_state_occupancy(const Spectrum& spectrum, const SectorTable& basis) {
  check_dim(spectrum.dim(), basis);
  const Eigen::VectorXd p = probabilities(Eigen::VectorXd(spectrum.eigenvectors.col(0)));
  GroundStateOccupancy out;
  out.n_sites = basis.n_sites();
  for (Eigen::Index m = 0; m < p.size(); ++m) {
    out.mean_excitations += popcount(static_cast<Mask>(m)) * p[m];
  }
  out.vacuum_deficit = 1.0 - p[0];
  return out;
}

FidelityMap fidelity_map(const Spectrum& spectrum, const SectorTable& basis) {
  check_dim(spectrum.dim(), basis);
  FidelityMap map;
  map.n_sites = basis.n_sites();
  map.rows = basis.sector_ordered_masks();
  const Eigen::Index dim = spectrum.dim();
  map.cells.resize(dim, spectrum.eigenvectors.cols());
  for (Eigen::Index r = 0; r < dim; ++r) {
    map.cells.row(r) = spectrum.eigenvectors.row(map.rows[static_cast<std::size_t>(r)]).cwiseAbs2();
  }
  return map;
}

std::vector<StateDiagnostics> diagnose(const Spectrum& spectrum, const SectorTable& basis) {
  check_dim(spectrum.dim(), basis);
  std::vector<StateDiagnostics> out;
  out.reserve(static_cast<std::size_t>(spectrum.eigenvectors.cols()));
  for (Eigen::Index k = 0; k < spectrum.eigenvectors.cols(); ++k) {
    const Eigen::VectorXd v = spectrum.eigenvectors.col(k);
    const auto dom = dominant_sector(v, basis);
    out.push_back({static_cast<int>(k) + 1, spectrum.eigenvalues[k], participation_ratio(v),
                   edge_weight(v, basis), anti_edge_weight(v, basis), dom.sector, dom.fraction});
  }
  return out;
}

}  // namespace usctopo
