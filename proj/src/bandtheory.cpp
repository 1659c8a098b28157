#include "usctopo/bandtheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "usctopo/errors.hpp"
#include "usctopo/observables.hpp"

namespace usctopo {

void DispersionSpec::validate() const {
  if (!(omega0 > 0.0)) throw DomainError("omega0 must be positive");
  if (!(j1 >= 0.0) || !(j2 >= 0.0)) throw DomainError("couplings must be non-negative");
  if (!(lattice_period > 0.0)) throw DomainError("lattice period must be positive");
  if (n_momentum_points < 2) throw DomainError("momentum grid needs at least 2 points");
}

double band_offset(double j1, double j2, double qd) {
  // Clamp protects the perfect-square endpoints from tiny negative round-off.
  return std::sqrt(std::max(0.0, j1 * j1 + j2 * j2 + 2.0 * j1 * j2 * std::cos(qd)));
}

Dispersion dispersion(const DispersionSpec& spec) {
  spec.validate();
  Dispersion out;
  const int n = spec.n_momentum_points;
  for (int i = 0; i < n; ++i) {
    const double qd = -std::numbers::pi + 2.0 * std::numbers::pi * i / (n - 1);
    const double offset = band_offset(spec.j1, spec.j2, qd);
    out.qd.push_back(qd);
    out.q.push_back(qd / spec.lattice_period);
    out.lower.push_back(spec.omega0 - offset);
    out.upper.push_back(spec.omega0 + offset);
  }
  return out;
}

BowTie bowtie_boundaries(double epsilon, double jbar, double omega0) {
  const double inner = std::abs(epsilon) * jbar;
  return {omega0 + jbar, omega0 + inner, omega0 - inner, omega0 - jbar};
}

std::vector<double> periodic_momenta(int n_cells) {
  if (n_cells < 1) throw DomainError("need at least one unit cell");
  std::vector<double> out;
  for (int m = 0; m < n_cells; ++m) {
    double qd = 2.0 * std::numbers::pi * m / n_cells;
    if (qd > std::numbers::pi) qd -= 2.0 * std::numbers::pi;
    out.push_back(qd);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(BandPlacement placement) {
  switch (placement) {
    case BandPlacement::in_band:
      return "in_band";
    case BandPlacement::in_gap:
      return "in_gap";
    case BandPlacement::out_of_range:
      break;
  }
  return "out_of_range";
}

ContainmentReport finite_vs_continuum(const Spectrum& spectrum, const SectorTable& basis,
                                      const ChainSpec& spec, double tolerance) {
  if (!spectrum.provenance.conserves_excitations) {
    throw DomainError("band containment needs an excitation-conserving (RWA) spectrum");
  }
  ContainmentReport report;
  report.bowtie = bowtie_boundaries(spec.epsilon(), spec.jbar(), spec.omega0);
  const BowTie& bt = report.bowtie;
  const double tol = tolerance * spec.omega0;

  for (Eigen::Index k = 0; k < spectrum.eigenvectors.cols(); ++k) {
    const Eigen::VectorXd v = spectrum.eigenvectors.col(k);
    if (dominant_sector(v, basis).sector != 1) continue;
    const double w = spectrum.eigenvalues[k];
    PlacementEntry e{static_cast<int>(k) + 1, w, BandPlacement::in_band, 0.0};
    const double upper_margin = std::min(w - bt.inner_upper, bt.outer_upper - w);
    const double lower_margin = std::min(w - bt.outer_lower, bt.inner_lower - w);
    const double gap_margin = std::min(w - bt.inner_lower, bt.inner_upper - w);
    if (upper_margin >= -tol || lower_margin >= -tol) {
      e.margin = std::max(upper_margin, lower_margin);
      ++report.in_band;
    } else if (gap_margin > 0.0) {
      e.placement = BandPlacement::in_gap;
      e.margin = gap_margin;
      ++report.in_gap;
    } else {
      e.placement = BandPlacement::out_of_range;
      e.margin = std::max(upper_margin, lower_margin);
      ++report.out_of_range;
    }
    report.entries.push_back(e);
  }

  // Exponentially split edge doublets sit at omega0 -+ delta; pair them up.
  std::vector<double> gap;
  for (const auto& e : report.entries) {
    if (e.placement == BandPlacement::in_gap) gap.push_back(e.eigenvalue - spec.omega0);
  }
  std::vector<bool> used(gap.size(), false);
  for (std::size_t a = 0; a < gap.size(); ++a) {
    for (std::size_t b = a + 1; b < gap.size() && !used[a]; ++b) {
      if (!used[b] && std::abs(gap[a] + gap[b]) <= std::max(tol, 1e-6 * spec.jbar())) {
        used[a] = used[b] = true;
        ++report.edge_pairs;
      }
    }
  }

  if (spec.boundary == Boundary::periodic) {
    const auto momenta = periodic_momenta(spec.n_sites / 2);
    double worst = 0.0;
    for (const auto& e : report.entries) {
      double best = std::numeric_limits<double>::infinity();
      for (double qd : momenta) {
        const double offset = band_offset(spec.j1, spec.j2, qd);
        best = std::min({best, std::abs(e.eigenvalue - spec.omega0 - offset),
                         std::abs(e.eigenvalue - spec.omega0 + offset)});
      }
      worst = std::max(worst, best);
    }
    report.max_grid_mismatch = worst;
  }
  return report;
}

}  // namespace usctopo
