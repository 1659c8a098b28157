#pragma once

#include <array>
#include <optional>
#include <vector>

#include "usctopo/basis.hpp"
#include "usctopo/hamiltonian.hpp"
#include "usctopo/spectra.hpp"

namespace usctopo {

// One-excitation RWA bands of the infinite periodic chain:
//   w_pm(q) = omega0 +- sqrt(J1^2 + J2^2 + 2 J1 J2 cos(q d))
struct DispersionSpec {
  double omega0 = 1.0;
  double j1 = 0.0;
  double j2 = 0.0;
  double lattice_period = 1.0;
  int n_momentum_points = 201;

  void validate() const;
};

struct Dispersion {
  std::vector<double> q;   // wavenumber, q d spans [-pi, pi]
  std::vector<double> qd;
  std::vector<double> lower;
  std::vector<double> upper;
};

Dispersion dispersion(const DispersionSpec& spec);

// |J1 + J2 e^{i q d}|
double band_offset(double j1, double j2, double qd);

// Descending band edges (omega0 + Jbar, omega0 + |eps| Jbar, omega0 - |eps| Jbar, omega0 - Jbar).
struct BowTie {
  double outer_upper;
  double inner_upper;
  double inner_lower;
  double outer_lower;

  std::array<double, 4> as_array() const { return {outer_upper, inner_upper, inner_lower, outer_lower}; }
};

BowTie bowtie_boundaries(double epsilon, double jbar, double omega0);

// Allowed q d for a ring of n_cells two-site cells, 2 pi m / n_cells folded into (-pi, pi].
std::vector<double> periodic_momenta(int n_cells);

enum class BandPlacement { in_band, in_gap, out_of_range };

const char* to_string(BandPlacement placement);

struct PlacementEntry {
  int state_index = 0;  // 1-based index in the spectrum
  double eigenvalue = 0.0;
  BandPlacement placement = BandPlacement::in_band;
  // Signed distance to the nearest boundary of the assigned region, positive inside.
  double margin = 0.0;
};

struct ContainmentReport {
  BowTie bowtie{};
  std::vector<PlacementEntry> entries;
  int in_band = 0;
  int in_gap = 0;
  int out_of_range = 0;
  // In-gap eigenvalues paired symmetrically about omega0 (split edge doublets).
  int edge_pairs = 0;
  // Periodic chains only: max over one-excitation eigenvalues of the distance to
  // the nearest w_pm(q) on the discrete momentum grid.
  std::optional<double> max_grid_mismatch;
};

inline constexpr double kBandTolerance = 1e-9;

// Classifies every one-excitation eigenvalue of an excitation-conserving
// spectrum against the bow tie of `spec`. Tolerance is relative to omega0.
ContainmentReport finite_vs_continuum(const Spectrum& spectrum, const SectorTable& basis,
                                      const ChainSpec& spec, double tolerance = kBandTolerance);

}  // namespace usctopo
