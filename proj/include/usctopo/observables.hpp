#pragma once

#include <Eigen/Dense>
#include <vector>

#include "usctopo/basis.hpp"
#include "usctopo/spectra.hpp"

namespace usctopo {

// Amplitudes must be normalized to within this before any diagnostic is taken.
inline constexpr double kNormalizationTolerance = 1e-10;

struct SectorDominance {
  int sector = 0;
  double fraction = 0.0;
};

struct StateDiagnostics {
  int state_index = 0;  // 1-based, ascending energy
  double eigenvalue = 0.0;
  double participation_ratio = 0.0;
  double edge_weight = 0.0;
  double anti_edge_weight = 0.0;
  int dominant_sector = 0;
  double sector_fraction = 0.0;
};

// |<bare|eigenstate>|^2 with rows ordered by sector then mask and one column
// per eigenstate (ascending energy).
struct FidelityMap {
  int n_sites = 0;
  std::vector<Mask> rows;
  Eigen::MatrixXd cells;
};

struct GroundStateOccupancy {
  double mean_excitations = 0.0;  // <psi_1| N |psi_1>
  double vacuum_deficit = 0.0;    // 1 - |<0...0|psi_1>|^2
  int n_sites = 0;

  // Plot default: mean excitation per site.
  double per_site() const { return n_sites > 0 ? mean_excitations / n_sites : 0.0; }
};

// 1 / sum |c_i|^4
double participation_ratio(const Eigen::VectorXd& state);
double participation_ratio(const Eigen::VectorXcd& state);

// Probability on the single-excitation states whose excitation sits within
// `region_sites` of either chain end. The default region is the end site only,
// i.e. masks 1 and 2^(N-1).
double edge_weight(const Eigen::VectorXd& state, const SectorTable& basis, int region_sites = 1);
double edge_weight(const Eigen::VectorXcd& state, const SectorTable& basis, int region_sites = 1);

// Same as edge_weight for the single-hole states of the N-1 excitation sector.
double anti_edge_weight(const Eigen::VectorXd& state, const SectorTable& basis,
                        int region_sites = 1);
double anti_edge_weight(const Eigen::VectorXcd& state, const SectorTable& basis,
                        int region_sites = 1);

std::vector<double> sector_weights(const Eigen::VectorXd& state, const SectorTable& basis);

// Sector carrying the largest probability, ties resolved toward the lower sector.
SectorDominance dominant_sector(const Eigen::VectorXd& state, const SectorTable& basis);

GroundStateOccupancy ground_state_occupancy(const Spectrum& spectrum, const SectorTable& basis);

FidelityMap fidelity_map(const Spectrum& spectrum, const SectorTable& basis);

std::vector<StateDiagnostics> diagnose(const Spectrum& spectrum, const SectorTable& basis);

// Masks making up the edge (single excitation) and anti-edge (single hole) sets.
std::vector<Mask> edge_masks(int n_sites, int region_sites = 1);
std::vector<Mask> anti_edge_masks(int n_sites, int region_sites = 1);

}  // namespace usctopo
