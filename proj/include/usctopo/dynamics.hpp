#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "usctopo/hamiltonian.hpp"
#include "usctopo/spectra.hpp"

namespace usctopo {

enum class TimeUnit { inverse_coupling, inverse_omega0 };

std::string to_string(TimeUnit unit);

// Uniform, strictly increasing grid of dimensionless times (J t or omega0 t).
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int n_points, TimeUnit unit);

  // 1000 points over J t in [0, 7].
  static TimeGrid dimer_default();

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  int size() const { return n_points_; }
  TimeUnit unit() const { return unit_; }
  double step() const { return (t_end_ - t_start_) / (n_points_ - 1); }
  double at(int i) const;
  std::vector<double> values() const;

  // Grid values converted to physical time using the model frequency matching the unit.
  std::vector<double> physical_times(double omega0, double coupling) const;

 private:
  double t_start_;
  double t_end_;
  int n_points_;
  TimeUnit unit_;
};

// Per-site <sigma_n^dag><sigma_n> of the driven-free dimer:
//   site 1: f(t) cos^2(J t), site 2: f(t) sin^2(J t)
//   f(t) = cos^2(w t) + (omega0 / w)^2 sin^2(w t), w = sqrt(omega0^2 + J^2)
struct DimerCorrelations {
  std::vector<double> time;  // grid values, in the grid's unit
  std::vector<double> site1;
  std::vector<double> site2;
  TimeUnit unit = TimeUnit::inverse_coupling;
};

DimerCorrelations dimer_mean_correlations(double omega0, double j, const TimeGrid& grid);

// The auxiliary envelope f at physical time t.
double dimer_envelope(double omega0, double j, double t);

// |psi(t)> = sum_k exp(-i lambda_k t) <v_k|psi(0)> |v_k>. The grid unit is
// resolved from the spectrum's model (omega0, and jbar for 1/J units).
std::vector<Eigen::VectorXcd> evolve(const Spectrum& spectrum, const Eigen::VectorXcd& initial,
                                     const TimeGrid& grid);

// Same propagator on explicit physical times.
std::vector<Eigen::VectorXcd> evolve_at(const Spectrum& spectrum, const Eigen::VectorXcd& initial,
                                        const std::vector<double>& times);

// <psi(t)|O|psi(t)> (real part; the imaginary part vanishes for Hermitian O).
std::vector<double> expectation_series(const std::vector<Eigen::VectorXcd>& states,
                                       const HermitianOperator& op);

// Diagonal sigma_site^dag sigma_site.
HermitianOperator site_occupation(const SectorTable& basis, int site);

}  // namespace usctopo
