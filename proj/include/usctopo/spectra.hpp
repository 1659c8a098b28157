#pragma once

#include <Eigen/Dense>
#include <array>

#include "usctopo/basis.hpp"
#include "usctopo/hamiltonian.hpp"

namespace usctopo {

// Ascending eigenvalues with orthonormal, phase-fixed eigenvectors (column k
// pairs with eigenvalue k). In every eigenvector the entry of largest
// magnitude is positive, ties broken by lowest basis index.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Provenance provenance;

  Eigen::Index dim() const { return eigenvalues.size(); }
  Eigen::VectorXd state(Eigen::Index k) const { return eigenvectors.col(k); }

  double orthonormality_defect() const;
  double reconstruction_defect(const HermitianOperator& op) const;
};

// Relative tolerance on |H - H^T| accepted by diagonalize.
inline constexpr double kHermiticityTolerance = 1e-12;
// Eigenvalues closer than this (times the energy scale) are treated as an
// exactly degenerate cluster whose eigenvectors are canonicalized.
inline constexpr double kDegeneracyTolerance = 1e-12;

Spectrum diagonalize(const HermitianOperator& op);

// Diagonalizes one excitation sector of an excitation-conserving operator.
// Eigenvectors are embedded back into the full 2^N space.
Spectrum diagonalize_sector(const HermitianOperator& op, const SectorTable& basis, int sector);

// Makes the largest-magnitude entry positive (first index on ties).
void fix_phase(Eigen::Ref<Eigen::VectorXd> v);
// Index of the entry that fix_phase keys on.
Eigen::Index phase_pivot(const Eigen::VectorXd& v);

// Closed-form dimer eigensystem, ascending:
//   w1 = w0 - sqrt(w0^2 + J^2), w2 = w0 - J, w3 = w0 + J, w4 = w0 + sqrt(w0^2 + J^2)
// Columns of `states` are the eigenvectors in the {|0,0>,|1,0>,|0,1>,|1,1>} basis.
struct DimerEigensystem {
  std::array<double, 4> frequencies;
  Eigen::Matrix4d states;
};

DimerEigensystem dimer_exact(double omega0, double j);

}  // namespace usctopo
