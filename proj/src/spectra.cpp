#include "usctopo/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "usctopo/errors.hpp"

namespace usctopo {

namespace {

// Replaces the columns [first, last) of `vectors`, which span an exactly
// degenerate eigenspace, by a basis that depends only on the subspace: greedy
// pivoting on the projector diagonal followed by Gram-Schmidt of the projected
// unit vectors. Returns the chosen pivots in order.
std::vector<Eigen::Index> canonicalize_cluster(Eigen::MatrixXd& vectors, Eigen::Index first,
                                               Eigen::Index last) {
  const Eigen::Index k = last - first;
  const Eigen::MatrixXd block = vectors.middleCols(first, k);
  Eigen::VectorXd weight = block.rowwise().squaredNorm();
  Eigen::MatrixXd out(vectors.rows(), k);
  std::vector<Eigen::Index> pivots;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double best = weight.maxCoeff();
    Eigen::Index pivot = 0;
    while (weight[pivot] < best * (1.0 - 1e-10)) ++pivot;
    Eigen::VectorXd u = block * block.row(pivot).transpose();
    for (Eigen::Index p = 0; p < c; ++p) u -= out.col(p).dot(u) * out.col(p);
    u.normalize();
    out.col(c) = u;
    weight -= u.cwiseAbs2();
    weight[pivot] = -1.0;
    pivots.push_back(pivot);
  }
  vectors.middleCols(first, k) = out;
  return pivots;
}

Spectrum finish(Eigen::VectorXd values, Eigen::MatrixXd vectors, Provenance provenance) {
  const double scale = std::max({provenance.energy_scale, values.cwiseAbs().maxCoeff(), 1e-300});
  const Eigen::Index n = values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && values[stop] - values[stop - 1] < kDegeneracyTolerance * scale) ++stop;
    if (stop - start > 1) {
      canonicalize_cluster(vectors, start, stop);
      for (Eigen::Index c = start; c < stop; ++c) fix_phase(vectors.col(c));
      // Order the cluster by the basis index that fixes each vector's phase.
      std::vector<Eigen::Index> order(static_cast<std::size_t>(stop - start));
      std::iota(order.begin(), order.end(), start);
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return phase_pivot(vectors.col(a)) < phase_pivot(vectors.col(b));
      });
      const Eigen::MatrixXd copy = vectors.middleCols(start, stop - start);
      for (std::size_t i = 0; i < order.size(); ++i) {
        vectors.col(start + static_cast<Eigen::Index>(i)) = copy.col(order[i] - start);
      }
    } else {
      fix_phase(vectors.col(start));
    }
    start = stop;
  }
  return Spectrum{std::move(values), std::move(vectors), std::move(provenance)};
}

}  // namespace

double Spectrum::orthonormality_defect() const {
  const Eigen::MatrixXd gram = eigenvectors.transpose() * eigenvectors;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double Spectrum::reconstruction_defect(const HermitianOperator& op) const {
  const Eigen::MatrixXd residual =
      op.matrix() * eigenvectors - eigenvectors * eigenvalues.asDiagonal();
  const double scale = std::max(eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  return residual.cwiseAbs().maxCoeff() / scale;
}

Eigen::Index phase_pivot(const Eigen::VectorXd& v) {
  const double best = v.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  while (std::abs(v[pivot]) < best * (1.0 - 1e-10)) ++pivot;
  return pivot;
}

void fix_phase(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  const Eigen::Index pivot = phase_pivot(v);
  if (v[pivot] < 0.0) v = -v;
}

Spectrum diagonalize(const HermitianOperator& op) {
  const auto& h = op.matrix();
  if (!h.allFinite()) {
    throw NotHermitianError("operator has non-finite entries: " + op.provenance().describe());
  }
  const double defect = op.hermiticity_defect();
  if (defect > kHermiticityTolerance) {
    throw NotHermitianError("operator is not Hermitian (relative defect " +
                            std::to_string(defect) + "): " + op.provenance().describe());
  }
  // Symmetrize so the solver sees exactly the Hermitian part.
  const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigensolver failed to converge for " + op.provenance().describe());
  }
  return finish(solver.eigenvalues(), solver.eigenvectors(), op.provenance());
}

Spectrum diagonalize_sector(const HermitianOperator& op, const SectorTable& basis, int sector) {
  if (!op.provenance().conserves_excitations) {
    throw SectorError(
        "sector diagonalization requires an excitation-conserving (RWA) operator; got " +
        op.provenance().describe());
  }
  if (static_cast<std::size_t>(op.dim()) != basis.dim()) {
    throw DimensionMismatch("operator dimension " + std::to_string(op.dim()) +
                            " does not match basis dimension " + std::to_string(basis.dim()));
  }
  const auto members = basis.sector_members(sector);
  const auto size = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd block(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < size; ++c) block(r, c) = op.matrix()(members[r], members[c]);
  }
  Provenance sub = op.provenance();
  const Spectrum local = diagonalize(HermitianOperator(std::move(block), sub));
  Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(op.dim(), size);
  for (Eigen::Index r = 0; r < size; ++r) embedded.row(members[r]) = local.eigenvectors.row(r);
  // Embedding keeps the pivot ordering because members are ascending masks.
  return Spectrum{local.eigenvalues, std::move(embedded), std::move(sub)};
}

DimerEigensystem dimer_exact(double omega0, double j) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw DomainError("omega0 must be positive and finite, got " + std::to_string(omega0));
  }
  if (!(j >= 0.0) || !std::isfinite(j)) {
    throw DomainError("j must be non-negative and finite, got " + std::to_string(j));
  }
  const double root = std::hypot(omega0, j);
  const double w1 = omega0 - root;
  const double w4 = omega0 + root;
  DimerEigensystem out{{w1, omega0 - j, omega0 + j, w4}, Eigen::Matrix4d::Zero()};

  // Basis order |0,0>, |1,0>, |0,1>, |1,1>.
  const double n1 = std::hypot(w4, j);
  out.states(0, 0) = w4 / n1;
  out.states(3, 0) = -j / n1;

  const double s = 1.0 / std::sqrt(2.0);
  out.states(1, 1) = s;
  out.states(2, 1) = -s;
  out.states(1, 2) = s;
  out.states(2, 2) = s;

  const double n4 = std::hypot(w1, j);
  if (n4 == 0.0) {
    out.states(3, 3) = 1.0;  // uncoupled: |1,1>
  } else {
    out.states(3, 3) = j / n4;
    out.states(0, 3) = -w1 / n4;
  }
  return out;
}

}  // namespace usctopo
