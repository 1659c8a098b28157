#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "usctopo/basis.hpp"

namespace usctopo {

enum class Boundary { open, periodic };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& text);

// Physical model of a dimerized chain. Couplings are stored as (j1, j2); the
// dimerization form is derived: eps = (j1 - j2) / jbar, jbar = j1 + j2, with
// eps defined as 0 when jbar = 0.
struct ChainSpec {
  int n_sites = 2;
  double omega0 = 1.0;
  double j1 = 0.0;
  double j2 = 0.0;
  bool rwa = false;
  Boundary boundary = Boundary::open;

  static ChainSpec from_couplings(int n_sites, double omega0, double j1, double j2, bool rwa,
                                  Boundary boundary = Boundary::open);
  static ChainSpec from_dimerization(int n_sites, double omega0, double epsilon, double jbar,
                                     bool rwa, Boundary boundary = Boundary::open);

  double jbar() const { return j1 + j2; }
  double epsilon() const;

  // Throws DomainError / SizeError on invalid fields.
  void validate() const;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

std::string describe(const ChainSpec& spec);

struct Bond {
  int site_a;  // 1-based
  int site_b;
  double coupling;
};

// Bonds of the chain: J1 on (2n-1, 2n) for n <= floor(N/2), J2 on (2n, 2n+1)
// for n <= floor((N-1)/2), plus the closing (N, 1) J2 bond for periodic chains.
std::vector<Bond> chain_bonds(const ChainSpec& spec);

enum class OperatorKind { dimer, chain, number, custom };

struct Provenance {
  OperatorKind kind = OperatorKind::custom;
  std::optional<ChainSpec> spec;
  bool conserves_excitations = false;
  // Frequency scale used for degeneracy tolerances (omega0 for built Hamiltonians).
  double energy_scale = 1.0;

  std::string describe() const;
};

// Dense real symmetric matrix indexed by basis mask. The Hamiltonians here have
// real coefficients so the matrix is assembled in real arithmetic.
class HermitianOperator {
 public:
  HermitianOperator(Eigen::MatrixXd matrix, Provenance provenance);

  static HermitianOperator from_matrix(Eigen::MatrixXd matrix, double energy_scale = 1.0,
                                       bool conserves_excitations = false);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Provenance& provenance() const { return provenance_; }
  int n_sites() const;

  // max |H_ab - H_ba| relative to max |H|.
  double hermiticity_defect() const;

 private:
  Eigen::MatrixXd matrix_;
  Provenance provenance_;
};

// Two coupled two-level systems in basis {|0,0>, |1,0>, |0,1>, |1,1>}.
HermitianOperator build_dimer(double omega0, double j, bool rwa);

HermitianOperator build_chain(const ChainSpec& spec, const SectorTable& basis);

HermitianOperator number_operator(const SectorTable& basis);

// Matrix-free y = H x using bit operations on the basis masks.
Eigen::VectorXd apply_chain(const ChainSpec& spec, const Eigen::VectorXd& x);
Eigen::VectorXcd apply_chain(const ChainSpec& spec, const Eigen::VectorXcd& x);

// Debug dump: "USCH", u32 dim, u32 flags, then dim*dim little-endian f64 row-major.
// flags bit 0: excitation-conserving, bit 1: periodic boundary.
void write_matrix_dump(const HermitianOperator& op, const std::filesystem::path& path);
HermitianOperator read_matrix_dump(const std::filesystem::path& path);

}  // namespace usctopo
