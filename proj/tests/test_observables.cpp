#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "usctopo/errors.hpp"
#include "usctopo/observables.hpp"
#include "usctopo/spectra.hpp"

using namespace usctopo;

namespace {

Eigen::VectorXd basis_vector(int dim, int index) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v[index] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("participation ratio limits") {
  CHECK(participation_ratio(basis_vector(16, 5)) == 1.0);
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(16, 0.25);
  CHECK(participation_ratio(flat) == doctest::Approx(16.0).epsilon(1e-14));
  Eigen::VectorXd pair = Eigen::VectorXd::Zero(4);
  pair << 1, 0, 0, 1;
  pair /= std::sqrt(2.0);
  CHECK(participation_ratio(pair) == doctest::Approx(2.0).epsilon(1e-14));
  const Eigen::VectorXcd z = pair.cast<std::complex<double>>() * std::complex<double>(0, 1);
  CHECK(participation_ratio(z) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("edge and anti-edge masks") {
  CHECK(edge_masks(4) == std::vector<Mask>{1, 8});
  CHECK(anti_edge_masks(4) == std::vector<Mask>{7, 14});
  CHECK(edge_masks(6, 2) == std::vector<Mask>{1, 2, 16, 32});
  CHECK_THROWS_AS(edge_masks(4, 0), DomainError);
}

TEST_CASE("edge weights of bare states") {
  const auto basis = build_basis(4);
  CHECK(edge_weight(basis_vector(16, 1), basis) == 1.0);
  CHECK(edge_weight(basis_vector(16, 8), basis) == 1.0);
  CHECK(edge_weight(basis_vector(16, 2), basis) == 0.0);
  CHECK(edge_weight(basis_vector(16, 9), basis) == 0.0);
  CHECK(anti_edge_weight(basis_vector(16, 14), basis) == 1.0);
  CHECK(anti_edge_weight(basis_vector(16, 7), basis) == 1.0);
  CHECK(anti_edge_weight(basis_vector(16, 13), basis) == 0.0);
  Eigen::VectorXd mix = Eigen::VectorXd::Zero(16);
  mix[1] = std::sqrt(0.3);
  mix[2] = std::sqrt(0.7);
  CHECK(edge_weight(mix, basis) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(edge_weight(mix, basis, 2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("observables validate their input") {
  const auto basis = build_basis(3);
  CHECK_THROWS_AS(edge_weight(Eigen::VectorXd(Eigen::VectorXd::Constant(8, 1.0)), basis), NormalizationError);
  CHECK_THROWS_AS(edge_weight(basis_vector(4, 1), basis), DimensionMismatch);
  CHECK_THROWS_AS(participation_ratio(Eigen::VectorXd(Eigen::VectorXd::Zero(4))), NormalizationError);
}

TEST_CASE("sector weights and dominance") {
  const auto basis = build_basis(3);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
  v[0] = std::sqrt(0.5);
  v[3] = std::sqrt(0.5);
  const auto w = sector_weights(v, basis);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[2] == doctest::Approx(0.5));
  const auto d = dominant_sector(v, basis);
  CHECK(d.sector == 0);
  CHECK(d.fraction == doctest::Approx(0.5));
}

TEST_CASE("dimer ground-state occupancy in closed form") {
  const auto basis = build_basis(2);
  for (double j : {0.0, 0.1, 0.5, 1.0, 3.0}) {
    const auto s = diagonalize(build_dimer(1.0, j, false));
    const auto occ = ground_state_occupancy(s, basis);
    const double w4 = 1.0 + std::sqrt(1.0 + j * j);
    const double deficit = j * j / (w4 * w4 + j * j);
    CHECK(std::abs(occ.vacuum_deficit - deficit) < 1e-12);
    // the only excited component is |11>, two excitations
    CHECK(std::abs(occ.mean_excitations - 2.0 * deficit) < 1e-12);
    CHECK(occ.per_site() == doctest::Approx(deficit).epsilon(1e-12));
  }
  const auto rwa = ground_state_occupancy(diagonalize(build_dimer(1.0, 0.7, true)), basis);
  CHECK(rwa.mean_excitations == 0.0);
  CHECK(rwa.vacuum_deficit == 0.0);
}

TEST_CASE("fidelity map is a doubly stochastic matrix") {
  const auto basis = build_basis(4);
  const auto s = diagonalize(build_chain(ChainSpec::from_dimerization(4, 1.0, -0.8, 0.5, false), basis));
  const auto map = fidelity_map(s, basis);
  REQUIRE(map.cells.rows() == 16);
  REQUIRE(map.cells.cols() == 16);
  CHECK(map.rows == basis.sector_ordered_masks());
  CHECK((map.cells.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((map.cells.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(map.cells.minCoeff() >= 0.0);
}

TEST_CASE("diagnose agrees with direct evaluation") {
  const auto basis = build_basis(5);
  const auto s = diagonalize(build_chain(ChainSpec::from_dimerization(5, 1.0, 0.2, 0.3, false), basis));
  const auto d = diagnose(s, basis);
  REQUIRE(d.size() == 32);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto v = s.state(static_cast<Eigen::Index>(k));
    CHECK(d[k].state_index == static_cast<int>(k) + 1);
    CHECK(d[k].eigenvalue == s.eigenvalues[k]);
    CHECK(d[k].participation_ratio == doctest::Approx(oracle::pr(v)).epsilon(1e-12));
    CHECK(d[k].edge_weight == doctest::Approx(v[1] * v[1] + v[16] * v[16]).epsilon(1e-12));
    CHECK(d[k].anti_edge_weight == doctest::Approx(v[30] * v[30] + v[15] * v[15]).epsilon(1e-12));
  }
}
