#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "usctopo/errors.hpp"
#include "usctopo/hamiltonian.hpp"

using namespace usctopo;

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dimer matrix against tensor-product construction") {
  for (bool rwa : {false, true}) {
    for (double j : {0.0, 0.3, 1.7}) {
      const auto h = build_dimer(1.3, j, rwa);
      const auto ref = oracle::chain_hamiltonian(2, 1.3, {{1, 2, j}}, rwa);
      CHECK(max_abs_diff(h.matrix(), ref) == 0.0);
      CHECK(h.provenance().conserves_excitations == rwa);
    }
  }
}

TEST_CASE("explicit dimer entries") {
  const auto h = build_dimer(1.0, 0.4, false).matrix();
  // basis {|00>, |10>, |01>, |11>}
  CHECK(h(0, 0) == 0.0);
  CHECK(h(1, 1) == 1.0);
  CHECK(h(2, 2) == 1.0);
  CHECK(h(3, 3) == 2.0);
  CHECK(h(0, 3) == 0.4);
  CHECK(h(1, 2) == 0.4);
  CHECK(h(0, 1) == 0.0);
  const auto r = build_dimer(1.0, 0.4, true).matrix();
  CHECK(r(0, 3) == 0.0);
  CHECK(r(1, 2) == 0.4);
}

TEST_CASE("chain assembly against tensor products") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 7; ++n) {
    const auto basis = build_basis(n);
    for (bool rwa : {false, true}) {
      const double j1 = u(rng), j2 = u(rng), w0 = 0.5 + u(rng);
      const auto spec = ChainSpec::from_couplings(n, w0, j1, j2, rwa);
      const auto h = build_chain(spec, basis);
      const auto ref = oracle::chain_hamiltonian(n, w0, oracle::ssh_links(n, j1, j2, false), rwa);
      CHECK(max_abs_diff(h.matrix(), ref) < 1e-15);
      CHECK(h.hermiticity_defect() == 0.0);
    }
  }
  for (int n : {2, 4, 6}) {
    const auto basis = build_basis(n);
    const auto spec = ChainSpec::from_couplings(n, 1.0, 0.2, 0.7, false, Boundary::periodic);
    const auto ref = oracle::chain_hamiltonian(n, 1.0, oracle::ssh_links(n, 0.2, 0.7, true), false);
    CHECK(max_abs_diff(build_chain(spec, basis).matrix(), ref) < 1e-15);
  }
}

TEST_CASE("bond layout") {
  auto bonds = chain_bonds(ChainSpec::from_couplings(5, 1.0, 0.1, 0.2, true));
  REQUIRE(bonds.size() == 4);
  std::sort(bonds.begin(), bonds.end(), [](const Bond& a, const Bond& b) { return a.site_a < b.site_a; });
  for (int k = 0; k < 4; ++k) {
    CHECK(bonds[k].site_a == k + 1);
    CHECK(bonds[k].site_b == k + 2);
    CHECK(bonds[k].coupling == (k % 2 == 0 ? 0.1 : 0.2));
  }
  const auto ring = chain_bonds(ChainSpec::from_couplings(4, 1.0, 0.1, 0.2, true, Boundary::periodic));
  REQUIRE(ring.size() == 4);
  CHECK(ring.back().site_a == 4);
  CHECK(ring.back().site_b == 1);
  CHECK(ring.back().coupling == 0.2);
}

TEST_CASE("N=2 chain equals dimer") {
  const auto basis = build_basis(2);
  for (bool rwa : {false, true}) {
    const auto chain = build_chain(ChainSpec::from_couplings(2, 0.9, 0.6, 0.0, rwa), basis);
    CHECK(chain.matrix() == build_dimer(0.9, 0.6, rwa).matrix());
  }
}

TEST_CASE("dimerization parametrization") {
  const auto s = ChainSpec::from_dimerization(4, 1.0, -0.8, 0.5, false);
  CHECK(s.j1 == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(s.j2 == doctest::Approx(0.45).epsilon(1e-14));
  CHECK(s.jbar() == doctest::Approx(0.5));
  CHECK(s.epsilon() == doctest::Approx(-0.8));
  CHECK(ChainSpec::from_couplings(4, 1.0, 0.0, 0.0, true).epsilon() == 0.0);
  CHECK_THROWS_AS(ChainSpec::from_dimerization(4, 1.0, 1.5, 0.5, false), DomainError);
}

TEST_CASE("spec validation") {
  auto bad = ChainSpec::from_couplings(4, 1.0, 0.1, 0.1, false);
  bad.omega0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.omega0 = 1.0;
  bad.j1 = -0.1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(ChainSpec::from_couplings(5, 1.0, 0.1, 0.1, false, Boundary::periodic).validate(),
                  DomainError);
  CHECK_THROWS_AS(build_chain(ChainSpec::from_couplings(4, 1.0, 0.1, 0.1, false), build_basis(3)),
                  DimensionMismatch);
  CHECK_THROWS_AS(build_dimer(-1.0, 0.1, false), DomainError);
  CHECK_THROWS_AS(build_chain(ChainSpec::from_couplings(15, 1.0, 0.1, 0.1, false), build_basis(4)),
                  Error);
}

TEST_CASE("matrix-free application matches the dense matrix") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (bool rwa : {false, true}) {
    const auto spec = ChainSpec::from_couplings(6, 1.0, 0.3, 0.45, rwa);
    const auto h = build_chain(spec, build_basis(6));
    Eigen::VectorXd x(64);
    for (auto& v : x) v = g(rng);
    CHECK((apply_chain(spec, x) - h.matrix() * x).cwiseAbs().maxCoeff() < 1e-13);
    Eigen::VectorXcd z = x.cast<std::complex<double>>() * std::complex<double>(0.3, -0.7);
    CHECK((apply_chain(spec, z) - h.matrix().cast<std::complex<double>>() * z).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("number operator is diagonal popcount") {
  const auto n = number_operator(build_basis(5)).matrix();
  for (int m = 0; m < 32; ++m) CHECK(n(m, m) == oracle::bits(m));
  CHECK((n - Eigen::MatrixXd(n.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix dump round trip") {
  const auto path = std::filesystem::temp_directory_path() / "usctopo_dump_test.bin";
  const auto h = build_chain(ChainSpec::from_couplings(4, 1.0, 0.3, 0.1, true), build_basis(4));
  write_matrix_dump(h, path);
  const auto back = read_matrix_dump(path);
  CHECK(back.matrix() == h.matrix());
  CHECK(back.provenance().conserves_excitations);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_matrix_dump(path), IoError);
}

TEST_CASE("from_matrix rejects malformed input") {
  CHECK_THROWS_AS(HermitianOperator::from_matrix(Eigen::MatrixXd(2, 3)), DimensionMismatch);
  CHECK_THROWS_AS(HermitianOperator::from_matrix(Eigen::MatrixXd(0, 0)), DimensionMismatch);
}
