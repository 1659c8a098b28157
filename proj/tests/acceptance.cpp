// One line per acceptance criterion: "ACn PASS|FAIL <summary> [<seconds> s / limit]".
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "usctopo/bandtheory.hpp"
#include "usctopo/dynamics.hpp"
#include "usctopo/observables.hpp"
#include "usctopo/spectra.hpp"
#include "usctopo/sweep.hpp"

using namespace usctopo;

namespace {

// Tolerances pinned here; do not loosen.
constexpr double kDimerValueTol = 1e-12;
constexpr double kDimerVectorTol = 1e-10;
constexpr double kLeakageTol = 1e-10;
constexpr double kEdgeWindow = 1e-3;
constexpr double kBandTol = 1e-9;
constexpr double kGridTol = 1e-10;
constexpr double kDeficitTol = 1e-12;
constexpr double kIdentityTol = 1e-14;
constexpr double kWeakDeviation = 0.02;
constexpr double kPropagatorTol = 1e-10;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Spectrum chain_spectrum(int n, double eps, double jbar, bool rwa, const SectorTable& basis,
                        Boundary boundary = Boundary::open) {
  return diagonalize(build_chain(ChainSpec::from_dimerization(n, 1.0, eps, jbar, rwa, boundary), basis));
}

Outcome ac1() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> w(0.1, 10.0), ratio(0.0, 5.0);
  double dv = 0, dvec = 0;
  for (int i = 0; i < 50; ++i) {
    const double w0 = w(rng), j = ratio(rng) * w0;
    const auto s = diagonalize(build_dimer(w0, j, false));
    const auto ref_w = oracle::dimer_frequencies(w0, j);
    const auto ref_v = oracle::dimer_states(w0, j);
    for (int k = 0; k < 4; ++k) {
      dv = std::max(dv, std::abs(s.eigenvalues[k] - ref_w[k]));
      Eigen::Vector4d a = s.state(k);
      Eigen::Vector4d b = ref_v.col(k);
      if (a.dot(b) < 0) b = -b;
      dvec = std::max(dvec, (a - b).cwiseAbs().maxCoeff());
    }
  }
  return {dv <= kDimerValueTol && dvec <= kDimerVectorTol,
          "dimer oracle: max |dw|=" + fmt(dv) + ", max |dpsi|=" + fmt(dvec)};
}

Outcome ac2() {
  bool ok = true;
  for (int n = 1; n <= 12; ++n) {
    const auto b = build_basis(n);
    for (int k = 0; k <= n; ++k) ok = ok && b.sector_sizes()[k] == oracle::binomial(n, k);
  }
  const auto b4 = build_basis(4);
  const std::vector<std::size_t> four(b4.sector_sizes().begin(), b4.sector_sizes().end());
  ok = ok && four == std::vector<std::size_t>{1, 4, 6, 4, 1};
  // the RWA Hamiltonian really is block diagonal in those sectors
  const auto h = build_chain(ChainSpec::from_dimerization(8, 1.0, 0.3, 0.5, true), build_basis(8)).matrix();
  for (Eigen::Index a = 0; a < h.rows(); ++a)
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      if (oracle::bits(a) != oracle::bits(c) && h(a, c) != 0.0) ok = false;
  return {ok, "sector sizes equal binomial(N,k) for N=1..12, N=4 -> {1,4,6,4,1}"};
}

Outcome ac3() {
  const auto basis = build_basis(8);
  double max_cross = 0, max_leak = 0;
  for (double eps : linspace(-1, 1, 21)) {
    const auto op = build_chain(ChainSpec::from_dimerization(8, 1.0, eps, 0.5, false), basis);
    const auto& h = op.matrix();
    for (Eigen::Index a = 0; a < h.rows(); ++a)
      for (Eigen::Index c = 0; c < h.cols(); ++c)
        if ((oracle::bits(a) + oracle::bits(c)) % 2) max_cross = std::max(max_cross, std::abs(h(a, c)));
    const auto g = diagonalize(op).state(0);
    double leak = 0;
    for (Eigen::Index m = 0; m < g.size(); ++m)
      if (oracle::bits(m) % 2) leak += g[m] * g[m];
    max_leak = std::max(max_leak, leak);
  }
  return {max_cross == 0.0 && max_leak < kLeakageTol,
          "parity: max odd/even element=" + fmt(max_cross) + ", ground-state odd leakage=" + fmt(max_leak)};
}

int count_edge_states(const Spectrum& s, const SectorTable& basis) {
  int count = 0;
  for (const auto& d : diagnose(s, basis)) {
    if (d.dominant_sector == 1 && std::abs(d.eigenvalue - 1.0) < kEdgeWindow && d.edge_weight > 0.5 &&
        d.participation_ratio < 4.0)
      ++count;
  }
  return count;
}

Outcome ac4() {
  const auto basis = build_basis(8);
  const int topo = count_edge_states(chain_spectrum(8, -0.8, 0.1, true, basis), basis);
  const int trivial = count_edge_states(chain_spectrum(8, 0.8, 0.1, true, basis), basis);
  return {topo == 2 && trivial == 0,
          "edge states at Jbar=0.1, RWA: eps=-0.8 -> " + std::to_string(topo) + ", eps=+0.8 -> " +
              std::to_string(trivial)};
}

Outcome ac5() {
  const auto basis = build_basis(8);
  double best_topo = 0, worst_trivial = 0, where = 0;
  for (const auto& d : diagnose(chain_spectrum(8, -0.9, 0.5, false, basis), basis)) {
    if (d.eigenvalue > 0.6 && d.eigenvalue < 0.8 && d.edge_weight > best_topo) {
      best_topo = d.edge_weight;
      where = d.eigenvalue;
    }
  }
  for (const auto& d : diagnose(chain_spectrum(8, 0.9, 0.5, false, basis), basis)) {
    if (d.eigenvalue > 0.6 && d.eigenvalue < 0.8) worst_trivial = std::max(worst_trivial, d.edge_weight);
  }
  return {best_topo > 0.4 && worst_trivial <= 0.2,
          "ultrastrong edge: eps=-0.9 edge_weight=" + fmt(best_topo) + " at w=" + fmt(where) +
              ", eps=+0.9 max edge_weight in window=" + fmt(worst_trivial)};
}

Outcome ac6() {
  const auto basis = build_basis(4);
  const auto d = diagnose(chain_spectrum(4, -0.8, 0.5, false, basis), basis);
  const double a13 = d[12].anti_edge_weight, a14 = d[13].anti_edge_weight;
  return {a13 > 0.5 && a14 > 0.5, "anti-edge N=4: states 13,14 anti_edge_weight=" + fmt(a13) + ", " + fmt(a14)};
}

Outcome ac7() {
  const auto basis = build_basis(8);
  int violations = 0, max_gap_states = 0;
  for (double jbar : {0.1, 0.3, 0.5}) {
    for (double eps : linspace(-1, 1, 21)) {
      const auto s = chain_spectrum(8, eps, jbar, true, basis);
      const double lo_in = 1.0 - std::abs(eps) * jbar, hi_in = 1.0 + std::abs(eps) * jbar;
      int in_gap = 0;
      for (const auto& d : diagnose(s, basis)) {
        if (d.dominant_sector != 1) continue;
        const double w = d.eigenvalue;
        const bool upper = w >= hi_in - kBandTol && w <= 1.0 + jbar + kBandTol;
        const bool lower = w >= 1.0 - jbar - kBandTol && w <= lo_in + kBandTol;
        if (upper || lower) continue;
        if (eps < 0 && w > lo_in && w < hi_in) {
          ++in_gap;
        } else {
          ++violations;
        }
      }
      if (in_gap > 2) ++violations;
      max_gap_states = std::max(max_gap_states, in_gap);
      const auto report = finite_vs_continuum(s, basis, ChainSpec::from_dimerization(8, 1.0, eps, jbar, true),
                                              kBandTol);
      if (report.in_gap != in_gap || report.out_of_range != 0) ++violations;
    }
  }
  return {violations == 0, "bow tie: violations=" + std::to_string(violations) +
                               ", max in-gap per point=" + std::to_string(max_gap_states)};
}

Outcome ac8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> e(-1, 1), jb(0.01, 1.0);
  const auto basis = build_basis(8);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double eps = e(rng), jbar = jb(rng);
    const auto spec = ChainSpec::from_dimerization(8, 1.0, eps, jbar, true, Boundary::periodic);
    const auto s = diagonalize_sector(build_chain(spec, basis), basis, 1);
    std::vector<double> ref;
    for (int m = 0; m < 4; ++m) {
      const double qd = 2 * std::numbers::pi * m / 4;
      const double off = std::abs(spec.j1 + spec.j2 * std::exp(std::complex<double>(0, qd)));
      ref.push_back(1.0 - off);
      ref.push_back(1.0 + off);
    }
    std::sort(ref.begin(), ref.end());
    for (int k = 0; k < 8; ++k) worst = std::max(worst, std::abs(s.eigenvalues[k] - ref[k]));
  }
  return {worst <= kGridTol, "periodic N=8 vs w_pm(q), 4-cell grid: max mismatch=" + fmt(worst)};
}

Outcome ac9() {
  double dimer_err = 0;
  const auto b2 = build_basis(2);
  for (double j : {0.0, 0.05, 0.2, 0.5, 1.0, 2.5, 5.0}) {
    const double w4 = 1.0 + std::sqrt(1.0 + j * j);
    const auto occ = ground_state_occupancy(diagonalize(build_dimer(1.0, j, false)), b2);
    dimer_err = std::max(dimer_err, std::abs(occ.vacuum_deficit - j * j / (w4 * w4 + j * j)));
  }
  const auto basis = build_basis(8);
  const auto eps_grid = linspace(-1, 1, 21);
  const std::vector<double> jbars{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int decreases = 0;
  double lo = 1e300, hi = -1e300;
  for (double eps : eps_grid) {
    double prev = -1;
    for (double jbar : jbars) {
      const double n = ground_state_occupancy(chain_spectrum(8, eps, jbar, false, basis), basis).mean_excitations;
      if (n < prev) ++decreases;
      prev = n;
      if (jbar == 0.9) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
    }
  }
  return {dimer_err <= kDeficitTol && decreases == 0 && hi - lo > 0,
          "vacuum: dimer deficit err=" + fmt(dimer_err) + ", decreases in Jbar=" + std::to_string(decreases) +
              ", eps spread at Jbar=0.9=" + fmt(hi - lo)};
}

Outcome ac10() {
  double identity = 0, deviation = 0, prop = 0;
  for (double j : {0.1, 0.5, 1.0, 3.0}) {
    const auto grid = TimeGrid::dimer_default();
    const auto c = dimer_mean_correlations(1.0, j, grid);
    for (int i = 0; i < grid.size(); ++i) {
      const double t = grid.at(i) / j;
      const double wt = std::sqrt(1 + j * j);
      const double f = std::pow(std::cos(wt * t), 2) + std::pow(std::sin(wt * t) / wt, 2);
      identity = std::max(identity, std::abs(c.site1[i] + c.site2[i] - f));
      if (j == 0.1) {
        deviation = std::max(deviation, std::abs(c.site1[i] - std::pow(std::cos(grid.at(i)), 2)));
        deviation = std::max(deviation, std::abs(c.site2[i] - std::pow(std::sin(grid.at(i)), 2)));
      }
    }
  }
  const auto basis = build_basis(2);
  for (double j : {0.1, 0.5}) {
    const auto s = diagonalize(build_dimer(1.0, j, true));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi[1] = 1.0;  // |1,0>
    const auto grid = TimeGrid::dimer_default();
    const auto n1 = expectation_series(evolve(s, psi, grid), site_occupation(basis, 1));
    for (int i = 0; i < grid.size(); ++i) prop = std::max(prop, std::abs(n1[i] - std::pow(std::cos(grid.at(i)), 2)));
  }
  return {identity <= kIdentityTol && deviation < kWeakDeviation && prop <= kPropagatorTol,
          "dynamics: identity err=" + fmt(identity) + ", J=0.1 deviation=" + fmt(deviation) +
              ", RWA propagator err=" + fmt(prop)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

Outcome ac11() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "usctopo_acceptance";
  fs::create_directories(dir);
  bool identical = true;
  for (const std::string args : {"pr-map --n 8 --eps-grid 21", "chain-spectrum --n 4 --eps-grid 41",
                                 "occupancy --n 6 --eps-grid 11"}) {
    std::string bodies[2];
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / ("run" + std::to_string(run) + ".csv");
      const std::string cmd = std::string(USCTOPO_CLI) + " " + args + " --out " + out.string();
      if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
      bodies[run] = read_file(out);
    }
    identical = identical && !bodies[0].empty() && bodies[0] == bodies[1];
  }
  SweepPlan plan;
  plan.n_sites = 6;
  plan.axes = {{AxisKind::jbar, {0.1, 0.5, 0.9}}, {AxisKind::epsilon, linspace(-1, 1, 11)}};
  plan.outputs = {true, true, true, true, true};
  const auto serial = run_sweep(plan, SweepOptions{1});
  const auto parallel = run_sweep(plan, SweepOptions{4});
  auto sorted = [](std::vector<StateRecord> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return std::tie(a.point_index, a.state.state_index) < std::tie(b.point_index, b.state.state_index);
    });
    return v;
  };
  bool sweeps = sorted(serial.states) == sorted(parallel.states) && serial.points.size() == parallel.points.size();
  for (std::size_t i = 0; sweeps && i < serial.points.size(); ++i) {
    sweeps = serial.points[i].occupancy.mean_excitations == parallel.points[i].occupancy.mean_excitations &&
             serial.fidelity[i].map.cells == parallel.fidelity[i].map.cells;
  }
  return {identical && sweeps, std::string("determinism: CLI bodies ") + (identical ? "identical" : "differ") +
                                   ", serial/parallel sweeps " + (sweeps ? "identical" : "differ")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    std::function<Outcome()> run;
    double limit_s;
  };
  const Criterion criteria[] = {
      {"AC1", ac1, 1},  {"AC2", ac2, 10},  {"AC3", ac3, 120}, {"AC4", ac4, 10},
      {"AC5", ac5, 60}, {"AC6", ac6, 1},   {"AC7", ac7, 30},  {"AC8", ac8, 10},
      {"AC9", ac9, 120}, {"AC10", ac10, 1}, {"AC11", ac11, 60},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.limit_s;
    if (!pass) ++failed;
    std::cout << c.id << ' ' << (pass ? "PASS" : "FAIL") << ' ' << o.detail << " [" << fmt(secs) << " s / "
              << c.limit_s << " s]\n";
  }
  std::cout << (11 - failed) << "/11 criteria passed\n";
  return failed;
}
