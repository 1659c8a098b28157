#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "usctopo/hamiltonian.hpp"
#include "usctopo/observables.hpp"

namespace usctopo {

enum class AxisKind { epsilon, jbar, n_sites, rwa };

std::string to_string(AxisKind kind);
AxisKind parse_axis_kind(const std::string& text);

struct SweepAxis {
  AxisKind kind = AxisKind::epsilon;
  std::vector<double> values;
};

struct SweepOutputs {
  bool eigenvalues = true;
  bool participation = false;
  bool edge_weights = false;
  bool occupancy = false;
  bool fidelity = false;

  bool eigen_resolved() const { return eigenvalues || participation || edge_weights; }
};

// Fixed model parameters plus up to two swept axes. Axis values override the
// corresponding template field; epsilon and jbar are combined through
// j1 = (1 + eps) jbar / 2, j2 = (1 - eps) jbar / 2.
struct SweepPlan {
  int n_sites = 4;
  double omega0 = 1.0;
  double epsilon = 0.0;
  double jbar = 0.5;
  bool rwa = false;
  Boundary boundary = Boundary::open;
  std::vector<SweepAxis> axes;
  SweepOutputs outputs;
  int site_cap = kDefaultSiteCap;

  void validate() const;
  std::size_t grid_size() const;
};

struct GridPoint {
  double epsilon = 0.0;
  double jbar = 0.0;
  int n_sites = 0;
  bool rwa = false;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct StateRecord {
  std::size_t point_index = 0;
  GridPoint point;
  StateDiagnostics state;

  friend bool operator==(const StateRecord& a, const StateRecord& b);
};

struct PointRecord {
  std::size_t point_index = 0;
  GridPoint point;
  GroundStateOccupancy occupancy;
};

struct FidelityRecord {
  std::size_t point_index = 0;
  GridPoint point;
  FidelityMap map;
};

struct SweepFailure {
  std::size_t point_index = 0;
  GridPoint point;
  std::string message;
};

struct SweepMetadata {
  std::string model;
  std::string timestamp;
  std::string version;
  std::map<std::string, double> tolerances;
};

struct SweepResult {
  SweepPlan plan;
  SweepMetadata metadata;
  std::vector<StateRecord> states;  // axes outer-to-inner, then state index
  std::vector<PointRecord> points;
  std::vector<FidelityRecord> fidelity;
  std::vector<SweepFailure> failures;
};

struct SweepOptions {
  // 0 selects USCTOPO_THREADS or the logical CPU count.
  int threads = 0;
};

// Worker count from USCTOPO_THREADS, else the logical CPU count (at least 1).
int default_thread_count();

// Grid points in canonical order (first axis outermost).
std::vector<GridPoint> enumerate_grid(const SweepPlan& plan);

// Builds, diagonalizes and evaluates every grid point. A failing point is
// recorded in `failures` and never aborts the rest of the grid.
SweepResult run_sweep(const SweepPlan& plan, const SweepOptions& options = {});

// n evenly spaced values with both endpoints exact.
std::vector<double> linspace(double start, double stop, int n);

// Plan files are JSON:
//   {"n_sites": 8, "omega0": 1, "epsilon": 0, "jbar": 0.5, "rwa": false,
//    "boundary": "open", "site_cap": 12,
//    "axes": [{"name": "epsilon", "start": -1, "stop": 1, "points": 201},
//             {"name": "jbar", "values": [0.1, 0.3, 0.5]}],
//    "outputs": ["eigenvalues", "pr", "edge_weights", "occupancy", "fidelity"]}
SweepPlan plan_from_json(const nlohmann::json& doc);
nlohmann::json plan_to_json(const SweepPlan& plan);

}  // namespace usctopo
