#include "usctopo/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <thread>

#include "usctopo/errors.hpp"
#include "usctopo/spectra.hpp"

namespace usctopo {

namespace {

struct PointOutcome {
  std::vector<StateRecord> states;
  std::optional<PointRecord> occupancy;
  std::optional<FidelityRecord> fidelity;
  std::optional<SweepFailure> failure;
};

PointOutcome evaluate_point(const SweepPlan& plan, std::size_t index, const GridPoint& point) {
  PointOutcome out;
  try {
    const auto spec = ChainSpec::from_dimerization(point.n_sites, plan.omega0, point.epsilon,
                                                   point.jbar, point.rwa, plan.boundary);
    const auto basis = build_basis(point.n_sites);
    const auto spectrum = diagonalize(build_chain(spec, basis));
    if (plan.outputs.eigen_resolved()) {
      for (const auto& d : diagnose(spectrum, basis)) out.states.push_back({index, point, d});
    }
    if (plan.outputs.occupancy) {
      out.occupancy = PointRecord{index, point, ground_state_occupancy(spectrum, basis)};
    }
    if (plan.outputs.fidelity) {
      out.fidelity = FidelityRecord{index, point, fidelity_map(spectrum, basis)};
    }
  } catch (const std::exception& e) {
    out.states.clear();
    out.occupancy.reset();
    out.fidelity.reset();
    out.failure = SweepFailure{index, point, e.what()};
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool operator==(const StateRecord& a, const StateRecord& b) {
  const auto& x = a.state;
  const auto& y = b.state;
  return a.point_index == b.point_index && a.point == b.point &&
         x.state_index == y.state_index && x.eigenvalue == y.eigenvalue &&
         x.participation_ratio == y.participation_ratio && x.edge_weight == y.edge_weight &&
         x.anti_edge_weight == y.anti_edge_weight && x.dominant_sector == y.dominant_sector &&
         x.sector_fraction == y.sector_fraction;
}

std::string to_string(AxisKind kind) {
  switch (kind) {
    case AxisKind::epsilon:
      return "epsilon";
    case AxisKind::jbar:
      return "jbar";
    case AxisKind::n_sites:
      return "n_sites";
    case AxisKind::rwa:
      break;
  }
  return "rwa";
}

AxisKind parse_axis_kind(const std::string& text) {
  if (text == "epsilon" || text == "eps") return AxisKind::epsilon;
  if (text == "jbar") return AxisKind::jbar;
  if (text == "n_sites" || text == "n") return AxisKind::n_sites;
  if (text == "rwa") return AxisKind::rwa;
  throw DomainError("unknown sweep axis '" + text + "'");
}

std::vector<double> linspace(double start, double stop, int n) {
  if (n < 1) throw DomainError("grid needs at least one point");
  if (n == 1) return {start};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (n - 1);
  out.back() = stop;
  return out;
}

void SweepPlan::validate() const {
  if (axes.size() > 2) throw DomainError("a sweep plan has at most 2 swept axes");
  if (site_cap < 1 || site_cap > kMaxDenseSites) {
    throw SizeError("site cap must lie in 1.." + std::to_string(kMaxDenseSites));
  }
  for (std::size_t a = 0; a < axes.size(); ++a) {
    for (std::size_t b = a + 1; b < axes.size(); ++b) {
      if (axes[a].kind == axes[b].kind) throw DomainError("axis swept twice: " + to_string(axes[a].kind));
    }
  }
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("omega0 must be positive");
  if (!(epsilon >= -1.0 && epsilon <= 1.0)) throw DomainError("epsilon outside [-1, 1]");
  if (!(jbar >= 0.0) || !std::isfinite(jbar)) throw DomainError("jbar must be non-negative");
  bool sweeps_size = false;
  int largest = 0;
  for (const auto& axis : axes) {
    for (double v : axis.values) {
      if (!std::isfinite(v)) throw DomainError("non-finite value on axis " + to_string(axis.kind));
      switch (axis.kind) {
        case AxisKind::epsilon:
          if (v < -1.0 || v > 1.0) throw DomainError("epsilon outside [-1, 1]: " + std::to_string(v));
          break;
        case AxisKind::jbar:
          if (v < 0.0) throw DomainError("negative jbar: " + std::to_string(v));
          break;
        case AxisKind::n_sites:
          if (v != std::floor(v) || v < 1) throw DomainError("n_sites must be a positive integer");
          sweeps_size = true;
          largest = std::max(largest, static_cast<int>(v));
          break;
        case AxisKind::rwa:
          if (v != 0.0 && v != 1.0) throw DomainError("rwa axis values must be 0 or 1");
          break;
      }
    }
  }
  if (!sweeps_size) largest = n_sites;
  if (largest < 1) throw SizeError("n_sites must be at least 1");
  if (largest > site_cap) {
    throw SizeError("N=" + std::to_string(largest) + " exceeds the dense cap of " +
                    std::to_string(site_cap));
  }
}

std::size_t SweepPlan::grid_size() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

std::vector<GridPoint> enumerate_grid(const SweepPlan& plan) {
  std::vector<GridPoint> out{GridPoint{plan.epsilon, plan.jbar, plan.n_sites, plan.rwa}};
  for (const auto& axis : plan.axes) {
    std::vector<GridPoint> next;
    next.reserve(out.size() * axis.values.size());
    for (const auto& base : out) {
      for (double v : axis.values) {
        GridPoint p = base;
        switch (axis.kind) {
          case AxisKind::epsilon:
            p.epsilon = v;
            break;
          case AxisKind::jbar:
            p.jbar = v;
            break;
          case AxisKind::n_sites:
            p.n_sites = static_cast<int>(v);
            break;
          case AxisKind::rwa:
            p.rwa = v != 0.0;
            break;
        }
        next.push_back(p);
      }
    }
    out = std::move(next);
  }
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("USCTOPO_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(std::min(n, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SweepPlan& plan, const SweepOptions& options) {
  plan.validate();
  const auto grid = enumerate_grid(plan);
  std::vector<PointOutcome> outcomes(grid.size());

  const int threads = std::clamp(options.threads > 0 ? options.threads : default_thread_count(), 1,
                                 static_cast<int>(std::max<std::size_t>(grid.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      outcomes[i] = evaluate_point(plan, i, grid[i]);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SweepResult result;
  result.plan = plan;
  result.metadata.model = "dimerized two-level-system chain, N=" + std::to_string(plan.n_sites) +
                          ", omega0=" + std::to_string(plan.omega0) +
                          ", boundary=" + to_string(plan.boundary);
  result.metadata.timestamp = utc_timestamp();
  result.metadata.version = USCTOPO_VERSION;
  result.metadata.tolerances = {{"hermiticity", kHermiticityTolerance},
                                {"degeneracy", kDegeneracyTolerance},
                                {"normalization", kNormalizationTolerance}};
  for (auto& o : outcomes) {
    result.states.insert(result.states.end(), std::make_move_iterator(o.states.begin()),
                         std::make_move_iterator(o.states.end()));
    if (o.occupancy) result.points.push_back(*o.occupancy);
    if (o.fidelity) result.fidelity.push_back(std::move(*o.fidelity));
    if (o.failure) result.failures.push_back(std::move(*o.failure));
  }
  return result;
}

SweepPlan plan_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DomainError("sweep plan must be a JSON object");
  SweepPlan plan;
  try {
    plan.n_sites = doc.value("n_sites", plan.n_sites);
    plan.omega0 = doc.value("omega0", plan.omega0);
    plan.epsilon = doc.value("epsilon", plan.epsilon);
    plan.jbar = doc.value("jbar", plan.jbar);
    plan.rwa = doc.value("rwa", plan.rwa);
    plan.site_cap = doc.value("site_cap", plan.site_cap);
    plan.boundary = parse_boundary(doc.value("boundary", std::string("open")));
    if (doc.contains("axes")) {
      for (const auto& a : doc.at("axes")) {
        SweepAxis axis;
        axis.kind = parse_axis_kind(a.at("name").get<std::string>());
        if (a.contains("values")) {
          axis.values = a.at("values").get<std::vector<double>>();
        } else {
          axis.values = linspace(a.at("start").get<double>(), a.at("stop").get<double>(),
                                 a.at("points").get<int>());
        }
        plan.axes.push_back(std::move(axis));
      }
    }
    if (doc.contains("outputs")) {
      plan.outputs = SweepOutputs{false, false, false, false, false};
      for (const auto& o : doc.at("outputs")) {
        const auto name = o.get<std::string>();
        if (name == "eigenvalues") plan.outputs.eigenvalues = true;
        else if (name == "pr") plan.outputs.participation = true;
        else if (name == "edge_weights") plan.outputs.edge_weights = true;
        else if (name == "occupancy") plan.outputs.occupancy = true;
        else if (name == "fidelity") plan.outputs.fidelity = true;
        else throw DomainError("unknown sweep output '" + name + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed sweep plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

nlohmann::json plan_to_json(const SweepPlan& plan) {
  nlohmann::json doc{{"n_sites", plan.n_sites},   {"omega0", plan.omega0},
                     {"epsilon", plan.epsilon},   {"jbar", plan.jbar},
                     {"rwa", plan.rwa},           {"boundary", to_string(plan.boundary)},
                     {"site_cap", plan.site_cap}};
  doc["axes"] = nlohmann::json::array();
  for (const auto& axis : plan.axes) {
    doc["axes"].push_back({{"name", to_string(axis.kind)}, {"values", axis.values}});
  }
  auto outputs = nlohmann::json::array();
  if (plan.outputs.eigenvalues) outputs.push_back("eigenvalues");
  if (plan.outputs.participation) outputs.push_back("pr");
  if (plan.outputs.edge_weights) outputs.push_back("edge_weights");
  if (plan.outputs.occupancy) outputs.push_back("occupancy");
  if (plan.outputs.fidelity) outputs.push_back("fidelity");
  doc["outputs"] = outputs;
  return doc;
}

}  // namespace usctopo
