#include "usctopo/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "usctopo/errors.hpp"
#include "usctopo/spectra.hpp"

namespace usctopo {

namespace {

using cli::OutputFormat;
using cli::RunConfig;
using cli::Subcommand;

const char* const kSectorColors[] = {"#222222", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                     "#1f77b4", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
                                     "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39"};

std::string sector_color(int sector) {
  constexpr int n = sizeof(kSectorColors) / sizeof(kSectorColors[0]);
  return kSectorColors[std::clamp(sector, 0, n - 1)];
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Short form for titles and legends; tables keep full precision.
std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string ket(Mask mask, int n_sites) { return "|" + bare_state_label(mask, n_sites) + ">"; }

SweepPlan chain_plan(const RunConfig& c) {
  SweepPlan plan;
  plan.n_sites = c.n_sites;
  plan.omega0 = c.omega0;
  plan.rwa = c.rwa;
  plan.boundary = c.boundary;
  if (c.j1 && c.j2) {
    const ChainSpec spec{c.n_sites, c.omega0, *c.j1, *c.j2, c.rwa, c.boundary};
    plan.epsilon = spec.epsilon();
    plan.jbar = spec.jbar();
  } else {
    plan.axes.push_back({AxisKind::jbar, c.jbar});
    plan.axes.push_back({AxisKind::epsilon, c.epsilon_values()});
  }
  plan.outputs = SweepOutputs{true, true, true, false, false};
  return plan;
}

void throw_on_failures(const SweepResult& result) {
  if (result.failures.empty()) return;
  const auto& f = result.failures.front();
  throw Error(std::to_string(result.failures.size()) + " grid point(s) failed; first at eps=" +
              format_double(f.point.epsilon) + ", jbar=" + format_double(f.point.jbar) + ": " +
              f.message);
}

nlohmann::json failures_json(const SweepResult& result) {
  auto arr = nlohmann::json::array();
  for (const auto& f : result.failures) {
    arr.push_back({{"point_index", f.point_index},
                   {"epsilon", f.point.epsilon},
                   {"jbar", f.point.jbar},
                   {"n_sites", f.point.n_sites},
                   {"rwa", f.point.rwa},
                   {"message", f.message}});
  }
  return arr;
}

struct Output {
  Table table;
  std::string svg;  // empty when the subcommand has no plot
  nlohmann::json extra = nlohmann::json::object();
};

void emit(const Output& o, const RunConfig& c, std::ostream& out) {
  nlohmann::json meta{{"config", cli::config_to_json(c)},
                      {"library", "usctopo"},
                      {"version", USCTOPO_VERSION},
                      {"generated_utc", utc_now()},
                      {"columns", o.table.columns},
                      {"row_count", o.table.rows.size()}};
  for (const auto& [k, v] : o.extra.items()) meta[k] = v;
  const bool to_stdout = c.out.empty() || c.out == "-";
  switch (c.format) {
    case OutputFormat::csv:
      if (to_stdout) {
        out << to_csv(o.table);
      } else {
        emit_csv(o.table, c.out, meta);
      }
      break;
    case OutputFormat::json:
      if (to_stdout) {
        out << to_json_records(o.table).dump(1) << '\n';
      } else {
        emit_json(o.table, c.out, meta);
      }
      break;
    case OutputFormat::svg:
      if (o.svg.empty()) throw UnplottableError("subcommand has no plot form");
      if (to_stdout) {
        out << o.svg;
      } else {
        write_text_file(c.out, o.svg);
      }
      break;
  }
}

Output run_dimer_spectrum(const RunConfig& c) {
  Output o;
  const auto couplings = c.dimer_couplings();
  o.table = dimer_spectrum_table(c.omega0, couplings, c.rwa);
  std::array<svg::LineSeries, 4> curves;
  for (int n = 0; n < 4; ++n) {
    curves[n].color = sector_color(n == 0 ? 0 : (n == 3 ? 2 : 1));
    curves[n].label = "n=" + std::to_string(n + 1);
  }
  for (std::size_t r = 0; r < o.table.rows.size(); ++r) {
    const auto n = static_cast<std::size_t>(o.table.number(r, "n")) - 1;
    curves[n].x.push_back(o.table.number(r, "j"));
    curves[n].y.push_back(o.table.number(r, "eigenvalue"));
  }
  svg::LinePlot plot;
  plot.title = std::string("Dimer eigenfrequencies") + (c.rwa ? " (RWA)" : "");
  plot.x_label = "J / omega0";
  plot.y_label = "omega / omega0";
  const double x_hi = couplings.empty() ? 1.0 : *std::max_element(couplings.begin(), couplings.end()) / c.omega0;
  for (double level : {0.0, 1.0, 2.0}) {
    plot.lines.push_back({{0.0, x_hi}, {level, level}, "#999999", 1.0, true, ""});
  }
  plot.lines.insert(plot.lines.end(), curves.begin(), curves.end());
  o.svg = svg::render(plot);
  return o;
}

Output run_dimer_dynamics(const RunConfig& c) {
  Output o;
  const TimeGrid grid(0.0, c.t_max, c.t_points, TimeUnit::inverse_coupling);
  const auto series = dimer_mean_correlations(c.omega0, c.j.front(), grid);
  o.table = dimer_dynamics_table(series);
  svg::LinePlot plot;
  plot.title = "Dimer mean correlations, J / omega0 = " + label(c.j.front() / c.omega0);
  plot.x_label = "J t";
  plot.y_label = "<sigma_n^+><sigma_n>";
  plot.lines.push_back({series.time, series.site1, "#ff7f0e", 1.5, false, "n=1"});
  plot.lines.push_back({series.time, series.site2, "#2ca02c", 1.5, false, "n=2"});
  o.svg = svg::render(plot);
  return o;
}

Output run_chain_spectrum(const RunConfig& c) {
  Output o;
  const auto result = run_sweep(chain_plan(c));
  throw_on_failures(result);
  o.table = chain_spectrum_table(result);
  std::vector<std::string> panels;
  for (double jbar : result.plan.axes.empty() ? std::vector<double>{result.plan.jbar}
                                              : result.plan.axes.front().values) {
    std::map<int, svg::LineSeries> lines;
    for (const auto& r : result.states) {
      if (r.point.jbar != jbar) continue;
      auto& line = lines[r.state.state_index];
      line.x.push_back(r.point.epsilon);
      line.y.push_back(r.state.eigenvalue / c.omega0);
      line.color = sector_color(r.state.dominant_sector);
      line.width = 1.2;
    }
    svg::LinePlot plot;
    plot.title = "N=" + std::to_string(c.n_sites) + ", Jbar / omega0 = " +
                 label(jbar / c.omega0) + (c.rwa ? " (RWA)" : "");
    plot.x_label = "epsilon";
    plot.y_label = "omega / omega0";
    for (auto& [n, line] : lines) plot.lines.push_back(std::move(line));
    panels.push_back(svg::render(plot));
  }
  o.svg = compose_panels(panels);
  return o;
}

Output run_pr_map(const RunConfig& c) {
  Output o;
  const auto result = run_sweep(chain_plan(c));
  throw_on_failures(result);
  o.table = chain_spectrum_table(result);
  const double max_pr = std::pow(2.0, c.n_sites);
  std::vector<std::string> panels;
  for (double jbar : result.plan.axes.empty() ? std::vector<double>{result.plan.jbar}
                                              : result.plan.axes.front().values) {
    svg::ColoredPoints pts;
    for (const auto& r : result.states) {
      if (r.point.jbar != jbar) continue;
      pts.x.push_back(r.point.epsilon);
      pts.y.push_back(r.state.eigenvalue / c.omega0);
      pts.value.push_back(r.state.participation_ratio);
    }
    svg::LinePlot plot;
    plot.title = "N=" + std::to_string(c.n_sites) + ", Jbar / omega0 = " +
                 label(jbar / c.omega0) + (c.rwa ? " (RWA)" : "");
    plot.x_label = "epsilon";
    plot.y_label = "omega / omega0";
    plot.points.push_back(std::move(pts));
    plot.y_window = std::pair{-1e300, c.cut};
    plot.color_range = std::pair{1.0, std::min(max_pr, 2.0 * c.n_sites)};
    plot.color_label = "PR(n)";
    panels.push_back(svg::render(plot));
  }
  o.svg = compose_panels(panels);
  return o;
}

Output run_eigenstate_map(const RunConfig& c) {
  Output o;
  SweepPlan plan = chain_plan(c);
  plan.outputs = SweepOutputs{false, false, false, false, true};
  const auto result = run_sweep(plan);
  throw_on_failures(result);
  o.table = eigenstate_map_table(result);
  std::vector<std::string> panels;
  // One heatmap per (jbar, eps) point, capped to keep the file readable.
  for (std::size_t i = 0; i < result.fidelity.size() && i < 4; ++i) {
    const auto& rec = result.fidelity[i];
    svg::Heatmap map;
    map.title = "Eigenstate densities, eps = " + label(rec.point.epsilon) +
                ", Jbar / omega0 = " + label(rec.point.jbar / c.omega0);
    map.x_label = "eigenstate n (ascending energy)";
    map.y_label = "bare state";
    for (Mask m : rec.map.rows) map.row_labels.push_back(ket(m, rec.map.n_sites));
    for (Eigen::Index n = 1; n <= rec.map.cells.cols(); ++n) map.col_labels.push_back(std::to_string(n));
    map.values = rec.map.cells;
    map.color_label = "|<bare|psi_n>|^2";
    panels.push_back(svg::render(map));
  }
  o.svg = compose_panels(panels);
  return o;
}

Output run_dispersion(const RunConfig& c) {
  Output o;
  DispersionSpec spec;
  spec.omega0 = c.omega0;
  spec.lattice_period = c.lattice_period;
  spec.n_momentum_points = c.q_points;
  double eps, jbar;
  if (c.j1 && c.j2) {
    spec.j1 = *c.j1;
    spec.j2 = *c.j2;
    eps = ChainSpec{2, c.omega0, spec.j1, spec.j2, true, Boundary::open}.epsilon();
    jbar = spec.j1 + spec.j2;
  } else {
    eps = c.epsilon.front();
    jbar = c.jbar.front();
    const auto chain = ChainSpec::from_dimerization(2, c.omega0, eps, jbar, true);
    spec.j1 = chain.j1;
    spec.j2 = chain.j2;
  }
  const auto bands = dispersion(spec);
  o.table = dispersion_table(bands, c.omega0);
  const auto edges = bowtie_boundaries(eps, jbar, c.omega0);
  o.extra["bowtie"] = edges.as_array();
  svg::LinePlot plot;
  plot.title = "One-excitation bands, eps = " + label(eps) +
               ", Jbar / omega0 = " + label(jbar / c.omega0);
  plot.x_label = "q d";
  plot.y_label = "omega / omega0";
  for (double e : edges.as_array()) {
    plot.lines.push_back({{bands.qd.front(), bands.qd.back()}, {e / c.omega0, e / c.omega0},
                          "#999999", 1.0, true, ""});
  }
  std::vector<double> lo, hi;
  for (std::size_t i = 0; i < bands.qd.size(); ++i) {
    lo.push_back(bands.lower[i] / c.omega0);
    hi.push_back(bands.upper[i] / c.omega0);
  }
  plot.lines.push_back({bands.qd, hi, "#d62728", 1.8, false, "upper"});
  plot.lines.push_back({bands.qd, lo, "#1f77b4", 1.8, false, "lower"});
  o.svg = svg::render(plot);
  return o;
}

Output run_occupancy(const RunConfig& c) {
  Output o;
  SweepPlan plan = chain_plan(c);
  plan.outputs = SweepOutputs{false, false, false, true, false};
  const auto result = run_sweep(plan);
  throw_on_failures(result);
  o.table = occupancy_table(result);
  svg::LinePlot plot;
  plot.title = "Ground-state occupancy, N=" + std::to_string(c.n_sites) + (c.rwa ? " (RWA)" : "");
  plot.x_label = "epsilon";
  plot.y_label = "<N> / N";
  const auto& jbars = plan.axes.empty() ? std::vector<double>{plan.jbar} : plan.axes.front().values;
  for (std::size_t k = 0; k < jbars.size(); ++k) {
    svg::LineSeries line;
    line.color = "#d62728";
    line.width = 0.8 + 2.4 * static_cast<double>(k + 1) / static_cast<double>(jbars.size());
    line.label = "Jbar=" + label(jbars[k] / c.omega0);
    for (const auto& p : result.points) {
      if (p.point.jbar != jbars[k]) continue;
      line.x.push_back(p.point.epsilon);
      line.y.push_back(p.occupancy.per_site());
    }
    plot.lines.push_back(std::move(line));
  }
  o.svg = svg::render(plot);
  return o;
}

std::filesystem::path suffixed(const std::string& out, const std::string& tag) {
  std::filesystem::path p(out);
  return p.parent_path() / (p.stem().string() + "." + tag + p.extension().string());
}

int run_sweep_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::ifstream is(c.plan);
  if (!is) throw IoError("cannot open plan file " + c.plan);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("plan file is not valid JSON: ") + e.what());
  }
  const auto plan = plan_from_json(doc);
  const auto result = run_sweep(plan);

  Output o;
  o.extra["plan"] = plan_to_json(plan);
  o.extra["failures"] = failures_json(result);
  o.extra["sweep_model"] = result.metadata.model;
  o.extra["tolerances"] = result.metadata.tolerances;
  o.table = plan.outputs.eigen_resolved() ? sweep_state_table(result) : sweep_point_table(result);
  if (c.format == OutputFormat::svg) o.svg = sweep_svg(result, c.cut);
  emit(o, c, out);

  const bool to_file = !c.out.empty() && c.out != "-";
  if (to_file && plan.outputs.eigen_resolved() && plan.outputs.occupancy &&
      c.format != OutputFormat::svg) {
    Output occ{sweep_point_table(result), {}, o.extra};
    RunConfig side = c;
    side.out = suffixed(c.out, "occupancy").string();
    emit(occ, side, out);
  }
  if (to_file && plan.outputs.fidelity && c.format != OutputFormat::svg) {
    Output fid{eigenstate_map_table(result), {}, o.extra};
    RunConfig side = c;
    side.out = suffixed(c.out, "fidelity").string();
    emit(fid, side, out);
  }
  for (const auto& f : result.failures) {
    err << nlohmann::json{{"error", "grid_point"},
                          {"point_index", f.point_index},
                          {"epsilon", f.point.epsilon},
                          {"jbar", f.point.jbar},
                          {"n_sites", f.point.n_sites},
                          {"message", f.message}}
               .dump()
        << '\n';
  }
  return result.failures.empty() ? 0 : 1;
}

}  // namespace

Table dimer_spectrum_table(double omega0, const std::vector<double>& couplings, bool rwa) {
  Table t;
  t.columns = {"j", "n", "eigenvalue"};
  for (double j : couplings) {
    const auto spectrum = diagonalize(build_dimer(omega0, j, rwa));
    for (Eigen::Index k = 0; k < spectrum.dim(); ++k) {
      t.add_row({j / omega0, static_cast<std::int64_t>(k + 1), spectrum.eigenvalues[k] / omega0});
    }
  }
  return t;
}

Table dimer_dynamics_table(const DimerCorrelations& series) {
  Table t;
  t.columns = {series.unit == TimeUnit::inverse_coupling ? "jt" : "omega0_t", "site1", "site2"};
  for (std::size_t i = 0; i < series.time.size(); ++i) {
    t.add_row({series.time[i], series.site1[i], series.site2[i]});
  }
  return t;
}

Table dispersion_table(const Dispersion& bands, double omega0) {
  Table t;
  t.columns = {"qd", "q", "lower", "upper"};
  for (std::size_t i = 0; i < bands.qd.size(); ++i) {
    t.add_row({bands.qd[i], bands.q[i], bands.lower[i] / omega0, bands.upper[i] / omega0});
  }
  return t;
}

Table chain_spectrum_table(const SweepResult& result) {
  const double w0 = result.plan.omega0;
  Table t;
  t.columns = {"epsilon",          "jbar",           "n",
               "eigenvalue",       "participation_ratio", "edge_weight",
               "anti_edge_weight", "dominant_sector", "sector_fraction"};
  for (const auto& r : result.states) {
    const auto& s = r.state;
    t.add_row({r.point.epsilon, r.point.jbar / w0, static_cast<std::int64_t>(s.state_index),
               s.eigenvalue / w0, s.participation_ratio, s.edge_weight, s.anti_edge_weight,
               static_cast<std::int64_t>(s.dominant_sector), s.sector_fraction});
  }
  return t;
}

Table eigenstate_map_table(const SweepResult& result) {
  const double w0 = result.plan.omega0;
  Table t;
  t.columns = {"epsilon", "jbar", "n", "mask", "bare_state", "probability"};
  for (const auto& rec : result.fidelity) {
    for (Eigen::Index col = 0; col < rec.map.cells.cols(); ++col) {
      for (std::size_t row = 0; row < rec.map.rows.size(); ++row) {
        const Mask m = rec.map.rows[row];
        t.add_row({rec.point.epsilon, rec.point.jbar / w0, static_cast<std::int64_t>(col + 1),
                   static_cast<std::int64_t>(m), bare_state_label(m, rec.map.n_sites),
                   rec.map.cells(static_cast<Eigen::Index>(row), col)});
      }
    }
  }
  return t;
}

Table occupancy_table(const SweepResult& result) {
  const double w0 = result.plan.omega0;
  Table t;
  t.columns = {"epsilon", "jbar", "mean_excitations", "per_site_occupancy", "vacuum_deficit"};
  for (const auto& p : result.points) {
    t.add_row({p.point.epsilon, p.point.jbar / w0, p.occupancy.mean_excitations,
               p.occupancy.per_site(), p.occupancy.vacuum_deficit});
  }
  return t;
}

Table sweep_state_table(const SweepResult& result) {
  const double w0 = result.plan.omega0;
  const auto& out = result.plan.outputs;
  Table t;
  t.columns = {"epsilon", "jbar", "n_sites", "rwa", "n", "eigenvalue"};
  if (out.participation) t.columns.push_back("participation_ratio");
  if (out.edge_weights) {
    t.columns.push_back("edge_weight");
    t.columns.push_back("anti_edge_weight");
  }
  t.columns.push_back("dominant_sector");
  t.columns.push_back("sector_fraction");
  for (const auto& r : result.states) {
    const auto& s = r.state;
    std::vector<Cell> row{r.point.epsilon,
                          r.point.jbar / w0,
                          static_cast<std::int64_t>(r.point.n_sites),
                          static_cast<std::int64_t>(r.point.rwa ? 1 : 0),
                          static_cast<std::int64_t>(s.state_index),
                          s.eigenvalue / w0};
    if (out.participation) row.emplace_back(s.participation_ratio);
    if (out.edge_weights) {
      row.emplace_back(s.edge_weight);
      row.emplace_back(s.anti_edge_weight);
    }
    row.emplace_back(static_cast<std::int64_t>(s.dominant_sector));
    row.emplace_back(s.sector_fraction);
    t.add_row(std::move(row));
  }
  return t;
}

Table sweep_point_table(const SweepResult& result) {
  const double w0 = result.plan.omega0;
  Table t;
  t.columns = {"epsilon", "jbar", "n_sites", "rwa", "mean_excitations", "per_site_occupancy",
               "vacuum_deficit"};
  for (const auto& p : result.points) {
    t.add_row({p.point.epsilon, p.point.jbar / w0, static_cast<std::int64_t>(p.point.n_sites),
               static_cast<std::int64_t>(p.point.rwa ? 1 : 0), p.occupancy.mean_excitations,
               p.occupancy.per_site(), p.occupancy.vacuum_deficit});
  }
  return t;
}

std::string compose_panels(const std::vector<std::string>& panels) {
  if (panels.empty()) throw UnplottableError("nothing to plot");
  if (panels.size() == 1) return panels.front();
  constexpr int kPanelWidth = 720;
  constexpr int kPanelHeight = 480;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << kPanelWidth * panels.size() << "\" height=\"" << kPanelHeight << "\">\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    std::string body = panels[i];
    const auto decl = body.find("?>");
    if (decl != std::string::npos) body = body.substr(decl + 3);
    // Re-anchor the nested panel and keep its clip path id unique.
    const auto pos = body.find("<svg ");
    body.insert(pos + 5, "x=\"" + std::to_string(kPanelWidth * i) + "\" ");
    const std::string id = "plot" + std::to_string(i);
    for (std::size_t p = body.find("id=\"plot\""); p != std::string::npos; p = body.find("id=\"plot\"", p)) {
      body.replace(p, 9, "id=\"" + id + "\"");
    }
    for (std::size_t p = body.find("url(#plot)"); p != std::string::npos; p = body.find("url(#plot)", p)) {
      body.replace(p, 10, "url(#" + id + ")");
    }
    os << body;
  }
  os << "</svg>\n";
  return os.str();
}

std::string sweep_svg(const SweepResult& result, double cut) {
  const auto& plan = result.plan;
  const auto& out = plan.outputs;
  if (!out.eigen_resolved() && !out.occupancy) {
    throw UnplottableError("sweep requested no eigenvalue or occupancy output to plot");
  }
  const AxisKind x_axis = plan.axes.empty() ? AxisKind::epsilon : plan.axes.back().kind;
  const auto coordinate = [&](const GridPoint& p) {
    switch (x_axis) {
      case AxisKind::epsilon:
        return p.epsilon;
      case AxisKind::jbar:
        return p.jbar / plan.omega0;
      case AxisKind::n_sites:
        return static_cast<double>(p.n_sites);
      case AxisKind::rwa:
        break;
    }
    return p.rwa ? 1.0 : 0.0;
  };
  svg::LinePlot plot;
  plot.title = result.metadata.model;
  plot.x_label = to_string(x_axis);
  if (out.eigen_resolved()) {
    plot.y_label = "omega / omega0";
    plot.y_window = std::pair{-1e300, cut};
    svg::ColoredPoints pts;
    double max_pr = 1.0;
    for (const auto& r : result.states) {
      pts.x.push_back(coordinate(r.point));
      pts.y.push_back(r.state.eigenvalue / plan.omega0);
      pts.value.push_back(out.participation ? r.state.participation_ratio : r.state.dominant_sector);
      max_pr = std::max(max_pr, pts.value.back());
    }
    plot.points.push_back(std::move(pts));
    plot.color_range = std::pair{out.participation ? 1.0 : 0.0, max_pr};
    plot.color_label = out.participation ? "PR(n)" : "dominant sector";
  } else {
    plot.y_label = "<N> / N";
    svg::LineSeries line;
    line.color = "#d62728";
    for (const auto& p : result.points) {
      line.x.push_back(coordinate(p.point));
      line.y.push_back(p.occupancy.per_site());
    }
    plot.lines.push_back(std::move(line));
  }
  return svg::render(plot);
}

bool seed_check(std::ostream& log) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> omega_dist(0.2, 5.0);
  std::uniform_real_distribution<double> ratio_dist(0.0, 5.0);
  double worst_value = 0.0, worst_vector = 0.0, worst_chain = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double omega0 = omega_dist(rng);
    const double j = ratio_dist(rng) * omega0;
    const auto numeric = diagonalize(build_dimer(omega0, j, false));
    const auto exact = dimer_exact(omega0, j);
    for (int k = 0; k < 4; ++k) {
      worst_value = std::max(worst_value, std::abs(numeric.eigenvalues[k] - exact.frequencies[k]));
      const double overlap = std::abs(numeric.eigenvectors.col(k).dot(exact.states.col(k)));
      worst_vector = std::max(worst_vector, std::abs(1.0 - overlap));
    }
    const auto basis = build_basis(2);
    const auto chain = build_chain(ChainSpec::from_couplings(2, omega0, j, 0.0, false), basis);
    worst_chain = std::max(worst_chain,
                           (chain.matrix() - build_dimer(omega0, j, false).matrix()).cwiseAbs().maxCoeff());
  }
  const bool values_ok = worst_value <= 1e-12;
  const bool vectors_ok = worst_vector <= 1e-10;
  const bool chain_ok = worst_chain == 0.0;
  log << (values_ok ? "PASS" : "FAIL") << " dimer eigenvalues vs closed form, max |dw| = "
      << format_double(worst_value) << '\n'
      << (vectors_ok ? "PASS" : "FAIL") << " dimer eigenvectors vs closed form, max 1-|<a|b>| = "
      << format_double(worst_vector) << '\n'
      << (chain_ok ? "PASS" : "FAIL") << " N=2 chain assembly equals dimer matrix\n";
  return values_ok && vectors_ok && chain_ok;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.seed_check) {
    const bool ok = seed_check(err);
    if (!ok || c.subcommand == Subcommand::none) return ok ? 0 : 1;
  }
  switch (c.subcommand) {
    case Subcommand::dimer_spectrum:
      emit(run_dimer_spectrum(c), c, out);
      return 0;
    case Subcommand::dimer_dynamics:
      emit(run_dimer_dynamics(c), c, out);
      return 0;
    case Subcommand::chain_spectrum:
      emit(run_chain_spectrum(c), c, out);
      return 0;
    case Subcommand::eigenstate_map:
      emit(run_eigenstate_map(c), c, out);
      return 0;
    case Subcommand::pr_map:
      emit(run_pr_map(c), c, out);
      return 0;
    case Subcommand::dispersion:
      emit(run_dispersion(c), c, out);
      return 0;
    case Subcommand::occupancy:
      emit(run_occupancy(c), c, out);
      return 0;
    case Subcommand::sweep:
      return run_sweep_command(c, out, err);
    case Subcommand::none:
      break;
  }
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  cli::RunConfig config;
  try {
    config = cli::parse_cli(argc, argv);
  } catch (const cli::CliExit& e) {
    (e.code() == 0 ? out : err) << e.message() << (e.message().ends_with('\n') ? "" : "\n");
    return e.code();
  }
  try {
    return run(config, out, err);
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "runtime"}, {"messages", {e.what()}}}.dump() << '\n';
    return 1;
  }
}

}  // namespace usctopo
