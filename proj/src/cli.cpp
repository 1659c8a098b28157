#include "usctopo/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "usctopo/basis.hpp"
#include "usctopo/sweep.hpp"
#include "usctopo/table.hpp"

namespace usctopo::cli {

namespace {

enum Group : unsigned {
  kChain = 1u << 0,
  kDimer = 1u << 1,
  kDynamics = 1u << 2,
  kDispersion = 1u << 3,
  kSweep = 1u << 4,
  kOutput = 1u << 5,
};

struct CommandInfo {
  Subcommand id;
  const char* name;
  const char* description;
  unsigned groups;
};

constexpr CommandInfo kCommands[] = {
    {Subcommand::dimer_spectrum, "dimer-spectrum",
     "Dimer eigenfrequencies versus coupling J",
     kDimer | kOutput},
    {Subcommand::dimer_dynamics, "dimer-dynamics",
     "Dimer mean correlations <s_n^+><s_n> versus J t",
     kDynamics | kOutput},
    {Subcommand::chain_spectrum, "chain-spectrum",
     "Chain eigenfrequencies and per-state diagnostics versus dimerization",
     kChain | kOutput},
    {Subcommand::eigenstate_map, "eigenstate-map",
     "Bare-state probability densities of every eigenstate",
     kChain | kOutput},
    {Subcommand::pr_map, "pr-map",
     "Participation-ratio coloured spectra of the N=8 chain",
     kChain | kOutput},
    {Subcommand::dispersion, "dispersion",
     "Continuum one-excitation bands and bow-tie edges",
     kDispersion | kOutput},
    {Subcommand::occupancy, "occupancy",
     "Ground-state occupancy versus dimerization for several couplings",
     kChain | kOutput},
    {Subcommand::sweep, "sweep", "Run a JSON sweep plan (see README for the schema)",
     kSweep | kOutput},
};

const CommandInfo& info(Subcommand s) {
  for (const auto& c : kCommands) {
    if (c.id == s) return c;
  }
  throw std::logic_error("no command info");
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string error_json(const std::string& kind, const std::vector<std::string>& messages) {
  return nlohmann::json{{"error", kind}, {"messages", messages}}.dump();
}

struct Bound {
  CLI::Option* n = nullptr;
  CLI::Option* jbar = nullptr;
  CLI::Option* eps = nullptr;
  CLI::Option* eps_grid = nullptr;
  CLI::Option* j = nullptr;
  CLI::Option* j1 = nullptr;
  CLI::Option* j2 = nullptr;
  CLI::Option* format = nullptr;
};

Bound register_options(CLI::App* app, RunConfig& c, unsigned groups) {
  Bound b;
  if (groups & (kChain | kDimer | kDynamics | kDispersion)) {
    app->add_option("--omega0", c.omega0, "Bare transition frequency (sets the energy unit)");
  }
  if (groups & kChain) {
    b.n = app->add_option("--n", c.n_sites, "Chain size N");
    app->add_option("--boundary", c.boundary, "Boundary condition: open or periodic")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Boundary>{{"open", Boundary::open},
                                            {"periodic", Boundary::periodic}}));
    b.eps_grid = app->add_option("--eps-grid", c.eps_grid,
                                 "Number of uniform dimerization points on [-1, 1]");
  }
  if (groups & (kChain | kDispersion)) {
    b.jbar = app->add_option("--jbar", c.jbar, "Chain coupling Jbar = J1 + J2 (comma list)")
                 ->delimiter(',');
    b.eps = app->add_option("--eps", c.epsilon, "Dimerization (J1 - J2) / Jbar (comma list)")
                ->delimiter(',');
    b.j1 = app->add_option("--j1", c.j1, "Intra-dimer coupling (alternative to --eps/--jbar)");
    b.j2 = app->add_option("--j2", c.j2, "Inter-dimer coupling (alternative to --eps/--jbar)");
  }
  if (groups & (kChain | kDimer)) {
    app->add_flag("--rwa,!--no-rwa", c.rwa, "Drop (or keep, default) the counter-rotating terms");
  }
  if (groups & (kDimer | kDynamics)) {
    b.j = app->add_option("--j", c.j, "Dimer coupling J (comma list)")->delimiter(',');
  }
  if (groups & kDimer) {
    app->add_option("--j-max", c.j_max, "Upper end of the J grid when --j is absent");
    app->add_option("--j-grid", c.j_grid, "Number of J grid points");
  }
  if (groups & kDynamics) {
    app->add_option("--t-max", c.t_max, "End of the time grid in units of 1/J");
    app->add_option("--t-points", c.t_points, "Number of time points");
  }
  if (groups & kDispersion) {
    app->add_option("--q-points", c.q_points, "Momentum samples over q d in [-pi, pi]");
    app->add_option("--lattice-period", c.lattice_period, "Unit-cell length d");
  }
  if (groups & kSweep) {
    app->add_option("--plan", c.plan, "Sweep plan JSON file")->required();
  }
  if (groups & kOutput) {
    app->add_option("--out", c.out, "Output path (default: stdout)");
    b.format = app->add_option("--format", c.format, "csv, json or svg (default from --out)")
                   ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{
                       {"csv", OutputFormat::csv},
                       {"json", OutputFormat::json},
                       {"svg", OutputFormat::svg}}));
    app->add_option("--cut", c.cut, "Upper eigenfrequency shown in plots, units of omega0");
  }
  return b;
}

void apply_defaults(RunConfig& c, const Bound& b) {
  const auto unset = [](CLI::Option* o) { return o != nullptr && o->count() == 0; };
  switch (c.subcommand) {
    case Subcommand::pr_map:
      if (unset(b.n)) c.n_sites = 8;
      if (unset(b.jbar)) c.jbar = {0.1, 0.3, 0.5};
      break;
    case Subcommand::occupancy:
      if (unset(b.n)) c.n_sites = 8;
      if (unset(b.jbar)) c.jbar = {0.1, 0.3, 0.5, 0.7, 0.9};
      break;
    case Subcommand::eigenstate_map:
      if (unset(b.eps) && unset(b.eps_grid) && unset(b.j1)) c.epsilon = {-0.8};
      break;
    case Subcommand::dispersion:
      if (unset(b.eps) && unset(b.j1)) c.epsilon = {0.5};
      break;
    case Subcommand::dimer_dynamics:
      if (unset(b.j)) c.j = {0.5};
      break;
    default:
      break;
  }
  if (unset(b.format)) {
    const auto ext = std::filesystem::path(c.out).extension().string();
    if (ext == ".json") c.format = OutputFormat::json;
    if (ext == ".svg") c.format = OutputFormat::svg;
  }
}

std::vector<std::string> validate(const RunConfig& c, const Bound& b) {
  std::vector<std::string> errors;
  const unsigned groups = info(c.subcommand).groups;
  const auto given = [](CLI::Option* o) { return o != nullptr && o->count() > 0; };
  if (groups & (kChain | kDimer | kDynamics | kDispersion)) {
    if (!(c.omega0 > 0.0) || !std::isfinite(c.omega0)) errors.push_back("--omega0 must be positive");
  }
  if (groups & kChain) {
    if (c.n_sites < 1 || c.n_sites > kDefaultSiteCap) {
      errors.push_back("--n must lie in 1.." + std::to_string(kDefaultSiteCap));
    }
    if (c.boundary == Boundary::periodic && c.n_sites % 2 != 0) {
      errors.push_back("--boundary periodic requires an even --n");
    }
    if (given(b.eps) && given(b.eps_grid)) errors.push_back("--eps and --eps-grid are exclusive");
    if (c.eps_grid < 1) errors.push_back("--eps-grid must be at least 1");
  }
  if (groups & (kChain | kDispersion)) {
    for (double e : c.epsilon) {
      if (!(e >= -1.0 && e <= 1.0)) {
        errors.push_back("--eps value " + format_double(e) + " outside [-1, 1]");
      }
    }
    for (double v : c.jbar) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        errors.push_back("--jbar value " + format_double(v) + " must be non-negative");
      }
    }
    if (c.jbar.empty()) errors.push_back("--jbar needs at least one value");
    if (c.j1.has_value() != c.j2.has_value()) errors.push_back("--j1 and --j2 must be given together");
    if (c.j1 && (given(b.eps) || given(b.jbar) || given(b.eps_grid))) {
      errors.push_back("--j1/--j2 cannot be combined with --eps, --eps-grid or --jbar");
    }
    for (const auto& j : {c.j1, c.j2}) {
      if (j && (!(*j >= 0.0) || !std::isfinite(*j))) errors.push_back("--j1/--j2 must be non-negative");
    }
  }
  if (groups & kDispersion) {
    if (c.j1 == std::nullopt && (c.epsilon.size() != 1 || c.jbar.size() != 1)) {
      errors.push_back("dispersion takes a single --eps and --jbar (or --j1/--j2)");
    }
    if (c.q_points < 2) errors.push_back("--q-points must be at least 2");
    if (!(c.lattice_period > 0.0)) errors.push_back("--lattice-period must be positive");
  }
  if (groups & (kDimer | kDynamics)) {
    for (double j : c.j) {
      if (!(j >= 0.0) || !std::isfinite(j)) {
        errors.push_back("--j value " + format_double(j) + " must be non-negative");
      }
    }
  }
  if (groups & kDimer) {
    if (!(c.j_max >= 0.0)) errors.push_back("--j-max must be non-negative");
    if (c.j_grid < 1) errors.push_back("--j-grid must be at least 1");
  }
  if (groups & kDynamics) {
    if (c.j.size() != 1 || !(c.j.front() > 0.0)) {
      errors.push_back("dimer-dynamics needs a single positive --j (time is measured in 1/J)");
    }
    if (!(c.t_max > 0.0)) errors.push_back("--t-max must be positive");
    if (c.t_points < 2) errors.push_back("--t-points must be at least 2");
  }
  if (groups & kSweep) {
    if (!std::filesystem::exists(c.plan)) errors.push_back("--plan file not found: " + c.plan);
  }
  if (groups & kOutput) {
    if (!std::isfinite(c.cut)) errors.push_back("--cut must be finite");
    if (!c.out.empty() && c.out != "-") {
      const auto parent = std::filesystem::path(c.out).parent_path();
      if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        errors.push_back("--out directory does not exist: " + parent.string());
      }
    }
  }
  return errors;
}

}  // namespace

std::string to_string(Subcommand s) {
  if (s == Subcommand::none) return "";
  return info(s).name;
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::json:
      return "json";
    case OutputFormat::svg:
      break;
  }
  return "svg";
}

std::vector<double> RunConfig::epsilon_values() const {
  if (j1 && j2) return {ChainSpec{n_sites, omega0, *j1, *j2, rwa, boundary}.epsilon()};
  if (!epsilon.empty()) return epsilon;
  return linspace(-1.0, 1.0, eps_grid);
}

std::vector<double> RunConfig::dimer_couplings() const {
  if (!j.empty()) return j;
  return linspace(0.0, j_max, j_grid);
}

RunConfig parse_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_cli(args);
}

RunConfig parse_cli(const std::vector<std::string>& argv) {
  RunConfig config;
  CLI::App app{"usctopo: exact diagonalization of dimerized two-level-system chains with and "
               "without counter-rotating terms", "usctopo"};
  app.set_version_flag("--version", std::string(USCTOPO_VERSION));
  app.add_flag("--seed-check", config.seed_check,
               "Run the analytic dimer oracle self-test and exit");
  app.require_subcommand(0, 1);

  std::vector<std::pair<CLI::App*, Bound>> subs;
  for (const auto& cmd : kCommands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.description);
    subs.emplace_back(sub, register_options(sub, config, cmd.groups));
  }

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw CliExit(0, app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw CliExit(0, app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::CallForVersion&) {
    throw CliExit(0, std::string(USCTOPO_VERSION));
  } catch (const CLI::ParseError& e) {
    throw CliExit(2, error_json("usage", {e.what()}));
  }

  Bound bound;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i].first->parsed()) {
      config.subcommand = kCommands[i].id;
      bound = subs[i].second;
    }
  }
  if (config.subcommand == Subcommand::none) {
    if (config.seed_check) return config;
    throw CliExit(2, error_json("usage", {"a subcommand is required (see --help)"}));
  }
  apply_defaults(config, bound);
  const auto errors = validate(config, bound);
  if (!errors.empty()) throw CliExit(2, error_json("validation", errors));
  return config;
}

std::vector<std::string> render_flags(const RunConfig& c) {
  std::vector<std::string> out;
  if (c.seed_check) out.emplace_back("--seed-check");
  if (c.subcommand == Subcommand::none) return out;
  const unsigned groups = info(c.subcommand).groups;
  out.emplace_back(info(c.subcommand).name);
  // "--flag=value" keeps negative numbers from reading as flags.
  const auto add = [&](const std::string& flag, const std::string& value) {
    out.push_back(flag + "=" + value);
  };
  if (groups & (kChain | kDimer | kDynamics | kDispersion)) add("--omega0", format_double(c.omega0));
  if (groups & kChain) {
    add("--n", std::to_string(c.n_sites));
    add("--boundary", usctopo::to_string(c.boundary));
  }
  if (groups & (kChain | kDispersion)) {
    if (c.j1 && c.j2) {
      add("--j1", format_double(*c.j1));
      add("--j2", format_double(*c.j2));
    } else {
      add("--jbar", join(c.jbar));
      if (!c.epsilon.empty()) add("--eps", join(c.epsilon));
    }
  }
  if ((groups & kChain) && !c.j1 && c.epsilon.empty()) add("--eps-grid", std::to_string(c.eps_grid));
  if (groups & (kChain | kDimer)) out.emplace_back(c.rwa ? "--rwa" : "--no-rwa");
  if (groups & (kDimer | kDynamics)) {
    if (!c.j.empty()) add("--j", join(c.j));
  }
  if (groups & kDimer) {
    add("--j-max", format_double(c.j_max));
    add("--j-grid", std::to_string(c.j_grid));
  }
  if (groups & kDynamics) {
    add("--t-max", format_double(c.t_max));
    add("--t-points", std::to_string(c.t_points));
  }
  if (groups & kDispersion) {
    add("--q-points", std::to_string(c.q_points));
    add("--lattice-period", format_double(c.lattice_period));
  }
  if (groups & kSweep) add("--plan", c.plan);
  if (groups & kOutput) {
    if (!c.out.empty()) add("--out", c.out);
    add("--format", to_string(c.format));
    add("--cut", format_double(c.cut));
  }
  return out;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json doc{{"subcommand", to_string(c.subcommand)},
                     {"seed_check", c.seed_check},
                     {"n_sites", c.n_sites},
                     {"omega0", c.omega0},
                     {"jbar", c.jbar},
                     {"epsilon", c.epsilon},
                     {"eps_grid", c.eps_grid},
                     {"rwa", c.rwa},
                     {"boundary", usctopo::to_string(c.boundary)},
                     {"j", c.j},
                     {"j_max", c.j_max},
                     {"j_grid", c.j_grid},
                     {"t_max", c.t_max},
                     {"t_points", c.t_points},
                     {"q_points", c.q_points},
                     {"lattice_period", c.lattice_period},
                     {"plan", c.plan},
                     {"out", c.out},
                     {"format", to_string(c.format)},
                     {"cut", c.cut},
                     {"argv", render_flags(c)}};
  doc["j1"] = c.j1 ? nlohmann::json(*c.j1) : nlohmann::json(nullptr);
  doc["j2"] = c.j2 ? nlohmann::json(*c.j2) : nlohmann::json(nullptr);
  return doc;
}

std::string help_text() {
  try {
    parse_cli(std::vector<std::string>{"--help"});
  } catch (const CliExit& e) {
    return e.message();
  }
  return {};
}

}  // namespace usctopo::cli
