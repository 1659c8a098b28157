#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "usctopo/hamiltonian.hpp"

namespace usctopo::cli {

enum class Subcommand {
  none,  // only valid together with --seed-check
  dimer_spectrum,
  dimer_dynamics,
  chain_spectrum,
  eigenstate_map,
  pr_map,
  dispersion,
  occupancy,
  sweep,
};

enum class OutputFormat { csv, json, svg };

std::string to_string(Subcommand s);
std::string to_string(OutputFormat f);

// Fully validated command line. Frequencies and couplings are in units of omega0.
struct RunConfig {
  Subcommand subcommand = Subcommand::none;
  bool seed_check = false;

  int n_sites = 4;
  double omega0 = 1.0;
  std::vector<double> jbar{0.5};
  std::vector<double> epsilon;  // explicit values; empty means use eps_grid
  int eps_grid = 201;           // uniform points on [-1, 1]
  std::optional<double> j1;
  std::optional<double> j2;
  bool rwa = false;
  Boundary boundary = Boundary::open;

  // dimer-spectrum / dimer-dynamics
  std::vector<double> j;  // explicit dimer couplings; empty means 0..j_max
  double j_max = 5.0;
  int j_grid = 201;
  double t_max = 7.0;  // in units of 1/J
  int t_points = 1000;

  // dispersion
  int q_points = 201;
  double lattice_period = 1.0;

  // sweep
  std::string plan;

  std::string out;  // empty or "-" writes the table to stdout
  OutputFormat format = OutputFormat::csv;
  double cut = 2.0;  // plot cut, units of omega0

  std::vector<double> epsilon_values() const;
  std::vector<double> dimer_couplings() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Thrown for --help (code 0) and usage/validation failures (code 2). For
// failures `message` is a JSON object {"error": ..., "messages": [...]}.
class CliExit : public std::runtime_error {
 public:
  CliExit(int code, std::string message)
      : std::runtime_error(message), code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

RunConfig parse_cli(const std::vector<std::string>& argv);
RunConfig parse_cli(int argc, const char* const* argv);

// Flags that parse back into an identical RunConfig (argv[0] excluded).
std::vector<std::string> render_flags(const RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

std::string help_text();

}  // namespace usctopo::cli
