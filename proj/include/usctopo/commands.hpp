#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "usctopo/bandtheory.hpp"
#include "usctopo/cli.hpp"
#include "usctopo/dynamics.hpp"
#include "usctopo/svg.hpp"
#include "usctopo/sweep.hpp"
#include "usctopo/table.hpp"

namespace usctopo {

// Table builders behind the CLI subcommands. All frequencies are divided by omega0.

Table dimer_spectrum_table(double omega0, const std::vector<double>& couplings, bool rwa);
Table dimer_dynamics_table(const DimerCorrelations& series);
Table dispersion_table(const Dispersion& bands, double omega0);

// Columns: epsilon, jbar, n, eigenvalue, participation_ratio, edge_weight,
// anti_edge_weight, dominant_sector, sector_fraction.
Table chain_spectrum_table(const SweepResult& result);
// Columns: epsilon, jbar, n, mask, bare_state, probability.
Table eigenstate_map_table(const SweepResult& result);
// Columns: epsilon, jbar, mean_excitations, per_site_occupancy, vacuum_deficit.
Table occupancy_table(const SweepResult& result);

// Generic sweep export: axis columns, then the requested observables.
Table sweep_state_table(const SweepResult& result);
Table sweep_point_table(const SweepResult& result);

// Single-panel and multi-panel SVG composition.
std::string compose_panels(const std::vector<std::string>& panels);

// Plot of a sweep result; throws UnplottableError when no plottable output was requested.
std::string sweep_svg(const SweepResult& result, double cut);

// Analytic dimer oracle against numerical diagonalization. Prints one line per
// check and returns true when all pass.
bool seed_check(std::ostream& log);

// Runs a parsed configuration. Returns the process exit code (0 ok, 1 runtime failure).
int run(const cli::RunConfig& config, std::ostream& out, std::ostream& err);

// Full command-line entry point: parses argv, runs, maps errors to exit codes 0/1/2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace usctopo
