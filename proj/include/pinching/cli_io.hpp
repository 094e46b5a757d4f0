// SPDX-License-Identifier: Apache-2.0
//
// Run configuration, CSV output and the command-line front end.
//
// Config files are flat JSON objects. Keys (all optional):
//   f_c, n_eff, d, L, D_x, D_y, N, K, p_max_dbm, p_f_dbm, sigma2_dbm, R_min,
//   delta_min, schemes, axis, values, n_trials, master_seed, policy, output
// L defaults to D_x and delta_min to lambda / 2. `values` is either a JSON
// array of numbers or a grid string (see parse_grid). Unknown keys are errors.
//
// Sweep CSV schema (UTF-8, LF line endings, 9 significant digits):
//   axis,value,scheme,mean_ee,stderr_ee,feasibility_rate,n_trials,seed
// mean_ee is left empty when no trial was averaged.

#pragma once

#include "pinching/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pinching
{

// Config parse/validation failure; the message names the offending key.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// File could not be read or written.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    double f_c = 28e9;
    double n_eff = 1.4;
    double d = 3.0;
    std::optional<double> L; // defaults to D_x
    double D_x = 60.0;
    double D_y = 20.0;
    std::size_t N = 4;
    std::size_t K = 5;
    double p_max_dbm = 15.0;
    double p_f_dbm = 15.0;
    double sigma2_dbm = -90.0;
    double R_min = 0.5;
    std::optional<double> delta_min; // defaults to lambda / 2

    std::vector<Scheme> schemes{all_schemes.begin(), all_schemes.end()};
    std::optional<SweepAxis> axis;
    std::vector<double> values;
    std::size_t n_trials = 10000;
    std::uint64_t master_seed = 1;
    AccountingPolicy policy = AccountingPolicy::exclude_infeasible;
    std::string output;

    // Linear-unit parameters; throws ConfigError naming the offending key.
    SystemParams system_params() const;
};

RunConfig parse_config(std::string_view json_text);
// Throws IoError if unreadable, ConfigError if invalid.
RunConfig load_config(const std::filesystem::path &path);

// "start:step:stop" (stop included when a step lands on it), a comma list,
// or a single number. Throws ConfigError on malformed input.
std::vector<double> parse_grid(std::string_view text);

std::string format_csv(const SweepResult &sweep);
void write_csv(const SweepResult &sweep, const std::filesystem::path &path);

struct CsvRow
{
    std::string axis;
    double value = 0.0;
    std::string scheme;
    std::optional<double> mean_ee;
    double stderr_ee = 0.0;
    double feasibility_rate = 0.0;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
};

// Parses a sweep CSV. Throws IoError if unreadable, ConfigError naming the
// file if the header or a row is malformed or there are no rows.
std::vector<CsvRow> read_csv(const std::filesystem::path &path);

// Default grids of the three reference sweeps written by `figures`.
struct FigureSweep
{
    std::string file;
    SweepAxis axis;
    std::vector<double> values;
};
std::vector<FigureSweep> figure_sweeps();

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 1,
    exit_infeasible = 2,
    exit_io = 3
};

// Subcommands: solve, sweep, figures. Returns one of ExitCode.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace pinching
