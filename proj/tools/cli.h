#ifndef JUNCTION_TOOLS_CLI_H
#define JUNCTION_TOOLS_CLI_H

#include "junction/model.h"
#include "junction/montecarlo.h"

#include <CLI11.hpp>

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace junction::cli {

struct ScenarioFlags
{
  std::string path;
  std::optional<double> t_db, rho, rho0, lambda_x, lambda_y, lv, alpha;
  std::optional<int> n;

  void attach (CLI::App &app);
  // loads the file (or the defaults), applies overrides, validates
  ScenarioConfig build () const;
};

struct SimFlags
{
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  double window = 2000.0;
  unsigned threads = 0;

  void attach (CLI::App &app);
  SimSpec spec () const;
};

ReceiverSpec parse_receiver (const std::string &s);
std::vector<std::string> split (const std::string &s, char sep);
std::vector<std::string> parse_engines (const std::string &s);
bool has_engine (const std::vector<std::string> &engines, const std::string &name);

// start:stop:step, inclusive of stop
std::vector<double> parse_grid (const std::string &s);

std::string fmt (double v);
std::string csv_field (const std::string &s);
void csv_row (std::ostream &os, const std::vector<std::string> &fields);

struct SweepOptions
{
  std::string preset;
  std::string var;
  std::string grid;
  std::string case_label = "A";
  std::string receiver;
  std::string metric = "p";
  std::string engines = "exact,approx";
  std::string out;
};

// returns the process exit code
int run_sweep (const SweepOptions &opt, const ScenarioFlags &sf, const SimFlags &sim);

} // namespace junction::cli

#endif
