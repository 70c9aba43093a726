#include "cli.h"

#include "junction/io.h"
#include "junction/optimizer.h"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace junction::cli {

void
ScenarioFlags::attach (CLI::App &app)
{
  app.add_option ("--scenario", path, "scenario JSON file (default: built-in configuration)");
  app.add_option ("--T-db", t_db, "SIR threshold [dB]");
  app.add_option ("--rho", rho, "queued-vehicle transmit probability");
  app.add_option ("--rho0", rho0, "running-vehicle transmit probability");
  app.add_option ("--lambda-x", lambda_x, "x-street intensity [1/km]");
  app.add_option ("--lambda-y", lambda_y, "y-street intensity [1/km]");
  app.add_option ("--n", n, "queue length on each side");
  app.add_option ("--lv", lv, "vehicle spacing [m]");
  app.add_option ("--alpha", alpha, "path-loss exponent");
}

ScenarioConfig
ScenarioFlags::build () const
{
  ScenarioConfig c = path.empty () ? default_scenario () : load_scenario (path);
  if (t_db)
    c.t_threshold = db_to_linear (*t_db);
  if (rho)
    c.rho = *rho;
  if (rho0)
    c.rho_0 = *rho0;
  if (lambda_x)
    c.lambda_x = per_km_to_per_m (*lambda_x);
  if (lambda_y)
    c.lambda_y = per_km_to_per_m (*lambda_y);
  if (n)
    c.n_plus = c.n_minus = *n;
  if (lv)
    c.l_v = *lv;
  if (alpha)
    c.alpha = *alpha;
  ValidationReport rep = validate (c);
  for (const auto &w : rep.warnings)
    std::cerr << "warning: " << w << "\n";
  if (!rep.ok ())
    {
      std::string msg = "invalid scenario:";
      for (const auto &e : rep.errors)
        msg += " " + e + ";";
      throw ValidationError (msg);
    }
  return c;
}

void
SimFlags::attach (CLI::App &app)
{
  app.add_option ("--trials", trials, "Monte Carlo trials")->check (CLI::PositiveNumber);
  app.add_option ("--seed", seed, "random seed");
  app.add_option ("--window", window, "simulation half-width of each street [m]")
      ->check (CLI::PositiveNumber);
  app.add_option ("--threads", threads, "simulation worker threads (0 = all cores)");
}

SimSpec
SimFlags::spec () const
{
  SimSpec s;
  s.n_trials = trials;
  s.seed = seed;
  s.window_half_width = window;
  s.threads = threads;
  return s;
}

std::vector<std::string>
split (const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is (s);
  while (std::getline (is, cur, sep))
    out.push_back (cur);
  return out;
}

namespace {

double
to_number (const std::string &s, const std::string &what)
{
  try
    {
      std::size_t used = 0;
      double v = std::stod (s, &used);
      if (used == s.size ())
        return v;
    }
  catch (const std::exception &)
    {
    }
  throw ValidationError ("cannot parse " + what + " '" + s + "'");
}

} // namespace

ReceiverSpec
parse_receiver (const std::string &s)
{
  auto colon = s.find (':');
  if (colon == std::string::npos)
    throw ValidationError ("receiver must look like queue:i, rx:r, rx-:r or ry:r");
  std::string kind = s.substr (0, colon);
  double v = to_number (s.substr (colon + 1), "receiver value");
  if (kind == "queue")
    {
      if (v != std::floor (v) || v < 1)
        throw ValidationError ("queue receiver index must be a positive integer");
      return rx::QueueVehicle{static_cast<int> (v)};
    }
  if (kind == "rx" || kind == "rx+")
    return rx::RunningX{v, Side::Positive};
  if (kind == "rx-")
    return rx::RunningX{v, Side::Negative};
  if (kind == "ry")
    return rx::RunningY{v};
  throw ValidationError ("unknown receiver kind '" + kind + "'");
}

std::vector<std::string>
parse_engines (const std::string &s)
{
  std::vector<std::string> out;
  for (auto &e : split (s, ','))
    {
      if (e != "exact" && e != "approx" && e != "sim")
        throw ValidationError ("unknown engine '" + e + "' (expected exact, approx, sim)");
      out.push_back (e);
    }
  if (out.empty ())
    throw ValidationError ("no engine selected");
  return out;
}

bool
has_engine (const std::vector<std::string> &engines, const std::string &name)
{
  std::string base = name.substr (0, name.find ('-'));
  for (const auto &e : engines)
    if (e == base)
      return true;
  return false;
}

std::vector<double>
parse_grid (const std::string &s)
{
  auto parts = split (s, ':');
  if (parts.size () != 3)
    throw ValidationError ("grid must be start:stop:step");
  return grid_range (to_number (parts[0], "grid start"), to_number (parts[1], "grid stop"),
                     to_number (parts[2], "grid step"));
}

std::string
fmt (double v)
{
  if (std::isnan (v))
    return "nan";
  char buf[32];
  std::snprintf (buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string
csv_field (const std::string &s)
{
  if (s.find_first_of (",\"\r\n") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char c : s)
    {
      if (c == '"')
        q += '"';
      q += c;
    }
  return q + "\"";
}

void
csv_row (std::ostream &os, const std::vector<std::string> &fields)
{
  for (std::size_t i = 0; i < fields.size (); ++i)
    os << (i ? "," : "") << csv_field (fields[i]);
  os << "\n";
}

} // namespace junction::cli
