#include "junction/io.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace junction {

using nlohmann::json;

namespace {

const char *const kKeys[] = {"lambda_x", "lambda_y", "n_plus", "n_minus", "l_v",
                             "alpha",    "t_threshold", "rho", "rho_0",   "mu"};

double
number (const json &j, const char *key)
{
  const json &v = j.at (key);
  if (!v.is_number ())
    throw ValidationError (std::string ("scenario field '") + key + "' must be a number");
  return v.get<double> ();
}

int
count (const json &j, const char *key)
{
  double v = number (j, key);
  if (std::floor (v) != v)
    throw ValidationError (std::string ("scenario field '") + key + "' must be an integer");
  return static_cast<int> (v);
}

} // namespace

ScenarioConfig
parse_scenario (const std::string &text)
{
  json j;
  try
    {
      j = json::parse (text);
    }
  catch (const json::parse_error &e)
    {
      throw ValidationError (std::string ("scenario is not valid JSON: ") + e.what ());
    }
  if (!j.is_object ())
    throw ValidationError ("scenario must be a JSON object");
  for (auto it = j.begin (); it != j.end (); ++it)
    {
      bool known = false;
      for (const char *k : kKeys)
        known = known || it.key () == k;
      if (!known)
        throw ValidationError ("unknown scenario field '" + it.key () + "'");
    }

  ScenarioConfig c = default_scenario ();
  if (j.contains ("lambda_x"))
    c.lambda_x = per_km_to_per_m (number (j, "lambda_x"));
  if (j.contains ("lambda_y"))
    c.lambda_y = per_km_to_per_m (number (j, "lambda_y"));
  if (j.contains ("n_plus"))
    c.n_plus = count (j, "n_plus");
  if (j.contains ("n_minus"))
    c.n_minus = count (j, "n_minus");
  if (j.contains ("l_v"))
    c.l_v = number (j, "l_v");
  if (j.contains ("alpha"))
    c.alpha = number (j, "alpha");
  if (j.contains ("t_threshold"))
    c.t_threshold = db_to_linear (number (j, "t_threshold"));
  if (j.contains ("rho"))
    c.rho = number (j, "rho");
  if (j.contains ("rho_0"))
    c.rho_0 = number (j, "rho_0");
  if (j.contains ("mu"))
    c.mu = number (j, "mu");
  return c;
}

ScenarioConfig
load_scenario (const std::string &path)
{
  std::ifstream in (path);
  if (!in)
    throw ValidationError ("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf ();
  return parse_scenario (ss.str ());
}

std::string
scenario_to_json (const ScenarioConfig &c)
{
  json j;
  j["lambda_x"] = per_m_to_per_km (c.lambda_x);
  j["lambda_y"] = per_m_to_per_km (c.lambda_y);
  j["n_plus"] = c.n_plus;
  j["n_minus"] = c.n_minus;
  j["l_v"] = c.l_v;
  j["alpha"] = c.alpha;
  j["t_threshold"] = linear_to_db (c.t_threshold);
  j["rho"] = c.rho;
  j["rho_0"] = c.rho_0;
  j["mu"] = c.mu;
  return j.dump (2);
}

std::string
table_to_json (const RateTable &t)
{
  json j;
  j["meta"] = {{"alpha", t.alpha},
               {"t_threshold_db", t.t_threshold_db},
               {"rho_0", t.rho_0},
               {"case", std::string (1, case_char (t.case_label))},
               {"engine", engine_name (t.engine)},
               {"generated_at", t.generated_at},
               {"cell_errors", t.cell_errors}};
  j["lambda_x_grid"] = t.lambda_x_grid;
  j["lambda_y_grid"] = t.lambda_y_grid;
  json rows = json::array ();
  for (const auto &row : t.rho_star)
    {
      json r = json::array ();
      for (double v : row)
        r.push_back (std::isnan (v) ? json (nullptr) : json (v));
      rows.push_back (r);
    }
  j["rho_star"] = rows;
  return j.dump (2);
}

RateTable
table_from_json (const std::string &text)
{
  RateTable t;
  try
    {
      json j = json::parse (text);
      const json &m = j.at ("meta");
      t.alpha = m.at ("alpha").get<double> ();
      t.t_threshold_db = m.at ("t_threshold_db").get<double> ();
      t.rho_0 = m.at ("rho_0").get<double> ();
      t.case_label = parse_case (m.at ("case").get<std::string> ());
      t.engine = m.at ("engine").get<std::string> () == "exact" ? Engine::Exact : Engine::Approx;
      t.generated_at = m.at ("generated_at").get<std::string> ();
      if (m.contains ("cell_errors"))
        t.cell_errors = m.at ("cell_errors").get<std::vector<std::string>> ();
      t.lambda_x_grid = j.at ("lambda_x_grid").get<std::vector<double>> ();
      t.lambda_y_grid = j.at ("lambda_y_grid").get<std::vector<double>> ();
      for (const auto &row : j.at ("rho_star"))
        {
          std::vector<double> r;
          for (const auto &v : row)
            r.push_back (v.is_null () ? NAN : v.get<double> ());
          t.rho_star.push_back (r);
        }
    }
  catch (const json::exception &e)
    {
      throw ValidationError (std::string ("malformed rate table: ") + e.what ());
    }
  if (t.rho_star.size () != t.lambda_x_grid.size ())
    throw ValidationError ("rate table rows do not match lambda_x_grid");
  for (const auto &row : t.rho_star)
    if (row.size () != t.lambda_y_grid.size ())
      throw ValidationError ("rate table columns do not match lambda_y_grid");
  return t;
}

} // namespace junction
