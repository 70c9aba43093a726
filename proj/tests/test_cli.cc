#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run
{
  int code;
  std::string out;
};

Run
run (const std::string &args)
{
  std::string cmd = std::string (JUNCTION_CLI) + " " + args + " 2>/dev/null";
  FILE *p = popen (cmd.c_str (), "r");
  REQUIRE (p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread (buf, 1, sizeof buf, p)) > 0)
    out.append (buf, n);
  int status = pclose (p);
  return {WIFEXITED (status) ? WEXITSTATUS (status) : -1, out};
}

std::vector<std::string>
lines (const std::string &s)
{
  std::vector<std::string> v;
  std::istringstream is (s);
  for (std::string l; std::getline (is, l);)
    v.push_back (l);
  return v;
}

std::vector<std::string>
fields (const std::string &l)
{
  std::vector<std::string> v;
  std::string cur;
  bool quoted = false;
  for (char ch : l)
    {
      if (ch == '"')
        quoted = !quoted;
      else if (ch == ',' && !quoted)
        {
          v.push_back (cur);
          cur.clear ();
        }
      else
        cur += ch;
    }
  v.push_back (cur);
  return v;
}

// rows per (series prefix, engine)
std::map<std::string, int>
count_by_engine (const std::string &csv)
{
  std::map<std::string, int> m;
  auto ls = lines (csv);
  for (std::size_t k = 1; k < ls.size (); ++k)
    m[fields (ls[k]).at (2)]++;
  return m;
}

const std::string kScenario = std::string ("--scenario ") + JUNCTION_SOURCE_DIR + "/scenarios/default.json";

} // namespace

TEST_CASE ("metrics")
{
  Run r = run ("metrics " + kScenario + " --case A --receiver queue:5 --engines exact,approx");
  CHECK (r.code == 0);
  auto ls = lines (r.out);
  REQUIRE (ls.size () == 2);
  auto h = fields (ls[0]);
  auto v = fields (ls[1]);
  CHECK (h.size () == v.size ());
  CHECK (std::find (h.begin (), h.end (), "exact") != h.end ());
  CHECK (std::find (h.begin (), h.end (), "approx") != h.end ());
  double ex = std::stod (v[3]), ap = std::stod (v[4]);
  CHECK (ex > 0.0);
  CHECK (ex < 1.0);
  CHECK (ap > 0.0);

  CHECK (run ("metrics --scenario /nonexistent.json --case A --receiver queue:5").code == 2);
  CHECK (run ("metrics " + kScenario + " --case Q").code == 2);
  CHECK (run ("metrics " + kScenario + " --rho 1.5").code == 2);

  std::string sim = "metrics " + kScenario
                    + " --case B --receiver queue:3 --engines sim --trials 100000 --seed 42";
  Run a = run (sim), b = run (sim);
  CHECK (a.code == 0);
  CHECK (a.out == b.out);
  CHECK (lines (a.out).size () == 2);
}

TEST_CASE ("sweep presets")
{
  SUBCASE ("fig3a")
  {
    Run r = run ("sweep --preset fig3a");
    CHECK (r.code == 0);
    CHECK (lines (r.out).at (0) == "series,sweep_var,engine,value,ci_low,ci_high");
    auto m = count_by_engine (r.out);
    CHECK (m["exact"] == 75);
    CHECK (m["approx"] == 75);
  }
  SUBCASE ("fig5")
  {
    Run r = run ("sweep --preset fig5");
    CHECK (r.code == 0);
    std::map<std::string, int> m;
    auto ls = lines (r.out);
    for (std::size_t k = 1; k < ls.size (); ++k)
      {
        auto f = fields (ls[k]);
        m[f[0] + "|" + f[2]]++;
      }
    CHECK (m.size () == 6);
    for (auto &[key, n] : m)
      {
        CAPTURE (key);
        CHECK (n == 49);
      }
  }
  SUBCASE ("generic sweep and its errors")
  {
    Run r = run ("sweep " + kScenario + " --var rho --grid 0.1:0.3:0.1 --case C --receiver queue:2");
    CHECK (r.code == 0);
    CHECK (lines (r.out).size () == 7);
    CHECK (run ("sweep --var rho --grid 0.3:0.1:0.1").code == 2);
    CHECK (run ("sweep --var rho --grid 0.3:0.3:0.1").code == 2);
    CHECK (run ("sweep").code == 2);
    CHECK (run ("sweep --preset nope").code == 2);
  }
  SUBCASE ("out file equals stdout")
  {
    std::string path = "cli_test_fig4b.csv";
    Run a = run ("sweep --preset fig4b --out " + path);
    CHECK (a.code == 0);
    std::ifstream f (path);
    std::stringstream ss;
    ss << f.rdbuf ();
    CHECK (ss.str () == run ("sweep --preset fig4b").out);
    std::remove (path.c_str ());
  }
}

TEST_CASE ("optimize, table and qfunc")
{
  Run o = run ("optimize " + kScenario + " --case C");
  CHECK (o.code == 0);
  auto ls = lines (o.out);
  REQUIRE (ls.size () > 3);
  CHECK (ls[0] == "case,engine,rho_star,d_rho_star");
  double rs = std::stod (fields (ls[1]).at (2));
  CHECK (rs >= 0.05);
  CHECK (rs <= 0.2);

  std::string path = "cli_test_table.json";
  Run t = run ("table --grid 5:100:5 --out " + path);
  CHECK (t.code == 0);
  std::ifstream f (path);
  nlohmann::json j = nlohmann::json::parse (f);
  CHECK (j["lambda_x_grid"].size () == 20);
  CHECK (j["lambda_y_grid"].size () == 20);
  CHECK (j["rho_star"].size () == 20);
  CHECK (j["rho_star"][0].size () == 20);
  for (const char *k : {"alpha", "t_threshold_db", "rho_0", "case", "engine", "generated_at"})
    CHECK (j["meta"].contains (k));
  std::remove (path.c_str ());

  Run q = run ("qfunc --n0 0 --n1 100 --T-db 15 --alpha 4 --r 5");
  CHECK (q.code == 0);
  auto ql = lines (q.out);
  REQUIRE (ql.size () == 2);
  CHECK (fields (ql[0]).size () == 3);
  CHECK (fields (ql[1]).size () == 3);
  CHECK (fields (ql[1])[2] == "window");
}
