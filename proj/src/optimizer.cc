#include "junction/optimizer.h"

#include "junction/approx.h"
#include "overload.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace junction {

const char *
engine_name (Engine e)
{
  return e == Engine::Exact ? "exact" : "approx";
}

double
objective (const ScenarioConfig &cfg, CaseLabel c, double rho, Engine e,
           const QuadratureSpec &quad)
{
  if (!(rho > 0.0 && rho < 1.0))
    throw DomainError ("objective needs 0 < rho < 1");
  ScenarioConfig at = cfg;
  at.rho = rho;
  if (e == Engine::Approx)
    return rho * approx_mean (at, c).total ();
  int d = queue_index (at, transmitter_for (c));
  return rho * mean_receivers (at, d, quad).total ();
}

OptimizeResult
optimize_rho (const ScenarioConfig &cfg, CaseLabel c, Engine e, const RhoDomain &dom,
              const QuadratureSpec &quad)
{
  if (!(dom.upper > 0.0 && dom.upper < 1.0) || !(dom.grid_step > 0.0))
    throw DomainError ("rho domain must lie within (0,1)");
  std::vector<std::pair<double, double>> pts;
  auto eval = [&] (double rho) {
    double v = objective (cfg, c, rho, e, quad);
    pts.emplace_back (rho, v);
    return v;
  };

  int n = static_cast<int> (std::floor (dom.upper / dom.grid_step + 1e-9));
  std::size_t best = 0;
  for (int k = 1; k <= n; ++k)
    {
      eval (k * dom.grid_step);
      if (pts.back ().second > pts[best].second)
        best = pts.size () - 1;
    }
  if (pts.empty ())
    throw DomainError ("rho domain holds no grid point");

  // golden-section refinement inside the neighbouring grid cells
  const double g = (std::sqrt (5.0) - 1.0) / 2.0;
  double a = std::max (pts[best].first - dom.grid_step, 1e-6);
  double b = std::min (pts[best].first + dom.grid_step, dom.upper);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = eval (x1);
  double f2 = eval (x2);
  while (b - a > dom.tolerance)
    {
      if (f1 < f2)
        {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + g * (b - a);
          f2 = eval (x2);
        }
      else
        {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - g * (b - a);
          f1 = eval (x1);
        }
    }

  std::sort (pts.begin (), pts.end ());
  OptimizeResult res;
  for (auto &[r, v] : pts)
    {
      res.curve.rho_samples.push_back (r);
      res.curve.d_values.push_back (v);
    }
  auto it = std::max_element (res.curve.d_values.begin (), res.curve.d_values.end ());
  std::size_t k = static_cast<std::size_t> (it - res.curve.d_values.begin ());
  res.curve.argmax = res.curve.rho_samples[k];
  res.curve.max_value = *it;
  res.rho_star = res.curve.argmax;

  double lo = *std::min_element (res.curve.d_values.begin (), res.curve.d_values.end ());
  if (!(res.curve.max_value > 0.0) || (lo > 0.0 && res.curve.max_value / lo < 1.001))
    res.warnings.push_back ("flat objective: max/min < 1.001 over the rho domain");
  return res;
}

std::vector<double>
grid_range (double start, double stop, double step)
{
  if (!(step > 0.0) || !(start < stop) || !std::isfinite (start) || !std::isfinite (stop))
    throw ValidationError ("range needs start < stop and step > 0");
  std::vector<double> v;
  long n = static_cast<long> (std::floor ((stop - start) / step + 1e-9));
  for (long k = 0; k <= n; ++k)
    v.push_back (start + k * step);
  return v;
}

RateTable
build_table (const GridSpec &grid, const ScenarioConfig &templ, CaseLabel c, Engine e,
             unsigned threads)
{
  if (grid.lambda_x.empty () || grid.lambda_y.empty ())
    throw ValidationError ("table grids must be nonempty");
  if (!std::is_sorted (grid.lambda_x.begin (), grid.lambda_x.end ())
      || !std::is_sorted (grid.lambda_y.begin (), grid.lambda_y.end ()))
    throw ValidationError ("table grids must be ascending");

  RateTable t;
  t.lambda_x_grid = grid.lambda_x;
  t.lambda_y_grid = grid.lambda_y;
  t.alpha = templ.alpha;
  t.t_threshold_db = linear_to_db (templ.t_threshold);
  t.rho_0 = templ.rho_0;
  t.case_label = c;
  t.engine = e;
  const std::size_t nx = grid.lambda_x.size ();
  const std::size_t ny = grid.lambda_y.size ();
  t.rho_star.assign (nx, std::vector<double> (ny, NAN));
  std::vector<std::string> errors (nx * ny);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;)
      {
        std::size_t cell = next.fetch_add (1);
        if (cell >= nx * ny)
          return;
        std::size_t ix = cell / ny, iy = cell % ny;
        ScenarioConfig cfg = templ;
        cfg.lambda_x = per_km_to_per_m (grid.lambda_x[ix]);
        cfg.lambda_y = per_km_to_per_m (grid.lambda_y[iy]);
        try
          {
            t.rho_star[ix][iy] = optimize_rho (cfg, c, e).rho_star;
          }
        catch (const std::exception &ex)
          {
            errors[cell] = ex.what ();
          }
      }
  };
  unsigned n = threads ? threads : std::max (1u, std::thread::hardware_concurrency ());
  n = static_cast<unsigned> (std::min<std::size_t> (n, nx * ny));
  if (n <= 1)
    worker ();
  else
    {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < n; ++i)
        pool.emplace_back (worker);
      for (auto &th : pool)
        th.join ();
    }
  for (std::size_t cell = 0; cell < errors.size (); ++cell)
    if (!errors[cell].empty ())
      t.cell_errors.push_back ("cell (" + std::to_string (cell / ny) + ","
                               + std::to_string (cell % ny) + "): " + errors[cell]);
  return t;
}

namespace {

// index j and weight w with v = (1-w) grid[j] + w grid[j+1]
std::pair<std::size_t, double>
bracket (const std::vector<double> &grid, double v)
{
  if (grid.size () == 1)
    return {0, 0.0};
  auto it = std::upper_bound (grid.begin (), grid.end (), v);
  std::size_t j = it == grid.begin () ? 0 : static_cast<std::size_t> (it - grid.begin ()) - 1;
  j = std::min (j, grid.size () - 2);
  double w = (v - grid[j]) / (grid[j + 1] - grid[j]);
  return {j, std::clamp (w, 0.0, 1.0)};
}

} // namespace

LookupResult
lookup (const RateTable &table, double lx, double ly)
{
  if (table.lambda_x_grid.empty () || table.lambda_y_grid.empty () || table.rho_star.empty ())
    throw DomainError ("lookup in an empty table");
  LookupResult res{0.0, false};
  auto clampv = [&res] (double v, const std::vector<double> &g) {
    double c = std::clamp (v, g.front (), g.back ());
    if (c != v)
      res.clamped = true;
    return c;
  };
  lx = clampv (lx, table.lambda_x_grid);
  ly = clampv (ly, table.lambda_y_grid);
  auto [i, wx] = bracket (table.lambda_x_grid, lx);
  auto [j, wy] = bracket (table.lambda_y_grid, ly);
  auto at = [&] (std::size_t a, std::size_t b) {
    a = std::min (a, table.lambda_x_grid.size () - 1);
    b = std::min (b, table.lambda_y_grid.size () - 1);
    return table.rho_star[a][b];
  };
  res.rho_star = (1 - wx) * (1 - wy) * at (i, j) + wx * (1 - wy) * at (i + 1, j)
                 + (1 - wx) * wy * at (i, j + 1) + wx * wy * at (i + 1, j + 1);
  return res;
}

double
interpolate_position (const ScenarioConfig &cfg, int d, const PositionTarget &what,
                      PositionMode mode)
{
  const int N = cfg.n_plus;
  if (N < 2)
    throw DomainError ("position interpolation needs n_plus >= 2");
  if (d < 0 || d > N)
    throw DomainError ("transmitter index outside [0, n_plus]");
  const bool log_scale = std::holds_alternative<target::SuccessAt> (what);
  auto anchor = [&] (CaseLabel c) {
    return std::visit (detail::Overload{
                           [&] (const target::SuccessAt &s) {
                             return std::log (approx_p (cfg, c, rx::QueueVehicle{s.i}).value);
                           },
                           [&] (const target::QueueMean &) { return approx_mean (cfg, c).m_q; },
                       },
                       what);
  };
  const double dc = N / 2;
  const double fa = anchor (CaseLabel::A);
  const double fc = anchor (CaseLabel::C);
  double v;
  if (mode == PositionMode::CentralExtrapolate || d <= dc)
    v = fa + (fc - fa) * (d / dc);
  else
    {
      const double fb = anchor (CaseLabel::B);
      v = fc + (fb - fc) * ((d - dc) / (N - dc));
    }
  return log_scale ? std::exp (v) : v;
}

} // namespace junction
