#include <doctest.h>

#include "junction/approx.h"
#include "junction/optimizer.h"

#include <chrono>
#include <cmath>

using namespace junction;

TEST_CASE ("objective")
{
  ScenarioConfig c = default_scenario ();
  CHECK (objective (c, CaseLabel::C, 0.1, Engine::Approx)
         == doctest::Approx (0.1 * approx_mean (c, CaseLabel::C).total ()).epsilon (1e-15));
  ScenarioConfig e = c;
  e.rho = 0.2;
  CHECK (objective (c, CaseLabel::A, 0.2, Engine::Exact)
         == doctest::Approx (0.2 * mean_receivers (e, 0).total ()).epsilon (1e-15));
  CHECK (objective (c, CaseLabel::C, 1e-7, Engine::Approx) < 1e-5);
  CHECK_THROWS_AS (objective (c, CaseLabel::C, 0.0, Engine::Approx), DomainError);
  CHECK_THROWS_AS (objective (c, CaseLabel::C, 1.0, Engine::Exact), DomainError);
  for (double rho = 0.01; rho <= 0.5; rho += 0.07)
    CHECK (objective (c, CaseLabel::B, rho, Engine::Exact) >= 0.0);
  // case C engines agree within 10% on the working range
  for (double rho = 0.05; rho <= 0.5; rho += 0.05)
    {
      double ex = objective (c, CaseLabel::C, rho, Engine::Exact);
      double ap = objective (c, CaseLabel::C, rho, Engine::Approx);
      CAPTURE (rho);
      CHECK (std::abs (ap / ex - 1.0) <= 0.10);
    }
}

TEST_CASE ("optimize rho")
{
  ScenarioConfig c = default_scenario ();
  SUBCASE ("default configuration")
  {
    OptimizeResult r = optimize_rho (c, CaseLabel::C, Engine::Approx);
    CHECK (r.rho_star >= 0.05);
    CHECK (r.rho_star <= 0.2);
    CHECK (r.warnings.empty ());
    // argmax of its own curve
    double best = -1.0, at = 0.0;
    for (std::size_t k = 0; k < r.curve.rho_samples.size (); ++k)
      if (r.curve.d_values[k] > best)
        {
          best = r.curve.d_values[k];
          at = r.curve.rho_samples[k];
        }
    CHECK (r.rho_star == at);
    CHECK (r.curve.max_value == best);
    // refined to better than one grid step against a fine scan
    double fine_at = 0.0, fine_best = -1.0;
    for (int k = 1; k <= 5000; ++k)
      {
        double v = objective (c, CaseLabel::C, k * 1e-4, Engine::Approx);
        if (v > fine_best)
          {
            fine_best = v;
            fine_at = k * 1e-4;
          }
      }
    CHECK (std::abs (r.rho_star - fine_at) <= 2e-4);
  }
  SUBCASE ("rho star grows with traffic")
  {
    double prev = 0.0;
    for (double lam : {15.0, 25.0, 40.0, 80.0})
      {
        ScenarioConfig k = c;
        k.lambda_x = k.lambda_y = per_km_to_per_m (lam);
        double r = optimize_rho (k, CaseLabel::C, Engine::Approx).rho_star;
        CHECK (r >= prev);
        prev = r;
      }
  }
  SUBCASE ("queue only")
  {
    ScenarioConfig k = c;
    k.lambda_x = k.lambda_y = 0.0;
    for (Engine e : {Engine::Approx, Engine::Exact})
      {
        OptimizeResult r = optimize_rho (k, CaseLabel::C, e);
        double best = -1.0, at = 0.0;
        for (int j = 1; j <= 500; ++j)
          {
            double v = objective (k, CaseLabel::C, j * 1e-3, e);
            if (v > best)
              {
                best = v;
                at = j * 1e-3;
              }
          }
        CAPTURE (engine_name (e));
        CHECK (std::abs (r.rho_star - at) <= 1e-3);
      }
  }
  SUBCASE ("bad domain")
  {
    CHECK_THROWS_AS (optimize_rho (c, CaseLabel::C, Engine::Approx, RhoDomain{1.5}), DomainError);
  }
}

TEST_CASE ("rate tables")
{
  ScenarioConfig c = default_scenario ();
  SUBCASE ("one cell equals one optimization")
  {
    RateTable t = build_table ({{25.0}, {25.0}}, c);
    REQUIRE (t.rho_star.size () == 1);
    CHECK (t.rho_star[0][0] == optimize_rho (c, CaseLabel::C, Engine::Approx).rho_star);
    CHECK (t.case_label == CaseLabel::C);
    CHECK (t.t_threshold_db == doctest::Approx (15.0));
  }
  SUBCASE ("full grid: timing, range and case C symmetry")
  {
    GridSpec g{grid_range (5, 100, 5), grid_range (5, 100, 5)};
    auto t0 = std::chrono::steady_clock::now ();
    RateTable t = build_table (g, c);
    double secs = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0).count ();
    CHECK (secs < 60.0);
    CHECK (t.lambda_x_grid.size () == 20);
    CHECK (t.cell_errors.empty ());
    for (const auto &row : t.rho_star)
      for (double v : row)
        {
          CHECK (v > 0.0);
          CHECK (v <= 0.5);
          CHECK (v == row.front ());
        }
  }
  SUBCASE ("thread count does not change the table")
  {
    GridSpec g{grid_range (10, 40, 10), grid_range (10, 40, 10)};
    RateTable a = build_table (g, c, CaseLabel::A, Engine::Approx, 1);
    RateTable b = build_table (g, c, CaseLabel::A, Engine::Approx, 4);
    CHECK (a.rho_star == b.rho_star);
  }
  SUBCASE ("bad grids")
  {
    CHECK_THROWS_AS (build_table ({{}, {1.0}}, c), ValidationError);
    CHECK_THROWS_AS (build_table ({{2.0, 1.0}, {1.0}}, c), ValidationError);
    CHECK_THROWS_AS (grid_range (5, 5, 1), ValidationError);
    CHECK_THROWS_AS (grid_range (1, 5, 0), ValidationError);
    CHECK (grid_range (5, 100, 5).size () == 20);
  }
}

TEST_CASE ("lookup")
{
  RateTable t;
  t.lambda_x_grid = {10, 20};
  t.lambda_y_grid = {10, 30};
  t.rho_star = {{0.1, 0.2}, {0.3, 0.4}};
  CHECK (lookup (t, 20, 10).rho_star == 0.3);
  CHECK_FALSE (lookup (t, 20, 10).clamped);
  CHECK (lookup (t, 15, 10).rho_star == doctest::Approx (0.2));
  CHECK (lookup (t, 15, 20).rho_star == doctest::Approx (0.25));
  LookupResult out = lookup (t, 100, 0);
  CHECK (out.clamped);
  CHECK (out.rho_star == doctest::Approx (0.3));
  CHECK_THROWS_AS (lookup (RateTable{}, 1, 1), DomainError);
}

TEST_CASE ("position interpolation")
{
  ScenarioConfig c = default_scenario ();
  c.n_plus = c.n_minus = 28;
  const int N = 28;
  for (int i : {1, 5, 10})
    {
      CAPTURE (i);
      double a = approx_p (c, CaseLabel::A, rx::QueueVehicle{i}).value;
      double m = approx_p (c, CaseLabel::C, rx::QueueVehicle{i}).value;
      double b = approx_p (c, CaseLabel::B, rx::QueueVehicle{i}).value;
      CHECK (interpolate_position (c, 0, target::SuccessAt{i}) == doctest::Approx (a).epsilon (1e-14));
      CHECK (interpolate_position (c, N / 2, target::SuccessAt{i}) == doctest::Approx (m).epsilon (1e-14));
      CHECK (interpolate_position (c, N, target::SuccessAt{i}) == doctest::Approx (b).epsilon (1e-14));
      double q = interpolate_position (c, N / 4, target::SuccessAt{i});
      CHECK (q >= std::min (a, m));
      CHECK (q <= std::max (a, m));
      // log-linear: geometric mean at the midpoint between anchors
      double mid = interpolate_position (c, 3 * N / 4, target::SuccessAt{i});
      CHECK (mid == doctest::Approx (std::sqrt (m * b)).epsilon (1e-12));
    }
  double qa = approx_mean (c, CaseLabel::A).m_q;
  double qc = approx_mean (c, CaseLabel::C).m_q;
  CHECK (interpolate_position (c, N / 4, target::QueueMean{}) == doctest::Approx (0.5 * (qa + qc)));
  // central extrapolation continues the A-C line past the middle
  CHECK (interpolate_position (c, N, target::QueueMean{}, PositionMode::CentralExtrapolate)
         == doctest::Approx (qa + 2.0 * (qc - qa)));
  ScenarioConfig tiny = c;
  tiny.n_plus = 1;
  CHECK_THROWS_AS (interpolate_position (tiny, 0, target::QueueMean{}), DomainError);
  CHECK_THROWS_AS (interpolate_position (c, 29, target::QueueMean{}), DomainError);
}
