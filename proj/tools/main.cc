#include "cli.h"

#include "junction/approx.h"
#include "junction/exact.h"
#include "junction/io.h"
#include "junction/optimizer.h"
#include "junction/series.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

using namespace junction;
using namespace junction::cli;

namespace {

struct MetricsOptions
{
  std::string case_label = "A";
  std::string receiver;
  std::string engines = "exact,approx";
  std::string metric;
};

int
cmd_metrics (const MetricsOptions &o, const ScenarioFlags &sf, const SimFlags &simf)
{
  ScenarioConfig cfg = sf.build ();
  CaseLabel c = parse_case (o.case_label);
  auto engines = parse_engines (o.engines);
  std::string metric = o.metric.empty () ? (o.receiver.empty () ? "mean" : "p") : o.metric;
  if (metric != "p" && metric != "mean")
    throw ValidationError ("metric must be p or mean");
  std::optional<ReceiverSpec> rxs;
  if (metric == "p")
    {
      if (o.receiver.empty ())
        throw ValidationError ("metric p needs --receiver");
      rxs = parse_receiver (o.receiver);
    }
  TransmitterLocation tx = transmitter_for (c);

  std::vector<std::string> head = {"case", "receiver", "metric"};
  std::vector<std::string> row = {std::string (1, case_char (c)),
                                  rxs ? describe (*rxs) : std::string ("all"), metric};
  for (const auto &e : engines)
    {
      if (e == "exact")
        {
          double v = rxs ? success_prob (cfg, tx, *rxs)
                         : mean_receivers (cfg, queue_index (cfg, tx)).total ();
          head.push_back ("exact");
          row.push_back (fmt (v));
        }
      else if (e == "approx")
        {
          double v = rxs ? approx_p (cfg, c, *rxs).value : approx_mean (cfg, c).total ();
          head.push_back ("approx");
          row.push_back (fmt (v));
        }
      else
        {
          MetricEstimate m = rxs ? estimate_p (cfg, tx, *rxs, simf.spec ())
                                 : estimate_mean (cfg, tx, simf.spec ()).total;
          head.insert (head.end (), {"sim", "sim_ci_low", "sim_ci_high"});
          row.insert (row.end (), {fmt (m.value), fmt (m.ci_low), fmt (m.ci_high)});
        }
    }
  csv_row (std::cout, head);
  csv_row (std::cout, row);
  return 0;
}

int
cmd_simulate (const MetricsOptions &o, const ScenarioFlags &sf, const SimFlags &simf)
{
  ScenarioConfig cfg = sf.build ();
  CaseLabel c = parse_case (o.case_label);
  TransmitterLocation tx = transmitter_for (c);
  csv_row (std::cout, {"case", "quantity", "value", "ci_low", "ci_high", "n_samples"});
  auto emit = [&] (const std::string &what, const MetricEstimate &m) {
    csv_row (std::cout, {std::string (1, case_char (c)), what, fmt (m.value), fmt (m.ci_low),
                         fmt (m.ci_high), std::to_string (m.n_samples)});
  };
  if (!o.receiver.empty ())
    {
      ReceiverSpec r = parse_receiver (o.receiver);
      emit ("p:" + describe (r), estimate_p (cfg, tx, r, simf.spec ()));
    }
  else
    {
      MeanEstimate m = estimate_mean (cfg, tx, simf.spec ());
      emit ("m_q", m.q);
      emit ("m_rx", m.rx);
      emit ("m_ry", m.ry);
      emit ("m_total", m.total);
    }
  return 0;
}

Engine
parse_engine (const std::string &s)
{
  if (s == "exact")
    return Engine::Exact;
  if (s == "approx")
    return Engine::Approx;
  throw ValidationError ("engine must be exact or approx");
}

struct OptimizeOptions
{
  std::string case_label = "C";
  std::string engine = "approx";
  std::string curve_out;
};

int
cmd_optimize (const OptimizeOptions &o, const ScenarioFlags &sf)
{
  ScenarioConfig cfg = sf.build ();
  CaseLabel c = parse_case (o.case_label);
  Engine e = parse_engine (o.engine);
  OptimizeResult r = optimize_rho (cfg, c, e);
  for (const auto &w : r.warnings)
    std::cerr << "warning: " << w << "\n";
  csv_row (std::cout, {"case", "engine", "rho_star", "d_rho_star"});
  csv_row (std::cout, {std::string (1, case_char (c)), engine_name (e), fmt (r.rho_star),
                       fmt (r.curve.max_value)});

  std::ofstream file;
  if (!o.curve_out.empty ())
    {
      file.open (o.curve_out);
      if (!file)
        throw ValidationError ("cannot write '" + o.curve_out + "'");
    }
  else
    std::cout << "\n";
  std::ostream &os = file.is_open () ? static_cast<std::ostream &> (file) : std::cout;
  csv_row (os, {"rho", "d"});
  for (std::size_t k = 0; k < r.curve.rho_samples.size (); ++k)
    csv_row (os, {fmt (r.curve.rho_samples[k]), fmt (r.curve.d_values[k])});
  return 0;
}

struct TableOptions
{
  std::string grid = "5:100:5";
  std::string grid_y;
  std::string case_label = "C";
  std::string engine = "approx";
  std::string out;
  std::string generated_at = "unspecified";
  unsigned threads = 0;
};

std::string
utc_now ()
{
  std::time_t t = std::chrono::system_clock::to_time_t (std::chrono::system_clock::now ());
  std::tm tm{};
  gmtime_r (&t, &tm);
  char buf[32];
  std::strftime (buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int
cmd_table (const TableOptions &o, const ScenarioFlags &sf)
{
  ScenarioConfig cfg = sf.build ();
  GridSpec g{parse_grid (o.grid), parse_grid (o.grid_y.empty () ? o.grid : o.grid_y)};
  RateTable t = build_table (g, cfg, parse_case (o.case_label), parse_engine (o.engine), o.threads);
  t.generated_at = o.generated_at == "now" ? utc_now () : o.generated_at;
  for (const auto &e : t.cell_errors)
    std::cerr << "warning: " << e << "\n";
  std::string json = table_to_json (t);
  if (o.out.empty () || o.out == "-")
    std::cout << json << "\n";
  else
    {
      std::ofstream f (o.out);
      if (!f)
        throw ValidationError ("cannot write '" + o.out + "'");
      f << json << "\n";
    }
  return t.cell_errors.empty () ? 0 : 3;
}

struct QfuncOptions
{
  int n0 = 0;
  int n1 = 100;
  double t_db = 15.0;
  int alpha = 4;
  double r = 5.0;
  bool bounds = false;
};

int
cmd_qfunc (const QfuncOptions &o)
{
  if (o.n0 < 0 || o.n1 < 1 || o.alpha < 3 || !(o.r > 0.0))
    throw ValidationError ("qfunc needs n0 >= 0, n1 >= 1, integer alpha >= 3, r > 0");
  double T = db_to_linear (o.t_db);
  double exact = q_exact (o.n0, T, o.r, o.n1, o.alpha);
  QApprox a = q_approx (o.n0, T, o.r, o.n1, o.alpha);
  std::vector<std::string> head = {"q_exact", "q_approx", "regime"};
  std::vector<std::string> row = {fmt (exact), fmt (a.value), regime_name (a.regime)};
  if (o.bounds)
    {
      // head terms m <= eta and tail terms m > eta are bounded separately
      head.insert (head.end (), {"bound_lower", "bound_upper"});
      if (a.regime == QRegime::InWindow)
        {
          QBounds t = q_bounds_upper_tail (o.n0, T, o.r, o.n1, o.alpha);
          QBounds h = q_bounds_head (o.n0, T, o.r, o.alpha);
          row.insert (row.end (), {fmt (h.lower + t.lower), fmt (h.upper + t.upper)});
        }
      else
        row.insert (row.end (), {"", ""});
    }
  csv_row (std::cout, head);
  csv_row (std::cout, row);
  return 0;
}

} // namespace

int
main (int argc, char **argv)
{
  CLI::App app{"Broadcast performance of V2V links at a road intersection"};
  app.require_subcommand (1);

  ScenarioFlags sf;
  SimFlags simf;

  MetricsOptions mo;
  auto *metrics = app.add_subcommand ("metrics", "success probability or mean receivers");
  sf.attach (*metrics);
  simf.attach (*metrics);
  metrics->add_option ("--case", mo.case_label, "transmitter case A, B or C");
  metrics->add_option ("--receiver", mo.receiver, "queue:i, rx:r, rx-:r or ry:r");
  metrics->add_option ("--engines", mo.engines, "comma list of exact, approx, sim");
  metrics->add_option ("--metric", mo.metric, "p or mean (default: p with --receiver)");

  SweepOptions so;
  auto *sweep = app.add_subcommand ("sweep", "parameter sweep as CSV");
  sf.attach (*sweep);
  simf.attach (*sweep);
  sweep->add_option ("--preset", so.preset, "fig3a fig3b fig4a fig4b fig5 fig6 fig7 fig8 fig9");
  sweep->add_option ("--var", so.var, "rho, lambda, i, r or d");
  sweep->add_option ("--grid", so.grid, "start:stop:step");
  sweep->add_option ("--case", so.case_label, "transmitter case A, B or C");
  sweep->add_option ("--receiver", so.receiver, "queue:i, rx:r, rx-:r or ry:r");
  sweep->add_option ("--metric", so.metric, "p, mean, D or mq");
  sweep->add_option ("--engines", so.engines, "comma list of exact, approx, sim");
  sweep->add_option ("--out", so.out, "output CSV (default stdout)");

  MetricsOptions simo;
  auto *simulate = app.add_subcommand ("simulate", "Monte Carlo estimates with intervals");
  sf.attach (*simulate);
  simf.attach (*simulate);
  simulate->add_option ("--case", simo.case_label, "transmitter case A, B or C");
  simulate->add_option ("--receiver", simo.receiver, "queue:i, rx:r, rx-:r or ry:r");

  OptimizeOptions oo;
  auto *optimize = app.add_subcommand ("optimize", "optimal transmit probability");
  sf.attach (*optimize);
  optimize->add_option ("--case", oo.case_label, "transmitter case A, B or C");
  optimize->add_option ("--engine", oo.engine, "exact or approx");
  optimize->add_option ("--curve-out", oo.curve_out, "write the objective curve here");

  TableOptions to;
  auto *table = app.add_subcommand ("table", "optimal-rate lookup table as JSON");
  sf.attach (*table);
  table->add_option ("--grid", to.grid, "lambda grid start:stop:step [1/km]");
  table->add_option ("--grid-y", to.grid_y, "lambda_y grid (default: same as --grid)");
  table->add_option ("--case", to.case_label, "transmitter case A, B or C");
  table->add_option ("--engine", to.engine, "exact or approx");
  table->add_option ("--out", to.out, "output JSON (default stdout)");
  table->add_option ("--generated-at", to.generated_at, "timestamp to record; 'now' for UTC");
  table->add_option ("--threads", to.threads, "worker threads (0 = all cores)");

  QfuncOptions qo;
  auto *qfunc = app.add_subcommand ("qfunc", "queue-interference series diagnostics");
  qfunc->add_option ("--n0", qo.n0, "offset n0");
  qfunc->add_option ("--n1", qo.n1, "number of terms n1");
  qfunc->add_option ("--T-db", qo.t_db, "threshold [dB]");
  qfunc->add_option ("--alpha", qo.alpha, "integer path-loss exponent");
  qfunc->add_option ("--r", qo.r, "distance in units of l_v");
  qfunc->add_flag ("--bounds", qo.bounds, "add analytic bounds (in-window regime)");

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::Success &e)
    {
      return app.exit (e);
    }
  catch (const CLI::ParseError &e)
    {
      app.exit (e);
      return 2;
    }

  try
    {
      if (*metrics)
        return cmd_metrics (mo, sf, simf);
      if (*sweep)
        return run_sweep (so, sf, simf);
      if (*simulate)
        return cmd_simulate (simo, sf, simf);
      if (*optimize)
        return cmd_optimize (oo, sf);
      if (*table)
        return cmd_table (to, sf);
      if (*qfunc)
        return cmd_qfunc (qo);
    }
  catch (const ValidationError &e)
    {
      std::cerr << "error: " << e.what () << "\n";
      return 2;
    }
  catch (const std::exception &e)
    {
      std::cerr << "error: " << e.what () << "\n";
      return 3;
    }
  return 2;
}
