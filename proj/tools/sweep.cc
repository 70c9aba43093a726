#include "cli.h"

#include "junction/approx.h"
#include "junction/exact.h"
#include "junction/optimizer.h"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

namespace junction::cli {

namespace {

// One sweep point of one engine.
struct Job
{
  std::string series;
  double x;
  std::string engine;
  std::function<MetricEstimate ()> eval;
  bool has_interval;
};

// What to evaluate at a point: a case-labelled transmitter (or a queue
// index d) and either a receiver or an aggregate metric.
struct Point
{
  ScenarioConfig cfg;
  CaseLabel c = CaseLabel::A;
  std::optional<int> d;
  std::optional<ReceiverSpec> rx;
  std::string metric = "p"; // p | mean | D | mq
};

MetricEstimate
plain (double v)
{
  MetricEstimate m;
  m.value = m.ci_low = m.ci_high = v;
  return m;
}

MetricEstimate
scaled (MetricEstimate m, double k)
{
  m.value *= k;
  m.ci_low *= k;
  m.ci_high *= k;
  return m;
}

double
pick (const MeanReceiverBreakdown &m, const Point &pt)
{
  if (pt.metric == "mq")
    return m.m_q;
  double t = m.total ();
  return pt.metric == "D" ? pt.cfg.rho * t : t;
}

MetricEstimate
evaluate (const Point &pt, const std::string &engine, const SimSpec &sim)
{
  TransmitterLocation tx = pt.d ? TransmitterLocation (tx::QueueIndex{*pt.d})
                                : transmitter_for (pt.c);
  const bool want_p = pt.metric == "p";
  if (want_p && !pt.rx)
    throw ValidationError ("metric p needs --receiver");

  if (engine == "exact")
    {
      if (want_p)
        return plain (success_prob (pt.cfg, tx, *pt.rx));
      return plain (pick (mean_receivers (pt.cfg, queue_index (pt.cfg, tx)), pt));
    }
  if (engine == "approx")
    {
      if (pt.d)
        throw DomainError ("closed forms exist for cases A, B, C only; use approx-interp");
      if (want_p)
        return plain (approx_p (pt.cfg, pt.c, *pt.rx).value);
      return plain (pick (approx_mean (pt.cfg, pt.c), pt));
    }
  if (engine == "approx-interp" || engine == "approx-extrap")
    {
      PositionMode mode = engine == "approx-interp" ? PositionMode::Interpolate
                                                    : PositionMode::CentralExtrapolate;
      int d = pt.d.value_or (queue_index (pt.cfg, tx));
      if (want_p)
        {
          auto *q = std::get_if<rx::QueueVehicle> (&*pt.rx);
          if (!q)
            throw DomainError ("position interpolation covers queue receivers only");
          return plain (interpolate_position (pt.cfg, d, target::SuccessAt{q->i}, mode));
        }
      if (pt.metric != "mq")
        throw DomainError ("position interpolation covers p and the queue mean only");
      return plain (interpolate_position (pt.cfg, d, target::QueueMean{}, mode));
    }
  // sim
  if (want_p)
    return estimate_p (pt.cfg, tx, *pt.rx, sim);
  MeanEstimate m = estimate_mean (pt.cfg, tx, sim);
  if (pt.metric == "mq")
    return m.q;
  return pt.metric == "D" ? scaled (m.total, pt.cfg.rho) : m.total;
}

class Plan
{
public:
  Plan (std::vector<std::string> engines, SimSpec sim)
    : m_engines (std::move (engines)), m_sim (sim)
  {
  }

  // queue every selected engine among `candidates` for this point
  void
  add (const std::string &series, double x, const Point &pt,
       const std::vector<std::string> &candidates = {"exact", "approx", "sim"})
  {
    for (const auto &e : candidates)
      if (has_engine (m_engines, e))
        {
          SimSpec sim = m_sim;
          m_jobs.push_back ({series, x, e, [pt, e, sim] { return evaluate (pt, e, sim); },
                             e == "sim"});
        }
  }

  void
  add_custom (const std::string &series, double x, const std::string &engine,
              std::function<double ()> f)
  {
    if (has_engine (m_engines, engine))
      m_jobs.push_back ({series, x, engine, [f] { return plain (f ()); }, false});
  }

  const std::vector<Job> &jobs () const { return m_jobs; }

private:
  std::vector<std::string> m_engines;
  SimSpec m_sim;
  std::vector<Job> m_jobs;
};

std::string
label (const char *key, double v)
{
  return std::string (key) + "=" + fmt (v);
}

std::string
case_name (CaseLabel c)
{
  return std::string ("case=") + case_char (c);
}

const double kRhoSeries[] = {0.1, 0.3, 0.5};
const CaseLabel kCases[] = {CaseLabel::A, CaseLabel::B, CaseLabel::C};

void
queue_curves (Plan &plan, const ScenarioConfig &base, CaseLabel c, const std::string &prefix)
{
  for (double rho : kRhoSeries)
    for (int i = 1; i <= 25; ++i)
      {
        Point pt{base, c};
        pt.cfg.rho = rho;
        pt.rx = rx::QueueVehicle{i};
        plan.add (prefix + label ("rho", rho), i, pt);
      }
}

void
running_curves (Plan &plan, const ScenarioConfig &base, CaseLabel c, const std::string &prefix,
                bool y_street)
{
  for (double rho : kRhoSeries)
    for (int k = 1; k <= 25; ++k)
      {
        double r = 6.0 * k;
        Point pt{base, c};
        pt.cfg.rho = rho;
        if (y_street)
          pt.rx = rx::RunningY{r};
        else
          pt.rx = rx::RunningX{r, Side::Positive};
        plan.add (prefix + label ("rho", rho), r, pt);
      }
}

void
rho_curves (Plan &plan, const ScenarioConfig &base, const std::string &metric,
            const std::vector<double> &rhos, const std::vector<double> &lambdas)
{
  for (double lam : lambdas)
    for (CaseLabel c : kCases)
      for (double rho : rhos)
        {
          Point pt{base, c};
          pt.cfg.rho = rho;
          pt.metric = metric;
          std::string series = case_name (c);
          if (lambdas.size () > 1)
            {
              pt.cfg.lambda_x = pt.cfg.lambda_y = per_km_to_per_m (lam);
              series += ";" + label ("lambda", lam);
            }
          plan.add (series, rho, pt);
        }
}

void
build_preset (Plan &plan, const std::string &name, const ScenarioConfig &base)
{
  if (name == "fig3a")
    queue_curves (plan, base, CaseLabel::A, "");
  else if (name == "fig3b")
    running_curves (plan, base, CaseLabel::A, "", true);
  else if (name == "fig4a")
    {
      queue_curves (plan, base, CaseLabel::B, "queue;");
      running_curves (plan, base, CaseLabel::B, "rx+;", false);
    }
  else if (name == "fig4b")
    queue_curves (plan, base, CaseLabel::C, "");
  else if (name == "fig5")
    rho_curves (plan, base, "mean", grid_range (0.02, 0.98, 0.02), {0.0});
  else if (name == "fig6")
    rho_curves (plan, base, "D", grid_range (0.01, 0.5, 0.01), {15.0, 25.0, 40.0});
  else if (name == "fig7")
    {
      // rho* per case and lambda; case C's optimum reused by A and B
      auto memo = std::make_shared<std::map<std::tuple<double, int, int>, OptimizeResult>> ();
      auto best = [memo, base] (double lam, CaseLabel c, Engine e) -> const OptimizeResult & {
        auto key = std::make_tuple (lam, static_cast<int> (c), static_cast<int> (e));
        auto it = memo->find (key);
        if (it == memo->end ())
          {
            ScenarioConfig cfg = base;
            cfg.lambda_x = cfg.lambda_y = per_km_to_per_m (lam);
            it = memo->emplace (key, optimize_rho (cfg, c, e)).first;
          }
        return it->second;
      };
      for (Engine e : {Engine::Exact, Engine::Approx})
        for (CaseLabel c : kCases)
          for (double lam : grid_range (5.0, 60.0, 5.0))
            {
              std::string en = engine_name (e);
              std::string cn = std::string (1, case_char (c));
              plan.add_custom ("rho_star;case=" + cn, lam, en,
                               [=] { return best (lam, c, e).rho_star; });
              plan.add_custom ("D_rho_star;case=" + cn, lam, en,
                               [=] { return best (lam, c, e).curve.max_value; });
              if (c != CaseLabel::C)
                plan.add_custom ("D_rho_c;case=" + cn, lam, en, [=] {
                  ScenarioConfig cfg = base;
                  cfg.lambda_x = cfg.lambda_y = per_km_to_per_m (lam);
                  return objective (cfg, c, best (lam, CaseLabel::C, e).rho_star, e);
                });
            }
    }
  else if (name == "fig8" || name == "fig9")
    {
      ScenarioConfig cfg = base;
      cfg.n_plus = cfg.n_minus = 30;
      const std::vector<std::string> engines = {"exact", "approx-interp", "approx-extrap", "sim"};
      std::vector<int> receivers = name == "fig8" ? std::vector<int>{1, 5, 10}
                                                   : std::vector<int>{0};
      for (int i : receivers)
        for (int d = 0; d <= cfg.n_plus; ++d)
          {
            Point pt{cfg, CaseLabel::A, d};
            if (i > 0)
              pt.rx = rx::QueueVehicle{i};
            else
              pt.metric = "mq";
            plan.add (i > 0 ? label ("i", i) : std::string ("queue"), d, pt, engines);
          }
    }
  else
    throw ValidationError ("unknown preset '" + name + "'");
}

void
build_generic (Plan &plan, const SweepOptions &opt, const ScenarioConfig &base)
{
  if (opt.grid.empty ())
    throw ValidationError ("--var needs --grid start:stop:step");
  std::vector<double> xs = parse_grid (opt.grid);
  CaseLabel c = parse_case (opt.case_label);
  std::optional<ReceiverSpec> rx;
  if (!opt.receiver.empty ())
    rx = parse_receiver (opt.receiver);
  if (opt.metric != "p" && opt.metric != "mean" && opt.metric != "D" && opt.metric != "mq")
    throw ValidationError ("metric must be p, mean, D or mq");
  std::string series = case_name (c) + ";" + opt.metric;

  for (double x : xs)
    {
      Point pt{base, c};
      pt.rx = rx;
      pt.metric = opt.metric;
      std::vector<std::string> engines = {"exact", "approx", "sim"};
      if (opt.var == "rho")
        pt.cfg.rho = x;
      else if (opt.var == "lambda")
        pt.cfg.lambda_x = pt.cfg.lambda_y = per_km_to_per_m (x);
      else if (opt.var == "i")
        {
          if (x != std::floor (x) || x < 1)
            throw ValidationError ("receiver index grid must hold positive integers");
          pt.rx = rx::QueueVehicle{static_cast<int> (x)};
        }
      else if (opt.var == "r")
        {
          auto *ry = rx ? std::get_if<rx::RunningY> (&*rx) : nullptr;
          auto *rxx = rx ? std::get_if<rx::RunningX> (&*rx) : nullptr;
          if (ry)
            pt.rx = rx::RunningY{x};
          else
            pt.rx = rx::RunningX{x, rxx ? rxx->side : Side::Positive};
        }
      else if (opt.var == "d")
        {
          if (x != std::floor (x) || x < 0)
            throw ValidationError ("transmitter index grid must hold integers >= 0");
          pt.d = static_cast<int> (x);
          engines = {"exact", "approx-interp", "approx-extrap", "sim"};
        }
      else
        throw ValidationError ("--var must be one of rho, lambda, i, r, d");
      if (pt.metric == "p" && !pt.rx)
        throw ValidationError ("metric p needs --receiver");
      ValidationReport rep = validate (pt.cfg);
      if (!rep.ok ())
        throw ValidationError ("sweep point " + fmt (x) + ": " + rep.errors.front ());
      plan.add (series, x, pt, engines);
    }
}

} // namespace

int
run_sweep (const SweepOptions &opt, const ScenarioFlags &sf, const SimFlags &simf)
{
  if (opt.preset.empty () == opt.var.empty ())
    throw ValidationError ("give exactly one of --preset or --var");
  ScenarioConfig base = sf.build ();
  Plan plan (parse_engines (opt.engines), simf.spec ());
  if (!opt.preset.empty ())
    build_preset (plan, opt.preset, base);
  else
    build_generic (plan, opt, base);
  if (plan.jobs ().empty ())
    throw ValidationError ("sweep selects no points for the chosen engines");

  std::ofstream file;
  if (!opt.out.empty () && opt.out != "-")
    {
      file.open (opt.out);
      if (!file)
        throw ValidationError ("cannot write '" + opt.out + "'");
    }
  std::ostream &os = file.is_open () ? static_cast<std::ostream &> (file) : std::cout;
  csv_row (os, {"series", "sweep_var", "engine", "value", "ci_low", "ci_high"});
  for (const Job &j : plan.jobs ())
    {
      try
        {
          MetricEstimate m = j.eval ();
          csv_row (os, {j.series, fmt (j.x), j.engine, fmt (m.value),
                        j.has_interval ? fmt (m.ci_low) : "", j.has_interval ? fmt (m.ci_high) : ""});
        }
      catch (const std::exception &e)
        {
          csv_row (os, {"error", fmt (j.x), j.engine, e.what (), "", ""});
          os.flush ();
          std::cerr << "error: " << j.series << " at " << fmt (j.x) << " (" << j.engine
                    << "): " << e.what () << "\n";
          return dynamic_cast<const ValidationError *> (&e) ? 2 : 3;
        }
    }
  os.flush ();
  return 0;
}

} // namespace junction::cli
