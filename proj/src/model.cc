#include "junction/model.h"

#include "overload.h"

#include <cmath>
#include <sstream>

namespace junction {

using detail::Overload;

double
db_to_linear (double x_db)
{
  return std::pow (10.0, x_db / 10.0);
}

double
linear_to_db (double x)
{
  return 10.0 * std::log10 (x);
}

double
per_km_to_per_m (double x)
{
  return x / 1000.0;
}

double
per_m_to_per_km (double x)
{
  return x * 1000.0;
}

ScenarioConfig
default_scenario ()
{
  ScenarioConfig c;
  c.lambda_x = per_km_to_per_m (25.0);
  c.lambda_y = per_km_to_per_m (25.0);
  c.n_plus = 25;
  c.n_minus = 25;
  c.l_v = 6.0;
  c.alpha = 4.0;
  c.t_threshold = db_to_linear (15.0);
  c.rho = 0.1;
  c.rho_0 = 0.1;
  c.mu = 1.0;
  return c;
}

ValidationReport
validate (const ScenarioConfig &cfg)
{
  ValidationReport rep;
  auto bad = [&rep] (const std::string &m) { rep.errors.push_back (m); };
  auto finite = [] (double v) { return std::isfinite (v); };

  if (!finite (cfg.alpha) || !(cfg.alpha > 2.0))
    bad ("alpha must exceed 2");
  if (!finite (cfg.rho) || !(cfg.rho > 0.0 && cfg.rho < 1.0))
    bad ("rho must lie in (0,1)");
  if (!finite (cfg.rho_0) || !(cfg.rho_0 > 0.0 && cfg.rho_0 < 1.0))
    bad ("rho_0 must lie in (0,1)");
  if (!finite (cfg.lambda_x) || cfg.lambda_x < 0.0)
    bad ("lambda_x must be >= 0");
  if (!finite (cfg.lambda_y) || cfg.lambda_y < 0.0)
    bad ("lambda_y must be >= 0");
  if (!finite (cfg.l_v) || !(cfg.l_v > 0.0))
    bad ("l_v must be > 0");
  if (!finite (cfg.t_threshold) || !(cfg.t_threshold > 0.0))
    bad ("t_threshold must be > 0");
  if (!finite (cfg.mu) || !(cfg.mu > 0.0))
    bad ("mu must be > 0");
  if (cfg.n_plus < 0)
    bad ("n_plus must be >= 0");
  if (cfg.n_minus < 0)
    bad ("n_minus must be >= 0");

  if (rep.ok () && (1.0 - cfg.rho) * cfg.t_threshold < 1.0)
    rep.warnings.push_back ("(1-rho)T < 1: approximations are outside their stated regime");
  return rep;
}

char
case_char (CaseLabel c)
{
  switch (c)
    {
    case CaseLabel::A:
      return 'A';
    case CaseLabel::B:
      return 'B';
    case CaseLabel::C:
      return 'C';
    }
  return '?';
}

CaseLabel
parse_case (const std::string &s)
{
  if (s == "A" || s == "a")
    return CaseLabel::A;
  if (s == "B" || s == "b")
    return CaseLabel::B;
  if (s == "C" || s == "c")
    return CaseLabel::C;
  throw ValidationError ("unknown case '" + s + "' (expected A, B or C)");
}

TransmitterLocation
transmitter_for (CaseLabel c)
{
  switch (c)
    {
    case CaseLabel::A:
      return tx::Intersection{};
    case CaseLabel::B:
      return tx::QueueEnd{};
    case CaseLabel::C:
      return tx::QueueMiddle{};
    }
  return tx::Intersection{};
}

double
distance (Point a, Point b)
{
  return std::hypot (a.x - b.x, a.y - b.y);
}

std::vector<int>
queue_slots (const ScenarioConfig &cfg)
{
  std::vector<int> s;
  s.reserve (cfg.n_plus + cfg.n_minus);
  for (int k = -cfg.n_minus; k <= cfg.n_plus; ++k)
    if (k != 0)
      s.push_back (k);
  return s;
}

namespace {

Placement
slot_placement (const ScenarioConfig &cfg, int k)
{
  if (k == 0)
    return {{0.0, 0.0}, std::nullopt};
  return {{k * cfg.l_v, 0.0}, k};
}

} // namespace

int
queue_index (const ScenarioConfig &cfg, const TransmitterLocation &t)
{
  int d = std::visit (Overload{
                          [] (const tx::Intersection &) { return 0; },
                          [&] (const tx::QueueEnd &) { return cfg.n_plus; },
                          [&] (const tx::QueueMiddle &) { return cfg.n_plus / 2; },
                          [] (const tx::QueueIndex &q) { return q.d; },
                          [] (const tx::RunningX &) -> int {
                            throw DomainError ("running transmitter has no queue index");
                          },
                      },
                      t);
  if (d < 0 || d > cfg.n_plus)
    throw DomainError ("queue index " + std::to_string (d) + " outside [0, n_plus]");
  return d;
}

Placement
resolve (const ScenarioConfig &cfg, const TransmitterLocation &t)
{
  if (auto *r = std::get_if<tx::RunningX> (&t))
    return {{r->x, 0.0}, std::nullopt};
  return slot_placement (cfg, queue_index (cfg, t));
}

Placement
resolve (const ScenarioConfig &cfg, const TransmitterLocation &t, const ReceiverSpec &r)
{
  Placement from = resolve (cfg, t);
  return std::visit (
      Overload{
          [&] (const rx::QueueVehicle &q) -> Placement {
            if (q.i < 1)
              throw DomainError ("queue receiver index must be >= 1");
            if (std::holds_alternative<tx::RunningX> (t))
              throw DomainError ("queue receivers need a queued or intersection transmitter");
            int d = queue_index (cfg, t);
            int k;
            if (d == 0)
              k = q.i;
            else
              k = (d - q.i > 0) ? d - q.i : d - q.i - 1;
            if (k > cfg.n_plus || k < -cfg.n_minus)
              throw DomainError ("queue receiver " + std::to_string (q.i) + " falls outside the queue");
            return slot_placement (cfg, k);
          },
          [&] (const rx::RunningX &x) -> Placement {
            if (!(x.r > 0.0))
              throw DomainError ("receiver distance must be > 0");
            double sign = x.side == Side::Positive ? 1.0 : -1.0;
            return {{from.pos.x + sign * x.r, 0.0}, std::nullopt};
          },
          [&] (const rx::RunningY &y) -> Placement {
            if (!(y.r > 0.0))
              throw DomainError ("receiver distance must be > 0");
            return {{0.0, y.r}, std::nullopt};
          },
      },
      r);
}

std::string
describe (const TransmitterLocation &t)
{
  std::ostringstream os;
  std::visit (Overload{
                  [&] (const tx::Intersection &) { os << "intersection"; },
                  [&] (const tx::QueueEnd &) { os << "queue-end"; },
                  [&] (const tx::QueueMiddle &) { os << "queue-middle"; },
                  [&] (const tx::QueueIndex &q) { os << "queue:" << q.d; },
                  [&] (const tx::RunningX &x) { os << "x:" << x.x; },
              },
              t);
  return os.str ();
}

std::string
describe (const ReceiverSpec &r)
{
  std::ostringstream os;
  std::visit (Overload{
                  [&] (const rx::QueueVehicle &q) { os << "queue:" << q.i; },
                  [&] (const rx::RunningX &x) {
                    os << "rx:" << (x.side == Side::Negative ? "-" : "") << x.r;
                  },
                  [&] (const rx::RunningY &y) { os << "ry:" << y.r; },
              },
              r);
  return os.str ();
}

} // namespace junction
