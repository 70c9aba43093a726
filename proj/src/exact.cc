#include "junction/exact.h"

#include "quadrature.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace junction {

namespace {

constexpr double kPi = std::numbers::pi;

// Integral over the line of 1/(|u|^a + 1): 2 (pi/a) / sin(pi/a).
double
unit_line_integral (double alpha)
{
  return 2.0 * (kPi / alpha) / std::sin (kPi / alpha);
}

bool
is_silent (int k, const std::vector<int> &silent)
{
  return std::find (silent.begin (), silent.end (), k) != silent.end ();
}

// Queue Laplace product; a vehicle sitting exactly on the receiver
// contributes its d -> 0 limit 1 - rho.
double
queue_product (const ScenarioConfig &cfg, Point rx, double s, const std::vector<int> &silent,
               bool strict)
{
  if (s == 0.0 || cfg.rho == 0.0)
    return 1.0;
  double prod = 1.0;
  for (int k : queue_slots (cfg))
    {
      if (is_silent (k, silent))
        continue;
      double d = std::hypot (rx.x - k * cfg.l_v, rx.y);
      if (d == 0.0)
        {
          if (strict)
            throw DomainError ("receiver coincides with queued vehicle " + std::to_string (k));
          prod *= 1.0 - cfg.rho;
          continue;
        }
      double ratio = s / (cfg.mu * std::pow (d, cfg.alpha));
      prod *= cfg.rho / (1.0 + ratio) + 1.0 - cfg.rho;
    }
  return prod;
}

double
street_factor (const ScenarioConfig &cfg, double lambda, double off, double s,
               const QuadratureSpec &quad)
{
  if (lambda == 0.0 || cfg.rho_0 == 0.0 || s == 0.0)
    return 1.0;
  return std::exp (-cfg.rho_0 * lambda * street_integral (cfg.alpha, cfg.mu, off, s, quad));
}

std::vector<int>
silent_slots (const Placement &a, const Placement &b)
{
  std::vector<int> v;
  if (a.slot)
    v.push_back (*a.slot);
  if (b.slot)
    v.push_back (*b.slot);
  return v;
}

// Decay rate a with p(r) <= exp(-a r) from the receiver's own street alone.
double
own_street_rate (const ScenarioConfig &cfg, double lambda)
{
  return cfg.rho_0 * lambda * std::pow (cfg.t_threshold, 1.0 / cfg.alpha)
         * unit_line_integral (cfg.alpha);
}

// Distance R beyond which the scaled tail integral drops below tol.
double
tail_radius (double scale, double rate, double tol, double cap)
{
  double r = std::log (scale / (rate * tol)) / rate;
  return std::clamp (r, 0.0, cap);
}

} // namespace

double
street_integral (double alpha, double mu, double off, double s, const QuadratureSpec &quad)
{
  if (s == 0.0)
    return 0.0;
  double c = std::pow (s / mu, 1.0 / alpha);
  double delta = std::abs (off) / c;
  if (delta == 0.0)
    return c * unit_line_integral (alpha);
  if (alpha == 4.0)
    {
      std::complex<double> z = 1.0 / std::sqrt (std::complex<double> (delta * delta, 1.0));
      return c * kPi * std::abs (z.imag ());
    }
  double d2 = delta * delta;
  auto f = [alpha, d2] (double u) { return 1.0 / (std::pow (u * u + d2, alpha / 2.0) + 1.0); };
  // [0, m] directly, [m, inf) through u = m / w^2 so the algebraic tail
  // becomes a smooth power of w on (0, 1]
  double m = std::max (delta, 1.0);
  auto g = [&f, m] (double w) { return w == 0.0 ? 0.0 : 2.0 * m / (w * w * w) * f (m / (w * w)); };
  return 2.0 * c * (detail::integrate (f, 0.0, m, quad) + detail::integrate (g, 0.0, 1.0, quad));
}

double
laplace_queue (const ScenarioConfig &cfg, Point rx, double s, const std::vector<int> &silent)
{
  if (s < 0.0)
    throw DomainError ("Laplace argument must be >= 0");
  return queue_product (cfg, rx, s, silent, true);
}

double
laplace_running_x (const ScenarioConfig &cfg, double s, const QuadratureSpec &quad)
{
  if (s < 0.0)
    throw DomainError ("Laplace argument must be >= 0");
  return street_factor (cfg, cfg.lambda_x, 0.0, s, quad);
}

double
laplace_running_y (const ScenarioConfig &cfg, double d, double s, const QuadratureSpec &quad)
{
  if (s < 0.0 || d < 0.0)
    throw DomainError ("Laplace argument and distance must be >= 0");
  return street_factor (cfg, cfg.lambda_y, d, s, quad);
}

double
success_prob_at (const ScenarioConfig &cfg, Placement tx, Placement rx,
                 const QuadratureSpec &quad)
{
  double r = distance (tx.pos, rx.pos);
  if (r == 0.0)
    throw DomainError ("receiver coincides with transmitter");
  double s = cfg.mu * cfg.t_threshold * std::pow (r, cfg.alpha);
  double lq = queue_product (cfg, rx.pos, s, silent_slots (tx, rx), false);
  double lx = street_factor (cfg, cfg.lambda_x, rx.pos.y, s, quad);
  double ly = street_factor (cfg, cfg.lambda_y, rx.pos.x, s, quad);
  return lq * lx * ly;
}

double
success_prob (const ScenarioConfig &cfg, const TransmitterLocation &t, const ReceiverSpec &r,
              const QuadratureSpec &quad)
{
  return success_prob_at (cfg, resolve (cfg, t), resolve (cfg, t, r), quad);
}

MetricEstimate
success_estimate (const ScenarioConfig &cfg, const TransmitterLocation &t,
                  const ReceiverSpec &r, const QuadratureSpec &quad)
{
  MetricEstimate e;
  e.value = success_prob (cfg, t, r, quad);
  e.ci_low = e.ci_high = e.value;
  e.n_samples = 0;
  e.abs_tol = std::max (quad.rel_tol * e.value, quad.abs_tol);
  return e;
}

MeanReceiverBreakdown
mean_receivers (const ScenarioConfig &cfg, int d, const QuadratureSpec &quad)
{
  const Placement tx = resolve (cfg, tx::QueueIndex{d});
  MeanReceiverBreakdown out;

  double sum = 0.0;
  for (int k : queue_slots (cfg))
    {
      if (tx.slot && *tx.slot == k)
        continue;
      sum += success_prob_at (cfg, tx, {{k * cfg.l_v, 0.0}, k}, quad);
    }
  out.m_q = (1.0 - cfg.rho) * sum;

  auto p_at = [&] (Point at) {
    if (at.x == tx.pos.x && at.y == tx.pos.y)
      return 1.0;
    return success_prob_at (cfg, tx, {at, std::nullopt}, quad);
  };

  if (cfg.lambda_x > 0.0)
    {
      if (cfg.rho_0 == 0.0)
        throw NumericError ("x-street receiver count diverges when rho_0 = 0");
      double scale = (1.0 - cfg.rho_0) * cfg.lambda_x;
      double rate = own_street_rate (cfg, cfg.lambda_x);
      double reach = tail_radius (scale, rate, quad.abs_tol, quad.truncation_radius);

      std::vector<double> cuts;
      for (int k : queue_slots (cfg))
        cuts.push_back (k * cfg.l_v);
      cuts.push_back (0.0);
      cuts.push_back (tx.pos.x);
      cuts.push_back (tx.pos.x - reach);
      cuts.push_back (tx.pos.x + reach);
      std::sort (cuts.begin (), cuts.end ());
      cuts.erase (std::unique (cuts.begin (), cuts.end ()), cuts.end ());

      auto f = [&] (double x) { return p_at ({x, 0.0}); };
      double acc = 0.0;
      for (std::size_t j = 0; j + 1 < cuts.size (); ++j)
        {
          double a = std::max (cuts[j], tx.pos.x - reach);
          double b = std::min (cuts[j + 1], tx.pos.x + reach);
          if (b > a)
            acc += detail::integrate (f, a, b, quad);
        }
      out.m_rx = scale * acc;
      out.abs_tol += 2.0 * scale * std::exp (-rate * reach) / rate;
    }

  if (cfg.lambda_y > 0.0)
    {
      if (cfg.rho_0 == 0.0)
        throw NumericError ("y-street receiver count diverges when rho_0 = 0");
      double scale = (1.0 - cfg.rho_0) * cfg.lambda_y;
      double rate = own_street_rate (cfg, cfg.lambda_y);
      double reach = tail_radius (scale, rate, quad.abs_tol, quad.truncation_radius);
      auto g = [&] (double y) { return p_at ({0.0, y}); };
      // p(0, y) is even in y
      double knee = std::min (reach, std::max (std::abs (tx.pos.x), 50.0));
      double acc = detail::integrate (g, 0.0, knee, quad);
      if (reach > knee)
        acc += detail::integrate (g, knee, reach, quad);
      out.m_ry = 2.0 * scale * acc;
      out.abs_tol += 2.0 * scale * std::exp (-rate * reach) / rate;
    }
  return out;
}

} // namespace junction
