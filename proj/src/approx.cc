#include "junction/approx.h"

#include "junction/exact.h"
#include "junction/series.h"
#include "overload.h"
#include "quadrature.h"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>

namespace junction {

namespace {

constexpr double kPi = std::numbers::pi;

int
integer_alpha (double alpha)
{
  if (!(alpha >= 2.0) || std::floor (alpha) != alpha)
    throw DomainError ("closed-form approximations need an integer alpha >= 2");
  return static_cast<int> (alpha);
}

double
sign_of (int k)
{
  return (k % 2 == 1) ? 1.0 : -1.0;
}

// Shared pieces of every closed form for one configuration.
struct Terms
{
  double T, rho, rho0, lv;
  double xi, beta;
  double pref;   // (1+T)/(1+(1-rho)T)
  double street; // rho0 (lambda_x c_x + lambda_y c_y), per metre
  double street_x;
  double extra;  // rho/((alpha+1)(1-rho)T)
};

Terms
terms_for (const ScenarioConfig &cfg)
{
  int a = integer_alpha (cfg.alpha);
  ApproxConstants k = approx_constants (a, cfg.t_threshold);
  Terms t;
  t.T = cfg.t_threshold;
  t.rho = cfg.rho;
  t.rho0 = cfg.rho_0;
  t.lv = cfg.l_v;
  t.xi = xi (a, t.T, t.rho);
  t.beta = beta (a, t.T, t.rho);
  t.pref = (1.0 + t.T) / (1.0 + (1.0 - t.rho) * t.T);
  t.street_x = t.rho0 * cfg.lambda_x * k.c_x;
  t.street = t.street_x + t.rho0 * cfg.lambda_y * k.c_y;
  t.extra = t.rho / ((a + 1.0) * (1.0 - t.rho) * t.T);
  return t;
}

// integral of exp(rate * r) over r > 0
double
decay_integral (double rate)
{
  if (!(rate < 0.0))
    throw DomainError ("divergent approximation: non-negative decay exponent");
  return -1.0 / rate;
}

ScenarioConfig
without_y (ScenarioConfig cfg)
{
  cfg.lambda_y = 0.0;
  return cfg;
}

double
p_case_a (const Terms &t, const ReceiverSpec &r)
{
  return std::visit (
      detail::Overload{
          [&] (const rx::QueueVehicle &q) {
            if (q.i < 1)
              throw DomainError ("queue receiver index must be >= 1");
            return t.pref / (1.0 - t.rho) * std::exp ((2.0 * t.xi - t.street * t.lv) * q.i);
          },
          [&] (const rx::RunningX &x) {
            return t.pref * std::exp ((2.0 * t.xi / t.lv - t.street) * x.r);
          },
          [&] (const rx::RunningY &y) {
            double rate = 2.0 * t.xi / t.lv - 2.0 * t.extra / t.lv - t.street;
            return std::pow (1.0 - t.rho, -2.0 * y.r / t.lv) * t.pref * std::exp (rate * y.r);
          },
      },
      r);
}

double
p_case_b (const Terms &t, const ReceiverSpec &r)
{
  double e0 = std::exp (t.rho / (2.0 * (1.0 - t.rho) * t.T));
  return std::visit (
      detail::Overload{
          [&] (const rx::QueueVehicle &q) {
            if (q.i < 1)
              throw DomainError ("queue receiver index must be >= 1");
            return e0 * std::pow (1.0 - t.rho, q.i - 0.5) * t.pref
                   * std::exp ((t.beta - t.street_x * t.lv) * q.i);
          },
          [&] (const rx::RunningX &x) {
            if (x.side == Side::Negative)
              return e0 * std::pow (1.0 - t.rho, x.r / t.lv + 0.5) * t.pref
                     * std::exp ((t.beta / t.lv - t.street_x) * x.r);
            double rate = t.xi / t.lv - t.extra / t.lv - t.street_x;
            return std::sqrt (t.pref) * std::pow (1.0 - t.rho, -x.r / t.lv)
                   * std::exp (rate * x.r);
          },
          [&] (const rx::RunningY &) -> double {
            throw DomainError ("case B has no y-street receiver approximation");
          },
      },
      r);
}

} // namespace

std::pair<double, double>
kappas (int alpha)
{
  if (alpha < 2)
    throw DomainError ("kappas need alpha >= 2");
  double a = alpha;
  double k1 = a * alternating_sum ([a] (int k) { return sign_of (k) / (a * k - 1.0); });
  double k2 = a * alternating_sum ([a] (int k) { return sign_of (k) / (a * k + 1.0); });
  return {k1, k2};
}

std::pair<double, double>
c_constants (int alpha, double T)
{
  if (alpha < 2)
    throw DomainError ("c constants need alpha >= 2");
  if (!(T > 0.0))
    throw DomainError ("c constants need T > 0");
  double a = alpha;
  double cx = std::pow (T, 1.0 / a) * 2.0 * (kPi / a) / std::sin (kPi / a);
  double cy;
  if (alpha == 2)
    cy = kPi * T / std::sqrt (1.0 + T);
  else if (alpha == 4)
    cy = kPi * std::sqrt (T) * std::sqrt (std::sqrt (1.0 + T) - 1.0)
         / (std::sqrt (2.0) * std::sqrt (1.0 + T));
  else
    {
      auto f = [a, T] (double y) { return 1.0 / (std::pow (y * y + 1.0, a / 2.0) + T); };
      QuadratureSpec q;
      q.rel_tol = 1e-12;
      cy = 2.0 * T * detail::integrate (f, 0.0, std::numeric_limits<double>::infinity (), q);
    }
  return {cx, cy};
}

ApproxConstants
approx_constants (int alpha, double T)
{
  static std::shared_mutex mtx;
  static std::map<std::pair<int, double>, ApproxConstants> cache;
  const auto key = std::make_pair (alpha, T);
  {
    std::shared_lock lock (mtx);
    auto it = cache.find (key);
    if (it != cache.end ())
      return it->second;
  }
  auto [k1, k2] = kappas (alpha);
  auto [cx, cy] = c_constants (alpha, T);
  ApproxConstants c{k1, k2, cx, cy};
  std::unique_lock lock (mtx);
  cache.emplace (key, c);
  return c;
}

double
xi (int alpha, double T, double rho)
{
  ApproxConstants k = approx_constants (alpha, T);
  double a = alpha;
  return (a + k.kappa1 - k.kappa2) * (std::pow (1.0 - rho, 1.0 / a) - 1.0) * std::pow (T, 1.0 / a);
}

double
beta (int alpha, double T, double rho)
{
  return xi (alpha, T, rho) + rho / ((1.0 - rho) * (alpha + 1.0) * T);
}

ApproxP
approx_p (const ScenarioConfig &cfg, CaseLabel c, const ReceiverSpec &r)
{
  double raw;
  switch (c)
    {
    case CaseLabel::A:
      raw = p_case_a (terms_for (cfg), r);
      break;
    case CaseLabel::C:
      if (std::holds_alternative<rx::RunningY> (r))
        throw DomainError ("case C has no y-street receiver approximation");
      raw = p_case_a (terms_for (without_y (cfg)), r);
      break;
    default:
      raw = p_case_b (terms_for (cfg), r);
      break;
    }
  ApproxP out;
  out.value = std::min (raw, 1.0);
  out.clamped = raw > 1.0;
  out.out_of_regime = (1.0 - cfg.rho) * cfg.t_threshold < 1.0;
  return out;
}

double
geometric_ratio (const ScenarioConfig &cfg, CaseLabel c)
{
  if (c == CaseLabel::B)
    {
      Terms t = terms_for (cfg);
      return (1.0 - t.rho) * std::exp (t.beta - t.street_x * t.lv);
    }
  Terms t = terms_for (c == CaseLabel::C ? without_y (cfg) : cfg);
  return std::exp (2.0 * t.xi - t.street * t.lv);
}

MeanReceiverBreakdown
approx_mean (const ScenarioConfig &cfg, CaseLabel c)
{
  MeanReceiverBreakdown m;
  if (c == CaseLabel::B)
    {
      Terms t = terms_for (cfg);
      double root = std::sqrt (1.0 - t.rho);
      double e0 = std::exp (t.rho / (2.0 * (1.0 - t.rho) * t.T));
      double g = (1.0 - t.rho) * std::exp (t.beta - t.street_x * t.lv);
      if (!(g < 1.0))
        throw DomainError ("divergent approximation: geometric ratio >= 1");
      m.m_q = root * e0 * t.pref * g / (1.0 - g);
      if (cfg.lambda_x > 0.0)
        {
          double scale = (1.0 - t.rho0) * cfg.lambda_x * t.lv;
          double toward = t.beta + std::log (1.0 - t.rho) - t.street_x * t.lv;
          double away = t.xi - std::log (1.0 - t.rho) - t.extra - t.street_x * t.lv;
          m.m_rx = root * e0 * t.pref * scale * decay_integral (toward)
                   + scale * std::sqrt (t.pref) * decay_integral (away);
        }
      return m;
    }

  const ScenarioConfig used = c == CaseLabel::C ? without_y (cfg) : cfg;
  Terms t = terms_for (used);
  double step = 2.0 * t.xi - t.street * t.lv;
  double g = std::exp (step);
  if (!(g < 1.0))
    throw DomainError ("divergent approximation: geometric ratio >= 1");
  m.m_q = 2.0 * t.pref * g / (1.0 - g);
  if (used.lambda_x > 0.0)
    m.m_rx = t.pref * 2.0 * (1.0 - t.rho0) * used.lambda_x * t.lv * decay_integral (step);
  if (used.lambda_y > 0.0)
    {
      double rate = 2.0 * t.xi - 2.0 * std::log (1.0 - t.rho) - 2.0 * t.extra - t.street * t.lv;
      m.m_ry = 2.0 * (1.0 - t.rho0) * used.lambda_y * t.lv * t.pref * decay_integral (rate);
    }
  return m;
}

} // namespace junction
