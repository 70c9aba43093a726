#include "junction/series.h"

#include "junction/approx.h"
#include "junction/model.h"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <vector>

namespace junction {

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kLog2Pi = 1.8378770664093453; // log(2 pi)

// Neumaier compensated accumulator.
class Sum
{
public:
  void add (double v)
  {
    double t = m_s + v;
    if (std::abs (m_s) >= std::abs (v))
      m_c += (m_s - t) + v;
    else
      m_c += (v - t) + m_s;
    m_s = t;
  }
  double value () const { return m_s + m_c; }

private:
  double m_s = 0.0;
  double m_c = 0.0;
};

__int128
gcd128 (__int128 a, __int128 b)
{
  if (a < 0)
    a = -a;
  if (b < 0)
    b = -b;
  while (b != 0)
    {
      __int128 t = a % b;
      a = b;
      b = t;
    }
  return a;
}

Rational
reduce (Rational q)
{
  if (q.den < 0)
    {
      q.num = -q.num;
      q.den = -q.den;
    }
  __int128 g = gcd128 (q.num, q.den);
  if (g > 1)
    {
      q.num /= g;
      q.den /= g;
    }
  return q;
}

Rational
add (Rational a, Rational b)
{
  __int128 g = gcd128 (a.den, b.den);
  return reduce ({a.num * (b.den / g) + b.num * (a.den / g), a.den / g * b.den});
}

__int128
binomial (int n, int k)
{
  __int128 c = 1;
  for (int j = 1; j <= k; ++j)
    c = c * (n - k + j) / j;
  return c;
}

constexpr int kMaxBernoulli = 30;

// log(n0! / sqrt(2 pi))
double
log_fact_over_root2pi (int n0)
{
  return std::lgamma (n0 + 1.0) - 0.5 * kLog2Pi;
}

void
require_integer_alpha (double alpha)
{
  if (!(alpha > 1.0) || std::floor (alpha) != alpha)
    throw DomainError ("this formula needs an integer alpha >= 2");
}

} // namespace

const char *
regime_name (QRegime r)
{
  switch (r)
    {
    case QRegime::BelowWindow:
      return "below";
    case QRegime::InWindow:
      return "window";
    case QRegime::AboveWindow:
      return "above";
    }
  return "?";
}

double
alternating_sum (const std::function<double (int)> &term, double tol)
{
  // diag[j] holds the j-times averaged partial sum ending at the newest term
  std::vector<double> diag;
  double partial = 0.0;
  double prev = NAN;
  int settled = 0;
  for (int k = 1; k <= 400; ++k)
    {
      double t = term (k);
      partial += t;
      if (std::abs (t) < tol * 1e-3)
        return partial;
      std::vector<double> next (diag.size () + 1);
      next[0] = partial;
      for (std::size_t j = 1; j < next.size (); ++j)
        next[j] = 0.5 * (diag[j - 1] + next[j - 1]);
      diag.swap (next);
      double est = diag.back ();
      if (std::abs (est - prev) < tol)
        {
          if (++settled >= 2)
            return est;
        }
      else
        settled = 0;
      prev = est;
    }
  throw NumericError ("alternating series did not settle");
}

double
zeta (double alpha)
{
  if (!(alpha > 1.0))
    throw DomainError ("zeta needs alpha > 1");
  // sum_{m<n} m^-a, then the Euler-Maclaurin tail from n with B2, B4, B6
  auto rising = [alpha] (int j) {
    double v = 1.0;
    for (int i = 0; i < j; ++i)
      v *= alpha + i;
    return v;
  };
  int n = 8;
  while (rising (7) / 1209600.0 * std::pow (n, -alpha - 7.0) > 1e-12 * 1e-3)
    n *= 2;
  Sum s;
  for (int m = n - 1; m >= 1; --m)
    s.add (std::pow (m, -alpha));
  double nn = n;
  s.add (std::pow (nn, 1.0 - alpha) / (alpha - 1.0));
  s.add (0.5 * std::pow (nn, -alpha));
  s.add (rising (1) / 12.0 * std::pow (nn, -alpha - 1.0));
  s.add (-rising (3) / 720.0 * std::pow (nn, -alpha - 3.0));
  s.add (rising (5) / 30240.0 * std::pow (nn, -alpha - 5.0));
  return s.value ();
}

Rational
bernoulli_exact (int j)
{
  if (j < 0 || j > kMaxBernoulli)
    throw DomainError ("Bernoulli index out of supported range [0, 30]");
  static std::once_flag once;
  static std::array<Rational, kMaxBernoulli + 1> table;
  std::call_once (once, [] {
    // B_m = -sum_{k<m} C(m+1,k) B_k / (m+1), the B1 = -1/2 convention
    table[0] = {1, 1};
    for (int m = 1; m <= kMaxBernoulli; ++m)
      {
        Rational acc{0, 1};
        for (int k = 0; k < m; ++k)
          acc = add (acc, reduce ({binomial (m + 1, k) * table[k].num, table[k].den}));
        table[m] = reduce ({-acc.num, acc.den * (m + 1)});
      }
    table[1] = {1, 2};
  });
  return table[j];
}

double
bernoulli (int j)
{
  Rational q = bernoulli_exact (j);
  return static_cast<double> (q.num) / static_cast<double> (q.den);
}

namespace {

// sum_{m=1}^{N} m^p
Rational
power_sum (long N, int p)
{
  Rational acc{0, 1};
  for (int j = 0; j <= p; ++j)
    {
      Rational b = bernoulli_exact (j);
      if (b.num == 0)
        continue;
      __int128 pw = 1;
      for (int e = 0; e < p + 1 - j; ++e)
        pw *= N;
      acc = add (acc, reduce ({binomial (p + 1, j) * b.num * pw, b.den}));
    }
  return reduce ({acc.num, acc.den * (p + 1)});
}

} // namespace

__int128
faulhaber_sum_exact (long n0, long n, int p)
{
  if (n0 < 0 || n < 1 || p < 1)
    throw DomainError ("faulhaber_sum needs n0 >= 0, n >= 1, p >= 1");
  Rational hi = power_sum (n0 + n, p);
  Rational lo = power_sum (n0, p);
  Rational d = add (hi, {-lo.num, lo.den});
  if (d.den != 1)
    throw NumericError ("Faulhaber expansion produced a non-integer");
  return d.num;
}

double
faulhaber_sum (long n0, long n, int p)
{
  if (n0 < 0 || n < 1 || p < 1)
    throw DomainError ("faulhaber_sum needs n0 >= 0, n >= 1, p >= 1");
  auto S = [p] (long N) {
    long double acc = 0.0L;
    for (int j = 0; j <= p; ++j)
      acc += static_cast<long double> (binomial (p + 1, j)) * bernoulli (j)
             * std::pow (static_cast<long double> (N), p + 1 - j);
    return acc / (p + 1);
  };
  return static_cast<double> (S (n0 + n) - S (n0));
}

double
log_falling_factorial (long x, long k)
{
  if (k < 0 || k > x)
    throw DomainError ("falling factorial needs 0 <= k <= x");
  Sum s;
  for (long j = 0; j < k; ++j)
    s.add (std::log (static_cast<double> (x - j)));
  return s.value ();
}

double
stirling_log_falling_factorial (long x, long k)
{
  if (k < 0 || k > x)
    throw DomainError ("falling factorial needs 0 <= k <= x");
  if (k == 0)
    return 0.0;
  double xd = static_cast<double> (x);
  return xd * std::log (xd) - xd + 0.5 * (kLog2Pi + std::log (xd))
         - std::lgamma (static_cast<double> (x - k) + 1.0);
}

double
q_exact (int n0, double T, double r, int n1, double alpha)
{
  Sum s;
  for (int m = 1; m <= n1; ++m)
    s.add (std::log1p (T * std::pow (r / (n0 + m), alpha)));
  return s.value ();
}

int
eta (int n0, double T, double r, double alpha)
{
  auto below = [&] (long m) { return T * std::pow (r / (n0 + m), alpha) < 1.0; };
  double t = std::pow (T, 1.0 / alpha) * r;
  long m = std::max (1L, static_cast<long> (std::floor (t)) - n0 + 1);
  while (m > 1 && below (m - 1))
    --m;
  while (!below (m))
    ++m;
  return static_cast<int> (m - 1);
}

QRegime
q_regime (int n0, double T, double r, int n1, double alpha)
{
  int e = eta (n0, T, r, alpha);
  if (e == 0)
    return QRegime::BelowWindow;
  if (e < n1)
    return QRegime::InWindow;
  return QRegime::AboveWindow;
}

double
psi_head (int n0, double T, double r, int alpha)
{
  if (n0 == 0)
    return 0.0;
  double y = std::pow (n0 / r, alpha) / T;
  if (y > 1.0)
    throw DomainError ("head psi series diverges: (n0/r)^alpha / T > 1");
  return n0 * alternating_sum ([=] (int k) {
           double s = (k % 2 == 1) ? 1.0 : -1.0;
           return s * std::pow (y, k) / (k * (alpha * k + 1.0));
         });
}

double
psi_tail (int n0, int n1, double T, double r, int alpha)
{
  double N = n0 + n1;
  double x = T * std::pow (r / N, alpha);
  if (x > 1.0)
    throw DomainError ("tail psi series diverges: T (r/(n0+n1))^alpha > 1");
  return N * alternating_sum ([=] (int k) {
           double s = (k % 2 == 1) ? 1.0 : -1.0;
           return s * std::pow (x, k) / (k * (alpha * k - 1.0));
         });
}

double
phi_tail (int n0, int eta_value, int alpha)
{
  if (n0 + eta_value < 1)
    throw DomainError ("phi needs n0 + eta >= 1");
  double y = std::pow (1.0 + 1.0 / (n0 + eta_value), -alpha);
  return alternating_sum ([=] (int k) {
    double s = (k % 2 == 1) ? 1.0 : -1.0;
    return s * std::pow (y, k) / (k * (alpha * k - 1.0));
  });
}

double
phi_head (int n0, int eta_value, int alpha)
{
  if (n0 + eta_value < 1)
    throw DomainError ("phi needs n0 + eta >= 1");
  double y = std::pow (1.0 + 1.0 / (n0 + eta_value), -alpha);
  return alternating_sum ([=] (int k) {
    double s = (k % 2 == 1) ? 1.0 : -1.0;
    return s * std::pow (y, k) / (k * (alpha * k + 1.0));
  });
}

QBounds
q_bounds_upper_tail (int n0, double T, double r, int n1, int alpha)
{
  int e = eta (n0, T, r, alpha);
  if (e < 1 || e >= n1)
    throw DomainError ("tail bounds need 1 <= eta < n1");
  double k1 = kappas (alpha).first;
  double M = n0 + e;
  double N = n0 + n1;
  double x = T * std::pow (r / N, alpha);
  double y = std::pow (1.0 + 1.0 / M, -alpha);
  double psi = psi_tail (n0, n1, T, r, alpha);
  double common = -psi + 0.5 * std::log1p (x);
  QBounds b;
  b.upper = (k1 - kLog2) * (M + 1.0) + common + 0.5 * kLog2;
  b.lower = phi_tail (n0, e, alpha) * (M + 1.0) + common + 0.5 * std::log1p (y);
  return b;
}

QBounds
q_bounds_head (int n0, double T, double r, int alpha)
{
  int e = eta (n0, T, r, alpha);
  if (e < 1)
    throw DomainError ("head bounds need eta >= 1");
  double k2 = kappas (alpha).second;
  double M = n0 + e;
  double y = std::pow (1.0 + 1.0 / M, -alpha);
  double common = -psi_head (n0, T, r, alpha)
                  - 0.5 * std::log1p (std::pow (n0 / r, alpha) / T)
                  - alpha * (n0 + 0.5) * std::log (M) + alpha * log_fact_over_root2pi (n0);
  QBounds b;
  b.upper = (alpha + kLog2 - k2) * M + common + alpha * std::log1p (1.0 / M) * e + 0.5 * kLog2;
  b.lower = (alpha + phi_head (n0, e, alpha)) * M + common + 0.5 * std::log1p (y);
  return b;
}

double
q_case1 (int n0, double T, double r, int n1, double alpha)
{
  if (!(T * std::pow (r / (n0 + 1.0), alpha) < 1.0))
    throw DomainError ("q_case1 needs T (r/(n0+1))^alpha < 1");
  if (r == 0.0)
    return 0.0;
  if (n0 == 0)
    return zeta (alpha) * T * std::pow (r, alpha);
  double N = n0 + n1;
  return T * (n0 / (alpha - 1.0) - 0.5) * std::pow (r / n0, alpha)
         - T * (N / (alpha - 1.0) - 0.5) * std::pow (r / N, alpha);
}

double
q_case3 (int n0, double T, double r, int n1, int alpha)
{
  if (eta (n0, T, r, alpha) < n1)
    throw DomainError ("q_case3 needs T (r/(n0+n1))^alpha >= 1");
  double N = n0 + n1;
  double a = alpha;
  return a * n1 * std::log (std::pow (T, 1.0 / a) * r) + a * N + a * log_fact_over_root2pi (n0)
         - a * (N + 0.5) * std::log (N) + (N / (a + 1.0) + 0.5) * std::pow (N / r, a) / T
         - (n0 / (a + 1.0) + 0.5) * std::pow (n0 / r, a) / T;
}

QApprox
q_approx (int n0, double T, double r, int n1, int alpha)
{
  require_integer_alpha (alpha);
  QRegime reg = q_regime (n0, T, r, n1, alpha);
  double a = alpha;
  double N = n0 + n1;
  switch (reg)
    {
    case QRegime::BelowWindow:
      if (n0 == 0)
        return {zeta (a) * T * std::pow (r, a), reg};
      return {T / (a - 1.0) * (std::pow (n0, 1.0 - a) - std::pow (N, 1.0 - a)) * std::pow (r, a),
              reg};
    case QRegime::InWindow:
      {
        auto [k1, k2] = kappas (alpha);
        double t = std::pow (T, 1.0 / a) * r;
        double v = (a + k1 - k2) * t - a * (n0 + 0.5) * std::log (t)
                   - T * std::pow (r, a) / ((a - 1.0) * std::pow (N, a - 1.0))
                   + 0.5 * std::log1p (T * std::pow (r / N, a)) - psi_head (n0, T, r, alpha)
                   - 0.5 * std::log1p (std::pow (n0 / r, a) / T) + k1
                   + a * log_fact_over_root2pi (n0) + kLog2;
        return {v, reg};
      }
    case QRegime::AboveWindow:
      return {q_case3 (n0, T, r, n1, alpha), reg};
    }
  return {NAN, reg};
}

} // namespace junction
