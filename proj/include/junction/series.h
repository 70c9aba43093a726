#ifndef JUNCTION_SERIES_H
#define JUNCTION_SERIES_H

#include <functional>

namespace junction {

// Which side of the window [n0+1, n0+n1] the crossover index eta falls on.
enum class QRegime { BelowWindow, InWindow, AboveWindow };

const char *regime_name (QRegime r);

struct QBounds
{
  double lower;
  double upper;
};

struct QApprox
{
  double value;
  QRegime regime;
};

/*
 * Sum of term(k) for k = 1, 2, ... for a series whose terms alternate in
 * sign and shrink.  Partial sums are averaged pairwise repeatedly.
 */
double alternating_sum (const std::function<double (int)> &term, double tol = 1e-14);

double zeta (double alpha);

// Bernoulli number B_j with B_1 = +1/2.
struct Rational
{
  __int128 num;
  __int128 den;
};
Rational bernoulli_exact (int j);
double bernoulli (int j);

// sum_{m=1}^{n} (n0 + m)^p from the Bernoulli expansion
double faulhaber_sum (long n0, long n, int p);
__int128 faulhaber_sum_exact (long n0, long n, int p);

double log_falling_factorial (long x, long k);
double stirling_log_falling_factorial (long x, long k);

/*
 * The q family.  r is dimensionless (a distance in units of l_v); every
 * function below evaluates sum_{m=1}^{n1} log(1 + T (r/(n0+m))^alpha) or
 * an approximation of it.
 */
double q_exact (int n0, double T, double r, int n1, double alpha);
int eta (int n0, double T, double r, double alpha);
QRegime q_regime (int n0, double T, double r, int n1, double alpha);
QApprox q_approx (int n0, double T, double r, int n1, int alpha);

double psi_head (int n0, double T, double r, int alpha);
double psi_tail (int n0, int n1, double T, double r, int alpha);
double phi_tail (int n0, int eta_value, int alpha);
double phi_head (int n0, int eta_value, int alpha);

QBounds q_bounds_upper_tail (int n0, double T, double r, int n1, int alpha);
QBounds q_bounds_head (int n0, double T, double r, int alpha);

double q_case1 (int n0, double T, double r, int n1, double alpha);
double q_case3 (int n0, double T, double r, int n1, int alpha);

} // namespace junction

#endif
