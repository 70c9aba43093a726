#ifndef JUNCTION_APPROX_H
#define JUNCTION_APPROX_H

#include "junction/model.h"

#include <utility>

namespace junction {

struct ApproxConstants
{
  double kappa1;
  double kappa2;
  double c_x;
  double c_y;
};

std::pair<double, double> kappas (int alpha);
std::pair<double, double> c_constants (int alpha, double T);
// memoized per (alpha, T)
ApproxConstants approx_constants (int alpha, double T);

double xi (int alpha, double T, double rho);
double beta (int alpha, double T, double rho);

struct ApproxP
{
  double value;
  // raw formula exceeded 1 and was clamped
  bool clamped = false;
  // (1-rho) T < 1
  bool out_of_regime = false;
};

ApproxP approx_p (const ScenarioConfig &cfg, CaseLabel c, const ReceiverSpec &r);

// Per-step ratio p(i+1)/p(i) for queue receivers.
double geometric_ratio (const ScenarioConfig &cfg, CaseLabel c);

MeanReceiverBreakdown approx_mean (const ScenarioConfig &cfg, CaseLabel c);

} // namespace junction

#endif
