#ifndef JUNCTION_EXACT_H
#define JUNCTION_EXACT_H

#include "junction/model.h"

#include <vector>

namespace junction {

struct QuadratureSpec
{
  double abs_tol = 1e-12;
  double rel_tol = 1e-8;
  // maximum bisection depth of the adaptive Gauss-Kronrod rule
  int max_subdivisions = 15;
  // hard cap on how far running-segment integrals may extend [m]
  double truncation_radius = 1e6;
};

/*
 * Laplace transform of the queue interference seen at rx.  Queued vehicles
 * listed in `silent` (the tagged transmitter and receiver) are left out.
 * Throws DomainError if rx sits on a vehicle that is part of the product.
 */
double laplace_queue (const ScenarioConfig &cfg, Point rx, double s,
                      const std::vector<int> &silent = {});

// Running vehicles on the x-street; independent of the receiver position.
double laplace_running_x (const ScenarioConfig &cfg, double s, const QuadratureSpec &quad = {});

// Running vehicles on the y-street, receiver at distance d from that street.
double laplace_running_y (const ScenarioConfig &cfg, double d, double s,
                          const QuadratureSpec &quad = {});

/*
 * integral over the whole line of s / (mu (y^2 + off^2)^(alpha/2) + s) dy.
 * Exposed for testing.
 */
double street_integral (double alpha, double mu, double off, double s,
                        const QuadratureSpec &quad = {});

double success_prob (const ScenarioConfig &cfg, const TransmitterLocation &t,
                     const ReceiverSpec &r, const QuadratureSpec &quad = {});

// Same, at an arbitrary receiver point; rx_slot marks a queued receiver.
double success_prob_at (const ScenarioConfig &cfg, Placement tx, Placement rx,
                        const QuadratureSpec &quad = {});

MetricEstimate success_estimate (const ScenarioConfig &cfg, const TransmitterLocation &t,
                                 const ReceiverSpec &r, const QuadratureSpec &quad = {});

MeanReceiverBreakdown mean_receivers (const ScenarioConfig &cfg, int d,
                                      const QuadratureSpec &quad = {});

} // namespace junction

#endif
