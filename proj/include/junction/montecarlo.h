#ifndef JUNCTION_MONTECARLO_H
#define JUNCTION_MONTECARLO_H

#include "junction/model.h"

#include <cstdint>
#include <random>
#include <vector>

namespace junction {

struct SimSpec
{
  double window_half_width = 2000.0;
  std::int64_t n_trials = 100000;
  std::uint64_t seed = 1;
  double ci_level = 0.95;
  // worker threads; 0 picks hardware_concurrency.  Results do not depend on it.
  unsigned threads = 0;
};

/*
 * One snapshot of the road.  Queue entries are the occupied slots k
 * (position k*lv); tx flags are parallel to each position list.
 */
struct Scene
{
  std::vector<int> queue_slots;
  std::vector<double> queue_positions;
  std::vector<double> running_x;
  std::vector<double> running_y;
  std::vector<bool> queue_tx;
  std::vector<bool> running_x_tx;
  std::vector<bool> running_y_tx;
};

using Rng = std::mt19937_64;

// Stream for partition `index` of a run seeded with `seed`.
Rng substream (std::uint64_t seed, std::uint64_t index);

Scene sample_scene (const ScenarioConfig &cfg, const SimSpec &spec, Rng &rng);

MetricEstimate binomial_estimate (std::int64_t successes, std::int64_t trials, double level);

MetricEstimate estimate_p (const ScenarioConfig &cfg, const TransmitterLocation &t,
                           const ReceiverSpec &r, const SimSpec &spec);

struct MeanEstimate
{
  MeanReceiverBreakdown mean;
  MetricEstimate q;
  MetricEstimate rx;
  MetricEstimate ry;
  MetricEstimate total;
};

MeanEstimate estimate_mean (const ScenarioConfig &cfg, const TransmitterLocation &t,
                            const SimSpec &spec);

} // namespace junction

#endif
