#include "junction/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace junction {

namespace {

constexpr std::int64_t kBlock = 4096;

std::uint64_t
splitmix64 (std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline double
uniform01 (Rng &rng)
{
  return static_cast<double> (rng () >> 11) * 0x1.0p-53;
}

// unit-mean exponential
inline double
exp1 (Rng &rng)
{
  return -std::log1p (-uniform01 (rng));
}

long
poisson (Rng &rng, double mean)
{
  if (mean <= 0.0)
    return 0;
  if (mean < 40.0)
    {
      double limit = std::exp (-mean);
      double prod = uniform01 (rng);
      long k = 0;
      while (prod > limit)
        {
          prod *= uniform01 (rng);
          ++k;
        }
      return k;
    }
  std::poisson_distribution<long> dist (mean);
  return dist (rng);
}

// failures before the first success of a Bernoulli(p) sequence
inline long
geometric_skip (Rng &rng, double log1m_p)
{
  double u = 1.0 - uniform01 (rng); // (0, 1]
  double v = std::floor (std::log (u) / log1m_p);
  return v > 1e15 ? std::numeric_limits<long>::max () / 2 : static_cast<long> (v);
}

inline double
path_gain (double d2, double alpha)
{
  if (alpha == 4.0)
    return 1.0 / (d2 * d2);
  return std::pow (d2, -0.5 * alpha);
}

double
z_value (double level)
{
  boost::math::normal n;
  return boost::math::quantile (n, 0.5 + 0.5 * level);
}

/*
 * Runs `body(block_index, rng, n)` over fixed-size blocks on a worker pool
 * and returns the per-block results in block order.
 */
template <class R>
std::vector<R>
run_blocks (const SimSpec &spec, const std::function<R (Rng &, std::int64_t)> &body)
{
  if (spec.n_trials < 1)
    throw DomainError ("n_trials must be >= 1");
  std::int64_t blocks = (spec.n_trials + kBlock - 1) / kBlock;
  std::vector<R> out (static_cast<std::size_t> (blocks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;)
      {
        std::int64_t b = next.fetch_add (1);
        if (b >= blocks)
          return;
        Rng rng = substream (spec.seed, static_cast<std::uint64_t> (b));
        std::int64_t n = std::min (kBlock, spec.n_trials - b * kBlock);
        out[static_cast<std::size_t> (b)] = body (rng, n);
      }
  };
  unsigned threads = spec.threads ? spec.threads : std::max (1u, std::thread::hardware_concurrency ());
  threads = static_cast<unsigned> (std::min<std::int64_t> (threads, blocks));
  if (threads <= 1)
    worker ();
  else
    {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < threads; ++i)
        pool.emplace_back (worker);
      for (auto &th : pool)
        th.join ();
    }
  return out;
}

struct Moments
{
  std::int64_t sum = 0;
  std::int64_t sumsq = 0;
  void add (std::int64_t v)
  {
    sum += v;
    sumsq += v * v;
  }
};

MetricEstimate
mean_estimate (const Moments &m, std::int64_t n, double level)
{
  MetricEstimate e;
  double nn = static_cast<double> (n);
  e.value = m.sum / nn;
  double var = n > 1 ? (m.sumsq - nn * e.value * e.value) / (nn - 1.0) : 0.0;
  double half = z_value (level) * std::sqrt (std::max (var, 0.0) / nn);
  e.ci_low = std::max (0.0, e.value - half);
  e.ci_high = e.value + half;
  e.n_samples = n;
  return e;
}

} // namespace

Rng
substream (std::uint64_t seed, std::uint64_t index)
{
  return Rng (splitmix64 (splitmix64 (seed) ^ splitmix64 (index + 0x632BE59BD9B4E019ULL)));
}

Scene
sample_scene (const ScenarioConfig &cfg, const SimSpec &spec, Rng &rng)
{
  Scene s;
  const double W = spec.window_half_width;
  for (int k : queue_slots (cfg))
    {
      s.queue_slots.push_back (k);
      s.queue_positions.push_back (k * cfg.l_v);
      s.queue_tx.push_back (uniform01 (rng) < cfg.rho);
    }
  long nx = poisson (rng, 2.0 * W * cfg.lambda_x);
  for (long j = 0; j < nx; ++j)
    {
      s.running_x.push_back (-W + 2.0 * W * uniform01 (rng));
      s.running_x_tx.push_back (uniform01 (rng) < cfg.rho_0);
    }
  long ny = poisson (rng, 2.0 * W * cfg.lambda_y);
  for (long j = 0; j < ny; ++j)
    {
      s.running_y.push_back (-W + 2.0 * W * uniform01 (rng));
      s.running_y_tx.push_back (uniform01 (rng) < cfg.rho_0);
    }
  return s;
}

MetricEstimate
binomial_estimate (std::int64_t successes, std::int64_t trials, double level)
{
  MetricEstimate e;
  double n = static_cast<double> (trials);
  double p = successes / n;
  double z = z_value (level);
  e.value = p;
  e.n_samples = trials;
  if (successes >= 30 && trials - successes >= 30)
    {
      double half = z * std::sqrt (p * (1.0 - p) / n);
      e.ci_low = p - half;
      e.ci_high = p + half;
    }
  else
    {
      double z2 = z * z;
      double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
      double half = z / (1.0 + z2 / n) * std::sqrt (p * (1.0 - p) / n + z2 / (4.0 * n * n));
      e.ci_low = centre - half;
      e.ci_high = centre + half;
    }
  e.ci_low = std::clamp (std::min (e.ci_low, p), 0.0, 1.0);
  e.ci_high = std::clamp (std::max (e.ci_high, p), 0.0, 1.0);
  return e;
}

MetricEstimate
estimate_p (const ScenarioConfig &cfg, const TransmitterLocation &t, const ReceiverSpec &r,
            const SimSpec &spec)
{
  const Placement txp = resolve (cfg, t);
  const Placement rxp = resolve (cfg, t, r);
  const double dist = distance (txp.pos, rxp.pos);
  if (dist == 0.0)
    throw DomainError ("receiver coincides with transmitter");

  // queued interferers, nearest first
  std::vector<double> gains;
  for (int k : queue_slots (cfg))
    {
      if ((txp.slot && *txp.slot == k) || (rxp.slot && *rxp.slot == k))
        continue;
      double dx = k * cfg.l_v - rxp.pos.x;
      double d2 = dx * dx + rxp.pos.y * rxp.pos.y;
      gains.push_back (d2 == 0.0 ? std::numeric_limits<double>::infinity ()
                                 : path_gain (d2, cfg.alpha));
    }
  std::sort (gains.begin (), gains.end (), std::greater<> ());

  const bool queue_live = cfg.rho > 0.0 && !gains.empty ();
  const double W = spec.window_half_width;
  const double mean_x = cfg.rho_0 * cfg.lambda_x * 2.0 * W;
  const double mean_y = cfg.rho_0 * cfg.lambda_y * 2.0 * W;
  if (!queue_live && mean_x == 0.0 && mean_y == 0.0)
    {
      MetricEstimate e;
      e.value = e.ci_low = e.ci_high = 1.0;
      e.n_samples = spec.n_trials;
      return e;
    }

  const double scale = cfg.t_threshold * std::pow (dist, cfg.alpha);
  const double log1m_rho = cfg.rho < 1.0 ? std::log1p (-cfg.rho) : -INFINITY;
  const long nq = static_cast<long> (gains.size ());
  const Point at = rxp.pos;
  const double alpha = cfg.alpha;

  std::function<std::int64_t (Rng &, std::int64_t)> body = [&] (Rng &rng, std::int64_t n) {
    std::int64_t wins = 0;
    for (std::int64_t trial = 0; trial < n; ++trial)
      {
        const double budget = exp1 (rng) / scale;
        double I = 0.0;
        bool lost = false;
        if (queue_live)
          {
            long idx = geometric_skip (rng, log1m_rho);
            while (idx < nq)
              {
                I += exp1 (rng) * gains[idx];
                if (I >= budget)
                  {
                    lost = true;
                    break;
                  }
                idx += 1 + geometric_skip (rng, log1m_rho);
              }
          }
        if (!lost)
          {
            long cnt = poisson (rng, mean_x);
            for (long j = 0; j < cnt; ++j)
              {
                double dx = -W + 2.0 * W * uniform01 (rng) - at.x;
                I += exp1 (rng) * path_gain (dx * dx + at.y * at.y, alpha);
                if (I >= budget)
                  {
                    lost = true;
                    break;
                  }
              }
          }
        if (!lost)
          {
            long cnt = poisson (rng, mean_y);
            for (long j = 0; j < cnt; ++j)
              {
                double dy = -W + 2.0 * W * uniform01 (rng) - at.y;
                I += exp1 (rng) * path_gain (at.x * at.x + dy * dy, alpha);
                if (I >= budget)
                  {
                    lost = true;
                    break;
                  }
              }
          }
        if (!lost)
          ++wins;
      }
    return wins;
  };

  std::int64_t wins = 0;
  for (std::int64_t w : run_blocks<std::int64_t> (spec, body))
    wins += w;
  return binomial_estimate (wins, spec.n_trials, spec.ci_level);
}

MeanEstimate
estimate_mean (const ScenarioConfig &cfg, const TransmitterLocation &t, const SimSpec &spec)
{
  const int d = queue_index (cfg, t);
  const Point origin{d * cfg.l_v, 0.0};
  const double alpha = cfg.alpha;
  const double T = cfg.t_threshold;

  struct Block
  {
    Moments q, x, y, total;
  };

  std::function<Block (Rng &, std::int64_t)> body = [&] (Rng &rng, std::int64_t n) {
    Block blk;
    std::vector<Point> loud;
    for (std::int64_t trial = 0; trial < n; ++trial)
      {
        Scene s = sample_scene (cfg, spec, rng);
        loud.clear ();
        for (std::size_t j = 0; j < s.queue_slots.size (); ++j)
          if (s.queue_tx[j] && s.queue_slots[j] != d)
            loud.push_back ({s.queue_positions[j], 0.0});
        for (std::size_t j = 0; j < s.running_x.size (); ++j)
          if (s.running_x_tx[j])
            loud.push_back ({s.running_x[j], 0.0});
        for (std::size_t j = 0; j < s.running_y.size (); ++j)
          if (s.running_y_tx[j])
            loud.push_back ({0.0, s.running_y[j]});

        auto decodes = [&] (Point p) {
          double dx = p.x - origin.x;
          double dy = p.y - origin.y;
          double r2 = dx * dx + dy * dy;
          if (r2 == 0.0)
            return true;
          double budget = exp1 (rng) * path_gain (r2, alpha) / T;
          double I = 0.0;
          for (const Point &q : loud)
            {
              double ex = p.x - q.x;
              double ey = p.y - q.y;
              double g2 = ex * ex + ey * ey;
              if (g2 == 0.0)
                return false;
              I += exp1 (rng) * path_gain (g2, alpha);
              if (I >= budget)
                return false;
            }
          return true;
        };

        std::int64_t cq = 0, cx = 0, cy = 0;
        for (std::size_t j = 0; j < s.queue_slots.size (); ++j)
          if (!s.queue_tx[j] && s.queue_slots[j] != d && decodes ({s.queue_positions[j], 0.0}))
            ++cq;
        for (std::size_t j = 0; j < s.running_x.size (); ++j)
          if (!s.running_x_tx[j] && decodes ({s.running_x[j], 0.0}))
            ++cx;
        for (std::size_t j = 0; j < s.running_y.size (); ++j)
          if (!s.running_y_tx[j] && decodes ({0.0, s.running_y[j]}))
            ++cy;
        blk.q.add (cq);
        blk.x.add (cx);
        blk.y.add (cy);
        blk.total.add (cq + cx + cy);
      }
    return blk;
  };

  Block all;
  for (const Block &b : run_blocks<Block> (spec, body))
    {
      all.q.sum += b.q.sum;
      all.q.sumsq += b.q.sumsq;
      all.x.sum += b.x.sum;
      all.x.sumsq += b.x.sumsq;
      all.y.sum += b.y.sum;
      all.y.sumsq += b.y.sumsq;
      all.total.sum += b.total.sum;
      all.total.sumsq += b.total.sumsq;
    }
  MeanEstimate e;
  e.q = mean_estimate (all.q, spec.n_trials, spec.ci_level);
  e.rx = mean_estimate (all.x, spec.n_trials, spec.ci_level);
  e.ry = mean_estimate (all.y, spec.n_trials, spec.ci_level);
  e.total = mean_estimate (all.total, spec.n_trials, spec.ci_level);
  e.mean.m_q = e.q.value;
  e.mean.m_rx = e.rx.value;
  e.mean.m_ry = e.ry.value;
  return e;
}

} // namespace junction
