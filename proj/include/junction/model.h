#ifndef JUNCTION_MODEL_H
#define JUNCTION_MODEL_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace junction {

// Bad user input: CLI exit code 2.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Quadrature or series failure: CLI exit code 3.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A formula was asked for outside the region where it is defined.
class DomainError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * System parameters in SI units.  Intensities are per metre, the SIR
 * threshold is linear.  mu never changes an SIR metric; it is kept so that
 * callers can check that claim.
 */
struct ScenarioConfig
{
  double lambda_x = 0.025;
  double lambda_y = 0.025;
  int n_plus = 25;
  int n_minus = 25;
  double l_v = 6.0;
  double alpha = 4.0;
  double t_threshold = 31.622776601683793;
  double rho = 0.1;
  double rho_0 = 0.1;
  double mu = 1.0;
};

double db_to_linear (double x_db);
double linear_to_db (double x);
double per_km_to_per_m (double x);
double per_m_to_per_km (double x);

// lv=6 m, alpha=4, rho0=0.1, T=15 dB, lambda=25/km, N=25, rho=0.1.
ScenarioConfig default_scenario ();

struct ValidationReport
{
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok () const { return errors.empty (); }
};

ValidationReport validate (const ScenarioConfig &cfg);

enum class CaseLabel { A, B, C };

char case_char (CaseLabel c);
CaseLabel parse_case (const std::string &s);

namespace tx {
struct Intersection {};
struct QueueEnd {};
struct QueueMiddle {};
struct QueueIndex
{
  int d;
};
struct RunningX
{
  double x;
};
} // namespace tx

using TransmitterLocation =
    std::variant<tx::Intersection, tx::QueueEnd, tx::QueueMiddle, tx::QueueIndex, tx::RunningX>;

enum class Side { Positive, Negative };

namespace rx {
struct QueueVehicle
{
  int i;
};
struct RunningX
{
  double r;
  Side side = Side::Positive;
};
struct RunningY
{
  double r;
};
} // namespace rx

using ReceiverSpec = std::variant<rx::QueueVehicle, rx::RunningX, rx::RunningY>;

TransmitterLocation transmitter_for (CaseLabel c);

struct MetricEstimate
{
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t n_samples = 0;
  double abs_tol = 0.0;
};

struct MeanReceiverBreakdown
{
  double m_q = 0.0;
  double m_rx = 0.0;
  double m_ry = 0.0;
  // bound on the neglected integral tails (exact engine only)
  double abs_tol = 0.0;
  double total () const { return m_q + m_rx + m_ry; }
};

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

double distance (Point a, Point b);

/**
 * A transmitter or receiver resolved to coordinates.  Queued vehicles sit
 * at x = k*lv for slot k in [-n_minus,-1] and [1,n_plus]; slot is empty for
 * anything that is not a queued vehicle.
 */
struct Placement
{
  Point pos;
  std::optional<int> slot;
};

Placement resolve (const ScenarioConfig &cfg, const TransmitterLocation &t);
Placement resolve (const ScenarioConfig &cfg, const TransmitterLocation &t,
                   const ReceiverSpec &r);

// Queue slot d of the transmitter (0 for the intersection); throws for a
// running transmitter.
int queue_index (const ScenarioConfig &cfg, const TransmitterLocation &t);

std::vector<int> queue_slots (const ScenarioConfig &cfg);

std::string describe (const TransmitterLocation &t);
std::string describe (const ReceiverSpec &r);

} // namespace junction

#endif
