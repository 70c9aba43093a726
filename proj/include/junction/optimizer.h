#ifndef JUNCTION_OPTIMIZER_H
#define JUNCTION_OPTIMIZER_H

#include "junction/exact.h"
#include "junction/model.h"

#include <string>
#include <variant>
#include <vector>

namespace junction {

enum class Engine { Exact, Approx };

const char *engine_name (Engine e);

// D(rho) = rho * total mean receivers, with cfg.rho replaced by rho.
double objective (const ScenarioConfig &cfg, CaseLabel c, double rho, Engine e,
                  const QuadratureSpec &quad = {});

struct ObjectiveCurve
{
  std::vector<double> rho_samples;
  std::vector<double> d_values;
  double argmax = 0.0;
  double max_value = 0.0;
};

struct OptimizeResult
{
  double rho_star = 0.0;
  ObjectiveCurve curve;
  std::vector<std::string> warnings;
};

struct RhoDomain
{
  double upper = 0.5;
  double grid_step = 0.01;
  double tolerance = 1e-4;
};

OptimizeResult optimize_rho (const ScenarioConfig &cfg, CaseLabel c, Engine e,
                             const RhoDomain &domain = {}, const QuadratureSpec &quad = {});

struct GridSpec
{
  // intensities in 1/km, ascending
  std::vector<double> lambda_x;
  std::vector<double> lambda_y;
};

std::vector<double> grid_range (double start, double stop, double step);

struct RateTable
{
  std::vector<double> lambda_x_grid;
  std::vector<double> lambda_y_grid;
  // rho_star[ix][iy]; NaN marks a cell that failed
  std::vector<std::vector<double>> rho_star;
  std::vector<std::string> cell_errors;
  double alpha = 0.0;
  double t_threshold_db = 0.0;
  double rho_0 = 0.0;
  CaseLabel case_label = CaseLabel::C;
  Engine engine = Engine::Approx;
  std::string generated_at;
};

RateTable build_table (const GridSpec &grid, const ScenarioConfig &templ, CaseLabel c = CaseLabel::C,
                       Engine e = Engine::Approx, unsigned threads = 0);

struct LookupResult
{
  double rho_star;
  bool clamped;
};

LookupResult lookup (const RateTable &table, double lambda_x_per_km, double lambda_y_per_km);

enum class PositionMode { Interpolate, CentralExtrapolate };

namespace target {
struct SuccessAt
{
  int i;
};
struct QueueMean
{
};
} // namespace target

using PositionTarget = std::variant<target::SuccessAt, target::QueueMean>;

double interpolate_position (const ScenarioConfig &cfg, int d, const PositionTarget &what,
                             PositionMode mode = PositionMode::Interpolate);

} // namespace junction

#endif
