#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pcad/model_registry.hpp"
#include "pcad/scenarios.hpp"

namespace pcad {

// Scalar summaries of a risk trace. The event value is what a rating of the
// whole event is compared against: the moment the obstacle appears for
// pop-up events, the highest sample for merging events.
double trace_peak_value(const std::vector<double>& trace);
double trace_event_value(const std::vector<double>& trace, EventKind kind);

struct ScaledValues {
  std::vector<double> values;
  bool constant = false;  // some group had no spread; its outputs are zero
};

// Affine map of each group's range onto [0, 10]. The single-argument form
// treats the whole input as one group (the default cohort behaviour).
ScaledValues minmax_scale(const std::vector<double>& raw);
ScaledValues minmax_scale(const std::vector<double>& raw,
                          const std::vector<std::string>& group_keys);

double rmse(const std::vector<double>& predicted, const std::vector<double>& observed);

// Adjusted R^2 of the least-squares line through (x, y) pairs, with
// n_predictors regressors. NaN when fewer than n_predictors + 2 points or
// when either side has no variance.
double adjusted_r_square(const std::vector<double>& x, const std::vector<double>& y,
                         int n_predictors = 1);

// Fraction of events whose risk becomes strictly positive: at the first
// sample for pop-up events, at any sample for merging events.
double detection_rate(const std::vector<Event>& events, ModelId id, const ModelConfig& config);

struct EvaluationReport {
  std::size_t n_events = 0;
  double rmse_event = 0.0;
  double rmse_peak = 0.0;
  double adjusted_r2 = 0.0;  // on per-design means of event predictions vs ratings
  double detection = 0.0;
  double time_per_step_ms = 0.0;  // model evaluation cost per snapshot
  bool constant_predictions = false;
};

// Compares model predictions (scaled per the model's rating-scale policy)
// against the ratings stored on the events. All events must be rated and of
// one kind. Repetitions of a design are assumed to share one trajectory, so
// predictions are computed once per design.
EvaluationReport evaluate(const std::vector<Event>& events, ModelId id,
                          const ModelConfig& config);

// One tunable parameter of a model: closed box bounds plus accessors into
// the model configuration.
struct ParamSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  std::function<double(const ModelConfig&)> get;
  std::function<void(ModelConfig&, double)> set;
};

// The identifiable parameters of each model on each dataset profile. Pure
// output-scale parameters are excluded for models whose predictions are
// min-max scaled, since the objective cannot see them; parameters of inputs
// that never vary on a profile (e.g. acceleration terms against static
// objects) are excluded likewise.
std::vector<ParamSpec> calibration_parameters(ModelId id, DatasetProfile profile);

struct OptimizerConfig {
  int restarts = 50;      // first start is the supplied configuration
  long max_evals = 2000;  // objective evaluations per restart
  double f_tol = 1e-6;    // stop when the simplex objective spread drops below
  std::uint64_t seed = 1;  // for the uniform restart draws
};

struct CalibrationResult {
  std::vector<std::string> names;
  std::vector<double> values;
  double objective = 0.0;  // rmse_event + rmse_peak on scaled predictions
  long iterations = 0;     // objective evaluations across all restarts
  bool converged = false;
  ModelConfig config;  // the supplied configuration with fitted values applied
};

// Derivative-free simplex minimisation of rmse_event + rmse_peak between
// scaled predictions and the stored ratings, within the parameter boxes.
// Deterministic given the initial configuration and optimizer settings.
CalibrationResult calibrate(const std::vector<Event>& events, ModelId id,
                            const ModelConfig& init, const OptimizerConfig& optimizer = {});

struct CrossValidationResult {
  CalibrationResult calibration;
  EvaluationReport test_report;
};

// Fit on the training events, score on the untouched test events with the
// fitted parameters. The two sets may be of different kinds; parameters are
// chosen by the training kind.
CrossValidationResult cross_validate(const std::vector<Event>& train,
                                     const std::vector<Event>& test, ModelId id,
                                     const ModelConfig& init,
                                     const OptimizerConfig& optimizer = {});

struct BenchmarkRow {
  std::string name;
  std::size_t snapshots = 0;
  double total_ms = 0.0;
  double ms_per_snapshot = 0.0;
};

// Wall-clock mean cost per computation step over all samples of the events,
// repeated `repetitions` times.
BenchmarkRow benchmark(ModelId id, const std::vector<Event>& events, const ModelConfig& config,
                       int repetitions = 1);

// All four models plus the serial reference path of the potential-collision
// search, for parallel-vs-serial comparison.
std::vector<BenchmarkRow> benchmark_all(const std::vector<Event>& events,
                                        const ModelConfig& config, int repetitions = 1);

}  // namespace pcad
