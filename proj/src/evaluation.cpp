#include "pcad/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "pcad/nelder_mead.hpp"

namespace pcad {
namespace {

struct DesignGroup {
  std::size_t representative;        // first event of the design
  std::vector<std::size_t> members;  // indices into the event vector
};

// Repetitions of a design share one simulated trajectory and differ only in
// their ratings, so model predictions are computed once per design.
std::vector<DesignGroup> group_by_design(const std::vector<Event>& events) {
  std::vector<DesignGroup> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto [it, inserted] = index.try_emplace(events[i].design_key(), groups.size());
    if (inserted) groups.push_back({i, {}});
    groups[it->second].members.push_back(i);
  }
  return groups;
}

EventKind common_kind(const std::vector<Event>& events) {
  if (events.empty()) throw std::invalid_argument("no events");
  const EventKind kind = events.front().kind;
  for (const Event& e : events)
    if (e.kind != kind) throw std::invalid_argument("events mix scenario kinds");
  return kind;
}

void require_rated(const std::vector<Event>& events) {
  for (const Event& e : events)
    if (e.event_rating < 0 || e.peak_rating < 0)
      throw std::invalid_argument("event " + e.id + " has no ratings");
}

struct GroupPredictions {
  std::vector<double> event_raw;
  std::vector<double> peak_raw;
  std::size_t snapshots = 0;
};

GroupPredictions group_predictions(const std::vector<Event>& events,
                                   const std::vector<DesignGroup>& groups, ModelId id,
                                   const ModelConfig& config) {
  GroupPredictions out;
  out.event_raw.resize(groups.size());
  out.peak_raw.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const Event& e = events[groups[g].representative];
    if (e.samples.empty()) throw std::invalid_argument("event " + e.id + " has no samples");
    const std::vector<double> trace = risk_trace(id, config, e.samples);
    out.event_raw[g] = trace_event_value(trace, e.kind);
    out.peak_raw[g] = trace_peak_value(trace);
    out.snapshots += e.samples.size();
  }
  return out;
}

std::vector<double> expand_to_events(const std::vector<double>& group_values,
                                     const std::vector<DesignGroup>& groups, std::size_t n) {
  std::vector<double> values(n);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t i : groups[g].members) values[i] = group_values[g];
  return values;
}

ScaledValues apply_scale_policy(const std::vector<double>& raw, ModelId id) {
  if (native_rating_scale(id)) return {raw, false};
  return minmax_scale(raw);
}

}  // namespace

double trace_peak_value(const std::vector<double>& trace) {
  if (trace.empty()) throw std::invalid_argument("empty risk trace");
  return *std::max_element(trace.begin(), trace.end());
}

double trace_event_value(const std::vector<double>& trace, EventKind kind) {
  if (trace.empty()) throw std::invalid_argument("empty risk trace");
  return kind == EventKind::kObstaclePop ? trace.front() : trace_peak_value(trace);
}

ScaledValues minmax_scale(const std::vector<double>& raw) {
  return minmax_scale(raw, std::vector<std::string>(raw.size()));
}

ScaledValues minmax_scale(const std::vector<double>& raw,
                          const std::vector<std::string>& group_keys) {
  if (raw.empty()) throw std::invalid_argument("minmax_scale: empty input");
  if (group_keys.size() != raw.size())
    throw std::invalid_argument("minmax_scale: group key size mismatch");

  struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  };
  std::unordered_map<std::string, Range> ranges;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Range& r = ranges[group_keys[i]];
    r.lo = std::min(r.lo, raw[i]);
    r.hi = std::max(r.hi, raw[i]);
  }

  ScaledValues out;
  out.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Range& r = ranges[group_keys[i]];
    if (r.hi == r.lo) {
      out.constant = true;  // no spread to scale by; map the group to zero
      out.values[i] = 0.0;
    } else {
      out.values[i] = 10.0 * (raw[i] - r.lo) / (r.hi - r.lo);
    }
  }
  return out;
}

double rmse(const std::vector<double>& predicted, const std::vector<double>& observed) {
  if (predicted.size() != observed.size() || predicted.empty())
    throw std::invalid_argument("rmse: size mismatch or empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - observed[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

double adjusted_r_square(const std::vector<double>& x, const std::vector<double>& y,
                         int n_predictors) {
  if (x.size() != y.size()) throw std::invalid_argument("adjusted_r_square: size mismatch");
  const auto n = static_cast<double>(x.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < static_cast<std::size_t>(n_predictors) + 2) return nan;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return nan;
  const double r2 = sxy * sxy / (sxx * syy);
  return 1.0 - (1.0 - r2) * (n - 1.0) / (n - 1.0 - n_predictors);
}

double detection_rate(const std::vector<Event>& events, ModelId id, const ModelConfig& config) {
  common_kind(events);
  const std::vector<DesignGroup> groups = group_by_design(events);
  std::size_t detected = 0;
  for (const DesignGroup& group : groups) {
    const Event& e = events[group.representative];
    if (e.samples.empty()) throw std::invalid_argument("event " + e.id + " has no samples");
    bool hit = false;
    if (e.kind == EventKind::kObstaclePop) {
      hit = risk_value(id, config, e.samples.front()) > 0.0;
    } else {
      for (const SceneSnapshot& s : e.samples) {
        if (risk_value(id, config, s) > 0.0) {
          hit = true;
          break;
        }
      }
    }
    if (hit) detected += group.members.size();
  }
  return static_cast<double>(detected) / static_cast<double>(events.size());
}

EvaluationReport evaluate(const std::vector<Event>& events, ModelId id,
                          const ModelConfig& config) {
  common_kind(events);
  require_rated(events);
  const std::vector<DesignGroup> groups = group_by_design(events);

  const auto begin = std::chrono::steady_clock::now();
  const GroupPredictions pred = group_predictions(events, groups, id, config);
  const auto end = std::chrono::steady_clock::now();

  const ScaledValues event_scaled = apply_scale_policy(pred.event_raw, id);
  const ScaledValues peak_scaled = apply_scale_policy(pred.peak_raw, id);

  EvaluationReport report;
  report.n_events = events.size();
  report.constant_predictions = event_scaled.constant || peak_scaled.constant;
  report.time_per_step_ms = std::chrono::duration<double, std::milli>(end - begin).count() /
                            static_cast<double>(pred.snapshots);

  std::vector<double> event_ratings(events.size()), peak_ratings(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    event_ratings[i] = events[i].event_rating;
    peak_ratings[i] = events[i].peak_rating;
  }
  report.rmse_event =
      rmse(expand_to_events(event_scaled.values, groups, events.size()), event_ratings);
  report.rmse_peak =
      rmse(expand_to_events(peak_scaled.values, groups, events.size()), peak_ratings);

  std::vector<double> design_rating_means(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (std::size_t i : groups[g].members) sum += events[i].event_rating;
    design_rating_means[g] = sum / static_cast<double>(groups[g].members.size());
  }
  report.adjusted_r2 = adjusted_r_square(event_scaled.values, design_rating_means, 1);

  std::size_t detected = 0;
  for (std::size_t g = 0; g < groups.size(); ++g)
    if (pred.event_raw[g] > 0.0) detected += groups[g].members.size();
  report.detection = static_cast<double>(detected) / static_cast<double>(events.size());
  return report;
}

std::vector<ParamSpec> calibration_parameters(ModelId id, DatasetProfile profile) {
  const bool merging = profile == DatasetProfile::kMerging;
  std::vector<ParamSpec> specs;
  const auto add = [&specs](std::string name, double lo, double hi,
                            std::function<double(const ModelConfig&)> get,
                            std::function<void(ModelConfig&, double)> set) {
    specs.push_back({std::move(name), lo, hi, std::move(get), std::move(set)});
  };
  switch (id) {
    case ModelId::kPcad:
      add("sigma_subject_x", 0.01, 20.0,
          [](const ModelConfig& c) { return c.pcad.sigma_subject_x; },
          [](ModelConfig& c, double v) { c.pcad.sigma_subject_x = v; });
      add("sigma_subject_y", 0.01, 20.0,
          [](const ModelConfig& c) { return c.pcad.sigma_subject_y; },
          [](ModelConfig& c, double v) { c.pcad.sigma_subject_y = v; });
      if (merging) {
        add("sigma_neighbour_x", 0.01, 20.0,
            [](const ModelConfig& c) { return c.pcad.sigma_neighbour_x; },
            [](ModelConfig& c, double v) { c.pcad.sigma_neighbour_x = v; });
        add("sigma_neighbour_y", 0.01, 20.0,
            [](const ModelConfig& c) { return c.pcad.sigma_neighbour_y; },
            [](ModelConfig& c, double v) { c.pcad.sigma_neighbour_y = v; });
      }
      break;
    case ModelId::kRpr:
      add("c0", -50.0, 50.0, [](const ModelConfig& c) { return c.rpr.c0; },
          [](ModelConfig& c, double v) { c.rpr.c0 = v; });
      add("c1", -20.0, 20.0, [](const ModelConfig& c) { return c.rpr.c1; },
          [](ModelConfig& c, double v) { c.rpr.c1 = v; });
      if (merging) {  // a static neighbour never accelerates, so c2 is dead there
        add("c2", -10.0, 10.0, [](const ModelConfig& c) { return c.rpr.c2; },
            [](ModelConfig& c, double v) { c.rpr.c2 = v; });
      }
      break;
    case ModelId::kPpdrf:
      if (merging) {
        add("sigma_acc_x", 1e-3, 10.0, [](const ModelConfig& c) { return c.ppdrf.sigma_acc_x; },
            [](ModelConfig& c, double v) { c.ppdrf.sigma_acc_x = v; });
        add("sigma_acc_y", 1e-3, 10.0, [](const ModelConfig& c) { return c.ppdrf.sigma_acc_y; },
            [](ModelConfig& c, double v) { c.ppdrf.sigma_acc_y = v; });
      } else {
        add("potential_range", 0.01, 50.0,
            [](const ModelConfig& c) { return c.ppdrf.potential_range; },
            [](ModelConfig& c, double v) { c.ppdrf.potential_range = v; });
      }
      break;
    case ModelId::kDrf:
      add("preview_time", 0.2, 10.0, [](const ModelConfig& c) { return c.drf.preview_time; },
          [](ModelConfig& c, double v) { c.drf.preview_time = v; });
      add("width_slope", 0.0, 2.0, [](const ModelConfig& c) { return c.drf.width_slope; },
          [](ModelConfig& c, double v) { c.drf.width_slope = v; });
      add("width_offset", 0.01, 30.0, [](const ModelConfig& c) { return c.drf.width_offset; },
          [](ModelConfig& c, double v) { c.drf.width_offset = v; });
      break;
  }
  return specs;
}

CalibrationResult calibrate(const std::vector<Event>& events, ModelId id, const ModelConfig& init,
                            const OptimizerConfig& optimizer) {
  const EventKind kind = common_kind(events);
  require_rated(events);
  if (optimizer.restarts < 1) throw std::invalid_argument("calibrate: restarts must be >= 1");

  const std::vector<DesignGroup> groups = group_by_design(events);
  const std::vector<ParamSpec> specs = calibration_parameters(id, profile_of(kind));

  std::vector<double> event_ratings(events.size()), peak_ratings(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    event_ratings[i] = events[i].event_rating;
    peak_ratings[i] = events[i].peak_rating;
  }

  const auto objective = [&](const std::vector<double>& x) {
    ModelConfig config = init;
    for (std::size_t i = 0; i < specs.size(); ++i) specs[i].set(config, x[i]);
    const GroupPredictions pred = group_predictions(events, groups, id, config);
    const ScaledValues event_scaled = apply_scale_policy(pred.event_raw, id);
    const ScaledValues peak_scaled = apply_scale_policy(pred.peak_raw, id);
    return rmse(expand_to_events(event_scaled.values, groups, events.size()), event_ratings) +
           rmse(expand_to_events(peak_scaled.values, groups, events.size()), peak_ratings);
  };

  std::vector<double> lower(specs.size()), upper(specs.size()), start(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    lower[i] = specs[i].lower;
    upper[i] = specs[i].upper;
    start[i] = std::clamp(specs[i].get(init), lower[i], upper[i]);
  }

  CalibrationResult result;
  for (const ParamSpec& spec : specs) result.names.push_back(spec.name);

  std::mt19937_64 rng(optimizer.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool have_best = false;
  NelderMeadResult best;
  for (int r = 0; r < optimizer.restarts; ++r) {
    std::vector<double> x0 = start;
    if (r > 0)
      for (std::size_t i = 0; i < x0.size(); ++i)
        x0[i] = lower[i] + unit(rng) * (upper[i] - lower[i]);
    NelderMeadResult run =
        nelder_mead(objective, x0, lower, upper, optimizer.max_evals, optimizer.f_tol);
    result.iterations += run.evaluations;
    if (!have_best || run.fx < best.fx) {
      best = std::move(run);
      have_best = true;
    }
  }

  result.values = best.x;
  result.objective = best.fx;
  result.converged = best.converged;
  result.config = init;
  for (std::size_t i = 0; i < specs.size(); ++i) specs[i].set(result.config, best.x[i]);
  return result;
}

CrossValidationResult cross_validate(const std::vector<Event>& train,
                                     const std::vector<Event>& test, ModelId id,
                                     const ModelConfig& init, const OptimizerConfig& optimizer) {
  CrossValidationResult result;
  result.calibration = calibrate(train, id, init, optimizer);
  result.test_report = evaluate(test, id, result.calibration.config);
  return result;
}

namespace {

BenchmarkRow run_benchmark(const std::string& name,
                           const std::function<double(const SceneSnapshot&)>& fn,
                           const std::vector<Event>& events, int repetitions) {
  BenchmarkRow row;
  row.name = name;
  double sink = 0.0;
  const auto begin = std::chrono::steady_clock::now();
  for (int rep = 0; rep < repetitions; ++rep) {
    for (const Event& e : events) {
      for (const SceneSnapshot& s : e.samples) {
        sink += fn(s);
        ++row.snapshots;
      }
    }
  }
  const auto end = std::chrono::steady_clock::now();
  if (!std::isfinite(sink)) throw std::runtime_error("benchmark: non-finite risk value");
  row.total_ms = std::chrono::duration<double, std::milli>(end - begin).count();
  row.ms_per_snapshot = row.total_ms / static_cast<double>(row.snapshots);
  return row;
}

}  // namespace

BenchmarkRow benchmark(ModelId id, const std::vector<Event>& events, const ModelConfig& config,
                       int repetitions) {
  if (events.empty() || repetitions < 1)
    throw std::invalid_argument("benchmark: need events and repetitions >= 1");
  return run_benchmark(
      to_string(id), [&](const SceneSnapshot& s) { return risk_value(id, config, s); }, events,
      repetitions);
}

std::vector<BenchmarkRow> benchmark_all(const std::vector<Event>& events,
                                        const ModelConfig& config, int repetitions) {
  if (events.empty() || repetitions < 1)
    throw std::invalid_argument("benchmark: need events and repetitions >= 1");
  std::vector<BenchmarkRow> rows;
  for (ModelId id : kAllModels) rows.push_back(benchmark(id, events, config, repetitions));
  rows.push_back(run_benchmark(
      "pcad_serial",
      [&](const SceneSnapshot& s) { return pcad_risk_serial(s, config.pcad, config.pcad_search); },
      events, repetitions));
  return rows;
}

}  // namespace pcad
