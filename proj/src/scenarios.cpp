#include "pcad/scenarios.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "pcad/evaluation.hpp"

namespace pcad {
namespace {

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string Event::design_key() const {
  std::string key;
  for (const auto& [name, value] : design) {
    if (!key.empty()) key += '|';
    key += name + '=' + fmt_number(value);
  }
  return key;
}

namespace {

struct AxisState {
  double pos = 0;
  double vel = 0;
  double acc = 0;
};

// Longitudinal profile of the merging vehicle: constant speed until the lane
// change completes, then constant braking until standstill.
AxisState braking_axis(double t, double x0, double v0, double brake_start, double brake) {
  AxisState s;
  if (t < brake_start || brake == 0.0) {
    s.pos = x0 + v0 * t;
    s.vel = v0;
    return s;
  }
  const double stop_time = brake_start + v0 / -brake;
  if (t < stop_time) {
    const double tau = t - brake_start;
    s.pos = x0 + v0 * t + 0.5 * brake * tau * tau;
    s.vel = v0 + brake * tau;
    s.acc = brake;
  } else {
    s.pos = x0 + v0 * brake_start - v0 * v0 / (2.0 * brake);
  }
  return s;
}

AxisState lateral_ramp(double t, double offset, double rate, double ramp_start) {
  AxisState s;
  const double ramp_end = ramp_start + offset / rate;
  if (t < ramp_start) {
    s.pos = offset;
  } else if (t < ramp_end) {
    s.pos = offset - rate * (t - ramp_start);
    s.vel = -rate;
  }
  return s;
}

}  // namespace

Event gen_merging_event(const MergingDesign& design, const MergingOptions& options,
                        const std::string& id) {
  if (design.merge_gap <= 0) throw std::invalid_argument("merge gap must be positive");
  if (design.brake_intensity > 0) throw std::invalid_argument("brake intensity must be <= 0");
  if (options.initial_speed <= 0 || options.lateral_speed <= 0)
    throw std::invalid_argument("speeds must be positive");
  if (options.dt <= 0 || options.duration <= 0 || options.lead_in < 0)
    throw std::invalid_argument("bad merging timing options");

  Event event;
  event.id = id;
  event.kind = EventKind::kMergingBrake;
  event.design = {{"merge_gap", design.merge_gap}, {"brake_intensity", design.brake_intensity}};

  const double v0 = options.initial_speed;
  const double brake_start = options.lead_in + options.lane_offset / options.lateral_speed;
  const double x0n =
      design.merge_gap + 0.5 * (options.subject_dims.length + options.neighbour_dims.length);

  const long steps = static_cast<long>(options.duration / options.dt + 0.5);
  for (long k = 0; k <= steps; ++k) {
    const double t = k * options.dt;
    SceneSnapshot s;
    s.subject_dims = options.subject_dims;
    s.neighbour_dims = options.neighbour_dims;
    s.subject_mass = options.subject_mass;
    s.neighbour_mass = options.neighbour_mass;
    s.neighbour_kind = NeighbourKind::kMovingVehicle;
    s.subject = {{v0 * t, 0.0}, {v0, 0.0}, {0.0, 0.0}};
    const AxisState nx = braking_axis(t, x0n, v0, brake_start, design.brake_intensity);
    const AxisState ny =
        lateral_ramp(t, options.lane_offset, options.lateral_speed, options.lead_in);
    s.neighbour = {{nx.pos, ny.pos}, {nx.vel, ny.vel}, {nx.acc, ny.acc}};
    if (bodies_in_contact(s)) break;
    event.times.push_back(t);
    event.samples.push_back(s);
  }
  if (event.samples.empty()) throw std::invalid_argument("merging event overlaps at start");
  return event;
}

Event gen_obstacle_event(const Vec2& offset, const ObstacleOptions& options,
                         const std::string& id) {
  if (options.initial_speed <= 0) throw std::invalid_argument("speed must be positive");
  if (options.dt <= 0 || options.duration <= 0)
    throw std::invalid_argument("bad obstacle timing options");

  Event event;
  event.id = id;
  event.kind = EventKind::kObstaclePop;
  event.design = {{"obstacle_x", offset.x}, {"obstacle_y", offset.y}};

  const long steps = static_cast<long>(options.duration / options.dt + 0.5);
  for (long k = 0; k <= steps; ++k) {
    const double t = k * options.dt;
    SceneSnapshot s;
    s.subject_dims = options.subject_dims;
    s.neighbour_dims = options.neighbour_dims;
    s.subject_mass = options.subject_mass;
    s.neighbour_mass = options.neighbour_mass;
    s.neighbour_kind = NeighbourKind::kStaticObject;
    s.subject = {{options.initial_speed * t, 0.0}, {options.initial_speed, 0.0}, {0.0, 0.0}};
    s.neighbour = {offset, {0.0, 0.0}, {0.0, 0.0}};
    if (bodies_in_contact(s)) break;
    event.times.push_back(t);
    event.samples.push_back(s);
  }
  if (event.samples.empty()) throw std::invalid_argument("obstacle overlaps subject at start");
  return event;
}

std::vector<MergingDesign> default_merging_designs() {
  std::vector<MergingDesign> designs;
  for (double gap : {9.0, 17.0, 25.0})
    for (double brake : {-2.0, -5.0, -8.0}) designs.push_back({gap, brake});
  return designs;
}

std::vector<Vec2> default_obstacle_offsets() {
  std::vector<Vec2> offsets;
  for (int k = 0; k < 11; ++k) {
    const double x = 20.0 + 6.0 * k;
    for (double y : {0.0, 2.05, -2.05, 2.12, -2.12, 2.2, -2.2}) offsets.push_back({x, y});
  }
  return offsets;
}

std::vector<Event> make_merging_dataset(int repetitions, const MergingOptions& options) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  std::vector<Event> events;
  for (const MergingDesign& design : default_merging_designs()) {
    for (int rep = 0; rep < repetitions; ++rep) {
      const std::string id = "merging_g" + fmt_number(design.merge_gap) + "_b" +
                             fmt_number(design.brake_intensity) + "_r" + std::to_string(rep);
      events.push_back(gen_merging_event(design, options, id));
    }
  }
  return events;
}

std::vector<Event> make_obstacle_dataset(int repetitions, const ObstacleOptions& options) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  std::vector<Event> events;
  for (const Vec2& offset : default_obstacle_offsets()) {
    for (int rep = 0; rep < repetitions; ++rep) {
      const std::string id = "obstacle_x" + fmt_number(offset.x) + "_y" + fmt_number(offset.y) +
                             "_r" + std::to_string(rep);
      events.push_back(gen_obstacle_event(offset, options, id));
    }
  }
  return events;
}

void synth_ratings(std::vector<Event>& events, ModelId id, const ModelConfig& config,
                   double noise_sd, std::uint64_t seed) {
  if (noise_sd < 0) throw std::invalid_argument("noise sd must be >= 0");
  if (events.empty()) return;

  const std::size_t n = events.size();
  std::vector<double> event_values(n), peak_values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> trace = risk_trace(id, config, events[i].samples);
    event_values[i] = trace_event_value(trace, events[i].kind);
    peak_values[i] = trace_peak_value(trace);
  }

  if (!native_rating_scale(id)) {
    // Event and peak values each get their own min-max scale, matching how
    // they are scaled when compared against ratings later.
    event_values = minmax_scale(event_values).values;
    peak_values = minmax_scale(peak_values).values;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sd > 0 ? noise_sd : 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double ev = event_values[i];
    double pk = peak_values[i];
    if (noise_sd > 0) {
      ev += noise(rng);
      pk += noise(rng);
    }
    events[i].event_rating = std::clamp(ev, 0.0, 10.0);
    events[i].peak_rating = std::clamp(pk, 0.0, 10.0);
  }
}

}  // namespace pcad
