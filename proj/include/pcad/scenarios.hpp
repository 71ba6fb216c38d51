#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcad/geometry.hpp"
#include "pcad/model_registry.hpp"
#include "pcad/vehicle.hpp"

namespace pcad {

enum class EventKind { kMergingBrake, kObstaclePop };

inline DatasetProfile profile_of(EventKind kind) {
  return kind == EventKind::kMergingBrake ? DatasetProfile::kMerging : DatasetProfile::kObstacle;
}

// One simulated drive: a fixed-rate sequence of scene snapshots plus the
// ratings attached to it (negative rating = not rated yet).
struct Event {
  std::string id;
  EventKind kind = EventKind::kMergingBrake;
  std::map<std::string, double> design;  // scenario condition parameters
  std::vector<double> times;
  std::vector<SceneSnapshot> samples;
  double event_rating = -1.0;
  double peak_rating = -1.0;

  // Canonical string form of the design map; repetitions of one condition
  // share it, and they are assumed to share the same trajectory.
  std::string design_key() const;
};

// A vehicle cuts in ahead of the subject with the given bumper-to-bumper gap,
// then brakes to a stop at the given (negative) longitudinal acceleration.
struct MergingDesign {
  double merge_gap = 17.0;         // m, bumper to bumper at cut-in
  double brake_intensity = -5.0;   // m/s^2
};

struct MergingOptions {
  double initial_speed = 27.78;  // m/s, both vehicles before the brake
  double lane_offset = 3.5;      // m, lateral start of the merging vehicle
  double lateral_speed = 1.0;    // m/s during the lane change
  double lead_in = 1.0;          // s of steady driving before the lane change
  double dt = 0.05;              // s
  double duration = 15.0;        // s, cut short at the first body overlap
  BodyDims subject_dims;
  BodyDims neighbour_dims;
  double subject_mass = 1500.0;
  double neighbour_mass = 1500.0;
};

// A static obstacle appears at a fixed offset from the subject's start
// position while the subject drives straight at constant speed.
struct ObstacleOptions {
  double initial_speed = 25.0;  // m/s
  double dt = 0.05;             // s
  double duration = 15.0;       // s, cut short at the first body overlap
  BodyDims subject_dims;
  BodyDims neighbour_dims;
  double subject_mass = 1500.0;
  double neighbour_mass = 1500.0;
};

Event gen_merging_event(const MergingDesign& design, const MergingOptions& options,
                        const std::string& id);

Event gen_obstacle_event(const Vec2& offset, const ObstacleOptions& options,
                         const std::string& id);

std::vector<MergingDesign> default_merging_designs();

// Centre offsets of the obstacle relative to the subject's start position:
// a corridor band that exercises both straight-ahead and near-miss passes.
std::vector<Vec2> default_obstacle_offsets();

std::vector<Event> make_merging_dataset(int repetitions, const MergingOptions& options);

std::vector<Event> make_obstacle_dataset(int repetitions, const ObstacleOptions& options);

// Fills in event/peak ratings from a model's own predictions: raw values for
// a model that predicts on the rating scale already, min-max scaled to 0-10
// otherwise (event and peak values each over their own spread), plus
// Gaussian noise, clipped to [0, 10].
void synth_ratings(std::vector<Event>& events, ModelId id, const ModelConfig& config,
                   double noise_sd, std::uint64_t seed);

}  // namespace pcad
