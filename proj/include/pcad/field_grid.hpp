#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcad/model_registry.hpp"
#include "pcad/vehicle.hpp"

namespace pcad {

// Scene template for a field sweep: the subject sits at the origin driving
// along +X, and the neighbour is placed at every grid cell with the given
// longitudinal speed and acceleration.
struct FieldScenario {
  double subject_speed = 27.78;    // m/s
  double neighbour_speed = 13.89;  // m/s, must be 0 for static objects
  double subject_accel = 0.0;      // m/s^2
  double neighbour_accel = 0.0;    // m/s^2, must be 0 for static objects
  NeighbourKind neighbour_kind = NeighbourKind::kMovingVehicle;
  BodyDims subject_dims;
  BodyDims neighbour_dims;
  double subject_mass = 1500.0;
  double neighbour_mass = 1500.0;
};

struct GridSpec {
  double x_min = 0.0;
  double x_max = 100.0;
  double y_min = -12.0;
  double y_max = 12.0;
  double resolution = 0.5;  // m, both axes, endpoints included
};

struct RiskFieldGrid {
  ModelId model = ModelId::kPcad;
  FieldScenario scenario;
  GridSpec spec;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;  // row-major: values[iy * nx + ix]

  double x_at(std::size_t ix) const { return spec.x_min + spec.resolution * ix; }
  double y_at(std::size_t iy) const { return spec.y_min + spec.resolution * iy; }
  double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }
};

// Evaluates the model with the neighbour centred at each cell. Cells whose
// body placement overlaps the subject body are masked to the maximum of the
// unmasked cells. The model uses the search settings in `config` as given;
// callers doing dense sweeps pick the cheaper field search settings.
RiskFieldGrid risk_field(ModelId id, const ModelConfig& config, const FieldScenario& scenario,
                         const GridSpec& spec = {});
// Serial reference implementation; bitwise-identical values.
RiskFieldGrid risk_field_serial(ModelId id, const ModelConfig& config,
                                const FieldScenario& scenario, const GridSpec& spec = {});

// Empirical sensitivity of a model's output to each scene factor, probed at
// fixed sample configurations (a moving cut-in ahead for the first two and
// the lateral factor, a static object ahead for the subject-speed factor).
struct FeatureMatrixRow {
  bool relative_velocity = false;
  bool neighbour_acceleration = false;
  bool subject_velocity = false;
  bool lateral_position = false;
};

FeatureMatrixRow feature_check(ModelId id, const ModelConfig& config);

// Long format: one "x,y,value" row per cell, preceded by comment lines
// echoing the model and scenario.
std::string grid_to_csv(const RiskFieldGrid& grid);

std::string grid_header_json(const RiskFieldGrid& grid);

}  // namespace pcad
