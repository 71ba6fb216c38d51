#include "pcad/field_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace pcad {
namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate(const FieldScenario& scenario, const GridSpec& spec) {
  if (spec.resolution <= 0) throw std::invalid_argument("risk_field: resolution must be > 0");
  if (spec.x_max < spec.x_min || spec.y_max < spec.y_min)
    throw std::invalid_argument("risk_field: empty grid range");
  if (scenario.neighbour_kind == NeighbourKind::kStaticObject &&
      (scenario.neighbour_speed != 0.0 || scenario.neighbour_accel != 0.0))
    throw std::invalid_argument("risk_field: static objects cannot move");
}

SceneSnapshot cell_snapshot(const FieldScenario& scenario, double x, double y) {
  SceneSnapshot s;
  s.subject = {{0.0, 0.0}, {scenario.subject_speed, 0.0}, {scenario.subject_accel, 0.0}};
  s.neighbour = {{x, y}, {scenario.neighbour_speed, 0.0}, {scenario.neighbour_accel, 0.0}};
  s.subject_dims = scenario.subject_dims;
  s.neighbour_dims = scenario.neighbour_dims;
  s.subject_mass = scenario.subject_mass;
  s.neighbour_mass = scenario.neighbour_mass;
  s.neighbour_kind = scenario.neighbour_kind;
  return s;
}

template <bool Parallel>
RiskFieldGrid field_impl(ModelId id, const ModelConfig& config, const FieldScenario& scenario,
                         const GridSpec& spec) {
  validate(scenario, spec);
  RiskFieldGrid grid;
  grid.model = id;
  grid.scenario = scenario;
  grid.spec = spec;
  grid.nx = static_cast<std::size_t>(std::floor((spec.x_max - spec.x_min) / spec.resolution + 1e-9)) + 1;
  grid.ny = static_cast<std::size_t>(std::floor((spec.y_max - spec.y_min) / spec.resolution + 1e-9)) + 1;
  const long n_cells = static_cast<long>(grid.nx * grid.ny);
  grid.values.assign(grid.nx * grid.ny, 0.0);
  std::vector<char> masked(grid.nx * grid.ny, 0);

#pragma omp parallel for schedule(dynamic, 64) if (Parallel)
  for (long cell = 0; cell < n_cells; ++cell) {
    const std::size_t ix = static_cast<std::size_t>(cell) % grid.nx;
    const std::size_t iy = static_cast<std::size_t>(cell) / grid.nx;
    const SceneSnapshot s = cell_snapshot(scenario, grid.x_at(ix), grid.y_at(iy));
    if (bodies_in_contact(s)) {
      masked[cell] = 1;
    } else {
      grid.values[cell] = risk_value(id, config, s);
    }
  }

  double max_value = -std::numeric_limits<double>::infinity();
  for (long cell = 0; cell < n_cells; ++cell)
    if (!masked[cell]) max_value = std::max(max_value, grid.values[cell]);
  if (!std::isfinite(max_value)) max_value = 0.0;  // fully masked grid
  for (long cell = 0; cell < n_cells; ++cell)
    if (masked[cell]) grid.values[cell] = max_value;
  return grid;
}

}  // namespace

RiskFieldGrid risk_field(ModelId id, const ModelConfig& config, const FieldScenario& scenario,
                         const GridSpec& spec) {
  return field_impl<true>(id, config, scenario, spec);
}

RiskFieldGrid risk_field_serial(ModelId id, const ModelConfig& config,
                                const FieldScenario& scenario, const GridSpec& spec) {
  return field_impl<false>(id, config, scenario, spec);
}

FeatureMatrixRow feature_check(ModelId id, const ModelConfig& config) {
  // Moving cut-in ahead: closing at 10 m/s, 30 m gap, slightly off-centre.
  FieldScenario moving;
  moving.subject_speed = 25.0;
  moving.neighbour_speed = 15.0;
  const auto moving_probe = [&](double neighbour_speed, double neighbour_accel, double y) {
    SceneSnapshot s = cell_snapshot(moving, 30.0, y);
    s.neighbour.velocity.x = neighbour_speed;
    s.neighbour.acceleration.x = neighbour_accel;
    return risk_value(id, config, s);
  };
  // Static object ahead, for subject-speed sensitivity: a common-speed shift
  // of a moving pair would leave every relative quantity unchanged.
  FieldScenario still;
  still.neighbour_kind = NeighbourKind::kStaticObject;
  still.neighbour_speed = 0.0;
  const auto still_probe = [&](double subject_speed) {
    FieldScenario scenario = still;
    scenario.subject_speed = subject_speed;
    return risk_value(id, config, cell_snapshot(scenario, 30.0, 0.5));
  };

  FeatureMatrixRow row;
  row.relative_velocity = moving_probe(15.0, 0.0, 0.5) != moving_probe(10.0, 0.0, 0.5);
  row.neighbour_acceleration = moving_probe(15.0, 0.0, 0.5) != moving_probe(15.0, -3.0, 0.5);
  row.subject_velocity = still_probe(25.0) != still_probe(20.0);
  row.lateral_position = moving_probe(15.0, 0.0, 0.5) != moving_probe(15.0, 0.0, 1.2);
  return row;
}

std::string grid_to_csv(const RiskFieldGrid& grid) {
  std::string out;
  out += "# model=" + to_string(grid.model) + "\n";
  out += "# subject_speed=" + fmt17(grid.scenario.subject_speed) +
         " neighbour_speed=" + fmt17(grid.scenario.neighbour_speed) +
         " subject_accel=" + fmt17(grid.scenario.subject_accel) +
         " neighbour_accel=" + fmt17(grid.scenario.neighbour_accel) + " neighbour_kind=" +
         (grid.scenario.neighbour_kind == NeighbourKind::kStaticObject ? "static_object"
                                                                       : "moving_vehicle") +
         "\n";
  out += "x,y,value\n";
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix)
      out += fmt17(grid.x_at(ix)) + "," + fmt17(grid.y_at(iy)) + "," + fmt17(grid.at(ix, iy)) +
             "\n";
  return out;
}

std::string grid_header_json(const RiskFieldGrid& grid) {
  json j;
  j["model"] = to_string(grid.model);
  j["x_range"] = {grid.spec.x_min, grid.spec.x_max};
  j["y_range"] = {grid.spec.y_min, grid.spec.y_max};
  j["resolution"] = grid.spec.resolution;
  j["nx"] = grid.nx;
  j["ny"] = grid.ny;
  j["scenario"] = {
      {"subject_speed", grid.scenario.subject_speed},
      {"neighbour_speed", grid.scenario.neighbour_speed},
      {"subject_accel", grid.scenario.subject_accel},
      {"neighbour_accel", grid.scenario.neighbour_accel},
      {"neighbour_kind", grid.scenario.neighbour_kind == NeighbourKind::kStaticObject
                             ? "static_object"
                             : "moving_vehicle"},
      {"subject_dims", {grid.scenario.subject_dims.length, grid.scenario.subject_dims.width}},
      {"neighbour_dims",
       {grid.scenario.neighbour_dims.length, grid.scenario.neighbour_dims.width}},
      {"subject_mass", grid.scenario.subject_mass},
      {"neighbour_mass", grid.scenario.neighbour_mass},
  };
  return j.dump(2) + "\n";
}

}  // namespace pcad
