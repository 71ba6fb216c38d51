#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcad/field_grid.hpp"

using namespace pcad;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SceneSnapshot cell(const FieldScenario& scenario, double x, double y) {
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

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("grid geometry, cell placement, and masking") {
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kMerging);
  const FieldScenario scenario;  // moving neighbour, default speeds
  const RiskFieldGrid grid = risk_field(ModelId::kRpr, config, scenario);

  REQUIRE(grid.nx == 201);  // 0..100 m at 0.5 m
  REQUIRE(grid.ny == 49);   // -12..12 m at 0.5 m
  REQUIRE(grid.values.size() == grid.nx * grid.ny);
  CHECK(grid.x_at(0) == 0.0);
  CHECK(grid.x_at(200) == 100.0);
  CHECK(grid.y_at(0) == -12.0);
  CHECK(grid.y_at(24) == 0.0);
  CHECK(grid.y_at(48) == 12.0);

  // Values are the model evaluated with the neighbour centred at the cell.
  for (const auto [ix, iy] : {std::pair<std::size_t, std::size_t>{40, 24},
                              {40, 20},
                              {100, 30},
                              {16, 10}}) {
    CHECK(grid.at(ix, iy) ==
          risk_value(ModelId::kRpr, config, cell(scenario, grid.x_at(ix), grid.y_at(iy))));
  }

  // The lane-corridor regression is flat across the corridor and blind
  // outside it; its value only tracks the longitudinal distance.
  const auto expected = [&](double x) {
    return std::max(0.0, config.rpr.c0 + config.rpr.c1 * std::log(x));
  };
  for (std::size_t ix = 9; ix < grid.nx; ix += 10) {
    const double want = expected(grid.x_at(ix));
    for (std::size_t iy = 21; iy <= 27; ++iy) CHECK(grid.at(ix, iy) == want);  // |y| <= 1.5
    CHECK(grid.at(ix, 20) == 0.0);  // y = -2: on the corridor edge, excluded
    CHECK(grid.at(ix, 28) == 0.0);
    CHECK(grid.at(ix, 0) == 0.0);
  }

  // Cells whose placement touches the subject body (|x| <= 4, |y| <= 2) are
  // masked to the maximum unmasked value: the nearest corridor cell ahead.
  const double top = expected(4.5);
  CHECK(grid.at(0, 24) == top);
  CHECK(grid.at(8, 20) == top);   // x = 4, y = -2: contact by a corner
  CHECK(grid.at(8, 24) == top);
  CHECK(grid.at(0, 0) == 0.0);    // far off to the side: a real (zero) value

  // Down the centreline the value never grows with distance.
  for (std::size_t ix = 9; ix + 1 < grid.nx; ++ix)
    CHECK(grid.at(ix + 1, 24) <= grid.at(ix, 24));
}

TEST_CASE("parallel and serial sweeps agree bitwise") {
  ModelConfig config = ModelConfig::defaults(DatasetProfile::kObstacle);
  config.pcad_search = SearchConfig::field_defaults();
  FieldScenario scenario;
  scenario.subject_speed = 25.0;
  scenario.neighbour_speed = 0.0;
  scenario.neighbour_kind = NeighbourKind::kStaticObject;
  GridSpec spec;
  spec.x_min = 5.0;
  spec.x_max = 20.0;
  spec.y_min = -5.0;
  spec.y_max = 5.0;
  spec.resolution = 2.5;

  const RiskFieldGrid par = risk_field(ModelId::kPcad, config, scenario, spec);
  const RiskFieldGrid ser = risk_field_serial(ModelId::kPcad, config, scenario, spec);
  REQUIRE(par.nx == 7);
  REQUIRE(par.ny == 5);
  CHECK(par.values == ser.values);
  bool any_positive = false;
  for (double v : par.values) any_positive = any_positive || v > 0.0;
  CHECK(any_positive);
}

TEST_CASE("potential-difficulty field decays down the centreline") {
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kObstacle);
  FieldScenario scenario;
  scenario.subject_speed = 25.0;
  scenario.neighbour_speed = 0.0;
  scenario.neighbour_kind = NeighbourKind::kStaticObject;
  double previous = std::numeric_limits<double>::infinity();
  for (double x = 6.0; x <= 30.0; x += 3.0) {
    const double risk = risk_value(ModelId::kPcad, config, cell(scenario, x, 0.0));
    CHECK(risk > 0.0);
    CHECK(risk <= previous + 1e-6);
    previous = risk;
  }
}

TEST_CASE("scenario validation") {
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kObstacle);
  FieldScenario bad;
  bad.neighbour_kind = NeighbourKind::kStaticObject;
  bad.neighbour_speed = 5.0;
  CHECK_THROWS_AS(risk_field(ModelId::kRpr, config, bad), std::invalid_argument);
  bad.neighbour_speed = 0.0;
  bad.neighbour_accel = -1.0;
  CHECK_THROWS_AS(risk_field(ModelId::kRpr, config, bad), std::invalid_argument);

  GridSpec spec;
  spec.resolution = 0.0;
  CHECK_THROWS_AS(risk_field(ModelId::kRpr, config, FieldScenario{}, spec),
                  std::invalid_argument);
  spec.resolution = 0.5;
  spec.x_max = -1.0;
  CHECK_THROWS_AS(risk_field(ModelId::kRpr, config, FieldScenario{}, spec),
                  std::invalid_argument);
}

TEST_CASE("feature sensitivity matrix") {
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kMerging);

  const FeatureMatrixRow pcad = feature_check(ModelId::kPcad, config);
  CHECK(pcad.relative_velocity);
  CHECK(pcad.neighbour_acceleration);
  CHECK(pcad.subject_velocity);
  CHECK(pcad.lateral_position);

  const FeatureMatrixRow rpr = feature_check(ModelId::kRpr, config);
  CHECK(!rpr.relative_velocity);
  CHECK(rpr.neighbour_acceleration);
  CHECK(!rpr.subject_velocity);
  CHECK(!rpr.lateral_position);  // flat across the lane corridor

  const FeatureMatrixRow ppdrf = feature_check(ModelId::kPpdrf, config);
  CHECK(ppdrf.relative_velocity);
  CHECK(ppdrf.neighbour_acceleration);
  CHECK(ppdrf.subject_velocity);
  CHECK(ppdrf.lateral_position);

  const FeatureMatrixRow drf = feature_check(ModelId::kDrf, config);
  CHECK(!drf.relative_velocity);
  CHECK(!drf.neighbour_acceleration);
  CHECK(drf.subject_velocity);
  CHECK(drf.lateral_position);
}

TEST_CASE("models that ignore neighbour motion produce identical grids") {
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kMerging);
  GridSpec spec;
  spec.x_min = 0.0;
  spec.x_max = 30.0;
  spec.y_min = -6.0;
  spec.y_max = 6.0;
  spec.resolution = 1.5;

  FieldScenario base;
  FieldScenario fast = base;
  fast.neighbour_speed = 5.0;
  FieldScenario braking = base;
  braking.neighbour_accel = -3.0;
  FieldScenario slower_subject = base;
  slower_subject.subject_speed = 20.0;

  // The lane-corridor regression sees no velocity at all.
  CHECK(risk_field(ModelId::kRpr, config, base, spec).values ==
        risk_field(ModelId::kRpr, config, fast, spec).values);
  CHECK(risk_field(ModelId::kRpr, config, base, spec).values ==
        risk_field(ModelId::kRpr, config, slower_subject, spec).values);

  // The preview field only reads the subject's own speed.
  CHECK(risk_field(ModelId::kDrf, config, base, spec).values ==
        risk_field(ModelId::kDrf, config, fast, spec).values);
  CHECK(risk_field(ModelId::kDrf, config, base, spec).values ==
        risk_field(ModelId::kDrf, config, braking, spec).values);
  CHECK(risk_field(ModelId::kDrf, config, base, spec).values !=
        risk_field(ModelId::kDrf, config, slower_subject, spec).values);
}

TEST_CASE("grid export formats") {
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kMerging);
  GridSpec spec;
  spec.x_min = 10.0;
  spec.x_max = 12.0;
  spec.y_min = -1.0;
  spec.y_max = 1.0;
  spec.resolution = 1.0;
  const RiskFieldGrid grid = risk_field(ModelId::kRpr, config, FieldScenario{}, spec);
  REQUIRE(grid.nx == 3);
  REQUIRE(grid.ny == 3);

  const std::string csv = grid_to_csv(grid);
  CHECK(csv.rfind("# model=rpr\n", 0) == 0);
  CHECK(csv.find("neighbour_kind=moving_vehicle") != std::string::npos);
  CHECK(csv.find("\nx,y,value\n") != std::string::npos);
  CHECK(count_lines(csv) == 3 + 9);
  const std::string first_row = "\n10,-1," + fmt17(grid.at(0, 0)) + "\n";
  CHECK(csv.find(first_row) != std::string::npos);

  const nlohmann::json header = nlohmann::json::parse(grid_header_json(grid));
  CHECK(header["model"] == "rpr");
  CHECK(header["nx"] == 3);
  CHECK(header["ny"] == 3);
  CHECK(header["resolution"] == 1.0);
  CHECK(header["x_range"][0] == 10.0);
  CHECK(header["x_range"][1] == 12.0);
  CHECK(header["scenario"]["neighbour_kind"] == "moving_vehicle");
  CHECK(header["scenario"]["subject_speed"] == 27.78);
}
