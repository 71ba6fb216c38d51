// Release gate: re-derives every headline guarantee with independent oracles
// (simulation, dense lattices, Monte Carlo, closed forms) and prints one
// [PASS]/[FAIL] line per criterion. Exit status is the number of failures.
// Run with criterion numbers as arguments to check a subset, e.g. "2 9".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "pcad/baselines.hpp"
#include "pcad/evaluation.hpp"
#include "pcad/event_io.hpp"
#include "pcad/field_grid.hpp"
#include "pcad/looming.hpp"
#include "pcad/model_registry.hpp"
#include "pcad/pcad_model.hpp"
#include "pcad/scenarios.hpp"
#include "pcad/truncated_gaussian.hpp"
#include "pcad/vehicle.hpp"

using namespace pcad;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// ---------------------------------------------------------------------------
// 1. Looming vs a 60 s constant-velocity overlap simulation.
// ---------------------------------------------------------------------------

Outcome check_looming_oracle() {
  constexpr int kConfigs = 10000;
  constexpr double kDt = 1e-3;
  constexpr double kHorizon = 60.0;
  constexpr double kBoundaryBand = 1e-3;  // skip grazing contacts

  // Draws mirror the interaction archetypes of the scenario corpus on a
  // straight road: same-lane following, adjacent-lane passing, and an active
  // merge (the one archetype with lateral motion). Collisions that first
  // touch a body's side face are invisible to front-edge reference pairs by
  // construction; the merge stratum carries that known miss class.
  std::mt19937_64 rng(20260811);
  int counted = 0;
  int agreed = 0;
  int attempts = 0;
  while (counted < kConfigs && attempts < kConfigs * 4) {
    ++attempts;
    SceneSnapshot s;
    s.subject.position = {0.0, 0.0};
    s.subject.velocity = {uniform(rng, 8.0, 30.0), 0.0};
    s.neighbour.velocity = {uniform(rng, 0.0, 30.0), 0.0};
    const int stratum = attempts % 20;
    double lateral = 0.0;
    if (stratum < 12) {  // following: same lane
      lateral = uniform(rng, -1.75, 1.75);
    } else if (stratum < 17) {  // passing: adjacent lane
      lateral = uniform(rng, 1.75, 5.25) * (stratum % 2 == 0 ? 1.0 : -1.0);
    } else {  // merge: neighbour drifts laterally
      lateral = uniform(rng, -5.25, 5.25);
      s.neighbour.velocity.y = uniform(rng, -1.0, 1.0);
    }
    s.neighbour_dims = {uniform(rng, 3.0, 8.0), uniform(rng, 1.6, 2.6)};

    const double hx = (s.subject_dims.length + s.neighbour_dims.length) / 2.0;
    const double hy = (s.subject_dims.width + s.neighbour_dims.width) / 2.0;

    // Closing pairs are placed by time-to-contact: encounters are drawn so
    // they resolve inside the simulated horizon, the way corpora
    // parameterise approaches by headway time. A pair closing slower than
    // ~5 cm/s cannot resolve from the 6..60 m band at all and is redrawn.
    const double closing = s.subject.velocity.x - s.neighbour.velocity.x;
    double range = 0.0;
    if (closing > 0.0) {
      const double t_lo = std::max(0.5, (6.0 - hx) / closing);
      const double t_hi = std::min(50.0, (60.0 - hx) / closing);
      if (t_lo >= t_hi) continue;
      range = hx + closing * uniform(rng, t_lo, t_hi);
    } else {
      range = uniform(rng, 6.0, 60.0);
    }
    s.neighbour.position = {range, lateral};
    const double dx0 = s.neighbour.position.x - s.subject.position.x;
    const double dy0 = s.neighbour.position.y - s.subject.position.y;
    if (std::abs(dx0) < hx + kBoundaryBand && std::abs(dy0) < hy + kBoundaryBand) continue;

    // Signed box separation along the relative straight-line motion; the
    // bodies overlap at the first instant both axis gaps close.
    const double wx = s.neighbour.velocity.x - s.subject.velocity.x;
    const double wy = s.neighbour.velocity.y - s.subject.velocity.y;
    double min_sep = std::max(std::abs(dx0) - hx, std::abs(dy0) - hy);
    const long steps = std::lround(kHorizon / kDt);
    for (long k = 1; k <= steps; ++k) {
      const double t = static_cast<double>(k) * kDt;
      const double sep =
          std::max(std::abs(dx0 + wx * t) - hx, std::abs(dy0 + wy * t) - hy);
      min_sep = std::min(min_sep, sep);
      if (min_sep <= -kBoundaryBand) break;  // deep overlap; verdict settled
    }
    if (std::abs(min_sep) < kBoundaryBand) continue;  // decision-boundary config
    const bool collides = min_sep <= 0.0;

    bool looming = false;
    try {
      looming = is_looming(s);
    } catch (const std::invalid_argument&) {
      continue;  // coincident reference points; degenerate draw
    }
    ++counted;
    if (looming == collides) ++agreed;
  }

  const double agreement = static_cast<double>(agreed) / counted;
  Outcome out;
  out.ok = counted == kConfigs && agreement >= 0.99;
  out.detail = fmt("agreement %.2f%% on %d configs", 100.0 * agreement, counted);
  return out;
}

// ---------------------------------------------------------------------------
// 2. Velocity-gap search vs a dense 0.01 m/s lattice.
// ---------------------------------------------------------------------------

// Minimum distance from the relative velocity to a safe lattice point,
// scanning rows centre-out so the running best prunes early. Candidates
// beyond `cap` cannot matter and are skipped.
double dense_gap_oracle(const SceneSnapshot& s, const Vec2& v_subject,
                        const Vec2& v_neighbour, double cap) {
  constexpr double kStep = 0.01;
  if (safe_set_contains(s, v_subject, v_neighbour)) return 0.0;
  const Vec2 rel = v_subject - v_neighbour;
  const VelocityBounds w{};  // search window offsets around the velocity hull
  const double lo_x = w.backward + std::min(0.0, rel.x);
  const double hi_x = w.forward + std::max(0.0, rel.x);
  const double lo_y = w.right + std::min(0.0, rel.y);
  const double hi_y = w.left + std::max(0.0, rel.y);

  double best = cap;
  const long j_lo = static_cast<long>(std::ceil(std::max(lo_y, rel.y - cap) / kStep));
  const long j_hi = static_cast<long>(std::floor(std::min(hi_y, rel.y + cap) / kStep));
  const long j_mid = std::clamp(std::lround(rel.y / kStep), j_lo, j_hi);
  const auto scan_row = [&](long j) {
    const double y = static_cast<double>(j) * kStep;
    const double dy = y - rel.y;
    const double rem = best * best - dy * dy;
    if (rem < 0.0) return;
    const double half = std::sqrt(rem);
    const long i_lo = static_cast<long>(std::ceil(std::max(lo_x, rel.x - half) / kStep));
    const long i_hi = static_cast<long>(std::floor(std::min(hi_x, rel.x + half) / kStep));
    for (long i = i_lo; i <= i_hi; ++i) {
      const double x = static_cast<double>(i) * kStep;
      const double dist = std::hypot(x - rel.x, dy);
      if (dist >= best) continue;
      if (safe_set_contains(s, v_neighbour + Vec2{x, y}, v_neighbour)) best = dist;
    }
  };
  for (long off = 0;; ++off) {
    const bool up_ok = j_mid + off <= j_hi;
    const bool down_ok = off > 0 && j_mid - off >= j_lo;
    if (!up_ok && !down_ok) break;
    if (up_ok) scan_row(j_mid + off);
    if (down_ok) scan_row(j_mid - off);
  }
  return best;
}

Outcome check_gap_oracle() {
  const SearchConfig cfg = SearchConfig::point_defaults();
  std::mt19937_64 rng(71511);
  int checked = 0;
  double worst = 0.0;
  Outcome out;
  for (int i = 0; i < 200; ++i) {
    SceneSnapshot s;
    s.subject.position = {0.0, 0.0};
    s.neighbour.position = {uniform(rng, 8.0, 60.0), uniform(rng, -6.0, 6.0)};
    const Vec2 v_subject{uniform(rng, 5.0, 30.0), uniform(rng, -1.0, 1.0)};
    Vec2 v_neighbour{uniform(rng, 0.0, 15.0), uniform(rng, -1.5, 1.5)};
    if (i % 4 == 0) v_neighbour = {0.0, 0.0};

    const auto res = avoidance_difficulty(s, v_subject, v_neighbour, cfg);
    if (!res) {
      out.ok = false;
      out.detail = fmt("draw %d: search found no safe candidate", i);
      return out;
    }
    const double oracle =
        dense_gap_oracle(s, v_subject, v_neighbour, res->gap + 0.3);
    const double tol = std::max(cfg.fine_step, 0.01 * oracle);
    const double diff = std::abs(res->gap - oracle);
    worst = std::max(worst, diff);
    if (diff > tol) {
      out.ok = false;
      out.detail = fmt("draw %d: search %.4f vs oracle %.4f", i, res->gap, oracle);
      return out;
    }
    ++checked;
  }

  // Overtake geometry with several disjoint escape sectors: a slow lead
  // vehicle 50 m ahead of a faster subject.
  SceneSnapshot s;
  s.subject.position = {0.0, 0.0};
  s.neighbour.position = {54.0, 0.0};  // 50 m bumper to bumper
  const Vec2 v_subject{16.67, 0.0};
  const Vec2 v_neighbour{8.33, 0.0};
  const auto res = avoidance_difficulty(s, v_subject, v_neighbour, cfg);
  const double oracle = dense_gap_oracle(s, v_subject, v_neighbour,
                                         res ? res->gap + 0.3 : 10.0);
  if (!res || !(res->gap > 0.0) ||
      std::abs(res->gap - oracle) > std::max(cfg.fine_step, 0.01 * oracle)) {
    out.ok = false;
    out.detail = fmt("overtake scenario: gap %.4f vs oracle %.4f",
                     res ? res->gap : -1.0, oracle);
    return out;
  }
  out.detail = fmt("worst |search - oracle| %.4f m/s over %d draws; overtake gap %.3f",
                   worst, checked, res->gap);
  return out;
}

// ---------------------------------------------------------------------------
// 3. Imaginary-speed expectation vs closed form and Monte Carlo.
// ---------------------------------------------------------------------------

// Mean of a zero-mean half-normal truncated to [0, L].
double truncated_half_normal_mean(double sigma, double L) {
  const double mass = std::erf(L / (sigma * std::sqrt(2.0)));
  const double tail = 1.0 - std::exp(-L * L / (2.0 * sigma * sigma));
  return sigma * std::sqrt(2.0 / M_PI) * tail / mass;
}

Outcome check_imaginary_speed() {
  const VelocityBounds bounds{};
  Outcome out;

  double axis_err = 0.0;
  for (double sigma : {0.8, 1.7, 4.28, 3.86, 6.58, 1.2, 2.0}) {
    const struct {
      Vec2 dir;
      double sx, sy;
    } cases[] = {
        {{1.0, 0.0}, sigma, 1.0},
        {{-1.0, 0.0}, sigma, 1.0},
        {{0.0, 1.0}, 1.0, sigma},
        {{0.0, -1.0}, 1.0, sigma},
    };
    for (const auto& c : cases) {
      const double L = ray_exit_length(c.dir, bounds);
      const double sigma_ray = c.dir.x != 0.0 ? c.sx : c.sy;
      const double closed = truncated_half_normal_mean(sigma_ray, L);
      const double lib = imaginary_speed_expectation(c.dir, c.sx, c.sy, bounds);
      axis_err = std::max(axis_err, std::abs(lib - closed));
    }
  }
  // Box much wider than the spread: the mean degenerates to sigma*sqrt(2/pi).
  const VelocityBounds wide{1e9, -1e9, 1e9, -1e9};
  const double lib_wide = imaginary_speed_expectation({1.0, 0.0}, 1.3, 1.0, wide);
  axis_err = std::max(axis_err, std::abs(lib_wide - 1.3 * std::sqrt(2.0 / M_PI)));
  if (axis_err > 1e-6) {
    out.ok = false;
    out.detail = fmt("axis-aligned error %.3e exceeds 1e-6", axis_err);
    return out;
  }

  // Oblique rays: importance-free Monte Carlo along the ray, weighting each
  // uniform draw by the product of the component densities.
  constexpr long kSamples = 10000000;
  const double thetas[] = {0.35, 1.05, 2.2, 4.0};
  const struct {
    double sx, sy;
  } spreads[] = {{4.28, 3.86}, {6.58, 1.2}, {0.8, 1.7}};
  double worst_rel = 0.0;
  std::uint64_t seed = 99;
  for (double theta : thetas) {
    for (const auto& sp : spreads) {
      const Vec2 dir{std::cos(theta), std::sin(theta)};
      const double L = ray_exit_length(dir, bounds);
      std::mt19937_64 rng(seed++);
      double sum_w = 0.0, sum_lw = 0.0;
      for (long k = 0; k < kSamples; ++k) {
        const double l = uniform(rng, 0.0, L);
        const double px = l * dir.x;
        const double py = l * dir.y;
        const double w = std::exp(-px * px / (2.0 * sp.sx * sp.sx) -
                                  py * py / (2.0 * sp.sy * sp.sy));
        sum_w += w;
        sum_lw += l * w;
      }
      const double mc = sum_lw / sum_w;
      const double lib = imaginary_speed_expectation(dir, sp.sx, sp.sy, bounds);
      worst_rel = std::max(worst_rel, std::abs(lib - mc) / mc);
    }
  }
  out.ok = worst_rel <= 0.01;
  out.detail = fmt("axis err %.1e; Monte-Carlo worst rel err %.3f%%", axis_err,
                   100.0 * worst_rel);
  return out;
}

// ---------------------------------------------------------------------------
// 4. Centre-line imaginary velocity minimises the perceived distance rate.
// ---------------------------------------------------------------------------

Outcome check_distance_direction() {
  const PcadParams params = PcadParams::merging_defaults();
  std::mt19937_64 rng(4242);
  int violations = 0;
  for (int g = 0; g < 100; ++g) {
    SceneSnapshot s;
    s.subject.position = {0.0, 0.0};
    s.subject.velocity = {uniform(rng, 5.0, 30.0), uniform(rng, -1.0, 1.0)};
    s.subject.acceleration = {uniform(rng, -3.0, 1.0), uniform(rng, -0.5, 0.5)};
    const double side = g % 2 == 0 ? 1.0 : -1.0;
    s.neighbour.position = {side * uniform(rng, 6.0, 40.0), uniform(rng, -8.0, 8.0)};
    s.neighbour.velocity = {uniform(rng, 0.0, 25.0), uniform(rng, -1.0, 1.0)};
    s.neighbour.acceleration = {uniform(rng, -4.0, 1.0), uniform(rng, -0.3, 0.3)};

    const Vec2 v_sub = perceived_velocity(s, params, Role::kSubject);
    const Vec2 v_nbr = perceived_velocity(s, params, Role::kNeighbour);
    const double model_rate =
        distance_rate(s.subject.position, v_sub, s.neighbour.position, v_nbr);
    for (Role role : {Role::kSubject, Role::kNeighbour}) {
      const Vec2 imag = imaginary_velocity(s.subject.position, s.neighbour.position,
                                           params, role);
      const Vec2 base = role == Role::kSubject ? v_sub - imag : v_nbr - imag;
      for (int k = 1; k < 36; ++k) {
        const double phi = 2.0 * M_PI * k / 36.0;
        const Vec2 rotated{imag.x * std::cos(phi) - imag.y * std::sin(phi),
                           imag.x * std::sin(phi) + imag.y * std::cos(phi)};
        const Vec2 placed = base + rotated;
        const double rate =
            role == Role::kSubject
                ? distance_rate(s.subject.position, placed, s.neighbour.position, v_nbr)
                : distance_rate(s.subject.position, v_sub, s.neighbour.position, placed);
        if (model_rate > rate + 1e-12) ++violations;
      }
    }
  }
  Outcome out;
  out.ok = violations == 0;
  out.detail = fmt("%d violations over 100 geometries x 35 rotations x 2 roles",
                   violations);
  return out;
}

// ---------------------------------------------------------------------------
// 5. Event regression anchor value and coefficient-sign monotonicity.
// ---------------------------------------------------------------------------

Outcome check_rpr_exactness() {
  Outcome out;
  const double anchor = rpr_event(1.0, 0.0, 0.0, 0.0);
  if (anchor != 9.384) {
    out.ok = false;
    out.detail = fmt("rpr_event(1,0,0,0) = %.17g, expected 9.384", anchor);
    return out;
  }
  double previous = -1.0;
  for (double gap : {16.0, 8.0, 4.0, 2.0, 1.0}) {  // smaller gap, higher risk
    const double value = rpr_event(gap, 10.0, -2.0, 0.0);
    if (!(value > previous)) {
      out.ok = false;
      out.detail = fmt("rating not increasing as gap shrinks to %.0f m", gap);
      return out;
    }
    previous = value;
  }
  previous = -1.0;
  for (double brake : {0.0, -2.0, -5.0, -8.0}) {  // harder braking, higher risk
    const double value = rpr_event(4.0, 10.0, brake, 0.0);
    if (!(value > previous)) {
      out.ok = false;
      out.detail = fmt("rating not increasing at braking %.0f m/s^2", brake);
      return out;
    }
    previous = value;
  }
  out.detail = "anchor 9.384 exact; gap and braking responses strictly monotone";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Feature-sensitivity matrix plus bitwise identity for insensitive axes.
// ---------------------------------------------------------------------------

Outcome check_feature_matrix() {
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kMerging);
  Outcome out;
  const auto expect = [&](ModelId id, bool rel_v, bool nbr_a, bool sub_v,
                          bool lat) -> bool {
    const FeatureMatrixRow row = feature_check(id, config);
    return row.relative_velocity == rel_v && row.neighbour_acceleration == nbr_a &&
           row.subject_velocity == sub_v && row.lateral_position == lat;
  };
  if (!expect(ModelId::kPcad, true, true, true, true) ||
      !expect(ModelId::kRpr, false, true, false, false) ||
      !expect(ModelId::kPpdrf, true, true, true, true) ||
      !expect(ModelId::kDrf, false, false, true, true)) {
    out.ok = false;
    out.detail = "sensitivity matrix mismatch";
    return out;
  }

  GridSpec spec;
  spec.x_min = 0.0;
  spec.x_max = 30.0;
  spec.y_min = -6.0;
  spec.y_max = 6.0;
  spec.resolution = 1.5;
  FieldScenario base;
  FieldScenario faster_neighbour = base;
  faster_neighbour.neighbour_speed = 5.0;
  FieldScenario braking = base;
  braking.neighbour_accel = -3.0;
  FieldScenario slower_subject = base;
  slower_subject.subject_speed = 20.0;

  const auto same = [&](ModelId id, const FieldScenario& a, const FieldScenario& b) {
    return risk_field(id, config, a, spec).values ==
           risk_field(id, config, b, spec).values;
  };
  const bool identities =
      same(ModelId::kRpr, base, faster_neighbour) &&
      same(ModelId::kRpr, base, slower_subject) &&
      same(ModelId::kDrf, base, faster_neighbour) &&
      same(ModelId::kDrf, base, braking) &&
      !same(ModelId::kDrf, base, slower_subject);
  out.ok = identities;
  out.detail = identities ? "matrix reproduced; insensitive grids bitwise identical"
                          : "bitwise grid identity failed";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Corridor orderings: deceleration severity and common-speed weighting.
// ---------------------------------------------------------------------------

Outcome check_corridor_orderings() {
  const PcadParams params = PcadParams::merging_defaults();
  // The orderings are separated by ~1.5e-3 risk units at the far end of the
  // corridor, while gap-search jitter scales with the fine lattice step. A
  // finer search keeps numerical error well below the separations so the
  // tolerance below tests the model's ordering, not lattice noise.
  const SearchConfig cfg{0.05, 0.002};
  Outcome out;

  const auto corridor_risk = [&](double x, double common_speed, double accel) {
    SceneSnapshot s;
    s.subject.position = {0.0, 0.0};
    s.subject.velocity = {common_speed, 0.0};
    s.neighbour.position = {x, 0.0};
    s.neighbour.velocity = {common_speed, 0.0};
    s.neighbour.acceleration = {accel, 0.0};
    return pcad_risk(s, params, cfg);
  };

  int decel_violations = 0;
  int speed_violations = 0;
  double max_risk = 0.0;
  for (double x = 6.0; x <= 60.0; x += 2.0) {
    const double r0 = corridor_risk(x, 27.78, 0.0);
    const double r4 = corridor_risk(x, 27.78, -4.0);
    const double r8 = corridor_risk(x, 27.78, -8.0);
    if (r0 > r4 + 1e-9 || r4 > r8 + 1e-9) ++decel_violations;

    const double s20 = corridor_risk(x, 20.0 / 3.6, 0.0);
    const double s60 = corridor_risk(x, 60.0 / 3.6, 0.0);
    const double s100 = corridor_risk(x, 100.0 / 3.6, 0.0);
    if (s20 > s60 + 1e-9 || s60 > s100 + 1e-9) ++speed_violations;
    max_risk = std::max({max_risk, r8, s100});
  }
  out.ok = decel_violations == 0 && speed_violations == 0 && max_risk > 0.0;
  out.detail = fmt("%d deceleration and %d common-speed violations (peak risk %.3f)",
                   decel_violations, speed_violations, max_risk);
  return out;
}

// ---------------------------------------------------------------------------
// 8. Self-calibration: zero-noise fixed points and noisy recovery.
// ---------------------------------------------------------------------------

Event lead_vehicle_snapshot(double gap, double brake, int rep) {
  SceneSnapshot s;
  s.subject = {{0.0, 0.0}, {27.78, 0.0}, {0.0, 0.0}};
  s.neighbour = {{gap + 4.0, 0.0}, {20.0, 0.0}, {brake, 0.0}};
  Event e;
  e.id = fmt("lead_g%04.1f_b%04.1f_r%03d", gap, -brake, rep);
  e.kind = EventKind::kMergingBrake;
  e.design = {{"gap", gap}, {"brake", brake}};
  e.times = {0.0};
  e.samples = {s};
  return e;
}

std::vector<Event> obstacle_subset(int repetitions) {
  ObstacleOptions opts;
  opts.dt = 0.2;
  opts.duration = 6.0;
  std::vector<Event> events;
  for (const Vec2& offset : default_obstacle_offsets()) {
    if (offset.x > 44.0) continue;  // keep each objective evaluation cheap
    for (int rep = 0; rep < repetitions; ++rep)
      events.push_back(gen_obstacle_event(
          offset, opts, fmt("obs_x%04.1f_y%+05.2f_r%d", offset.x, offset.y, rep)));
  }
  return events;
}

Outcome check_calibration_recovery() {
  Outcome out;
  std::vector<std::string> notes;
  const auto elapsed = [](const std::chrono::steady_clock::time_point& begin) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
        .count();
  };

  // Velocity-gap model on the static-obstacle corridor.
  {
    const auto begin = std::chrono::steady_clock::now();
    ModelConfig truth = ModelConfig::defaults(DatasetProfile::kObstacle);
    truth.pcad_search = SearchConfig::field_defaults();
    ModelConfig init = truth;
    init.pcad.sigma_subject_x *= 1.35;
    init.pcad.sigma_subject_y *= 0.70;

    std::vector<Event> clean = obstacle_subset(1);
    synth_ratings(clean, ModelId::kPcad, truth, 0.0, 21);
    const CalibrationResult fit =
        calibrate(clean, ModelId::kPcad, init, {1, 500, 1e-8, 1});

    // Noisy recovery needs two things the default layout lacks. Lateral
    // offsets out to ±4.5 m at 16..32 m range (bearings to ~25°) excite the
    // lateral sigma, which the ±2.2 m layout leaves unidentified below 6°.
    // And a point-resolution search: at field resolution the risk surface is
    // piecewise-constant in sigma, and the simplex collapses on a plateau
    // before reaching the basin floor.
    ModelConfig fine_truth = truth;
    fine_truth.pcad_search = SearchConfig::point_defaults();
    ModelConfig fine_init = init;
    fine_init.pcad_search = fine_truth.pcad_search;
    ObstacleOptions lateral_opts;
    lateral_opts.dt = 0.2;
    lateral_opts.duration = 4.0;
    std::vector<Event> noisy;
    for (double x : {16.0, 24.0, 32.0})
      for (double y : {0.0, 1.5, -1.5, 3.0, -3.0, 4.5, -4.5})
        for (int rep = 0; rep < 4; ++rep)
          noisy.push_back(gen_obstacle_event(
              {x, y}, lateral_opts, fmt("cal_x%04.1f_y%+04.1f_r%d", x, y, rep)));
    synth_ratings(noisy, ModelId::kPcad, fine_truth, 0.5, 22);
    const CalibrationResult refit =
        calibrate(noisy, ModelId::kPcad, fine_init, {3, 800, 1e-8, 2});
    const double ex = std::abs(refit.config.pcad.sigma_subject_x -
                               truth.pcad.sigma_subject_x) /
                      truth.pcad.sigma_subject_x;
    const double ey = std::abs(refit.config.pcad.sigma_subject_y -
                               truth.pcad.sigma_subject_y) /
                      truth.pcad.sigma_subject_y;
    const double secs = elapsed(begin);
    if (fit.objective >= 1e-3 || ex > 0.20 || ey > 0.20 || secs >= 600.0)
      out.ok = false;
    notes.push_back(fmt("pcad obj %.1e sigmas off %.0f%%/%.0f%% %.0fs",
                        fit.objective, 100 * ex, 100 * ey, secs));
  }

  // Event regression on a lead-vehicle snapshot grid.
  {
    const auto begin = std::chrono::steady_clock::now();
    const ModelConfig truth = ModelConfig::defaults(DatasetProfile::kMerging);
    ModelConfig init = truth;
    init.rpr.c0 = 8.0;
    init.rpr.c1 = -1.0;
    init.rpr.c2 = 0.5;
    const auto grid_events = [&](int reps) {
      std::vector<Event> events;
      for (double gap : {4.0, 6.0, 9.0, 13.0})
        for (double brake : {0.0, -2.0, -5.0, -8.0})
          for (int rep = 0; rep < reps; ++rep)
            events.push_back(lead_vehicle_snapshot(gap, brake, rep));
      return events;
    };

    std::vector<Event> clean = grid_events(1);
    synth_ratings(clean, ModelId::kRpr, truth, 0.0, 31);
    const CalibrationResult fit =
        calibrate(clean, ModelId::kRpr, init, {2, 1500, 1e-9, 3});

    std::vector<Event> noisy = grid_events(200);
    synth_ratings(noisy, ModelId::kRpr, truth, 0.5, 32);
    const CalibrationResult refit =
        calibrate(noisy, ModelId::kRpr, init, {2, 1500, 1e-9, 4});
    const double e0 = std::abs(refit.config.rpr.c0 - truth.rpr.c0) / truth.rpr.c0;
    const double e1 =
        std::abs(refit.config.rpr.c1 - truth.rpr.c1) / std::abs(truth.rpr.c1);
    const double e2 =
        std::abs(refit.config.rpr.c2 - truth.rpr.c2) / std::abs(truth.rpr.c2);
    const double secs = elapsed(begin);
    if (fit.objective >= 1e-3 || e0 > 0.05 || e1 > 0.05 || e2 > 0.05 ||
        secs >= 600.0)
      out.ok = false;
    notes.push_back(fmt("rpr obj %.1e coeffs off %.1f%%/%.1f%%/%.1f%% %.0fs",
                        fit.objective, 100 * e0, 100 * e1, 100 * e2, secs));
  }

  // Collision-probability model on the merging dataset.
  {
    const auto begin = std::chrono::steady_clock::now();
    MergingOptions opts;
    opts.dt = 0.1;
    opts.duration = 12.0;
    std::vector<Event> events = make_merging_dataset(1, opts);
    const ModelConfig truth = ModelConfig::defaults(DatasetProfile::kMerging);
    ModelConfig init = truth;
    init.ppdrf.sigma_acc_x *= 1.5;
    init.ppdrf.sigma_acc_y *= 0.6;
    synth_ratings(events, ModelId::kPpdrf, truth, 0.0, 41);
    const CalibrationResult fit =
        calibrate(events, ModelId::kPpdrf, init, {2, 800, 1e-9, 5});
    const double secs = elapsed(begin);
    if (fit.objective >= 1e-3 || secs >= 600.0) out.ok = false;
    notes.push_back(fmt("ppdrf obj %.1e %.0fs", fit.objective, secs));
  }

  // Preview-field model on the static-obstacle corridor.
  {
    const auto begin = std::chrono::steady_clock::now();
    std::vector<Event> events = obstacle_subset(1);
    ModelConfig truth = ModelConfig::defaults(DatasetProfile::kObstacle);
    truth.drf.cell_size = 0.25;  // coarser footprint grid, applied consistently
    ModelConfig init = truth;
    init.drf.preview_time *= 0.8;
    init.drf.width_slope *= 1.6;
    init.drf.width_offset *= 0.7;
    synth_ratings(events, ModelId::kDrf, truth, 0.0, 51);
    const CalibrationResult fit =
        calibrate(events, ModelId::kDrf, init, {1, 800, 1e-9, 6});
    const double secs = elapsed(begin);
    if (fit.objective >= 1e-3 || secs >= 600.0) out.ok = false;
    notes.push_back(fmt("drf obj %.1e %.0fs", fit.objective, secs));
  }

  std::string joined;
  for (const std::string& note : notes) {
    if (!joined.empty()) joined += "; ";
    joined += note;
  }
  out.detail = joined;
  return out;
}

// ---------------------------------------------------------------------------
// 9. Detection structure on the 77-layout obstacle corridor.
// ---------------------------------------------------------------------------

Outcome check_detection_structure() {
  const std::vector<Event> events = make_obstacle_dataset(1, ObstacleOptions{});
  const ModelConfig config = ModelConfig::defaults(DatasetProfile::kObstacle);
  const double pcad = detection_rate(events, ModelId::kPcad, config);
  const double rpr = detection_rate(events, ModelId::kRpr, config);
  const double ppdrf = detection_rate(events, ModelId::kPpdrf, config);
  const double drf = detection_rate(events, ModelId::kDrf, config);
  Outcome out;
  out.ok = events.size() == 77 && pcad == 1.0 && ppdrf == 1.0 && drf == 1.0 &&
           rpr < 0.5;
  out.detail = fmt("pcad %.2f ppdrf %.2f drf %.2f rpr %.2f on %zu layouts", pcad,
                   ppdrf, drf, rpr, events.size());
  return out;
}

// ---------------------------------------------------------------------------
// 10. Per-step cost ordering across both synthetic datasets.
// ---------------------------------------------------------------------------

Outcome check_benchmark_ordering() {
  Outcome out;
  std::string note;
  for (DatasetProfile profile : {DatasetProfile::kMerging, DatasetProfile::kObstacle}) {
    const std::vector<Event> events =
        profile == DatasetProfile::kMerging
            ? make_merging_dataset(1, MergingOptions{})
            : make_obstacle_dataset(1, ObstacleOptions{});
    const ModelConfig config = ModelConfig::defaults(profile);
    std::vector<BenchmarkRow> rows = benchmark_all(events, config, 1);

    // The regression-style models cost well under a microsecond per step, so
    // a single pass sits at timer-noise level; repetition stabilises their
    // means. The search-based rows are already milliseconds per step.
    for (BenchmarkRow& row : rows) {
      for (ModelId cheap : {ModelId::kRpr, ModelId::kPpdrf, ModelId::kDrf}) {
        if (row.name == to_string(cheap))
          row = benchmark(cheap, events, config, 25);
      }
    }

    double rpr_ms = 0.0, pcad_ms = 0.0, others_min = 1e300;
    for (const BenchmarkRow& row : rows) {
      if (row.name == "rpr") {
        rpr_ms = row.ms_per_snapshot;
      } else {
        others_min = std::min(others_min, row.ms_per_snapshot);
        if (row.name == "pcad") pcad_ms = row.ms_per_snapshot;
      }
    }
    if (!(rpr_ms < others_min) || !(pcad_ms < 50.0)) out.ok = false;
    if (!note.empty()) note += "; ";
    note += fmt("%s: rpr %.4f ms, pcad %.3f ms per step",
                to_string(profile).c_str(), rpr_ms, pcad_ms);
  }
  out.detail = note;
  return out;
}

// ---------------------------------------------------------------------------
// 11. Collision-energy bound in stable motorway following.
// ---------------------------------------------------------------------------

Outcome check_ppdrf_energy_bound() {
  const PpdrfParams params = PpdrfParams::merging_defaults();
  SceneSnapshot s;
  s.subject = {{0.0, 0.0}, {27.78, 0.0}, {0.0, 0.0}};
  s.neighbour = {{34.0, 0.0}, {27.78, 0.0}, {0.0, 0.0}};  // 30 m bumper gap

  const double steady = ppdrf_kinetic_risk(s, params);
  s.neighbour.velocity.x = 25.0;  // mild speed difference
  const double closing = ppdrf_kinetic_risk(s, params);
  s.neighbour.velocity.x = 27.78;
  s.neighbour.acceleration.x = -1.0;  // gentle adjustment braking
  const double braking = ppdrf_kinetic_risk(s, params);

  Outcome out;
  out.ok = steady == 0.0 && closing <= 3e4 && braking <= 3e4;
  out.detail = fmt("steady %.3g J, closing %.3g J, braking %.3g J (bound 3e4)",
                   steady, closing, braking);
  return out;
}

// ---------------------------------------------------------------------------
// 12. CLI determinism: byte-identical artifacts on re-run.
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return "<unreadable:" + path.string() + ">";
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool trees_equal(const fs::path& a, const fs::path& b) {
  std::set<fs::path> names_a, names_b;
  for (const auto& entry : fs::recursive_directory_iterator(a))
    if (entry.is_regular_file()) names_a.insert(fs::relative(entry.path(), a));
  for (const auto& entry : fs::recursive_directory_iterator(b))
    if (entry.is_regular_file()) names_b.insert(fs::relative(entry.path(), b));
  if (names_a != names_b) return false;
  for (const fs::path& name : names_a)
    if (slurp(a / name) != slurp(b / name)) return false;
  return true;
}

// Benchmark reports carry wall-clock fields that legitimately differ between
// runs; determinism is asserted on everything else.
json without_timing(json j) {
  if (j.is_object()) {
    j.erase("total_ms");
    j.erase("ms_per_snapshot");
    for (auto& [key, value] : j.items()) value = without_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = without_timing(value);
  }
  return j;
}

Outcome check_cli_determinism() {
  Outcome out;
  const std::string cli = PCAD_CLI_PATH;
  const fs::path tmp = fs::temp_directory_path() / "pcad_acceptance";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  const auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const auto fail = [&](const std::string& what) {
    out.ok = false;
    out.detail = what;
    return out;
  };

  const fs::path sim_a = tmp / "sim_a";
  const fs::path sim_b = tmp / "sim_b";
  const std::string sim_flags =
      " --only merging --merging-reps 2 --dt 0.1 --duration 8"
      " --rate-model rpr --noise 0.4 --seed 9";
  if (!run("simulate --out " + sim_a.string() + sim_flags) ||
      !run("simulate --out " + sim_b.string() + sim_flags))
    return fail("simulate command failed");
  if (!trees_equal(sim_a, sim_b)) return fail("simulate outputs differ");

  std::vector<fs::path> csvs;
  for (const auto& entry : fs::directory_iterator(sim_a))
    if (entry.path().extension() == ".csv") csvs.push_back(entry.path());
  std::sort(csvs.begin(), csvs.end());
  if (csvs.empty()) return fail("simulate wrote no trajectories");

  const std::string risk_flags =
      "risk --trajectory " + csvs.front().string() + " --model pcad --profile merging --out ";
  if (!run(risk_flags + (tmp / "r1.csv").string()) ||
      !run(risk_flags + (tmp / "r2.csv").string()))
    return fail("risk command failed");
  if (slurp(tmp / "r1.csv") != slurp(tmp / "r2.csv"))
    return fail("risk outputs differ");

  const std::string eval_flags =
      "evaluate --events " + sim_a.string() + " --model rpr --out ";
  if (!run(eval_flags + (tmp / "e1.json").string()) ||
      !run(eval_flags + (tmp / "e2.json").string()))
    return fail("evaluate command failed");
  if (slurp(tmp / "e1.json") != slurp(tmp / "e2.json"))
    return fail("evaluate outputs differ");

  const std::string cal_prefix = "calibrate --events " + sim_a.string() +
                                 " --model rpr --restarts 2 --max-evals 300 --seed 5";
  if (!run(cal_prefix + " --out " + (tmp / "p1.txt").string() + " --report " +
           (tmp / "c1.json").string()) ||
      !run(cal_prefix + " --out " + (tmp / "p2.txt").string() + " --report " +
           (tmp / "c2.json").string()))
    return fail("calibrate command failed");
  if (slurp(tmp / "p1.txt") != slurp(tmp / "p2.txt") ||
      slurp(tmp / "c1.json") != slurp(tmp / "c2.json"))
    return fail("calibrate outputs differ");

  const std::string field_flags =
      "field --model drf --profile obstacle --static --neighbour-speed 0"
      " --x-min 0 --x-max 40 --y-min -8 --y-max 8 --resolution 1 --out ";
  if (!run(field_flags + (tmp / "f1.csv").string()) ||
      !run(field_flags + (tmp / "f2.csv").string()))
    return fail("field command failed");
  if (slurp(tmp / "f1.csv") != slurp(tmp / "f2.csv") ||
      slurp(tmp / "f1.json") != slurp(tmp / "f2.json"))
    return fail("field outputs differ");

  const std::string bench_flags = "bench --events " + sim_a.string() + " --reps 1 --out ";
  if (!run(bench_flags + (tmp / "b1.json").string()) ||
      !run(bench_flags + (tmp / "b2.json").string()))
    return fail("bench command failed");
  json b1, b2;
  try {
    b1 = json::parse(slurp(tmp / "b1.json"));
    b2 = json::parse(slurp(tmp / "b2.json"));
  } catch (const json::parse_error&) {
    return fail("bench report is not valid JSON");
  }
  if (without_timing(b1) != without_timing(b2))
    return fail("bench outputs differ beyond timing fields");

  fs::remove_all(tmp);
  out.detail = "six commands re-run byte-identically (bench timing fields excluded)";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int number;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "looming vs 60 s overlap simulation", check_looming_oracle},
      {2, "velocity gap vs dense lattice", check_gap_oracle},
      {3, "imaginary-speed expectation", check_imaginary_speed},
      {4, "distance-direction optimality", check_distance_direction},
      {5, "event regression exactness", check_rpr_exactness},
      {6, "feature-sensitivity matrix", check_feature_matrix},
      {7, "corridor risk orderings", check_corridor_orderings},
      {8, "self-calibration recovery", check_calibration_recovery},
      {9, "obstacle detection structure", check_detection_structure},
      {10, "per-step cost ordering", check_benchmark_ordering},
      {11, "collision-energy bound", check_ppdrf_energy_bound},
      {12, "CLI determinism", check_cli_determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    if (!selected.empty() && selected.count(criterion.number) == 0) continue;
    const auto begin = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& err) {
      outcome.ok = false;
      outcome.detail = std::string("exception: ") + err.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    std::printf("[%s] %2d %s — %s (%.1f s)\n", outcome.ok ? "PASS" : "FAIL",
                criterion.number, criterion.name, outcome.detail.c_str(), secs);
    std::fflush(stdout);
    if (!outcome.ok) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
