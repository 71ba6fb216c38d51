#pragma once

#include <optional>

#include "pcad/geometry.hpp"
#include "pcad/looming.hpp"
#include "pcad/truncated_gaussian.hpp"
#include "pcad/vehicle.hpp"

namespace pcad {

enum class Role { kSubject, kNeighbour };

// PCAD = (velocity gap to the safe set) * (subject-speed weighting).
// Sigmas parameterise the imaginary-velocity magnitude per vehicle and axis;
// the anticipation times push velocities forward along current acceleration.
struct PcadParams {
  double sigma_neighbour_x = 4.28;
  double sigma_neighbour_y = 3.86;
  double sigma_subject_x = 0.80;
  double sigma_subject_y = 1.70;
  double anticipation_subject = 0.13;    // t_a for the subject [s]
  double anticipation_neighbour = 0.01;  // t_a for the neighbour [s]
  double alpha = 0.52;                   // speed-weighting exponent
  double v_ref = 27.78;                  // weighting reference speed [m/s]
  VelocityBounds bounds;

  static PcadParams merging_defaults() { return {}; }
  static PcadParams obstacle_defaults() {
    PcadParams p;
    p.sigma_neighbour_x = 0.0;
    p.sigma_neighbour_y = 0.0;
    p.sigma_subject_x = 6.58;
    p.sigma_subject_y = 1.20;
    p.anticipation_subject = 0.0;
    p.anticipation_neighbour = 0.0;
    p.alpha = 0.0;
    p.v_ref = 25.0;
    return p;
  }
};

// Two-stage grid search over candidate subject velocities. The window is the
// truncation box anchored at the neighbour velocity, widened to cover the
// subject velocity; the fine pass rescans, at fine resolution, every cell
// that could tie or beat the coarse winner (the safe set can be a thin cone
// the coarse lattice straddles), and a bisection polish walks the best
// direction onto the safe-set boundary.
struct SearchConfig {
  double coarse_step = 0.25;  // [m/s]
  double fine_step = 0.02;    // [m/s], <= coarse_step
  VelocityBounds window;      // window offsets around the velocity hull

  static SearchConfig point_defaults() { return {}; }
  // Cheaper settings for dense field sweeps.
  static SearchConfig field_defaults() { return {0.5, 0.25, {}}; }
};

struct GapResult {
  double gap = 0.0;         // |v_g|, distance from the subject velocity to the safe set [m/s]
  Vec2 boundary_velocity;   // nearest safe velocity found
  bool in_safe_set = true;  // true iff gap == 0
};

// v + a * t_a; anticipated velocity under the current acceleration.
inline Vec2 acceleration_velocity(const Vec2& v, const Vec2& a, double t_a) {
  if (!(t_a >= 0.0)) throw std::invalid_argument("acceleration_velocity: t_a must be >= 0");
  return v + a * t_a;
}

// Imaginary velocity of one vehicle: directed along the centre line between
// the two bodies (towards the subject for the neighbour, towards the
// neighbour for the subject), with the ray-conditional expected magnitude.
Vec2 imaginary_velocity(const Vec2& subject_position, const Vec2& neighbour_position,
                        const PcadParams& params, Role role);

// v' = v + a * t_a + v_imaginary. Static obstacles have no anticipation and
// no imaginary velocity: their perceived velocity stays zero.
Vec2 perceived_velocity(const SceneSnapshot& s, const PcadParams& params, Role role);

// True iff the candidate subject velocity does not loom against the
// neighbour moving at v_neighbour (positions and dims from the snapshot).
bool safe_set_contains(const SceneSnapshot& s, const Vec2& candidate_v_subject,
                       const Vec2& v_neighbour, double epsilon = 0.0);

// Minimum-norm velocity change that exits the looming set, searched on the
// grid described by cfg. Deterministic: grid ties break on the lowest
// (v_x, v_y). Returns nullopt only if the window contains no safe candidate.
std::optional<GapResult> avoidance_difficulty(const SceneSnapshot& s, const Vec2& v_subject,
                                              const Vec2& v_neighbour,
                                              const SearchConfig& cfg = {});
// Serial reference implementation; bitwise-identical results to the
// OpenMP path above.
std::optional<GapResult> avoidance_difficulty_serial(const SceneSnapshot& s, const Vec2& v_subject,
                                                     const Vec2& v_neighbour,
                                                     const SearchConfig& cfg = {});

// (|v_subject| / v_ref)^alpha.
double weighting(const Vec2& v_subject, double v_ref, double alpha);

struct PcadRiskDetail {
  double risk = 0.0;
  GapResult gap;
  Vec2 perceived_subject_velocity;
  Vec2 perceived_neighbour_velocity;
};

PcadRiskDetail pcad_risk_detail(const SceneSnapshot& s, const PcadParams& params,
                                const SearchConfig& cfg = {});
// Same composition on top of the serial gap search.
PcadRiskDetail pcad_risk_detail_serial(const SceneSnapshot& s, const PcadParams& params,
                                       const SearchConfig& cfg = {});

inline double pcad_risk(const SceneSnapshot& s, const PcadParams& params,
                        const SearchConfig& cfg = {}) {
  return pcad_risk_detail(s, params, cfg).risk;
}

inline double pcad_risk_serial(const SceneSnapshot& s, const PcadParams& params,
                               const SearchConfig& cfg = {}) {
  return pcad_risk_detail_serial(s, params, cfg).risk;
}

}  // namespace pcad
