#pragma once

#include "pcad/geometry.hpp"
#include "pcad/vehicle.hpp"

namespace pcad {

// Widens the sign tests around zero; the default keeps them strict, so
// boundary geometries (grazing, exactly matched speeds) count as non-looming.
struct LoomingConfig {
  double epsilon = 0.0;
};

// Rate of change of the bearing angle from b to a, in rad/s:
//   ((p_a - p_b) x (v_a - v_b)) / |p_a - p_b|^2
// Throws if the points coincide.
double bearing_rate(const Vec2& p_a, const Vec2& v_a, const Vec2& p_b, const Vec2& v_b);

// Rate of change of the centre distance, in m/s (negative while approaching).
double distance_rate(const Vec2& p_a, const Vec2& v_a, const Vec2& p_b, const Vec2& v_b);

// Collision-course test from the subject's viewpoint. True iff the four
// reference-pair bearing rates straddle zero (min * max < 0) AND the centre
// distance rate is negative. Velocity overrides substitute the body
// velocities without touching positions (used for safe-set membership).
bool is_looming(const SceneSnapshot& s, const LoomingConfig& cfg = {});
bool is_looming(const SceneSnapshot& s, const Vec2& v_subject, const Vec2& v_neighbour,
                const LoomingConfig& cfg = {});

// Relative-velocity core shared by the public overloads and the velocity-gap
// search. Evaluating in relative space keeps the test exactly Galilean
// invariant: only v_subject - v_neighbour enters.
bool is_looming_relative(const SceneSnapshot& s, const Vec2& relative_velocity,
                         const LoomingConfig& cfg = {});

}  // namespace pcad
