#include "pcad/looming.hpp"

#include <algorithm>
#include <stdexcept>

namespace pcad {

double bearing_rate(const Vec2& p_a, const Vec2& v_a, const Vec2& p_b, const Vec2& v_b) {
  const Vec2 dp = p_a - p_b;
  const double d2 = squared_norm(dp);
  if (d2 == 0.0) throw std::invalid_argument("bearing_rate: coincident points");
  return cross(dp, v_a - v_b) / d2;
}

double distance_rate(const Vec2& p_a, const Vec2& v_a, const Vec2& p_b, const Vec2& v_b) {
  const Vec2 dp = p_a - p_b;
  const double d = norm(dp);
  if (d == 0.0) throw std::invalid_argument("distance_rate: coincident points");
  return dot(dp, v_a - v_b) / d;
}

bool is_looming_relative(const SceneSnapshot& s, const Vec2& rel_v, const LoomingConfig& cfg) {
  const ReferencePointSet pts = reference_points(s);
  const Vec2 subject_pts[2] = {pts.subject_left, pts.subject_right};
  const Vec2 neighbour_pts[2] = {pts.neighbour_left, pts.neighbour_right};

  double min_rate = 0.0, max_rate = 0.0;
  bool first = true;
  for (const Vec2& ps : subject_pts) {
    for (const Vec2& pn : neighbour_pts) {
      const Vec2 dp = ps - pn;
      const double d2 = squared_norm(dp);
      if (d2 == 0.0) throw std::invalid_argument("is_looming: coincident reference points");
      const double rate = cross(dp, rel_v) / d2;
      if (first) {
        min_rate = max_rate = rate;
        first = false;
      } else {
        min_rate = std::min(min_rate, rate);
        max_rate = std::max(max_rate, rate);
      }
    }
  }
  if (!(min_rate * max_rate < -cfg.epsilon)) return false;

  const Vec2 dp = s.subject.position - s.neighbour.position;
  const double d = norm(dp);
  if (d == 0.0) throw std::invalid_argument("is_looming: coincident centres");
  const double ddot = dot(dp, rel_v) / d;
  return ddot < -cfg.epsilon;
}

bool is_looming(const SceneSnapshot& s, const LoomingConfig& cfg) {
  return is_looming_relative(s, s.subject.velocity - s.neighbour.velocity, cfg);
}

bool is_looming(const SceneSnapshot& s, const Vec2& v_subject, const Vec2& v_neighbour,
                const LoomingConfig& cfg) {
  return is_looming_relative(s, v_subject - v_neighbour, cfg);
}

}  // namespace pcad
