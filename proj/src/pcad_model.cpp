#include "pcad/pcad_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace pcad {
namespace {

// Candidate ordering: nearest to the perceived subject velocity first, ties
// broken on the lowest (v_x, v_y). Total order, so parallel reduction is
// schedule-independent.
struct Candidate {
  double dist_sq = std::numeric_limits<double>::infinity();
  Vec2 w;  // candidate velocity relative to the neighbour velocity
  bool valid = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.dist_sq != b.dist_sq) return a.dist_sq < b.dist_sq;
  if (a.w.x != b.w.x) return a.w.x < b.w.x;
  return a.w.y < b.w.y;
}

// Everything below runs in relative-velocity space (w = candidate - v_n), so
// the search commutes exactly with adding a common velocity to both bodies.
template <bool Parallel>
std::optional<GapResult> gap_search(const SceneSnapshot& s, const Vec2& v_subject,
                                    const Vec2& v_neighbour, const SearchConfig& cfg) {
  if (!(cfg.fine_step > 0.0) || !(cfg.coarse_step >= cfg.fine_step))
    throw std::invalid_argument("avoidance_difficulty: need 0 < fine_step <= coarse_step");

  // Cached pair geometry for the candidate test below. It mirrors
  // is_looming_relative term for term (same expressions, same min/max order)
  // so membership decisions agree bitwise with the public predicate.
  const ReferencePointSet pts = reference_points(s);
  const Vec2 subject_pts[2] = {pts.subject_left, pts.subject_right};
  const Vec2 neighbour_pts[2] = {pts.neighbour_left, pts.neighbour_right};
  Vec2 pair_dp[4];
  double pair_d2[4];
  {
    int k = 0;
    for (const Vec2& ps : subject_pts)
      for (const Vec2& pn : neighbour_pts) {
        pair_dp[k] = ps - pn;
        pair_d2[k] = squared_norm(pair_dp[k]);
        if (pair_d2[k] == 0.0)
          throw std::invalid_argument("is_looming: coincident reference points");
        ++k;
      }
  }
  const Vec2 centre_dp = s.subject.position - s.neighbour.position;
  const double centre_d = norm(centre_dp);
  if (centre_d == 0.0) throw std::invalid_argument("is_looming: coincident centres");

  const auto looming = [&](const Vec2& w) {
    double min_rate = 0.0, max_rate = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double rate = cross(pair_dp[k], w) / pair_d2[k];
      if (k == 0) {
        min_rate = max_rate = rate;
      } else {
        min_rate = std::min(min_rate, rate);
        max_rate = std::max(max_rate, rate);
      }
    }
    if (!(min_rate * max_rate < 0.0)) return false;
    return dot(centre_dp, w) / centre_d < 0.0;
  };

  const Vec2 v_rel = v_subject - v_neighbour;
  if (!looming(v_rel)) return GapResult{0.0, v_subject, true};

  // Window offsets relative to the neighbour velocity, widened so both the
  // subject velocity and the whole truncation box are inside.
  const double lo_x = cfg.window.backward + std::min(0.0, v_rel.x);
  const double hi_x = cfg.window.forward + std::max(0.0, v_rel.x);
  const double lo_y = cfg.window.right + std::min(0.0, v_rel.y);
  const double hi_y = cfg.window.left + std::max(0.0, v_rel.y);

  const auto grid_range = [](double lo, double hi, double step) {
    return std::pair<long, long>{static_cast<long>(std::ceil(lo / step - 1e-12)),
                                 static_cast<long>(std::floor(hi / step + 1e-12))};
  };

  const auto [ci_lo, ci_hi] = grid_range(lo_x, hi_x, cfg.coarse_step);
  const auto [cj_lo, cj_hi] = grid_range(lo_y, hi_y, cfg.coarse_step);
  const long nx = ci_hi - ci_lo + 1;
  const long ny = cj_hi - cj_lo + 1;
  if (nx <= 0 || ny <= 0) return std::nullopt;

  Candidate coarse_best;
  if constexpr (Parallel) {
#pragma omp parallel
    {
      Candidate local;
#pragma omp for nowait
      for (long idx = 0; idx < nx * ny; ++idx) {
        const Vec2 w{(ci_lo + idx / ny) * cfg.coarse_step, (cj_lo + idx % ny) * cfg.coarse_step};
        if (looming(w)) continue;
        const Candidate c{squared_norm(w - v_rel), w, true};
        if (better(c, local)) local = c;
      }
#pragma omp critical
      if (better(local, coarse_best)) coarse_best = local;
    }
  } else {
    for (long idx = 0; idx < nx * ny; ++idx) {
      const Vec2 w{(ci_lo + idx / ny) * cfg.coarse_step, (cj_lo + idx % ny) * cfg.coarse_step};
      if (looming(w)) continue;
      const Candidate c{squared_norm(w - v_rel), w, true};
      if (better(c, coarse_best)) coarse_best = c;
    }
  }
  if (!coarse_best.valid) return std::nullopt;

  // Fine pass over every lattice cell that could tie or beat the coarse
  // winner. Rescanning only the winner's own neighbourhood is not enough:
  // the nearest safe coarse sample of a competing escape direction can
  // overshoot that direction's continuous optimum by a full cell diagonal.
  // Pruning is strict (>) so distance ties survive and the reduction stays
  // schedule-independent.
  const double reach = std::sqrt(coarse_best.dist_sq) + cfg.fine_step;
  Candidate fine_best = coarse_best;
  const auto [fj_lo, fj_hi] =
      grid_range(std::max(lo_y, v_rel.y - reach), std::min(hi_y, v_rel.y + reach), cfg.fine_step);
  const auto scan_row = [&](long j, Candidate& best) {
    const double y = j * cfg.fine_step;
    const double dy = y - v_rel.y;
    const double rem = best.dist_sq - dy * dy;
    if (!(rem >= 0.0)) return;
    const double half = std::sqrt(rem) + cfg.fine_step;
    const auto [i_lo, i_hi] =
        grid_range(std::max(lo_x, v_rel.x - half), std::min(hi_x, v_rel.x + half), cfg.fine_step);
    for (long i = i_lo; i <= i_hi; ++i) {
      const Vec2 w{i * cfg.fine_step, y};
      const Candidate c{squared_norm(w - v_rel), w, true};
      if (c.dist_sq > best.dist_sq) continue;
      if (looming(w)) continue;
      if (better(c, best)) best = c;
    }
  };
  if constexpr (Parallel) {
#pragma omp parallel
    {
      Candidate local = coarse_best;
#pragma omp for nowait
      for (long j = fj_lo; j <= fj_hi; ++j) scan_row(j, local);
#pragma omp critical
      if (better(local, fine_best)) fine_best = local;
    }
  } else {
    for (long j = fj_lo; j <= fj_hi; ++j) scan_row(j, fine_best);
  }

  // Bisection polish along the best direction: shrink towards the boundary
  // while keeping the returned velocity on the safe side.
  double t_safe = 1.0, t_unsafe = 0.0;
  const Vec2 dir = fine_best.w - v_rel;
  for (int it = 0; it < 80 && (t_safe - t_unsafe) * norm(dir) > 1e-12; ++it) {
    const double t_mid = 0.5 * (t_safe + t_unsafe);
    const Vec2 w_mid = v_rel + dir * t_mid;
    if (looming(w_mid)) {
      t_unsafe = t_mid;
    } else {
      t_safe = t_mid;
    }
  }
  const Vec2 w_boundary = v_rel + dir * t_safe;
  return GapResult{norm(w_boundary - v_rel), v_neighbour + w_boundary, false};
}

}  // namespace

Vec2 imaginary_velocity(const Vec2& subject_position, const Vec2& neighbour_position,
                        const PcadParams& params, Role role) {
  const Vec2 u = normalized(subject_position - neighbour_position);
  const double r = (role == Role::kNeighbour) ? 1.0 : -1.0;
  const Vec2 dir = u * r;
  const double sx = (role == Role::kNeighbour) ? params.sigma_neighbour_x : params.sigma_subject_x;
  const double sy = (role == Role::kNeighbour) ? params.sigma_neighbour_y : params.sigma_subject_y;
  if (sx == 0.0 && sy == 0.0) return Vec2{0.0, 0.0};
  const double expected = imaginary_speed_expectation(dir, sx, sy, params.bounds);
  return dir * expected;
}

Vec2 perceived_velocity(const SceneSnapshot& s, const PcadParams& params, Role role) {
  if (role == Role::kNeighbour && s.neighbour_kind == NeighbourKind::kStaticObject)
    return s.neighbour.velocity;
  const VehicleState& v = (role == Role::kSubject) ? s.subject : s.neighbour;
  const double t_a =
      (role == Role::kSubject) ? params.anticipation_subject : params.anticipation_neighbour;
  return acceleration_velocity(v.velocity, v.acceleration, t_a) +
         imaginary_velocity(s.subject.position, s.neighbour.position, params, role);
}

bool safe_set_contains(const SceneSnapshot& s, const Vec2& candidate_v_subject,
                       const Vec2& v_neighbour, double epsilon) {
  return !is_looming_relative(s, candidate_v_subject - v_neighbour, LoomingConfig{epsilon});
}

std::optional<GapResult> avoidance_difficulty(const SceneSnapshot& s, const Vec2& v_subject,
                                              const Vec2& v_neighbour, const SearchConfig& cfg) {
  return gap_search<true>(s, v_subject, v_neighbour, cfg);
}

std::optional<GapResult> avoidance_difficulty_serial(const SceneSnapshot& s, const Vec2& v_subject,
                                                     const Vec2& v_neighbour,
                                                     const SearchConfig& cfg) {
  return gap_search<false>(s, v_subject, v_neighbour, cfg);
}

double weighting(const Vec2& v_subject, double v_ref, double alpha) {
  if (!(v_ref > 0.0)) throw std::invalid_argument("weighting: v_ref must be > 0");
  return std::pow(norm(v_subject) / v_ref, alpha);
}

namespace {

PcadRiskDetail risk_detail_impl(const SceneSnapshot& s, const PcadParams& params,
                                const SearchConfig& cfg, bool parallel) {
  PcadRiskDetail out;
  out.perceived_subject_velocity = perceived_velocity(s, params, Role::kSubject);
  out.perceived_neighbour_velocity = perceived_velocity(s, params, Role::kNeighbour);
  const auto gap =
      parallel ? avoidance_difficulty(s, out.perceived_subject_velocity,
                                      out.perceived_neighbour_velocity, cfg)
               : avoidance_difficulty_serial(s, out.perceived_subject_velocity,
                                             out.perceived_neighbour_velocity, cfg);
  if (!gap) throw std::runtime_error("pcad_risk: no safe velocity inside the search window");
  out.gap = *gap;
  out.risk = out.gap.gap * weighting(s.subject.velocity, params.v_ref, params.alpha);
  return out;
}

}  // namespace

PcadRiskDetail pcad_risk_detail(const SceneSnapshot& s, const PcadParams& params,
                                const SearchConfig& cfg) {
  return risk_detail_impl(s, params, cfg, true);
}

PcadRiskDetail pcad_risk_detail_serial(const SceneSnapshot& s, const PcadParams& params,
                                       const SearchConfig& cfg) {
  return risk_detail_impl(s, params, cfg, false);
}

}  // namespace pcad
