#include "pcad/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pcad {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double normal_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

bool neighbour_in_lane_corridor(const SceneSnapshot& s) {
  const double dy = std::abs(s.neighbour.position.y - s.subject.position.y);
  return dy < (s.subject_dims.width + s.neighbour_dims.width) / 2.0;
}

}  // namespace

double rpr_event(double min_gap, double licence_years, double braking_intensity, double gender) {
  if (!(min_gap > 0.0)) throw std::invalid_argument("rpr_event: min_gap must be > 0");
  const double value = 9.384 - 2.473 * std::log(min_gap) - 0.038 * licence_years -
                       0.201 * braking_intensity + 0.470 * gender;
  return std::clamp(value, 0.0, 10.0);
}

double rpr_continuous(const SceneSnapshot& s, const RprParams& params) {
  const double dx = s.neighbour.position.x - s.subject.position.x;
  if (dx <= 0.0 || !neighbour_in_lane_corridor(s)) return 0.0;  // not a lead vehicle
  const double value = params.c0 + params.c1 * std::log(dx) + params.c2 * s.neighbour.acceleration.x;
  return std::max(value, 0.0);
}

bool rpr_within_validity(const SceneSnapshot& s, const RprParams& params) {
  const double dx = s.neighbour.position.x - s.subject.position.x;
  return dx <= params.validity_gap;
}

double ppdrf_collision_probability(const SceneSnapshot& s, const PpdrfParams& params, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("ppdrf_collision_probability: tau must be > 0");
  if (!(params.sigma_acc_x > 0.0) || !(params.sigma_acc_y > 0.0))
    throw std::invalid_argument("ppdrf_collision_probability: sigma_acc must be > 0");
  const Vec2 d = s.subject.position - s.neighbour.position;
  const Vec2 dv = s.subject.velocity - s.neighbour.velocity;
  const double denom = 0.5 * tau * tau;
  const double required_x = (d.x - dv.x * tau) / denom;
  const double required_y = (d.y - dv.y * tau) / denom;
  const double p = normal_pdf(required_x, s.neighbour.acceleration.x, params.sigma_acc_x) *
                   normal_pdf(required_y, s.neighbour.acceleration.y, params.sigma_acc_y);
  return std::clamp(p, 0.0, 1.0);
}

double ppdrf_collision_probability_mc(const SceneSnapshot& s, const PpdrfParams& params,
                                      double tau, int n_samples, std::uint64_t seed) {
  if (n_samples <= 0) throw std::invalid_argument("ppdrf_collision_probability_mc: n_samples must be > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> ax(s.neighbour.acceleration.x, params.sigma_acc_x);
  std::normal_distribution<double> ay(s.neighbour.acceleration.y, params.sigma_acc_y);
  int hits = 0;
  for (int i = 0; i < n_samples; ++i) {
    SceneSnapshot future = s;
    future.neighbour.acceleration = Vec2{ax(rng), ay(rng)};
    future = propagate(future, tau);
    if (bodies_overlap(future)) ++hits;
  }
  return static_cast<double>(hits) / n_samples;
}

namespace {

// Highest collision probability over the horizon set; ties keep the
// shortest horizon so the reduction is deterministic.
std::pair<double, double> best_horizon(const SceneSnapshot& s, const PpdrfParams& params) {
  if (params.tau_set.empty()) throw std::invalid_argument("ppdrf: empty tau_set");
  double best_tau = params.tau_set.front();
  double best_p = -1.0;
  for (double tau : params.tau_set) {
    const double p = ppdrf_collision_probability(s, params, tau);
    if (p > best_p) {
      best_p = p;
      best_tau = tau;
    }
  }
  return {best_tau, best_p};
}

}  // namespace

double ppdrf_kinetic_risk(const SceneSnapshot& s, const PpdrfParams& params) {
  if (s.neighbour_kind == NeighbourKind::kStaticObject) return 0.0;
  const auto [tau, p] = best_horizon(s, params);
  const Vec2 dv_future = (s.subject.velocity + s.subject.acceleration * tau) -
                         (s.neighbour.velocity + s.neighbour.acceleration * tau);
  const double beta = s.neighbour_mass / (s.subject_mass + s.neighbour_mass);
  return 0.5 * s.subject_mass * beta * beta * squared_norm(dv_future) * p;
}

double ppdrf_potential_risk(const SceneSnapshot& s, const PpdrfParams& params) {
  if (s.neighbour_kind != NeighbourKind::kStaticObject) return 0.0;
  const double r = norm(s.subject.position - s.neighbour.position);
  const double exposure = std::max(std::exp(-r / params.potential_range), params.min_exposure);
  return 0.5 * params.k_potential * s.subject_mass *
         squared_norm(s.subject.velocity - s.neighbour.velocity) * exposure;
}

double drf_risk(const SceneSnapshot& s, const DrfParams& params) {
  if (!(params.cell_size > 0.0)) throw std::invalid_argument("drf_risk: cell_size must be > 0");
  const double preview = s.subject.velocity.x * params.preview_time;
  if (!(preview > 0.0)) return 0.0;

  // Midpoint Riemann sum of the field over the neighbour footprint, in the
  // subject-centred frame.
  const double half_l = s.neighbour_dims.length / 2.0;
  const double half_w = s.neighbour_dims.width / 2.0;
  const int nx = std::max(1, static_cast<int>(std::ceil(s.neighbour_dims.length / params.cell_size)));
  const int ny = std::max(1, static_cast<int>(std::ceil(s.neighbour_dims.width / params.cell_size)));
  const double dx = s.neighbour_dims.length / nx;
  const double dy = s.neighbour_dims.width / ny;
  const double cell_area = dx * dy;

  const Vec2 rel_centre = s.neighbour.position - s.subject.position;
  double sum = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = rel_centre.x - half_l + (i + 0.5) * dx;
    if (x <= 0.0 || x >= preview) continue;
    const double height = params.steepness * (x - preview) * (x - preview);
    const double sigma = params.width_slope * x + params.width_offset;
    if (!(sigma > 0.0)) continue;
    for (int j = 0; j < ny; ++j) {
      const double y = rel_centre.y - half_w + (j + 0.5) * dy;
      sum += height * std::exp(-y * y / (2.0 * sigma * sigma)) * params.severity * cell_area;
    }
  }
  return sum;
}

}  // namespace pcad
