#pragma once

#include <cstdint>
#include <vector>

#include "pcad/geometry.hpp"
#include "pcad/vehicle.hpp"

namespace pcad {

// ---------------------------------------------------------------------------
// RPR: regression perceived risk. Event form maps clearance / braking /
// demographics to a 0-10 rating; continuous form tracks a lead vehicle in
// the subject's lane corridor.
// ---------------------------------------------------------------------------

struct RprParams {
  double c0 = 12.10;
  double c1 = -3.70;
  double c2 = -0.36;
  double validity_gap = 33.0;  // regression fitted up to this gap [m]

  static RprParams merging_defaults() { return {}; }
  static RprParams obstacle_defaults() { return {20.70, -3.68, 0.0, 33.0}; }
};

// Event-level rating from minimum clearance [m], years of driving licence,
// peak braking intensity [m/s^2, negative when braking] and gender dummy.
// Clamped to the 0-10 rating scale.
double rpr_event(double min_gap, double licence_years, double braking_intensity, double gender);

// Continuous rating c0 + c1*ln(x_n - x_s) + c2*a_n,x while the neighbour is
// directly ahead within the lane corridor (|dy| < (W_s + W_n)/2); zero
// (non-detection) otherwise. Clamped at >= 0.
double rpr_continuous(const SceneSnapshot& s, const RprParams& params);

// False when the longitudinal gap exceeds the regression's fitted range.
bool rpr_within_validity(const SceneSnapshot& s, const RprParams& params);

// ---------------------------------------------------------------------------
// PPDRF: probabilistic driving risk field. Kinetic term for moving
// neighbours (collision probability times transferred kinetic energy),
// potential term for static obstacles. Output in Joules.
// ---------------------------------------------------------------------------

struct PpdrfParams {
  double sigma_acc_x = 2.01;  // future-acceleration spread, longitudinal [m/s^2]
  double sigma_acc_y = 0.02;  // lateral [m/s^2]
  double potential_range = 0.14;  // exponential distance scale D [m]
  double k_potential = 1.0;
  double min_exposure = 0.001;  // floor of the potential distance factor
  std::vector<double> tau_set{0.5, 1.0, 2.0, 3.0};  // prediction horizons [s]

  static PpdrfParams merging_defaults() { return {}; }
  static PpdrfParams obstacle_defaults() { return {}; }
};

// Probability-like density that the neighbour's future acceleration equals
// the value required for the bodies to meet at horizon tau. Product of two
// Gaussian densities (means = current neighbour acceleration) evaluated at
// (dx - dv_x*tau)/(0.5*tau^2) per axis with d = subject - neighbour; clamped
// to [0, 1].
double ppdrf_collision_probability(const SceneSnapshot& s, const PpdrfParams& params, double tau);

// Monte-Carlo counterpart used as a test oracle: sample future neighbour
// accelerations, propagate both bodies to tau, count rectangle overlap.
double ppdrf_collision_probability_mc(const SceneSnapshot& s, const PpdrfParams& params,
                                      double tau, int n_samples, std::uint64_t seed);

// 0.5 * M_s * beta^2 * |dv(t+tau*)|^2 * p(tau*), with tau* the horizon of
// maximum collision probability (ties take the shortest horizon). Zero for
// static neighbours.
double ppdrf_kinetic_risk(const SceneSnapshot& s, const PpdrfParams& params);

// 0.5 * k * M_s * |dv|^2 * max(exp(-|r|/D), min_exposure) for static
// obstacles; zero for moving neighbours.
double ppdrf_potential_risk(const SceneSnapshot& s, const PpdrfParams& params);

inline double ppdrf_risk(const SceneSnapshot& s, const PpdrfParams& params) {
  return ppdrf_kinetic_risk(s, params) + ppdrf_potential_risk(s, params);
}

// ---------------------------------------------------------------------------
// DRF: driving risk field. Parabolic-height Gaussian field in front of the
// subject, integrated over the neighbour's footprint.
// ---------------------------------------------------------------------------

struct DrfParams {
  double steepness = 0.15;      // s, height gain [(m)^-2-ish]
  double preview_time = 1.20;   // t_la [s]
  double width_slope = 3.98e-8; // m, lateral spread growth per metre
  double width_offset = 0.45;   // c, lateral spread at x = 0 [m]
  double severity = 1.0;        // event-severity cost factor
  double cell_size = 0.1;       // footprint discretisation [m]

  static DrfParams merging_defaults() { return {}; }
  static DrfParams obstacle_defaults() { return {0.005, 8.12, 3.66e-4, 1.10, 1.0, 0.1}; }
};

// Field value integrated over the neighbour footprint in the subject frame:
//   p(x, y) = s * (x - v_s,x * t_la)^2 * exp(-y^2 / (2 * (m*x + c)^2))
// for 0 < x < v_s,x * t_la, zero otherwise; times severity and cell area.
double drf_risk(const SceneSnapshot& s, const DrfParams& params);

}  // namespace pcad
