#pragma once

#include <stdexcept>

#include "pcad/geometry.hpp"

namespace pcad {

enum class NeighbourKind { kMovingVehicle, kStaticObject };

// Axis-aligned body footprint. Vehicles are modelled as rectangles that do
// not rotate; the heading is carried by the velocity vector only.
struct BodyDims {
  double length = 4.0;
  double width = 2.0;
};

struct VehicleState {
  Vec2 position;      // body centre [m]
  Vec2 velocity;      // [m/s]
  Vec2 acceleration;  // [m/s^2]
};

// One time sample of a two-body scene: the subject (rated vehicle) and one
// neighbour (moving vehicle or static obstacle).
struct SceneSnapshot {
  VehicleState subject;
  VehicleState neighbour;
  BodyDims subject_dims;
  BodyDims neighbour_dims;
  double subject_mass = 1500.0;    // [kg]
  double neighbour_mass = 1500.0;  // [kg]
  NeighbourKind neighbour_kind = NeighbourKind::kMovingVehicle;
};

// Corner points the looming test tracks. Subject points sit on its front
// edge; neighbour points sit on the edge facing the subject (rear corners
// when the neighbour centre is ahead, front corners when behind).
struct ReferencePointSet {
  Vec2 subject_left;
  Vec2 subject_right;
  Vec2 neighbour_left;
  Vec2 neighbour_right;
};

inline ReferencePointSet reference_points(const SceneSnapshot& s) {
  const double ls = s.subject_dims.length / 2.0;
  const double ws = s.subject_dims.width / 2.0;
  const double ln = s.neighbour_dims.length / 2.0;
  const double wn = s.neighbour_dims.width / 2.0;
  // Side of the neighbour body nearest the subject along x.
  const double side = (s.neighbour.position.x >= s.subject.position.x) ? -1.0 : 1.0;
  return {
      s.subject.position + Vec2{ls, ws},
      s.subject.position + Vec2{ls, -ws},
      s.neighbour.position + Vec2{side * ln, wn},
      s.neighbour.position + Vec2{side * ln, -wn},
  };
}

// Constant-acceleration motion over dt >= 0.
inline VehicleState propagate(const VehicleState& v, double dt) {
  if (!(dt >= 0.0)) throw std::invalid_argument("propagate: dt must be >= 0");
  return {
      v.position + v.velocity * dt + v.acceleration * (0.5 * dt * dt),
      v.velocity + v.acceleration * dt,
      v.acceleration,
  };
}

inline SceneSnapshot propagate(const SceneSnapshot& s, double dt) {
  SceneSnapshot out = s;
  out.subject = propagate(s.subject, dt);
  out.neighbour = propagate(s.neighbour, dt);
  return out;
}

// Axis-aligned rectangle overlap (open intervals: touching is not overlap).
inline bool bodies_overlap(const SceneSnapshot& s) {
  const Vec2 d = s.subject.position - s.neighbour.position;
  const double lx = (s.subject_dims.length + s.neighbour_dims.length) / 2.0;
  const double ly = (s.subject_dims.width + s.neighbour_dims.width) / 2.0;
  return std::abs(d.x) < lx && std::abs(d.y) < ly;
}

// Closed-interval variant: exact bumper contact counts. Scenario truncation
// and grid masking use this so no retained snapshot has coincident corners,
// which the bearing-rate geometry cannot represent.
inline bool bodies_in_contact(const SceneSnapshot& s) {
  const Vec2 d = s.subject.position - s.neighbour.position;
  const double lx = (s.subject_dims.length + s.neighbour_dims.length) / 2.0;
  const double ly = (s.subject_dims.width + s.neighbour_dims.width) / 2.0;
  return std::abs(d.x) <= lx && std::abs(d.y) <= ly;
}

}  // namespace pcad
