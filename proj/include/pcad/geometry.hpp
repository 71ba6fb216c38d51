#pragma once

#include <cmath>
#include <stdexcept>

namespace pcad {

// Planar vector in road coordinates: +x along the lane, +y to the left.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Scalar 2D cross product; positive when b lies counter-clockwise of a.
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline double squared_norm(const Vec2& v) { return v.x * v.x + v.y * v.y; }

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

inline Vec2 normalized(const Vec2& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero vector");
  return v / n;
}

}  // namespace pcad
