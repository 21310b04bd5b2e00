#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace wb {

// Small fixed vector used for both 2D and 3D geometry. 2D data keeps z == 0;
// the ambient dimension travels with the owning object, not the vector.
struct Vec {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec() = default;
  Vec(double x_, double y_) : x(x_), y(y_) {}
  Vec(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec operator-() const { return {-x, -y, -z}; }
  Vec operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec& operator+=(const Vec& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// z component of the 2D cross product.
inline double cross2(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }

inline double norm2(const Vec& v) { return dot(v, v); }
inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

inline Vec normalized(const Vec& v) {
  double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
  return v / n;
}

// Rotate (x, y) by +90 degrees; z untouched.
inline Vec rot90(const Vec& v) { return {-v.y, v.x, v.z}; }

inline bool finite(const Vec& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Unit vector along the last coordinate axis (e_d) with a sign.
inline Vec axis_last(int dim, double sign = 1.0) {
  if (dim == 2) return {0.0, sign};
  return {0.0, 0.0, sign};
}

inline double last_comp(const Vec& v, int dim) { return dim == 2 ? v.y : v.z; }

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

// n evenly spaced unit directions on the circle, starting at angle 0 so that
// the axis directions are included whenever 4 divides n.
inline std::vector<Vec> unit_directions_2d(int n) {
  std::vector<Vec> dirs;
  dirs.reserve(n);
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * M_PI * k / n;
    dirs.push_back({std::cos(a), std::sin(a)});
  }
  return dirs;
}

// Fibonacci sphere point set; near-uniform covering of S^2.
inline std::vector<Vec> fibonacci_directions_3d(int n) {
  std::vector<Vec> dirs;
  dirs.reserve(n);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int k = 0; k < n; ++k) {
    double zc = 1.0 - 2.0 * (k + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    double a = 2.0 * M_PI * k / golden;
    dirs.push_back({r * std::cos(a), r * std::sin(a), zc});
  }
  return dirs;
}

inline std::vector<Vec> unit_directions(int dim, int n) {
  return dim == 2 ? unit_directions_2d(n) : fibonacci_directions_3d(n);
}

inline Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    Vec v = dim == 2 ? Vec{g(rng), g(rng)} : Vec{g(rng), g(rng), g(rng)};
    double n = norm(v);
    if (n > 1e-6) return v / n;
  }
}

}  // namespace wb
