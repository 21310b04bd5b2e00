#pragma once

#include <random>
#include <vector>

#include "winterbottom/optimize.hpp"
#include "winterbottom/shape.hpp"
#include "winterbottom/vec.hpp"

namespace wbtest {

using wb::Vec;

// Star-shaped polygon about a center on the substrate; ground=false lifts it
// clear of the substrate.
inline std::vector<Vec> random_polygon(std::mt19937_64& rng, int n, bool ground) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<Vec> poly;
  if (ground) {
    poly = wb::random_star_polygon(rng, n, 1.0);
  } else {
    double cy = 2.0 + u(rng);
    for (int j = 0; j < n; ++j) {
      double ang = 2.0 * M_PI * j / n;
      double r = 0.3 * u(rng);
      poly.push_back({r * std::cos(ang), cy + r * std::sin(ang)});
    }
  }
  return poly;
}

inline wb::SubstrateShape random_shape(std::mt19937_64& rng, int n, bool ground) {
  return wb::SubstrateShape::from_polygon(random_polygon(rng, n, ground));
}

// Random edge-connected polyomino grown cell by cell.
inline wb::PixelShape random_polyomino(std::mt19937_64& rng, int n_cells) {
  std::set<std::pair<int, int>> cells = {{0, 0}};
  std::uniform_int_distribution<int> d4(0, 3);
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  while (static_cast<int>(cells.size()) < n_cells) {
    auto it = cells.begin();
    std::advance(it, std::uniform_int_distribution<size_t>(0, cells.size() - 1)(rng));
    int k = d4(rng);
    int x = it->first + dx[k], y = it->second + dy[k];
    if (y < 0) continue;
    cells.insert({x, y});
  }
  int mx = 1000, my = 1000, Mx = -1000, My = -1000;
  for (auto& [x, y] : cells) {
    mx = std::min(mx, x);
    my = std::min(my, y);
    Mx = std::max(Mx, x);
    My = std::max(My, y);
  }
  wb::PixelShape p;
  p.width = Mx - mx + 1;
  // Keep the vertical placement: only horizontal translation is factored out.
  p.height = My + 1;
  p.cells.assign(static_cast<size_t>(p.width) * p.height, 0);
  for (auto& [x, y] : cells) p.cells[y * p.width + (x - mx)] = 1;
  return p;
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace wbtest
