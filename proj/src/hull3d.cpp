#include "winterbottom/hull3d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace wb {

namespace {

struct Face {
  int a, b, c;
  Vec n;      // outward, not normalized
  double d;   // plane offset: x . n == d on the face
  bool alive = true;
  std::vector<int> conflicts;  // points strictly outside this face
};

uint64_t edge_key(int u, int v) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(u)) << 32) | static_cast<uint32_t>(v);
}

double signed_dist(const Face& f, const Vec& p) { return dot(f.n, p) - f.d; }

}  // namespace

std::vector<HullTriangle> convex_hull_3d(const std::vector<Vec>& pts, double eps_rel) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw NumericalDegeneracy("convex_hull_3d needs at least 4 points");

  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  if (scale == 0.0) throw NumericalDegeneracy("all points at the origin");
  const double eps = eps_rel * scale;

  // Initial simplex: spread along x, then farthest from line, then from plane.
  int i0 = 0, i1 = 0;
  for (int i = 1; i < n; ++i) {
    if (pts[i].x < pts[i0].x) i0 = i;
    if (pts[i].x > pts[i1].x) i1 = i;
  }
  if (distance(pts[i0], pts[i1]) < eps) throw NumericalDegeneracy("points coincide");
  int i2 = -1;
  double best = eps;
  for (int i = 0; i < n; ++i) {
    double h = norm(cross(pts[i1] - pts[i0], pts[i] - pts[i0])) / distance(pts[i0], pts[i1]);
    if (h > best) {
      best = h;
      i2 = i;
    }
  }
  if (i2 < 0) throw NumericalDegeneracy("points are collinear");
  Vec n0 = cross(pts[i1] - pts[i0], pts[i2] - pts[i0]);
  int i3 = -1;
  best = eps;
  for (int i = 0; i < n; ++i) {
    double h = std::abs(dot(n0, pts[i] - pts[i0])) / norm(n0);
    if (h > best) {
      best = h;
      i3 = i;
    }
  }
  if (i3 < 0) throw NumericalDegeneracy("points are coplanar");

  const Vec inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;

  std::vector<Face> faces;
  std::unordered_map<uint64_t, int> edge_face;  // directed edge -> live face

  auto face_eps = [&](const Face& f) { return eps * std::max(1.0, norm(f.n)); };

  auto add_face = [&](int a, int b, int c) -> int {
    Face f;
    f.a = a;
    f.b = b;
    f.c = c;
    f.n = cross(pts[b] - pts[a], pts[c] - pts[a]);
    f.d = dot(f.n, pts[a]);
    if (dot(f.n, inside) - f.d > 0) {  // keep the interior point below the plane
      std::swap(f.b, f.c);
      f.n = -f.n;
      f.d = -f.d;
    }
    int id = static_cast<int>(faces.size());
    faces.push_back(std::move(f));
    const Face& g = faces.back();
    edge_face[edge_key(g.a, g.b)] = id;
    edge_face[edge_key(g.b, g.c)] = id;
    edge_face[edge_key(g.c, g.a)] = id;
    return id;
  };

  auto kill_face = [&](int id) {
    Face& f = faces[id];
    f.alive = false;
    edge_face.erase(edge_key(f.a, f.b));
    edge_face.erase(edge_key(f.b, f.c));
    edge_face.erase(edge_key(f.c, f.a));
  };

  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  std::vector<int> pending;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    for (int fid = 0; fid < 4; ++fid) {
      if (signed_dist(faces[fid], pts[i]) > face_eps(faces[fid])) {
        faces[fid].conflicts.push_back(i);
        break;
      }
    }
  }
  for (int fid = 0; fid < 4; ++fid)
    if (!faces[fid].conflicts.empty()) pending.push_back(fid);

  while (!pending.empty()) {
    int fid = pending.back();
    pending.pop_back();
    if (!faces[fid].alive || faces[fid].conflicts.empty()) continue;

    int apex = -1;
    double far = -1.0;
    for (int p : faces[fid].conflicts) {
      double d = signed_dist(faces[fid], pts[p]);
      if (d > far) {
        far = d;
        apex = p;
      }
    }

    // Faces visible from the apex, grown over shared edges.
    std::vector<int> visible;
    std::vector<int> stack = {fid};
    std::unordered_map<int, char> seen;
    seen[fid] = 1;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      visible.push_back(f);
      const Face& fc = faces[f];
      const std::array<std::pair<int, int>, 3> edges = {
          std::make_pair(fc.a, fc.b), std::make_pair(fc.b, fc.c), std::make_pair(fc.c, fc.a)};
      for (const auto& [u, v] : edges) {
        auto it = edge_face.find(edge_key(v, u));
        if (it == edge_face.end()) continue;
        int g = it->second;
        if (seen.count(g)) continue;
        if (signed_dist(faces[g], pts[apex]) > face_eps(faces[g])) {
          seen[g] = 1;
          stack.push_back(g);
        }
      }
    }

    // Horizon: directed edges of visible faces whose twin face stays.
    std::vector<std::pair<int, int>> horizon;
    std::vector<int> orphans;
    for (int f : visible) {
      const Face& fc = faces[f];
      const std::array<std::pair<int, int>, 3> edges = {
          std::make_pair(fc.a, fc.b), std::make_pair(fc.b, fc.c), std::make_pair(fc.c, fc.a)};
      for (const auto& [u, v] : edges) {
        auto it = edge_face.find(edge_key(v, u));
        if (it == edge_face.end() || !seen.count(it->second)) horizon.push_back({u, v});
      }
      for (int p : fc.conflicts)
        if (p != apex) orphans.push_back(p);
    }
    for (int f : visible) kill_face(f);

    int first_new = static_cast<int>(faces.size());
    for (const auto& [u, v] : horizon) add_face(u, v, apex);
    int last_new = static_cast<int>(faces.size());

    for (int p : orphans) {
      for (int g = first_new; g < last_new; ++g) {
        if (signed_dist(faces[g], pts[p]) > face_eps(faces[g])) {
          faces[g].conflicts.push_back(p);
          break;
        }
      }
    }
    for (int g = first_new; g < last_new; ++g)
      if (!faces[g].conflicts.empty()) pending.push_back(g);
  }

  std::vector<HullTriangle> out;
  for (const Face& f : faces) {
    if (f.alive) out.push_back({f.a, f.b, f.c});
  }
  if (out.size() < 4) throw NumericalDegeneracy("hull collapsed");
  return out;
}

}  // namespace wb
