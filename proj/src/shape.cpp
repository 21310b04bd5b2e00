#include "winterbottom/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "winterbottom/log.hpp"

namespace wb {

namespace {

double ring_area(const std::vector<Vec>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec& p = v[i];
    const Vec& q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

// Even-odd point-in-ring test (boundary points unspecified).
bool point_in_ring(const Vec& p, const std::vector<Vec>& ring) {
  bool in = false;
  for (size_t i = 0; i < ring.size(); ++i) {
    const Vec& a = ring[i];
    const Vec& b = ring[(i + 1) % ring.size()];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xc > p.x) in = !in;
    }
  }
  return in;
}

void snap_ring(std::vector<Vec>& ring, double snap) {
  for (Vec& v : ring) {
    if (v.y < -snap) throw std::invalid_argument("vertex below the substrate");
    if (std::abs(v.y) <= snap) v.y = 0.0;
    if (v.z != 0.0) throw std::invalid_argument("2D vertex with nonzero z");
    if (!finite(v)) throw std::invalid_argument("non-finite vertex");
  }
}

void dedup_ring(std::vector<Vec>& ring, double tol) {
  std::vector<Vec> out;
  for (const Vec& v : ring) {
    if (!out.empty() && distance(out.back(), v) <= tol) continue;
    out.push_back(v);
  }
  while (out.size() >= 2 && distance(out.front(), out.back()) <= tol) out.pop_back();
  ring = std::move(out);
}

}  // namespace

bool segments_properly_intersect(const Vec& p, const Vec& q, const Vec& r, const Vec& s) {
  auto same = [](const Vec& a, const Vec& b) { return a.x == b.x && a.y == b.y; };
  if (same(p, r) || same(p, s) || same(q, r) || same(q, s)) return false;
  double d1 = cross2(s - r, p - r);
  double d2 = cross2(s - r, q - r);
  double d3 = cross2(q - p, r - p);
  double d4 = cross2(q - p, s - p);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  // Collinear overlap.
  double scale = std::max({norm(q - p), norm(s - r), 1e-300});
  double eps = 1e-12 * scale * scale;
  if (std::abs(d1) <= eps && std::abs(d2) <= eps && std::abs(d3) <= eps && std::abs(d4) <= eps) {
    auto overlap1d = [](double a0, double a1, double b0, double b1) {
      if (a0 > a1) std::swap(a0, a1);
      if (b0 > b1) std::swap(b0, b1);
      return std::min(a1, b1) - std::max(a0, b0) > 0;
    };
    if (std::abs(p.x - q.x) > std::abs(p.y - q.y))
      return overlap1d(p.x, q.x, r.x, s.x);
    return overlap1d(p.y, q.y, r.y, s.y);
  }
  return false;
}

bool polygon_simple(const std::vector<Vec>& poly) {
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

SubstrateShape SubstrateShape::from_polygons(std::vector<PolygonWithHoles> polys,
                                             const Tolerances& tol) {
  SubstrateShape s;
  s.dim_ = 2;
  s.tol_ = tol;
  double vol = 0.0;
  for (PolygonWithHoles& pw : polys) {
    snap_ring(pw.outer, tol.snap);
    dedup_ring(pw.outer, tol.dedup);
    if (pw.outer.size() < 3) throw std::invalid_argument("outer boundary needs 3+ vertices");
    if (ring_area(pw.outer) < 0) std::reverse(pw.outer.begin(), pw.outer.end());
    if (!polygon_simple(pw.outer)) throw std::invalid_argument("outer boundary self-intersects");
    double a = ring_area(pw.outer);
    for (auto& hole : pw.holes) {
      snap_ring(hole, tol.snap);
      dedup_ring(hole, tol.dedup);
      if (hole.size() < 3) throw std::invalid_argument("hole needs 3+ vertices");
      if (ring_area(hole) > 0) std::reverse(hole.begin(), hole.end());
      if (!polygon_simple(hole)) throw std::invalid_argument("hole boundary self-intersects");
      for (const Vec& hv : hole) {
        if (!point_in_ring(hv, pw.outer))
          throw std::invalid_argument("hole not strictly inside its outer boundary");
      }
      a += ring_area(hole);  // negative
    }
    if (a <= 0.0) throw std::invalid_argument("polygon has non-positive area");
    vol += a;
  }
  s.polys_ = std::move(polys);
  s.volume_ = vol;
  s.convex_ = false;
  if (s.polys_.size() == 1 && s.polys_[0].holes.empty()) {
    const auto& o = s.polys_[0].outer;
    int n = static_cast<int>(o.size());
    bool conv = true;
    for (int i = 0; i < n && conv; ++i) {
      Vec e1 = o[i] - o[(i + n - 1) % n];
      Vec e2 = o[(i + 1) % n] - o[i];
      conv = cross2(e1, e2) >= -tol.dedup * norm(e1) * norm(e2);
    }
    s.convex_ = conv;
  }
  return s;
}

SubstrateShape SubstrateShape::from_polygon(std::vector<Vec> outer, const Tolerances& tol) {
  return from_polygons({PolygonWithHoles{std::move(outer), {}}}, tol);
}

SubstrateShape SubstrateShape::from_polytope(const ConvexPolytope& body, const Tolerances& tol) {
  if (body.empty()) throw std::invalid_argument("empty polytope");
  if (body.dim() == 2) {
    SubstrateShape s = from_polygons({PolygonWithHoles{body.vertices(), {}}}, tol);
    s.convex_ = true;
    return s;
  }
  SubstrateShape s;
  s.dim_ = 3;
  s.tol_ = tol;
  s.convex_ = true;
  for (const Vec& v : body.vertices()) {
    if (v.z < -tol.snap) throw std::invalid_argument("polytope dips below the substrate");
  }
  s.solid_ = body;
  s.volume_ = body.volume();
  return s;
}

SubstrateShape SubstrateShape::box(int dim, double width, double height, const Tolerances& tol) {
  if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("box needs positive sides");
  if (dim == 2) {
    return from_polygon({{0, 0}, {width, 0}, {width, height}, {0, height}}, tol);
  }
  std::vector<Vec> v = {{0, 0, 0}, {width, 0, 0}, {width, width, 0}, {0, width, 0},
                        {0, 0, height}, {width, 0, height}, {width, width, height},
                        {0, width, height}};
  std::vector<std::vector<int>> f = {{3, 2, 1, 0}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                     {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  return from_polytope(ConvexPolytope::from_facets(std::move(v), std::move(f), tol), tol);
}

std::vector<BoundaryFacet> SubstrateShape::boundary() const {
  std::vector<BoundaryFacet> out;
  if (dim_ == 2) {
    auto emit_ring = [&](const std::vector<Vec>& ring) {
      int n = static_cast<int>(ring.size());
      for (int i = 0; i < n; ++i) {
        const Vec& a = ring[i];
        const Vec& b = ring[(i + 1) % n];
        double len = distance(a, b);
        if (len <= 0.0) continue;
        Vec nu = Vec{(b - a).y, -(b - a).x} / len;
        bool contact = a.y == 0.0 && b.y == 0.0 && nu.y < 0.0;
        out.push_back({nu, len, contact});
      }
    };
    for (const PolygonWithHoles& pw : polys_) {
      emit_ring(pw.outer);
      for (const auto& hole : pw.holes) emit_ring(hole);
    }
    return out;
  }
  for (const Facet& f : solid_.facets()) {
    Vec s{};
    bool on = true;
    for (size_t i = 0; i < f.vertices.size(); ++i) {
      const Vec& a = solid_.vertices()[f.vertices[i]];
      const Vec& b = solid_.vertices()[f.vertices[(i + 1) % f.vertices.size()]];
      s += cross(a, b);
      on = on && std::abs(a.z) <= tol_.snap;
    }
    double area = 0.5 * norm(s);
    if (area <= 0.0) continue;
    out.push_back({f.normal, area, on && f.normal.z < -0.5});
  }
  return out;
}

double SubstrateShape::contact_measure() const {
  double m = 0.0;
  for (const BoundaryFacet& f : boundary())
    if (f.on_substrate) m += f.measure;
  return m;
}

double SubstrateShape::perimeter() const {
  double m = 0.0;
  for (const BoundaryFacet& f : boundary()) m += f.measure;
  return m;
}

double SubstrateShape::diameter() const {
  Vec lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  auto visit = [&](const Vec& v) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  };
  if (dim_ == 2) {
    for (const auto& pw : polys_) {
      for (const Vec& v : pw.outer) visit(v);
    }
  } else {
    for (const Vec& v : solid_.vertices()) visit(v);
  }
  return norm(hi - lo);
}

SubstrateShape SubstrateShape::translated(const Vec& t, const Tolerances& tol) const {
  if (dim_ == 2) {
    std::vector<PolygonWithHoles> polys = polys_;
    for (auto& pw : polys) {
      for (Vec& v : pw.outer) v += t;
      for (auto& h : pw.holes)
        for (Vec& v : h) v += t;
    }
    return from_polygons(std::move(polys), tol);
  }
  return from_polytope(solid_.translated(t), tol);
}

EnergyBreakdown energy_F(const SubstrateShape& E, const Anisotropy& phi, double lambda) {
  if (phi.dim() != E.dim()) throw std::invalid_argument("dimension mismatch");
  EnergyBreakdown b;
  for (const BoundaryFacet& f : E.boundary()) {
    if (f.on_substrate) {
      b.contact_measure += f.measure;
    } else {
      b.free_surface += phi.eval(f.normal) * f.measure;
    }
  }
  b.contact = lambda * b.contact_measure;
  b.total = b.free_surface + b.contact;
  return b;
}

double perimeter_P(const SubstrateShape& E, const Anisotropy& psi) {
  if (psi.dim() != E.dim()) throw std::invalid_argument("dimension mismatch");
  double total = 0.0;
  for (const BoundaryFacet& f : E.boundary()) total += psi.eval(f.normal) * f.measure;
  return total;
}

std::pair<double, double> jensen_lower_bound(const SubstrateShape& E, const Anisotropy& phi) {
  EnergyBreakdown b = energy_F(E, phi, 0.0);
  return {b.free_surface, phi.eval(axis_last(E.dim(), 1.0)) * b.contact_measure};
}

SubstrateShape rescale(const SubstrateShape& E, double r, const Vec& anchor,
                       const Tolerances& tol) {
  if (!(r > 0.0)) throw std::invalid_argument("scale factor must be positive");
  if (std::abs(last_comp(anchor, E.dim())) > tol.snap)
    throw std::invalid_argument("anchor must lie on the substrate");
  if (E.dim() == 2) {
    std::vector<PolygonWithHoles> polys = E.polygons();
    auto map = [&](Vec& v) { v = anchor + (v - anchor) * r; };
    for (auto& pw : polys) {
      for (Vec& v : pw.outer) map(v);
      for (auto& h : pw.holes)
        for (Vec& v : h) map(v);
    }
    return SubstrateShape::from_polygons(std::move(polys), tol);
  }
  ConvexPolytope solid = E.polytope().translated(-anchor).scaled(r).translated(anchor);
  return SubstrateShape::from_polytope(solid, tol);
}

std::vector<std::pair<double, EnergyBreakdown>> wetting_demo(const Anisotropy& phi, double lambda,
                                                             double v,
                                                             const std::vector<double>& R_list) {
  if (!(v > 0.0)) throw std::invalid_argument("volume must be positive");
  std::vector<std::pair<double, EnergyBreakdown>> out;
  for (double R : R_list) {
    double h = v / std::pow(R, phi.dim() - 1);
    SubstrateShape E = SubstrateShape::box(phi.dim(), R, h);
    out.push_back({R, energy_F(E, phi, lambda)});
  }
  return out;
}

int PixelShape::count() const {
  int c = 0;
  for (uint8_t v : cells) c += v != 0;
  return c;
}

bool PixelShape::edge_connected() const {
  int n = count();
  if (n == 0) return false;
  int start = -1;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells[i]) {
      start = static_cast<int>(i);
      break;
    }
  }
  std::vector<char> seen(cells.size(), 0);
  std::vector<int> stack = {start};
  seen[start] = 1;
  int reached = 0;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    ++reached;
    int x = i % width, y = i / width;
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (filled(nx, ny) && !seen[ny * width + nx]) {
        seen[ny * width + nx] = 1;
        stack.push_back(ny * width + nx);
      }
    }
  }
  return reached == n;
}

PixelShape PixelShape::from_rows(const std::vector<std::string>& rows) {
  PixelShape p;
  p.height = static_cast<int>(rows.size());
  p.width = p.height > 0 ? static_cast<int>(rows[0].size()) : 0;
  p.cells.assign(static_cast<size_t>(p.width) * p.height, 0);
  for (int y = 0; y < p.height; ++y) {
    if (static_cast<int>(rows[y].size()) != p.width)
      throw std::invalid_argument("ragged pixel rows");
    for (int x = 0; x < p.width; ++x) {
      char c = rows[y][x];
      if (c != '0' && c != '1') throw std::invalid_argument("pixel rows must be 0/1");
      p.cells[y * p.width + x] = c == '1';
    }
  }
  return p;
}

std::vector<std::string> PixelShape::to_rows() const {
  std::vector<std::string> rows;
  for (int y = 0; y < height; ++y) {
    std::string r(width, '0');
    for (int x = 0; x < width; ++x)
      if (filled(x, y)) r[x] = '1';
    rows.push_back(std::move(r));
  }
  return rows;
}

EnergyBreakdown pixel_energy(const PixelShape& P, const Anisotropy& phi, double lambda) {
  if (phi.dim() != 2) throw std::invalid_argument("pixel shapes are 2D");
  if (!P.edge_connected()) throw std::invalid_argument("pixel shape is not edge-connected");
  EnergyBreakdown b;
  const Vec normals[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  for (int y = 0; y < P.height; ++y) {
    for (int x = 0; x < P.width; ++x) {
      if (!P.filled(x, y)) continue;
      for (int k = 0; k < 4; ++k) {
        if (P.filled(x + dx[k], y + dy[k])) continue;
        bool contact = (k == 3) && y == 0;
        if (contact) {
          b.contact_measure += 1.0;
        } else {
          b.free_surface += phi.eval(normals[k]);
        }
      }
    }
  }
  b.contact = lambda * b.contact_measure;
  b.total = b.free_surface + b.contact;
  return b;
}

SubstrateShape pixels_to_shape(const PixelShape& P, const Tolerances& tol) {
  if (!P.edge_connected()) throw std::invalid_argument("pixel shape is not edge-connected");
  // Directed boundary edges with the interior on the left; outer loops come
  // out ccw and holes cw.
  struct Pt {
    int x, y;
    bool operator<(const Pt& o) const { return x < o.x || (x == o.x && y < o.y); }
    bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
  };
  std::multimap<Pt, Pt> edges;
  for (int y = 0; y < P.height; ++y) {
    for (int x = 0; x < P.width; ++x) {
      if (!P.filled(x, y)) continue;
      if (!P.filled(x, y - 1)) edges.insert({{x, y}, {x + 1, y}});          // bottom
      if (!P.filled(x + 1, y)) edges.insert({{x + 1, y}, {x + 1, y + 1}});  // right
      if (!P.filled(x, y + 1)) edges.insert({{x + 1, y + 1}, {x, y + 1}});  // top
      if (!P.filled(x - 1, y)) edges.insert({{x, y + 1}, {x, y}});          // left
    }
  }

  std::vector<std::vector<Vec>> loops;
  while (!edges.empty()) {
    auto it = edges.begin();
    Pt start = it->first;
    Pt cur = start, prev{start.x - 1, start.y};  // fake incoming from the left
    std::vector<Vec> loop;
    while (true) {
      auto [lo, hi] = edges.equal_range(cur);
      if (lo == hi) throw std::logic_error("boundary trace broke");
      // At pinch vertices pick the sharpest left turn to keep loops simple.
      auto bestIt = lo;
      double bestTurn = -1e300;
      Vec in{static_cast<double>(cur.x - prev.x), static_cast<double>(cur.y - prev.y)};
      for (auto e = lo; e != hi; ++e) {
        Vec out{static_cast<double>(e->second.x - cur.x), static_cast<double>(e->second.y - cur.y)};
        double turn = std::atan2(cross2(in, out), dot(in, out));
        if (turn > bestTurn) {
          bestTurn = turn;
          bestIt = e;
        }
      }
      Pt next = bestIt->second;
      edges.erase(bestIt);
      loop.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
      prev = cur;
      cur = next;
      if (cur == start) break;
    }
    // Merge collinear runs of unit edges.
    std::vector<Vec> merged;
    int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      Vec e1 = loop[i] - loop[(i + n - 1) % n];
      Vec e2 = loop[(i + 1) % n] - loop[i];
      if (std::abs(cross2(e1, e2)) > 1e-12) merged.push_back(loop[i]);
    }
    loops.push_back(std::move(merged));
  }

  std::vector<PolygonWithHoles> polys;
  std::vector<std::vector<Vec>> holes;
  for (auto& loop : loops) {
    if (ring_area(loop) > 0) {
      polys.push_back({std::move(loop), {}});
    } else {
      holes.push_back(std::move(loop));
    }
  }
  for (auto& hole : holes) {
    // A point just inside the hole region: hole loops run cw with the solid
    // on the left, so the hole interior sits right of the first edge.
    Vec dir = normalized(hole[1] - hole[0]);
    Vec probe = (hole[0] + hole[1]) * 0.5 + Vec{dir.y, -dir.x} * 0.5;
    bool placed = false;
    for (auto& pw : polys) {
      if (point_in_ring(probe, pw.outer)) {
        pw.holes.push_back(std::move(hole));
        placed = true;
        break;
      }
    }
    if (!placed) throw std::logic_error("hole loop without an enclosing outer loop");
  }
  return SubstrateShape::from_polygons(std::move(polys), tol);
}

}  // namespace wb
