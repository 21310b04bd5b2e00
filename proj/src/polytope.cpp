#include "winterbottom/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "winterbottom/log.hpp"

namespace wb {

namespace {

double coord_scale(const std::vector<Vec>& pts) {
  double s = 0.0;
  for (const Vec& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  return s > 0.0 ? s : 1.0;
}

// 2D convex hull (monotone chain), ccw.
std::vector<Vec> hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  int n = static_cast<int>(pts.size());
  if (n < 3) return pts;
  std::vector<Vec> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {
    while (k >= lower && cross2(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double polygon_area(const std::vector<Vec>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec& p = v[i];
    const Vec& q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

struct SortedHalfplane {
  Vec n;
  double b;
  double ang;
};

Vec isect(const SortedHalfplane& h1, const SortedHalfplane& h2) {
  double det = h1.n.x * h2.n.y - h1.n.y * h2.n.x;
  return {(h1.b * h2.n.y - h2.b * h1.n.y) / det, (h1.n.x * h2.b - h2.n.x * h1.b) / det};
}

bool inside(const SortedHalfplane& h, const Vec& p) {
  return dot(p, h.n) <= h.b + 1e-11 * (1.0 + std::abs(h.b));
}

double facet_area_3d(const std::vector<Vec>& verts, const std::vector<int>& ids) {
  Vec s{};
  for (size_t i = 0; i < ids.size(); ++i) {
    const Vec& p = verts[ids[i]];
    const Vec& q = verts[ids[(i + 1) % ids.size()]];
    s += cross(p, q);
  }
  return 0.5 * norm(s);
}

// Orthonormal in-plane basis for a unit normal.
std::pair<Vec, Vec> plane_basis(const Vec& n) {
  Vec u = std::abs(n.x) < 0.9 ? cross(n, Vec{1, 0, 0}) : cross(n, Vec{0, 1, 0});
  u = normalized(u);
  return {u, cross(n, u)};
}

std::vector<int> order_facet_ccw(const std::vector<Vec>& verts, std::vector<int> ids,
                                 const Vec& normal) {
  Vec c{};
  for (int i : ids) c += verts[i];
  c = c / static_cast<double>(ids.size());
  auto [u, w] = plane_basis(normal);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    Vec da = verts[a] - c;
    Vec db = verts[b] - c;
    return std::atan2(dot(da, w), dot(da, u)) < std::atan2(dot(db, w), dot(db, u));
  });
  return ids;
}

}  // namespace

ConvexPolytope ConvexPolytope::empty(int dim) {
  ConvexPolytope p;
  p.dim_ = dim;
  p.empty_ = true;
  p.volume_ = 0.0;
  return p;
}

void ConvexPolytope::finalize_2d(const Tolerances& tol) {
  double scale = coord_scale(vertices_);
  // Merge near-duplicates, then drop near-collinear vertices; a removal can
  // expose a new collinear triple, so iterate to a fixed point.
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    std::vector<Vec> out;
    for (const Vec& v : vertices_) {
      if (!out.empty() && distance(out.back(), v) <= tol.dedup * scale) {
        changed = true;
        continue;
      }
      out.push_back(v);
    }
    while (out.size() >= 2 && distance(out.front(), out.back()) <= tol.dedup * scale) {
      out.pop_back();
      changed = true;
    }
    if (out.size() >= 3) {
      std::vector<Vec> kept;
      int m = static_cast<int>(out.size());
      for (int i = 0; i < m; ++i) {
        Vec e1 = out[i] - out[(i + m - 1) % m];
        Vec e2 = out[(i + 1) % m] - out[i];
        if (std::abs(cross2(e1, e2)) <= tol.dedup * norm(e1) * norm(e2)) {
          changed = true;
          continue;
        }
        kept.push_back(out[i]);
      }
      out = std::move(kept);
    }
    vertices_ = std::move(out);
    if (!changed) break;
  }

  if (vertices_.size() < 3) {
    empty_ = true;
    vertices_.clear();
    halfspaces_.clear();
    volume_ = 0.0;
    return;
  }
  double area = polygon_area(vertices_);
  if (area < 0) {  // normalize to ccw
    std::reverse(vertices_.begin(), vertices_.end());
    area = -area;
  }
  if (area <= 1e-12 * scale * scale) {
    empty_ = true;
    vertices_.clear();
    halfspaces_.clear();
    volume_ = 0.0;
    return;
  }
  empty_ = false;
  volume_ = area;
  halfspaces_.clear();
  int m = static_cast<int>(vertices_.size());
  for (int i = 0; i < m; ++i) {
    Vec e = vertices_[(i + 1) % m] - vertices_[i];
    Vec n = Vec{e.y, -e.x} / norm(e);
    halfspaces_.push_back({n, dot(n, vertices_[i])});
  }
}

ConvexPolytope ConvexPolytope::polygon(std::vector<Vec> verts, const Tolerances& tol) {
  for (const Vec& v : verts) {
    if (!finite(v)) throw std::invalid_argument("non-finite vertex");
    if (v.z != 0.0) throw std::invalid_argument("2D vertex with nonzero z");
  }
  ConvexPolytope p;
  p.dim_ = 2;
  p.vertices_ = hull_2d(std::move(verts));
  p.finalize_2d(tol);
  return p;
}

ConvexPolytope ConvexPolytope::from_halfplanes(std::vector<Halfspace> hs, const Tolerances& tol) {
  if (hs.size() < 3) throw std::invalid_argument("need at least 3 halfplanes");
  std::vector<SortedHalfplane> sorted;
  sorted.reserve(hs.size());
  for (const Halfspace& h : hs) {
    double n = norm(h.normal);
    if (n < 1e-14) throw std::invalid_argument("zero halfplane normal");
    Vec u = h.normal / n;
    sorted.push_back({u, h.offset / n, std::atan2(u.y, u.x)});
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const SortedHalfplane& a, const SortedHalfplane& b) { return a.ang < b.ang; });
  // Same-direction halfplanes: keep the tightest.
  std::vector<SortedHalfplane> uniq;
  for (const SortedHalfplane& h : sorted) {
    if (!uniq.empty() && std::abs(h.ang - uniq.back().ang) < 1e-9) {
      uniq.back().b = std::min(uniq.back().b, h.b);
      continue;
    }
    uniq.push_back(h);
  }
  if (uniq.size() >= 2 && std::abs(uniq.front().ang + 2 * M_PI - uniq.back().ang) < 1e-9) {
    uniq.front().b = std::min(uniq.front().b, uniq.back().b);
    uniq.pop_back();
  }

  std::deque<SortedHalfplane> dq;
  for (const SortedHalfplane& h : uniq) {
    while (dq.size() >= 2 && !inside(h, isect(dq[dq.size() - 1], dq[dq.size() - 2])))
      dq.pop_back();
    while (dq.size() >= 2 && !inside(h, isect(dq[0], dq[1]))) dq.pop_front();
    dq.push_back(h);
  }
  while (dq.size() >= 3 && !inside(dq.front(), isect(dq[dq.size() - 1], dq[dq.size() - 2])))
    dq.pop_back();
  while (dq.size() >= 3 && !inside(dq.back(), isect(dq[0], dq[1]))) dq.pop_front();

  ConvexPolytope p;
  p.dim_ = 2;
  if (dq.size() < 3) {
    p.empty_ = true;
    return p;
  }
  for (size_t i = 0; i < dq.size(); ++i) {
    p.vertices_.push_back(isect(dq[i], dq[(i + 1) % dq.size()]));
  }
  p.finalize_2d(tol);
  return p;
}

ConvexPolytope ConvexPolytope::from_halfspaces_dual(const std::vector<Halfspace>& hs,
                                                    const Tolerances& tol) {
  if (hs.size() < 4) throw std::invalid_argument("need at least 4 halfspaces");
  std::vector<Vec> dual;
  dual.reserve(hs.size());
  for (const Halfspace& h : hs) {
    double n = norm(h.normal);
    double b = h.offset / n;
    if (b <= 0.0)
      throw NumericalDegeneracy("dual transform requires the origin strictly inside");
    dual.push_back(h.normal / (n * b));
  }
  std::vector<HullTriangle> tris = convex_hull_3d(dual);

  // Each hull triangle is a primal vertex (the plane x . p == 1 through its
  // three dual points); each hull vertex is a primal facet.
  std::vector<Vec> raw;
  raw.reserve(tris.size());
  for (const HullTriangle& t : tris) {
    const Vec &a = dual[t.a], &b = dual[t.b], &c = dual[t.c];
    double det = dot(a, cross(b, c));
    if (std::abs(det) < 1e-300) throw NumericalDegeneracy("degenerate dual facet");
    Vec x = (cross(b, c) + cross(c, a) + cross(a, b)) / det;
    raw.push_back(x);
  }

  double scale = coord_scale(raw);
  std::vector<Vec> verts;
  std::vector<int> tri_vertex(tris.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    int found = -1;
    for (int j = static_cast<int>(verts.size()) - 1; j >= 0; --j) {
      if (distance(verts[j], raw[i]) <= 1e-9 * scale) {
        found = j;
        break;
      }
    }
    if (found < 0) {
      verts.push_back(raw[i]);
      found = static_cast<int>(verts.size()) - 1;
    }
    tri_vertex[i] = found;
  }

  std::map<int, std::vector<int>> around;  // dual point -> primal vertex ids
  for (size_t i = 0; i < tris.size(); ++i) {
    for (int pid : {tris[i].a, tris[i].b, tris[i].c}) around[pid].push_back(tri_vertex[i]);
  }

  ConvexPolytope p;
  p.dim_ = 3;
  p.vertices_ = verts;
  for (auto& [pid, ids] : around) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < 3) continue;
    Facet f;
    f.normal = normalized(dual[pid]);
    f.offset = 1.0 / norm(dual[pid]);
    f.vertices = order_facet_ccw(verts, ids, f.normal);
    p.facets_.push_back(std::move(f));
  }
  if (p.facets_.size() < 4) throw NumericalDegeneracy("dual construction collapsed");
  p.halfspaces_.clear();
  for (const Facet& f : p.facets_) p.halfspaces_.push_back({f.normal, f.offset});
  p.compute_volume();
  p.empty_ = p.volume_ <= 1e-12 * scale * scale * scale;
  (void)tol;
  return p;
}

ConvexPolytope ConvexPolytope::from_facets(std::vector<Vec> verts,
                                           std::vector<std::vector<int>> facets,
                                           const Tolerances& tol) {
  (void)tol;
  ConvexPolytope p;
  p.dim_ = 3;
  p.vertices_ = std::move(verts);
  for (auto& ids : facets) {
    if (ids.size() < 3) throw std::invalid_argument("facet with fewer than 3 vertices");
    Facet f;
    // Newell normal; orientation as given.
    Vec s{};
    for (size_t i = 0; i < ids.size(); ++i) {
      const Vec& a = p.vertices_.at(ids[i]);
      const Vec& b = p.vertices_.at(ids[(i + 1) % ids.size()]);
      s += cross(a, b);
    }
    f.normal = normalized(s);
    f.offset = dot(f.normal, p.vertices_[ids[0]]);
    f.vertices = std::move(ids);
    p.facets_.push_back(std::move(f));
  }
  p.halfspaces_.clear();
  for (const Facet& f : p.facets_) p.halfspaces_.push_back({f.normal, f.offset});
  p.compute_volume();
  p.empty_ = p.facets_.size() < 4 || p.volume_ <= 0.0;
  return p;
}

void ConvexPolytope::compute_volume() {
  if (dim_ == 2) {
    volume_ = polygon_area(vertices_);
    return;
  }
  double v = 0.0;
  for (const Facet& f : facets_) {
    for (size_t i = 1; i + 1 < f.vertices.size(); ++i) {
      v += dot(vertices_[f.vertices[0]],
               cross(vertices_[f.vertices[i]], vertices_[f.vertices[i + 1]]));
    }
  }
  volume_ = v / 6.0;
}

std::vector<Facet> ConvexPolytope::facets() const {
  if (dim_ == 3) return facets_;
  std::vector<Facet> out;
  int m = static_cast<int>(vertices_.size());
  for (int i = 0; i < m; ++i) {
    Facet f;
    f.vertices = {i, (i + 1) % m};
    f.normal = halfspaces_[i].normal;
    f.offset = halfspaces_[i].offset;
    out.push_back(std::move(f));
  }
  return out;
}

ConvexPolytope ConvexPolytope::translated(const Vec& t) const {
  ConvexPolytope p = *this;
  for (Vec& v : p.vertices_) v += t;
  for (Halfspace& h : p.halfspaces_) h.offset += dot(h.normal, t);
  for (Facet& f : p.facets_) f.offset += dot(f.normal, t);
  return p;
}

ConvexPolytope ConvexPolytope::scaled(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("scale factor must be positive");
  ConvexPolytope p = *this;
  for (Vec& v : p.vertices_) v = v * s;
  for (Halfspace& h : p.halfspaces_) h.offset *= s;
  for (Facet& f : p.facets_) f.offset *= s;
  p.volume_ *= std::pow(s, dim_);
  return p;
}

ConvexPolytope ConvexPolytope::clipped(const Halfspace& hraw, const Tolerances& tol) const {
  if (empty_) return *this;
  Halfspace h{normalized(hraw.normal), hraw.offset / norm(hraw.normal)};
  double scale = coord_scale(vertices_);
  double feas = tol.constraint * std::max(1.0, scale);

  std::vector<double> s(vertices_.size());
  bool any_out = false, any_in = false;
  for (size_t i = 0; i < vertices_.size(); ++i) {
    s[i] = dot(vertices_[i], h.normal) - h.offset;
    any_out |= s[i] > feas;
    any_in |= s[i] < -feas;
  }
  if (!any_out) return *this;
  if (!any_in) return ConvexPolytope::empty(dim_);

  auto crossing = [&](const Vec& a, double sa, const Vec& b, double sb) {
    double t = sa / (sa - sb);
    Vec w = a + (b - a) * t;
    w -= h.normal * (dot(w, h.normal) - h.offset);  // snap onto the plane
    return w;
  };

  if (dim_ == 2) {
    std::vector<Vec> out;
    int m = static_cast<int>(vertices_.size());
    for (int i = 0; i < m; ++i) {
      const Vec& a = vertices_[i];
      const Vec& b = vertices_[(i + 1) % m];
      double sa = s[i], sb = s[(i + 1) % m];
      if (sa <= feas) out.push_back(a);
      if ((sa > feas && sb < -feas) || (sa < -feas && sb > feas))
        out.push_back(crossing(a, sa, b, sb));
    }
    ConvexPolytope p;
    p.dim_ = 2;
    p.vertices_ = std::move(out);
    p.finalize_2d(tol);
    return p;
  }

  // 3D: clip every facet; crossings are computed once per undirected edge so
  // neighbouring facets stitch exactly.
  std::vector<Vec> verts;
  std::vector<int> old_to_new(vertices_.size(), -1);
  auto keep_vertex = [&](int i) {
    if (old_to_new[i] < 0) {
      old_to_new[i] = static_cast<int>(verts.size());
      verts.push_back(vertices_[i]);
    }
    return old_to_new[i];
  };
  std::map<std::pair<int, int>, int> cut;
  auto cut_vertex = [&](int i, int j) {
    auto key = std::minmax(i, j);
    auto it = cut.find(key);
    if (it != cut.end()) return it->second;
    int id = static_cast<int>(verts.size());
    verts.push_back(crossing(vertices_[i], s[i], vertices_[j], s[j]));
    cut.emplace(key, id);
    return id;
  };

  ConvexPolytope p;
  p.dim_ = 3;
  std::vector<int> bottom;
  for (const Facet& f : facets_) {
    std::vector<int> ids;
    int m = static_cast<int>(f.vertices.size());
    for (int i = 0; i < m; ++i) {
      int a = f.vertices[i], b = f.vertices[(i + 1) % m];
      if (s[a] <= feas) ids.push_back(keep_vertex(a));
      if ((s[a] > feas && s[b] < -feas) || (s[a] < -feas && s[b] > feas)) {
        int id = cut_vertex(a, b);
        ids.push_back(id);
        bottom.push_back(id);
      }
    }
    std::vector<int> ded;
    for (int id : ids)
      if (ded.empty() || ded.back() != id) ded.push_back(id);
    while (ded.size() >= 2 && ded.front() == ded.back()) ded.pop_back();
    if (ded.size() >= 3) p.facets_.push_back({std::move(ded), f.normal, f.offset});
  }
  // Original vertices sitting on the plane belong to the new bottom facet too.
  for (size_t i = 0; i < vertices_.size(); ++i) {
    if (std::abs(s[i]) <= feas && old_to_new[i] >= 0) bottom.push_back(old_to_new[i]);
  }
  std::sort(bottom.begin(), bottom.end());
  bottom.erase(std::unique(bottom.begin(), bottom.end()), bottom.end());
  if (bottom.size() >= 3) {
    Facet f;
    f.normal = h.normal;
    f.offset = h.offset;
    f.vertices = order_facet_ccw(verts, bottom, f.normal);
    p.facets_.push_back(std::move(f));
  }
  p.vertices_ = std::move(verts);
  if (p.facets_.size() < 4) return ConvexPolytope::empty(3);
  p.halfspaces_.clear();
  for (const Facet& f : p.facets_) p.halfspaces_.push_back({f.normal, f.offset});
  p.compute_volume();
  p.empty_ = p.volume_ <= 1e-12 * scale * scale * scale;
  return p;
}

double ConvexPolytope::min_coord(int axis) const {
  double m = std::numeric_limits<double>::infinity();
  for (const Vec& v : vertices_) m = std::min(m, v[axis]);
  return m;
}

double ConvexPolytope::max_coord(int axis) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const Vec& v : vertices_) m = std::max(m, v[axis]);
  return m;
}

Vec ConvexPolytope::centroid() const {
  Vec c{};
  for (const Vec& v : vertices_) c += v;
  return vertices_.empty() ? c : c / static_cast<double>(vertices_.size());
}

std::pair<double, std::vector<int>> ConvexPolytope::support(const Vec& nu, double tol) const {
  if (empty_) throw std::invalid_argument("support of empty polytope");
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : vertices_) best = std::max(best, dot(v, nu));
  std::vector<int> arg;
  for (size_t i = 0; i < vertices_.size(); ++i) {
    if (dot(vertices_[i], nu) >= best - tol * (1.0 + std::abs(best))) {
      arg.push_back(static_cast<int>(i));
    }
  }
  return {best, arg};
}

double ConvexPolytope::contact_measure(const Tolerances& tol) const {
  if (empty_) return 0.0;
  double scale = coord_scale(vertices_);
  double snap = tol.snap * std::max(1.0, scale);
  double total = 0.0;
  if (dim_ == 2) {
    int m = static_cast<int>(vertices_.size());
    for (int i = 0; i < m; ++i) {
      const Vec& a = vertices_[i];
      const Vec& b = vertices_[(i + 1) % m];
      if (std::abs(a.y) <= snap && std::abs(b.y) <= snap) total += distance(a, b);
    }
    return total;
  }
  for (const Facet& f : facets_) {
    bool on = true;
    for (int id : f.vertices) on = on && std::abs(vertices_[id].z) <= snap;
    if (on) total += facet_area_3d(vertices_, f.vertices);
  }
  return total;
}

void ConvexPolytope::validate(const Tolerances& tol) const {
  if (empty_) return;
  double scale = coord_scale(vertices_);
  double feas = tol.constraint * std::max(1.0, scale);
  for (const Halfspace& h : halfspaces_) {
    int touching = 0;
    for (const Vec& v : vertices_) {
      double d = dot(v, h.normal) - h.offset;
      if (d > feas) throw std::logic_error("vertex violates halfspace");
      if (std::abs(d) <= feas) ++touching;
    }
    if (touching < dim_) throw std::logic_error("halfspace does not support the polytope");
  }
  if (volume_ <= 0.0) throw std::logic_error("non-positive volume on nonempty polytope");
  if (dim_ == 2) {
    int m = static_cast<int>(vertices_.size());
    for (int i = 0; i < m; ++i) {
      Vec e1 = vertices_[i] - vertices_[(i + m - 1) % m];
      Vec e2 = vertices_[(i + 1) % m] - vertices_[i];
      if (cross2(e1, e2) <= 0.0) throw std::logic_error("vertices not strictly convex ccw");
    }
  }
  // Closed boundary: facet normals weighted by measure cancel.
  Vec gg{};
  double per = 0.0;
  for (const Facet& f : facets()) {
    double m = dim_ == 2 ? distance(vertices_[f.vertices[0]], vertices_[f.vertices[1]])
                         : facet_area_3d(vertices_, f.vertices);
    gg += f.normal * m;
    per += m;
  }
  if (norm(gg) > 1e-9 * per) throw std::logic_error("Gauss-Green residual too large");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::CompleteDrying: return "complete_drying";
    case Regime::PartialWetting: return "partial_wetting";
    case Regime::CompleteWetting: return "complete_wetting";
  }
  return "?";
}

RegimeLabel classify_regime(const Anisotropy& phi, double lambda) {
  Vec ed = axis_last(phi.dim(), 1.0);
  double lower = -phi.eval(ed);
  double upper = phi.eval(-ed);
  Regime r = Regime::PartialWetting;
  if (lambda >= upper) r = Regime::CompleteDrying;
  else if (lambda <= lower) r = Regime::CompleteWetting;
  return {r, lower, upper};
}

namespace {

// Deduplicate directions (unit vectors) by angular proximity.
void append_unique_dirs(std::vector<Vec>& dirs, const std::vector<Vec>& extra) {
  for (const Vec& e : extra) {
    bool dup = false;
    for (const Vec& d : dirs) {
      if (dot(d, e) >= 1.0 - 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) dirs.push_back(e);
  }
}

// Exact facet normals of conv(points) in 3D via the hull.
std::vector<Vec> hull_facet_normals_3d(const std::vector<Vec>& pts) {
  std::vector<Vec> out;
  for (const HullTriangle& t : convex_hull_3d(pts)) {
    Vec n = normalized(cross(pts[t.b] - pts[t.a], pts[t.c] - pts[t.a]));
    append_unique_dirs(out, {n});
  }
  return out;
}

std::vector<Vec> exact_wulff_normals(const Anisotropy& phi) {
  std::vector<Vec> exact = phi.exact_normals();
  const Anisotropy& r = phi.root();
  if (phi.dim() == 3 && (r.kind() == AnisotropyKind::SupportOfPolytope ||
                         r.kind() == AnisotropyKind::CrystallineMax)) {
    std::vector<Vec> hull_normals = hull_facet_normals_3d(r.points());
    const ModificationRecord* mod = phi.modification();
    if (mod != nullptr && mod->lambda_modified) hull_normals.push_back(axis_last(3, -1.0));
    append_unique_dirs(exact, hull_normals);
  }
  return exact;
}

}  // namespace

ConvexPolytope build_wulff(const Anisotropy& phi, int n_directions, const Tolerances& tol) {
  if (!phi.coercive()) throw UnboundedError("density is not coercive; Wulff set unbounded");
  const int dim = phi.dim();
  if ((dim == 2 && n_directions < 8) || (dim == 3 && n_directions < 32))
    throw std::invalid_argument("too few directions for the Wulff construction");

  // Exact normals go first so that a sampled direction that lands on top of
  // one (e.g. the downward ray of a lambda modification) is the one dropped.
  std::vector<Vec> dirs = exact_wulff_normals(phi);
  if (phi.root().kind() != AnisotropyKind::SupportOfPolytope || dirs.empty()) {
    append_unique_dirs(dirs, unit_directions(dim, n_directions));
  }

  std::vector<Halfspace> hs;
  hs.reserve(dirs.size());
  for (const Vec& nu : dirs) hs.push_back({nu, phi.eval(nu)});
  ConvexPolytope W =
      dim == 2 ? ConvexPolytope::from_halfplanes(std::move(hs), tol)
               : ConvexPolytope::from_halfspaces_dual(hs, tol);
  if (W.empty()) throw NumericalDegeneracy("Wulff construction produced an empty body");
  return W;
}

ConvexPolytope winterbottom(const ConvexPolytope& W, double lambda, const Tolerances& tol) {
  if (W.empty()) throw std::invalid_argument("winterbottom of empty Wulff set");
  // x_d >= -lambda  <=>  x . (-e_d) <= lambda
  return W.clipped({axis_last(W.dim(), -1.0), lambda}, tol);
}

ConvexPolytope winterbottom_with_volume(const ConvexPolytope& W_lambda, double lambda, double v,
                                        const Tolerances& tol) {
  if (W_lambda.empty() || W_lambda.volume() <= 0.0)
    throw std::invalid_argument("winterbottom set has no volume");
  if (!(v > 0.0)) throw std::invalid_argument("target volume must be positive");
  const int dim = W_lambda.dim();
  double s = std::pow(v / W_lambda.volume(), 1.0 / dim);
  ConvexPolytope out = W_lambda.translated(axis_last(dim, 1.0) * lambda).scaled(s);
  // The lifted bottom sits at height 0 up to roundoff; snap it exactly.
  double snap = tol.snap * std::max(1.0, coord_scale(out.vertices()));
  ConvexPolytope snapped = out;
  {
    std::vector<Vec> vs = out.vertices();
    bool any = false;
    for (Vec& p : vs) {
      double& last = dim == 2 ? p.y : p.z;
      if (last != 0.0 && std::abs(last) <= snap) {
        last = 0.0;
        any = true;
      }
    }
    if (any) {
      if (dim == 2) {
        snapped = ConvexPolytope::polygon(std::move(vs), tol);
      } else {
        std::vector<std::vector<int>> fl;
        for (const Facet& f : out.facets()) fl.push_back(f.vertices);
        snapped = ConvexPolytope::from_facets(std::move(vs), std::move(fl), tol);
      }
    }
  }
  return snapped;
}

Anisotropy convex_envelope(const Anisotropy& phi, const ConvexPolytope& W) {
  if (W.empty()) throw std::invalid_argument("convex envelope of empty Wulff set");
  if (W.dim() != phi.dim()) throw std::invalid_argument("dimension mismatch");
  return Anisotropy::support_of_polytope(W.vertices(), W.dim());
}

double young_law_check(const Anisotropy& phi, const ConvexPolytope& W_v, double lambda,
                       const Tolerances& tol) {
  if (!phi.differentiable())
    throw NotDifferentiable("Young's law residual needs a differentiable density");
  if (W_v.empty()) throw std::invalid_argument("empty shape");
  double scale = coord_scale(W_v.vertices());
  double snap = tol.snap * std::max(1.0, scale);
  if (W_v.contact_measure(tol) <= snap)
    throw std::invalid_argument("shape has no contact facet on the substrate");

  const Vec down = axis_last(W_v.dim(), -1.0);
  double residual = 0.0;
  bool found = false;
  if (W_v.dim() == 2) {
    // Free edges with exactly one endpoint on the substrate touch the
    // contact line; their normals carry the contact angle.
    const auto& vs = W_v.vertices();
    int m = static_cast<int>(vs.size());
    for (int i = 0; i < m; ++i) {
      const Vec& a = vs[i];
      const Vec& b = vs[(i + 1) % m];
      bool a_on = std::abs(a.y) <= snap, b_on = std::abs(b.y) <= snap;
      if (a_on == b_on) continue;
      Vec nu = W_v.halfspaces()[i].normal;
      residual = std::max(residual, std::abs(dot(phi.gradient(nu), down) - lambda));
      found = true;
    }
  } else {
    for (const Facet& f : W_v.facets()) {
      if (dot(f.normal, down) > 1.0 - 1e-12) continue;  // the contact facet itself
      bool touches = false, off = false;
      for (int id : f.vertices) {
        if (std::abs(W_v.vertices()[id].z) <= snap) touches = true;
        else off = true;
      }
      if (!touches || !off) continue;
      residual = std::max(residual, std::abs(dot(phi.gradient(f.normal), down) - lambda));
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("no free facet adjacent to the contact line");
  return residual;
}

}  // namespace wb
