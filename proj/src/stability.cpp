#include "winterbottom/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "winterbottom/log.hpp"
#include "winterbottom/optimize.hpp"
#include "winterbottom/polytope.hpp"

namespace wb {

namespace {

struct BBox {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
};

BBox bbox_of(const SubstrateShape& s) {
  BBox b;
  for (const PolygonWithHoles& pw : s.polygons()) {
    for (const Vec& v : pw.outer) {
      b.xlo = std::min(b.xlo, v.x);
      b.xhi = std::max(b.xhi, v.x);
      b.ylo = std::min(b.ylo, v.y);
      b.yhi = std::max(b.yhi, v.y);
    }
  }
  return b;
}

std::vector<const std::vector<Vec>*> rings_of(const SubstrateShape& s) {
  std::vector<const std::vector<Vec>*> rings;
  for (const PolygonWithHoles& pw : s.polygons()) {
    rings.push_back(&pw.outer);
    for (const auto& h : pw.holes) rings.push_back(&h);
  }
  return rings;
}

// Even-odd crossings of the boundary with the horizontal line at height y,
// shifted by tau; sorted interval endpoints come out in pairs.
void row_crossings(const std::vector<const std::vector<Vec>*>& rings, double tau, double y,
                   std::vector<double>& out) {
  out.clear();
  for (const auto* ring : rings) {
    size_t n = ring->size();
    for (size_t i = 0; i < n; ++i) {
      const Vec& a = (*ring)[i];
      const Vec& b = (*ring)[(i + 1) % n];
      if ((a.y > y) != (b.y > y)) {
        out.push_back(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x) + tau);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

double interval_overlap(const std::vector<double>& A, const std::vector<double>& B) {
  double total = 0.0;
  size_t i = 0, j = 0;
  while (i + 1 < A.size() && j + 1 < B.size()) {
    double lo = std::max(A[i], B[j]);
    double hi = std::min(A[i + 1], B[j + 1]);
    if (hi > lo) total += hi - lo;
    if (A[i + 1] < B[j + 1]) i += 2;
    else j += 2;
  }
  return total;
}

double ring_area(const std::vector<Vec>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec& p = v[i];
    const Vec& q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

// Exact intersection area of two convex polygons, the second shifted by tau.
double convex_clip_area(const std::vector<Vec>& A, const std::vector<Vec>& B, double tau) {
  std::vector<Vec> poly = A;
  size_t m = B.size();
  for (size_t i = 0; i < m && poly.size() >= 3; ++i) {
    Vec p0 = B[i] + Vec{tau, 0};
    Vec p1 = B[(i + 1) % m] + Vec{tau, 0};
    Vec e = p1 - p0;
    Vec n{e.y, -e.x};  // outward for ccw B
    double off = dot(n, p0);
    std::vector<Vec> out;
    size_t k = poly.size();
    for (size_t j = 0; j < k; ++j) {
      const Vec& a = poly[j];
      const Vec& b = poly[(j + 1) % k];
      double sa = dot(a, n) - off;
      double sb = dot(b, n) - off;
      if (sa <= 0) out.push_back(a);
      if ((sa < 0 && sb > 0) || (sa > 0 && sb < 0)) {
        double t = sa / (sa - sb);
        out.push_back(a + (b - a) * t);
      }
    }
    poly = std::move(out);
  }
  if (poly.size() < 3) return 0.0;
  return std::abs(ring_area(poly));
}

struct IntersectionEval {
  const SubstrateShape* A;
  const SubstrateShape* B;
  double h;        // raster row height (raster path only)
  bool exact;      // both convex: clip instead of rasterizing
  std::vector<const std::vector<Vec>*> ringsA, ringsB;
  BBox boxA, boxB;

  IntersectionEval(const SubstrateShape& a, const SubstrateShape& b, double raster_h)
      : A(&a), B(&b) {
    exact = a.convex() && b.convex();
    ringsA = rings_of(a);
    ringsB = rings_of(b);
    boxA = bbox_of(a);
    boxB = bbox_of(b);
    double diam = std::max(a.diameter(), b.diameter());
    h = raster_h > 0 ? raster_h : diam / 2000.0;
  }

  double area(double tau) const {
    if (exact) return convex_clip_area(A->polygons()[0].outer, B->polygons()[0].outer, tau);
    double ylo = std::max(boxA.ylo, boxB.ylo);
    double yhi = std::min(boxA.yhi, boxB.yhi);
    if (yhi <= ylo) return 0.0;
    int rows = std::max(1, static_cast<int>(std::ceil((yhi - ylo) / h)));
    double dy = (yhi - ylo) / rows;
    std::vector<double> xa, xb;
    double total = 0.0;
    for (int k = 0; k < rows; ++k) {
      double y = ylo + (k + 0.5) * dy;
      row_crossings(ringsA, 0.0, y, xa);
      row_crossings(ringsB, tau, y, xb);
      total += interval_overlap(xa, xb) * dy;
    }
    return total;
  }
};

}  // namespace

double symmetric_difference_area(const SubstrateShape& A, const SubstrateShape& B, double h) {
  if (A.dim() != 2 || B.dim() != 2)
    throw std::invalid_argument("symmetric difference implemented for 2D shapes");
  IntersectionEval eval(A, B, h);
  return A.volume() + B.volume() - 2.0 * eval.area(0.0);
}

std::pair<double, double> asymmetry_to(const SubstrateShape& E, const SubstrateShape& reference,
                                       double raster_h) {
  if (E.dim() != 2 || reference.dim() != 2)
    throw std::invalid_argument("asymmetry implemented for 2D shapes");
  IntersectionEval eval(E, reference, raster_h);
  double lo = eval.boxA.xlo - eval.boxB.xhi;
  double hi = eval.boxA.xhi - eval.boxB.xlo;
  double sum = E.volume() + reference.volume();
  auto f = [&](double tau) { return sum - 2.0 * eval.area(tau); };

  // Golden-section search; the overlap of convex-ish bodies is unimodal in tau.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  double tol = 1e-10 * std::max(1.0, std::max(E.diameter(), reference.diameter()));
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  double tau = fc < fd ? c : d;
  // Reported with the sign that carries E onto the reference: the overlap was
  // evaluated against reference + tau, so E - tau matches the reference.
  return {std::max(0.0, fc < fd ? fc : fd), -tau};
}

std::pair<double, double> asymmetry(const SubstrateShape& E, const Anisotropy& phi, double lambda,
                                    double v, int n_ref) {
  RegimeLabel r = classify_regime(phi, lambda);
  if (r.regime != Regime::PartialWetting)
    throw RegimeError("asymmetry requires the partial-wetting regime");
  if (std::abs(E.volume() - v) > 1e-9 * std::max(1.0, v))
    throw std::invalid_argument("shape volume does not match v");
  ConvexPolytope Wv =
      winterbottom_with_volume(winterbottom(build_wulff(phi, n_ref), lambda), lambda, v);
  return asymmetry_to(E, SubstrateShape::from_polytope(Wv));
}

PerturbationFamily family_from_string(const std::string& name) {
  if (name == "rect") return PerturbationFamily::RectDistortion;
  if (name == "noise") return PerturbationFamily::VertexNoise;
  if (name == "shear") return PerturbationFamily::Shear;
  throw std::invalid_argument("unknown perturbation family: " + name);
}

std::string to_string(PerturbationFamily f) {
  switch (f) {
    case PerturbationFamily::RectDistortion: return "rect";
    case PerturbationFamily::VertexNoise: return "noise";
    case PerturbationFamily::Shear: return "shear";
  }
  return "?";
}

SweepResult stability_sweep(const Anisotropy& phi, double lambda, double v, const SweepSpec& spec,
                            int n) {
  RegimeLabel reg = classify_regime(phi, lambda);
  if (reg.regime != Regime::PartialWetting)
    throw RegimeError("stability sweep requires the partial-wetting regime");
  if (n < 2) throw std::invalid_argument("sweep needs at least two parameter values");

  ConvexPolytope Wv = winterbottom_with_volume(
      winterbottom(build_wulff(phi, spec.base_directions), lambda), lambda, v);
  SubstrateShape reference = SubstrateShape::from_polytope(Wv);
  const double Fref = energy_F(reference, phi, lambda).total;
  const std::vector<Vec> base = reference.polygons()[0].outer;
  const double diam = reference.diameter();
  double cx = 0.0;
  for (const Vec& p : base) cx += p.x;
  cx /= static_cast<double>(base.size());

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u11(-1.0, 1.0);

  SweepResult out;
  for (int k = 0; k < n; ++k) {
    double frac = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
    double param = spec.log_spaced
                       ? spec.param_min * std::pow(spec.param_max / spec.param_min, frac)
                       : spec.param_min + frac * (spec.param_max - spec.param_min);

    std::vector<Vec> poly = base;
    switch (spec.family) {
      case PerturbationFamily::RectDistortion:
        // Volume-preserving width x height distortion about the contact line.
        for (Vec& p : poly) {
          p.x = cx + param * (p.x - cx);
          p.y = p.y / param;
        }
        break;
      case PerturbationFamily::VertexNoise:
        // Substrate vertices slide along the substrate so the perturbation
        // path stays smooth; free vertices move in both coordinates.
        for (Vec& p : poly) {
          p.x += param * diam * u11(rng);
          if (p.y > 0.0) p.y = std::max(0.0, p.y + param * diam * u11(rng));
        }
        break;
      case PerturbationFamily::Shear:
        for (Vec& p : poly) p.x += param * p.y;
        break;
    }

    StabilityRecord rec;
    rec.family = to_string(spec.family);
    rec.param = param;
    try {
      poly = project_polygon(std::move(poly), v);
      if (!polygon_simple(poly)) {
        log_info("stability sweep: skipping self-intersecting shape at param " +
                 std::to_string(param));
        continue;
      }
      SubstrateShape E = SubstrateShape::from_polygon(poly);
      rec.deficit = energy_F(E, phi, lambda).total - Fref;
      auto [asym, tau] = asymmetry_to(E, reference);
      rec.asymmetry = asym;
      rec.tau_star = tau;
      rec.method = (E.convex() && reference.convex()) ? "clip" : "raster";
      if (rec.deficit > 1e-12) {
        rec.ratio = (rec.asymmetry / v) * (rec.asymmetry / v) * Fref / rec.deficit;
        rec.ratio_valid = true;
        out.sup_ratio = std::max(out.sup_ratio, rec.ratio);
      }
      out.records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      log_info(std::string("stability sweep: skipping degenerate shape: ") + e.what());
    }
  }
  return out;
}

}  // namespace wb
