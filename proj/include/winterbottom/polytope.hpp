#pragma once

#include <optional>
#include <string>
#include <vector>

#include "winterbottom/anisotropy.hpp"
#include "winterbottom/hull3d.hpp"
#include "winterbottom/vec.hpp"

namespace wb {

// The density is not bounded below, so the halfspace intersection is
// unbounded and no Wulff set exists.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Halfspace {
  Vec normal;     // unit
  double offset;  // region x . normal <= offset
};

struct Facet {
  std::vector<int> vertices;  // ccw seen from outside
  Vec normal;                 // unit, outward
  double offset;
};

struct Tolerances {
  double dedup = 1e-12;       // vertex merging / collinearity, relative
  double constraint = 1e-9;   // halfspace satisfaction, relative
  double snap = 1e-12;        // snap-to-substrate threshold
};

// Dual V-rep / H-rep convex body in d = 2 or 3. 2D vertices are strictly
// convex ccw; halfspace i supports edge (i, i+1). Immutable after build.
class ConvexPolytope {
 public:
  static ConvexPolytope empty(int dim);
  // 2D body from vertices (hulled, dedup'd, ccw).
  static ConvexPolytope polygon(std::vector<Vec> verts, const Tolerances& tol = {});
  // 2D body from halfplanes via sorted-angle incremental intersection.
  static ConvexPolytope from_halfplanes(std::vector<Halfspace> hs, const Tolerances& tol = {});
  // 3D body from halfspaces whose region strictly contains the origin,
  // via the dual transform (points nu/offset, hull, dualize back).
  static ConvexPolytope from_halfspaces_dual(const std::vector<Halfspace>& hs,
                                             const Tolerances& tol = {});
  // 3D body from an explicit vertex/facet representation (deserialization).
  static ConvexPolytope from_facets(std::vector<Vec> verts, std::vector<std::vector<int>> facets,
                                    const Tolerances& tol = {});

  int dim() const { return dim_; }
  bool empty() const { return empty_; }
  double volume() const { return volume_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  // 3D facets; for 2D they are generated from consecutive vertex pairs.
  std::vector<Facet> facets() const;

  ConvexPolytope translated(const Vec& t) const;
  ConvexPolytope scaled(double s) const;  // about the origin
  // Intersection with one halfspace; new boundary vertices are snapped onto
  // the clip plane. Returns the empty polytope when the cut removes the body.
  ConvexPolytope clipped(const Halfspace& h, const Tolerances& tol = {}) const;

  double min_coord(int axis) const;
  double max_coord(int axis) const;
  Vec centroid() const;

  // Support function: max of x . nu over vertices, plus the attaining set.
  std::pair<double, std::vector<int>> support(const Vec& nu, double tol = 1e-9) const;

  // Total (d-1)-measure of the boundary pieces lying on {x_d = 0}.
  double contact_measure(const Tolerances& tol = {}) const;

  // Mutual V-rep/H-rep consistency; throws std::logic_error on violation.
  void validate(const Tolerances& tol = {}) const;

 private:
  ConvexPolytope() = default;
  void finalize_2d(const Tolerances& tol);
  void compute_volume();

  int dim_ = 2;
  bool empty_ = true;
  double volume_ = 0.0;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> halfspaces_;
  std::vector<Facet> facets_;  // 3D only
};

enum class Regime { CompleteDrying, PartialWetting, CompleteWetting };

struct RegimeLabel {
  Regime regime;
  double lower;  // -phi(e_d)
  double upper;  // phi(-e_d)
};

std::string to_string(Regime r);

// Closed boundary conventions: lambda >= phi(-e_d) dries, lambda <= -phi(e_d) wets.
RegimeLabel classify_regime(const Anisotropy& phi, double lambda);

// Intersection of {x . nu <= phi(nu)} over a direction set. Uniform angles in
// 2D, Fibonacci sphere in 3D; polytopal kinds contribute their exact facet
// normals so their Wulff sets come out exact.
ConvexPolytope build_wulff(const Anisotropy& phi, int n_directions, const Tolerances& tol = {});

// W intersected with {x_d >= -lambda}; empty iff lambda <= -phi(e_d).
ConvexPolytope winterbottom(const ConvexPolytope& W, double lambda, const Tolerances& tol = {});

// (v/|W_lambda|)^(1/d) (W_lambda + lambda e_d): volume v, resting on {x_d = 0}.
ConvexPolytope winterbottom_with_volume(const ConvexPolytope& W_lambda, double lambda, double v,
                                        const Tolerances& tol = {});

// Support-function density of W; equals the convex envelope of the density W
// was built from, and dominates it nowhere.
Anisotropy convex_envelope(const Anisotropy& phi, const ConvexPolytope& W);

// Max over contact-line points of |grad phi(nu) . (-e_d) - lambda|, nu the
// normal of the free facet adjacent to the contact boundary.
double young_law_check(const Anisotropy& phi, const ConvexPolytope& W_v, double lambda,
                       const Tolerances& tol = {});

}  // namespace wb
