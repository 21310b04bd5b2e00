#pragma once

#include <string>
#include <utility>
#include <vector>

#include "winterbottom/anisotropy.hpp"
#include "winterbottom/polytope.hpp"
#include "winterbottom/vec.hpp"

namespace wb {

struct PolygonWithHoles {
  std::vector<Vec> outer;               // ccw
  std::vector<std::vector<Vec>> holes;  // cw, strictly interior
};

struct BoundaryFacet {
  Vec normal;     // unit outward
  double measure;  // edge length (2D) or facet area (3D)
  bool on_substrate;
};

struct EnergyBreakdown {
  double free_surface = 0.0;    // integral of phi(normal) off the substrate
  double contact = 0.0;         // lambda * contact measure
  double total = 0.0;
  double contact_measure = 0.0;
};

// Candidate shape in the closed upper half-space: polygons with holes in 2D,
// a convex polytope in 3D. Vertices within the snap tolerance of the
// substrate are snapped onto it. Immutable after construction.
class SubstrateShape {
 public:
  SubstrateShape() = default;  // empty placeholder; build via the factories
  static SubstrateShape from_polygons(std::vector<PolygonWithHoles> polys,
                                      const Tolerances& tol = {});
  static SubstrateShape from_polygon(std::vector<Vec> outer, const Tolerances& tol = {});
  static SubstrateShape from_polytope(const ConvexPolytope& body, const Tolerances& tol = {});
  // Axis-aligned box (0, w_1) x ... x (0, w_{d-1}) x (0, h) resting on the substrate.
  static SubstrateShape box(int dim, double width, double height, const Tolerances& tol = {});

  int dim() const { return dim_; }
  double volume() const { return volume_; }
  const std::vector<PolygonWithHoles>& polygons() const { return polys_; }
  const ConvexPolytope& polytope() const { return solid_; }
  bool convex() const { return convex_; }

  std::vector<BoundaryFacet> boundary() const;
  double contact_measure() const;
  double perimeter() const;
  double diameter() const;  // bounding-box diagonal
  SubstrateShape translated(const Vec& t, const Tolerances& tol = {}) const;

 private:
  int dim_ = 2;
  bool convex_ = false;
  double volume_ = 0.0;
  std::vector<PolygonWithHoles> polys_;
  ConvexPolytope solid_ = ConvexPolytope::empty(3);
  Tolerances tol_{};
};

// Substrate capillarity energy: phi over the free boundary plus
// lambda * (contact measure). Exact edge/facet sums.
EnergyBreakdown energy_F(const SubstrateShape& E, const Anisotropy& phi, double lambda);

// Unconstrained anisotropic perimeter: psi over the whole boundary,
// including contact facets where the normal is exactly -e_d.
double perimeter_P(const SubstrateShape& E, const Anisotropy& psi);

// (free-surface term, phi(e_d) * contact measure); the first dominates.
std::pair<double, double> jensen_lower_bound(const SubstrateShape& E, const Anisotropy& phi);

// x -> anchor + r (x - anchor) with the anchor on the substrate.
SubstrateShape rescale(const SubstrateShape& E, double r, const Vec& anchor,
                       const Tolerances& tol = {});

// Energies of the cylinders E_R = (0,R)^{d-1} x (0, v/R^{d-1}).
std::vector<std::pair<double, EnergyBreakdown>> wetting_demo(const Anisotropy& phi, double lambda,
                                                             double v,
                                                             const std::vector<double>& R_list);

// Edge-connected set of unit cells in the upper half-plane; row 0 touches the
// substrate (leading empty rows encode lifted placements).
struct PixelShape {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> cells;  // row-major, cells[y * width + x]

  bool filled(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height && cells[y * width + x] != 0;
  }
  int count() const;
  bool edge_connected() const;
  static PixelShape from_rows(const std::vector<std::string>& rows);
  std::vector<std::string> to_rows() const;
};

// Unit boundary edges classified by outward normal; bottom edges at height 0
// are contact, everything else pays phi.
EnergyBreakdown pixel_energy(const PixelShape& P, const Anisotropy& phi, double lambda);

// Trace the cell boundary into polygons with holes (collinear runs merged).
SubstrateShape pixels_to_shape(const PixelShape& P, const Tolerances& tol = {});

// True if segments pq and rs cross at an interior point or overlap
// collinearly; shared endpoints do not count.
bool segments_properly_intersect(const Vec& p, const Vec& q, const Vec& r, const Vec& s);

// Self-intersection test for a closed polygon (adjacent edges excluded).
bool polygon_simple(const std::vector<Vec>& poly);

}  // namespace wb
