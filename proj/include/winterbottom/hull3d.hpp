#pragma once

#include <stdexcept>
#include <vector>

#include "winterbottom/vec.hpp"

namespace wb {

// Hull construction could not find a full-dimensional simplex, or the
// intermediate geometry collapsed below tolerance.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HullTriangle {
  int a, b, c;  // indices into the input point set, ccw seen from outside
};

// Convex hull of a 3D point set (quickhull with conflict lists). Points
// within eps of a supporting plane are treated as interior and dropped.
std::vector<HullTriangle> convex_hull_3d(const std::vector<Vec>& pts, double eps_rel = 1e-12);

}  // namespace wb
