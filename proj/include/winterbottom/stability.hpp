#pragma once

#include <string>
#include <vector>

#include "winterbottom/anisotropy.hpp"
#include "winterbottom/shape.hpp"

namespace wb {

struct StabilityRecord {
  std::string family;
  double param = 0.0;
  double asymmetry = 0.0;  // min over horizontal tau of |E delta (W(v)+tau)|
  double deficit = 0.0;    // F(E) - F(W(v))
  double ratio = 0.0;      // (asymmetry/v)^2 * F(W) / deficit
  bool ratio_valid = false;  // deficits below 1e-12 are excluded
  double tau_star = 0.0;
  std::string method;  // "clip" (exact) or "raster"
};

enum class PerturbationFamily { RectDistortion, VertexNoise, Shear };

struct SweepSpec {
  PerturbationFamily family = PerturbationFamily::RectDistortion;
  double param_min = 1.01;  // distortion t, noise amplitude, or shear factor
  double param_max = 2.0;
  bool log_spaced = false;
  int base_directions = 64;  // resolution of the base/reference polygon
  uint64_t seed = 1;
};

struct SweepResult {
  std::vector<StabilityRecord> records;
  double sup_ratio = 0.0;
};

PerturbationFamily family_from_string(const std::string& name);
std::string to_string(PerturbationFamily f);

// |A| + |B| - 2 |A intersect B|. Exact convex clipping when both shapes are
// convex; otherwise a substrate-parallel scanline at row height h (error
// below 4 h (perim A + perim B)).
double symmetric_difference_area(const SubstrateShape& A, const SubstrateShape& B, double h);

// Minimal symmetric difference against horizontal translates of a reference
// shape, via golden-section search bracketed by the bounding boxes; the
// returned tau carries E onto the reference. 2D only.
std::pair<double, double> asymmetry_to(const SubstrateShape& E, const SubstrateShape& reference,
                                       double raster_h = 0.0);

// Reference is the Winterbottom shape of volume v built at n_ref directions.
std::pair<double, double> asymmetry(const SubstrateShape& E, const Anisotropy& phi, double lambda,
                                    double v, int n_ref = 1024);

// Perturbation sweep around the Winterbottom optimum; returns the records and
// the empirical stability constant sup ratio.
SweepResult stability_sweep(const Anisotropy& phi, double lambda, double v, const SweepSpec& spec,
                            int n);

}  // namespace wb
