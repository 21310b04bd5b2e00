#pragma once

#include <functional>
#include <random>
#include <vector>

#include "winterbottom/anisotropy.hpp"
#include "winterbottom/shape.hpp"

namespace wb {

struct DescentOptions {
  int max_iters = 100000;
  double armijo_c = 1e-4;
  double fd_step_rel = 1e-6;    // finite-difference step, relative to diameter
  double stall_rel = 1e-9;      // relative decrease threshold
  int stall_window = 10;
  int max_retries = 5;          // perturb-and-retry on degenerate polygons
  // Called with every iterate (vertex loop + energy); test hook.
  std::function<void(const std::vector<Vec>&, double)> on_iterate;
};

struct OptimizeResult {
  SubstrateShape shape;
  std::vector<double> trace;  // energy per iteration, non-increasing
  int iterations = 0;
  bool converged = false;
};

struct AnnealSchedule {
  double t0 = 0.5;
  double cooling = 0.99995;
  int steps = 200000;
  int trace_stride = 100;  // record the current energy every this many steps
};

struct AnnealResult {
  SubstrateShape shape;
  double best_energy = 0.0;
  int accepted = 0;
  std::vector<double> trace;  // current energy, sampled every trace_stride
};

struct OracleResult {
  double min_energy = 0.0;
  std::vector<PixelShape> minimizers;  // ties within 1e-12, canonical placement
  long long candidates = 0;            // (shape, lift) pairs evaluated
};

struct TrialOutcome {
  int trial = 0;
  double final_energy = 0.0;
  double asymmetry = 0.0;
};

struct TheoremReport {
  double reference_energy = 0.0;
  double min_energy = 0.0;
  double median_energy = 0.0;
  double best_asymmetry = 0.0;
  std::vector<TrialOutcome> trials;
  bool pass = false;
  SubstrateShape best_shape;        // lowest-energy trial
  std::vector<double> best_trace;   // its energy trace
};

struct VerifyOptions {
  int n_vertices = 64;
  int reference_directions = 1024;
  AnnealSchedule schedule{};
  double median_ratio_limit = 1.01;  // median <= limit * reference
  double asymmetry_fraction = 0.05;  // best asymmetry <= fraction * v
  int jobs = 1;
  bool force_anneal = false;  // anneal even for differentiable densities
};

// Clamp vertices onto the substrate and rescale about the centroid's ground
// projection so the area is exactly v. Keeps ccw order.
std::vector<Vec> project_polygon(std::vector<Vec> poly, double v);

// Edge-sum energy of a raw ccw vertex loop (fast path used by the solvers).
double polygon_energy(const std::vector<Vec>& poly, const Anisotropy& phi, double lambda);

// Star-shaped polygon resting on the substrate with n vertices and area v.
std::vector<Vec> random_star_polygon(std::mt19937_64& rng, int n_vertices, double v);

// Projected finite-difference descent with Armijo backtracking; the iterates
// keep volume v exactly and never leave the upper half-space.
OptimizeResult optimize_polygon(const Anisotropy& phi, double lambda, double v, int n_vertices,
                                const SubstrateShape& init, uint64_t seed,
                                const DescentOptions& opts = {});

// Metropolis search over single-vertex moves with volume re-projection after
// each proposal; deterministic given the seed. t0 == 0 is greedy descent.
AnnealResult anneal_polygon(const Anisotropy& phi, double lambda, double v, int n_vertices,
                            const AnnealSchedule& schedule, uint64_t seed);

// Exhaustive minimum over edge-connected polyominoes of n cells, canonical
// under horizontal translation, both resting on and lifted off the substrate.
OracleResult brute_force_pixels(const Anisotropy& phi, double lambda, int n_cells);

// Count of fixed polyominoes with n cells (enumeration self-check).
long long count_fixed_polyominoes(int n);

// Minimize from random starts and compare against the Winterbottom shape.
TheoremReport verify_theorem_main(const Anisotropy& phi, double lambda, double v, int trials,
                                  uint64_t seed, const VerifyOptions& opts = {});

}  // namespace wb
