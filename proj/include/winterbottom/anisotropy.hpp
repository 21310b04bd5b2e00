#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <vector>

#include "winterbottom/vec.hpp"

namespace wb {

// Requested operation needs a gradient where the density has none
// (polytopal kinds, p in {1, inf}, lambda-modified densities).
class NotDifferentiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An adhesion coefficient outside the admissible interval for the operation.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AnisotropyKind {
  SupportOfPolytope,  // phi(nu) = max_i v_i . nu over a vertex list
  WeightedNorm,       // phi(nu) = |A nu|, A invertible
  PNorm,              // phi(nu) = |nu|_p, p in [1, inf]
  CrystallineMax,     // phi(nu) = max_i w_i . nu, 0 interior to conv{w_i}
  Modified,           // base density with a lambda and/or shift modification
};

struct ModificationRecord {
  bool lambda_modified = false;
  double lambda = 0.0;
  bool shifted = false;
  Vec x0{};
};

// Direction counts for sampled estimates (coercivity, interiority checks).
struct SamplingConfig {
  int directions_2d = 4096;
  int directions_3d = 8192;
  int count(int dim) const { return dim == 2 ? directions_2d : directions_3d; }
};

using Mat3 = std::array<std::array<double, 3>, 3>;

// A positively 1-homogeneous surface tension density on R^d, d in {2, 3}.
// Immutable after construction; safe to share across threads.
class Anisotropy {
 public:
  static Anisotropy pnorm(double p, int dim);
  static Anisotropy weighted(const std::vector<std::vector<double>>& A);
  static Anisotropy support_of_polytope(std::vector<Vec> vertices, int dim,
                                        const SamplingConfig& cfg = {});
  static Anisotropy crystalline_max(std::vector<Vec> generators, int dim,
                                    const SamplingConfig& cfg = {});

  double eval(const Vec& nu) const;
  double operator()(const Vec& nu) const { return eval(nu); }

  // Gradient where defined; Euler's identity grad(nu).nu == eval(nu) holds.
  Vec gradient(const Vec& nu) const;
  bool differentiable() const;

  AnisotropyKind kind() const { return kind_; }
  int dim() const { return dim_; }

  // Cached lower-bound constant c with phi(nu) >= c |nu|; <= 0 when the
  // density fails to be coercive (lambda modification with lambda <= 0).
  double coercivity() const { return coercivity_; }
  bool coercive() const { return coercivity_ > 0.0; }

  const ModificationRecord* modification() const {
    return kind_ == AnisotropyKind::Modified ? &mod_ : nullptr;
  }
  const Anisotropy& base() const { return base_ ? *base_ : *this; }
  // Innermost unmodified density of a modification chain.
  const Anisotropy& root() const;

  // Facet normals that make the Wulff construction exact for polytopal kinds
  // (support, crystalline, p in {1, inf}); empty for smooth kinds.
  std::vector<Vec> exact_normals() const;

  // A point of W_phi with maximal last coordinate (unique for smooth kinds,
  // any maximizer otherwise). Unmodified densities only.
  Vec top_support_point() const;

  // Payload accessors (serialization).
  double pnorm_p() const { return p_; }
  const Mat3& weight_matrix() const { return A_; }
  const std::vector<Vec>& points() const { return points_; }

 private:
  Anisotropy() = default;
  void estimate_coercivity(const SamplingConfig& cfg);

  AnisotropyKind kind_ = AnisotropyKind::PNorm;
  int dim_ = 2;
  double coercivity_ = 0.0;
  double p_ = 2.0;
  Mat3 A_{};
  std::vector<Vec> points_;
  std::shared_ptr<const Anisotropy> base_;
  ModificationRecord mod_;

  friend Anisotropy make_phi_lambda(const Anisotropy&, double, const SamplingConfig&);
  friend Anisotropy make_phi_shifted(const Anisotropy&, const Vec&, const SamplingConfig&);
};

// Piecewise modification: lambda * t on the exact ray nu = -t e_d (t > 0),
// phi(nu) elsewhere. Not convex in general; non-coercive when lambda <= 0.
Anisotropy make_phi_lambda(const Anisotropy& phi, double lambda,
                           const SamplingConfig& cfg = {});

// Linear shift phi_{x0}(nu) = phi(nu) - x0 . nu. Requires x0 interior to
// W_phi; rejected when the sampled coercivity estimate is not positive.
Anisotropy make_phi_shifted(const Anisotropy& phi, const Vec& x0,
                            const SamplingConfig& cfg = {});

// Sampled estimate of min over unit nu of phi(nu) - x0 . nu.
double shifted_coercivity_estimate(const Anisotropy& phi, const Vec& x0,
                                   const SamplingConfig& cfg = {});

// A shift x0 interior to W_phi with lambda' = lambda + x0 . e_d in
// (0, phi_{x0}(-e_d)); lambda must lie in (-phi(e_d), phi(-e_d)).
Vec choose_x0(const Anisotropy& phi, double lambda, const SamplingConfig& cfg = {});

}  // namespace wb
