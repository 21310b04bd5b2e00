#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "winterbottom/optimize.hpp"
#include "winterbottom/polytope.hpp"
#include "winterbottom/stability.hpp"

using namespace wb;

namespace {

SubstrateShape unit_square_at(double x0) {
  return SubstrateShape::from_polygon({{x0, 0}, {x0 + 1, 0}, {x0 + 1, 1}, {x0, 1}});
}

SubstrateShape winterbottom_shape(const Anisotropy& phi, double lambda, double v, int n) {
  return SubstrateShape::from_polytope(
      winterbottom_with_volume(winterbottom(build_wulff(phi, n), lambda), lambda, v));
}

}  // namespace

TEST_CASE("symmetric difference of squares") {
  SubstrateShape A = unit_square_at(0.0);
  CHECK(symmetric_difference_area(A, A, 0) == doctest::Approx(0.0).epsilon(1e-12));

  SubstrateShape B = unit_square_at(5.0);
  CHECK(symmetric_difference_area(A, B, 0) == doctest::Approx(2.0).epsilon(1e-12));

  SubstrateShape C = unit_square_at(0.5);
  CHECK(symmetric_difference_area(A, C, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rasterized path stays within the documented error bound") {
  SubstrateShape A = unit_square_at(0.0);
  SubstrateShape C = unit_square_at(0.37);
  double exact = symmetric_difference_area(A, C, 0);

  // A microscopic dent forces the raster path without moving the area.
  std::vector<Vec> dented = {{0.37, 0}, {1.37, 0}, {1.37, 0.5}, {1.37 - 1e-9, 0.500001},
                             {1.37, 0.500002}, {1.37, 1}, {0.37, 1}};
  SubstrateShape Cd = SubstrateShape::from_polygons({PolygonWithHoles{dented, {}}});
  CHECK_FALSE(Cd.convex());
  for (double h : {0.01, 0.002}) {
    double approx = symmetric_difference_area(A, Cd, h);
    double bound = 4.0 * h * (A.perimeter() + Cd.perimeter());
    CHECK(std::abs(approx - exact) <= bound);
  }
}

TEST_CASE("asymmetry of an exact translate vanishes") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  SubstrateShape W = winterbottom_shape(l1, 0.5, 1.0, 64);
  SubstrateShape E = W.translated({0.7, 0});
  auto [val, tau] = asymmetry(E, l1, 0.5, 1.0);
  CHECK(val <= 1e-9);
  CHECK(tau == doctest::Approx(-0.7).epsilon(1e-5));
}

TEST_CASE("rectangle distortion fixture") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  SubstrateShape W = winterbottom_shape(l1, 0.5, 1.0, 64);
  const double t = 1.2;
  std::vector<Vec> poly = W.polygons()[0].outer;
  for (Vec& p : poly) {
    p.x *= t;
    p.y /= t;
  }
  SubstrateShape E = SubstrateShape::from_polygon(poly);
  auto [val, tau] = asymmetry(E, l1, 0.5, 1.0);
  CHECK(val == doctest::Approx(2.0 - 2.0 / t).epsilon(1e-9));
  // The narrow reference slides inside the widened shape at constant overlap,
  // so tau only needs to land on that plateau.
  CHECK(std::abs(tau) <= (t - 1.0) / std::sqrt(3.0) + 1e-9);

  double deficit = energy_F(E, l1, 0.5).total - energy_F(W, l1, 0.5).total;
  CHECK(deficit == doctest::Approx(std::sqrt(3.0) * (t + 1.0 / t - 2.0)).epsilon(1e-12));
}

TEST_CASE("half-disk against the crystalline optimum (raster fixture)") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  double r = std::sqrt(2.0 / M_PI);
  std::vector<Vec> arc;
  for (int k = 0; k <= 512; ++k) {
    double a = M_PI * k / 512;
    arc.push_back({r * std::cos(a), r * std::sin(a)});
  }
  SubstrateShape halfdisk = SubstrateShape::from_polygon(arc);
  auto [val, tau] = asymmetry(halfdisk, l1, 0.5, halfdisk.volume());
  // Closed form: overlap of the rectangle [-a,a]x[0,h] with the half-disk is
  // a sqrt(r^2-a^2) + r^2 asin(a/r).
  double a = 1.0 / std::sqrt(3.0);
  double overlap = a * std::sqrt(r * r - a * a) + r * r * std::asin(a / r);
  CHECK(val == doctest::Approx(2.0 - 2.0 * overlap).epsilon(2e-3));
  CHECK(val == doctest::Approx(0.334029540).epsilon(1e-6));  // regression
  CHECK(std::abs(tau) <= 1e-6);
  CHECK(val > 0.0);
}

TEST_CASE("asymmetry preconditions") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  SubstrateShape sq = unit_square_at(0.0);
  CHECK_THROWS_AS(asymmetry(sq, l2, -1.5, 1.0, 64), RegimeError);
  CHECK_THROWS_AS(asymmetry(sq, l2, 0.0, 2.0, 64), std::invalid_argument);
}

TEST_CASE("translation invariance of the asymmetry") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  SubstrateShape W = winterbottom_shape(l2, 0.0, 1.0, 256);
  std::vector<Vec> poly = W.polygons()[0].outer;
  for (Vec& p : poly) {
    p.x *= 1.15;
    p.y /= 1.15;
  }
  SubstrateShape E = SubstrateShape::from_polygon(poly);
  auto [v0, t0] = asymmetry(E, l2, 0.0, 1.0, 256);
  auto [v1, t1] = asymmetry(E.translated({2.5, 0}), l2, 0.0, 1.0, 256);
  CHECK(std::abs(v1 - v0) <= 2e-6 * E.diameter());
  CHECK(t1 == doctest::Approx(t0 - 2.5).epsilon(1e-4));
}

TEST_CASE("scaling covariance of the stability ratio") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  const double t = 1.3, r = 1.7;
  auto ratio_at = [&](double scale) {
    double v = scale * scale;
    SubstrateShape W = winterbottom_shape(l1, 0.5, v, 64);
    std::vector<Vec> poly = W.polygons()[0].outer;
    for (Vec& p : poly) {
      p.x *= t;
      p.y /= t;
    }
    SubstrateShape E = SubstrateShape::from_polygon(poly);
    double Fw = energy_F(W, l1, 0.5).total;
    double deficit = energy_F(E, l1, 0.5).total - Fw;
    double asym = asymmetry_to(E, W).first;
    return (asym / v) * (asym / v) * Fw / deficit;
  };
  double r1 = ratio_at(1.0);
  double r2 = ratio_at(r);
  CHECK(std::abs(r1 - r2) <= 1e-8 * std::max(1.0, std::abs(r1)));
}

TEST_CASE("rectangle-distortion sweep matches the closed form") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  SweepSpec spec;
  spec.family = PerturbationFamily::RectDistortion;
  spec.param_min = 1.01;
  spec.param_max = 2.0;
  SweepResult res = stability_sweep(l1, 0.5, 1.0, spec, 20);
  REQUIRE(res.records.size() == 20);
  for (const StabilityRecord& rec : res.records) {
    CHECK(rec.deficit > 0.0);
    CHECK(rec.ratio_valid);
    CHECK(std::isfinite(rec.ratio));
    // ratio(t) == 8 / t for this family.
    CHECK(rec.ratio == doctest::Approx(8.0 / rec.param).epsilon(1e-6));
    CHECK(rec.asymmetry >= 0.0);
    CHECK(rec.asymmetry <= 2.0);
    CHECK(rec.method == "clip");
  }
  CHECK(res.sup_ratio == doctest::Approx(8.0 / 1.01).epsilon(1e-6));

  // Log-log slope of asymmetry^2 against deficit on the small half.
  std::vector<double> lx, ly;
  for (int i = 0; i < 10; ++i) {
    lx.push_back(std::log(res.records[i].deficit));
    ly.push_back(2.0 * std::log(res.records[i].asymmetry));
  }
  double slope = wbtest::fit_slope(lx, ly);
  CHECK(slope >= 0.8);
  CHECK(slope <= 1.2);
}

TEST_CASE("the unperturbed optimum is excluded from ratios") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  SweepSpec spec;
  spec.family = PerturbationFamily::RectDistortion;
  spec.param_min = 1.0;  // t = 1 is the optimum itself
  spec.param_max = 1.0;
  SweepResult res = stability_sweep(l1, 0.5, 1.0, spec, 2);
  for (const StabilityRecord& rec : res.records) {
    CHECK(rec.deficit <= 1e-12);
    CHECK_FALSE(rec.ratio_valid);
  }
}

TEST_CASE("vertex-noise sweep keeps ratios bounded") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  SweepSpec spec;
  spec.family = PerturbationFamily::VertexNoise;
  spec.param_min = 0.01;
  spec.param_max = 0.01;
  spec.seed = 3;
  SweepResult res = stability_sweep(l2, 0.0, 1.0, spec, 50);
  REQUIRE(res.records.size() >= 45);  // degenerate perturbations may be skipped
  std::vector<double> ratios;
  for (const StabilityRecord& rec : res.records) {
    CHECK(rec.deficit >= -1e-9);
    if (rec.ratio_valid) ratios.push_back(rec.ratio);
  }
  REQUIRE(ratios.size() >= 40);
  std::sort(ratios.begin(), ratios.end());
  double median = ratios[ratios.size() / 2];
  for (double rr : ratios) CHECK(rr <= 10.0 * median);
}

TEST_CASE("zero asymmetry iff zero deficit on a mixed corpus") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  SubstrateShape W = winterbottom_shape(l2, 0.3, 1.0, 256);
  double Fw = energy_F(W, l2, 0.3).total;

  // Translates: both sides vanish.
  for (double dx : {0.0, -1.25, 3.0}) {
    SubstrateShape E = W.translated({dx, 0});
    double asym = asymmetry_to(E, W).first;
    double deficit = energy_F(E, l2, 0.3).total - Fw;
    CHECK(asym <= 1e-6);
    CHECK(std::abs(deficit) <= 1e-6 * Fw);
  }
  // Genuine perturbations: both sides are positive.
  for (double t : {1.05, 1.3}) {
    std::vector<Vec> poly = W.polygons()[0].outer;
    for (Vec& p : poly) {
      p.x *= t;
      p.y /= t;
    }
    SubstrateShape E = SubstrateShape::from_polygon(poly);
    double asym = asymmetry_to(E, W).first;
    double deficit = energy_F(E, l2, 0.3).total - Fw;
    CHECK(asym > 1e-6);
    CHECK(deficit > 1e-6 * Fw);
  }
}

TEST_CASE("shear sweep stays quadratic near the optimum") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  SweepSpec spec;
  spec.family = PerturbationFamily::Shear;
  spec.param_min = 0.02;
  spec.param_max = 0.5;
  spec.log_spaced = true;
  SweepResult res = stability_sweep(l2, 0.2, 1.0, spec, 16);
  REQUIRE(res.records.size() == 16);
  std::vector<double> lx, ly;
  for (int i = 0; i < 8; ++i) {
    CHECK(res.records[i].deficit >= -1e-9);
    lx.push_back(std::log(res.records[i].deficit));
    ly.push_back(2.0 * std::log(res.records[i].asymmetry));
  }
  double slope = wbtest::fit_slope(lx, ly);
  CHECK(slope >= 0.8);
  CHECK(slope <= 1.2);
}
