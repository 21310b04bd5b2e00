#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "winterbottom/shape.hpp"

using namespace wb;

namespace {

SubstrateShape rect_on_h(double w, double h) {
  return SubstrateShape::from_polygon({{-w / 2, 0}, {w / 2, 0}, {w / 2, h}, {-w / 2, h}});
}

SubstrateShape halfdisk_on_h(double r, int n) {
  std::vector<Vec> arc;
  for (int k = 0; k <= n; ++k) {
    double a = M_PI * k / n;
    arc.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return SubstrateShape::from_polygon(arc);
}

}  // namespace

TEST_CASE("energy_F on hand-computed shapes") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  // Rectangle [-1/sqrt3, 1/sqrt3] x [0, sqrt3/2]: edge sum 1.5 w + 2 h.
  double w = 2.0 / std::sqrt(3.0), h = std::sqrt(3.0) / 2.0;
  SubstrateShape rect = rect_on_h(w, h);
  EnergyBreakdown b = energy_F(rect, l1, 0.5);
  CHECK(b.total == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
  CHECK(b.contact_measure == doctest::Approx(w).epsilon(1e-14));

  // Half-disk of area 1, polygonized at 512 edges.
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  SubstrateShape halfdisk = halfdisk_on_h(std::sqrt(2.0 / M_PI), 512);
  EnergyBreakdown hb = energy_F(halfdisk, l2, 0.0);
  CHECK(hb.total == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-3));

  // Unit square with negative adhesion.
  SubstrateShape sq = rect_on_h(1.0, 1.0);
  EnergyBreakdown sb = energy_F(sq, l1, -0.5);
  CHECK(sb.free_surface == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sb.contact == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(sb.total == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(sb.total == doctest::Approx(sb.free_surface + sb.contact).epsilon(1e-12));
}

TEST_CASE("perimeter_P and the auxiliary-density identities") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  Anisotropy mod = make_phi_lambda(l1, 0.5);

  // Resting square: no downward normal off the substrate, so P equals F.
  SubstrateShape sq = rect_on_h(1.0, 1.0);
  double P = perimeter_P(sq, mod);
  CHECK(P == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(P == doctest::Approx(energy_F(sq, l1, 0.5).total).epsilon(1e-12));

  // Lifted square: its bottom edge has normal exactly -e_2 off the
  // substrate, so P stays strictly below F.
  SubstrateShape lifted = SubstrateShape::from_polygon({{0, 1}, {1, 1}, {1, 2}, {0, 2}});
  double Pl = perimeter_P(lifted, mod);
  double Fl = energy_F(lifted, l1, 0.5).total;
  CHECK(Pl == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(Fl == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(Pl < Fl);

  // Shift invariance: P under (phi_x0)_lambda' matches P under phi_lambda.
  std::mt19937_64 rng(41);
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  for (int i = 0; i < 100; ++i) {
    SubstrateShape E = wbtest::random_shape(rng, 16, i % 2 == 0);
    for (int k = 0; k < 10; ++k) {
      Vec x0 = random_unit(rng, 2) * 0.4;
      double lambda = -0.3;
      double lambda_p = lambda + x0.y;
      Anisotropy shifted = make_phi_lambda(make_phi_shifted(l2, x0), lambda_p);
      Anisotropy plain = make_phi_lambda(l2, lambda);
      double a = perimeter_P(E, shifted);
      double bb = perimeter_P(E, plain);
      CHECK(std::abs(a - bb) <= 1e-10 * std::max(1.0, std::abs(bb)));
    }
  }
}

TEST_CASE("Jensen lower bound") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  SubstrateShape sq = rect_on_h(1.0, 1.0);
  auto [lhs, rhs] = jensen_lower_bound(sq, l2);
  CHECK(lhs == doctest::Approx(3.0));
  CHECK(rhs == doctest::Approx(1.0));
  CHECK(lhs >= rhs - 1e-9);

  auto [alhs, arhs] = jensen_lower_bound(halfdisk_on_h(1.0, 256), l2);
  CHECK(alhs == doctest::Approx(M_PI).epsilon(1e-3));
  CHECK(arhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(alhs >= arhs - 1e-9);

  std::mt19937_64 rng(43);
  for (int i = 0; i < 1000; ++i) {
    SubstrateShape E = wbtest::random_shape(rng, 14, i % 3 != 0);
    auto [l, r] = jensen_lower_bound(E, l2);
    CHECK(l >= r - 1e-9);
  }
}

TEST_CASE("rescale and the scaling law") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  SubstrateShape sq = rect_on_h(1.0, 1.0);
  SubstrateShape same = rescale(sq, 1.0, {0, 0});
  CHECK(same.volume() == doctest::Approx(sq.volume()).epsilon(1e-15));

  SubstrateShape doubled = rescale(sq, 2.0, {0, 0});
  CHECK(energy_F(doubled, l1, 0.3).total ==
        doctest::Approx(2.0 * energy_F(sq, l1, 0.3).total).epsilon(1e-14));

  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> rdist(0.1, 3.0);
  Anisotropy w = Anisotropy::weighted({{2, 0.3}, {0, 1}});
  for (int i = 0; i < 100; ++i) {
    SubstrateShape E = wbtest::random_shape(rng, 20, true);
    double r = rdist(rng);
    double FE = energy_F(E, w, 0.4).total;
    double FrE = energy_F(rescale(E, r, {0.7, 0}), w, 0.4).total;
    CHECK(std::abs(FrE - r * FE) <= 1e-10 * std::max(1.0, FE));
    CHECK(rescale(E, r, {0.7, 0}).volume() == doctest::Approx(r * r * E.volume()).epsilon(1e-12));
  }

  CHECK_THROWS_AS(rescale(sq, 0.37, {0, 1}), std::invalid_argument);  // anchor off H
  SubstrateShape small = rescale(sq, 0.37, {0.2, 0});
  CHECK(std::abs(energy_F(small, l1, 0.2).total - 0.37 * energy_F(sq, l1, 0.2).total) <= 1e-10);
}

TEST_CASE("wetting demo cylinders") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);

  auto table = wetting_demo(l2, -1.5, 1.0, {1, 10, 100});
  // F(E_R) = 2/R + R + lambda R = 2/R - 0.5 R.
  CHECK(table[0].second.total == doctest::Approx(2.0 - 0.5).epsilon(1e-12));
  CHECK(table[1].second.total == doctest::Approx(0.2 - 5.0).epsilon(1e-12));
  CHECK(table[2].second.total == doctest::Approx(0.02 - 50.0).epsilon(1e-12));
  CHECK(table[2].second.total < -40.0);
  CHECK(table[0].second.total > table[1].second.total);
  CHECK(table[1].second.total > table[2].second.total);

  auto crit = wetting_demo(l2, -1.0, 1.0, {100});
  CHECK(crit[0].second.total == doctest::Approx(0.02).epsilon(1e-12));

  auto unit = wetting_demo(l2, 0.0, 1.0, {1});
  CHECK(unit[0].second.total == doctest::Approx(3.0).epsilon(1e-12));

  // 3D box: top R^2 + sides 4 R h + contact lambda R^2.
  Anisotropy l23 = Anisotropy::pnorm(2, 3);
  auto t3 = wetting_demo(l23, -0.25, 1.0, {2});
  double R = 2, h3 = 1.0 / (R * R);
  CHECK(t3[0].second.total == doctest::Approx(R * R + 4 * R * h3 - 0.25 * R * R).epsilon(1e-12));
}

TEST_CASE("pixel energies") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  Anisotropy l2 = Anisotropy::pnorm(2, 2);

  PixelShape rect42 = PixelShape::from_rows({"1111", "1111"});
  CHECK(pixel_energy(rect42, l1, 0.0).total == doctest::Approx(8.0).epsilon(1e-14));

  PixelShape cell = PixelShape::from_rows({"1"});
  EnergyBreakdown cb = pixel_energy(cell, l2, 0.5);
  CHECK(cb.free_surface == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(cb.total == doctest::Approx(3.5).epsilon(1e-14));

  PixelShape tower = PixelShape::from_rows({"11", "11", "11", "11"});
  CHECK(pixel_energy(tower, l1, 0.0).total == doctest::Approx(10.0).epsilon(1e-14));

  // Lifted 2x2 block: bottom edges pay phi instead of lambda.
  PixelShape lifted = PixelShape::from_rows({"00", "11", "11"});
  CHECK(pixel_energy(lifted, l1, 1.0).total == doctest::Approx(8.0).epsilon(1e-14));
  PixelShape grounded = PixelShape::from_rows({"11", "11"});
  CHECK(pixel_energy(grounded, l1, 1.0).total == doctest::Approx(8.0).epsilon(1e-14));

  PixelShape disconnected = PixelShape::from_rows({"101"});
  CHECK_THROWS_AS(pixel_energy(disconnected, l1, 0.0), std::invalid_argument);
}

TEST_CASE("pixel shapes agree with their traced polygons") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  Anisotropy w = Anisotropy::weighted({{2, 0}, {0, 1}});
  std::mt19937_64 rng(53);
  for (int i = 0; i < 50; ++i) {
    PixelShape P = wbtest::random_polyomino(rng, 3 + static_cast<int>(rng() % 10));
    SubstrateShape S = pixels_to_shape(P);
    CHECK(S.volume() == doctest::Approx(P.count()).epsilon(1e-12));
    for (const Anisotropy* phi : {&l1, &l2, &w}) {
      for (double lambda : {-0.5, 0.0, 0.7}) {
        double a = pixel_energy(P, *phi, lambda).total;
        double b = energy_F(S, *phi, lambda).total;
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
  }

  // A ring encloses a hole.
  PixelShape ring = PixelShape::from_rows({"111", "101", "111"});
  SubstrateShape rs = pixels_to_shape(ring);
  CHECK(rs.volume() == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(rs.polygons().size() == 1);
  CHECK(rs.polygons()[0].holes.size() == 1);
  CHECK(pixel_energy(ring, l1, 0.25).total ==
        doctest::Approx(energy_F(rs, l1, 0.25).total).epsilon(1e-14));
}

TEST_CASE("Gauss-Green residual and positivity") {
  std::mt19937_64 rng(59);
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  for (int i = 0; i < 200; ++i) {
    SubstrateShape E = wbtest::random_shape(rng, 24, i % 2 == 0);
    Vec gg{};
    double per = 0.0;
    for (const BoundaryFacet& f : E.boundary()) {
      gg += f.normal * f.measure;
      per += f.measure;
    }
    CHECK(norm(gg) <= 1e-9 * per);
    // lambda > -phi(e_2) keeps the energy positive.
    for (double lambda : {-0.99, -0.2, 0.0, 0.8}) {
      CHECK(energy_F(E, l2, lambda).total > 0.0);
    }
  }
}

TEST_CASE("substrate snapping and validation") {
  // Vertices within 1e-12 of the substrate snap onto it.
  SubstrateShape s = SubstrateShape::from_polygon({{0, 5e-13}, {1, -5e-13}, {1, 1}, {0, 1}});
  CHECK(s.contact_measure() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(SubstrateShape::from_polygon({{0, -0.5}, {1, -0.5}, {1, 1}, {0, 1}}),
                  std::invalid_argument);
  // Self-intersecting bowtie.
  CHECK_THROWS_AS(SubstrateShape::from_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}),
                  std::invalid_argument);
  // Hole outside its outer boundary.
  PolygonWithHoles pw;
  pw.outer = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  pw.holes = {{{2, 2}, {3, 2}, {2.5, 3}}};
  CHECK_THROWS_AS(SubstrateShape::from_polygons({pw}), std::invalid_argument);

  // A hole contributes free surface.
  PolygonWithHoles withhole;
  withhole.outer = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  withhole.holes = {{{1, 1}, {3, 1}, {3, 3}, {1, 3}}};
  SubstrateShape hs = SubstrateShape::from_polygons({withhole});
  CHECK(hs.volume() == doctest::Approx(12.0));
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  EnergyBreakdown hb = energy_F(hs, l1, 0.25);
  CHECK(hb.free_surface == doctest::Approx(12.0 + 8.0).epsilon(1e-14));
  CHECK(hb.contact_measure == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("3D energies on boxes") {
  Anisotropy l2 = Anisotropy::pnorm(2, 3);
  SubstrateShape box = SubstrateShape::box(3, 2.0, 1.0);
  EnergyBreakdown b = energy_F(box, l2, 0.5);
  // top 4, sides 4 * (2*1), contact 0.5 * 4
  CHECK(b.free_surface == doctest::Approx(4.0 + 8.0).epsilon(1e-12));
  CHECK(b.contact == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(box.volume() == doctest::Approx(4.0).epsilon(1e-12));
}
