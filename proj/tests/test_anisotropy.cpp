#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "winterbottom/anisotropy.hpp"
#include "winterbottom/polytope.hpp"

using namespace wb;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("eval on the basic kinds") {
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  CHECK(l1.eval({1, 1}) == 2.0);

  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  Anisotropy mod = make_phi_lambda(l2, 0.5);
  CHECK(mod.eval({0, -2}) == 1.0);

  // Direct enumeration over the generator set.
  std::vector<Vec> gens = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  Anisotropy cry = Anisotropy::crystalline_max(gens, 2);
  Vec nu{1, 0};
  double expected = -1e300;
  for (const Vec& w : gens) expected = std::max(expected, dot(w, nu));
  CHECK(expected == 1.0);
  CHECK(cry.eval(nu) == expected);

  Anisotropy linf = Anisotropy::pnorm(kInf, 2);
  CHECK(linf.eval({3, -4}) == 4.0);
  CHECK(linf.eval({0, 0}) == 0.0);

  CHECK_THROWS_AS(l2.eval({std::nan(""), 0}), std::invalid_argument);
  CHECK_THROWS_AS(l2.eval({kInf, 1}), std::invalid_argument);
}

TEST_CASE("gradients and the Euler identity") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  Vec g = l2.gradient({0, 1});
  CHECK(g.x == doctest::Approx(0.0));
  CHECK(g.y == doctest::Approx(1.0));
  g = l2.gradient({3, 4});
  CHECK(g.x == doctest::Approx(0.6));
  CHECK(g.y == doctest::Approx(0.8));

  Anisotropy w = Anisotropy::weighted({{2, 0}, {0, 1}});
  g = w.gradient({0, 1});
  CHECK(g.x == doctest::Approx(0.0));
  CHECK(g.y == doctest::Approx(1.0));

  // Central finite differences, h = 1e-6.
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    Vec nu = random_unit(rng, 2) * 2.0;
    Vec grad = w.gradient(nu);
    for (int c = 0; c < 2; ++c) {
      Vec p = nu, m = nu;
      p[c] += h;
      m[c] -= h;
      double fd = (w.eval(p) - w.eval(m)) / (2 * h);
      CHECK(grad[c] == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  // Euler identity where the gradient exists.
  for (const Anisotropy& phi :
       {Anisotropy::pnorm(2, 2), Anisotropy::pnorm(3.5, 2), Anisotropy::weighted({{2, 1}, {0, 1}}),
        Anisotropy::pnorm(1.3, 3)}) {
    for (int i = 0; i < 200; ++i) {
      Vec nu = random_unit(rng, phi.dim()) * 3.0;
      CHECK(dot(phi.gradient(nu), nu) == doctest::Approx(phi.eval(nu)).epsilon(1e-10));
    }
  }

  CHECK_THROWS_AS(Anisotropy::pnorm(1, 2).gradient({1, 1}), NotDifferentiable);
  CHECK_THROWS_AS(Anisotropy::pnorm(kInf, 2).gradient({1, 0}), NotDifferentiable);
  Anisotropy cry = Anisotropy::crystalline_max({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, 2);
  CHECK_THROWS_AS(cry.gradient({1, 0}), NotDifferentiable);
  CHECK_THROWS_AS(make_phi_lambda(Anisotropy::pnorm(2, 2), 0.5).gradient({1, 0}),
                  NotDifferentiable);
}

TEST_CASE("positive 1-homogeneity, all kinds") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> tdist(1e-3, 10.0);
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  std::vector<Anisotropy> phis = {
      Anisotropy::pnorm(1, 2),
      Anisotropy::pnorm(2, 2),
      Anisotropy::pnorm(kInf, 2),
      Anisotropy::pnorm(1.7, 3),
      Anisotropy::weighted({{2, 0.3}, {0, 1}}),
      Anisotropy::crystalline_max({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, 2),
      Anisotropy::support_of_polytope({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, 2),
      make_phi_lambda(l2, 0.5),
      make_phi_shifted(l2, {0.1, 0.2}),
      make_phi_lambda(make_phi_shifted(l2, {0.1, 0.2}), 0.4),
  };
  for (const Anisotropy& phi : phis) {
    for (int i = 0; i < 1000; ++i) {
      Vec nu = random_unit(rng, phi.dim());
      double t = tdist(rng);
      double a = phi.eval(nu * t);
      double b = t * phi.eval(nu);
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    }
    // The downward ray scales too.
    Vec down = axis_last(phi.dim(), -1.0);
    double t = 3.25;
    CHECK(std::abs(phi.eval(down * t) - t * phi.eval(down)) <= 1e-12 * (1 + phi.eval(down * t)));
  }
}

TEST_CASE("midpoint convexity for the convex kinds") {
  std::mt19937_64 rng(13);
  std::vector<Anisotropy> phis = {
      Anisotropy::pnorm(1, 2), Anisotropy::pnorm(2, 2), Anisotropy::pnorm(4, 2),
      Anisotropy::weighted({{2, 1}, {0, 1}}),
      Anisotropy::crystalline_max({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, 2)};
  for (const Anisotropy& phi : phis) {
    for (int i = 0; i < 500; ++i) {
      Vec a = random_unit(rng, 2) * 2.0, b = random_unit(rng, 2);
      CHECK(phi.eval((a + b) * 0.5) <= 0.5 * (phi.eval(a) + phi.eval(b)) + 1e-12);
    }
  }
}

TEST_CASE("lambda modification: definition, locality, coercivity bookkeeping") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  Anisotropy m = make_phi_lambda(l2, 0.5);
  CHECK(m.eval({0, -1}) == 0.5);
  // Applies only on the exact ray.
  CHECK(m.eval({1e-9, -1}) == doctest::Approx(std::hypot(1e-9, 1.0)).epsilon(1e-15));

  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  Anisotropy neg = make_phi_lambda(l1, -0.25);
  CHECK(neg.eval({0, -3}) == -0.75);
  CHECK_FALSE(neg.coercive());

  CHECK(m.coercive());
  CHECK(m.coercivity() == doctest::Approx(0.5));
  Anisotropy m2 = make_phi_lambda(l2, 3.0);
  CHECK(m2.coercivity() == doctest::Approx(l2.coercivity()));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    Vec nu = random_unit(rng, 2);
    if (nu.x == 0.0 && nu.y < 0) continue;
    CHECK(m.eval(nu) == l2.eval(nu));
  }
  // 3D ray test.
  Anisotropy m3 = make_phi_lambda(Anisotropy::pnorm(2, 3), 0.25);
  CHECK(m3.eval({0, 0, -4}) == 1.0);
  CHECK(m3.eval({0, 1e-12, -4}) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("shift modification and the exact shift identity") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);
  Anisotropy zero = make_phi_shifted(l2, {0, 0});
  std::mt19937_64 rng(19);
  for (int i = 0; i < 200; ++i) {
    Vec nu = random_unit(rng, 2);
    CHECK(zero.eval(nu) == l2.eval(nu));
  }

  Anisotropy up = make_phi_shifted(l2, {0, 0.5});
  CHECK(up.eval({0, -1}) == doctest::Approx(1.5).epsilon(1e-15));

  // phi_{x0}(nu) + x0.nu == phi(nu) down to roundoff.
  Anisotropy sh = make_phi_shifted(l2, {0.3, 0.4});
  for (int i = 0; i < 1000; ++i) {
    Vec nu = random_unit(rng, 2) * 2.0;
    double lhs = sh.eval(nu) + dot(Vec{0.3, 0.4}, nu);
    CHECK(std::abs(lhs - l2.eval(nu)) <= 1e-15 * (1.0 + std::abs(lhs)));
  }

  // Sampled coercivity of the shifted l1 density.
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  Anisotropy shl1 = make_phi_shifted(l1, {0.5, 0.5});
  double eps_orc = 1e300;
  std::mt19937_64 rng2(23);
  for (int i = 0; i < 100000; ++i) {
    Vec nu = random_unit(rng2, 2);
    eps_orc = std::min(eps_orc, l1.eval(nu) - dot(Vec{0.5, 0.5}, nu));
  }
  CHECK(eps_orc == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(shl1.coercivity() == doctest::Approx(0.5).epsilon(1e-3));

  // Outside the Wulff set the shift is rejected.
  CHECK_THROWS_AS(make_phi_shifted(l2, {2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_phi_shifted(l2, {1.0, 0.0}), std::invalid_argument);
  // Shift after the lambda modification is not a supported composition.
  CHECK_THROWS_AS(make_phi_shifted(make_phi_lambda(l2, 0.5), {0, 0.1}), std::invalid_argument);
}

TEST_CASE("choose_x0 lands in the admissible window") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);

  Vec x0 = choose_x0(l2, 0.5);
  CHECK(x0.x == 0.0);
  CHECK(x0.y == 0.0);

  x0 = choose_x0(l2, -0.5);
  CHECK(x0.x == doctest::Approx(0.0));
  CHECK(x0.y > 0.5);
  CHECK(x0.y < 1.0);
  double lambda_p = -0.5 + x0.y;
  Anisotropy sh = make_phi_shifted(l2, x0);
  CHECK(lambda_p > 0.0);
  CHECK(lambda_p < sh.eval({0, -1}));
  CHECK(sh.eval({0, -1}) == doctest::Approx(1.0 + x0.y).epsilon(1e-12));

  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  x0 = choose_x0(l1, -0.999);
  double lp = -0.999 + x0.y;
  CHECK(lp > 0.0);
  CHECK(shifted_coercivity_estimate(l1, x0) > 0.0);

  CHECK_THROWS_AS(choose_x0(l2, 1.0), RegimeError);
  CHECK_THROWS_AS(choose_x0(l2, -1.0), RegimeError);
  CHECK_THROWS_AS(choose_x0(l2, 1.7), RegimeError);
}

TEST_CASE("convex envelope of the lambda-modified density") {
  Anisotropy l2 = Anisotropy::pnorm(2, 2);

  // Envelope of the plain norm: support function of the 256-gon disk.
  ConvexPolytope disk = build_wulff(l2, 256);
  Anisotropy h = convex_envelope(l2, disk);
  std::mt19937_64 rng(29);
  for (int i = 0; i < 500; ++i) {
    Vec nu = random_unit(rng, 2);
    CHECK(h.eval(nu) == doctest::Approx(1.0).epsilon(1e-3));
  }

  Anisotropy mod = make_phi_lambda(l2, 0.5);
  ConvexPolytope W = build_wulff(mod, 256);
  Anisotropy env = convex_envelope(mod, W);
  CHECK(env.eval({0, -1}) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(env.eval({0, 1}) == doctest::Approx(1.0).epsilon(1e-3));

  // Domination needs the Wulff set exact, so check it on the crystalline
  // 1-norm, whose clipped Wulff set is an exact rectangle.
  Anisotropy l1 = Anisotropy::pnorm(1, 2);
  Anisotropy mod1 = make_phi_lambda(l1, 0.5);
  ConvexPolytope W1 = build_wulff(mod1, 256);
  Anisotropy env1 = convex_envelope(mod1, W1);
  int equalities = 0;
  for (const Vec& nu : unit_directions_2d(4096)) {
    CHECK(env1.eval(nu) <= mod1.eval(nu) + 1e-12);
    if (std::abs(env1.eval(nu) - mod1.eval(nu)) <= 1e-9) ++equalities;
  }
  CHECK(equalities > 0);
  CHECK(std::abs(env1.eval({0, -1}) - mod1.eval({0, -1})) <= 1e-9);
  for (const Halfspace& hs : W1.halfspaces()) {
    CHECK(std::abs(env1.eval(hs.normal) - mod1.eval(hs.normal)) <= 1e-9);
  }

  CHECK_THROWS_AS(convex_envelope(l2, ConvexPolytope::empty(2)), std::invalid_argument);
}
