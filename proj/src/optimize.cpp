#include "winterbottom/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <map>
#include <set>
#include <stdexcept>

#include "winterbottom/log.hpp"
#include "winterbottom/polytope.hpp"
#include "winterbottom/stability.hpp"

namespace wb {

namespace {

double ring_area(const std::vector<Vec>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec& p = v[i];
    const Vec& q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

double ring_diameter(const std::vector<Vec>& v) {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const Vec& p : v) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  return std::hypot(xhi - xlo, yhi - ylo);
}

void require_partial_regime(const Anisotropy& phi, double lambda) {
  RegimeLabel r = classify_regime(phi, lambda);
  if (r.regime != Regime::PartialWetting)
    throw RegimeError("operation requires the partial-wetting regime (" +
                      std::to_string(r.lower) + " < lambda < " + std::to_string(r.upper) + ")");
}

}  // namespace

std::vector<Vec> project_polygon(std::vector<Vec> poly, double v) {
  for (Vec& p : poly) {
    if (p.y < 0.0) p.y = 0.0;
  }
  double area = ring_area(poly);
  if (area < 0) {
    std::reverse(poly.begin(), poly.end());
    area = -area;
  }
  if (!(area > 1e-14)) throw std::runtime_error("degenerate polygon in projection");
  // Area centroid, projected to the substrate.
  double cx = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % poly.size()];
    cx += (p.x + q.x) * (p.x * q.y - q.x * p.y);
  }
  cx /= 6.0 * area;
  double r = std::sqrt(v / area);
  for (Vec& p : poly) {
    p.x = cx + r * (p.x - cx);
    p.y = r * p.y;
  }
  return poly;
}

double polygon_energy(const std::vector<Vec>& poly, const Anisotropy& phi, double lambda) {
  double free_surface = 0.0, contact = 0.0;
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Vec& a = poly[i];
    const Vec& b = poly[(i + 1) % n];
    Vec e = b - a;
    double len = norm(e);
    if (len == 0.0) continue;
    Vec nu = Vec{e.y, -e.x} / len;
    if (a.y == 0.0 && b.y == 0.0 && nu.y < 0.0) {
      contact += len;
    } else {
      free_surface += phi.eval(nu) * len;
    }
  }
  return free_surface + lambda * contact;
}

std::vector<Vec> random_star_polygon(std::mt19937_64& rng, int n_vertices, double v) {
  if (n_vertices < 4) throw std::invalid_argument("need at least 4 vertices");
  // Moderate radial noise: jagged stars develop fjords whose vertices
  // collapse under descent and wedge the line search.
  std::uniform_real_distribution<double> u(0.75, 1.25);
  int m = n_vertices - 2;
  std::vector<Vec> poly;
  poly.push_back({u(rng), 0.0});
  for (int j = 1; j <= m; ++j) {
    double ang = M_PI * j / (m + 1);
    double r = u(rng);
    poly.push_back({r * std::cos(ang), r * std::sin(ang)});
  }
  poly.push_back({-u(rng), 0.0});
  return project_polygon(std::move(poly), v);
}

OptimizeResult optimize_polygon(const Anisotropy& phi, double lambda, double v, int n_vertices,
                                const SubstrateShape& init, uint64_t seed,
                                const DescentOptions& opts) {
  require_partial_regime(phi, lambda);
  if (n_vertices < 8) throw std::invalid_argument("need at least 8 vertices");
  if (init.dim() != 2 || init.polygons().size() != 1 || !init.polygons()[0].holes.empty())
    throw std::invalid_argument("initial shape must be a single 2D polygon without holes");
  std::vector<Vec> X = init.polygons()[0].outer;
  if (static_cast<int>(X.size()) != n_vertices)
    throw std::invalid_argument("initial polygon must have n_vertices vertices");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int retries = 0;

  auto objective = [&](const std::vector<Vec>& Y) {
    return polygon_energy(Y, phi, lambda);
  };

  // The volume projection is a similarity about a substrate anchor, and the
  // energy is 1-homogeneous under it, so the projected objective of a raw
  // (clamped) loop Y is sqrt(v/area(Y)) * F(Y). Per-edge bookkeeping makes a
  // one-coordinate probe O(1) instead of O(n).
  auto edge_term = [&](const Vec& a, const Vec& b) -> double {
    Vec e = b - a;
    double len = norm(e);
    if (len == 0.0) return 0.0;
    Vec nu = Vec{e.y, -e.x} / len;
    if (a.y == 0.0 && b.y == 0.0 && nu.y < 0.0) return lambda * len;
    return phi.eval(nu) * len;
  };
  auto area_term = [](const Vec& a, const Vec& b) { return a.x * b.y - b.x * a.y; };

  X = project_polygon(std::move(X), v);
  if (!polygon_simple(X)) throw std::invalid_argument("initial polygon self-intersects");
  double E = objective(X);

  OptimizeResult result;
  std::deque<double> window;
  const int n = n_vertices;
  double alpha_seed = -1.0;
  if (opts.on_iterate) opts.on_iterate(X, E);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    double diam = ring_diameter(X);
    double h = opts.fd_step_rel * diam;

    // Central finite differences of the projected objective. Vertices
    // sitting on the substrate keep zero vertical gradient: contact edges
    // reprice discontinuously the moment a vertex lifts off, and in the
    // partial-wetting regime that jump is uphill, so the vertex stays on
    // the boundary and moves tangentially.
    std::vector<double> base_edge(n), base_area(n);
    double F0 = 0.0, A20 = 0.0;
    for (int i = 0; i < n; ++i) {
      base_edge[i] = edge_term(X[i], X[(i + 1) % n]);
      base_area[i] = area_term(X[i], X[(i + 1) % n]);
      F0 += base_edge[i];
      A20 += base_area[i];
    }
    auto probe = [&](int k, int coord, double delta) {
      Vec p = X[k];
      (coord == 0 ? p.x : p.y) += delta;
      if (p.y < 0.0) p.y = 0.0;
      int prev = (k + n - 1) % n;
      const Vec& a = X[prev];
      const Vec& b = X[(k + 1) % n];
      double F = F0 - base_edge[prev] - base_edge[k] + edge_term(a, p) + edge_term(p, b);
      double A2 = A20 - base_area[prev] - base_area[k] + area_term(a, p) + area_term(p, b);
      if (A2 <= 2e-14) return std::numeric_limits<double>::quiet_NaN();
      return std::sqrt(v / (0.5 * A2)) * F;
    };

    std::vector<double> g(2 * n, 0.0);
    double gmax = 0.0;
    bool bad = false;
    for (int i = 0; i < 2 * n && !bad; ++i) {
      if (i % 2 == 1 && X[i / 2].y == 0.0) continue;
      double fp = probe(i / 2, i % 2, h);
      double fm = probe(i / 2, i % 2, -h);
      g[i] = (fp - fm) / (2.0 * h);
      if (!std::isfinite(g[i])) bad = true;
      gmax = std::max(gmax, std::abs(g[i]));
    }
    if (bad || !std::isfinite(gmax)) {
      if (++retries > opts.max_retries) throw std::runtime_error("degenerate polygon");
      for (Vec& p : X) {
        p.x += 1e-6 * diam * gauss(rng);
        p.y = std::max(0.0, p.y + 1e-6 * diam * gauss(rng));
      }
      X = project_polygon(std::move(X), v);
      result.trace.push_back(E);
      continue;
    }

    double gn2 = 0.0;
    for (double gi : g) gn2 += gi * gi;

    bool accepted = false;
    if (gmax > 0.0) {
      // Warm-start from the last accepted step so the search does not crawl
      // once the landscape flattens.
      double cap = 0.5 * diam / gmax;
      double alpha = alpha_seed > 0.0 ? std::min(4.0 * alpha_seed, cap) : 0.02 * diam / gmax;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        std::vector<Vec> Y = X;
        for (int i = 0; i < n; ++i) {
          Y[i].x -= alpha * g[2 * i];
          Y[i].y -= alpha * g[2 * i + 1];
        }
        std::vector<Vec> Yp;
        try {
          Yp = project_polygon(std::move(Y), v);
        } catch (const std::runtime_error&) {
          continue;
        }
        double EY = objective(Yp);
        if (EY <= E - opts.armijo_c * alpha * gn2 && polygon_simple(Yp)) {
          X = std::move(Yp);
          E = EY;
          accepted = true;
          alpha_seed = alpha;
          break;
        }
      }
    }
    result.trace.push_back(E);
    result.iterations = iter + 1;
    if (opts.on_iterate) opts.on_iterate(X, E);

    window.push_back(E);
    if (static_cast<int>(window.size()) > opts.stall_window + 1) window.pop_front();
    if (static_cast<int>(window.size()) == opts.stall_window + 1) {
      double drop = window.front() - window.back();
      if (drop < opts.stall_rel * std::max(1.0, std::abs(window.back()))) {
        result.converged = true;
        break;
      }
    }
    (void)accepted;
  }

  result.shape = SubstrateShape::from_polygon(X);
  return result;
}

AnnealResult anneal_polygon(const Anisotropy& phi, double lambda, double v, int n_vertices,
                            const AnnealSchedule& schedule, uint64_t seed) {
  require_partial_regime(phi, lambda);
  if (n_vertices < 8) throw std::invalid_argument("need at least 8 vertices");
  std::mt19937_64 rng(seed);
  std::vector<Vec> X = random_star_polygon(rng, n_vertices, v);
  double E = polygon_energy(X, phi, lambda);
  // The best shape is recorded as a constructed SubstrateShape so the
  // returned value saw exactly the validation the caller will rely on.
  SubstrateShape best = SubstrateShape::from_polygon(X);
  double bestE = E;

  std::uniform_int_distribution<int> pick(0, n_vertices - 1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = n_vertices;
  AnnealResult out;

  // A quarter of the proposals copy one coordinate from a neighbour, which
  // assembles flat facets quickly; the rest are Gaussian moves on a random
  // scale so both coarse and fine features stay reachable.
  const double scales[4] = {0.002, 0.01, 0.05, 0.2};

  double T = schedule.t0;
  // The cooled Metropolis phase is followed by a greedy polish of a quarter
  // of the step budget.
  const int total_steps = schedule.steps + schedule.steps / 4;
  for (int step = 0; step < total_steps; ++step, T *= schedule.cooling) {
    if (step >= schedule.steps) T = 0.0;
    if (schedule.trace_stride > 0 && step % schedule.trace_stride == 0) out.trace.push_back(E);
    double diam = ring_diameter(X);
    int i = pick(rng);
    Vec moved = X[i];
    if (u01(rng) < 0.25) {
      const Vec& nb = u01(rng) < 0.5 ? X[(i + 1) % n] : X[(i + n - 1) % n];
      if (u01(rng) < 0.5) moved.x = nb.x;
      else moved.y = nb.y;
    } else {
      double warmth =
          schedule.t0 > 0.0 ? 0.25 + std::sqrt(T / schedule.t0) : 1.0;
      double sigma = diam * scales[static_cast<int>(rng() % 4)] * warmth;
      moved.x += sigma * gauss(rng);
      moved.y += sigma * gauss(rng);
    }
    moved.y = std::max(0.0, moved.y);
    // Land exactly on the substrate when close: keeps the shape clear of the
    // construction-time snap band, which would move vertices after the
    // simplicity checks.
    if (moved.y <= 1e-9 * diam) moved.y = 0.0;

    // Simplicity only needs the two edges at the moved vertex; the volume
    // re-projection afterwards is a similarity map and cannot introduce
    // crossings.
    std::vector<Vec> Y = X;
    Y[i] = moved;
    const Vec& a0 = Y[(i + n - 1) % n];
    const Vec& b1 = Y[(i + 1) % n];
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      const Vec& p = Y[j];
      const Vec& q = Y[(j + 1) % n];
      if (j != i && (j + 1) % n != i) ok = !segments_properly_intersect(a0, Y[i], p, q);
      if (ok && j != i && j != (i + 1) % n) ok = !segments_properly_intersect(Y[i], b1, p, q);
    }
    if (!ok) continue;

    std::vector<Vec> Yp;
    try {
      Yp = project_polygon(std::move(Y), v);
    } catch (const std::runtime_error&) {
      continue;
    }
    double EY = polygon_energy(Yp, phi, lambda);
    double dE = EY - E;
    bool accept = dE <= 0.0 || (T > 0.0 && u01(rng) < std::exp(-dE / T));
    if (!accept) continue;
    if (EY < bestE) {
      // The incremental test can miss a near-collinear crossing by rounding
      // noise; a new best must survive full construction.
      try {
        best = SubstrateShape::from_polygon(Yp);
        bestE = EY;
      } catch (const std::invalid_argument&) {
        continue;
      }
    }
    X = std::move(Yp);
    E = EY;
    ++out.accepted;
  }
  out.shape = std::move(best);
  out.best_energy = bestE;
  return out;
}

namespace {

using Cells = std::vector<std::pair<int, int>>;

Cells canonical(Cells cells) {
  int mx = cells[0].first, my = cells[0].second;
  for (const auto& [x, y] : cells) {
    mx = std::min(mx, x);
    my = std::min(my, y);
  }
  for (auto& [x, y] : cells) {
    x -= mx;
    y -= my;
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::set<Cells> fixed_polyominoes(int n) {
  std::set<Cells> current = {{{0, 0}}};
  for (int k = 2; k <= n; ++k) {
    std::set<Cells> next;
    for (const Cells& c : current) {
      std::set<std::pair<int, int>> occ(c.begin(), c.end());
      for (const auto& [x, y] : c) {
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          std::pair<int, int> cand{x + dx[d], y + dy[d]};
          if (occ.count(cand)) continue;
          Cells grown = c;
          grown.push_back(cand);
          next.insert(canonical(std::move(grown)));
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

PixelShape to_pixelshape(const Cells& cells, int lift) {
  int w = 0, h = 0;
  for (const auto& [x, y] : cells) {
    w = std::max(w, x + 1);
    h = std::max(h, y + 1);
  }
  PixelShape p;
  p.width = w;
  p.height = h + lift;
  p.cells.assign(static_cast<size_t>(p.width) * p.height, 0);
  for (const auto& [x, y] : cells) p.cells[(y + lift) * w + x] = 1;
  return p;
}

}  // namespace

long long count_fixed_polyominoes(int n) {
  return static_cast<long long>(fixed_polyominoes(n).size());
}

OracleResult brute_force_pixels(const Anisotropy& phi, double lambda, int n_cells) {
  if (n_cells < 1 || n_cells > 10)
    throw std::invalid_argument("brute-force oracle supports 1..10 cells");
  OracleResult out;
  out.min_energy = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, PixelShape>> evaluated;
  for (const Cells& c : fixed_polyominoes(n_cells)) {
    // Lift 0 rests on the substrate; lift 1 stands for every raised
    // placement (their energies all coincide).
    for (int lift : {0, 1}) {
      PixelShape p = to_pixelshape(c, lift);
      double e = pixel_energy(p, phi, lambda).total;
      out.min_energy = std::min(out.min_energy, e);
      evaluated.push_back({e, std::move(p)});
      ++out.candidates;
    }
  }
  for (auto& [e, p] : evaluated) {
    if (e <= out.min_energy + 1e-12) out.minimizers.push_back(std::move(p));
  }
  return out;
}

TheoremReport verify_theorem_main(const Anisotropy& phi, double lambda, double v, int trials,
                                  uint64_t seed, const VerifyOptions& opts) {
  require_partial_regime(phi, lambda);
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  ConvexPolytope W = build_wulff(phi, opts.reference_directions);
  ConvexPolytope Wl = winterbottom(W, lambda);
  ConvexPolytope Wv = winterbottom_with_volume(Wl, lambda, v);
  SubstrateShape reference = SubstrateShape::from_polytope(Wv);
  TheoremReport report;
  report.reference_energy = energy_F(reference, phi, lambda).total;

  struct TrialArtifacts {
    TrialOutcome outcome;
    SubstrateShape shape;
    std::vector<double> trace;
  };
  auto run_trial = [&](int t) -> TrialArtifacts {
    std::mt19937_64 rng(seed + static_cast<uint64_t>(t));
    TrialArtifacts art;
    art.outcome.trial = t;
    if (phi.differentiable() && !opts.force_anneal) {
      std::vector<Vec> init = random_star_polygon(rng, opts.n_vertices, v);
      OptimizeResult r = optimize_polygon(phi, lambda, v, opts.n_vertices,
                                          SubstrateShape::from_polygon(init), seed + t);
      art.outcome.final_energy =
          r.trace.empty() ? energy_F(r.shape, phi, lambda).total : r.trace.back();
      art.shape = r.shape;
      art.trace = std::move(r.trace);
    } else {
      AnnealResult r = anneal_polygon(phi, lambda, v, opts.n_vertices, opts.schedule, seed + t);
      art.outcome.final_energy = r.best_energy;
      art.shape = r.shape;
      art.trace = std::move(r.trace);
    }
    art.outcome.asymmetry = asymmetry_to(art.shape, reference).first;
    return art;
  };

  std::vector<TrialArtifacts> arts;
  if (opts.jobs > 1) {
    std::vector<std::future<TrialArtifacts>> futs;
    for (int t = 0; t < trials; ++t)
      futs.push_back(std::async(std::launch::async, run_trial, t));
    for (auto& f : futs) arts.push_back(f.get());
  } else {
    for (int t = 0; t < trials; ++t) arts.push_back(run_trial(t));
  }

  std::vector<double> energies;
  report.best_asymmetry = std::numeric_limits<double>::infinity();
  int best_idx = 0;
  for (size_t i = 0; i < arts.size(); ++i) {
    const TrialOutcome& o = arts[i].outcome;
    report.trials.push_back(o);
    energies.push_back(o.final_energy);
    report.best_asymmetry = std::min(report.best_asymmetry, o.asymmetry);
    if (o.final_energy < arts[best_idx].outcome.final_energy) best_idx = static_cast<int>(i);
  }
  report.best_shape = arts[best_idx].shape;
  report.best_trace = std::move(arts[best_idx].trace);
  std::sort(energies.begin(), energies.end());
  report.min_energy = energies.front();
  report.median_energy = energies[energies.size() / 2];
  report.pass = report.median_energy <= opts.median_ratio_limit * report.reference_energy &&
                report.best_asymmetry <= opts.asymmetry_fraction * v;
  log_info("verify_theorem_main: median=" + std::to_string(report.median_energy) +
           " reference=" + std::to_string(report.reference_energy) +
           " best_asym=" + std::to_string(report.best_asymmetry) +
           (report.pass ? " PASS" : " FAIL"));
  return report;
}

}  // namespace wb
