// Command-line front end: construct Wulff/Winterbottom shapes, evaluate
// capillarity energies, run the optimizers and stability sweeps.
//
// Exit codes: 0 success (or verification pass), 2 configuration error,
// 3 construction failure, 4 blocked by the wetting regime, 5 verification
// failure.

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "winterbottom/io.hpp"
#include "winterbottom/log.hpp"
#include "winterbottom/optimize.hpp"
#include "winterbottom/polytope.hpp"
#include "winterbottom/shape.hpp"
#include "winterbottom/stability.hpp"

namespace {

using namespace wb;

// --phi accepts "pnorm:2", "pnorm:inf", "weighted:[[2,0],[0,1]]",
// "crystalline:[[1,1],...]", "support:[[...]]" or "@file.json".
Anisotropy parse_phi(const std::string& spec, std::optional<int> dim_flag) {
  int dim = dim_flag.value_or(2);
  if (!spec.empty() && spec[0] == '@') {
    Anisotropy phi = anisotropy_from_json(Json::parse(read_file(spec.substr(1))));
    if (dim_flag && phi.dim() != *dim_flag)
      throw std::invalid_argument("anisotropy dimension does not match --dim");
    return phi;
  }
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("anisotropy spec needs the form kind:args");
  std::string kind = spec.substr(0, colon);
  std::string arg = spec.substr(colon + 1);
  if (kind == "pnorm") {
    double p = arg == "inf" ? std::numeric_limits<double>::infinity() : std::stod(arg);
    return Anisotropy::pnorm(p, dim);
  }
  if (kind == "weighted") {
    std::vector<std::vector<double>> A;
    for (const Json& row : Json::parse(arg)) A.push_back(row.get<std::vector<double>>());
    if (dim_flag && static_cast<int>(A.size()) != *dim_flag)
      throw std::invalid_argument("weight matrix dimension does not match --dim");
    return Anisotropy::weighted(A);
  }
  if (kind == "crystalline" || kind == "support") {
    std::vector<Vec> pts;
    for (const Json& row : Json::parse(arg)) {
      auto coords = row.get<std::vector<double>>();
      if (static_cast<int>(coords.size()) != dim)
        throw std::invalid_argument("vector dimension does not match --dim");
      pts.push_back(dim == 2 ? Vec{coords[0], coords[1]} : Vec{coords[0], coords[1], coords[2]});
    }
    return kind == "crystalline" ? Anisotropy::crystalline_max(std::move(pts), dim)
                                 : Anisotropy::support_of_polytope(std::move(pts), dim);
  }
  throw std::invalid_argument("unknown anisotropy kind: " + kind);
}

int default_directions(int dim) { return dim == 2 ? 256 : 1024; }

struct PhiFlags {
  std::string spec;
  std::optional<int> dim;
};

void add_phi_flags(CLI::App* cmd, PhiFlags& flags) {
  cmd->add_option("--phi", flags.spec, "surface tension density (kind:args or @file.json)")
      ->required();
  cmd->add_option("--dim", flags.dim, "ambient dimension (2 or 3)");
}

int cmd_wulff(const PhiFlags& phif, std::optional<int> n, const std::string& out,
              const std::string& svg, const std::string& off, bool reproducible) {
  Anisotropy phi = parse_phi(phif.spec, phif.dim);
  ConvexPolytope W = build_wulff(phi, n.value_or(default_directions(phi.dim())));
  std::printf("volume=%s facets=%zu\n", fmt_double(W.volume()).c_str(), W.facets().size());
  if (!out.empty()) write_file(out, polytope_to_json(W).dump(2) + "\n");
  if (!svg.empty()) write_file(svg, polytope_to_svg(W, reproducible));
  if (!off.empty()) write_file(off, polytope_to_off(W));
  return 0;
}

int cmd_winterbottom(const PhiFlags& phif, double lambda, double volume, std::optional<int> n,
                     const std::string& out, const std::string& report_path,
                     const std::string& svg, bool reproducible) {
  Anisotropy phi = parse_phi(phif.spec, phif.dim);
  RegimeLabel regime = classify_regime(phi, lambda);
  if (regime.regime == Regime::CompleteWetting) {
    std::fprintf(stderr,
                 "complete wetting: lambda=%g is at or below -phi(e_d)=%g; no minimizer exists\n",
                 lambda, regime.lower);
    return 4;
  }
  ConvexPolytope W = build_wulff(phi, n.value_or(default_directions(phi.dim())));
  ConvexPolytope Wl = winterbottom(W, lambda);
  ConvexPolytope Wv = winterbottom_with_volume(Wl, lambda, volume);
  SubstrateShape shape = SubstrateShape::from_polytope(Wv);
  EnergyBreakdown energy = energy_F(shape, phi, lambda);

  Json rep;
  rep["regime"] = to_string(regime.regime);
  rep["thresholds"] = {{"lower", regime.lower}, {"upper", regime.upper}};
  rep["volume"] = shape.volume();
  rep["energy"] = energy_to_json(energy);
  if (phi.differentiable() && shape.contact_measure() > 0) {
    rep["young_residual"] = young_law_check(phi, Wv, lambda);
  } else {
    rep["young_residual"] = nullptr;
  }
  std::printf("regime=%s total_energy=%s contact=%s\n", to_string(regime.regime).c_str(),
              fmt_double(energy.total).c_str(), fmt_double(energy.contact_measure).c_str());
  if (!out.empty()) write_file(out, shape_to_json(shape).dump(2) + "\n");
  if (!report_path.empty()) write_file(report_path, rep.dump(2) + "\n");
  if (!svg.empty() && shape.dim() == 2) write_file(svg, shape_to_svg(shape, reproducible));
  return 0;
}

struct OptimizeFlags {
  double lambda = 0.0;
  double volume = 1.0;
  int nvertices = 64;
  int trials = 5;
  uint64_t seed = 7;
  bool anneal = false;
  int steps = 200000;
  double t0 = 0.5;
  double cooling = 0.99995;
  int nref = 1024;
  int jobs = 1;
  double max_median_ratio = 1.01;
  double max_asym_frac = 0.05;
  std::string out, trace, shape_out, svg;
  bool reproducible = false;
};

int cmd_optimize(const PhiFlags& phif, const OptimizeFlags& f) {
  Anisotropy phi = parse_phi(phif.spec, phif.dim);
  VerifyOptions opts;
  opts.n_vertices = f.nvertices;
  opts.reference_directions = f.nref;
  opts.schedule.t0 = f.t0;
  opts.schedule.cooling = f.cooling;
  opts.schedule.steps = f.steps;
  opts.median_ratio_limit = f.max_median_ratio;
  opts.asymmetry_fraction = f.max_asym_frac;
  opts.jobs = f.jobs;
  opts.force_anneal = f.anneal;

  TheoremReport rep = verify_theorem_main(phi, f.lambda, f.volume, f.trials, f.seed, opts);

  std::printf("reference=%s median=%s best_asym=%s %s\n",
              fmt_double(rep.reference_energy).c_str(), fmt_double(rep.median_energy).c_str(),
              fmt_double(rep.best_asymmetry).c_str(), rep.pass ? "PASS" : "FAIL");
  if (!f.out.empty()) write_file(f.out, report_to_json(rep).dump(2) + "\n");
  if (!f.trace.empty()) write_file(f.trace, trace_csv(rep.best_trace));
  if (!f.shape_out.empty()) write_file(f.shape_out, shape_to_json(rep.best_shape).dump(2) + "\n");
  if (!f.svg.empty()) write_file(f.svg, shape_to_svg(rep.best_shape, f.reproducible));
  return rep.pass ? 0 : 5;
}

int cmd_oracle(const PhiFlags& phif, double lambda, int cells, const std::string& out) {
  Anisotropy phi = parse_phi(phif.spec, phif.dim);
  OracleResult r = brute_force_pixels(phi, lambda, cells);
  std::printf("min_energy=%s minimizers=%zu candidates=%lld\n", fmt_double(r.min_energy).c_str(),
              r.minimizers.size(), r.candidates);
  if (!out.empty()) {
    Json j;
    j["min_energy"] = r.min_energy;
    j["candidates"] = r.candidates;
    Json mins = Json::array();
    for (const PixelShape& p : r.minimizers) mins.push_back(pixels_to_json(p));
    j["minimizers"] = mins;
    write_file(out, j.dump(2) + "\n");
  }
  return 0;
}

struct StabilityFlags {
  double lambda = 0.0;
  double volume = 1.0;
  std::string family = "rect";
  int n = 20;
  uint64_t seed = 1;
  std::optional<double> param_min, param_max;
  bool log_spaced = false;
  int base_n = 64;
  std::string out, plot, report;
  bool reproducible = false;
};

int cmd_stability(const PhiFlags& phif, const StabilityFlags& f) {
  Anisotropy phi = parse_phi(phif.spec, phif.dim);
  SweepSpec spec;
  spec.family = family_from_string(f.family);
  spec.seed = f.seed;
  spec.base_directions = f.base_n;
  spec.log_spaced = f.log_spaced;
  switch (spec.family) {
    case PerturbationFamily::RectDistortion:
      spec.param_min = 1.01;
      spec.param_max = 2.0;
      break;
    case PerturbationFamily::VertexNoise:
      spec.param_min = 1e-3;
      spec.param_max = 3e-2;
      spec.log_spaced = true;
      break;
    case PerturbationFamily::Shear:
      spec.param_min = 0.02;
      spec.param_max = 0.5;
      break;
  }
  if (f.param_min) spec.param_min = *f.param_min;
  if (f.param_max) spec.param_max = *f.param_max;

  SweepResult res = stability_sweep(phi, f.lambda, f.volume, spec, f.n);
  std::printf("records=%zu sup_ratio=%s\n", res.records.size(),
              fmt_double(res.sup_ratio).c_str());
  if (!f.out.empty()) write_file(f.out, stability_csv(res.records));
  if (!f.plot.empty()) write_file(f.plot, stability_scatter_svg(res.records, f.reproducible));
  if (!f.report.empty()) {
    Json j;
    j["family"] = f.family;
    j["sup_ratio"] = res.sup_ratio;
    j["records"] = res.records.size();
    write_file(f.report, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_wetting_demo(const PhiFlags& phif, double lambda, double volume, std::vector<double> rs,
                     std::optional<int> rmax, const std::string& out) {
  Anisotropy phi = parse_phi(phif.spec, phif.dim);
  if (rs.empty()) {
    if (rmax) {
      for (int R = 1; R <= *rmax; ++R) rs.push_back(R);
    } else {
      rs = {1, 10, 100};
    }
  }
  auto table = wetting_demo(phi, lambda, volume, rs);
  for (const auto& [R, b] : table) {
    std::printf("R=%s F=%s\n", fmt_double(R).c_str(), fmt_double(b.total).c_str());
  }
  if (!out.empty()) write_file(out, wetting_csv(table));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wulff/Winterbottom equilibrium shapes on a substrate"};
  app.require_subcommand(1);

  // wulff
  PhiFlags wulff_phi;
  std::optional<int> wulff_n;
  std::string wulff_out, wulff_svg, wulff_off;
  bool wulff_repro = false;
  CLI::App* wulff_cmd = app.add_subcommand("wulff", "construct the Wulff shape");
  add_phi_flags(wulff_cmd, wulff_phi);
  wulff_cmd->add_option("--n", wulff_n, "construction directions");
  wulff_cmd->add_option("-o,--output", wulff_out, "polytope JSON");
  wulff_cmd->add_option("--svg", wulff_svg, "SVG figure (2D)");
  wulff_cmd->add_option("--off", wulff_off, "OFF mesh (3D)");
  wulff_cmd->add_flag("--reproducible", wulff_repro, "suppress timestamps in figures");

  // winterbottom
  PhiFlags wb_phi;
  double wb_lambda = 0.0, wb_volume = 1.0;
  std::optional<int> wb_n;
  std::string wb_out, wb_report, wb_svg;
  bool wb_repro = false;
  CLI::App* wb_cmd = app.add_subcommand("winterbottom", "construct the Winterbottom shape");
  add_phi_flags(wb_cmd, wb_phi);
  wb_cmd->add_option("--lambda", wb_lambda, "relative adhesion coefficient")->required();
  wb_cmd->add_option("--volume", wb_volume, "target volume");
  wb_cmd->add_option("--n", wb_n, "construction directions");
  wb_cmd->add_option("-o,--output", wb_out, "shape JSON");
  wb_cmd->add_option("--report", wb_report, "report JSON");
  wb_cmd->add_option("--svg", wb_svg, "SVG figure (2D)");
  wb_cmd->add_flag("--reproducible", wb_repro, "suppress timestamps in figures");

  // optimize
  PhiFlags opt_phi;
  OptimizeFlags opt;
  CLI::App* opt_cmd = app.add_subcommand("optimize", "verify minimality from random starts");
  add_phi_flags(opt_cmd, opt_phi);
  opt_cmd->add_option("--lambda", opt.lambda, "relative adhesion coefficient")->required();
  opt_cmd->add_option("--volume", opt.volume, "target volume");
  opt_cmd->add_option("--nvertices", opt.nvertices, "polygon vertices");
  opt_cmd->add_option("--trials", opt.trials, "random initializations");
  opt_cmd->add_option("--seed", opt.seed, "RNG seed");
  opt_cmd->add_flag("--anneal", opt.anneal, "force simulated annealing");
  opt_cmd->add_option("--steps", opt.steps, "annealing steps");
  opt_cmd->add_option("--t0", opt.t0, "annealing start temperature");
  opt_cmd->add_option("--cooling", opt.cooling, "annealing cooling factor");
  opt_cmd->add_option("--nref", opt.nref, "reference construction directions");
  opt_cmd->add_option("--jobs", opt.jobs, "parallel trials");
  opt_cmd->add_option("--max-median-ratio", opt.max_median_ratio, "pass bound on median/reference");
  opt_cmd->add_option("--max-asym-frac", opt.max_asym_frac, "pass bound on asymmetry/volume");
  opt_cmd->add_option("-o,--output", opt.out, "report JSON");
  opt_cmd->add_option("--trace", opt.trace, "energy trace CSV of the best trial");
  opt_cmd->add_option("--shape", opt.shape_out, "best shape JSON");
  opt_cmd->add_option("--svg", opt.svg, "best shape SVG");
  opt_cmd->add_flag("--reproducible", opt.reproducible, "suppress timestamps in figures");

  // oracle
  PhiFlags orc_phi;
  double orc_lambda = 0.0;
  int orc_cells = 8;
  std::string orc_out;
  CLI::App* orc_cmd = app.add_subcommand("oracle", "exhaustive polyomino minimum");
  add_phi_flags(orc_cmd, orc_phi);
  orc_cmd->add_option("--lambda", orc_lambda, "relative adhesion coefficient")->required();
  orc_cmd->add_option("--cells", orc_cells, "polyomino size (<= 10)")->required();
  orc_cmd->add_option("-o,--output", orc_out, "result JSON");

  // stability
  PhiFlags st_phi;
  StabilityFlags st;
  CLI::App* st_cmd = app.add_subcommand("stability", "perturbation sweeps and ratios");
  add_phi_flags(st_cmd, st_phi);
  st_cmd->add_option("--lambda", st.lambda, "relative adhesion coefficient")->required();
  st_cmd->add_option("--volume", st.volume, "target volume");
  st_cmd->add_option("--family", st.family, "rect | noise | shear")->required();
  st_cmd->add_option("--n", st.n, "sweep size");
  st_cmd->add_option("--seed", st.seed, "RNG seed");
  st_cmd->add_option("--param-min", st.param_min, "sweep lower bound");
  st_cmd->add_option("--param-max", st.param_max, "sweep upper bound");
  st_cmd->add_flag("--log-spaced", st.log_spaced, "log-space the sweep");
  st_cmd->add_option("--base-n", st.base_n, "reference construction directions");
  st_cmd->add_option("-o,--output", st.out, "records CSV");
  st_cmd->add_option("--plot", st.plot, "scatter SVG");
  st_cmd->add_option("--report", st.report, "summary JSON");
  st_cmd->add_flag("--reproducible", st.reproducible, "suppress timestamps in figures");

  // wetting-demo
  PhiFlags wd_phi;
  double wd_lambda = 0.0, wd_volume = 1.0;
  std::vector<double> wd_r;
  std::optional<int> wd_rmax;
  std::string wd_out;
  CLI::App* wd_cmd = app.add_subcommand("wetting-demo", "cylinder energies across the regimes");
  add_phi_flags(wd_cmd, wd_phi);
  wd_cmd->add_option("--lambda", wd_lambda, "relative adhesion coefficient")->required();
  wd_cmd->add_option("--volume", wd_volume, "cylinder volume");
  wd_cmd->add_option("--r", wd_r, "cylinder widths (repeatable)");
  wd_cmd->add_option("--rmax", wd_rmax, "use widths 1..rmax");
  wd_cmd->add_option("-o,--output", wd_out, "table CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (wulff_cmd->parsed())
      return cmd_wulff(wulff_phi, wulff_n, wulff_out, wulff_svg, wulff_off, wulff_repro);
    if (wb_cmd->parsed())
      return cmd_winterbottom(wb_phi, wb_lambda, wb_volume, wb_n, wb_out, wb_report, wb_svg,
                              wb_repro);
    if (opt_cmd->parsed()) return cmd_optimize(opt_phi, opt);
    if (orc_cmd->parsed()) return cmd_oracle(orc_phi, orc_lambda, orc_cells, orc_out);
    if (st_cmd->parsed()) return cmd_stability(st_phi, st);
    if (wd_cmd->parsed())
      return cmd_wetting_demo(wd_phi, wd_lambda, wd_volume, wd_r, wd_rmax, wd_out);
  } catch (const RegimeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const UnboundedError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NumericalDegeneracy& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
