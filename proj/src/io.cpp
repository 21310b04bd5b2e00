#include "winterbottom/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wb {

namespace {

Json vec_to_json(const Vec& v, int dim) {
  return dim == 2 ? Json::array({v.x, v.y}) : Json::array({v.x, v.y, v.z});
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3)
    throw std::invalid_argument("expected a 2- or 3-vector");
  Vec v{j[0].get<double>(), j[1].get<double>()};
  if (j.size() == 3) v.z = j[2].get<double>();
  return v;
}

std::vector<Vec> vecs_from_json(const Json& j) {
  std::vector<Vec> out;
  for (const Json& e : j) out.push_back(vec_from_json(e));
  return out;
}

Json vecs_to_json(const std::vector<Vec>& vs, int dim) {
  Json a = Json::array();
  for (const Vec& v : vs) a.push_back(vec_to_json(v, dim));
  return a;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json anisotropy_to_json(const Anisotropy& phi) {
  const Anisotropy& root = phi.root();
  Json j;
  switch (root.kind()) {
    case AnisotropyKind::PNorm:
      j["kind"] = "pnorm";
      if (std::isinf(root.pnorm_p())) j["p"] = "inf";
      else j["p"] = root.pnorm_p();
      j["dim"] = root.dim();
      break;
    case AnisotropyKind::WeightedNorm: {
      j["kind"] = "weighted";
      Json rows = Json::array();
      for (int i = 0; i < root.dim(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < root.dim(); ++k) row.push_back(root.weight_matrix()[i][k]);
        rows.push_back(row);
      }
      j["A"] = rows;
      break;
    }
    case AnisotropyKind::SupportOfPolytope:
      j["kind"] = "support";
      j["vertices"] = vecs_to_json(root.points(), root.dim());
      j["dim"] = root.dim();
      break;
    case AnisotropyKind::CrystallineMax:
      j["kind"] = "crystalline";
      j["w"] = vecs_to_json(root.points(), root.dim());
      j["dim"] = root.dim();
      break;
    case AnisotropyKind::Modified:
      throw std::logic_error("root() cannot be modified");
  }
  // Modification chain: the shift applies before the lambda modification.
  for (const Anisotropy* a = &phi; a->modification() != nullptr; a = &a->base()) {
    const ModificationRecord* m = a->modification();
    if (m->lambda_modified) j["lambda_mod"] = m->lambda;
    if (m->shifted) j["shift"] = vec_to_json(m->x0, a->dim());
  }
  return j;
}

Anisotropy anisotropy_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  Anisotropy phi = [&] {
    if (kind == "pnorm") {
      double p = j.at("p").is_string() ? std::numeric_limits<double>::infinity()
                                       : j.at("p").get<double>();
      return Anisotropy::pnorm(p, j.at("dim").get<int>());
    }
    if (kind == "weighted") {
      std::vector<std::vector<double>> A;
      for (const Json& row : j.at("A")) A.push_back(row.get<std::vector<double>>());
      return Anisotropy::weighted(A);
    }
    if (kind == "support") {
      return Anisotropy::support_of_polytope(vecs_from_json(j.at("vertices")),
                                             j.at("dim").get<int>());
    }
    if (kind == "crystalline") {
      return Anisotropy::crystalline_max(vecs_from_json(j.at("w")), j.at("dim").get<int>());
    }
    throw std::invalid_argument("unknown anisotropy kind: " + kind);
  }();
  if (j.contains("shift")) phi = make_phi_shifted(phi, vec_from_json(j.at("shift")));
  if (j.contains("lambda_mod")) phi = make_phi_lambda(phi, j.at("lambda_mod").get<double>());
  return phi;
}

Json polytope_to_json(const ConvexPolytope& p) {
  Json j;
  j["dim"] = p.dim();
  j["vertices"] = vecs_to_json(p.vertices(), p.dim());
  if (p.dim() == 3) {
    Json facets = Json::array();
    for (const Facet& f : p.facets()) facets.push_back(f.vertices);
    j["facets"] = facets;
  }
  j["volume"] = p.volume();
  return j;
}

ConvexPolytope polytope_from_json(const Json& j) {
  int dim = j.at("dim").get<int>();
  std::vector<Vec> verts = vecs_from_json(j.at("vertices"));
  if (dim == 2) return ConvexPolytope::polygon(std::move(verts));
  std::vector<std::vector<int>> facets;
  for (const Json& f : j.at("facets")) facets.push_back(f.get<std::vector<int>>());
  return ConvexPolytope::from_facets(std::move(verts), std::move(facets));
}

Json shape_to_json(const SubstrateShape& s) {
  Json j;
  j["dim"] = s.dim();
  if (s.dim() == 2) {
    Json polys = Json::array();
    for (const PolygonWithHoles& pw : s.polygons()) {
      Json p;
      p["outer"] = vecs_to_json(pw.outer, 2);
      Json holes = Json::array();
      for (const auto& h : pw.holes) holes.push_back(vecs_to_json(h, 2));
      p["holes"] = holes;
      polys.push_back(p);
    }
    j["polygons"] = polys;
  } else {
    j["polytope"] = polytope_to_json(s.polytope());
  }
  j["volume"] = s.volume();
  return j;
}

SubstrateShape shape_from_json(const Json& j) {
  int dim = j.at("dim").get<int>();
  if (dim == 2) {
    std::vector<PolygonWithHoles> polys;
    for (const Json& p : j.at("polygons")) {
      PolygonWithHoles pw;
      pw.outer = vecs_from_json(p.at("outer"));
      if (p.contains("holes")) {
        for (const Json& h : p.at("holes")) pw.holes.push_back(vecs_from_json(h));
      }
      polys.push_back(std::move(pw));
    }
    return SubstrateShape::from_polygons(std::move(polys));
  }
  return SubstrateShape::from_polytope(polytope_from_json(j.at("polytope")));
}

Json pixels_to_json(const PixelShape& p) {
  Json j;
  j["width"] = p.width;
  j["rows"] = p.to_rows();  // rows[0] is the substrate row
  return j;
}

PixelShape pixels_from_json(const Json& j) {
  PixelShape p = PixelShape::from_rows(j.at("rows").get<std::vector<std::string>>());
  if (j.contains("width") && j.at("width").get<int>() != p.width)
    throw std::invalid_argument("pixel width does not match rows");
  return p;
}

Json energy_to_json(const EnergyBreakdown& b) {
  Json j;
  j["free_surface"] = b.free_surface;
  j["contact"] = b.contact;
  j["total"] = b.total;
  j["contact_measure"] = b.contact_measure;
  return j;
}

Json report_to_json(const TheoremReport& r) {
  Json j;
  j["reference_energy"] = r.reference_energy;
  j["min_energy"] = r.min_energy;
  j["median_energy"] = r.median_energy;
  j["best_asymmetry"] = r.best_asymmetry;
  j["pass"] = r.pass;
  Json trials = Json::array();
  for (const TrialOutcome& t : r.trials) {
    Json e;
    e["trial"] = t.trial;
    e["final_energy"] = t.final_energy;
    e["asymmetry"] = t.asymmetry;
    trials.push_back(e);
  }
  j["trials"] = trials;
  return j;
}

namespace {

std::string svg_header(double xlo, double ylo, double w, double h, bool reproducible) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!reproducible) {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    os << "<!-- generated " << buf << " -->\n";
  }
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt_double(xlo) << " "
     << fmt_double(ylo) << " " << fmt_double(w) << " " << fmt_double(h) << "\">\n";
  return os.str();
}

void svg_ring(std::ostringstream& os, const std::vector<Vec>& ring, double s,
              const char* fill) {
  os << "<path d=\"";
  for (size_t i = 0; i < ring.size(); ++i) {
    os << (i == 0 ? 'M' : 'L') << fmt_double(ring[i].x * s) << ' ' << fmt_double(-ring[i].y * s);
  }
  os << "Z\" fill=\"" << fill << "\" fill-rule=\"evenodd\" stroke=\"black\" "
     << "stroke-width=\"1\"/>\n";
}

std::string svg_2d(const std::vector<const std::vector<Vec>*>& outers,
                   const std::vector<const std::vector<Vec>*>& holes, bool reproducible,
                   double s) {
  double xlo = 1e300, xhi = -1e300, ylo = 0.0, yhi = -1e300;
  for (const auto* r : outers) {
    for (const Vec& v : *r) {
      xlo = std::min(xlo, v.x * s);
      xhi = std::max(xhi, v.x * s);
      ylo = std::min(ylo, -v.y * s);
      yhi = std::max(yhi, -v.y * s);
    }
  }
  double margin = 0.05 * std::max(xhi - xlo, yhi - ylo) + 10.0;
  std::ostringstream os;
  os << svg_header(xlo - margin, ylo - margin, (xhi - xlo) + 2 * margin,
                   (yhi - ylo) + 2 * margin, reproducible);
  // Substrate line at height 0.
  os << "<line x1=\"" << fmt_double(xlo - margin) << "\" y1=\"0\" x2=\""
     << fmt_double(xhi + margin) << "\" y2=\"0\" stroke=\"gray\" stroke-width=\"2\"/>\n";
  for (const auto* r : outers) svg_ring(os, *r, s, "#d0d8e8");
  for (const auto* r : holes) svg_ring(os, *r, s, "white");
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string shape_to_svg(const SubstrateShape& s, bool reproducible, double px_per_unit) {
  if (s.dim() != 2) throw std::invalid_argument("SVG output is 2D only");
  std::vector<const std::vector<Vec>*> outers, holes;
  for (const PolygonWithHoles& pw : s.polygons()) {
    outers.push_back(&pw.outer);
    for (const auto& h : pw.holes) holes.push_back(&h);
  }
  return svg_2d(outers, holes, reproducible, px_per_unit);
}

std::string polytope_to_svg(const ConvexPolytope& p, bool reproducible, double px_per_unit) {
  if (p.dim() != 2) throw std::invalid_argument("SVG output is 2D only");
  std::vector<const std::vector<Vec>*> outers = {&p.vertices()};
  return svg_2d(outers, {}, reproducible, px_per_unit);
}

std::string polytope_to_off(const ConvexPolytope& p) {
  if (p.dim() != 3) throw std::invalid_argument("OFF output is 3D only");
  std::ostringstream os;
  os << "OFF\n" << p.vertices().size() << ' ' << p.facets().size() << " 0\n";
  for (const Vec& v : p.vertices())
    os << fmt_double(v.x) << ' ' << fmt_double(v.y) << ' ' << fmt_double(v.z) << '\n';
  for (const Facet& f : p.facets()) {
    os << f.vertices.size();
    for (int id : f.vertices) os << ' ' << id;
    os << '\n';
  }
  return os.str();
}

std::string trace_csv(const std::vector<double>& energies) {
  std::ostringstream os;
  os << "iteration,energy\n";
  for (size_t i = 0; i < energies.size(); ++i) os << i << ',' << fmt_double(energies[i]) << '\n';
  return os.str();
}

std::string wetting_csv(const std::vector<std::pair<double, EnergyBreakdown>>& rows) {
  std::ostringstream os;
  os << "R,free_surface,contact,total\n";
  for (const auto& [R, b] : rows) {
    os << fmt_double(R) << ',' << fmt_double(b.free_surface) << ',' << fmt_double(b.contact)
       << ',' << fmt_double(b.total) << '\n';
  }
  return os.str();
}

std::string stability_csv(const std::vector<StabilityRecord>& records) {
  std::ostringstream os;
  os << "family,param,asymmetry,deficit,ratio,tau_star,method\n";
  for (const StabilityRecord& r : records) {
    os << r.family << ',' << fmt_double(r.param) << ',' << fmt_double(r.asymmetry) << ','
       << fmt_double(r.deficit) << ',' << (r.ratio_valid ? fmt_double(r.ratio) : "") << ','
       << fmt_double(r.tau_star) << ',' << r.method << '\n';
  }
  return os.str();
}

std::string stability_scatter_svg(const std::vector<StabilityRecord>& records,
                                  bool reproducible) {
  // log-log scatter of squared asymmetry (y) against deficit (x)
  std::vector<std::pair<double, double>> pts;
  for (const StabilityRecord& r : records) {
    if (r.deficit > 0 && r.asymmetry > 0)
      pts.push_back({std::log10(r.deficit), std::log10(r.asymmetry * r.asymmetry)});
  }
  std::ostringstream os;
  if (pts.empty()) {
    os << svg_header(0, 0, 100, 100, reproducible) << "</svg>\n";
    return os.str();
  }
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (auto& [x, y] : pts) {
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  double w = 400, h = 400, m = 40;
  auto X = [&](double x) { return m + (x - xlo) / std::max(1e-12, xhi - xlo) * (w - 2 * m); };
  auto Y = [&](double y) { return h - m - (y - ylo) / std::max(1e-12, yhi - ylo) * (h - 2 * m); };
  os << svg_header(0, 0, w, h, reproducible);
  os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\""
     << h - 2 * m << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 8
     << "\" text-anchor=\"middle\" font-size=\"12\">log10 deficit</text>\n";
  os << "<text x=\"12\" y=\"" << h / 2
     << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 12 " << h / 2
     << ")\">log10 asymmetry^2</text>\n";
  for (auto& [x, y] : pts) {
    os << "<circle cx=\"" << fmt_double(X(x)) << "\" cy=\"" << fmt_double(Y(y))
       << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace wb
