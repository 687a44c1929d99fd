#include "convgeom/io.hpp"

#include <fstream>
#include <sstream>

namespace convgeom {

namespace {

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a matrix (array of rows)");
  std::size_t rows = j.size();
  std::size_t cols = j[0].size();
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Vec vec_from_json(const json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

BodyPtr body_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("body spec: missing \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "ellipsoid") return make_ellipsoid(mat_from_json(j.at("q")));
  if (kind == "pball") return make_pball(j.at("p").get<double>(), vec_from_json(j.at("scale")));
  if (kind == "polygon") {
    std::vector<Vec2> verts;
    for (const auto& row : j.at("vertices")) {
      if (row.size() != 2) throw std::invalid_argument("polygon vertices must be 2D");
      verts.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return make_polygon(std::move(verts));
  }
  if (kind == "halfspaces")
    return make_halfspace_body(mat_from_json(j.at("a")), vec_from_json(j.at("b")));
  if (kind == "linear")
    return make_linear_image(mat_from_json(j.at("m")), body_from_json(j.at("inner")));
  throw std::invalid_argument("body spec: unknown kind \"" + kind + "\"");
}

namespace {

json spec_node_to_json(const Body::SpecNode& n) {
  json j;
  switch (n.kind) {
    case BodyKind::Ellipsoid:
      j["kind"] = "ellipsoid";
      j["q"] = mat_to_json(n.mat);
      return j;
    case BodyKind::PBall:
      j["kind"] = "pball";
      j["p"] = n.scalar;
      j["scale"] = vec_to_json(n.vec);
      return j;
    case BodyKind::Polygon2D: {
      j["kind"] = "polygon";
      json verts = json::array();
      for (const auto& v : n.verts) verts.push_back(json::array({v.x(), v.y()}));
      j["vertices"] = verts;
      return j;
    }
    case BodyKind::Halfspaces:
      j["kind"] = "halfspaces";
      j["a"] = mat_to_json(n.mat);
      j["b"] = vec_to_json(n.vec);
      return j;
    case BodyKind::LinearImage:
      j["kind"] = "linear";
      j["m"] = mat_to_json(n.mat);
      j["inner"] = spec_node_to_json(*n.inner);
      return j;
  }
  throw std::logic_error("body_to_json: unhandled kind");
}

}  // namespace

json body_to_json(const Body& body) { return spec_node_to_json(body.spec_node()); }

BodyPtr load_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open body spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return body_from_json(j);
}

json to_json(const VolumeEstimate& est) {
  json j;
  j["value"] = est.value;
  j["abs_error"] = est.abs_error;
  j["method"] = method_used_name(est.method);
  j["samples"] = est.samples;
  if (!est.flag.empty()) j["flag"] = est.flag;
  return j;
}

json to_json(const OneSidedDerivatives& d) {
  json j;
  j["forward"] = d.forward;
  j["backward"] = d.backward;
  j["direction"] = vec_to_json(d.direction);
  j["c_plus_12"] = d.c_plus_12;
  j["c_minus_12"] = d.c_minus_12;
  j["c_plus_21"] = d.c_plus_21;
  j["c_minus_21"] = d.c_minus_21;
  return j;
}

json to_json(const GradientResult& g) {
  json j;
  j["gradient"] = vec_to_json(g.gradient);
  j["gradient_n_form"] = vec_to_json(g.gradient_n_form);
  j["normal_integral"] = vec_to_json(g.normal_integral);
  if (!g.flag.empty()) j["flag"] = g.flag;
  return j;
}

json hessian_to_json(const Mat& h) {
  json j;
  j["hessian"] = mat_to_json(h);
  return j;
}

json to_json(const RadialProfile& p) {
  json j;
  j["dim"] = p.grid.dim;
  j["resolution"] = p.grid.resolution;
  j["delta"] = p.delta;
  j["tau"] = p.tau;
  j["achieved_tol"] = p.achieved_tol;
  json dirs = json::array();
  json radii = json::array();
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    dirs.push_back(vec_to_json(p.grid.units[i]));
    radii.push_back(p.radii[i]);
  }
  j["directions"] = dirs;
  j["radii"] = radii;
  return j;
}

json to_json(const FlatnessReport& r) {
  json j;
  j["verdict"] =
      r.verdict == FlatnessVerdict::StrictlyConvex ? "strictly_convex" : "flat_segment_found";
  j["max_collinear_run"] = r.max_collinear_run;
  j["max_normal_jump"] = r.max_normal_jump;
  return j;
}

json to_json(const HomothetyCheck& c) {
  json j;
  j["is_homothet"] = c.is_homothet;
  j["scale"] = c.scale;
  j["max_rel_dev"] = c.max_rel_dev;
  return j;
}

json to_json(const CurvatureReport& r) {
  json j;
  j["x"] = vec_to_json(r.x);
  j["tau"] = r.tau;
  j["h_sequence"] = r.h_sequence;
  j["raw_estimates"] = r.raw_estimates;
  j["kappa"] = r.kappa;
  j["divergent"] = r.divergent;
  j["fit_exponent"] = r.fit_exponent;
  j["fit_residual"] = r.fit_residual;
  if (!r.flag.empty()) j["flag"] = r.flag;
  return j;
}

json to_json(const ShellSpreadReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["tau"] = r.tau;
  j["samples"] = r.samples;
  j["f_min"] = r.f_min;
  j["f_max"] = r.f_max;
  j["spread"] = r.spread;
  j["rel_spread"] = r.rel_spread;
  j["max_abs_error"] = r.max_abs_error;
  j["degenerate"] = r.degenerate;
  return j;
}

json to_json(const HomothetyNecessity& r) {
  json j;
  j["consistent"] = r.consistent;
  j["ratio_dev"] = r.ratio_dev;
  if (r.witness) j["witness"] = vec_to_json(*r.witness);
  return j;
}

json to_json(const CurvatureLawReport& r) {
  json j;
  json dirs = json::array();
  for (const auto& u : r.directions) dirs.push_back(vec_to_json(u));
  j["directions"] = dirs;
  j["values"] = r.values;
  j["mean_k"] = r.mean_k;
  j["max_rel_dev"] = r.max_rel_dev;
  j["violated"] = r.violated;
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

std::string profile_to_svg(const RadialProfile& profile) {
  if (profile.grid.dim != 2) throw std::invalid_argument("svg emission: 2D profiles only");
  std::size_t m = profile.radii.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vec &ua = profile.grid.units[a], &ub = profile.grid.units[b];
    return std::atan2(ua[1], ua[0]) < std::atan2(ub[1], ub[0]);
  });
  double r = 0.0;
  for (double v : profile.radii) r = std::max(r, v);
  r *= 1.05;
  std::ostringstream svg;
  svg.precision(10);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << -r << " " << -r << " " << 2 * r
      << " " << 2 * r << "\">\n<polygon fill=\"none\" stroke=\"black\" stroke-width=\""
      << 0.004 * r << "\" points=\"";
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 p = profile.point2d(order[i]);
    svg << p.x() << "," << -p.y() << " ";  // svg y grows downward
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

std::string profile_to_obj(const RadialProfile& profile) {
  if (profile.grid.dim != 3) throw std::invalid_argument("obj emission: 3D profiles only");
  std::ostringstream obj;
  obj.precision(10);
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const Vec& u = profile.grid.units[i];
    obj << "v " << profile.radii[i] * u[0] << " " << profile.radii[i] * u[1] << " "
        << profile.radii[i] * u[2] << "\n";
  }
  for (const auto& f : profile.grid.faces)
    obj << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  return obj.str();
}

}  // namespace convgeom
