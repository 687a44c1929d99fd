// convgeom: translate-intersection volumes F(x) = |K ∩ (x+τK)|, their
// derivatives, convolution bodies, volumic curvature, and the shell-spread
// characterization harness, over JSON body specs.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "convgeom/io.hpp"

namespace {

using namespace convgeom;

Vec parse_vec(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    vals.push_back(std::stod(item));
  }
  if (vals.empty()) throw std::invalid_argument("empty vector argument");
  Vec v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  Vec v = parse_vec(s);
  return std::vector<double>(v.data(), v.data() + v.size());
}

int emit(const json& j, const std::string& out_path, bool budget_exceeded) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
  }
  return budget_exceeded ? 3 : 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << content;
}

VolumeMethod parse_method(const std::string& m) {
  if (m == "auto") return VolumeMethod::Auto;
  if (m == "exact") return VolumeMethod::Exact;
  if (m == "mc") return VolumeMethod::MonteCarlo;
  throw std::invalid_argument("method must be auto, exact or mc");
}

struct CommonArgs {
  std::string body_path;
  std::string out_path;
  double tau = 1.0;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

int run(int argc, char** argv) {
  CLI::App app{"numerical convex-geometry toolkit for translate-intersection volumes"};
  app.require_subcommand(1);

  // volume
  auto* vol = app.add_subcommand("volume", "F(x) = |K ∩ (x+τK)| with an error bound");
  CommonArgs va;
  std::string vx, vmethod = "auto";
  vol->add_option("--body", va.body_path, "body spec JSON file")->required();
  vol->add_option("--tau", va.tau, "scale of the translated copy");
  vol->add_option("--x", vx, "translation vector, comma separated")->required();
  vol->add_option("--method", vmethod, "auto|exact|mc");
  vol->add_option("--tol", va.tol, "absolute error target");
  vol->add_option("--seed", va.seed, "Monte Carlo seed");
  vol->add_option("--out", va.out_path, "write JSON here instead of stdout");

  // convbody
  auto* conv = app.add_subcommand("convbody", "extract the convolution body K(δ,τ)");
  CommonArgs ca;
  double cdelta = 0.0;
  int cgrid = 512;
  bool cprobe = false;
  std::string csvg, cobj;
  conv->add_option("--body", ca.body_path)->required();
  conv->add_option("--delta", cdelta, "volume threshold δ")->required();
  conv->add_option("--tau", ca.tau);
  conv->add_option("--grid", cgrid, "directions (2D) or icosphere level (3D)");
  conv->add_flag("--probe", cprobe, "attach flatness + curvature-positivity probes");
  conv->add_option("--emit-svg", csvg, "write a 2D boundary drawing");
  conv->add_option("--emit-obj", cobj, "write a 3D mesh");
  conv->add_option("--tol", ca.tol, "radius tolerance");
  conv->add_option("--out", ca.out_path);

  // grad / hess
  auto* grad = app.add_subcommand("grad", "gradient of F by the surface-integral formula");
  CommonArgs ga;
  std::string gx;
  int gres = 48;
  grad->add_option("--body", ga.body_path)->required();
  grad->add_option("--tau", ga.tau);
  grad->add_option("--x", gx)->required();
  grad->add_option("--resolution", gres, "quadrature panels per arc");
  grad->add_option("--out", ga.out_path);

  auto* hess = app.add_subcommand("hess", "Hessian of F from the boundary crossing set");
  CommonArgs ha;
  std::string hx;
  int hres = 4096;
  hess->add_option("--body", ha.body_path)->required();
  hess->add_option("--tau", ha.tau);
  hess->add_option("--x", hx)->required();
  hess->add_option("--resolution", hres, "crossing sweep size");
  hess->add_option("--out", ha.out_path);

  // lemma21
  auto* lem = app.add_subcommand("lemma21", "one-sided derivatives of |K1 ∩ (ru+K2)| at r=0");
  std::string lk1, lk2, lu, lout;
  int lres = 1024;
  lem->add_option("--k1", lk1)->required();
  lem->add_option("--k2", lk2)->required();
  lem->add_option("--u", lu)->required();
  lem->add_option("--resolution", lres, "projection grid cells per axis");
  lem->add_option("--out", lout);

  // curvature
  auto* curv = app.add_subcommand("curvature", "Gauss-Kronecker curvature by the volumic limit");
  CommonArgs cva;
  std::string cvx;
  bool cap = false;
  double h0 = 0.0;
  int levels = 6;
  curv->add_option("--body", cva.body_path)->required();
  curv->add_option("--x", cvx, "boundary point")->required();
  curv->add_option("--tau", cva.tau);
  curv->add_flag("--cap", cap, "use the hyperplane-cap formula");
  curv->add_option("--h0", h0, "initial width (0 = auto)");
  curv->add_option("--levels", levels, "halvings of h");
  curv->add_option("--seed", cva.seed);
  curv->add_option("--out", cva.out_path);

  // shells
  auto* sh = app.add_subcommand("shells", "spread of F over gauge shells");
  CommonArgs sa;
  std::string salphas = "1";
  int sn = 256;
  sh->add_option("--body", sa.body_path)->required();
  sh->add_option("--tau", sa.tau);
  sh->add_option("--alphas", salphas, "shell levels, comma separated");
  sh->add_option("--n", sn, "samples per shell");
  sh->add_option("--seed", sa.seed);
  sh->add_option("--tol", sa.tol);
  sh->add_option("--out", sa.out_path);

  // charlaw
  auto* law = app.add_subcommand("charlaw", "curvature-law constancy of f(u)·h_K(u)^{n+1}");
  CommonArgs lwa;
  int lgrid = 16;
  bool volumic = false;
  law->add_option("--body", lwa.body_path)->required();
  law->add_option("--tau", lwa.tau);
  law->add_option("--grid", lgrid);
  law->add_flag("--volumic", volumic, "force volumic curvature estimates everywhere");
  law->add_option("--out", lwa.out_path);

  // homothety
  auto* hom = app.add_subcommand("homothety", "must L be homothetic to K for F to be ||.||_L-radial?");
  std::string hk, hl, homout;
  double htau = 1.0;
  hom->add_option("--k", hk)->required();
  hom->add_option("--l", hl)->required();
  hom->add_option("--tau", htau);
  hom->add_option("--out", homout);

  // report
  auto* rep = app.add_subcommand("report", "aggregate battery: CSV + markdown summary");
  CommonArgs ra;
  std::string ralphas = "0.5,1,1.5";
  std::string rdir = ".";
  rep->add_option("--body", ra.body_path)->required();
  rep->add_option("--tau", ra.tau);
  rep->add_option("--alphas", ralphas);
  rep->add_option("--seed", ra.seed);
  rep->add_option("--out-dir", rdir);

  CLI11_PARSE(app, argc, argv);

  if (vol->parsed()) {
    BodyPtr body = load_body_file(va.body_path);
    VolumeOptions opts;
    opts.tol = va.tol;
    opts.seed = va.seed;
    TranslateProblem p{body, va.tau, parse_vec(vx)};
    VolumeEstimate est = intersection_volume(p, parse_method(vmethod), opts);
    return emit(to_json(est), va.out_path, est.flag == "budget exceeded");
  }

  if (conv->parsed()) {
    BodyPtr body = load_body_file(ca.body_path);
    DirectionGrid grid = DirectionGrid::make(body->dim(), cgrid);
    RadialProfile prof = convolution_body(body, cdelta, ca.tau, grid, ca.tol);
    json j;
    j["profile"] = to_json(prof);
    if (cprobe && body->dim() == 2) {
      j["flatness"] = to_json(flatness_probe(prof));
      j["min_discrete_curvature"] = curvature_positivity_probe(prof);
      j["homothety_vs_body"] = to_json(homothety_check(prof, body));
    }
    if (!csvg.empty()) write_file(csvg, profile_to_svg(prof));
    if (!cobj.empty()) write_file(cobj, profile_to_obj(prof));
    return emit(j, ca.out_path, false);
  }

  if (grad->parsed()) {
    BodyPtr body = load_body_file(ga.body_path);
    TranslateProblem p{body, ga.tau, parse_vec(gx)};
    return emit(to_json(grad_F(p, gres)), ga.out_path, false);
  }

  if (hess->parsed()) {
    BodyPtr body = load_body_file(ha.body_path);
    TranslateProblem p{body, ha.tau, parse_vec(hx)};
    return emit(hessian_to_json(hessian_F(p, hres)), ha.out_path, false);
  }

  if (lem->parsed()) {
    OneSidedDerivatives d =
        one_sided_derivative(load_body_file(lk1), load_body_file(lk2), parse_vec(lu), lres);
    return emit(to_json(d), lout, false);
  }

  if (curv->parsed()) {
    BodyPtr body = load_body_file(cva.body_path);
    CurvatureSchedule sched;
    sched.h0 = h0;
    sched.levels = levels;
    VolumeOptions opts;
    opts.seed = cva.seed;
    Vec x = parse_vec(cvx);
    CurvatureReport r = cap ? cap_curvature(body, x, sched, opts)
                            : volumic_curvature(body, x, cva.tau, sched, opts);
    return emit(to_json(r), cva.out_path, r.flag == "h too small for volume tolerance");
  }

  if (sh->parsed()) {
    BodyPtr body = load_body_file(sa.body_path);
    VolumeOptions opts;
    opts.tol = std::min(sa.tol, 1e-9);
    opts.seed = sa.seed;
    json arr = json::array();
    for (double alpha : parse_list(salphas))
      arr.push_back(to_json(shell_spread(body, sa.tau, alpha, sn, sa.seed, opts)));
    json j;
    j["shells"] = arr;
    return emit(j, sa.out_path, false);
  }

  if (law->parsed()) {
    BodyPtr body = load_body_file(lwa.body_path);
    DirectionGrid grid = DirectionGrid::make(body->dim(), lgrid);
    CurvatureLawReport r = curvature_law(
        body, lwa.tau, grid, volumic ? CurvatureLawMode::Volumic : CurvatureLawMode::Oracle);
    return emit(to_json(r), lwa.out_path, false);
  }

  if (hom->parsed()) {
    HomothetyNecessity r = homothety_necessity(load_body_file(hk), load_body_file(hl), htau);
    return emit(to_json(r), homout, false);
  }

  if (rep->parsed()) {
    BodyPtr body = load_body_file(ra.body_path);
    VolumeOptions opts;
    opts.seed = ra.seed;
    opts.tol = 1e-9;
    std::ostringstream csv, md;
    csv.precision(17);
    md.precision(12);
    csv << "section,name,value\n";
    md << "# convgeom report\n\n";

    VolumeEstimate vol_est = body_volume(body, VolumeMethod::Auto, opts);
    csv << "volume,body_volume," << vol_est.value << "\n";
    md << "- |K| = " << vol_est.value << " (± " << vol_est.abs_error << ")\n";

    json shells_j = json::array();
    for (double alpha : parse_list(ralphas)) {
      ShellSpreadReport s = shell_spread(body, ra.tau, alpha, 128, ra.seed, opts);
      csv << "shells,rel_spread_alpha_" << alpha << "," << s.rel_spread << "\n";
      md << "- shell α=" << alpha << ": rel spread " << s.rel_spread << "\n";
      shells_j.push_back(to_json(s));
    }

    if (body->dim() == 2) {
      double delta = 0.5 * std::min(1.0, std::pow(ra.tau, body->dim())) * vol_est.value;
      RadialProfile prof =
          convolution_body(body, delta, ra.tau, DirectionGrid::polar(512), 1e-9, opts);
      FlatnessReport fl = flatness_probe(prof);
      csv << "convbody,delta," << delta << "\n";
      csv << "convbody,flatness,"
          << (fl.verdict == FlatnessVerdict::StrictlyConvex ? "strictly_convex"
                                                            : "flat_segment_found")
          << "\n";
      HomothetyCheck hc = homothety_check(prof, body);
      csv << "convbody,homothety_max_rel_dev," << hc.max_rel_dev << "\n";
      md << "- K(δ,τ) at δ=" << delta << ": "
         << (fl.verdict == FlatnessVerdict::StrictlyConvex ? "strictly convex"
                                                           : "flat segment found")
         << ", homothety deviation " << hc.max_rel_dev << "\n";
    }

    if (body->smooth()) {
      DirectionGrid grid = DirectionGrid::make(body->dim(), body->dim() == 2 ? 16 : 1);
      CurvatureLawReport lr = curvature_law(body, ra.tau, grid, CurvatureLawMode::Oracle);
      if (lr.violated) {
        csv << "charlaw,violated," << lr.reason << "\n";
        md << "- curvature law: " << lr.reason << "\n";
      } else {
        csv << "charlaw,mean_k," << lr.mean_k << "\n";
        csv << "charlaw,max_rel_dev," << lr.max_rel_dev << "\n";
        md << "- curvature law: mean k = " << lr.mean_k << ", max rel dev " << lr.max_rel_dev
           << "\n";
      }
    }

    write_file(rdir + "/report.csv", csv.str());
    write_file(rdir + "/report.md", md.str());
    std::cout << "wrote " << rdir << "/report.csv and " << rdir << "/report.md\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
