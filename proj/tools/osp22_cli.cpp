// osp22: verification suites, profiles, symbols and trajectories.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "osp22/report.hpp"

namespace fs = std::filesystem;
using namespace osp22;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<int> nmax, nodes;
  std::optional<double> tol_algebra, tol_quadrature, tol_coherent, tol_residual, tol_isometry;
  std::optional<std::string> out, format;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key = value config file (default: $OSP22_CONFIG)");
  cmd->add_option("--nmax", o.nmax, "modes per sector for algebra checks");
  cmd->add_option("--nodes", o.nodes, "Gauss-Hermite nodes");
  cmd->add_option("--tol-algebra", o.tol_algebra);
  cmd->add_option("--tol-quadrature", o.tol_quadrature);
  cmd->add_option("--tol-coherent", o.tol_coherent);
  cmd->add_option("--tol-residual", o.tol_residual);
  cmd->add_option("--tol-isometry", o.tol_isometry);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "json or csv");
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg;
  std::string path = o.config_path;
  if (path.empty())
    if (const char* env = std::getenv("OSP22_CONFIG")) path = env;
  if (!path.empty()) cfg.load_file(path);
  if (o.nmax) cfg.nmax = *o.nmax;
  if (o.nodes) cfg.nodes = *o.nodes;
  if (o.tol_algebra) cfg.tol.algebra = *o.tol_algebra;
  if (o.tol_quadrature) cfg.tol.quadrature = *o.tol_quadrature;
  if (o.tol_coherent) cfg.tol.coherent = *o.tol_coherent;
  if (o.tol_residual) cfg.tol.residual = *o.tol_residual;
  if (o.tol_isometry) cfg.tol.isometry = *o.tol_isometry;
  if (o.out) cfg.out_dir = *o.out;
  if (o.format) cfg.format = *o.format;
  return cfg;
}

fs::path output_file(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigurationError("cannot write " + p.string());
  return out;
}

int cmd_verify(const std::string& suite, RunConfig cfg, const std::optional<std::string>& z_list) {
  if (z_list) {
    cfg.z_samples.clear();
    for (const auto& s : split_list(*z_list)) cfg.z_samples.push_back(parse_complex(s));
  }
  cfg.validate();
  const VerificationReport rep = run_suite(suite, cfg);
  const fs::path path = output_file(cfg, "report_" + suite + "." + cfg.format);
  auto out = open_output(path);
  if (cfg.format == "json")
    out << report_json(rep).dump(2) << "\n";
  else
    write_report_csv(out, rep);

  int failed = 0;
  for (const auto& r : rep.records)
    if (!r.pass) {
      ++failed;
      std::cerr << "FAIL " << r.id << ": defect " << r.defect << " tolerance " << r.tolerance << "\n";
    }
  std::cout << suite << ": " << rep.records.size() - failed << "/" << rep.records.size() << " checks pass ("
            << rep.wall_time_s << " s), report " << path.string() << "\n";
  return failed ? 1 : 0;
}

int cmd_profile(const RunConfig& cfg, cplx z, cplx alpha, double t, double xmin, double xmax, int points) {
  if (points < 2 || !(xmax > xmin)) throw ConfigurationError("profile grid needs xmax > xmin and points >= 2");
  const CoherentClosedForm cf = coherent_closed({z, alpha}, t);
  const fs::path path = output_file(cfg, "profile.csv");
  auto out = open_output(path);
  out << std::setprecision(17);
  out << "# z=" << format_complex(z) << " t=" << t << " alpha=" << format_complex(alpha)
      << " sigma=" << format_complex(cf.sigma) << " N=" << grassmann_json(cf.normalizer).dump() << "\n";
  out << "x,re_psi,im_psi,re_phi,im_phi\n";
  for (int k = 0; k < points; ++k) {
    const double x = xmin + (xmax - xmin) * k / (points - 1);
    const cplx p = cf.psi(x), f = cf.phi(x);
    out << x << "," << p.real() << "," << p.imag() << "," << f.real() << "," << f.imag() << "\n";
  }
  std::cout << "profile written to " << path.string() << "\n";
  return 0;
}

int cmd_symbols(RunConfig cfg) {
  cfg.validate();
  SymbolConvention conv;
  try {
    conv = convention_calibration(calibration_point(cfg), cfg.tol.coherent);
  } catch (const ContractViolation& e) {
    std::cerr << "calibration failed: " << e.what() << "\n";
    return 1;
  }
  const auto gens = GeneratorSet::standard();
  const Monomial a = Monomial{1} << gens->index("α"), ab = Monomial{1} << gens->index("ᾱ");
  json rows = json::array();
  bool ok = true;
  for (cplx z : cfg.z_samples)
    for (cplx alpha : {cplx{0.0}, cplx{1.0}}) {
      const CoherentParams p{z, alpha};
      const int nm = coherent_truncation(z, cfg.coherent_cap);
      for (Generator g : all_generators) {
        const GrassmannElement s = berezin_symbol(g, p, nm);
        const GrassmannElement e = expected_symbol(g, p, conv);
        // even symbols carry ᾱα, odd ones a single α or ᾱ
        const Monomial soul = generator_parity(g) == Parity::even ? (a | ab)
                              : conv == SymbolConvention::conjugate ? ab
                                                                    : a;
        const double defect = max_abs_diff(s, e);
        ok = ok && defect < cfg.tol.coherent;
        rows.push_back({{"generator", generator_name(g)},
                        {"z", complex_json(z)},
                        {"alpha_coeff", complex_json(alpha)},
                        {"soul_monomial", gens->monomial_name(soul)},
                        {"computed_body", complex_json(s.body())},
                        {"computed_soul_coeff", complex_json(s.coeff(soul))},
                        {"closed_form_body", complex_json(e.body())},
                        {"closed_form_soul_coeff", complex_json(e.coeff(soul))},
                        {"computed", grassmann_json(s)},
                        {"defect", defect}});
      }
    }
  json doc = {{"convention", convention_name(conv)}, {"tolerance", cfg.tol.coherent}, {"symbols", rows}};
  const fs::path path = output_file(cfg, "symbols.json");
  open_output(path) << doc.dump(2) << "\n";
  std::cout << "symbols (" << convention_name(conv) << ") written to " << path.string() << "\n";
  return ok ? 0 : 1;
}

int cmd_trajectory(const RunConfig& cfg, cplx z, cplx alpha, const std::vector<double>& ts) {
  if (ts.size() < 2) throw ConfigurationError("trajectory needs at least two times");
  const int nm = coherent_truncation(z, cfg.coherent_cap);
  const auto gens = GeneratorSet::standard();
  const Monomial ab = Monomial{1} << gens->index("ᾱ");
  std::vector<TrajectoryRecord> recs;
  for (double t : ts) recs.push_back(trajectory({z, alpha}, t, nm, cfg.quadrature()));

  // least-squares line through the S(xθ) coefficients
  double tm = 0.0;
  cplx xm{};
  for (const auto& r : recs) {
    tm += r.t;
    xm += r.x_theta.coeff(ab);
  }
  tm /= recs.size();
  xm /= double(recs.size());
  cplx num{};
  double den = 0.0;
  for (const auto& r : recs) {
    num += (r.t - tm) * (r.x_theta.coeff(ab) - xm);
    den += (r.t - tm) * (r.t - tm);
  }
  if (den == 0.0) throw ConfigurationError("trajectory times must not all coincide");
  const cplx slope = num / den, intercept = xm - slope * tm;

  const fs::path path = output_file(cfg, "trajectory.csv");
  auto out = open_output(path);
  out << std::setprecision(17);
  out << "# z=" << format_complex(z) << " alpha=" << format_complex(alpha) << " soul monomial ᾱ\n";
  out << "t,re_x_theta,im_x_theta,re_p_theta,im_p_theta,re_x0,im_x0,re_p0,im_p0,fit_residual,mean_x,mean_p\n";
  bool ok = true;
  const cplx p_first = recs.front().p_theta.coeff(ab);
  for (const auto& r : recs) {
    const cplx xs = r.x_theta.coeff(ab), ps = r.p_theta.coeff(ab);
    const double res = std::abs(xs - (intercept + slope * r.t));
    const double mx = std::max(std::abs(r.x_psi), std::abs(r.x_phi));
    const double mp = std::max(std::abs(r.p_psi), std::abs(r.p_phi));
    ok = ok && res < 1e-9 && std::abs(ps - p_first) < cfg.tol.quadrature && mx < cfg.tol.quadrature &&
         mp < cfg.tol.quadrature;
    out << r.t << "," << xs.real() << "," << xs.imag() << "," << ps.real() << "," << ps.imag() << ","
        << r.x0.real() << "," << r.x0.imag() << "," << r.p0.real() << "," << r.p0.imag() << "," << res << "," << mx
        << "," << mp << "\n";
  }
  std::cout << "trajectory written to " << path.string() << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"osp(2/2) supercoherent-state verification harness"};
  app.require_subcommand(1);

  Overrides ov;
  std::string suite = "all";
  std::optional<std::string> verify_z;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "grassmann, basis, superspace, algebra, coherent or all")
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--z", verify_z, "comma-separated z samples, e.g. 0.3,0.5i");
  add_common(verify, ov);

  std::string z_text = "0", alpha_text = "1", t_text = "0";
  double xmin = -8.0, xmax = 8.0;
  int points = 321;
  auto* profile = app.add_subcommand("profile", "sample ψ_z and φ_z on a grid (CSV)");
  profile->add_option("--z", z_text);
  profile->add_option("--alpha", alpha_text);
  profile->add_option("--t", t_text);
  profile->add_option("--xmin", xmin);
  profile->add_option("--xmax", xmax);
  profile->add_option("--points", points);
  add_common(profile, ov);

  auto* symbols = app.add_subcommand("symbols", "Berezin symbols of the eight generators (JSON)");
  add_common(symbols, ov);

  std::string t_list = "0,1,2,3";
  auto* traj = app.add_subcommand("trajectory", "odd-sector trajectory S(xθ), S(pθ) over times (CSV)");
  traj->add_option("--z", z_text);
  traj->add_option("--alpha", alpha_text);
  traj->add_option("--t", t_list, "comma-separated times");
  add_common(traj, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve(ov);
    if (*verify) return cmd_verify(suite, cfg, verify_z);
    if (*symbols) return cmd_symbols(cfg);
    cfg.validate();
    const cplx z = parse_complex(z_text), alpha = parse_complex(alpha_text);
    if (!(std::abs(z) < 1.0)) throw DomainError("|z| must be below 1");
    if (*profile) return cmd_profile(cfg, z, alpha, std::stod(t_text), xmin, xmax, points);
    std::vector<double> ts;
    for (const auto& s : split_list(t_list)) ts.push_back(std::stod(s));
    return cmd_trajectory(cfg, z, alpha, ts);
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
