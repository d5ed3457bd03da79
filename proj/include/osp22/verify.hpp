#pragma once

// Verification suites and run configuration shared by the CLI and tests.

#include <chrono>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "basis.hpp"
#include "grassmann.hpp"
#include "representation.hpp"
#include "supercoherent.hpp"
#include "superspace.hpp"

namespace osp22 {

// ---------------------------------------------------------------------------
// Configuration

struct Tolerances {
  double algebra = 1e-12;
  double quadrature = 1e-10;
  double coherent = 1e-8;
  double residual = 1e-6;
  double isometry = 1e-6;
};

inline cplx parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigurationError("empty complex number");
  auto number = [&](std::string_view part, std::string_view whole) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    double v = 0.0;
    const char* first = part.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size())
      throw ConfigurationError("cannot parse complex number '" + std::string(whole) + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s, text), 0.0};
  const std::string_view body(s.data(), s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string_view::npos) return {0.0, number(body, text)};
  return {number(body.substr(0, split), text), number(body.substr(split), text)};
}

inline std::string format_complex(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

inline std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct RunConfig {
  int nmax = 32;
  int nodes = 200;
  Tolerances tol;
  std::vector<cplx> z_samples{0.3, cplx{0.0, 0.5}, -0.7, std::polar(0.8, std::numbers::pi / 4)};
  std::vector<double> t_samples{0.0, 1.0};
  std::string out_dir = ".";
  std::string format = "json";
  int coherent_cap = 512;  ///< largest truncation a coherent-state routine may pick
  std::uint64_t seed = 20260101;

  QuadratureSpec quadrature() const { return {nodes, 10.0, tol.quadrature}; }

  /// Throws ConfigurationError on anything a run could not honour.
  void validate() const {
    if (nmax < 4) throw ConfigurationError("nmax must be at least 4");
    if (nodes < 20) throw ConfigurationError("nodes must be at least 20");
    for (double v : {tol.algebra, tol.quadrature, tol.coherent, tol.residual, tol.isometry})
      if (!(v > 0.0)) throw ConfigurationError("tolerances must be positive");
    if (format != "json" && format != "csv") throw ConfigurationError("format must be json or csv");
    if (z_samples.empty() || t_samples.empty()) throw ConfigurationError("sample lists must not be empty");
    for (cplx z : z_samples) {
      if (!(std::abs(z) < 1.0)) throw ConfigurationError("z sample " + format_complex(z) + " outside the unit disk");
      try {
        coherent_truncation(z, coherent_cap);
      } catch (const TruncationError& e) {
        throw ConfigurationError("z sample " + format_complex(z) + " too close to the boundary: " + e.what());
      }
    }
  }

  /// key = value lines; '#' starts a comment.  Unknown keys are errors.
  void apply(const std::string& key, const std::string& value) {
    auto as_int = [&](const std::string& v) {
      int out = 0;
      const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
      if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigurationError("'" + key + "' needs an integer, got '" + v + "'");
      return out;
    };
    auto as_double = [&](const std::string& v) {
      double out = 0.0;
      const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
      if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigurationError("'" + key + "' needs a number, got '" + v + "'");
      return out;
    };
    if (key == "nmax") nmax = as_int(value);
    else if (key == "nodes") nodes = as_int(value);
    else if (key == "coherent_cap") coherent_cap = as_int(value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(as_int(value));
    else if (key == "tol.algebra") tol.algebra = as_double(value);
    else if (key == "tol.quadrature") tol.quadrature = as_double(value);
    else if (key == "tol.coherent") tol.coherent = as_double(value);
    else if (key == "tol.residual") tol.residual = as_double(value);
    else if (key == "tol.isometry") tol.isometry = as_double(value);
    else if (key == "out") out_dir = value;
    else if (key == "format") format = value;
    else if (key == "z_samples") {
      z_samples.clear();
      for (const auto& s : split_list(value)) z_samples.push_back(parse_complex(s));
    } else if (key == "t_samples") {
      t_samples.clear();
      for (const auto& s : split_list(value)) t_samples.push_back(as_double(s));
    } else {
      throw ConfigurationError("unknown config key '" + key + "'");
    }
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigurationError(path + ":" + std::to_string(lineno) + ": expected key = value");
      apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }
};

// ---------------------------------------------------------------------------
// Records

struct CheckRecord {
  std::string id;
  std::string anchor;  ///< the relation being checked, as text
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckRecord> records;
  double wall_time_s = 0.0;
  RunConfig config;

  bool pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return !records.empty();
  }
};

inline CheckRecord check_below(std::string id, std::string anchor, double defect, double tol) {
  const bool ok = std::isfinite(defect) && defect < tol;
  return {std::move(id), std::move(anchor), defect, tol, ok};
}

/// Exact checks: defect must be 0.
inline CheckRecord check_exact(std::string id, std::string anchor, double defect) {
  return {std::move(id), std::move(anchor), defect, 0.0, defect == 0.0};
}

// ---------------------------------------------------------------------------
// Random data

namespace detail {

/// Coefficients are small Gaussian integers, so Grassmann arithmetic on
/// them is exact and any sign slip shows up as an O(1) defect.
inline cplx random_gaussian_integer(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-4, 4);
  return {double(d(rng)), double(d(rng))};
}

inline GrassmannElement random_grassmann(std::mt19937_64& rng, const GeneratorSetPtr& gens,
                                         std::optional<Parity> parity = std::nullopt, int terms = 6) {
  const Monomial full = (Monomial{1} << gens->size()) - 1;
  std::uniform_int_distribution<Monomial> pick(0, full);
  GrassmannElement e(gens);
  for (int k = 0; k < terms; ++k) {
    Monomial m = pick(rng);
    if (parity && static_cast<int>(degree(m) & 1) != parity_bit(*parity)) m ^= 1;
    e.add_term(m, random_gaussian_integer(rng));
  }
  return e;
}

/// Random SuperVector on modes n < support with coefficients free of θ.
inline SuperVector random_super_vector(std::mt19937_64& rng, int nmax, int support, Parity parity) {
  std::normal_distribution<double> nd;
  auto rc = [&] { return cplx{nd(rng), nd(rng)}; };
  const auto a = GrassmannElement::generator("α"), ab = GrassmannElement::generator("ᾱ");
  const auto x = GrassmannElement::generator("ξ"), xb = GrassmannElement::generator("ξ̄");
  SuperVector v(nmax);
  for (int n = 0; n < std::min(support, nmax); ++n) {
    GrassmannElement even(rc());
    even += rc() * (a * ab) + rc() * (x * xb) + rc() * (a * x);
    GrassmannElement odd = rc() * a + rc() * ab + rc() * x + rc() * (a * ab * xb);
    const bool flip = parity == Parity::odd;
    v.set(SectorParity::even_slot, n, flip ? odd : even);
    v.set(SectorParity::odd_slot, n, flip ? even : odd);
  }
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suites

inline std::vector<CheckRecord> suite_grassmann(const RunConfig& cfg, int cases = 1000) {
  std::mt19937_64 rng(cfg.seed);
  const auto gens = GeneratorSet::standard();
  double assoc = 0, comm = 0, conj_hom = 0, conj_inv = 0, distrib = 0, berezin = 0, inverse = 0;
  const auto theta = GrassmannElement::generator("θ"), thetabar = GrassmannElement::generator("θ̄");
  for (int k = 0; k < cases; ++k) {
    const auto a = detail::random_grassmann(rng, gens), b = detail::random_grassmann(rng, gens),
               c = detail::random_grassmann(rng, gens);
    assoc = std::max(assoc, max_abs_diff((a * b) * c, a * (b * c)));
    distrib = std::max(distrib, max_abs_diff(a * (b + c), a * b + a * c));
    conj_hom = std::max(conj_hom, max_abs_diff(gr_conj(a * b), gr_conj(a) * gr_conj(b)));
    conj_inv = std::max(conj_inv, max_abs_diff(gr_conj(gr_conj(a)), a));

    const Parity pa = rng() & 1 ? Parity::odd : Parity::even;
    const Parity pb = rng() & 1 ? Parity::odd : Parity::even;
    const auto ha = detail::random_grassmann(rng, gens, pa), hb = detail::random_grassmann(rng, gens, pb);
    const double s = parity_bit(pa) * parity_bit(pb) ? -1.0 : 1.0;
    comm = std::max(comm, max_abs_diff(ha * hb, s * (hb * ha)));

    // c free of θ, θ̄: ∫ c θ̄θ dθ dθ̄ = c, ∫ c θθ̄ = −c, lower θ-degree integrates to 0
    GrassmannElement free(gens);
    for (const auto& [m, v] : c.terms())
      if (!(m & 0b11)) free.add_term(m, v);
    berezin = std::max(berezin, max_abs_diff(gr_berezin(free * (thetabar * theta), {"θ", "θ̄"}), free));
    berezin = std::max(berezin, max_abs_diff(gr_berezin(free * (theta * thetabar), {"θ", "θ̄"}), -free));
    berezin = std::max(berezin, gr_berezin(free * theta + free, {"θ", "θ̄"}).max_abs());

    GrassmannElement unit = a.soul();
    unit += GrassmannElement(cplx{1.0 + std::abs(a.body())}, gens);
    const GrassmannElement prod = unit * gr_inverse(unit) - GrassmannElement(cplx{1.0}, gens);
    inverse = std::max(inverse, prod.max_abs());
  }
  const double tol = 1e-14;
  std::vector<CheckRecord> r;
  r.push_back(check_below("grassmann.associativity", "(ab)c = a(bc)", assoc, tol));
  r.push_back(check_below("grassmann.distributivity", "a(b+c) = ab+ac", distrib, tol));
  r.push_back(check_below("grassmann.supercommutativity", "ab = (-1)^{p(a)p(b)} ba", comm, tol));
  r.push_back(check_below("grassmann.conj_homomorphism", "conj(ab) = conj(a)conj(b)", conj_hom, tol));
  r.push_back(check_below("grassmann.conj_involution", "conj(conj(a)) = a", conj_inv, tol));
  r.push_back(check_below("grassmann.berezin_normalization", "∫θ̄θ dθ dθ̄ = 1", berezin, tol));
  r.push_back(check_below("grassmann.inverse", "a·a⁻¹ = 1", inverse, 1e-12));

  const auto th = GrassmannElement::generator("θ");
  r.push_back(check_exact("grassmann.nilpotency", "θθ = 0", (th * th).max_abs()));
  const auto al = GrassmannElement::generator("α"), ab = GrassmannElement::generator("ᾱ");
  const GrassmannElement ex = I * (ab * al);
  r.push_back(check_exact("grassmann.conj_example", "conj(iᾱα) = iᾱα", max_abs_diff(gr_conj(ex), ex)));
  r.push_back(check_exact("grassmann.conj_generator", "conj(θ̄) = θ", max_abs_diff(gr_conj(thetabar), theta)));
  return r;
}

inline std::vector<CheckRecord> suite_basis(const RunConfig& cfg) {
  const QuadratureSpec q = cfg.quadrature();
  const unsigned mmax = 20;
  std::vector<CheckRecord> r;
  for (double t : {0.0, 0.5, 2.0}) {
    const Eigen::MatrixXcd gram = basis_gram(mmax, t, q);
    const double d = (gram - Eigen::MatrixXcd::Identity(mmax + 1, mmax + 1)).cwiseAbs().maxCoeff();
    std::ostringstream id;
    id << "basis.orthonormality.t" << t;
    r.push_back(check_below(id.str(), "⟨χ_m|χ_n⟩ = δ_mn, m,n ≤ 20", d, cfg.tol.quadrature));
  }

  double residual = 0.0;
  for (unsigned m = 0; m <= mmax; ++m)
    for (double x : {-3.0, -1.5, 0.0, 1.5, 3.0})
      for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0})
        residual = std::max(residual, schrodinger_residual(
                                          [m](double xx, double tt) { return eval_chi(BasisMode{m}, xx, tt); }, x, t));
  r.push_back(check_below("basis.schrodinger_residual", "i∂ₜχ_m + ∂ₓ²χ_m = 0", residual, cfg.tol.residual));

  // ladder matrix elements and k₀ by quadrature of the differential operators
  double up = 0.0, down = 0.0, k0 = 0.0;
  for (double t : {0.0, 0.5, 2.0}) {
    const auto& rule = gauss_hermite(q.nodes);
    const double jac = std::numbers::sqrt2 * basis_envelope_scale(t);
    const int dim = mmax + 2;
    Eigen::MatrixXcd vals(q.nodes, dim), ap(q.nodes, dim), am(q.nodes, dim), kk(q.nodes, dim);
    const auto raise = ladder_operator(LadderSign::raise, t), lower = ladder_operator(LadderSign::lower, t);
    for (int k = 0; k < q.nodes; ++k) {
      const double x = jac * rule.nodes[k];
      const auto jets = eval_chi_all(dim - 1, x, t);
      const double w = std::sqrt(jac * rule.scaled_weights[k]);
      for (int m = 0; m < dim; ++m) {
        vals(k, m) = w * jets[m].value;
        ap(k, m) = w * raise.apply(jets[m], x).first;
        am(k, m) = w * lower.apply(jets[m], x).first;
        kk(k, m) = w * apply_k0(jets[m], x, t);
      }
    }
    const Eigen::MatrixXcd mp = vals.adjoint() * ap, mm = vals.adjoint() * am, mk = vals.adjoint() * kk;
    for (int i = 0; i <= int(mmax); ++i)
      for (int j = 0; j <= int(mmax); ++j) {
        const double ep = i == j + 1 ? 0.5 * std::sqrt(j + 1.0) : 0.0;
        const double em = i + 1 == j ? 0.5 * std::sqrt(double(j)) : 0.0;
        const double ek = i == j ? 0.5 * j + 0.25 : 0.0;
        up = std::max(up, std::abs(mp(i, j) - ep));
        down = std::max(down, std::abs(mm(i, j) - em));
        k0 = std::max(k0, std::abs(mk(i, j) - ek));
      }
  }
  r.push_back(check_below("basis.ladder_raise", "⟨χ_{m+1}|a⁺χ_m⟩ = ½√(m+1)", up, cfg.tol.quadrature));
  r.push_back(check_below("basis.ladder_lower", "⟨χ_{m-1}|a⁻χ_m⟩ = ½√m", down, cfg.tol.quadrature));
  r.push_back(check_below("basis.k0_spectrum", "k₀χ_m = (m/2 + ¼)χ_m", k0, cfg.tol.quadrature));

  const double v00 = std::abs(eval_chi(BasisMode{0}, 0.0, 0.0) - std::pow(2.0 * std::numbers::pi, -0.25));
  r.push_back(check_below("basis.chi0_origin", "χ₀(0,0) = (2π)^{-1/4}", v00, 1e-15));

  // symmetry operators map solutions to solutions
  double sym = 0.0;
  for (auto op : {SymmetryOp::K2, SymmetryOp::K1, SymmetryOp::Km1, SymmetryOp::Dilation})
    for (unsigned m : {0u, 3u, 6u})
      for (double x : {-1.3, 0.4, 2.1})
        sym = std::max(sym, schrodinger_residual(
                                [&](double xx, double tt) { return apply_symmetry_op(op, BasisMode{m}, xx, tt); }, x, 0.3));
  r.push_back(check_below("basis.symmetry_solutions", "Schrödinger symmetries preserve solutions", sym, cfg.tol.residual));

  const cplx gauss = quad_integrate([](double x) { return cplx{std::exp(-x * x)}; }, 1.0 / std::numbers::sqrt2, q);
  r.push_back(check_below("basis.quadrature_gaussian", "∫e^{-x²} = √π", std::abs(gauss - std::sqrt(std::numbers::pi)),
                          cfg.tol.quadrature));
  return r;
}

inline std::vector<CheckRecord> suite_superspace(const RunConfig& cfg, int pairs = 100) {
  std::mt19937_64 rng(cfg.seed + 1);
  const int n = 8;
  const QuadratureSpec q = cfg.quadrature();
  double oracle = 0.0, symmetry = 0.0, adj = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Parity p1 = rng() & 1 ? Parity::odd : Parity::even, p2 = rng() & 1 ? Parity::odd : Parity::even;
    const SuperVector a = detail::random_super_vector(rng, n, n, p1), b = detail::random_super_vector(rng, n, n, p2);
    oracle = std::max(oracle, max_abs_diff(sv_super_inner(a, b), sv_super_inner_berezin(a, b, 0.0, q)));
    const double s = parity_bit(p1) * parity_bit(p2) ? -1.0 : 1.0;
    symmetry = std::max(symmetry, max_abs_diff(gr_conj(sv_super_inner(a, b)), s * sv_super_inner(b, a)));
    if (k < 16) {
      for (Generator g : all_generators) {
        const SuperOperator op = build_generator(g, n);
        adj = std::max(adj, superadjoint_defect(op, a, b, op_superadjoint(op)).max_abs());
      }
    }
  }
  std::vector<CheckRecord> r;
  r.push_back(check_below("superspace.berezin_oracle", "Berezin-integral form = coefficient form", oracle, cfg.tol.quadrature));
  r.push_back(check_below("superspace.conjugate_symmetry", "conj((Φ₁|Φ₂)) = (-1)^{p₁p₂}(Φ₂|Φ₁)", symmetry, 1e-12));
  r.push_back(check_below("superspace.adjoint_pairing", "(A⁺Φ₁|Φ₂) = (-1)^{p(Φ₁)p(A)}(Φ₁|AΦ₂)", adj, 1e-12));

  const auto al = GrassmannElement::generator("α"), ab = GrassmannElement::generator("ᾱ");
  const SuperVector v = al * SuperVector::basis(n, SectorParity::odd_slot, 0);
  r.push_back(check_below("superspace.odd_norm_example", "(αΨ₀¹|αΨ₀¹) = -iᾱα",
                          max_abs_diff(sv_super_inner(v, v), -I * (ab * al)), 1e-15));
  r.push_back(check_below("superspace.odd_norm_example_oracle", "(αΨ₀¹|αΨ₀¹) = -iᾱα, Berezin route",
                          max_abs_diff(sv_super_inner_berezin(v, v, 0.0, q), -I * (ab * al)), cfg.tol.quadrature));

  bool rejected = false;
  try {
    SuperVector w(n);
    w.set(SectorParity::even_slot, 0, GrassmannElement::generator("θ"));
  } catch (const ContractViolation&) {
    rejected = true;
  }
  r.push_back(check_exact("superspace.theta_free_coefficients", "coefficients carrying θ are rejected", rejected ? 0.0 : 1.0));
  return r;
}

inline std::vector<CheckRecord> suite_algebra(const RunConfig& cfg) {
  const int n = cfg.nmax;
  std::vector<CheckRecord> r;
  for (const auto& d : verify_structure(n, cfg.tol.algebra, 20, cfg.seed + 2))
    r.push_back(check_below("algebra.table." + d.relation, d.relation, d.max_defect, cfg.tol.algebra));

  const VacuumReport vac = vacuum_checks(n);
  for (const auto& c : vac.checks)
    r.push_back({"algebra.vacuum." + c.relation, c.relation, c.max_defect, 0.0, c.pass});
  const std::vector<Generator> expected_iso{Generator::K0, Generator::Km, Generator::B,
                                            Generator::Vm, Generator::Wp, Generator::Wm};
  r.push_back(check_exact("algebra.vacuum.isotropy", "isotropy of Ψ₀⁰ = {K0, K-, B, V-, W+, W-}",
                          vac.isotropy == expected_iso ? 0.0 : 1.0));

  auto G = [n](Generator g) { return build_generator(g, n); };
  auto adj_defect = [&](Generator g, const SuperOperator& expected) {
    return (op_superadjoint(G(g)).matrix - expected.matrix).max_abs();
  };
  using Gn = Generator;
  r.push_back(check_below("algebra.adjoint.K0", "K0⁺ = K0", adj_defect(Gn::K0, G(Gn::K0)), cfg.tol.algebra));
  r.push_back(check_below("algebra.adjoint.K±", "K±⁺ = K∓",
                          std::max(adj_defect(Gn::Kp, G(Gn::Km)), adj_defect(Gn::Km, G(Gn::Kp))), cfg.tol.algebra));
  r.push_back(check_below("algebra.adjoint.B", "B⁺ = B", adj_defect(Gn::B, G(Gn::B)), cfg.tol.algebra));
  r.push_back(check_below("algebra.adjoint.V±", "V±⁺ = iW∓",
                          std::max(adj_defect(Gn::Vp, I * G(Gn::Wm)), adj_defect(Gn::Vm, I * G(Gn::Wp))),
                          cfg.tol.algebra));
  r.push_back(check_below("algebra.adjoint.W±", "W±⁺ = iV∓",
                          std::max(adj_defect(Gn::Wp, I * G(Gn::Vm)), adj_defect(Gn::Wm, I * G(Gn::Vp))),
                          cfg.tol.algebra));

  std::mt19937_64 rng(cfg.seed + 3);
  std::normal_distribution<double> nd;
  double prod = 0.0, comm = 0.0;
  for (int k = 0; k < 20; ++k) {
    SuperOperator a = G(all_generators[rng() % 8]), c = G(all_generators[rng() % 8]);
    a = cplx{nd(rng), nd(rng)} * a;
    if (k % 2) c = (cplx{nd(rng), nd(rng)} * GrassmannElement::generator("ξ")) * c;
    const double s = parity_bit(a.parity) * parity_bit(c.parity) ? -1.0 : 1.0;
    prod = std::max(prod, (op_superadjoint(a * c).matrix - s * (op_superadjoint(c) * op_superadjoint(a)).matrix).max_abs());
    comm = std::max(comm, (op_superadjoint(op_supercommutator(a, c)).matrix +
                           op_supercommutator(op_superadjoint(a), op_superadjoint(c)).matrix)
                              .max_abs());
  }
  r.push_back(check_below("algebra.adjoint.product", "(AC)⁺ = (-1)^{p(A)p(C)} C⁺A⁺", prod, cfg.tol.algebra));
  r.push_back(check_below("algebra.adjoint.commutator", "[A,C]⁺ = -[A⁺,C⁺]", comm, cfg.tol.algebra));

  double herm = 0.0;
  for (int j = 1; j <= 8; ++j) {
    const SuperOperator x = super_hermitian_base(j, n);
    const double s = x.parity == Parity::odd ? -1.0 : 1.0;
    herm = std::max(herm, (op_superadjoint(x).matrix - s * x.matrix).max_abs());
  }
  r.push_back(check_below("algebra.super_hermitian_base", "X_j⁺ = (-1)^{p(X_j)} X_j", herm, cfg.tol.algebra));

  for (const auto& d : hamiltonian_check(n, 6, cfg.quadrature())) {
    const std::string id = "algebra.hamiltonian." + d.relation;
    if (d.relation == "h preserves sectors") {
      r.push_back(check_exact(id, d.relation, d.max_defect));
      continue;
    }
    // function-space checks go through χ evaluation and quadrature
    const bool numeric = d.relation.find('=') != std::string::npos && d.relation.find("χ") != std::string::npos;
    r.push_back(check_below(id, d.relation, d.max_defect, numeric ? 1e-8 : cfg.tol.algebra));
  }
  return r;
}

/// First sample off the real axis, which calibration needs.
inline cplx calibration_point(const RunConfig& cfg) {
  for (cplx z : cfg.z_samples)
    if (std::abs(z.imag()) > 1e-3 && std::abs(z) > 0.0 && std::abs(z) < 0.9) return z;
  return {0.3, 0.4};
}

inline std::vector<CheckRecord> suite_coherent(const RunConfig& cfg) {
  const QuadratureSpec q = cfg.quadrature();
  std::vector<CheckRecord> r;
  CoherentCrosscheck worst;
  double psi_norm = 0.0, phi_norm = 0.0;
  for (cplx z : cfg.z_samples)
    for (double t : cfg.t_samples)
      for (cplx a : {cplx{0.0}, cplx{1.0}}) {
        const CoherentParams p{z, a};
        const CoherentCrosscheck c = coherent_crosscheck(p, t, coherent_truncation(z, cfg.coherent_cap), q);
        worst.closed_vs_series = std::max(worst.closed_vs_series, c.closed_vs_series);
        worst.closed_vs_gamma = std::max(worst.closed_vs_gamma, c.closed_vs_gamma);
        worst.series_vs_gamma = std::max(worst.series_vs_gamma, c.series_vs_gamma);
        worst.residual_psi = std::max(worst.residual_psi, c.residual_psi);
        worst.residual_phi = std::max(worst.residual_phi, c.residual_phi);
        worst.norm_closed = std::max(worst.norm_closed, c.norm_closed);
        worst.norm_series = std::max(worst.norm_series, c.norm_series);
        if (a == cplx{0.0}) {
          const CoherentClosedForm cf = coherent_closed(p, t);
          const double s = cf.envelope_scale();
          const double pn = quad_integrate([&](double x) { return cplx{std::norm(cf.psi(x))}; }, s, q).real();
          const double fn = quad_integrate([&](double x) { return cplx{std::norm(cf.phi(x))}; }, s, q).real();
          psi_norm = std::max(psi_norm, std::abs(pn - 1.0));
          phi_norm = std::max(phi_norm, std::abs(fn - 0.25 / (1.0 - std::norm(z))));
        }
      }
  const double tc = cfg.tol.coherent;
  r.push_back(check_below("coherent.closed_vs_series", "closed form = N′exp(zK₊)(1+αV₊)Ψ₀⁰", worst.closed_vs_series, tc));
  r.push_back(check_below("coherent.closed_vs_gamma", "closed form = Γ-expansion", worst.closed_vs_gamma, tc));
  r.push_back(check_below("coherent.series_vs_gamma", "series = Γ-expansion", worst.series_vs_gamma, tc));
  r.push_back(check_below("coherent.residual_psi", "ψ_z solves the Schrödinger equation", worst.residual_psi, cfg.tol.residual));
  r.push_back(check_below("coherent.residual_phi", "φ_z solves the Schrödinger equation", worst.residual_phi, cfg.tol.residual));
  r.push_back(check_below("coherent.norm_closed", "(Ψ_zα|Ψ_zα) = 1 with N", worst.norm_closed, 1e-12));
  r.push_back(check_below("coherent.norm_series", "(Ψ_zα|Ψ_zα) = 1 with N′", worst.norm_series, 1e-12));
  r.push_back(check_below("coherent.psi_unit", "⟨ψ_z|ψ_z⟩ = 1", psi_norm, cfg.tol.quadrature));
  r.push_back(check_below("coherent.phi_norm", "‖φ_z‖² = 1/(4(1-|z|²))", phi_norm, cfg.tol.quadrature));

  const ExpansionCoeffs ec = coherent_expansion_coeffs(cplx{0.3, 0.4}, 3);
  const double pre = std::pow(1.0 - 0.25, 0.25);
  const double gd = std::max({std::abs(ec.even[0] - pre), std::abs(ec.odd[0] - 0.5 * pre),
                              std::abs(ec.even[1] / ec.even[0] - cplx{0.3, 0.4} * std::sqrt(0.5))});
  r.push_back(check_below("coherent.gamma_coefficients", "Γ coefficients at n = 0, 1", gd, 1e-15));

  // symbols
  const cplx zc = calibration_point(cfg);
  SymbolConvention conv = SymbolConvention::identity;
  bool calibrated = true;
  try {
    conv = convention_calibration(zc, tc);
  } catch (const ContractViolation&) {
    calibrated = false;
  }
  r.push_back(check_exact("coherent.calibration", "S(K+) ∝ z̄: symbols read at (z̄, ᾱ, α)",
                          calibrated && conv == SymbolConvention::conjugate ? 0.0 : 1.0));
  for (Generator g : all_generators) {
    double d = 0.0;
    for (cplx z : cfg.z_samples)
      for (cplx a : {cplx{0.0}, cplx{1.0}}) {
        const CoherentParams p{z, a};
        const int nm = coherent_truncation(z, cfg.coherent_cap);
        d = std::max(d, max_abs_diff(berezin_symbol(g, p, nm), expected_symbol(g, p, conv)));
      }
    r.push_back(check_below(std::string("coherent.symbol.") + generator_name(g),
                            std::string("S(") + generator_name(g) + ") = closed form", d, tc));
  }

  // trajectory
  double p_spread = 0.0, fit = 0.0, intercept = 0.0, slope = 0.0, xp = 0.0;
  const Monomial abar = Monomial{1} << GeneratorSet::standard()->index("ᾱ");
  for (cplx z : cfg.z_samples) {
    const CoherentParams p{z, cplx{0.6, -0.8}};
    const int nm = coherent_truncation(z, cfg.coherent_cap);
    std::vector<double> ts{0.0, 1.0, 2.0, 3.0};
    std::vector<cplx> xs;
    cplx p_first{};
    for (double t : ts) {
      const TrajectoryRecord tr = trajectory(p, t, nm, q);
      const cplx pc = tr.p_theta.coeff(abar);
      if (t == 0.0) p_first = pc;
      p_spread = std::max(p_spread, std::abs(pc - p_first));
      xs.push_back(tr.x_theta.coeff(abar));
      xp = std::max({xp, std::abs(tr.x_psi), std::abs(tr.x_phi), std::abs(tr.p_psi), std::abs(tr.p_phi)});
    }
    // least-squares line through (t, S(xθ))
    const double tm = 1.5;
    cplx xm{};
    for (auto v : xs) xm += v;
    xm /= 4.0;
    cplx num{};
    double den = 0.0;
    for (int k = 0; k < 4; ++k) {
      num += (ts[k] - tm) * (xs[k] - xm);
      den += (ts[k] - tm) * (ts[k] - tm);
    }
    const cplx b = num / den, a0 = xm - b * tm;
    for (int k = 0; k < 4; ++k) fit = std::max(fit, std::abs(xs[k] - (a0 + b * ts[k])));
    const cplx abar_coeff = std::conj(p.alpha);
    intercept = std::max(intercept, std::abs(a0 - trajectory_x0(z) * abar_coeff));
    slope = std::max(slope, std::abs(b - 2.0 * trajectory_p0(z) * abar_coeff));
    slope = std::max(slope, std::abs(b - 2.0 * p_first));
  }
  r.push_back(check_below("coherent.trajectory.p_constant", "S(pθ) = p₀ᾱ for all t", p_spread, cfg.tol.quadrature));
  r.push_back(check_below("coherent.trajectory.affine", "S(xθ) affine in t", fit, 1e-9));
  r.push_back(check_below("coherent.trajectory.intercept", "S(xθ) at t = 0 is x₀ᾱ", intercept, 1e-9));
  r.push_back(check_below("coherent.trajectory.slope", "dS(xθ)/dt = 2p₀ᾱ = 2S(pθ)", slope, 1e-9));
  r.push_back(check_below("coherent.trajectory.even_static", "⟨x⟩ = ⟨p⟩ = 0 on ψ_z and φ_z", xp, cfg.tol.quadrature));

  // displacement
  const int nd = 64;
  std::mt19937_64 rng(cfg.seed + 4);
  double iso = 0.0, overlap = 0.0;
  for (cplx z : {cplx{0.3}, cplx{0.0, 0.3}, std::polar(0.3, 2.0), cplx{0.1, -0.2}}) {
    const CoherentParams p{z, cplx{0.7, 0.4}};
    const SuperOperator d = displacement_prime(p, nd);
    for (int k = 0; k < 3; ++k) {
      const Parity p1 = rng() & 1 ? Parity::odd : Parity::even, p2 = rng() & 1 ? Parity::odd : Parity::even;
      const SuperVector a = detail::random_super_vector(rng, nd, 9, p1), b = detail::random_super_vector(rng, nd, 9, p2);
      iso = std::max(iso, max_abs_diff(sv_super_inner(apply(d, a), apply(d, b)), sv_super_inner(a, b)) /
                              std::max(1.0, sv_super_inner(a, b).max_abs()));
    }
    const SuperVector moved = apply(displacement_prime({z, 0.0}, nd), SuperVector::basis(nd, SectorParity::even_slot, 0));
    const SuperVector target = coherent_series({disentangled_point(z), 0.0}, nd);
    overlap = std::max(overlap, std::abs(std::abs(sv_super_inner(target, moved).body()) - 1.0));
  }
  r.push_back(check_below("coherent.displacement.superisometry", "(D′Φ₁|D′Φ₂) = (Φ₁|Φ₂)", iso, cfg.tol.isometry));
  r.push_back(check_below("coherent.displacement.vacuum_orbit", "|(Ψ_ζ|D′(z,0)Ψ₀⁰)| = 1", overlap, cfg.tol.isometry));
  const SuperOperator d0 = displacement_prime({0.0, 0.0}, 8);
  r.push_back(check_exact("coherent.displacement.identity", "D′(0,0) = 1",
                          (d0.matrix - identity_operator(8).matrix).max_abs()));
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"grassmann", "basis", "superspace", "algebra", "coherent", "all"};
  return names;
}

inline VerificationReport run_suite(const std::string& suite, const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.suite = suite;
  rep.config = cfg;
  auto add = [&](std::vector<CheckRecord> v) {
    for (auto& c : v) rep.records.push_back(std::move(c));
  };
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "grassmann") add(suite_grassmann(cfg)), known = true;
  if (all || suite == "basis") add(suite_basis(cfg)), known = true;
  if (all || suite == "superspace") add(suite_superspace(cfg)), known = true;
  if (all || suite == "algebra") add(suite_algebra(cfg)), known = true;
  if (all || suite == "coherent") add(suite_coherent(cfg)), known = true;
  if (!known) throw ConfigurationError("unknown suite '" + suite + "'");
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace osp22
