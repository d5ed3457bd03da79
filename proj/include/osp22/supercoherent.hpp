#pragma once

// Supercoherent states Ψ_{zα} = N(ψ_z + √2 αθ φ_z), the displacement
// operators, covariant symbols and the odd-sector trajectory.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "basis.hpp"
#include "graded.hpp"
#include "grassmann.hpp"
#include "representation.hpp"
#include "superspace.hpp"

namespace osp22 {

/// z in the open unit disk and α = alpha · α_gen.
struct CoherentParams {
  cplx z{};
  cplx alpha{};

  void validate() const {
    if (!(std::abs(z) < 1.0)) throw DomainError("coherent state needs |z| < 1");
  }
  GrassmannElement alpha_element(const GeneratorSetPtr& gens = GeneratorSet::standard()) const {
    return alpha * GrassmannElement::generator("α", gens);
  }
  GrassmannElement alphabar_element(const GeneratorSetPtr& gens = GeneratorSet::standard()) const {
    return gr_conj(alpha_element(gens));
  }
};

// ---------------------------------------------------------------------------
// Closed form

inline cplx cayley_sigma(cplx z) { return (1.0 - z) / (1.0 + z); }

/// ψ_z(x, t) with principal-branch powers.
inline cplx coherent_psi(cplx z, double x, double t) {
  const cplx sigma = cayley_sigma(z);
  const cplx s = sigma + I * t;
  const double pref = std::pow(2.0 * sigma.real() / (4.0 * std::numbers::pi), 0.25);
  return pref / std::sqrt(s) * std::exp(-x * x / (4.0 * s));
}

/// φ_z = a⁺ψ_z = −(ix/4)(1+σ)/(σ+it) ψ_z.
inline cplx coherent_phi(cplx z, double x, double t) {
  const cplx sigma = cayley_sigma(z);
  return -I * x / 4.0 * (1.0 + sigma) / (sigma + I * t) * coherent_psi(z, x, t);
}

/// Envelope scale L with |ψ_z|² ~ exp(−x²/(2L²)).
inline double coherent_envelope_scale(cplx z, double t) {
  const cplx s = cayley_sigma(z) + I * t;
  return 1.0 / std::sqrt((1.0 / s).real());
}

struct CoherentClosedForm {
  CoherentParams params;
  double t = 0.0;
  cplx sigma;
  GrassmannElement normalizer;  ///< N = 1 + iᾱα/(4(1−|z|²))

  cplx psi(double x) const { return coherent_psi(params.z, x, t); }
  cplx phi(double x) const { return coherent_phi(params.z, x, t); }
  cplx dpsi(double x) const { return -x / (2.0 * (sigma + I * t)) * psi(x); }
  cplx dphi(double x) const {
    const cplx c = -I / 4.0 * (1.0 + sigma) / (sigma + I * t);
    return c * (psi(x) + x * dpsi(x));
  }
  double envelope_scale() const { return coherent_envelope_scale(params.z, t); }

  /// Ψ_{zα}(x) as a Grassmann element in θ, α, ᾱ.
  GrassmannElement super_value(double x) const {
    const auto& gens = normalizer.generators();
    GrassmannElement v(psi(x), gens);
    v += (std::numbers::sqrt2 * phi(x)) * (params.alpha_element(gens) * GrassmannElement::generator("θ", gens));
    return normalizer * v;
  }
};

inline CoherentClosedForm coherent_closed(const CoherentParams& p, double t,
                                          const GeneratorSetPtr& gens = GeneratorSet::standard()) {
  p.validate();
  const double r = 1.0 - std::norm(p.z);
  GrassmannElement n(cplx{1.0}, gens);
  n += (I / (4.0 * r)) * (p.alphabar_element(gens) * p.alpha_element(gens));
  return {p, t, cayley_sigma(p.z), n};
}

/// Constant phase between the closed-form ψ_z and its basis expansion:
/// ψ_z = ((1+z)/|1+z|)^{1/2} Σ cₙψₙ.
inline cplx closed_form_phase(cplx z) { return std::sqrt((1.0 + z) / std::abs(1.0 + z)); }

// ---------------------------------------------------------------------------
// Expansions

struct ExpansionCoeffs {
  std::vector<cplx> even;  ///< (1−|z|²)^{1/4} zⁿ √(Γ(n+½)/(n!Γ(½)))
  std::vector<cplx> odd;   ///< ½(1−|z|²)^{1/4} zⁿ √(Γ(n+3/2)/(n!Γ(3/2)))
};

/// Γ ratios from Γ(x+1) = xΓ(x): Γ(n+½)/(n!Γ(½)) = Π_{k<n} (k+½)/(k+1).
inline ExpansionCoeffs coherent_expansion_coeffs(cplx z, int nmax) {
  if (nmax < 1) throw DimensionError("expansion needs at least one mode");
  const double pre = std::pow(1.0 - std::norm(z), 0.25);
  ExpansionCoeffs c;
  double ge = 1.0, go = 1.0;  // running Γ ratios
  cplx zn = 1.0;
  for (int n = 0; n < nmax; ++n) {
    c.even.push_back(pre * zn * std::sqrt(ge));
    c.odd.push_back(0.5 * pre * zn * std::sqrt(go));
    ge *= (n + 0.5) / (n + 1.0);
    go *= (n + 1.5) / (n + 1.0);
    zn *= z;
  }
  return c;
}

inline constexpr double coherent_tail_target = 1e-16;

/// Smallest truncation at which the geometric tail of the expansion is below
/// the target.  Ratios of successive coefficients are bounded by |z|.
inline int coherent_truncation(cplx z, int cap = 512) {
  const double r = std::abs(z);
  if (r == 0.0) return 2;
  double amp = std::sqrt(1.5);  // odd-sector prefactor bound
  for (int n = 1; n <= cap; ++n) {
    amp *= r * std::sqrt((n + 0.5) / n);
    const double tail = amp / (1.0 - r);
    if (tail < coherent_tail_target) return std::max(n + 1, 2);
  }
  throw TruncationError("coherent series needs more than " + std::to_string(cap) + " modes per sector",
                        amp / (1.0 - r));
}

/// N′ exp(zK₊)(1 + αV₊)Ψ₀⁰ on a truncation of nmax modes.  exp(zK₊) is
/// summed term by term with the K₊ matrix; N′ is fixed by (Ψ|Ψ) = 1.
inline SuperVector coherent_series(const CoherentParams& p, int nmax,
                                   const GeneratorSetPtr& gens = GeneratorSet::standard()) {
  p.validate();
  const Eigen::SparseMatrix<cplx> kp = build_generator(Generator::Kp, nmax).matrix.body().sparseView();
  const Eigen::MatrixXcd vp = build_generator(Generator::Vp, nmax).matrix.body();

  auto exp_kp = [&](Eigen::VectorXcd term) {
    Eigen::VectorXcd acc = term;
    for (int k = 1;; ++k) {
      term = (p.z / double(k)) * (kp * term);
      const double size = term.norm();
      acc += term;
      if (size < coherent_tail_target) return acc;
      if (k > 2 * nmax)  // K₊ is nilpotent on the truncation; this is unreachable
        throw TruncationError("exp(zK₊) did not terminate", size);
    }
  };
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(2 * nmax);
  vac(0) = 1.0;
  const Eigen::VectorXcd even = exp_kp(vac);
  const Eigen::VectorXcd odd = exp_kp(vp * vac);

  // the last retained coefficient bounds the discarded tail
  const double edge = std::max(std::abs(even(nmax - 1)), std::abs(odd(2 * nmax - 1)));
  if (edge * std::abs(p.z) / (1.0 - std::abs(p.z)) > coherent_tail_target && std::abs(p.z) > 0.0)
    throw TruncationError("coherent series not converged within the truncation",
                          edge * std::abs(p.z) / (1.0 - std::abs(p.z)));

  GradedMatrix col(nmax, 1, gens);
  col.part(0) = even;
  const Monomial a = Monomial{1} << gens->index("α");
  if (p.alpha != cplx{}) col.part(a) = p.alpha * odd;
  const SuperVector raw(col);
  const GrassmannElement norm = gr_pow(sv_super_inner(raw, raw), -0.5);
  return norm * raw;
}

inline SuperVector coherent_series(const CoherentParams& p) {
  return coherent_series(p, coherent_truncation(p.z));
}

// ---------------------------------------------------------------------------
// Three-route agreement

struct CoherentCrosscheck {
  double closed_vs_series = 0.0;
  double closed_vs_gamma = 0.0;
  double series_vs_gamma = 0.0;
  double residual_psi = 0.0;   ///< Schrödinger residual of ψ_z
  double residual_phi = 0.0;   ///< of φ_z, the other Grassmann component of Ψ_{zα}
  double norm_closed = 0.0;    ///< |(Ψ|Ψ) − 1| for the closed form, Berezin route
  double norm_series = 0.0;    ///< |(Ψ|Ψ) − 1| for the series state
  int modes = 0;
};

/// Super-Hermitian form of the closed-form superfunction with itself,
/// integrated over x and Berezin-integrated over θ, θ̄.
inline GrassmannElement closed_super_norm(const CoherentClosedForm& cf, const QuadratureSpec& q = {}) {
  const auto& gens = cf.normalizer.generators();
  const GrassmannElement theta = GrassmannElement::generator("θ", gens);
  const GrassmannElement thetabar = GrassmannElement::generator("θ̄", gens);
  const GrassmannElement weight = I * (GrassmannElement(cplx{1.0}, gens) - I * (thetabar * theta));
  const std::vector<std::size_t> measure{gens->index("θ"), gens->index("θ̄")};
  const auto& rule = gauss_hermite(q.nodes);
  const double jac = std::numbers::sqrt2 * cf.envelope_scale();
  GrassmannElement total(gens);
  for (int k = 0; k < q.nodes; ++k) {
    const GrassmannElement f = cf.super_value(jac * rule.nodes[k]);
    total += gr_berezin(gr_conj(f) * f * weight, std::span<const std::size_t>(measure)) *
             (jac * rule.scaled_weights[k]);
  }
  return total;
}

inline CoherentCrosscheck coherent_crosscheck(const CoherentParams& p, double t, int nmax = 0,
                                              const QuadratureSpec& q = {}) {
  p.validate();
  if (nmax <= 0) nmax = coherent_truncation(p.z);
  const auto gens = GeneratorSet::standard();
  const CoherentClosedForm cf = coherent_closed(p, t, gens);
  const SuperVector series = coherent_series(p, nmax, gens);
  const ExpansionCoeffs gamma = coherent_expansion_coeffs(p.z, nmax);
  const cplx phase = closed_form_phase(p.z);
  const GrassmannElement alpha_theta = p.alpha_element(gens) * GrassmannElement::generator("θ", gens);
  const GrassmannElement theta = GrassmannElement::generator("θ", gens);

  CoherentCrosscheck r;
  r.modes = nmax;
  const double half = 6.0 * cf.envelope_scale();
  const unsigned top = static_cast<unsigned>(2 * nmax - 1);
  for (int i = 0; i <= 60; ++i) {
    const double x = -half + 2.0 * half * i / 60.0;
    const auto jets = eval_chi_all(top, x, t);
    GrassmannElement closed = cf.super_value(x);

    // series SuperVector contracted against χ
    GrassmannElement s(gens);
    for (int n = 0; n < nmax; ++n) {
      s += series.c(n) * jets[2 * n].value;
      s += (series.d(n) * theta) * jets[2 * n + 1].value;
    }
    s = phase * s;

    // Γ coefficients with the closed-form normalizer
    cplx even{}, odd{};
    for (int n = 0; n < nmax; ++n) {
      even += gamma.even[n] * jets[2 * n].value;
      odd += gamma.odd[n] * jets[2 * n + 1].value;
    }
    GrassmannElement g(phase * even, gens);
    g += (std::numbers::sqrt2 * phase * odd) * alpha_theta;
    g = cf.normalizer * g;

    r.closed_vs_series = std::max(r.closed_vs_series, max_abs_diff(closed, s));
    r.closed_vs_gamma = std::max(r.closed_vs_gamma, max_abs_diff(closed, g));
    r.series_vs_gamma = std::max(r.series_vs_gamma, max_abs_diff(s, g));
  }

  for (double x : {-2.0, -0.7, 0.0, 0.9, 2.5}) {
    r.residual_psi = std::max(
        r.residual_psi, schrodinger_residual([&](double xx, double tt) { return coherent_psi(p.z, xx, tt); }, x, t));
    r.residual_phi = std::max(
        r.residual_phi, schrodinger_residual([&](double xx, double tt) { return coherent_phi(p.z, xx, tt); }, x, t));
  }

  const GrassmannElement one(cplx{1.0}, gens);
  r.norm_closed = max_abs_diff(closed_super_norm(cf, q), one);
  r.norm_series = max_abs_diff(sv_super_inner(series, series), one);
  return r;
}

// ---------------------------------------------------------------------------
// Displacement

/// Matrix exponential of an even graded matrix.  The body sets the number of
/// squarings; Grassmann parts ride along in the same Taylor series and die
/// out by nilpotency.
inline GradedMatrix graded_exp(const GradedMatrix& x) {
  const Eigen::MatrixXcd b = x.body();
  const double norm1 = b.size() ? b.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const GradedMatrix scaled = std::ldexp(1.0, -squarings) * x;

  GradedMatrix result = GradedMatrix::from_complex(
      x.truncation(), Eigen::MatrixXcd::Identity(x.rows(), x.cols()), x.generators());
  GradedMatrix term = result;
  for (int k = 1; k < 200; ++k) {
    term = (1.0 / k) * (term * scaled);
    term.prune();
    result += term;
    if (term.max_abs() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) {
    result = result * result;
    result.prune();
  }
  return result;
}

/// D′(z, α) = exp(zK₊ − z̄K₋ + αV₊ − iᾱW₋).
inline SuperOperator displacement_prime(const CoherentParams& p, int nmax,
                                        const GeneratorSetPtr& gens = GeneratorSet::standard()) {
  p.validate();
  auto G = [&](Generator g) { return build_generator(g, nmax).matrix; };
  GradedMatrix x = p.z * G(Generator::Kp) - std::conj(p.z) * G(Generator::Km);
  x += p.alpha_element(gens) * G(Generator::Vp);
  x -= I * (p.alphabar_element(gens) * G(Generator::Wm));
  return {"D'", Parity::even, graded_exp(x)};
}

/// exp(zK₊ − z̄K₋)Ψ₀⁰ is the normalized series state at this point.
inline cplx disentangled_point(cplx z) {
  const double r = std::abs(z);
  return r == 0.0 ? cplx{} : std::polar(std::tanh(r), std::arg(z));
}

// ---------------------------------------------------------------------------
// Symbols

/// S(H) = (Ψ|HΨ) / (Ψ|Ψ).
inline GrassmannElement berezin_symbol(const SuperOperator& h, const SuperVector& state) {
  return sv_super_inner(state, apply(h, state)) * gr_inverse(sv_super_inner(state, state));
}

inline GrassmannElement berezin_symbol(Generator g, const CoherentParams& p, int nmax = 0) {
  if (nmax <= 0) nmax = coherent_truncation(p.z);
  return berezin_symbol(build_generator(g, nmax), coherent_series(p, nmax));
}

/// Closed-form symbols in the variables (z, α, ᾱ) as printed.  B has no
/// printed form; its value here was derived by hand from the same state.
inline GrassmannElement closed_form_symbol(Generator g, cplx z, const GrassmannElement& alpha,
                                     const GrassmannElement& alphabar) {
  const auto& gens = alpha.generators();
  const double r = 1.0 - std::norm(z);
  const GrassmannElement one(cplx{1.0}, gens);
  const GrassmannElement k_alpha = one + (I / r) * (alphabar * alpha);
  switch (g) {
    case Generator::K0: return (0.25 * (1.0 + std::norm(z)) / r) * k_alpha;
    case Generator::Kp: return (z / (2.0 * r)) * k_alpha;
    case Generator::Km: return (std::conj(z) / (2.0 * r)) * k_alpha;
    case Generator::B: return -0.25 * (one + (I / r) * (alpha * alphabar));
    case Generator::Vp: return (I / (2.0 * r)) * alpha;
    case Generator::Vm: return (I * std::conj(z) / (2.0 * r)) * alpha;
    case Generator::Wp: return (-z / (2.0 * r)) * alphabar;
    case Generator::Wm: return (-1.0 / (2.0 * r)) * alphabar;
  }
  throw ConfigurationError("unknown generator");
}

enum class SymbolConvention { identity, conjugate };

inline const char* convention_name(SymbolConvention c) {
  return c == SymbolConvention::identity ? "identity" : "conjugate";
}

/// Printed symbol read under a convention: `conjugate` evaluates it at (z̄, ᾱ, α).
inline GrassmannElement expected_symbol(Generator g, const CoherentParams& p, SymbolConvention c,
                                        const GeneratorSetPtr& gens = GeneratorSet::standard()) {
  const GrassmannElement a = p.alpha_element(gens), ab = p.alphabar_element(gens);
  if (c == SymbolConvention::identity) return closed_form_symbol(g, p.z, a, ab);
  return closed_form_symbol(g, std::conj(p.z), ab, a);
}

/// Decide from S(K₊) at a non-real z which reading of the printed symbols
/// the computed ones follow.
inline SymbolConvention convention_calibration(cplx z, double tol = 1e-8) {
  if (!(std::abs(z) > 0.0 && std::abs(z) < 0.9) || std::abs(z.imag()) < 1e-3)
    throw DomainError("calibration needs 0 < |z| < 0.9 with z off the real axis");
  const CoherentParams p{z, 1.0};
  const GrassmannElement s = berezin_symbol(Generator::Kp, p);
  const double d_id = max_abs_diff(s, expected_symbol(Generator::Kp, p, SymbolConvention::identity));
  const double d_cj = max_abs_diff(s, expected_symbol(Generator::Kp, p, SymbolConvention::conjugate));
  if (d_cj < tol && d_cj <= d_id) return SymbolConvention::conjugate;
  if (d_id < tol) return SymbolConvention::identity;
  throw ContractViolation("S(K+) matches neither reading of the closed form");
}

// ---------------------------------------------------------------------------
// Trajectory

/// pθ = −(V₊+V₋)/√2.
inline SuperOperator p_theta(int nmax) {
  SuperOperator o = (-1.0 / std::numbers::sqrt2) *
                    (build_generator(Generator::Vp, nmax) + build_generator(Generator::Vm, nmax));
  o.name = "pθ";
  return o;
}

/// xθ = 2t·pθ + i√2(V₊−V₋).
inline SuperOperator x_theta(int nmax, double t) {
  SuperOperator o = cplx{2.0 * t} * p_theta(nmax) +
                    (I * std::numbers::sqrt2) *
                        (build_generator(Generator::Vp, nmax) - build_generator(Generator::Vm, nmax));
  o.name = "xθ";
  return o;
}

inline cplx trajectory_x0(cplx z) { return -(1.0 - z) / (std::numbers::sqrt2 * (1.0 - std::norm(z))); }
inline cplx trajectory_p0(cplx z) {
  return -I * (1.0 + z) / (2.0 * std::numbers::sqrt2 * (1.0 - std::norm(z)));
}

struct TrajectoryRecord {
  double t = 0.0;
  GrassmannElement p_theta;  ///< S(pθ)
  GrassmannElement x_theta;  ///< S(xθ)
  cplx x0;
  cplx p0;
  cplx x_psi, x_phi;  ///< ⟨ψ_z|x|ψ_z⟩, ⟨φ_z|x|φ_z⟩
  cplx p_psi, p_phi;  ///< same for p = −i∂ₓ
};

inline TrajectoryRecord trajectory(const CoherentParams& p, double t, int nmax = 0,
                                   const QuadratureSpec& q = {}) {
  p.validate();
  if (nmax <= 0) nmax = coherent_truncation(p.z);
  const SuperVector state = coherent_series(p, nmax);
  TrajectoryRecord r;
  r.t = t;
  r.p_theta = berezin_symbol(p_theta(nmax), state);
  r.x_theta = berezin_symbol(x_theta(nmax, t), state);
  r.x0 = trajectory_x0(p.z);
  r.p0 = trajectory_p0(p.z);

  const CoherentClosedForm cf = coherent_closed(p, t);
  const double scale = cf.envelope_scale();
  auto psi = [&](double x) { return cf.psi(x); };
  auto phi = [&](double x) { return cf.phi(x); };
  r.x_psi = quad_integrate([&](double x) { return std::norm(cf.psi(x)) * x; }, scale, q);
  r.x_phi = quad_integrate([&](double x) { return std::norm(cf.phi(x)) * x; }, scale, q);
  r.p_psi = quad_inner(psi, [&](double x) { return -I * cf.dpsi(x); }, t, q, scale);
  r.p_phi = quad_inner(phi, [&](double x) { return -I * cf.dphi(x); }, t, q, scale);
  return r;
}

}  // namespace osp22
