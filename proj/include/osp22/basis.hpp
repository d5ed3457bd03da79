#pragma once

// Free-particle solution basis χ_m(x,t), its x-derivatives, L² products by
// quadrature, ladder operators and the pointwise symmetry operators.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "grassmann.hpp"

namespace osp22 {

/// Raw index m of χ_m; ψ_n = χ_{2n} lives in sector 0, φ_n = χ_{2n+1} in sector 1.
struct BasisMode {
  unsigned m = 0;

  static BasisMode from_sector(int sector, unsigned n) {
    return BasisMode{2 * n + static_cast<unsigned>(sector & 1)};
  }
  int sector() const { return static_cast<int>(m % 2); }
  unsigned n() const { return m / 2; }
  friend bool operator==(BasisMode, BasisMode) = default;
};

/// Probabilists' Hermite polynomial by the three-term recurrence.
inline double hermite_he(int n, double z) {
  if (n < 0) throw DomainError("hermite_he: negative order");
  double prev = 1.0, cur = z;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    const double next = z * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// g_m(z) = e^{-z²/4} He_m(z) / √(m!) for m = 0..mmax.  The Gaussian rides
/// along in the recurrence so nothing overflows for large m.
inline std::vector<double> hermite_functions(unsigned mmax, double z) {
  std::vector<double> g(mmax + 1);
  g[0] = std::exp(-0.25 * z * z);
  if (mmax >= 1) g[1] = z * g[0];
  for (unsigned k = 1; k < mmax; ++k)
    g[k + 1] = (z * g[k] - std::sqrt(static_cast<double>(k)) * g[k - 1]) /
               std::sqrt(static_cast<double>(k + 1));
  return g;
}

/// Value and first two x-derivatives at one point.
struct Jet {
  cplx value{};
  cplx dx{};
  cplx dxx{};
};

namespace detail {

// (-i)^m e^{-i m arctan t}
inline cplx mode_phase(unsigned m, double t) {
  static constexpr std::array<cplx, 4> quarter{cplx{1, 0}, cplx{0, -1}, cplx{-1, 0}, cplx{0, 1}};
  return quarter[m % 4] * std::polar(1.0, -static_cast<double>(m) * std::atan(t));
}

}  // namespace detail

/// Jets of χ_0..χ_mmax at (x, t).
inline std::vector<Jet> eval_chi_all(unsigned mmax, double x, double t) {
  const double s = std::sqrt(1.0 + t * t);
  const double z = x / s;
  const cplx tau{1.0, t};
  // (√(2π)(1+it))^{-1/2}, principal branch; Re(1+it) > 0 keeps it off the cut
  const cplx norm = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi) * tau);
  // exp(-x²/(4+4it)) = e^{-z²/4} · e^{i x² t / (4(1+t²))}; the real part is inside g
  const cplx chirp = std::polar(1.0, x * x * t / (4.0 * (1.0 + t * t)));
  const std::vector<double> g = hermite_functions(mmax, z);

  const cplx e1 = -x / (2.0 * tau);                        // E'/E
  const cplx e2 = x * x / (4.0 * tau * tau) - 1.0 / (2.0 * tau);  // E''/E
  std::vector<Jet> out(mmax + 1);
  for (unsigned m = 0; m <= mmax; ++m) {
    const cplx pref = detail::mode_phase(m, t) * norm * chirp;
    const double dm = static_cast<double>(m);
    const double gm1 = m >= 1 ? std::sqrt(dm) * g[m - 1] : 0.0;
    const double gm2 = m >= 2 ? std::sqrt(dm * (dm - 1.0)) * g[m - 2] : 0.0;
    out[m].value = pref * g[m];
    out[m].dx = pref * (e1 * g[m] + gm1 / s);
    out[m].dxx = pref * (e2 * g[m] + 2.0 * e1 * gm1 / s + gm2 / (s * s));
  }
  return out;
}

inline Jet eval_chi_derivatives(BasisMode mode, double x, double t) {
  return eval_chi_all(mode.m, x, t)[mode.m];
}

inline cplx eval_chi(BasisMode mode, double x, double t) {
  return eval_chi_derivatives(mode, x, t).value;
}

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSpec {
  int nodes = 200;
  /// Half-width of the adaptive fallback interval in units of the envelope
  /// scale; the Gaussian envelope is below 1e-16 well inside 10 scales.
  double half_width = 10.0;
  double tolerance = 1e-12;
  long max_evaluations = 2'000'000;  ///< adaptive fallback gives up past this
};

struct GaussHermiteRule {
  std::vector<double> nodes;
  /// w_k e^{s_k²}: weights for ∫ f(s) ds with f already carrying its Gaussian.
  std::vector<double> scaled_weights;
};

/// Golub–Welsch nodes for weight e^{-s²}; the scaled weights come from the
/// Christoffel function evaluated with normalized Hermite functions, which
/// stay bounded where the raw weights underflow.
inline const GaussHermiteRule& gauss_hermite(int n) {
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  if (n < 2) throw ConfigurationError("Gauss-Hermite rule needs at least 2 nodes");

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  GaussHermiteRule rule;
  rule.nodes.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  rule.scaled_weights.resize(n);
  const double h0 = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < n; ++k) {
    const double s = rule.nodes[k];
    double prev = 0.0, cur = h0 * std::exp(-0.5 * s * s), sum = cur * cur;
    for (int j = 0; j + 1 < n; ++j) {
      const double next = std::sqrt(2.0 / (j + 1)) * s * cur - std::sqrt(double(j) / (j + 1)) * prev;
      prev = cur;
      cur = next;
      sum += cur * cur;
    }
    rule.scaled_weights[k] = 1.0 / sum;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

using XFunction = std::function<cplx(double)>;

/// Envelope scale L of the basis at time t: |χ_m|² ~ exp(-x²/(2L²)).
inline double basis_envelope_scale(double t) { return std::sqrt(1.0 + t * t); }

namespace detail {

inline cplx gauss_hermite_integral(const XFunction& integrand, double scale, int n) {
  const auto& rule = gauss_hermite(n);
  const double jac = std::numbers::sqrt2 * scale;
  cplx acc{};
  for (int k = 0; k < n; ++k) acc += rule.scaled_weights[k] * integrand(jac * rule.nodes[k]);
  return jac * acc;
}

inline cplx simpson_step(const XFunction& f, double a, double b, cplx fa, cplx fm, cplx fb,
                         cplx whole, double tol, int depth, long& budget, bool& ok) {
  budget -= 2;
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const cplx flm = f(lm), frm = f(rm);
  const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const cplx diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth <= 0 || budget <= 0) {
    ok = false;
    return left + right;
  }
  const cplx l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget, ok);
  if (!ok) return l + right;
  return l + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget, ok);
}

}  // namespace detail

/// ∫ f(x) dx over the real line for Gaussian-tailed f with envelope scale
/// `scale`.  Gauss–Hermite at two node counts; adaptive Simpson on
/// [-W, W] if they disagree.
inline cplx quad_integrate(const XFunction& f, double scale, const QuadratureSpec& q = {}) {
  const cplx a = detail::gauss_hermite_integral(f, scale, q.nodes);
  const cplx b = detail::gauss_hermite_integral(f, scale, q.nodes + q.nodes / 2);
  const double mag = std::max(1.0, std::abs(b));
  if (std::abs(a - b) <= q.tolerance * mag) return b;

  const double w = q.half_width * scale;
  const cplx fa = f(-w), fm = f(0.0), fb = f(w);
  const cplx whole = (2.0 * w) / 6.0 * (fa + 4.0 * fm + fb);
  bool ok = true;
  long budget = q.max_evaluations;
  const cplx s = detail::simpson_step(f, -w, w, fa, fm, fb, whole, q.tolerance * mag, 40, budget, ok);
  if (!ok) throw NumericError("quadrature did not converge", std::abs(s - b));
  return s;
}

/// ⟨f|g⟩ = ∫ conj(f) g dx.
inline cplx quad_inner(const XFunction& f, const XFunction& g, double t,
                       const QuadratureSpec& q = {}, double scale = 0.0) {
  if (scale <= 0.0) scale = basis_envelope_scale(t);
  return quad_integrate([&](double x) { return std::conj(f(x)) * g(x); }, scale, q);
}

/// Gram matrix ⟨χ_i|χ_j⟩, i, j ≤ mmax, evaluated on one Gauss–Hermite rule.
inline Eigen::MatrixXcd basis_gram(unsigned mmax, double t, const QuadratureSpec& q = {}) {
  const auto& rule = gauss_hermite(q.nodes);
  const double jac = std::numbers::sqrt2 * basis_envelope_scale(t);
  Eigen::MatrixXcd vals(q.nodes, mmax + 1);
  for (int k = 0; k < q.nodes; ++k) {
    const auto jets = eval_chi_all(mmax, jac * rule.nodes[k], t);
    const double w = std::sqrt(jac * rule.scaled_weights[k]);
    for (unsigned m = 0; m <= mmax; ++m) vals(k, m) = w * jets[m].value;
  }
  return vals.adjoint() * vals;
}

// ---------------------------------------------------------------------------
// Ladder operators

enum class LadderSign { raise, lower };

struct LadderAction {
  double coefficient = 0.0;
  BasisMode target;
};

/// a⁺χ_m = ½√(m+1) χ_{m+1},  a⁻χ_m = ½√m χ_{m-1}.
inline LadderAction apply_ladder(LadderSign sign, BasisMode mode) {
  const double m = mode.m;
  if (sign == LadderSign::raise) return {0.5 * std::sqrt(m + 1.0), BasisMode{mode.m + 1}};
  if (mode.m == 0) return {0.0, mode};
  return {0.5 * std::sqrt(m), BasisMode{mode.m - 1}};
}

/// First-order differential operator u ∂ₓ + v x.
struct FirstOrderOp {
  cplx u;
  cplx v;

  /// Value and x-derivative of (u∂ₓ + v x) f from the jet of f.
  std::pair<cplx, cplx> apply(const Jet& f, double x) const {
    return {u * f.dx + v * x * f.value, u * f.dxx + v * f.value + v * x * f.dx};
  }
  cplx value_on(const cplx& f, const cplx& fx, double x) const { return u * fx + v * x * f; }
};

/// a± as differential operators: a± = ½(iK₋₁ ∓ K₁), K₋₁ = ∂ₓ, K₁ = −t∂ₓ + ix/2.
inline FirstOrderOp ladder_operator(LadderSign sign, double t) {
  if (sign == LadderSign::raise) return {0.5 * cplx{t, 1.0}, -0.25 * I};
  return {0.5 * cplx{-t, 1.0}, 0.25 * I};
}

/// (a_first a_second f)(x): a_second applied first.
inline cplx apply_ladder_pair(LadderSign first, LadderSign second, const Jet& f, double x, double t) {
  const auto [g, gx] = ladder_operator(second, t).apply(f, x);
  return ladder_operator(first, t).value_on(g, gx, x);
}

/// k₀ = a⁺a⁻ + a⁻a⁺ applied pointwise.
inline cplx apply_k0(const Jet& f, double x, double t) {
  return apply_ladder_pair(LadderSign::raise, LadderSign::lower, f, x, t) +
         apply_ladder_pair(LadderSign::lower, LadderSign::raise, f, x, t);
}

/// Dense matrix of a± on χ_0..χ_{dim-1}; raising out of the top mode is dropped.
inline Eigen::MatrixXd ladder_matrix(LadderSign sign, int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    const auto act = apply_ladder(sign, BasisMode{static_cast<unsigned>(m)});
    if (act.coefficient != 0.0 && static_cast<int>(act.target.m) < dim)
      a(act.target.m, m) = act.coefficient;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Schrödinger-algebra symmetry operators

enum class SymmetryOp { K2, K1, K0c, Km1, Km2, Dilation };

/// Pointwise action on χ_m, with ∂ₜ replaced by i∂ₓ² (valid on solutions).
inline cplx apply_symmetry_op(SymmetryOp op, BasisMode mode, double x, double t) {
  const Jet f = eval_chi_derivatives(mode, x, t);
  const cplx dt = I * f.dxx;
  switch (op) {
    case SymmetryOp::K2:
      return -t * t * dt - t * x * f.dx - 0.5 * t * f.value + I * x * x / 4.0 * f.value;
    case SymmetryOp::K1: return -t * f.dx + I * x / 2.0 * f.value;
    case SymmetryOp::K0c: return I * f.value;
    case SymmetryOp::Km1: return f.dx;
    case SymmetryOp::Km2: return dt;
    case SymmetryOp::Dilation: return x * f.dx + 2.0 * t * dt + 0.5 * f.value;
  }
  return {};
}

using XTFunction = std::function<cplx(double, double)>;

/// |i∂ₜχ + ∂ₓ²χ| / max(|χ|, 1e-30) with fourth-order central differences in
/// both variables.  |χ| is the largest modulus over the stencil, so exact
/// nodes of χ (odd modes at x = 0) are normalized by their neighbourhood.
inline double schrodinger_residual(const XTFunction& state, double x, double t, double h = 1e-3) {
  if (x + h == x || t + h == t || h <= 0.0)
    throw NumericError("finite-difference step underflows at this point", h);
  const cplx f0 = state(x, t);
  const std::array<cplx, 4> ft{state(x, t - 2 * h), state(x, t - h), state(x, t + h),
                               state(x, t + 2 * h)};
  const std::array<cplx, 4> fx{state(x - 2 * h, t), state(x - h, t), state(x + h, t),
                               state(x + 2 * h, t)};
  const cplx dt = (ft[0] - 8.0 * ft[1] + 8.0 * ft[2] - ft[3]) / (12.0 * h);
  const cplx dxx = (-fx[0] + 16.0 * fx[1] - 30.0 * f0 + 16.0 * fx[2] - fx[3]) / (12.0 * h * h);
  double scale = std::abs(f0);
  for (const auto& v : ft) scale = std::max(scale, std::abs(v));
  for (const auto& v : fx) scale = std::max(scale, std::abs(v));
  return std::abs(I * dt + dxx) / std::max(scale, 1e-30);
}

}  // namespace osp22
