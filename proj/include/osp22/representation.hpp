#pragma once

// Atypical osp(2/2) representation on the truncated superspace.
//
// Every generator matrix is assembled from the ladder coefficients of the
// solution basis: K± = 2(a±)², K₀ = a⁺a⁻ + a⁻a⁺, V± = √2 a± θ, W± = √2 a± ∂_θ,
// B = ¼(θ∂_θ − ∂_θθ).  Actions are composed mode by mode on the untruncated
// basis, and only the final image is dropped if it leaves the truncation.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "basis.hpp"
#include "graded.hpp"
#include "superspace.hpp"

namespace osp22 {

enum class Generator { K0, Kp, Km, B, Vp, Vm, Wp, Wm };

inline constexpr std::array<Generator, 8> all_generators{
    Generator::K0, Generator::Kp, Generator::Km, Generator::B,
    Generator::Vp, Generator::Vm, Generator::Wp, Generator::Wm};

inline const char* generator_name(Generator g) {
  switch (g) {
    case Generator::K0: return "K0";
    case Generator::Kp: return "K+";
    case Generator::Km: return "K-";
    case Generator::B: return "B";
    case Generator::Vp: return "V+";
    case Generator::Vm: return "V-";
    case Generator::Wp: return "W+";
    case Generator::Wm: return "W-";
  }
  return "?";
}

inline Parity generator_parity(Generator g) {
  switch (g) {
    case Generator::Vp:
    case Generator::Vm:
    case Generator::Wp:
    case Generator::Wm: return Parity::odd;
    default: return Parity::even;
  }
}

namespace detail {

/// Super-basis slot of χ_m in a truncation of N modes per sector.
inline std::optional<int> slot_of_mode(unsigned m, int nmax) {
  const int n = static_cast<int>(m / 2);
  if (n >= nmax) return std::nullopt;
  return m % 2 == 0 ? n : nmax + n;
}

/// Σ_words coefficient · (ladder word), applied to every mode of the
/// truncated basis and written into a complex matrix in super ordering.
/// Words are applied right to left, as operator products are written.
struct LadderWord {
  double coefficient;
  std::vector<LadderSign> word;
};

inline Eigen::MatrixXcd ladder_polynomial(const std::vector<LadderWord>& terms, int nmax,
                                          std::optional<int> only_sector = std::nullopt) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * nmax, 2 * nmax);
  for (unsigned m = 0; m < static_cast<unsigned>(2 * nmax); ++m) {
    if (only_sector && static_cast<int>(m % 2) != *only_sector) continue;
    const int col = *slot_of_mode(m, nmax);
    for (const auto& term : terms) {
      BasisMode mode{m};
      double coeff = term.coefficient;
      for (auto it = term.word.rbegin(); it != term.word.rend() && coeff != 0.0; ++it) {
        const auto act = apply_ladder(*it, mode);
        coeff *= act.coefficient;
        mode = act.target;
      }
      if (coeff == 0.0) continue;
      if (auto row = slot_of_mode(mode.m, nmax)) out(*row, col) += coeff;
    }
  }
  return out;
}

}  // namespace detail

inline SuperOperator build_generator(Generator g, int nmax) {
  if (nmax < 2) throw DimensionError("build_generator needs N_max >= 2");
  using detail::LadderWord;
  constexpr auto up = LadderSign::raise;
  constexpr auto dn = LadderSign::lower;
  const double r2 = std::numbers::sqrt2;
  Eigen::MatrixXcd m;
  switch (g) {
    case Generator::K0:
      m = detail::ladder_polynomial({{1.0, {up, dn}}, {1.0, {dn, up}}}, nmax);
      break;
    case Generator::Kp: m = detail::ladder_polynomial({{2.0, {up, up}}}, nmax); break;
    case Generator::Km: m = detail::ladder_polynomial({{2.0, {dn, dn}}}, nmax); break;
    case Generator::B: {
      // θ∂_θ is the odd-slot projector, ∂_θθ the even-slot one
      m = Eigen::MatrixXcd::Zero(2 * nmax, 2 * nmax);
      m.diagonal().head(nmax).setConstant(-0.25);
      m.diagonal().tail(nmax).setConstant(0.25);
      break;
    }
    // θ annihilates the odd slot; ∂_θ annihilates the even slot
    case Generator::Vp: m = detail::ladder_polynomial({{r2, {up}}}, nmax, 0); break;
    case Generator::Vm: m = detail::ladder_polynomial({{r2, {dn}}}, nmax, 0); break;
    case Generator::Wp: m = detail::ladder_polynomial({{r2, {up}}}, nmax, 1); break;
    case Generator::Wm: m = detail::ladder_polynomial({{r2, {dn}}}, nmax, 1); break;
  }
  return {generator_name(g), generator_parity(g), GradedMatrix::from_complex(nmax, m)};
}

inline SuperOperator identity_operator(int nmax) {
  return {"I", Parity::even,
          GradedMatrix::from_complex(nmax, Eigen::MatrixXcd::Identity(2 * nmax, 2 * nmax))};
}

/// h = ½K₊ + ½K₋ + K₀.
inline SuperOperator hamiltonian(int nmax) {
  SuperOperator h = 0.5 * build_generator(Generator::Kp, nmax) +
                    0.5 * build_generator(Generator::Km, nmax) + build_generator(Generator::K0, nmax);
  h.name = "h";
  return h;
}

/// Super-Hermitian base X₁…X₈ (j = 1..8).
inline SuperOperator super_hermitian_base(int j, int nmax) {
  auto G = [nmax](Generator g) { return build_generator(g, nmax); };
  auto make = [&]() -> SuperOperator {
    switch (j) {
      case 1: return G(Generator::K0);
      case 2: return G(Generator::B);
      case 3: return G(Generator::Kp) + G(Generator::Km);
      case 4: return I * (G(Generator::Kp) - G(Generator::Km));
      case 5: return G(Generator::Vp) - I * G(Generator::Wm);
      case 6: return G(Generator::Vm) - I * G(Generator::Wp);
      case 7: return G(Generator::Wp) - I * G(Generator::Vm);
      case 8: return G(Generator::Wm) - I * G(Generator::Vp);
    }
    throw ConfigurationError("super-Hermitian base index must be 1..8");
  };
  SuperOperator x = make();
  x.name = "X" + std::to_string(j);
  return x;
}

/// Named lookup: K0, K+, K-, B, V+, V-, W+, W-, X1…X8, h, I.
inline SuperOperator build_generator(std::string_view name, int nmax) {
  for (Generator g : all_generators)
    if (name == generator_name(g)) return build_generator(g, nmax);
  if (name == "h") return hamiltonian(nmax);
  if (name == "I") return identity_operator(nmax);
  if (name.size() == 2 && name[0] == 'X' && name[1] >= '1' && name[1] <= '8')
    return super_hermitian_base(name[1] - '0', nmax);
  throw ConfigurationError("unknown generator name '" + std::string(name) + "'");
}

/// [A, C] = AC − (−1)^{p(A)p(C)} CA.
inline SuperOperator op_supercommutator(const SuperOperator& a, const SuperOperator& c) {
  if (a.parity == Parity::mixed || c.parity == Parity::mixed)
    throw ContractViolation("supercommutator of a mixed-parity operator");
  const int pa = parity_bit(a.parity), pc = parity_bit(c.parity);
  const double sign = (pa * pc) ? -1.0 : 1.0;
  GradedMatrix m = a.matrix * c.matrix;
  m -= sign * (c.matrix * a.matrix);
  return {"[" + a.name + "," + c.name + "]", (pa + pc) & 1 ? Parity::odd : Parity::even, std::move(m)};
}

/// Superadjoint with respect to the super-Hermitian form, built entry-wise:
///   (A⁺)_{ji} = conj( (−1)^{s(i)(1+s(j))} A_ij g_i / g_j ),  g = 1 (even slot), i (odd slot).
/// Grassmann conjugation of the entries keeps factor order.
inline SuperOperator op_superadjoint(const SuperOperator& a) {
  if (a.parity == Parity::mixed) throw ContractViolation("superadjoint of a mixed-parity operator");
  const int n = a.truncation();
  const GeneratorSet& gens = *a.matrix.generators();
  GradedMatrix out = GradedMatrix::square(n, a.matrix.generators());
  for (const auto& [m, p] : a.matrix.parts()) {
    Eigen::MatrixXcd f = p;
    f.topRightCorner(n, n) *= -I;
    f.bottomLeftCorner(n, n) *= -I;
    const auto [cm, s] = detail::conj_monomial(gens, m);
    out.part(cm) += static_cast<double>(s) * f.adjoint();
  }
  out.prune();
  return {a.name + "⁺", a.parity, std::move(out)};
}

// ---------------------------------------------------------------------------
// Verification

struct RelationDefect {
  std::string relation;
  double max_defect = 0.0;
  int modes_checked = 0;
  bool pass = false;
};

/// Identity checks exclude the top two modes per sector, where truncated
/// raising operators leak.
inline int interior_limit(int nmax) { return nmax - 3; }

namespace detail {

struct ExpectedTerm {
  Generator g;
  double coefficient;
};

struct TableEntry {
  Generator a;
  Generator c;
  std::vector<ExpectedTerm> result;
  std::string family;
};

inline std::vector<TableEntry> supercommutator_table() {
  using G = Generator;
  return {
      {G::K0, G::Kp, {{G::Kp, 1.0}}, "[K0,K±]=±K±"},
      {G::K0, G::Km, {{G::Km, -1.0}}, "[K0,K±]=±K±"},
      {G::Km, G::Kp, {{G::K0, 2.0}}, "[K-,K+]=2K0"},
      {G::K0, G::Vp, {{G::Vp, 0.5}}, "[K0,V±]=±½V±"},
      {G::K0, G::Vm, {{G::Vm, -0.5}}, "[K0,V±]=±½V±"},
      {G::K0, G::Wp, {{G::Wp, 0.5}}, "[K0,W±]=±½W±"},
      {G::K0, G::Wm, {{G::Wm, -0.5}}, "[K0,W±]=±½W±"},
      {G::Kp, G::Vm, {{G::Vp, -1.0}}, "[K±,V∓]=∓V±"},
      {G::Km, G::Vp, {{G::Vm, 1.0}}, "[K±,V∓]=∓V±"},
      {G::Kp, G::Wm, {{G::Wp, -1.0}}, "[K±,W∓]=∓W±"},
      {G::Km, G::Wp, {{G::Wm, 1.0}}, "[K±,W∓]=∓W±"},
      {G::B, G::Vp, {{G::Vp, 0.5}}, "[B,V±]=½V±"},
      {G::B, G::Vm, {{G::Vm, 0.5}}, "[B,V±]=½V±"},
      {G::B, G::Wp, {{G::Wp, -0.5}}, "[B,W±]=-½W±"},
      {G::B, G::Wm, {{G::Wm, -0.5}}, "[B,W±]=-½W±"},
      {G::Vp, G::Wp, {{G::Kp, 1.0}}, "[V±,W±]=K±"},
      {G::Vm, G::Wm, {{G::Km, 1.0}}, "[V±,W±]=K±"},
      {G::Vp, G::Wm, {{G::K0, 1.0}, {G::B, -1.0}}, "[V±,W∓]=K0∓B"},
      {G::Vm, G::Wp, {{G::K0, 1.0}, {G::B, 1.0}}, "[V±,W∓]=K0∓B"},
  };
}

}  // namespace detail

/// Supercommutator table of the listed relations plus vanishing of every
/// unlisted ordered pair, checked on interior modes; the generalized Jacobi
/// identity on random homogeneous triples; parity additivity.
inline std::vector<RelationDefect> verify_structure(int nmax, double tol = 1e-12, int jacobi_samples = 20,
                                                    std::uint64_t seed = 20260101) {
  if (nmax < 4) throw DimensionError("verify_structure needs at least 4 modes per sector");
  std::vector<SuperOperator> gens;
  for (Generator g : all_generators) gens.push_back(build_generator(g, nmax));
  const int interior = interior_limit(nmax);
  const int modes = 2 * (interior + 1);

  std::vector<RelationDefect> out;
  auto record = [&](const std::string& family, double defect) {
    for (auto& r : out)
      if (r.relation == family) {
        r.max_defect = std::max(r.max_defect, defect);
        r.pass = r.max_defect < tol;
        return;
      }
    out.push_back({family, defect, modes, defect < tol});
  };

  const auto table = detail::supercommutator_table();
  for (Generator a : all_generators)
    for (Generator c : all_generators) {
      const SuperOperator bracket = op_supercommutator(gens[int(a)], gens[int(c)]);
      GradedMatrix expected = GradedMatrix::square(nmax);
      std::string family = "unlisted pairs vanish";
      for (const auto& e : table) {
        // [C,A] = −(−1)^{p(A)p(C)} [A,C]
        double sign = 0.0;
        if (e.a == a && e.c == c) sign = 1.0;
        else if (e.a == c && e.c == a)
          sign = (parity_bit(generator_parity(a)) * parity_bit(generator_parity(c))) ? 1.0 : -1.0;
        if (sign == 0.0) continue;
        for (const auto& term : e.result) expected += (sign * term.coefficient) * gens[int(term.g)].matrix;
        family = e.family;
      }
      record(family, (bracket.matrix - expected).max_abs_interior(interior));
      const int expected_parity =
          (parity_bit(generator_parity(a)) + parity_bit(generator_parity(c))) & 1;
      const Parity content = content_parity(bracket.matrix);
      const bool parity_ok = bracket.matrix.max_abs() == 0.0 ||
                             (content != Parity::mixed && parity_bit(content) == expected_parity &&
                              parity_bit(bracket.parity) == expected_parity);
      record("p([A,C]) = p(A)+p(C)", parity_ok ? 0.0 : 1.0);
    }

  // generalized Jacobi on random homogeneous elements; a third of them carry
  // Grassmann coefficients in ξ, ξ̄ so the envelope is exercised too
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto xi = GrassmannElement::generator("ξ");
  const auto xibar = GrassmannElement::generator("ξ̄");
  auto random_element = [&](int k) {
    const bool odd = rng() & 1;
    SuperOperator acc{"R", odd ? Parity::odd : Parity::even, GradedMatrix::square(nmax)};
    for (Generator g : all_generators) {
      if ((generator_parity(g) == Parity::odd) != odd) continue;
      acc.matrix += cplx{normal(rng), normal(rng)} * gens[int(g)].matrix;
    }
    if (k % 3 == 2) {
      // β even in (ξ, ξ̄) keeps the parity; an odd β would flip it
      GrassmannElement beta(cplx{normal(rng), normal(rng)});
      beta += cplx{normal(rng), normal(rng)} * (xi * xibar);
      acc = beta * acc;
      acc.parity = odd ? Parity::odd : Parity::even;
    } else if (k % 3 == 1) {
      const GrassmannElement beta = cplx{normal(rng), normal(rng)} * xi;
      acc = beta * acc;
    }
    return acc;
  };
  for (int s = 0; s < jacobi_samples; ++s) {
    const SuperOperator a = random_element(s), c = random_element(s + 1), d = random_element(s + 2);
    const int pa = parity_bit(a.parity), pc = parity_bit(c.parity), pd = parity_bit(d.parity);
    auto sgn = [](int p) { return p ? -1.0 : 1.0; };
    GradedMatrix j = sgn(pa * pd) * op_supercommutator(a, op_supercommutator(c, d)).matrix;
    j += sgn(pc * pa) * op_supercommutator(c, op_supercommutator(d, a)).matrix;
    j += sgn(pd * pc) * op_supercommutator(d, op_supercommutator(a, c)).matrix;
    const double scale = std::max(1.0, a.matrix.max_abs() * c.matrix.max_abs() * d.matrix.max_abs());
    record("generalized Jacobi", j.max_abs() / scale);
  }
  return out;
}

struct VacuumReport {
  std::vector<RelationDefect> checks;
  std::vector<Generator> isotropy;  ///< generators that annihilate Ψ₀⁰ or keep it as an eigenvector
};

inline VacuumReport vacuum_checks(int nmax) {
  const SuperVector vac = SuperVector::basis(nmax, SectorParity::even_slot, 0);
  auto image = [&](Generator g) { return apply(build_generator(g, nmax), vac); };
  auto defect = [](const SuperVector& v) { return v.column().max_abs(); };

  VacuumReport r;
  auto exact = [&](const std::string& name, double d) { r.checks.push_back({name, d, 1, d == 0.0}); };
  exact("K0Ψ₀⁰ = ¼Ψ₀⁰", defect(image(Generator::K0) - 0.25 * vac));
  exact("BΨ₀⁰ = -¼Ψ₀⁰", defect(image(Generator::B) + 0.25 * vac));
  exact("K-Ψ₀⁰ = 0", defect(image(Generator::Km)));
  exact("V-Ψ₀⁰ = 0", defect(image(Generator::Vm)));
  exact("W+Ψ₀⁰ = 0", defect(image(Generator::Wp)));
  exact("W-Ψ₀⁰ = 0", defect(image(Generator::Wm)));
  const double vp = sv_norm(image(Generator::Vp));
  const double kp = sv_norm(image(Generator::Kp));
  r.checks.push_back({"V+Ψ₀⁰ ≠ 0", vp, 1, vp > 0.0});
  r.checks.push_back({"K+Ψ₀⁰ ≠ 0", kp, 1, kp > 0.0});

  for (Generator g : all_generators) {
    const Eigen::VectorXcd v = image(g).column().body();
    // isotropic: the image has no component outside Ψ₀⁰
    Eigen::VectorXcd rest = v;
    rest(0) = 0.0;
    if (rest.cwiseAbs().maxCoeff() == 0.0) r.isotropy.push_back(g);
  }
  return r;
}

/// h as ½K₊+½K₋+K₀ against (a⁺+a⁻)² built from ladder matrices, on interior
/// modes; hχ_m = −∂ₓ²χ_m pointwise and as quadrature matrix elements.
inline std::vector<RelationDefect> hamiltonian_check(int nmax, int max_mode = 6,
                                                     const QuadratureSpec& q = {}) {
  std::vector<RelationDefect> out;
  const SuperOperator h = hamiltonian(nmax);
  const int interior = interior_limit(nmax);

  // (a⁺+a⁻)² on χ_0..χ_{2N+1}; the two extra modes keep the square exact
  // on the retained block, then χ_m is moved to its super slot
  const int dim = 2 * nmax + 2;
  const Eigen::MatrixXd sum = ladder_matrix(LadderSign::raise, dim) + ladder_matrix(LadderSign::lower, dim);
  const Eigen::MatrixXd sq = sum * sum;
  Eigen::MatrixXcd route_b = Eigen::MatrixXcd::Zero(2 * nmax, 2 * nmax);
  for (int i = 0; i < 2 * nmax; ++i)
    for (int j = 0; j < 2 * nmax; ++j)
      route_b(*detail::slot_of_mode(i, nmax), *detail::slot_of_mode(j, nmax)) = sq(i, j);
  const GradedMatrix diff = h.matrix - GradedMatrix::from_complex(nmax, route_b);
  const double d_ab = diff.max_abs_interior(interior);
  out.push_back({"½K+ + ½K- + K0 = (a⁺+a⁻)²", d_ab, 2 * (interior + 1), d_ab < 1e-12});

  // even operator: off-diagonal sector blocks vanish identically
  const auto body = h.matrix.body();
  const double leak = std::max(body.topRightCorner(nmax, nmax).cwiseAbs().maxCoeff(),
                               body.bottomLeftCorner(nmax, nmax).cwiseAbs().maxCoeff());
  out.push_back({"h preserves sectors", leak, 2 * nmax, leak == 0.0});

  // pointwise hχ_m = −∂ₓ²χ_m
  double pointwise = 0.0;
  const unsigned top = static_cast<unsigned>(max_mode + 2);
  for (double t : {0.0, 0.7, -1.5})
    for (double x = -4.0; x <= 4.0; x += 0.5) {
      const auto jets = eval_chi_all(top, x, t);
      for (int m = 0; m <= max_mode; ++m) {
        const int col = *detail::slot_of_mode(m, nmax);
        cplx acc{};
        for (unsigned k = 0; k <= top; ++k) acc += body(*detail::slot_of_mode(k, nmax), col) * jets[k].value;
        pointwise = std::max(pointwise, std::abs(acc + jets[m].dxx));
      }
    }
  out.push_back({"hχ_m = -∂ₓ²χ_m pointwise", pointwise, max_mode + 1, pointwise < 1e-8});

  // ⟨χ_k| −∂ₓ² χ_m⟩ by quadrature against the matrix element
  double elements = 0.0;
  for (double t : {0.0, 1.0}) {
    const auto& rule = gauss_hermite(q.nodes);
    const double jac = std::numbers::sqrt2 * basis_envelope_scale(t);
    Eigen::MatrixXcd vals(q.nodes, top + 1), second(q.nodes, top + 1);
    for (int k = 0; k < q.nodes; ++k) {
      const auto jets = eval_chi_all(top, jac * rule.nodes[k], t);
      const double w = std::sqrt(jac * rule.scaled_weights[k]);
      for (unsigned m = 0; m <= top; ++m) {
        vals(k, m) = w * jets[m].value;
        second(k, m) = -w * jets[m].dxx;
      }
    }
    const Eigen::MatrixXcd hq = vals.adjoint() * second;
    for (unsigned k = 0; k <= top; ++k)
      for (int m = 0; m <= max_mode; ++m)
        elements = std::max(elements, std::abs(hq(k, m) - body(*detail::slot_of_mode(k, nmax),
                                                              *detail::slot_of_mode(m, nmax))));
  }
  out.push_back({"⟨χ_k|h|χ_m⟩ quadrature = matrix", elements, max_mode + 1, elements < 1e-8});
  return out;
}

}  // namespace osp22
