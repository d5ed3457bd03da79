// One PASS/FAIL line per acceptance criterion. Limits are fixed here and do
// not follow the run configuration.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "osp22/verify.hpp"

using namespace osp22;

namespace {

struct Rule {
  std::string prefix;  // record id or id prefix
  double limit;        // defect must be below this; 0 means exactly zero
  bool nonzero = false;  // the recorded value is a norm that must not vanish
};

struct Criterion {
  int number;
  std::string title;
  std::vector<Rule> rules;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c{
      {1,
       "Grassmann axioms, 1000 random cases",
       {{"grassmann.associativity", 1e-14},
        {"grassmann.supercommutativity", 1e-14},
        {"grassmann.conj_homomorphism", 1e-14},
        {"grassmann.berezin_normalization", 1e-14}}},
      {2,
       "basis orthonormality and Schrödinger residual",
       {{"basis.orthonormality.", 1e-10}, {"basis.schrodinger_residual", 1e-6}}},
      {3,
       "ladder elements and k0 spectrum by quadrature",
       {{"basis.ladder_raise", 1e-10}, {"basis.ladder_lower", 1e-10}, {"basis.k0_spectrum", 1e-10}}},
      {4,
       "supercommutator table and Jacobi at N = 32",
       {{"algebra.table.", 1e-12}}},
      {5,
       "vacuum annihilators and weights",
       {{"algebra.vacuum.K0Ψ₀⁰ = ¼Ψ₀⁰", 0.0},
        {"algebra.vacuum.BΨ₀⁰ = -¼Ψ₀⁰", 0.0},
        {"algebra.vacuum.K-Ψ₀⁰ = 0", 0.0},
        {"algebra.vacuum.V-Ψ₀⁰ = 0", 0.0},
        {"algebra.vacuum.W+Ψ₀⁰ = 0", 0.0},
        {"algebra.vacuum.W-Ψ₀⁰ = 0", 0.0},
        {"algebra.vacuum.V+Ψ₀⁰ ≠ 0", 0.0, true}}},
      {6,
       "superadjoint table and Berezin inner-product oracle",
       {{"algebra.adjoint.", 1e-12}, {"superspace.berezin_oracle", 1e-10}}},
      {7,
       "coherent state three-route agreement and unit norm",
       {{"coherent.closed_vs_series", 1e-8},
        {"coherent.closed_vs_gamma", 1e-8},
        {"coherent.series_vs_gamma", 1e-8},
        {"coherent.norm_closed", 1e-12},
        {"coherent.norm_series", 1e-12}}},
      {8, "Berezin symbols under one calibrated convention",
       {{"coherent.calibration", 0.0}, {"coherent.symbol.", 1e-8}}},
      {9,
       "trajectory of the odd sector",
       {{"coherent.trajectory.p_constant", 1e-10},
        {"coherent.trajectory.affine", 1e-9},
        {"coherent.trajectory.intercept", 1e-9},
        {"coherent.trajectory.slope", 1e-9},
        {"coherent.trajectory.even_static", 1e-10}}},
      {10,
       "D′ superisometry and vacuum orbit at N = 64",
       {{"coherent.displacement.superisometry", 1e-6}, {"coherent.displacement.vacuum_orbit", 1e-6}}},
      {11,
       "Hamiltonian as a generator combination",
       {{"algebra.hamiltonian.½K+ + ½K- + K0 = (a⁺+a⁻)²", 1e-12},
        {"algebra.hamiltonian.hχ_m = -∂ₓ²χ_m pointwise", 1e-8}}},
  };
  return c;
}

bool rule_passes(const Rule& rule, const CheckRecord& r) {
  if (rule.nonzero) return r.defect > 0.0;
  if (rule.limit == 0) return r.defect == 0.0;
  return r.defect < rule.limit;  // false for NaN
}

// printf pads by bytes
std::string pad(const std::string& s, std::size_t width) {
  std::size_t cols = 0;
  for (unsigned char ch : s) cols += (ch & 0xC0) != 0x80;
  return cols < width ? s + std::string(width - cols, ' ') : s;
}

}  // namespace

int main() {
  RunConfig cfg;
  cfg.nmax = 32;
  cfg.tol = Tolerances{1e-12, 1e-10, 1e-8, 1e-6, 1e-6};
  cfg.z_samples = {cplx{0.3}, cplx{0.0, 0.5}, cplx{-0.7}, std::polar(0.8, std::numbers::pi / 4)};
  cfg.t_samples = {0.0, 1.0};

  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  try {
    rep = run_suite("all", cfg);
  } catch (const std::exception& e) {
    std::printf("FAIL  suite aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const auto& c : criteria()) {
    bool ok = true;
    int matched = 0;
    double worst = 0.0;
    std::string worst_id;
    for (const auto& rule : c.rules)
      for (const auto& r : rep.records) {
        if (r.id.compare(0, rule.prefix.size(), rule.prefix) != 0) continue;
        ++matched;
        if (!rule_passes(rule, r)) {
          ok = false;
          worst_id = r.id;
        }
        if (!rule.nonzero && r.defect > worst) worst = r.defect;
      }
    // every rule has to match at least one record
    for (const auto& rule : c.rules) {
      bool any = false;
      for (const auto& r : rep.records) any = any || r.id.compare(0, rule.prefix.size(), rule.prefix) == 0;
      if (!any) {
        ok = false;
        worst_id = "missing " + rule.prefix;
      }
    }
    if (!ok) ++failed;
    std::printf("%s  %2d  %s checks=%-3d max_defect=%.3e%s%s\n", ok ? "PASS" : "FAIL", c.number,
                pad(c.title, 52).c_str(),
                matched, worst, ok ? "" : "  at ", worst_id.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria().size()) - failed, criteria().size(),
              secs);
  return failed == 0 ? 0 : 1;
}
