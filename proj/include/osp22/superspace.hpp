#pragma once

// Truncated Hilbert superspace spanned by Ψₙ⁰ = ψₙ and Ψₙ¹ = θφₙ, with
// Grassmann-valued coefficients, and its super-Hermitian form.

#include <cmath>
#include <vector>

#include "basis.hpp"
#include "graded.hpp"
#include "grassmann.hpp"

namespace osp22 {

enum class SectorParity { even_slot = 0, odd_slot = 1 };

/// Σₙ cₙ Ψₙ⁰ + Σₙ dₙ Ψₙ¹.  The θ of Ψₙ¹ is implicit in the slot, so no
/// coefficient may itself contain θ or θ̄.
class SuperVector {
 public:
  explicit SuperVector(int nmax, GeneratorSetPtr gens = GeneratorSet::standard())
      : data_(nmax, 1, std::move(gens)) {}
  explicit SuperVector(GradedMatrix column) : data_(std::move(column)) {
    if (data_.cols() != 1) throw DimensionError("SuperVector needs a single column");
    check_no_theta();
  }

  /// Basis vector Ψₙ⁰ or Ψₙ¹.
  static SuperVector basis(int nmax, SectorParity slot, int n,
                           GeneratorSetPtr gens = GeneratorSet::standard()) {
    SuperVector v(nmax, std::move(gens));
    v.data_.part(0)(index(nmax, slot, n), 0) = 1.0;
    return v;
  }

  static SuperVector from_complex(int nmax, const Eigen::VectorXcd& even,
                                  const Eigen::VectorXcd& odd) {
    SuperVector v(nmax);
    auto& p = v.data_.part(0);
    p.col(0).head(even.size()) = even;
    p.col(0).segment(nmax, odd.size()) = odd;
    return v;
  }

  int truncation() const { return data_.truncation(); }
  const GradedMatrix& column() const { return data_; }
  const GeneratorSetPtr& generators() const { return data_.generators(); }

  GrassmannElement c(int n) const { return data_.entry(index(truncation(), SectorParity::even_slot, n), 0); }
  GrassmannElement d(int n) const { return data_.entry(index(truncation(), SectorParity::odd_slot, n), 0); }
  GrassmannElement coeff(SectorParity slot, int n) const {
    return slot == SectorParity::even_slot ? c(n) : d(n);
  }

  void set(SectorParity slot, int n, const GrassmannElement& value) {
    reject_theta(value);
    data_.set_entry(index(truncation(), slot, n), 0, value);
  }

  SuperVector& operator+=(const SuperVector& o) {
    data_ += o.data_;
    return *this;
  }
  SuperVector& operator-=(const SuperVector& o) {
    data_ -= o.data_;
    return *this;
  }
  friend SuperVector operator+(SuperVector a, const SuperVector& b) { return a += b; }
  friend SuperVector operator-(SuperVector a, const SuperVector& b) { return a -= b; }
  friend SuperVector operator*(cplx s, SuperVector a) {
    a.data_ *= s;
    return a;
  }
  friend SuperVector operator*(const GrassmannElement& beta, const SuperVector& a) {
    return SuperVector(beta * a.data_);
  }

  /// even: cₙ even, dₙ odd; odd: cₙ odd, dₙ even; mixed otherwise.
  Parity parity() const {
    bool even = false, odd = false;
    for (const auto& [m, p] : data_.parts())
      for (int i = 0; i < p.rows(); ++i) {
        if (p(i, 0) == cplx{}) continue;
        ((degree(m) + GradedMatrix::sector(i, truncation())) & 1 ? odd : even) = true;
      }
    if (even && odd) return Parity::mixed;
    return odd ? Parity::odd : Parity::even;
  }

  static int index(int nmax, SectorParity slot, int n) {
    if (n < 0 || n >= nmax) throw DimensionError("mode index outside the truncation");
    return slot == SectorParity::even_slot ? n : nmax + n;
  }

 private:
  void reject_theta(const GrassmannElement& value) const {
    const Monomial mask = theta_mask(*value.generators());
    for (const auto& [m, c] : value.terms())
      if (m & mask) throw ContractViolation("SuperVector coefficients must not contain θ or θ̄");
  }
  void check_no_theta() const {
    const Monomial mask = theta_mask(*data_.generators());
    for (const auto& [m, p] : data_.parts())
      if ((m & mask) && p.cwiseAbs().maxCoeff() > 0.0)
        throw ContractViolation("SuperVector coefficients must not contain θ or θ̄");
  }
  static Monomial theta_mask(const GeneratorSet& gens) {
    Monomial mask = 0;
    for (const char* name : {"θ", "θ̄"}) {
      try {
        mask |= Monomial{1} << gens.index(name);
      } catch (const ConfigurationError&) {
      }
    }
    return mask;
  }

  GradedMatrix data_;
};

inline SuperVector apply(const SuperOperator& a, const SuperVector& v) {
  return SuperVector(a.matrix * v.column());
}

/// (Φ₁|Φ₂) = Σ conj(cₙ) c′ₙ + i Σ (−1)^{p(d′ₙ)} conj(dₙ) d′ₙ.
inline GrassmannElement sv_super_inner(const SuperVector& a, const SuperVector& b) {
  const int n = a.truncation();
  if (b.truncation() != n) throw DimensionError("super inner product of different truncations");
  const GeneratorSet& gens = *a.generators();
  GrassmannElement out(a.generators());
  for (const auto& [m1, p1] : a.column().parts()) {
    const auto [cm1, s1] = detail::conj_monomial(gens, m1);
    for (const auto& [m2, p2] : b.column().parts()) {
      const int s = detail::product_sign(cm1, m2);
      if (!s) continue;
      // Eigen's dot conjugates its left operand
      const cplx even = p1.col(0).head(n).dot(p2.col(0).head(n));
      const cplx odd = p1.col(0).tail(n).dot(p2.col(0).tail(n));
      const double iota = degree(m2) & 1 ? -1.0 : 1.0;
      out.add_term(cm1 | m2, static_cast<double>(s1 * s) * (even + I * iota * odd));
    }
  }
  return out;
}

/// The same form evaluated from its definition: the integrand
/// conj(Φ₁) Φ₂ · i e^{−iθ̄θ} is built as a Grassmann element at each
/// quadrature node, Berezin-integrated over (θ, θ̄), and summed over x.
inline GrassmannElement sv_super_inner_berezin(const SuperVector& a, const SuperVector& b,
                                               double t = 0.0, const QuadratureSpec& q = {}) {
  const int n = a.truncation();
  if (b.truncation() != n) throw DimensionError("super inner product of different truncations");
  const auto& gens = a.generators();
  const GrassmannElement theta = GrassmannElement::generator("θ", gens);
  const GrassmannElement thetabar = GrassmannElement::generator("θ̄", gens);
  const GrassmannElement one(cplx{1.0}, gens);
  const GrassmannElement weight = I * (one - I * (thetabar * theta));
  const std::vector<std::size_t> measure{gens->index("θ"), gens->index("θ̄")};

  std::vector<GrassmannElement> ca, da, cb, db;
  for (int k = 0; k < n; ++k) {
    ca.push_back(a.c(k));
    da.push_back(a.d(k) * theta);
    cb.push_back(b.c(k));
    db.push_back(b.d(k) * theta);
  }

  const auto& rule = gauss_hermite(q.nodes);
  const double jac = std::numbers::sqrt2 * basis_envelope_scale(t);
  GrassmannElement total(gens);
  for (int k = 0; k < q.nodes; ++k) {
    const double x = jac * rule.nodes[k];
    const auto jets = eval_chi_all(2 * n - 1, x, t);
    GrassmannElement fa(gens), fb(gens);
    for (int j = 0; j < n; ++j) {
      fa += ca[j] * jets[2 * j].value + da[j] * jets[2 * j + 1].value;
      fb += cb[j] * jets[2 * j].value + db[j] * jets[2 * j + 1].value;
    }
    const GrassmannElement integrand = gr_conj(fa) * fb * weight;
    total += gr_berezin(integrand, std::span<const std::size_t>(measure)) * (jac * rule.scaled_weights[k]);
  }
  return total;
}

/// ‖Φ‖ = (‖χ⁰‖₀² + ‖χ¹‖₁²)^{1/2}; only the body of each coefficient enters.
inline double sv_norm(const SuperVector& v) {
  return v.column().body().norm();
}

/// (A⁺Φ₁|Φ₂) − (−1)^{p(Φ₁)p(A)} (Φ₁|AΦ₂).  Zero certifies the claimed adjoint on this pair.
inline GrassmannElement superadjoint_defect(const SuperOperator& a, const SuperVector& phi1,
                                            const SuperVector& phi2, const SuperOperator& a_plus) {
  const Parity p1 = phi1.parity();
  if (p1 == Parity::mixed) throw ContractViolation("superadjoint_defect needs a homogeneous Φ₁");
  if (a.parity == Parity::mixed || a.parity != a_plus.parity)
    throw ContractViolation("A and the claimed A⁺ must be homogeneous of the same parity");
  const double sign = (parity_bit(p1) * parity_bit(a.parity)) ? -1.0 : 1.0;
  return sv_super_inner(apply(a_plus, phi1), phi2) - sign * sv_super_inner(phi1, apply(a, phi2));
}

}  // namespace osp22
