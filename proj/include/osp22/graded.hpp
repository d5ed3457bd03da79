#pragma once

// Grassmann-valued matrices over the truncated super basis
//   (Ψ_0⁰ … Ψ_{N-1}⁰, Ψ_0¹ … Ψ_{N-1}¹),
// stored as Σ_monomial monomial ⊗ complex matrix.  An entry M_ij multiplies
// the elementary operator E_ij : Ψ_j ↦ Ψ_i, whose parity is s(i) + s(j).
// Moving E_ij past a coefficient β applies the grade involution to β that
// many times, which gives the product rule
//   (AC)_ik = Σ_j A_ij · ι^{s(i)+s(j)}(C_jk).

#include <Eigen/Dense>

#include <map>
#include <string>
#include <utility>

#include "grassmann.hpp"

namespace osp22 {

class GradedMatrix {
 public:
  using Part = Eigen::MatrixXcd;

  GradedMatrix(int nmax, int cols, GeneratorSetPtr gens = GeneratorSet::standard())
      : gens_(std::move(gens)), nmax_(nmax), cols_(cols) {
    if (nmax < 1) throw DimensionError("truncation must be at least 1");
  }

  static GradedMatrix square(int nmax, GeneratorSetPtr gens = GeneratorSet::standard()) {
    return GradedMatrix(nmax, 2 * nmax, std::move(gens));
  }
  static GradedMatrix from_complex(int nmax, const Part& m,
                                   GeneratorSetPtr gens = GeneratorSet::standard()) {
    GradedMatrix g(nmax, static_cast<int>(m.cols()), std::move(gens));
    if (m.rows() != 2 * nmax) throw DimensionError("matrix does not match the truncation");
    g.parts_.emplace(0, m);
    return g;
  }

  int truncation() const { return nmax_; }
  int rows() const { return 2 * nmax_; }
  int cols() const { return cols_; }
  const GeneratorSetPtr& generators() const { return gens_; }
  const std::map<Monomial, Part>& parts() const { return parts_; }

  static int sector(int index, int nmax) { return index >= nmax ? 1 : 0; }
  int row_sector(int i) const { return sector(i, nmax_); }

  Part& part(Monomial m) {
    auto it = parts_.find(m);
    if (it == parts_.end()) it = parts_.emplace(m, Part::Zero(rows(), cols_)).first;
    return it->second;
  }
  Part part_or_zero(Monomial m) const {
    auto it = parts_.find(m);
    return it == parts_.end() ? Part::Zero(rows(), cols_) : it->second;
  }
  Part body() const { return part_or_zero(0); }

  GrassmannElement entry(int i, int j) const {
    GrassmannElement e(gens_);
    for (const auto& [m, p] : parts_) e.add_term(m, p(i, j));
    return e;
  }
  void set_entry(int i, int j, const GrassmannElement& value) {
    for (auto& [m, p] : parts_) p(i, j) = 0.0;
    for (const auto& [m, c] : value.terms()) part(m)(i, j) = c;
  }

  GradedMatrix& operator+=(const GradedMatrix& o) {
    check_compatible(o);
    for (const auto& [m, p] : o.parts_) part(m) += p;
    return *this;
  }
  GradedMatrix& operator-=(const GradedMatrix& o) {
    check_compatible(o);
    for (const auto& [m, p] : o.parts_) part(m) -= p;
    return *this;
  }
  GradedMatrix& operator*=(cplx s) {
    for (auto& [m, p] : parts_) p *= s;
    return *this;
  }
  friend GradedMatrix operator+(GradedMatrix a, const GradedMatrix& b) { return a += b; }
  friend GradedMatrix operator-(GradedMatrix a, const GradedMatrix& b) { return a -= b; }
  friend GradedMatrix operator*(GradedMatrix a, cplx s) { return a *= s; }
  friend GradedMatrix operator*(cplx s, GradedMatrix a) { return a *= s; }

  /// Left multiplication by a supernumber: (βA)_ij = β A_ij.
  friend GradedMatrix operator*(const GrassmannElement& beta, const GradedMatrix& a) {
    GradedMatrix out(a.nmax_, a.cols_, a.gens_);
    for (const auto& [mb, cb] : beta.terms())
      for (const auto& [ma, pa] : a.parts_) {
        const int s = detail::product_sign(mb, ma);
        if (s) out.part(mb | ma) += (static_cast<double>(s) * cb) * pa;
      }
    return out;
  }

  friend GradedMatrix operator*(const GradedMatrix& a, const GradedMatrix& c) {
    a.check_compatible_gens(c);
    if (a.cols_ != c.rows()) throw DimensionError("graded product: inner dimensions differ");
    GradedMatrix out(a.nmax_, c.cols_, a.gens_);
    for (const auto& [ma, pa] : a.parts_) {
      Part flipped;
      for (const auto& [mc, pc] : c.parts_) {
        const int s = detail::product_sign(ma, mc);
        if (!s) continue;
        const Part* left = &pa;
        if (degree(mc) & 1) {
          if (flipped.size() == 0) flipped = a.flip_off_diagonal(pa);
          left = &flipped;
        }
        if (s > 0)
          out.part(ma | mc).noalias() += (*left) * pc;
        else
          out.part(ma | mc).noalias() -= (*left) * pc;
      }
    }
    return out;
  }

  /// Sign (−1)^{s(i)+s(j)} applied entry-wise.
  Part flip_off_diagonal(const Part& p) const {
    Part q = p;
    if (cols_ == rows()) {
      q.topRightCorner(nmax_, nmax_) *= -1.0;
      q.bottomLeftCorner(nmax_, nmax_) *= -1.0;
    } else {
      // column vectors: the column index carries no sector
      q.bottomRows(nmax_) *= -1.0;
    }
    return q;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [k, p] : parts_)
      if (p.size()) m = std::max(m, p.cwiseAbs().maxCoeff());
    return m;
  }

  /// Largest entry over the columns whose mode index n = j mod N is ≤ nmax_col.
  double max_abs_interior(int nmax_col) const {
    double m = 0.0;
    for (const auto& [k, p] : parts_)
      for (int j = 0; j < cols_; ++j) {
        if (j % nmax_ > nmax_col) continue;
        m = std::max(m, p.col(j).cwiseAbs().maxCoeff());
      }
    return m;
  }

  void prune(double tol = 0.0) {
    std::erase_if(parts_, [tol](const auto& kv) {
      return kv.second.size() == 0 || kv.second.cwiseAbs().maxCoeff() <= tol;
    });
  }

 private:
  void check_compatible_gens(const GradedMatrix& o) const {
    if (gens_ != o.gens_ && !(*gens_ == *o.gens_))
      throw ConfigurationError("graded matrices over different generator sets");
  }
  void check_compatible(const GradedMatrix& o) const {
    check_compatible_gens(o);
    if (nmax_ != o.nmax_ || cols_ != o.cols_) throw DimensionError("graded matrices differ in shape");
  }

  GeneratorSetPtr gens_;
  int nmax_;
  int cols_;
  std::map<Monomial, Part> parts_;
};

/// Parity of a graded matrix read from its content: every entry of monomial
/// m at (i, j) must have deg(m) + s(i) + s(j) of one parity.
inline Parity content_parity(const GradedMatrix& a, double tol = 0.0) {
  bool even = false, odd = false;
  const int n = a.truncation();
  for (const auto& [m, p] : a.parts()) {
    for (int j = 0; j < p.cols(); ++j)
      for (int i = 0; i < p.rows(); ++i) {
        if (std::abs(p(i, j)) <= tol) continue;
        const int col_sector = a.cols() == a.rows() ? GradedMatrix::sector(j, n) : 0;
        const int par = (degree(m) + GradedMatrix::sector(i, n) + col_sector) & 1;
        (par ? odd : even) = true;
      }
  }
  if (even && odd) return Parity::mixed;
  return odd ? Parity::odd : Parity::even;
}

/// Homogeneous operator on the truncated superspace.
struct SuperOperator {
  std::string name;
  Parity parity = Parity::even;
  GradedMatrix matrix;

  int truncation() const { return matrix.truncation(); }
};

inline SuperOperator operator*(const SuperOperator& a, const SuperOperator& c) {
  const Parity p = (parity_bit(a.parity) + parity_bit(c.parity)) & 1 ? Parity::odd : Parity::even;
  return {a.name + "·" + c.name, p, a.matrix * c.matrix};
}

inline SuperOperator operator+(const SuperOperator& a, const SuperOperator& c) {
  if (a.parity != c.parity) throw ContractViolation("sum of operators of different parity");
  return {a.name + "+" + c.name, a.parity, a.matrix + c.matrix};
}

inline SuperOperator operator-(const SuperOperator& a, const SuperOperator& c) {
  if (a.parity != c.parity) throw ContractViolation("difference of operators of different parity");
  return {a.name + "-" + c.name, a.parity, a.matrix - c.matrix};
}

inline SuperOperator operator*(cplx s, const SuperOperator& a) { return {a.name, a.parity, s * a.matrix}; }

/// β·A; the parity shifts by the parity of β.
inline SuperOperator operator*(const GrassmannElement& beta, const SuperOperator& a) {
  const int pb = parity_bit(gr_parity(beta));
  const Parity p = (pb + parity_bit(a.parity)) & 1 ? Parity::odd : Parity::even;
  return {"β" + a.name, p, beta * a.matrix};
}

}  // namespace osp22
