#include <gtest/gtest.h>

#include <random>

#include "osp22/representation.hpp"
#include "osp22/superspace.hpp"
#include "osp22/verify.hpp"

using namespace osp22;

namespace {
GrassmannElement gen(const char* name) { return GrassmannElement::generator(name); }
}  // namespace

TEST(Superspace, BasisVectorsAndParity) {
  const auto e = SuperVector::basis(4, SectorParity::even_slot, 2);
  EXPECT_EQ(e.c(2).body(), cplx(1.0));
  EXPECT_EQ(e.parity(), Parity::even);
  const auto o = SuperVector::basis(4, SectorParity::odd_slot, 0);
  EXPECT_EQ(o.parity(), Parity::odd);
  EXPECT_EQ((gen("α") * o).parity(), Parity::even);
  EXPECT_EQ((e + o).parity(), Parity::mixed);
  EXPECT_THROW(SuperVector::basis(4, SectorParity::even_slot, 4), DimensionError);
}

TEST(Superspace, UnitNormOnBasis) {
  const auto e = SuperVector::basis(5, SectorParity::even_slot, 3);
  EXPECT_EQ(max_abs_diff(sv_super_inner(e, e), GrassmannElement(cplx{1.0})), 0.0);
  // the odd slot carries the factor i of the form
  const auto o = SuperVector::basis(5, SectorParity::odd_slot, 1);
  EXPECT_EQ(sv_super_inner(o, o).body(), I);
  EXPECT_NEAR(std::abs(sv_super_inner_berezin(o, o).body() - I), 0.0, 1e-13);
}

TEST(Superspace, OddCoefficientExample) {
  const auto v = gen("α") * SuperVector::basis(6, SectorParity::odd_slot, 0);
  const auto expected = -I * (gen("ᾱ") * gen("α"));
  EXPECT_EQ(max_abs_diff(sv_super_inner(v, v), expected), 0.0);
  EXPECT_LT(max_abs_diff(sv_super_inner_berezin(v, v), expected), 1e-13);
}

TEST(Superspace, FastPathMatchesBerezinOracle) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto a = detail::random_super_vector(rng, 6, 6, k % 2 ? Parity::odd : Parity::even);
    const auto b = detail::random_super_vector(rng, 6, 6, k % 3 ? Parity::even : Parity::odd);
    for (double t : {0.0, 1.3})
      EXPECT_LT(max_abs_diff(sv_super_inner(a, b), sv_super_inner_berezin(a, b, t)), 1e-10);
  }
}

TEST(Superspace, ConjugateSymmetry) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 30; ++k) {
    const Parity p1 = k % 2 ? Parity::odd : Parity::even, p2 = (k / 2) % 2 ? Parity::odd : Parity::even;
    const auto a = detail::random_super_vector(rng, 5, 5, p1), b = detail::random_super_vector(rng, 5, 5, p2);
    const double s = parity_bit(p1) * parity_bit(p2) ? -1.0 : 1.0;
    EXPECT_LT(max_abs_diff(gr_conj(sv_super_inner(a, b)), s * sv_super_inner(b, a)), 1e-13);
  }
}

TEST(Superspace, SesquilinearInSupernumbers) {
  // (Φ₁|βΦ₂) picks up β on the right for even β
  std::mt19937_64 rng(13);
  const auto a = detail::random_super_vector(rng, 4, 4, Parity::even);
  const auto b = detail::random_super_vector(rng, 4, 4, Parity::even);
  const auto beta = GrassmannElement(cplx{0.5, 2.0}) + gen("ξ") * gen("ξ̄");
  EXPECT_LT(max_abs_diff(sv_super_inner(a, beta * b), sv_super_inner(a, b) * beta), 1e-13);
}

TEST(Superspace, NormUsesBody) {
  SuperVector v(3);
  v.set(SectorParity::even_slot, 0, GrassmannElement(cplx{3.0}) + gen("α") * gen("ᾱ"));
  v.set(SectorParity::odd_slot, 2, GrassmannElement(cplx{0.0, 4.0}));
  EXPECT_DOUBLE_EQ(sv_norm(v), 5.0);
}

TEST(Superspace, ThetaCoefficientsRejected) {
  SuperVector v(3);
  EXPECT_THROW(v.set(SectorParity::odd_slot, 0, gen("θ̄")), ContractViolation);
  EXPECT_THROW(sv_super_inner(SuperVector(3), SuperVector(4)), DimensionError);
}

TEST(Superspace, AdjointDefectNeedsHomogeneousVector) {
  const auto k0 = build_generator(Generator::K0, 4);
  const auto mixed = SuperVector::basis(4, SectorParity::even_slot, 0) + SuperVector::basis(4, SectorParity::odd_slot, 0);
  EXPECT_THROW(superadjoint_defect(k0, mixed, mixed, k0), ContractViolation);
}
