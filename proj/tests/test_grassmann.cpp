#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <random>

#include "osp22/grassmann.hpp"

using namespace osp22;

namespace {

GrassmannElement gen(const char* name) { return GrassmannElement::generator(name); }

// Oracle: the exterior algebra acting on the fermionic Fock space of six
// modes.  Generator k is the creation operator with a Jordan-Wigner string,
// so products of matrices reproduce the signed Grassmann product.
using Mat = Eigen::MatrixXcd;

Mat creation(int k, int modes) {
  const int dim = 1 << modes;
  Mat c = Mat::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    if (s & (1 << k)) continue;
    const int below = std::popcount(static_cast<unsigned>(s & ((1 << k) - 1)));
    c(s | (1 << k), s) = (below & 1) ? -1.0 : 1.0;
  }
  return c;
}

Mat to_matrix(const GrassmannElement& e) {
  const int n = static_cast<int>(e.generators()->size());
  Mat out = Mat::Zero(1 << n, 1 << n);
  for (const auto& [m, c] : e.terms()) {
    Mat term = Mat::Identity(1 << n, 1 << n);
    for (int k = 0; k < n; ++k)
      if (m & (Monomial{1} << k)) term = term * creation(k, n);
    out += c * term;
  }
  return out;
}

GrassmannElement random_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<Monomial> mono(0, 63);
  GrassmannElement e;
  for (int k = 0; k < 5; ++k) e.add_term(mono(rng), cplx(coeff(rng), coeff(rng)));
  return e;
}

}  // namespace

TEST(Grassmann, NilpotentGenerators) {
  EXPECT_TRUE((gen("θ") * gen("θ")).is_zero());
  EXPECT_TRUE((gen("ξ̄") * gen("ξ̄")).is_zero());
}

TEST(Grassmann, AnticommutationPutsThetaFirst) {
  const auto prod = gen("θ̄") * gen("θ");
  EXPECT_EQ(prod.terms().size(), 1u);
  EXPECT_EQ(prod.coeff(0b11), cplx(-1.0));
}

TEST(Grassmann, ExpansionWithoutSignFlips) {
  const GrassmannElement one(cplx{1.0});
  const auto prod = (one + gen("θ")) * (one + gen("θ̄"));
  EXPECT_EQ(prod.coeff(0), cplx(1.0));
  EXPECT_EQ(prod.coeff(0b01), cplx(1.0));
  EXPECT_EQ(prod.coeff(0b10), cplx(1.0));
  EXPECT_EQ(prod.coeff(0b11), cplx(1.0));
}

TEST(Grassmann, ProductMatchesFockSpaceOracle) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_element(rng), b = random_element(rng);
    const Mat expected = to_matrix(a) * to_matrix(b);
    EXPECT_EQ((to_matrix(a * b) - expected).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Grassmann, ConjugationExamples) {
  EXPECT_EQ(max_abs_diff(gr_conj(gen("θ̄")), gen("θ")), 0.0);
  const auto iaa = I * (gen("ᾱ") * gen("α"));
  EXPECT_EQ(max_abs_diff(gr_conj(iaa), iaa), 0.0);
  const GrassmannElement c(cplx{2.0, -3.0});
  EXPECT_EQ(gr_conj(c).body(), cplx(2.0, 3.0));
}

TEST(Grassmann, ConjugationKeepsFactorOrder) {
  // by hand: conj(θα) = θ̄ᾱ, in canonical order +θ̄ᾱ (θ̄ precedes α, ᾱ)
  const auto lhs = gr_conj(gen("θ") * gen("α"));
  EXPECT_EQ(max_abs_diff(lhs, gen("θ̄") * gen("ᾱ")), 0.0);
  // reversing convention would give ᾱθ̄ = −θ̄ᾱ
  EXPECT_GT(max_abs_diff(lhs, gen("ᾱ") * gen("θ̄")), 1.0);
}

TEST(Grassmann, BerezinNormalization) {
  const auto tb_t = gen("θ̄") * gen("θ");
  EXPECT_EQ(gr_berezin(tb_t, {"θ", "θ̄"}).body(), cplx(1.0));
  EXPECT_EQ(gr_berezin(gen("θ") * gen("θ̄"), {"θ", "θ̄"}).body(), cplx(-1.0));
  EXPECT_TRUE(gr_berezin(GrassmannElement(cplx{1.0}), {"θ"}).is_zero());
  EXPECT_EQ(gr_berezin(gen("θ"), {"θ"}).body(), cplx(1.0));
}

TEST(Grassmann, BerezinActsFromTheRight) {
  // ∫ α θ dθ = α: θ is already last
  EXPECT_EQ(max_abs_diff(gr_berezin(gen("α") * gen("θ"), {"θ"}), gen("α")), 0.0);
  // ∫ θ α dθ = −α
  EXPECT_EQ(max_abs_diff(gr_berezin(gen("θ") * gen("α"), {"θ"}), -gen("α")), 0.0);
}

TEST(Grassmann, Parity) {
  EXPECT_EQ(gr_parity(gen("α")), Parity::odd);
  EXPECT_EQ(gr_parity(gen("α") * gen("ξ")), Parity::even);
  EXPECT_EQ(gr_parity(GrassmannElement(cplx{1.0}) + gen("θ")), Parity::mixed);
  EXPECT_EQ(gr_parity(GrassmannElement{}), Parity::even);
  EXPECT_THROW(parity_bit(Parity::mixed), ContractViolation);
}

TEST(Grassmann, GradeInvolution) {
  const auto e = GrassmannElement(cplx{2.0}) + gen("θ") + gen("α") * gen("ξ");
  const auto g = gr_grade_involution(e);
  EXPECT_EQ(g.coeff(0), cplx(2.0));
  EXPECT_EQ(g.coeff(0b1), cplx(-1.0));
}

TEST(Grassmann, PowersAndInverse) {
  const auto x = GrassmannElement(cplx{4.0}) + (3.0 * (gen("ᾱ") * gen("α")));
  const auto r = gr_pow(x, 0.5);
  EXPECT_LT(max_abs_diff(r * r, x), 1e-15);
  EXPECT_LT(max_abs_diff(x * gr_inverse(x), GrassmannElement(cplx{1.0})), 1e-15);
  // (1 + s)^{-1} = 1 − s for s² = 0
  const auto s = gen("α") * gen("ξ");
  EXPECT_EQ(max_abs_diff(gr_inverse(GrassmannElement(cplx{1.0}) + s), GrassmannElement(cplx{1.0}) - s), 0.0);
  EXPECT_THROW(gr_pow(gen("θ"), 0.5), DomainError);
}

TEST(Grassmann, MonomialNamesRoundTrip) {
  const auto& gens = *GeneratorSet::standard();
  for (Monomial m = 0; m < 64; ++m) EXPECT_EQ(gens.parse_monomial(gens.monomial_name(m)), m);
  EXPECT_EQ(gens.index("thetabar"), 1u);
  EXPECT_THROW(gens.index("eta"), ConfigurationError);
  EXPECT_THROW(gens.parse_monomial("θ̄θ"), ConfigurationError);
}

TEST(Grassmann, MismatchedGeneratorSetsRejected) {
  auto other = std::make_shared<const GeneratorSet>(std::vector<std::string>{"η", "η̄"},
                                                    std::vector<std::size_t>{1, 0});
  EXPECT_THROW(gen("θ") * GrassmannElement::generator("η", other), ConfigurationError);
  EXPECT_THROW(GeneratorSet({"a", "b"}, {0, 0}), ConfigurationError);
}

TEST(Grassmann, DropTolerance) {
  GrassmannElement e;
  e.set_drop_tolerance(1e-10);
  e.add_term(0b1, 1e-12);
  EXPECT_TRUE(e.is_zero());
}
