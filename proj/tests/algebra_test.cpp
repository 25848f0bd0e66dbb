#include <gtest/gtest.h>

#include <random>

#include "nclift/nclift.hpp"
#include "oracles.hpp"

namespace nclift {
namespace {

const Modulus p7(7);
const Alphabet X2("X", 2);
const Alphabet X4("X", 4);

NCPolynomial x(Var v, const Alphabet& a = X2, Modulus p = p7) { return NCPolynomial::variable(a, p, v); }
Scalar s7(u64 v) { return Scalar(v, p7); }

TEST(Modulus, RejectsCompositesAndOversize) {
  EXPECT_THROW(Modulus(1), InvalidArgument);
  EXPECT_THROW(Modulus(9), InvalidArgument);
  EXPECT_THROW(Modulus(1000000007ULL * 3), InvalidArgument);
  EXPECT_THROW(Modulus((u64{1} << 62) + 135), InvalidArgument);
  EXPECT_NO_THROW(Modulus(2));
  EXPECT_NO_THROW(Modulus(2305843009213693951ULL));  // 2^61 - 1
  EXPECT_EQ(Modulus().value(), 1000000007ULL);
}

TEST(Modulus, MillerRabinAgreesWithSieveBelow5000) {
  std::vector<bool> composite(5000, false);
  for (u64 i = 2; i < 5000; ++i) {
    if (composite[i]) continue;
    for (u64 j = i * i; j < 5000; j += i) composite[j] = true;
  }
  for (u64 n = 2; n < 5000; ++n) {
    EXPECT_EQ(is_prime(n), !composite[n]) << n;
    EXPECT_EQ(detail::miller_rabin(n), !composite[n]) << n;
  }
  // strong pseudoprimes to small bases
  EXPECT_FALSE(detail::miller_rabin(3215031751ULL));
  EXPECT_FALSE(detail::miller_rabin(3825123056546413051ULL));
}

TEST(Scalar, ArithmeticAndInverse) {
  EXPECT_EQ((s7(5) + s7(4)).value(), 2u);
  EXPECT_EQ((s7(2) - s7(5)).value(), 4u);
  EXPECT_EQ((s7(3) * s7(5)).value(), 1u);
  EXPECT_EQ(Scalar::from_signed(-1, p7).value(), 6u);
  EXPECT_EQ(Scalar::from_signed(-15, p7).value(), 6u);
  EXPECT_THROW(s7(0).inverse(), InvalidArgument);
  for (u64 a = 1; a < 7; ++a) EXPECT_EQ((s7(a) * s7(a).inverse()).value(), 1u);
  EXPECT_THROW(s7(1) + Scalar(1, Modulus(11)), MismatchError);

  const Modulus big(2305843009213693951ULL);
  const Scalar a(2305843009213693950ULL, big);
  EXPECT_EQ((a * a).value(), 1u);
}

TEST(Word, ConcatExamples) {
  const Alphabet x("X", 4);
  EXPECT_EQ(word_concat(Word(x, {0}), Word(x, {1})).letters(), (Letters{0, 1}));
  EXPECT_EQ(word_concat(Word(x, {}), Word(x, {3})).letters(), (Letters{3}));
  EXPECT_EQ(word_concat(Word(x, {1, 0}), Word(x, {1})).letters(), (Letters{1, 0, 1}));
  EXPECT_THROW(word_concat(Word(x, {0}), Word(Alphabet("Y", 4), {0})), MismatchError);
  EXPECT_THROW(Word(x, {4}), InvalidArgument);
  EXPECT_EQ(Word(x, {}).to_string(), "1");
  EXPECT_EQ(Word(x, {2, 0}).to_string(), "x2 x0");
}

TEST(Word, LengthLexOrder) {
  const LengthLexLess less;
  EXPECT_TRUE(less({}, {0}));
  EXPECT_TRUE(less({3}, {0, 0}));
  EXPECT_TRUE(less({0, 1}, {1, 0}));
  EXPECT_FALSE(less({1, 0}, {1, 0}));
}

TEST(Polynomial, AddExamples) {
  const NCPolynomial x0x1 = x(0) * x(1);
  EXPECT_EQ(x0x1.scaled(s7(2)) + x0x1.scaled(s7(3)), x0x1.scaled(s7(5)));
  const NCPolynomial f = x(0) + x0x1.scaled(s7(6));
  EXPECT_EQ(f + NCPolynomial(X2, p7), f);
  EXPECT_TRUE((x(0).scaled(s7(3)) + x(0).scaled(s7(4))).is_zero());
  EXPECT_THROW(poly_add(x(0), x(0, X4)), MismatchError);
  EXPECT_THROW(poly_add(x(0), x(0, X2, Modulus(11))), MismatchError);
}

TEST(Polynomial, MulExamples) {
  EXPECT_EQ(poly_mul(x(0) + x(1), x(0)), x(0) * x(0) + x(1) * x(0));
  EXPECT_NE(x(0) * x(1), x(1) * x(0));
  EXPECT_EQ((x(0) * x(1)).size(), 1u);

  const NCPolynomial sq = poly_mul(x(0) + x(1), x(0) + x(1));
  const oracle::Table want{{{0, 0}, 1}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 1}};
  EXPECT_EQ(oracle::table_of(sq), want);
  EXPECT_EQ(oracle::convolution(x(0) + x(1), x(0) + x(1)), want);
  EXPECT_THROW(poly_mul(x(0), x(0, X4)), MismatchError);
}

TEST(Polynomial, CoeffExamples) {
  const NCPolynomial f = (x(0) * x(1)).scaled(s7(2)) + x(1);
  EXPECT_EQ(coeff(f, Word(X2, {0, 1})).value(), 2u);
  EXPECT_EQ(coeff(f, Word(X2, {1, 1})).value(), 0u);
  EXPECT_EQ(coeff(NCPolynomial(X2, p7), Word(X2, {})).value(), 0u);
  EXPECT_THROW(coeff(f, Word(X4, {0})), MismatchError);
}

TEST(Polynomial, ZeroCoefficientsNeverStored) {
  NCPolynomial f(X2, p7);
  f.add_term({0, 1}, s7(3));
  f.add_term({0, 1}, s7(4));
  f.add_term({1}, s7(0));
  EXPECT_TRUE(f.is_zero());
  EXPECT_EQ(f.degree(), 0u);
  EXPECT_THROW(f.add_term({2}, s7(1)), InvalidArgument);
}

TEST(Polynomial, ToString) {
  EXPECT_EQ(NCPolynomial(X2, p7).to_string(), "0");
  const NCPolynomial f = NCPolynomial::one(X2, p7).scaled(s7(3)) + x(1) * x(0);
  EXPECT_NE(f.to_string().find("x1 x0"), std::string::npos);
}

TEST(Polynomial, SubstituteAndEvaluate) {
  const Alphabet y("Y", 2);
  std::map<Var, NCPolynomial> sub{{0, NCPolynomial::variable(y, p7, 1) * NCPolynomial::variable(y, p7, 0)},
                                  {1, NCPolynomial::one(y, p7)}};
  const NCPolynomial g = substitute(x(0) * x(1) + x(1), sub, y);
  EXPECT_EQ(g, NCPolynomial::variable(y, p7, 1) * NCPolynomial::variable(y, p7, 0) + NCPolynomial::one(y, p7));
  EXPECT_THROW(substitute(x(0), {}, y), InvalidArgument);

  const NCPolynomial f = x(0) * x(1) + x(1) * x(0);
  EXPECT_EQ(evaluate(f, {{0, s7(2)}, {1, s7(3)}}).value(), 5u);
}

class RingLaws : public ::testing::TestWithParam<u64> {};

TEST_P(RingLaws, HoldOnRandomPolynomials) {
  const Modulus p(GetParam());
  const Alphabet a("X", 3);
  std::mt19937_64 rng(GetParam());
  for (int trial = 0; trial < 100; ++trial) {
    const NCPolynomial f = oracle::random_poly(a, p, 3, 4, rng);
    const NCPolynomial g = oracle::random_poly(a, p, 3, 4, rng);
    const NCPolynomial h = oracle::random_poly(a, p, 2, 3, rng);
    const NCPolynomial zero(a, p);
    const NCPolynomial one = NCPolynomial::one(a, p);
    EXPECT_EQ(f + g, g + f);
    EXPECT_EQ((f + g) + h, f + (g + h));
    EXPECT_EQ((f * g) * h, f * (g * h));
    EXPECT_EQ(f * (g + h), f * g + f * h);
    EXPECT_EQ((f + g) * h, f * h + g * h);
    EXPECT_EQ(f * one, f);
    EXPECT_EQ(one * f, f);
    EXPECT_TRUE((f * zero).is_zero());
    EXPECT_TRUE((f - f).is_zero());
    EXPECT_EQ(oracle::table_of(f * g), oracle::convolution(f, g));
    if (!f.is_zero() && !g.is_zero()) {
      EXPECT_EQ((f * g).degree(), f.degree() + g.degree());
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Moduli, RingLaws, ::testing::Values(7ULL, 1000000007ULL));

TEST(Matrix, OrderedProductAndIdentity) {
  const Scalar z = s7(0), o = s7(1);
  const auto m0 = SquareMatrix<Scalar>::from_rows({{z, o}, {z, z}});
  const auto m1 = SquareMatrix<Scalar>::from_rows({{z, z}, {o, z}});
  EXPECT_EQ(m0 * m1, SquareMatrix<Scalar>::from_rows({{o, z}, {z, z}}));
  EXPECT_EQ(m1 * m0, SquareMatrix<Scalar>::from_rows({{z, z}, {z, o}}));
  const auto id = SquareMatrix<Scalar>::identity(2, z, o);
  EXPECT_EQ(id * m0, m0);
  EXPECT_THROW(m0 * SquareMatrix<Scalar>(3, z), MismatchError);
  EXPECT_THROW(SquareMatrix<Scalar>(0, z), InvalidArgument);
}

TEST(Matrix, PolynomialEvaluationIsWordByWord) {
  const Scalar z = s7(0), o = s7(1), two = s7(2);
  MatrixPoint<Scalar> pt;
  pt.emplace(0, SquareMatrix<Scalar>::from_rows({{o, two}, {z, o}}));
  pt.emplace(1, SquareMatrix<Scalar>::from_rows({{o, z}, {two, o}}));
  const NCPolynomial f = x(0) * x(1) + x(1) * x(1) * x(0).scaled(s7(3));
  auto want = (pt.at(0) * pt.at(1)) + (pt.at(1) * pt.at(1) * pt.at(0)).scaled(s7(3));
  EXPECT_EQ(evaluate(f, pt, 2, z, o), want);
}

}  // namespace
}  // namespace nclift
