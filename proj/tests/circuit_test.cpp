#include <gtest/gtest.h>

#include <random>

#include "nclift/nclift.hpp"
#include "oracles.hpp"

namespace nclift {
namespace {

const Modulus p7(7);
const Alphabet X2("X", 2);

Circuit commutator_sum(const Alphabet& a, Modulus p, bool minus) {
  CircuitBuilder b("c", a, p);
  const NodeId x0 = b.input(0);
  const NodeId x1 = b.input(1);
  const NodeId ab = b.mul(x0, x1);
  NodeId ba = b.mul(x1, x0);
  if (minus) ba = b.mul(b.constant(p.value() - 1), ba);
  b.add(ab, ba);
  return std::move(b).build();
}

Circuit random_small(std::mt19937_64& rng, const Alphabet& a, Modulus p, std::size_t deg = 4) {
  return random_circuit(RandomCircuitSpec{a, p, deg, 16, 3, 0.15}, rng);
}

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(Circuit("c", X2, p7, {Node::input(0)}, 0)).ok);

  const auto dangling = validate(Circuit("c", X2, p7, {Node::input(0), Node::add(5, 0)}, 1));
  EXPECT_FALSE(dangling.ok);
  EXPECT_EQ(dangling.node, std::optional<NodeId>(1));
  EXPECT_NE(dangling.message.find("5"), std::string::npos);

  const auto forward = validate(Circuit("c", X2, p7, {Node::mul(1, 0), Node::input(0)}, 0));
  EXPECT_FALSE(forward.ok);
  EXPECT_EQ(forward.node, std::optional<NodeId>(0));

  EXPECT_FALSE(validate(Circuit("c", X2, p7, {Node::input(0)}, 3)).ok);
  EXPECT_FALSE(validate(Circuit("c", X2, p7, {Node::input(2)}, 0)).ok);
  EXPECT_FALSE(validate(Circuit("c", X2, p7, {}, 0)).ok);
  EXPECT_THROW(require_valid(Circuit("c", X2, p7, {Node::input(2)}, 0)), InvalidArgument);
}

TEST(Builder, RejectsForwardReferences) {
  CircuitBuilder b("c", X2, p7);
  b.input(0);
  EXPECT_THROW(b.add(0, 1), InvalidArgument);
  EXPECT_THROW(b.input(2), InvalidArgument);
  EXPECT_EQ(b.constant(9), 1u);
  EXPECT_THROW(CircuitBuilder("c", X2, p7).build(), InvalidArgument);
}

TEST(EvalScalar, Examples) {
  const Circuit c = commutator_sum(X2, p7, false);
  EXPECT_EQ(eval_scalar(c, {{0, Scalar(2, p7)}, {1, Scalar(3, p7)}}).value(), 5u);
  EXPECT_EQ(eval_scalar(c, {{0, Scalar(0, p7)}, {1, Scalar(0, p7)}}).value(), 0u);
  EXPECT_EQ(eval_scalar(Circuit("k", X2, p7, {Node::constant(4)}, 0), {}).value(), 4u);
  EXPECT_THROW(eval_scalar(c, {{0, Scalar(2, p7)}}), InvalidArgument);
}

TEST(EvalMatrix, CommutatorAtFixedPair) {
  const Modulus p;
  const Scalar z(0, p), o(1, p);
  MatrixPoint<Scalar> pt;
  pt.emplace(0, SquareMatrix<Scalar>::from_rows({{z, o}, {z, z}}));
  pt.emplace(1, SquareMatrix<Scalar>::from_rows({{z, z}, {o, z}}));
  const auto v = eval_matrix(commutator_sum(X2, p, true), pt);
  EXPECT_EQ(v, SquareMatrix<Scalar>::from_rows({{o, z}, {z, Scalar::from_signed(-1, p)}}));
  EXPECT_EQ(eval_matrix(commutator_sum(X2, p, true), pt, ProductOrder::kRightLeft),
            SquareMatrix<Scalar>::from_rows({{Scalar::from_signed(-1, p), z}, {z, o}}));
}

TEST(EvalMatrix, IdentityPointAndConstants) {
  std::mt19937_64 rng(3);
  const Scalar z(0, p7), o(1, p7);
  for (int i = 0; i < 20; ++i) {
    const Circuit c = random_small(rng, X2, p7);
    MatrixPoint<Scalar> pt;
    pt.emplace(0, SquareMatrix<Scalar>::identity(3, z, o));
    pt.emplace(1, SquareMatrix<Scalar>::identity(3, z, o));
    const Scalar at_ones = eval_scalar(c, {{0, o}, {1, o}});
    EXPECT_EQ(eval_matrix(c, pt), SquareMatrix<Scalar>::identity(3, z, o).scaled(at_ones));
  }
  const Circuit k("k", X2, p7, {Node::constant(5)}, 0);
  EXPECT_EQ(eval_matrix(k, MatrixPoint<Scalar>{}, 3, z, o), SquareMatrix<Scalar>::identity(3, z, o).scaled(Scalar(5, p7)));
}

TEST(EvalMatrix, DimensionMismatch) {
  const Scalar z(0, p7), o(1, p7);
  MatrixPoint<Scalar> pt;
  pt.emplace(0, SquareMatrix<Scalar>::identity(2, z, o));
  pt.emplace(1, SquareMatrix<Scalar>::identity(3, z, o));
  EXPECT_THROW(eval_matrix(commutator_sum(X2, p7, false), pt, 2, z, o), MismatchError);
}

TEST(Expand, Examples) {
  CircuitBuilder b("m", X2, p7);
  b.mul(b.input(0), b.input(1));
  EXPECT_EQ(expand(std::move(b).build(), 10, 10),
            NCPolynomial::variable(X2, p7, 0) * NCPolynomial::variable(X2, p7, 1));

  CircuitBuilder sq("sq", X2, p7);
  const NodeId s = sq.add(sq.input(0), sq.input(1));
  sq.mul(s, s);
  const NCPolynomial lin = NCPolynomial::variable(X2, p7, 0) + NCPolynomial::variable(X2, p7, 1);
  EXPECT_EQ(oracle::table_of(expand(std::move(sq).build(), 10, 10)), oracle::convolution(lin, lin));
}

TEST(Expand, BudgetsAreErrors) {
  CircuitBuilder b("deep", X2, p7);
  NodeId cur = b.input(0);
  for (int i = 0; i < 40; ++i) cur = b.mul(cur, cur);
  const Circuit deep = std::move(b).build();
  EXPECT_THROW(expand(deep, 1000, 1 << 20), BudgetExceeded);
  EXPECT_EQ(syntactic_degree(deep), std::size_t{1} << 40);

  CircuitBuilder w("wide", X2, p7);
  const NodeId s = w.add(w.input(0), w.input(1));
  NodeId acc = s;
  for (int i = 0; i < 6; ++i) acc = w.mul(acc, s);  // 2^7 terms
  EXPECT_THROW(expand(std::move(w).build(), 100, 100), BudgetExceeded);
}

TEST(SubstituteInputs, Examples) {
  const Alphabet y("Y", 2);
  CircuitBuilder b("xy", X2, p7);
  b.mul(b.input(0), b.input(1));
  const Circuit xy = std::move(b).build();
  const Circuit one("one", X2, p7, {Node::constant(1)}, 0);
  const Circuit x1("x1", X2, p7, {Node::input(1)}, 0);
  const Circuit x0("x0", X2, p7, {Node::input(0)}, 0);
  EXPECT_EQ(expand(substitute_inputs(xy, {{0, one}, {1, x1}}, X2), 8, 8), NCPolynomial::variable(X2, p7, 1));
  EXPECT_EQ(expand(substitute_inputs(xy, {{0, x0}, {1, x1}}, X2), 8, 8), expand(xy, 8, 8));
  EXPECT_THROW(substitute_inputs(xy, {{0, x0}}, X2), InvalidArgument);

  const Alphabet x8("X", 8);
  const Circuit x5("x5", x8, p7, {Node::input(5)}, 0);
  CircuitBuilder r("r", y, p7);
  r.mul(r.mul(r.input(1), r.input(0)), r.input(1));
  const Circuit sub = substitute_inputs(x5, {{5, std::move(r).build()}}, y);
  EXPECT_EQ(sub.alphabet(), y);
  EXPECT_EQ(expand(sub, 8, 8), NCPolynomial::monomial(Word(y, {1, 0, 1}), Scalar(1, p7)));
}

TEST(SizeReport, Examples) {
  CircuitBuilder b("m", X2, p7);
  b.mul(b.input(0), b.input(1));
  EXPECT_EQ(size_report(std::move(b).build()), (SizeReport{0, 1, 2, 0, 3}));
  EXPECT_EQ(size_report(Circuit("k", X2, p7, {Node::constant(3)}, 0)), (SizeReport{0, 0, 0, 1, 1}));

  const Alphabet x8("X", 8);
  const SizeReport enc = size_report(encode_circuit(Circuit("x5", x8, p7, {Node::input(5)}, 0), 2));
  EXPECT_EQ(enc.muls, 2u);
  EXPECT_EQ(enc.inputs, 3u);
  EXPECT_EQ(enc.adds, 0u);
}

TEST(FromPolynomial, RoundTripsThroughExpand) {
  std::mt19937_64 rng(11);
  const Alphabet a("X", 3);
  for (int i = 0; i < 50; ++i) {
    const NCPolynomial f = oracle::random_poly(a, p7, 4, 5, rng);
    EXPECT_EQ(expand(from_polynomial(f), 8, 64), f);
  }
}

TEST(Compact, DropsDeadNodesOnly) {
  const Circuit c("c", X2, p7, {Node::input(0), Node::input(1), Node::constant(3), Node::mul(0, 2)}, 3);
  const Circuit k = compact(c);
  EXPECT_EQ(k.size(), 3u);
  EXPECT_EQ(expand(k, 4, 4), expand(c, 4, 4));
  EXPECT_TRUE(validate(k).ok);
}

// Properties over random circuits.

TEST(CircuitProperty, EvalScalarMatchesExpansion) {
  std::mt19937_64 rng(21);
  const Modulus p;
  const Alphabet a("X", 3);
  std::uniform_int_distribution<u64> e(0, p.value() - 1);
  for (int i = 0; i < 100; ++i) {
    const Circuit c = random_small(rng, a, p);
    std::map<Var, Scalar> pt;
    for (Var v = 0; v < a.size; ++v) pt.emplace(v, Scalar(e(rng), p));
    EXPECT_EQ(eval_scalar(c, pt), evaluate(expand(c, 64, 1 << 12), pt));
  }
}

TEST(CircuitProperty, EvalMatrixMatchesWordByWordEvaluation) {
  std::mt19937_64 rng(22);
  const Modulus p;
  const Scalar z(0, p), o(1, p);
  std::uniform_int_distribution<u64> e(0, p.value() - 1);
  for (int i = 0; i < 100; ++i) {
    const Circuit c = random_small(rng, X2, p);
    MatrixPoint<Scalar> pt;
    for (Var v = 0; v < 2; ++v) {
      SquareMatrix<Scalar> m(2, z);
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t col = 0; col < 2; ++col) m(r, col) = Scalar(e(rng), p);
      }
      pt.emplace(v, m);
    }
    ASSERT_FALSE(pt.at(0) * pt.at(1) == pt.at(1) * pt.at(0));
    const NCPolynomial f = expand(c, 64, 1 << 12);
    SquareMatrix<Scalar> want(2, z);
    for (const auto& [w, cw] : f.terms()) {
      SquareMatrix<Scalar> t = SquareMatrix<Scalar>::identity(2, z, o);
      for (Var v : w) t = t * pt.at(v);
      want = want + t.scaled(Scalar(cw, p));
    }
    EXPECT_EQ(eval_matrix(c, pt), want);
  }
}

TEST(CircuitProperty, SubstituteCommutesWithExpand) {
  std::mt19937_64 rng(23);
  const Alphabet a("X", 3);
  const Alphabet y("Y", 2);
  for (int i = 0; i < 50; ++i) {
    const Circuit c = random_small(rng, a, p7, 3);
    std::map<Var, Circuit> sub;
    std::map<Var, NCPolynomial> psub;
    for (Var v = 0; v < a.size; ++v) {
      const Circuit s = random_circuit(RandomCircuitSpec{y, p7, 2, 6, 1, 0.2}, rng);
      sub.emplace(v, s);
      psub.emplace(v, expand(s, 16, 1 << 10));
    }
    EXPECT_EQ(expand(substitute_inputs(c, sub, y), 64, 1 << 14), substitute(expand(c, 64, 1 << 12), psub, y));
  }
}

TEST(CircuitProperty, RandomCircuitsAreValidAndWithinDegree) {
  std::mt19937_64 rng(24);
  const Alphabet a("X", 8);
  for (int i = 0; i < 200; ++i) {
    const Circuit c = random_circuit(RandomCircuitSpec{a, p7, 4, 20, 5, 0.1}, rng);
    EXPECT_TRUE(validate(c).ok);
    EXPECT_LE(c.size(), 20u);
    EXPECT_LE(syntactic_degree(c), 4u);
    EXPECT_LE(expand(c, 4, 1 << 12).degree(), 4u);
  }
}

}  // namespace
}  // namespace nclift
