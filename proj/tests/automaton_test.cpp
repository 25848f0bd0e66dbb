#include <gtest/gtest.h>

#include <random>

#include "nclift/nclift.hpp"
#include "oracles.hpp"

namespace nclift {
namespace {

const Modulus P;

NCPolynomial xmono(const Alphabet& x, const Letters& w) { return NCPolynomial::monomial(Word(x, w), Scalar(1, P)); }

WeightedAutomaton random_automaton(std::mt19937_64& rng, std::size_t states, u64 letters, u64 xvars) {
  std::uniform_int_distribution<u64> coeff(0, P.value() - 1);
  std::uniform_int_distribution<u64> var(0, xvars - 1);
  std::bernoulli_distribution present(0.4), term(0.5);
  std::vector<Transition> ts;
  for (StateId f = 0; f < states; ++f) {
    for (Var y = 0; y < letters; ++y) {
      for (StateId t = 0; t < states; ++t) {
        if (!present(rng)) continue;
        ts.push_back({f, y, t, term(rng) ? Weight::term(coeff(rng), var(rng)) : Weight::scalar(coeff(rng))});
      }
    }
  }
  return WeightedAutomaton(Alphabet("Y", letters), states, 0, states - 1, Alphabet("X", xvars), P, std::move(ts));
}

TEST(Automaton, ConstructorRejectsMalformed) {
  const Alphabet y("Y", 2), x("X", 3);
  auto make = [&](std::vector<Transition> ts, std::size_t q = 2) {
    return WeightedAutomaton(y, q, 0, 1, x, P, std::move(ts));
  };
  EXPECT_NO_THROW(make({{0, 1, 1, Weight::term(2, 2)}}));
  EXPECT_THROW(make({{0, 2, 1, Weight::scalar(1)}}), InvalidArgument);
  EXPECT_THROW(make({{0, 0, 2, Weight::scalar(1)}}), InvalidArgument);
  EXPECT_THROW(make({{0, 0, 1, Weight::term(1, 3)}}), InvalidArgument);
  EXPECT_THROW(make({{0, 0, 1, Weight::scalar(P.value())}}), InvalidArgument);
  EXPECT_THROW(make({{0, 0, 1, Weight::scalar(1)}, {0, 0, 1, Weight::scalar(2)}}), InvalidArgument);
  EXPECT_THROW(make({}, 0), InvalidArgument);
  EXPECT_THROW(WeightedAutomaton(y, 2, 0, 2, x, P, {}), InvalidArgument);
}

TEST(TransitionMatrices, Examples) {
  const Alphabet y("Y", 2), x("X", 1);
  const WeightedAutomaton loop(y, 1, 0, 0, x, P, {{0, 0, 0, Weight::scalar(1)}});
  const auto ms = transition_matrices(loop);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0](0, 0), NCPolynomial::one(x, P));
  EXPECT_TRUE(ms[1](0, 0).is_zero());

  const auto dec = transition_matrices(build_decoder(2));
  // s = 0, (0,j) = 1 + j, (2,j) = 3 + j
  EXPECT_EQ(dec[1](0, 2), NCPolynomial::one(Alphabet("X", 8), P));
  EXPECT_EQ(dec[0](2, 4), xmono(Alphabet("X", 8), {decoder_sigma(2, 1, 1, 0)}));
}

TEST(CoeffOfWord, DecoderExamples) {
  const auto d = build_decoder(2);
  const Alphabet x8("X", 8);
  EXPECT_EQ(coeff_of_word(d, Letters{1, 0, 1}), xmono(x8, {5}));
  EXPECT_TRUE(coeff_of_word(d, Letters{1, 0}).is_zero());
  EXPECT_EQ(coeff_of_word(d, Letters{}), NCPolynomial::one(x8, P));
  EXPECT_THROW(coeff_of_word(d, Word(Alphabet("Y", 3), {0})), MismatchError);
}

TEST(BuildDecoder, CountsAndErrors) {
  EXPECT_THROW(build_decoder(0), InvalidArgument);
  for (u64 m = 1; m <= 5; ++m) {
    const auto d = build_decoder(m);
    EXPECT_EQ(d.states(), 2 * m + 1);
    EXPECT_EQ(d.transitions().size(), m * m * m + 2 * m);
    EXPECT_EQ(d.xvars().size, m * m * m);
    EXPECT_EQ(d.start(), d.accept());
    std::size_t middle = 0;
    for (const auto& t : d.transitions()) middle += t.weight.kind == Weight::Kind::kTerm;
    EXPECT_GE(middle, m * m);
    EXPECT_EQ(middle, m * m * m);
  }
}

TEST(BuildDecoder, SigmaOnAllEightCodes) {
  const auto d = build_decoder(2);
  const Alphabet x8("X", 8);
  for (u64 a = 0; a < 2; ++a) {
    for (u64 b = 0; b < 2; ++b) {
      for (u64 c = 0; c < 2; ++c) EXPECT_EQ(coeff_of_word(d, Letters{a, b, c}), xmono(x8, {4 * a + 2 * b + c}));
    }
  }
  EXPECT_EQ(decoder_sigma(2, 1, 1, 0), 5u);
  EXPECT_EQ(decoder_sigma(3, 0, 2, 1), 5u);  // m^2 i + m k + j
  EXPECT_EQ(decoder_sigma(3, 0, 2, 1, DecoderIndexing::kSwappedMiddle), 7u);
}

class DecoderCorrectness : public ::testing::TestWithParam<u64> {};

TEST_P(DecoderCorrectness, ExhaustiveUpToThreeLetters) {
  const u64 m = GetParam();
  const u64 n = m * m * m;
  const auto d = build_decoder(m);
  const Alphabet x("X", n);
  for (std::size_t len = 0; len <= 3; ++len) {
    for (const Letters& u : oracle::all_words(n, len)) {
      ASSERT_EQ(coeff_of_word(d, oracle::encode(u, m)), xmono(x, u));
    }
  }
  // lengths that are not multiples of 3 carry no code word
  for (std::size_t len = 1; len <= (m == 3 ? 8u : 10u); ++len) {
    if (len % 3 == 0) continue;
    for (const Letters& w : oracle::all_words(m, len)) ASSERT_TRUE(coeff_of_word(d, w).is_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(M, DecoderCorrectness, ::testing::Values(1ULL, 2ULL, 3ULL));

TEST(PathSum, MatchesMatrixProductOnRandomAutomata) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_automaton(rng, 4, 2, 3);
    const auto ms = transition_matrices(a);
    const NCPolynomial zero(a.xvars(), P), one = NCPolynomial::one(a.xvars(), P);
    for (std::size_t len = 0; len <= 4; ++len) {
      for (const Letters& w : oracle::all_words(2, len)) {
        auto m = SquareMatrix<NCPolynomial>::identity(4, zero, one);
        for (Var y : w) m = m * ms[y];
        const NCPolynomial want = oracle::path_sum(a, w);
        ASSERT_EQ(m(a.start(), a.accept()), want);
        ASSERT_EQ(coeff_of_word(a, w), want);
      }
    }
  }
}

TEST(SeriesTruncate, DecoderExamples) {
  const auto d = build_decoder(2);
  const Alphabet x8("X", 8);
  const auto s2 = series_truncate(d, 2);
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2.at(Letters{}), NCPolynomial::one(x8, P));

  const auto s3 = series_truncate(d, 3);
  ASSERT_EQ(s3.size(), 9u);
  for (u64 i = 0; i < 8; ++i) EXPECT_EQ(s3.at(oracle::digits(i, 2, 3)), xmono(x8, {i}));
}

TEST(SeriesTruncate, DecoderIsTheStarOfTheEncoder) {
  const auto d = build_decoder(2);
  const Alphabet x8("X", 8);
  std::map<Letters, NCPolynomial, LengthLexLess> want;
  for (std::size_t len = 0; len <= 2; ++len) {
    for (const Letters& u : oracle::all_words(8, len)) want.emplace(oracle::encode(u, 2), xmono(x8, u));
  }
  const auto got = series_truncate(d, 6);
  EXPECT_EQ(got.size(), 1u + 8u + 64u);
  EXPECT_TRUE(got == want);
}

TEST(SeriesTruncate, EmptyLengthAndBudget) {
  std::mt19937_64 rng(42);
  const auto a = random_automaton(rng, 3, 2, 2);
  EXPECT_TRUE(series_truncate(a, 0).empty());  // start != accept
  const auto loop = WeightedAutomaton(Alphabet("Y", 1), 1, 0, 0, Alphabet("X", 1), P, {});
  EXPECT_EQ(series_truncate(loop, 0).size(), 1u);
  EXPECT_THROW(series_truncate(build_decoder(3), 12, 1000), BudgetExceeded);
}

TEST(OneShot, LayoutCounts) {
  const auto l = OneShotLayout::make(2, 2);
  EXPECT_EQ(l.code_length, 9u);
  EXPECT_EQ(l.half_length, 4u);
  EXPECT_EQ(l.layered_states, 34u);
  EXPECT_EQ(l.merged_layered, 33u);
  EXPECT_EQ(l.total_states, 61u);
  EXPECT_EQ(l.xvars, 512u);
  const auto a = build_one_shot_decoder(2, 2);
  EXPECT_EQ(a.states(), l.total_states);
  EXPECT_EQ(a.transitions().size(), l.transitions);
  EXPECT_THROW(OneShotLayout::make(2, 0), InvalidArgument);
  EXPECT_THROW(build_one_shot_decoder(2, 3, P, AutomatonBudget{1000, 1 << 22}), BudgetExceeded);
  EXPECT_THROW(build_one_shot_decoder(2, 2, P, AutomatonBudget{1 << 16, 100}), BudgetExceeded);
}

TEST(OneShot, DepthOneMatchesOneToThreeDecoder) {
  for (u64 n = 1; n <= 3; ++n) {
    const auto one = build_one_shot_decoder(n, 1);
    const auto dec = build_decoder(n);
    EXPECT_EQ(one.states(), dec.states());
    EXPECT_TRUE(series_truncate(one, 6) == series_truncate(dec, 6));
  }
}

TEST(OneShot, DecodesTheDoubleCodeOfX5) {
  const auto a = build_one_shot_decoder(2, 2);
  EXPECT_EQ(coeff_of_word(a, oracle::digits(5, 2, 9)), xmono(Alphabet("X", 512), {5}));
}

TEST(OneShot, AgreesWithThreeOneToThreeDecodesOnAll512Codes) {
  const auto one_shot = build_one_shot_decoder(2, 2);
  const auto inner = build_decoder(2);
  const auto outer = build_decoder(8);
  for (u64 i = 0; i < 512; ++i) {
    const Letters code = oracle::digits(i, 2, 9);
    // inner decoder turns the 9 Y-letters into three letters over 8 variables
    const NCPolynomial mid = coeff_of_word(inner, code);
    ASSERT_EQ(mid.size(), 1u);
    const Letters middle_word = mid.terms().begin()->first;
    const NCPolynomial iterated = coeff_of_word(outer, middle_word);
    ASSERT_EQ(coeff_of_word(one_shot, code), iterated) << i;
    ASSERT_EQ(iterated, xmono(Alphabet("X", 512), {i}));
  }
  for (const Letters& w : oracle::all_words(2, 8)) ASSERT_TRUE(coeff_of_word(one_shot, w).is_zero());
}

}  // namespace
}  // namespace nclift
