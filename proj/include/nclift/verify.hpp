#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "nclift/circuit.hpp"

namespace nclift {

struct EquivVerdict {
  enum class Mode { kBrute, kRandom };
  enum class Result { kEqual, kDistinct, kInconclusiveBudget };

  Mode mode = Mode::kBrute;
  Result result = Result::kEqual;
  std::optional<Word> word_witness;                 // brute: first differing word (length-lex)
  std::optional<MatrixPoint<Scalar>> point_witness;  // random: separating matrix tuple
  std::string detail;

  bool equal() const { return result == Result::kEqual; }
  bool distinct() const { return result == Result::kDistinct; }

  std::string summary() const {
    switch (result) {
      case Result::kEqual:
        return mode == Mode::kBrute ? "equal" : "equal (probabilistic)";
      case Result::kDistinct:
        return "distinct" + (detail.empty() ? std::string() : " " + detail);
      case Result::kInconclusiveBudget:
        return "inconclusive-budget" + (detail.empty() ? std::string() : " " + detail);
    }
    return "?";
  }
};

namespace detail {

inline void require_comparable(const Circuit& a, const Circuit& b) {
  require_same(a.alphabet(), b.alphabet());
  if (!(a.modulus() == b.modulus())) throw MismatchError("circuit moduli differ");
}

}  // namespace detail

/// First word, in length-lex order, whose coefficients in f and g differ.
inline std::optional<Letters> first_difference(const NCPolynomial& f, const NCPolynomial& g) {
  auto a = f.terms().begin();
  auto b = g.terms().begin();
  const LengthLexLess less;
  while (a != f.terms().end() || b != g.terms().end()) {
    if (b == g.terms().end() || (a != f.terms().end() && less(a->first, b->first))) return a->first;
    if (a == f.terms().end() || less(b->first, a->first)) return b->first;
    if (a->second != b->second) return a->first;
    ++a;
    ++b;
  }
  return std::nullopt;
}

/// Expands both circuits and compares canonical forms.
inline EquivVerdict circuit_equiv_brute(const Circuit& c1, const Circuit& c2, std::size_t max_degree,
                                        std::size_t max_terms) {
  detail::require_comparable(c1, c2);
  EquivVerdict v;
  v.mode = EquivVerdict::Mode::kBrute;
  try {
    const NCPolynomial f = expand(c1, max_degree, max_terms);
    const NCPolynomial g = expand(c2, max_degree, max_terms);
    if (auto w = first_difference(f, g)) {
      v.result = EquivVerdict::Result::kDistinct;
      v.word_witness = Word(c1.alphabet(), *w);
      v.detail = "witness " + v.word_witness->to_string() + " coefficients " +
                 std::to_string(f.coeff(*w).value()) + " vs " + std::to_string(g.coeff(*w).value());
    }
  } catch (const BudgetExceeded& e) {
    v.result = EquivVerdict::Result::kInconclusiveBudget;
    v.detail = e.what();
  }
  return v;
}

/// Smallest matrix dimension used for identity testing at this degree.
inline std::size_t identity_test_dimension(std::size_t degree) { return degree / 2 + 1; }

/// Randomized identity test: evaluates both circuits on `trials` independent
/// uniformly random dim x dim matrix tuples over Z_p. Equal verdicts are
/// probabilistic; distinct verdicts carry the separating point.
inline EquivVerdict circuit_equiv_random(const Circuit& c1, const Circuit& c2, std::size_t trials, std::size_t dim,
                                         u64 seed) {
  detail::require_comparable(c1, c2);
  const std::size_t degree = std::max(syntactic_degree(c1), syntactic_degree(c2));
  if (dim < identity_test_dimension(degree)) {
    throw InvalidArgument("dimension " + std::to_string(dim) + " below floor(deg/2)+1 = " +
                          std::to_string(identity_test_dimension(degree)));
  }
  std::set<Var> vars = used_variables(c1);
  for (Var v : used_variables(c2)) vars.insert(v);
  const Modulus p = c1.modulus();
  const Scalar zero(0, p), one(1, p);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> entry(0, p.value() - 1);
  EquivVerdict v;
  v.mode = EquivVerdict::Mode::kRandom;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    MatrixPoint<Scalar> point;
    for (Var x : vars) {
      SquareMatrix<Scalar> m(dim, zero);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = Scalar(entry(rng), p);
      }
      point.emplace(x, std::move(m));
    }
    if (!(eval_matrix(c1, point, dim, zero, one) == eval_matrix(c2, point, dim, zero, one))) {
      v.result = EquivVerdict::Result::kDistinct;
      v.point_witness = std::move(point);
      v.detail = "at trial " + std::to_string(trial);
      return v;
    }
  }
  return v;
}

}  // namespace nclift
