#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nclift/errors.hpp"
#include "nclift/matrix.hpp"
#include "nclift/polynomial.hpp"

namespace nclift {

using StateId = std::size_t;

/// Transition weight: a scalar c, or a term c * x_i over the automaton's X alphabet.
struct Weight {
  enum class Kind : std::uint8_t { kScalar, kTerm };

  Kind kind = Kind::kScalar;
  u64 coeff = 0;
  Var var = 0;

  static Weight scalar(u64 c) { return {Kind::kScalar, c, 0}; }
  static Weight term(u64 c, Var x) { return {Kind::kTerm, c, x}; }

  bool is_zero() const { return coeff == 0; }
  friend bool operator==(const Weight&, const Weight&) = default;
};

struct Transition {
  StateId from = 0;
  Var letter = 0;
  StateId to = 0;
  Weight weight;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Finite automaton over the letter alphabet Y whose transitions carry weights
/// in F<X> of degree at most one. The coefficient of a Y-word w is the (s, t)
/// entry of the product of the per-letter transition matrices along w.
class WeightedAutomaton {
 public:
  WeightedAutomaton() = default;
  WeightedAutomaton(Alphabet letters, std::size_t states, StateId start, StateId accept, Alphabet xvars, Modulus p,
                    std::vector<Transition> transitions)
      : letters_(std::move(letters)),
        states_(states),
        start_(start),
        accept_(accept),
        xvars_(std::move(xvars)),
        p_(p),
        transitions_(std::move(transitions)) {
    if (states_ == 0) throw InvalidArgument("automaton needs at least one state");
    if (start_ >= states_ || accept_ >= states_) throw InvalidArgument("start/accept state out of range");
    std::vector<std::tuple<StateId, Var, StateId>> keys;
    keys.reserve(transitions_.size());
    for (auto& t : transitions_) {
      if (t.from >= states_ || t.to >= states_) {
        throw InvalidArgument("transition state out of range: " + std::to_string(t.from) + " -> " +
                              std::to_string(t.to));
      }
      if (!letters_.contains(t.letter)) throw InvalidArgument("transition letter y" + std::to_string(t.letter) + " out of range");
      if (t.weight.kind == Weight::Kind::kTerm && !xvars_.contains(t.weight.var)) {
        throw InvalidArgument("weight variable x" + std::to_string(t.weight.var) + " out of range");
      }
      if (t.weight.coeff >= p_.value()) throw InvalidArgument("weight coefficient not reduced modulo p");
      keys.emplace_back(t.from, t.letter, t.to);
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
      throw InvalidArgument("parallel transitions on the same (from, letter, to) triple");
    }
    by_letter_.assign(letters_.size, {});
    for (std::size_t i = 0; i < transitions_.size(); ++i) by_letter_[transitions_[i].letter].push_back(i);
  }

  const Alphabet& letters() const { return letters_; }
  const Alphabet& xvars() const { return xvars_; }
  Modulus modulus() const { return p_; }
  std::size_t states() const { return states_; }
  StateId start() const { return start_; }
  StateId accept() const { return accept_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  /// Indices into transitions() of the transitions reading `letter`.
  const std::vector<std::size_t>& on_letter(Var letter) const { return by_letter_.at(letter); }

  /// Appends the (target, weight) pairs of the transitions leaving `from` on `letter`.
  void out(StateId from, Var letter, std::vector<std::pair<StateId, Weight>>& into) const {
    for (std::size_t idx : on_letter(letter)) {
      const Transition& t = transitions_[idx];
      if (t.from == from) into.emplace_back(t.to, t.weight);
    }
  }

  NCPolynomial weight_polynomial(const Weight& w) const {
    NCPolynomial f(xvars_, p_);
    f.add_term(w.kind == Weight::Kind::kTerm ? Letters{w.var} : Letters{}, Scalar(w.coeff, p_));
    return f;
  }

  friend bool operator==(const WeightedAutomaton& a, const WeightedAutomaton& b) {
    return a.letters_ == b.letters_ && a.states_ == b.states_ && a.start_ == b.start_ && a.accept_ == b.accept_ &&
           a.xvars_ == b.xvars_ && a.p_ == b.p_ && a.transitions_ == b.transitions_;
  }

 private:
  Alphabet letters_;
  std::size_t states_ = 0;
  StateId start_ = 0;
  StateId accept_ = 0;
  Alphabet xvars_;
  Modulus p_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> by_letter_;
};

using TransitionMatrices = std::vector<SquareMatrix<NCPolynomial>>;

/// M_y[i][j] = weight of (i, y, j), zero if absent.
inline TransitionMatrices transition_matrices(const WeightedAutomaton& a) {
  const NCPolynomial zero(a.xvars(), a.modulus());
  TransitionMatrices ms(a.letters().size, SquareMatrix<NCPolynomial>(a.states(), zero));
  for (const auto& t : a.transitions()) ms[t.letter](t.from, t.to) = a.weight_polynomial(t.weight);
  return ms;
}

/// Coefficient r_w = M_w[s][t] of the series at the Y-word w, computed as the
/// row vector e_s pushed through the transition matrices letter by letter.
inline NCPolynomial coeff_of_word(const WeightedAutomaton& a, const Letters& w) {
  const NCPolynomial zero(a.xvars(), a.modulus());
  std::vector<NCPolynomial> row(a.states(), zero);
  row[a.start()] = NCPolynomial::one(a.xvars(), a.modulus());
  for (Var y : w) {
    if (!a.letters().contains(y)) throw InvalidArgument("letter y" + std::to_string(y) + " out of range");
    std::vector<NCPolynomial> next(a.states(), zero);
    for (std::size_t idx : a.on_letter(y)) {
      const Transition& t = a.transitions()[idx];
      if (row[t.from].is_zero() || t.weight.is_zero()) continue;
      next[t.to] += row[t.from] * a.weight_polynomial(t.weight);
    }
    row = std::move(next);
  }
  return row[a.accept()];
}

inline NCPolynomial coeff_of_word(const WeightedAutomaton& a, const Word& w) {
  if (w.alphabet().size != a.letters().size) throw MismatchError("word alphabet does not match automaton letters");
  return coeff_of_word(a, w.letters());
}

/// How the 1-to-3 decoder maps (first letter i, last letter j, middle letter k)
/// to an X index. Only kExact is correct; kSwappedMiddle (m^2 i + m j + k)
/// exists so the acceptance suite can show it detects the error.
enum class DecoderIndexing { kExact, kSwappedMiddle };

/// sigma(i, j, k) = m^2 i + m k + j.
inline u64 decoder_sigma(u64 m, u64 i, u64 j, u64 k, DecoderIndexing indexing = DecoderIndexing::kExact) {
  return indexing == DecoderIndexing::kExact ? m * m * i + m * k + j : m * m * i + m * j + k;
}

namespace detail {

inline u64 checked_mul(u64 a, u64 b, const char* what) {
  u128 r = static_cast<u128>(a) * b;
  if (r > std::numeric_limits<u64>::max()) throw BudgetExceeded(std::string(what) + ": 64-bit overflow");
  return static_cast<u64>(r);
}

inline u64 checked_pow(u64 base, u64 e, const char* what) {
  u64 r = 1;
  for (u64 i = 0; i < e; ++i) r = checked_mul(r, base, what);
  return r;
}

}  // namespace detail

/// Decoder for the 1-to-3 encoder over |Y| = m, |X| = m^3. The final state is
/// merged into the start state, so q = 2m + 1:
///   state 0        s (start and accept)
///   state 1 + j    (0, j): first letter was y_j
///   state 1 + m + j (2, j): last letter will be y_j
inline WeightedAutomaton build_decoder(u64 m, Modulus p = Modulus(), DecoderIndexing indexing = DecoderIndexing::kExact) {
  if (m < 1) throw InvalidArgument("decoder needs m >= 1");
  const u64 n = detail::checked_pow(m, 3, "decoder");
  std::vector<Transition> ts;
  ts.reserve(n + 2 * m);
  for (u64 j = 0; j < m; ++j) ts.push_back({0, j, 1 + j, Weight::scalar(1)});
  for (u64 i = 0; i < m; ++i) {
    for (u64 j = 0; j < m; ++j) {
      for (u64 k = 0; k < m; ++k) {
        ts.push_back({1 + i, k, 1 + m + j, Weight::term(1, decoder_sigma(m, i, j, k, indexing))});
      }
    }
  }
  for (u64 j = 0; j < m; ++j) ts.push_back({1 + m + j, j, 0, Weight::scalar(1)});
  return WeightedAutomaton(Alphabet("Y", m), 2 * m + 1, 0, 0, Alphabet("X", n), p, std::move(ts));
}

/// The same decoder with transitions computed on request instead of stored,
/// for m too large to list m^3 middle transitions. Provides the out() query of
/// WeightedAutomaton; only hadamard_circuit_on_demand consumes it.
class ImplicitDecoder {
 public:
  explicit ImplicitDecoder(u64 m, Modulus p = Modulus(), DecoderIndexing indexing = DecoderIndexing::kExact)
      : m_(m), p_(p), indexing_(indexing) {
    if (m < 1) throw InvalidArgument("decoder needs m >= 1");
    if (m > (std::numeric_limits<std::uint32_t>::max() - 1) / 2) throw BudgetExceeded("decoder state count overflows");
    letters_ = Alphabet("Y", m);
    xvars_ = Alphabet("X", detail::checked_pow(m, 3, "decoder"));
  }

  const Alphabet& letters() const { return letters_; }
  const Alphabet& xvars() const { return xvars_; }
  Modulus modulus() const { return p_; }
  std::size_t states() const { return 2 * m_ + 1; }
  StateId start() const { return 0; }
  StateId accept() const { return 0; }

  void out(StateId from, Var letter, std::vector<std::pair<StateId, Weight>>& into) const {
    if (letter >= m_ || from >= states()) return;
    if (from == 0) {
      into.emplace_back(1 + letter, Weight::scalar(1));
    } else if (from <= m_) {
      const u64 i = from - 1;
      for (u64 j = 0; j < m_; ++j) into.emplace_back(1 + m_ + j, Weight::term(1, decoder_sigma(m_, i, j, letter, indexing_)));
    } else if (from - 1 - m_ == letter) {
      into.emplace_back(0, Weight::scalar(1));
    }
  }

 private:
  u64 m_;
  Modulus p_;
  DecoderIndexing indexing_;
  Alphabet letters_;
  Alphabet xvars_;
};

/// State bookkeeping of the one-shot decoder for the d-fold code (code length
/// 3^d over |Y| = n). The four layers of the construction are the start state,
/// the n^L full-prefix states, the n^L full-suffix states and the final state
/// (merged into start). Reading the prefix and suffix one letter at a time
/// adds trie states for the shorter partial prefixes and suffixes.
struct OneShotLayout {
  u64 n = 0;
  u64 d = 0;
  u64 code_length = 0;      // 3^d
  u64 half_length = 0;      // L = (3^d - 1) / 2
  u64 layer_width = 0;      // n^L
  u64 layered_states = 0;   // 2 n^L + 2, before merging the final state
  u64 merged_layered = 0;   // 2 n^L + 1
  u64 total_states = 0;     // 1 + 2 (n + n^2 + ... + n^L)
  u64 transitions = 0;
  u64 xvars = 0;            // n^(3^d)

  static OneShotLayout make(u64 n, u64 d) {
    if (n < 1 || d < 1) throw InvalidArgument("one-shot decoder needs n >= 1 and d >= 1");
    OneShotLayout l;
    l.n = n;
    l.d = d;
    l.code_length = detail::checked_pow(3, d, "one-shot decoder");
    l.half_length = (l.code_length - 1) / 2;
    l.layer_width = detail::checked_pow(n, l.half_length, "one-shot decoder");
    l.layered_states = 2 * l.layer_width + 2;
    l.merged_layered = 2 * l.layer_width + 1;
    u64 trie = 0;
    for (u64 len = 1; len <= l.half_length; ++len) trie += detail::checked_pow(n, len, "one-shot decoder");
    l.total_states = 1 + 2 * trie;
    l.xvars = detail::checked_pow(n, l.code_length, "one-shot decoder");
    // s -> prefix trie -> middle -> suffix trie -> s
    l.transitions = trie + l.xvars + trie;
    return l;
  }

  /// State id of the prefix-trie node for the prefix u of length len (value = base-n value of u).
  StateId prefix_state(u64 len, u64 value) const {
    u64 off = 1;
    for (u64 i = 1; i < len; ++i) off += detail::checked_pow(n, i, "layout");
    return off + value;
  }

  /// State id of the suffix-trie node that still has to read v (|v| = len).
  StateId suffix_state(u64 len, u64 value) const {
    u64 off = 1;
    for (u64 i = 1; i <= half_length; ++i) off += detail::checked_pow(n, i, "layout");
    for (u64 i = half_length; i > len; --i) off += detail::checked_pow(n, i, "layout");
    return off + value;
  }
};

struct AutomatonBudget {
  u64 max_states = 1 << 16;
  u64 max_transitions = 1 << 22;
};

/// Decoder for E^d directly: reads a length-L prefix into a trie, one middle
/// letter whose weight is x_(index of the whole 3^d-letter word in base n),
/// then a length-L suffix back to the start. d = 1 reproduces build_decoder(n).
inline WeightedAutomaton build_one_shot_decoder(u64 n, u64 d, Modulus p = Modulus(), AutomatonBudget budget = {}) {
  const OneShotLayout l = OneShotLayout::make(n, d);
  if (l.layered_states > budget.max_states || l.total_states > budget.max_states) {
    throw BudgetExceeded("one-shot decoder needs " + std::to_string(l.total_states) + " states (" +
                         std::to_string(l.layered_states) + " layered), cap " + std::to_string(budget.max_states));
  }
  if (l.transitions > budget.max_transitions) {
    throw BudgetExceeded("one-shot decoder needs " + std::to_string(l.transitions) + " transitions, cap " +
                         std::to_string(budget.max_transitions));
  }
  const u64 L = l.half_length;
  const u64 width = l.layer_width;
  std::vector<Transition> ts;
  ts.reserve(l.transitions);
  // Prefix trie: s reads the first letter, each node of length len < L extends by one.
  for (u64 y = 0; y < n; ++y) ts.push_back({0, y, l.prefix_state(1, y), Weight::scalar(1)});
  for (u64 len = 1, count = n; len < L; ++len, count *= n) {
    for (u64 u = 0; u < count; ++u) {
      for (u64 y = 0; y < n; ++y) ts.push_back({l.prefix_state(len, u), y, l.prefix_state(len + 1, u * n + y), Weight::scalar(1)});
    }
  }
  // Middle letter: full prefix u, letter y_k, full suffix v -> x_(u k v).
  for (u64 u = 0; u < width; ++u) {
    for (u64 v = 0; v < width; ++v) {
      for (u64 k = 0; k < n; ++k) {
        const u64 index = (u * n + k) * width + v;
        ts.push_back({l.prefix_state(L, u), k, l.suffix_state(L, v), Weight::term(1, index)});
      }
    }
  }
  // Suffix trie: the node for v reads its first letter and moves to the rest.
  for (u64 len = L, count = width; len >= 1; --len, count /= n) {
    const u64 rest = count / n;
    for (u64 v = 0; v < count; ++v) {
      const u64 first = v / rest;
      const StateId to = len == 1 ? 0 : l.suffix_state(len - 1, v % rest);
      ts.push_back({l.suffix_state(len, v), first, to, Weight::scalar(1)});
    }
  }
  return WeightedAutomaton(Alphabet("Y", n), l.total_states, 0, 0, Alphabet("X", l.xvars), p, std::move(ts));
}

using SeriesView = std::map<Letters, NCPolynomial, LengthLexLess>;

/// All nonzero coefficients r_w with |w| <= max_length, as Y-word -> X-polynomial.
inline SeriesView series_truncate(const WeightedAutomaton& a, std::size_t max_length, u64 max_words = 1 << 20) {
  SeriesView out;
  const NCPolynomial zero(a.xvars(), a.modulus());
  std::vector<std::pair<Letters, std::vector<NCPolynomial>>> frontier;
  std::vector<NCPolynomial> init(a.states(), zero);
  init[a.start()] = NCPolynomial::one(a.xvars(), a.modulus());
  frontier.emplace_back(Letters{}, std::move(init));
  u64 visited = 1;
  for (std::size_t len = 0;; ++len) {
    for (const auto& [w, row] : frontier) {
      if (!row[a.accept()].is_zero()) out.emplace(w, row[a.accept()]);
    }
    if (len == max_length) break;
    std::vector<std::pair<Letters, std::vector<NCPolynomial>>> next;
    for (const auto& [w, row] : frontier) {
      for (Var y = 0; y < a.letters().size; ++y) {
        if (++visited > max_words) {
          throw BudgetExceeded("series_truncate: more than " + std::to_string(max_words) + " words");
        }
        std::vector<NCPolynomial> r(a.states(), zero);
        bool any = false;
        for (std::size_t idx : a.on_letter(y)) {
          const Transition& t = a.transitions()[idx];
          if (row[t.from].is_zero() || t.weight.is_zero()) continue;
          r[t.to] += row[t.from] * a.weight_polynomial(t.weight);
          any = true;
        }
        if (!any) continue;  // dead prefix: every extension is zero
        Letters wy = w;
        wy.push_back(y);
        next.emplace_back(std::move(wy), std::move(r));
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return out;
}

}  // namespace nclift
