#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nclift/automaton.hpp"
#include "nclift/circuit.hpp"
#include "nclift/hadamard.hpp"

namespace nclift {

/// Largest r with r^3 <= n.
inline u64 integer_cube_root(u64 n) {
  u64 r = static_cast<u64>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline void require_cube(u64 vars, u64 m) {
  if (m < 1 || static_cast<u128>(m) * m * m != vars) {
    throw InvalidArgument("encoder needs |X| = m^3, got |X| = " + std::to_string(vars) + ", m = " + std::to_string(m));
  }
}

/// Parameters of the d-fold lifting chain N_0 = n^(3^d) -> N_1 -> ... -> N_d = n.
struct LiftParams {
  u64 n = 0;
  u64 d = 0;
  u64 t = 0;
  std::vector<u64> N;    // N[k] = n^(3^(d-k))
  std::vector<u64> deg;  // deg[k] = t * 3^k

  static LiftParams make(u64 n, u64 d, u64 t) {
    if (n < 1) throw InvalidArgument("lift needs n >= 1");
    LiftParams p{n, d, t, std::vector<u64>(d + 1), std::vector<u64>(d + 1)};
    for (u64 k = 0; k <= d; ++k) {
      p.N[k] = detail::checked_pow(n, detail::checked_pow(3, d - k, "lift params"), "lift params");
      p.deg[k] = detail::checked_mul(t, detail::checked_pow(3, k, "lift params"), "lift params");
    }
    return p;
  }

  /// First violated chain invariant, if any.
  std::optional<std::string> inconsistency() const {
    if (N.size() != d + 1 || deg.size() != d + 1) return "chain length is not d + 1";
    for (u64 k = 0; k < d; ++k) {
      if (static_cast<u128>(N[k + 1]) * N[k + 1] * N[k + 1] != N[k]) {
        return "N_" + std::to_string(k + 1) + "^3 != N_" + std::to_string(k);
      }
      if (deg[k + 1] != 3 * deg[k]) return "deg_" + std::to_string(k + 1) + " != 3 deg_" + std::to_string(k);
    }
    if (N[d] != n) return "N_d != n";
    if (deg[0] != t) return "deg_0 != t";
    return std::nullopt;
  }
};

/// E(x_i) = y_j y_k y_l where j k l are the base-m digits of i, most significant first.
inline Letters encode_letters(const Letters& u, u64 m) {
  Letters out;
  out.reserve(3 * u.size());
  const u64 m2 = m * m;
  for (Var x : u) {
    out.push_back(x / m2);
    out.push_back((x / m) % m);
    out.push_back(x % m);
  }
  return out;
}

inline Word encode_word(const Word& u, u64 m) {
  require_cube(u.alphabet().size, m);
  return Word(Alphabet("Y", m), encode_letters(u.letters(), m));
}

inline NCPolynomial encode_poly(const NCPolynomial& f, u64 m) {
  require_cube(f.alphabet().size, m);
  NCPolynomial out(Alphabet("Y", m), f.modulus());
  for (const auto& [w, c] : f.terms()) out.add_term(encode_letters(w, m), Scalar(c, f.modulus()));
  return out;
}

/// Replaces each Input(x_i) by the two-gate chain (y_j * y_k) * y_l.
inline Circuit encode_circuit(const Circuit& c, u64 m) {
  require_cube(c.alphabet().size, m);
  const Alphabet y("Y", m);
  std::map<Var, Circuit> sub;
  for (const Node& n : c.nodes()) {
    if (n.gate != Gate::kInput || sub.count(n.var()) != 0) continue;
    const Letters code = encode_letters({n.var()}, m);
    CircuitBuilder b("code", y, c.modulus());
    const NodeId first = b.input(code[0]);
    const NodeId second = b.input(code[1]);
    const NodeId pair = b.mul(first, second);
    const NodeId third = b.input(code[2]);
    b.mul(pair, third);
    sub.emplace(n.var(), std::move(b).build());
  }
  return substitute_inputs(c, sub, y, c.name() + "_e");
}

inline NCPolynomial iterate_encoder(const NCPolynomial& f, u64 n, u64 d) {
  const LiftParams params = LiftParams::make(n, d, 0);
  if (f.alphabet().size != params.N[0]) {
    throw InvalidArgument("encoder chain expects " + std::to_string(params.N[0]) + " variables, got " +
                          std::to_string(f.alphabet().size));
  }
  NCPolynomial g = f;
  for (u64 k = 1; k <= d; ++k) g = encode_poly(g, params.N[k]);
  return g;
}

inline Circuit iterate_encoder(const Circuit& c, u64 n, u64 d) {
  const LiftParams params = LiftParams::make(n, d, 0);
  if (c.alphabet().size != params.N[0]) {
    throw InvalidArgument("encoder chain expects " + std::to_string(params.N[0]) + " variables, got " +
                          std::to_string(c.alphabet().size));
  }
  Circuit g = c;
  for (u64 k = 1; k <= d; ++k) g = encode_circuit(g, params.N[k]);
  return g;
}

/// Circuit over X = m^3 variables for D(f), f computed by C over |Y| = m:
/// the Hadamard product of C with the decoder, Y set to 1.
inline HadamardResult decode_circuit(const Circuit& c, u64 m, AutomatonBudget budget = {},
                                     DecoderIndexing indexing = DecoderIndexing::kExact,
                                     ProductOrder order = ProductOrder::kLeftRight) {
  if (c.alphabet().size != m) {
    throw InvalidArgument("decode with m = " + std::to_string(m) + " needs a circuit over " + std::to_string(m) +
                          " letters, got " + std::to_string(c.alphabet().size));
  }
  const u64 transitions = detail::checked_pow(m, 3, "decoder") + 2 * m;
  if (2 * m + 1 > budget.max_states || transitions > budget.max_transitions) {
    throw BudgetExceeded("decoder for m = " + std::to_string(m) + " needs " + std::to_string(transitions) +
                         " transitions, cap " + std::to_string(budget.max_transitions));
  }
  return hadamard_circuit(c, build_decoder(m, c.modulus(), indexing), order);
}

/// decode_circuit without listing the decoder: only the rows reachable from
/// the start state are synthesised, so m^3 may far exceed the transition budget.
inline HadamardResult decode_circuit_implicit(const Circuit& c, u64 m, DecoderIndexing indexing = DecoderIndexing::kExact,
                                              ProductOrder order = ProductOrder::kLeftRight) {
  if (c.alphabet().size != m) {
    throw InvalidArgument("decode with m = " + std::to_string(m) + " needs a circuit over " + std::to_string(m) +
                          " letters, got " + std::to_string(c.alphabet().size));
  }
  return hadamard_circuit_on_demand(c, ImplicitDecoder(m, c.modulus(), indexing), order);
}

struct DecodeChain {
  Circuit circuit;
  std::vector<HadamardWitness> witnesses;  // one per 1-to-3 stage, innermost first
};

/// d applications of the 1-to-3 decoder: |Y| = n -> n^3 -> ... -> n^(3^d).
inline DecodeChain iterated_decode(const Circuit& c, u64 n, u64 d, AutomatonBudget budget = {}) {
  DecodeChain chain{c, {}};
  u64 m = n;
  for (u64 k = 0; k < d; ++k) {
    HadamardResult r = decode_circuit(chain.circuit, m, budget);
    chain.circuit = std::move(r.circuit);
    chain.witnesses.push_back(r.witness);
    m = detail::checked_pow(m, 3, "decode chain");
  }
  return chain;
}

inline HadamardResult one_shot_decode_circuit(const Circuit& c, u64 n, u64 d, AutomatonBudget budget = {}) {
  if (c.alphabet().size != n) throw InvalidArgument("one-shot decode needs a circuit over n letters");
  return hadamard_circuit(c, build_one_shot_decoder(n, d, c.modulus(), budget));
}

/// What was measured for stage k of the chain.
struct StageMeasurement {
  u64 k = 0;
  std::optional<std::size_t> encoded_gates;  // size of the circuit for E^k(g) built by encoding
  std::optional<std::size_t> decoded_gates;  // size of decode(circuit for E^(k+1)(g)), k < d
  std::optional<bool> decode_verified;       // expansion of the decoded circuit equals E^k(g)
  std::optional<HadamardWitness> witness;
  std::string note;
};

struct LiftRow {
  u64 k = 0;
  u64 N = 0;
  u64 deg = 0;
  std::optional<std::size_t> gates;
  std::optional<u64> bound_factor;  // 2 q^3 + q^2 with q = 2 N_(k+1) + 1
  std::optional<bool> within_bound;
  std::optional<bool> verified;
  std::string note;
};

struct LiftReport {
  LiftParams params;
  std::vector<LiftRow> rows;

  bool ok() const {
    for (const auto& r : rows) {
      if (r.within_bound == false || r.verified == false) return false;
    }
    return !params.inconsistency().has_value();
  }

  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    for (const auto& r : rows) {
      out.push_back("stage k=" + std::to_string(r.k) + " N=" + std::to_string(r.N) + " deg=" + std::to_string(r.deg) +
                    " gates=" + (r.gates ? std::to_string(*r.gates) : "-") +
                    " bound_factor=" + (r.bound_factor ? std::to_string(*r.bound_factor) : "-"));
    }
    return out;
  }

  std::string table() const {
    std::ostringstream os;
    os << "lift n=" << params.n << " d=" << params.d << " t=" << params.t << " (exponent 3)\n";
    os << "  k  N_k                   deg_k  gates      bound_factor  status\n";
    for (const auto& r : rows) {
      std::string status = "-";
      if (r.within_bound.has_value()) status = *r.within_bound ? "within bound" : "BOUND VIOLATED";
      if (r.verified == false) status += ", DECODE MISMATCH";
      if (!r.note.empty()) status += " (" + r.note + ")";
      os << "  " << r.k << "  ";
      std::string nk = std::to_string(r.N);
      os << nk << std::string(nk.size() < 22 ? 22 - nk.size() : 1, ' ');
      std::string dg = std::to_string(r.deg);
      os << dg << std::string(dg.size() < 7 ? 7 - dg.size() : 1, ' ');
      std::string g = r.gates ? std::to_string(*r.gates) : "-";
      os << g << std::string(g.size() < 11 ? 11 - g.size() : 1, ' ');
      std::string b = r.bound_factor ? std::to_string(*r.bound_factor) : "-";
      os << b << std::string(b.size() < 14 ? 14 - b.size() : 1, ' ') << status << "\n";
    }
    return os.str();
  }
};

inline u64 decode_bound_factor(u64 m) {
  const u64 q = 2 * m + 1;
  const u64 q2 = detail::checked_mul(q, q, "bound factor");
  return detail::checked_mul(2 * q2, q, "bound factor") + q2;
}

/// Table of (k, N_k, deg_k, measured gates, bound factor). Row k < d carries the
/// size of the circuit for E^k(g) obtained by decoding the one for E^(k+1)(g),
/// checked against bound_factor * size(E^(k+1) circuit).
inline LiftReport lift_report(const LiftParams& params, const std::vector<StageMeasurement>& stages) {
  if (auto why = params.inconsistency()) throw InvalidArgument("inconsistent lift chain: " + *why);
  if (stages.size() != params.d + 1) throw InvalidArgument("lift_report needs one measurement per stage");
  LiftReport rep{params, {}};
  for (u64 k = 0; k <= params.d; ++k) {
    LiftRow row;
    row.k = k;
    row.N = params.N[k];
    row.deg = params.deg[k];
    row.note = stages[k].note;
    if (k == params.d) {
      row.gates = stages[k].encoded_gates;
    } else {
      row.gates = stages[k].decoded_gates;
      row.bound_factor = decode_bound_factor(params.N[k + 1]);
      row.verified = stages[k].decode_verified;
      if (row.gates && stages[k + 1].encoded_gates) {
        row.within_bound = static_cast<u128>(*row.gates) <=
                           static_cast<u128>(*row.bound_factor) * *stages[k + 1].encoded_gates;
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct LiftBudget {
  AutomatonBudget automaton;
  std::size_t max_degree = 512;
  std::size_t max_terms = 1 << 16;
};

/// Encodes g (over N_0 variables) k = 1..d times, then decodes every stage once
/// with the 1-to-3 decoder where the decoder fits the automaton budget.
inline std::vector<StageMeasurement> measure_lift(const LiftParams& params, const Circuit& g, LiftBudget budget = {}) {
  if (g.alphabet().size != params.N[0]) throw InvalidArgument("base circuit must be over N_0 variables");
  std::vector<Circuit> encoded{g};
  for (u64 k = 1; k <= params.d; ++k) encoded.push_back(encode_circuit(encoded.back(), params.N[k]));
  std::vector<StageMeasurement> stages(params.d + 1);
  for (u64 k = 0; k <= params.d; ++k) {
    stages[k].k = k;
    stages[k].encoded_gates = encoded[k].size();
  }
  for (u64 k = 0; k < params.d; ++k) {
    try {
      std::optional<HadamardResult> decoded;
      try {
        decoded = decode_circuit(encoded[k + 1], params.N[k + 1], budget.automaton);
      } catch (const BudgetExceeded&) {
        decoded = decode_circuit_implicit(encoded[k + 1], params.N[k + 1]);
        stages[k].note = "implicit decoder";
      }
      const HadamardResult& r = *decoded;
      stages[k].decoded_gates = r.circuit.size();
      stages[k].witness = r.witness;
      try {
        // Stage alphabets differ only in name (decoder output is X, encoder output Y).
        const NCPolynomial got = expand(r.circuit, budget.max_degree, budget.max_terms);
        const NCPolynomial want = expand(encoded[k], budget.max_degree, budget.max_terms);
        stages[k].decode_verified = got.alphabet().size == want.alphabet().size && got.terms() == want.terms();
      } catch (const BudgetExceeded&) {
        stages[k].note += stages[k].note.empty() ? "expansion over budget" : ", expansion over budget";
      }
    } catch (const BudgetExceeded& e) {
      stages[k].note = std::string("unmeasured: ") + e.what();
    }
  }
  return stages;
}

enum class FamilyKind { kSumOfSquares, kRandomSparse, kSingleMonomial };

inline FamilyKind parse_family_kind(const std::string& s) {
  if (s == "sum-of-squares") return FamilyKind::kSumOfSquares;
  if (s == "random-sparse") return FamilyKind::kRandomSparse;
  if (s == "single-monomial") return FamilyKind::kSingleMonomial;
  throw InvalidArgument("unknown family kind '" + s + "'");
}

struct FamilySpec {
  FamilyKind kind = FamilyKind::kSingleMonomial;
  u64 N = 1;
  std::size_t t = 2;
  std::size_t terms = 5;
  u64 seed = 0;
  Modulus p;
  std::optional<Letters> letters;  // single-monomial: explicit word instead of a seeded one
};

/// A stand-in explicit family member with its coefficient oracle.
struct Family {
  NCPolynomial poly;
  Circuit circuit;
  std::function<Scalar(const Word&)> coefficient;
};

inline Family sample_family(const FamilySpec& spec) {
  const Alphabet x("X", spec.N);
  const Modulus p = spec.p;
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<u64> letter(0, spec.N - 1);
  switch (spec.kind) {
    case FamilyKind::kSumOfSquares: {
      if (spec.N > (u64{1} << 20)) throw BudgetExceeded("sum-of-squares with more than 2^20 terms");
      NCPolynomial f(x, p);
      for (u64 i = 0; i < spec.N; ++i) f.add_term({i, i}, Scalar(1, p));
      auto oracle = [p](const Word& w) {
        return Scalar(w.length() == 2 && w[0] == w[1] ? 1 : 0, p);
      };
      return {f, from_polynomial(f, "sum_of_squares"), oracle};
    }
    case FamilyKind::kRandomSparse: {
      std::uniform_int_distribution<u64> coeff(1, p.value() - 1);
      NCPolynomial f(x, p);
      for (std::size_t i = 0; i < spec.terms; ++i) {
        Letters w(spec.t);
        for (auto& v : w) v = letter(rng);
        f.add_term(w, Scalar(coeff(rng), p));
      }
      auto oracle = [f](const Word& w) { return f.coeff(w); };
      return {f, from_polynomial(f, "random_sparse"), oracle};
    }
    case FamilyKind::kSingleMonomial: {
      Letters w = spec.letters.value_or(Letters{});
      if (!spec.letters) {
        w.resize(spec.t);
        for (auto& v : w) v = letter(rng);
      }
      const NCPolynomial f = NCPolynomial::monomial(Word(x, w), Scalar(1, p));
      auto oracle = [w, p](const Word& u) { return Scalar(u.letters() == w ? 1 : 0, p); };
      return {f, from_polynomial(f, "single_monomial"), oracle};
    }
  }
  throw InvalidArgument("unknown family kind");
}

}  // namespace nclift
