#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nclift/automaton.hpp"
#include "nclift/circuit.hpp"
#include "nclift/hadamard.hpp"
#include "nclift/lift.hpp"
#include "nclift/random_circuit.hpp"
#include "nclift/verify.hpp"

namespace nclift {

struct CheckResult {
  int id = 0;
  bool pass = false;
  std::string details;
  double seconds = 0;

  std::string line() const { return "check " + std::to_string(id) + " " + (pass ? "pass" : "fail") + " " + details; }
};

struct AcceptanceReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
};

/// Deliberate construction errors for mutation testing.
struct Mutation {
  DecoderIndexing indexing = DecoderIndexing::kExact;
  ProductOrder order = ProductOrder::kLeftRight;
};

struct AcceptanceOptions {
  u64 seed = 1;
  Modulus p;
  bool run_mutations = true;
};

namespace acceptance {

constexpr std::size_t kRoundTripCircuits = 100;
constexpr std::size_t kRoundTripDegree = 4;
constexpr std::size_t kRoundTripNodes = 20;
constexpr double kRoundTripSeconds = 60;
constexpr std::size_t kOneShotCircuits = 25;
constexpr double kOneShotSeconds = 120;
constexpr std::size_t kIdentityPairs = 50;
constexpr std::size_t kIdentityDegree = 6;
constexpr std::size_t kIdentityDim = 4;
constexpr std::size_t kIdentityTrials = 10;
constexpr u64 kIdentityModulus = 1000000007ULL;
constexpr std::size_t kMaxDegree = 512;
constexpr std::size_t kMaxTerms = 1 << 18;

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// The shared corpus for criteria 1 and 2: random circuits over |X| = m^3.
inline std::vector<Circuit> round_trip_corpus(u64 m, u64 seed, Modulus p) {
  std::mt19937_64 rng(seed * 1000003ULL + m);
  RandomCircuitSpec spec{Alphabet("X", m * m * m), p, kRoundTripDegree, kRoundTripNodes, 3, 0.1};
  std::vector<Circuit> out;
  for (std::size_t i = 0; i < kRoundTripCircuits; ++i) {
    out.push_back(random_circuit(spec, rng, "rt" + std::to_string(m) + "_" + std::to_string(i)));
  }
  return out;
}

inline CheckResult decoder_round_trip(const AcceptanceOptions& o, Mutation mut, std::vector<HadamardWitness>* sink) {
  const auto t0 = Clock::now();
  CheckResult r{1, true, "", 0};
  std::size_t checked = 0;
  for (u64 m : {2, 3}) {
    for (const Circuit& c : round_trip_corpus(m, o.seed, o.p)) {
      const HadamardResult dec = decode_circuit(encode_circuit(c, m), m, {}, mut.indexing, mut.order);
      if (sink) sink->push_back(dec.witness);
      ++checked;
      if (!(expand(dec.circuit, kMaxDegree, kMaxTerms) == expand(c, kMaxDegree, kMaxTerms))) {
        r.pass = false;
        r.details = "round trip mismatch on " + c.name();
        r.seconds = since(t0);
        return r;
      }
    }
  }
  r.seconds = since(t0);
  r.pass = r.seconds < kRoundTripSeconds;
  std::ostringstream os;
  os << "decode(encode(C)) == C on " << checked << " circuits (m=2,3) in " << r.seconds << "s (limit "
     << kRoundTripSeconds << "s)";
  r.details = os.str();
  return r;
}

inline CheckResult claim_identity(const AcceptanceOptions& o, Mutation mut) {
  const auto t0 = Clock::now();
  CheckResult r{2, true, "", 0};
  std::size_t checked = 0;
  for (u64 m : {2, 3}) {
    const WeightedAutomaton dec = build_decoder(m, o.p, mut.indexing);
    std::map<Var, Scalar> ones;
    for (Var y = 0; y < m; ++y) ones.emplace(y, Scalar(1, o.p));
    for (const Circuit& c : round_trip_corpus(m, o.seed, o.p)) {
      ++checked;
      if (!(hadamard_eval(encode_circuit(c, m), dec, ones, mut.order) == expand(c, kMaxDegree, kMaxTerms))) {
        r.pass = false;
        r.details = "(E(h) o S)(1,...,1) != h on " + c.name();
        r.seconds = since(t0);
        return r;
      }
    }
  }
  r.seconds = since(t0);
  r.details = "(E(h) o S)(1,...,1) == h on " + std::to_string(checked) + " circuits";
  return r;
}

inline CheckResult sigma_exhaustive(const AcceptanceOptions& o, Mutation mut) {
  const auto t0 = Clock::now();
  CheckResult r{3, true, "", 0};
  const WeightedAutomaton dec = build_decoder(2, o.p, mut.indexing);
  const Alphabet x("X", 8);
  for (u64 a = 0; a < 2; ++a) {
    for (u64 b = 0; b < 2; ++b) {
      for (u64 c = 0; c < 2; ++c) {
        const NCPolynomial want = NCPolynomial::variable(x, o.p, 4 * a + 2 * b + c);
        if (!(coeff_of_word(dec, Letters{a, b, c}) == want)) {
          r.pass = false;
          r.details = "y" + std::to_string(a) + " y" + std::to_string(b) + " y" + std::to_string(c) + " does not decode to x" +
                      std::to_string(4 * a + 2 * b + c);
          return r;
        }
      }
    }
  }
  std::size_t zeros = 0;
  for (std::size_t len : {1, 2, 4, 5}) {
    for (u64 bits = 0; bits < (u64{1} << len); ++bits) {
      Letters w(len);
      for (std::size_t i = 0; i < len; ++i) w[i] = (bits >> (len - 1 - i)) & 1;
      ++zeros;
      if (!coeff_of_word(dec, w).is_zero()) {
        r.pass = false;
        r.details = "non-code word of length " + std::to_string(len) + " has a nonzero coefficient";
        return r;
      }
    }
  }
  r.seconds = since(t0);
  r.details = "8/8 codes decode to x_(4a+2b+c); " + std::to_string(zeros) + " non-code words give 0";
  return r;
}

inline CheckResult size_bound(const std::vector<HadamardWitness>& witnesses) {
  CheckResult r{4, true, "", 0};
  std::size_t bad = 0;
  std::string first_bad;
  for (const auto& w : witnesses) {
    if (!w.ok()) {
      if (bad++ == 0) first_bad = w.line();
    }
  }
  r.pass = bad == 0 && !witnesses.empty();
  r.details = std::to_string(witnesses.size() - bad) + "/" + std::to_string(witnesses.size()) +
              " synthesized circuits report ok=1" + (bad != 0 ? "; first failure: " + first_bad : "");
  return r;
}

inline CheckResult one_shot_vs_iterated(const AcceptanceOptions& o, std::vector<HadamardWitness>* sink) {
  const auto t0 = Clock::now();
  CheckResult r{5, true, "", 0};
  const u64 n = 2, d = 2;
  const OneShotLayout layout = OneShotLayout::make(n, d);
  const WeightedAutomaton one_shot = build_one_shot_decoder(n, d, o.p);
  auto fail = [&](std::string why) {
    r.pass = false;
    r.details = std::move(why);
    r.seconds = since(t0);
    return r;
  };
  if (layout.layered_states != 34 || layout.merged_layered != 33) {
    return fail("layered state count " + std::to_string(layout.layered_states) + "/" +
                std::to_string(layout.merged_layered) + ", expected 34/33");
  }
  if (one_shot.states() != layout.total_states) return fail("automaton state count disagrees with layout");

  const Alphabet x0("X", 512);
  std::size_t compared = 0;
  auto compare = [&](const Circuit& c) -> std::optional<std::string> {
    const Circuit y = iterate_encoder(c, n, d);
    const HadamardResult shot = hadamard_circuit(y, one_shot);
    const DecodeChain twice = iterated_decode(y, n, d);
    if (sink) {
      sink->push_back(shot.witness);
      sink->insert(sink->end(), twice.witnesses.begin(), twice.witnesses.end());
    }
    const NCPolynomial a = expand(shot.circuit, kMaxDegree, kMaxTerms);
    const NCPolynomial b = expand(twice.circuit, kMaxDegree, kMaxTerms);
    ++compared;
    if (!(a == b)) return "one-shot and iterated decodes differ on " + c.name();
    if (!(a == expand(c, kMaxDegree, kMaxTerms))) return "one-shot decode does not recover " + c.name();
    return std::nullopt;
  };
  std::mt19937_64 rng(o.seed * 7919ULL + 5);
  RandomCircuitSpec spec{x0, o.p, 3, 15, 3, 0.1};
  for (std::size_t i = 0; i < kOneShotCircuits; ++i) {
    if (auto why = compare(random_circuit(spec, rng, "os" + std::to_string(i)))) return fail(*why);
  }
  for (u64 i = 0; i < 512; ++i) {
    CircuitBuilder b("code" + std::to_string(i), x0, o.p);
    b.input(i);
    if (auto why = compare(std::move(b).build())) return fail(*why);
  }
  r.seconds = since(t0);
  r.pass = r.seconds < kOneShotSeconds;
  std::ostringstream os;
  os << "layered states " << layout.layered_states << " -> " << layout.merged_layered << " merged (total "
     << layout.total_states << " with prefix/suffix tries); " << compared
     << " circuits agree (25 random + 512 codes) in " << r.seconds << "s (limit " << kOneShotSeconds << "s)";
  r.details = os.str();
  return r;
}

inline CheckResult lifting_bookkeeping(const AcceptanceOptions& o, std::vector<HadamardWitness>* sink) {
  const auto t0 = Clock::now();
  CheckResult r{6, true, "", 0};
  std::size_t configs = 0, measured = 0, implicit = 0;
  for (u64 n = 1; n <= 4; ++n) {
    for (u64 d = 0; d <= 3; ++d) {
      for (u64 t = 0; t <= 3; ++t) {
        ++configs;
        const LiftParams params = LiftParams::make(n, d, t);
        auto fail = [&](const std::string& why) {
          r.pass = false;
          r.details = "n=" + std::to_string(n) + " d=" + std::to_string(d) + " t=" + std::to_string(t) + ": " + why;
          r.seconds = since(t0);
          return r;
        };
        if (auto why = params.inconsistency()) return fail(*why);
        if (params.N[d] != n) return fail("N_d != n");
        if (params.deg[d] != t * detail::checked_pow(3, d, "deg")) return fail("deg_d != t 3^d");
        for (FamilyKind kind : {FamilyKind::kSingleMonomial, FamilyKind::kRandomSparse}) {
          FamilySpec fs{kind, params.N[0], t, 3, o.seed + n * 100 + d * 10 + t, o.p, std::nullopt};
          const Family g = sample_family(fs);
          const auto stages = measure_lift(params, g.circuit);
          const LiftReport rep = lift_report(params, stages);
          for (const auto& row : rep.rows) {
            if (row.k == d) continue;
            const std::string stage = "stage " + std::to_string(row.k);
            if (!row.within_bound.has_value()) return fail(stage + " not measured (" + row.note + ")");
            if (!*row.within_bound) return fail(stage + " exceeds its bound factor");
            if (row.verified != true) return fail(stage + " decode not verified (" + row.note + ")");
            ++measured;
            implicit += row.note.find("implicit") != std::string::npos;
            if (sink && stages[row.k].witness) sink->push_back(*stages[row.k].witness);
          }
        }
      }
    }
  }
  r.seconds = since(t0);
  std::ostringstream os;
  os << configs << " (n,d,t) chains consistent; " << measured << " decode stages measured, within 2q^3+q^2 and verified ("
     << implicit << " via the implicit decoder)";
  r.details = os.str();
  return r;
}

inline CheckResult noncommutativity_witness(const AcceptanceOptions& o, Mutation mut) {
  CheckResult r{7, true, "", 0};
  const Modulus p = o.p;
  const Alphabet x("X", 2);
  auto product = [&](Var a, Var b) {
    CircuitBuilder cb("p", x, p);
    const NodeId l = cb.input(a);
    const NodeId rr = cb.input(b);
    cb.mul(l, rr);
    return std::move(cb).build();
  };
  const Scalar z(0, p), one(1, p);
  MatrixPoint<Scalar> point;
  point.emplace(0, SquareMatrix<Scalar>::from_rows({{z, one}, {z, z}}));
  point.emplace(1, SquareMatrix<Scalar>::from_rows({{z, z}, {one, z}}));
  const auto ab = eval_matrix(product(0, 1), point, mut.order);
  const auto ba = eval_matrix(product(1, 0), point, mut.order);
  const auto e00 = SquareMatrix<Scalar>::from_rows({{one, z}, {z, z}});
  const auto e11 = SquareMatrix<Scalar>::from_rows({{z, z}, {z, one}});
  r.pass = !(ab == ba) && ab == e00 && ba == e11;
  r.details = r.pass ? "M0 M1 = E11, M1 M0 = E22: x0x1 and x1x0 separated"
                     : "fixed matrix pair does not reproduce M0 M1 = E11, M1 M0 = E22";
  return r;
}

inline CheckResult identity_testing(const AcceptanceOptions& o) {
  const auto t0 = Clock::now();
  CheckResult r{8, true, "", 0};
  const Modulus p(kIdentityModulus);
  const Alphabet x("X", 3);
  std::mt19937_64 rng(o.seed * 31337ULL + 8);
  RandomCircuitSpec spec{x, p, kIdentityDegree, 16, 4, 0.1};
  std::uniform_int_distribution<u64> coeff(1, p.value() - 1);
  std::uniform_int_distribution<u64> var(0, x.size - 1);
  std::uniform_int_distribution<std::size_t> len(0, kIdentityDegree);
  std::size_t misclassified = 0, contradictions = 0, pairs = 0;
  for (std::size_t i = 0; i < 2 * kIdentityPairs; ++i) {
    const bool perturb = i >= kIdentityPairs;
    const Circuit c = random_circuit(spec, rng, "it" + std::to_string(i));
    Circuit other = from_polynomial(expand(c, kMaxDegree, kMaxTerms), "it_alt");
    if (perturb) {
      // other := c + coeff * w for a random word w of degree <= 6
      CircuitBuilder b("it_pert", x, p);
      for (const Node& n : c.nodes()) {
        if (n.gate == Gate::kInput) b.input(n.var());
        else if (n.gate == Gate::kConst) b.constant(n.value());
        else if (n.gate == Gate::kAdd) b.add(n.left(), n.right());
        else b.mul(n.left(), n.right());
      }
      NodeId term = b.constant(coeff(rng));
      for (std::size_t k = len(rng); k > 0; --k) term = b.mul(term, b.input(var(rng)));
      b.add(c.output(), term);
      other = std::move(b).build();
    }
    ++pairs;
    const EquivVerdict brute = circuit_equiv_brute(c, other, kMaxDegree, kMaxTerms);
    const EquivVerdict rnd = circuit_equiv_random(c, other, kIdentityTrials, kIdentityDim, o.seed + i);
    const bool truth_equal = !perturb;
    if (brute.equal() != truth_equal || rnd.equal() != truth_equal) ++misclassified;
    if (rnd.distinct() && !brute.distinct()) ++contradictions;
  }
  r.seconds = since(t0);
  r.pass = misclassified == 0 && contradictions == 0;
  r.details = std::to_string(pairs) + " pairs (50 equal, 50 perturbed), dim 4, 10 trials: " +
              std::to_string(misclassified) + " misclassified, " + std::to_string(contradictions) +
              " random/brute contradictions";
  return r;
}

inline CheckResult mutation_sensitivity(const AcceptanceOptions& o) {
  const auto t0 = Clock::now();
  CheckResult r{9, true, "", 0};
  auto caught = [&](Mutation m) {
    std::vector<int> failed;
    if (!decoder_round_trip(o, m, nullptr).pass) failed.push_back(1);
    if (!claim_identity(o, m).pass) failed.push_back(2);
    if (!sigma_exhaustive(o, m).pass) failed.push_back(3);
    if (!noncommutativity_witness(o, m).pass) failed.push_back(7);
    return failed;
  };
  auto fmt = [](const std::vector<int>& ids) {
    std::string s;
    for (int id : ids) s += (s.empty() ? "" : ",") + std::to_string(id);
    return s.empty() ? std::string("none") : s;
  };
  const auto sigma = caught({DecoderIndexing::kSwappedMiddle, ProductOrder::kLeftRight});
  const auto order = caught({DecoderIndexing::kExact, ProductOrder::kRightLeft});
  r.seconds = since(t0);
  auto hits_core = [](const std::vector<int>& ids) { return !ids.empty() && ids.front() <= 3; };
  r.pass = hits_core(sigma) && hits_core(order);
  r.details = "sigma j<->k swap fails criteria {" + fmt(sigma) + "}; reversed matrix product fails criteria {" +
              fmt(order) + "}";
  return r;
}

}  // namespace acceptance

/// Runs every acceptance criterion and returns one result per criterion, in order.
inline AcceptanceReport run_acceptance(const AcceptanceOptions& o = {},
                                       const std::function<void(const CheckResult&)>& on_result = {}) {
  using namespace acceptance;
  AcceptanceReport rep;
  std::vector<HadamardWitness> witnesses;
  auto record = [&](CheckResult c) {
    if (on_result) on_result(c);
    rep.checks.push_back(std::move(c));
  };
  auto guarded = [&](int id, const std::function<CheckResult()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return CheckResult{id, false, std::string("error: ") + e.what(), 0};
    }
  };
  // Criterion 4 aggregates the witnesses produced by 1, 5 and 6, so those run first.
  CheckResult c1 = guarded(1, [&] { return decoder_round_trip(o, {}, &witnesses); });
  CheckResult c5 = guarded(5, [&] { return one_shot_vs_iterated(o, &witnesses); });
  CheckResult c6 = guarded(6, [&] { return lifting_bookkeeping(o, &witnesses); });
  record(std::move(c1));
  record(guarded(2, [&] { return claim_identity(o, {}); }));
  record(guarded(3, [&] { return sigma_exhaustive(o, {}); }));
  record(guarded(4, [&] { return size_bound(witnesses); }));
  record(std::move(c5));
  record(std::move(c6));
  record(guarded(7, [&] { return noncommutativity_witness(o, {}); }));
  record(guarded(8, [&] { return identity_testing(o); }));
  if (o.run_mutations) record(guarded(9, [&] { return mutation_sensitivity(o); }));
  return rep;
}

}  // namespace nclift
