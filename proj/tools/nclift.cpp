// nclift: batch driver for the encoder/decoder/Hadamard toolkit.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nclift/nclift.hpp"

namespace {

using namespace nclift;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

struct SessionConfig {
  u64 modulus = Modulus::kDefault;
  u64 seed = 1;
  std::size_t max_degree = 512;
  std::size_t max_terms = 1 << 20;
  u64 max_states = 1 << 16;
  u64 max_transitions = 1 << 22;

  AutomatonBudget automaton() const { return {max_states, max_transitions}; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

Circuit load_circuit(const std::string& path) {
  Circuit c = parse_circuit(read_file(path));
  require_valid(c);
  return c;
}

struct Chain {
  u64 m = 0;
  u64 n = 0;
  u64 d = 0;
  bool one_shot = false;

  bool single() const { return m != 0; }
};

void check_chain(const Chain& ch) {
  if (ch.single() == (ch.n != 0)) throw InvalidArgument("give either --m or both --n and --d");
  if (!ch.single() && ch.d == 0 && !ch.one_shot) return;
  if (ch.one_shot && ch.single()) throw InvalidArgument("--one-shot needs --n and --d");
}

void add_chain_options(CLI::App* cmd, Chain& ch, bool allow_one_shot) {
  cmd->add_option("--m", ch.m, "letters per 1-to-3 stage (|X| = m^3)");
  cmd->add_option("--n", ch.n, "final alphabet size of a d-fold chain");
  cmd->add_option("--d", ch.d, "number of encoder applications");
  if (allow_one_shot) cmd->add_flag("--one-shot", ch.one_shot, "use the single one-shot decoder for E^d");
}

int cmd_encode(const SessionConfig&, const std::string& in, const Chain& ch, const std::string& out) {
  check_chain(ch);
  const std::string text = read_file(in);
  std::ostream& table = (out.empty() || out == "-") ? std::cerr : std::cout;
  if (detect_kind(text) == FileKind::kPoly) {
    NCPolynomial f = parse_poly(text);
    table << "stage k=0 vars=" << f.alphabet().size << " terms=" << f.size() << " deg=" << f.degree() << "\n";
    if (ch.single()) {
      f = encode_poly(f, ch.m);
      table << "stage k=1 vars=" << ch.m << " terms=" << f.size() << " deg=" << f.degree() << "\n";
    } else {
      const LiftParams params = LiftParams::make(ch.n, ch.d, 0);
      if (f.alphabet().size != params.N[0]) throw InvalidArgument("chain expects " + std::to_string(params.N[0]) + " variables");
      for (u64 k = 1; k <= ch.d; ++k) {
        f = encode_poly(f, params.N[k]);
        table << "stage k=" << k << " vars=" << params.N[k] << " terms=" << f.size() << " deg=" << f.degree() << "\n";
      }
    }
    write_output(out, print_poly(f));
    return kOk;
  }
  Circuit c = load_circuit(in);
  auto row = [&](u64 k, const Circuit& cc) {
    const SizeReport s = size_report(cc);
    table << "stage k=" << k << " vars=" << cc.alphabet().size << " size=" << s.total << " adds=" << s.adds
          << " muls=" << s.muls << " inputs=" << s.inputs << " consts=" << s.consts << "\n";
  };
  row(0, c);
  if (ch.single()) {
    c = encode_circuit(c, ch.m);
    row(1, c);
  } else {
    const LiftParams params = LiftParams::make(ch.n, ch.d, 0);
    if (c.alphabet().size != params.N[0]) throw InvalidArgument("chain expects " + std::to_string(params.N[0]) + " variables");
    for (u64 k = 1; k <= ch.d; ++k) {
      c = encode_circuit(c, params.N[k]);
      row(k, c);
    }
  }
  write_output(out, print_circuit(c));
  return kOk;
}

int cmd_build_decoder(const SessionConfig& cfg, const Chain& ch, const std::string& out) {
  check_chain(ch);
  const Modulus p(cfg.modulus);
  WeightedAutomaton a;
  std::ostream& info = (out.empty() || out == "-") ? std::cerr : std::cout;
  if (ch.one_shot) {
    const OneShotLayout l = OneShotLayout::make(ch.n, ch.d);
    a = build_one_shot_decoder(ch.n, ch.d, p, cfg.automaton());
    info << "one-shot decoder n=" << ch.n << " d=" << ch.d << " layered_states=" << l.layered_states
         << " merged=" << l.merged_layered << " states=" << a.states() << " transitions=" << a.transitions().size()
         << "\n";
  } else {
    if (!ch.single()) throw InvalidArgument("build-decoder without --one-shot takes --m");
    if (ch.m < 1) throw InvalidArgument("decoder needs m >= 1");
    const u64 transitions = detail::checked_pow(ch.m, 3, "decoder") + 2 * ch.m;
    if (transitions > cfg.max_transitions) throw BudgetExceeded("decoder needs " + std::to_string(transitions) + " transitions");
    a = build_decoder(ch.m, p);
    info << "decoder m=" << ch.m << " states=" << a.states() << " transitions=" << a.transitions().size() << "\n";
  }
  write_output(out, print_automaton(a));
  return kOk;
}

int cmd_hadamard(const std::string& circuit, const std::string& automaton, const std::string& out) {
  const Circuit c = load_circuit(circuit);
  const WeightedAutomaton a = parse_automaton(read_file(automaton));
  const HadamardResult r = hadamard_circuit(c, a);
  write_output(out, print_circuit(r.circuit));
  ((out.empty() || out == "-") ? std::cerr : std::cout) << r.witness.line() << "\n";
  return r.witness.ok() ? kOk : kVerifyFailed;
}

int cmd_decode(const SessionConfig& cfg, const std::string& in, const Chain& ch, const std::string& out) {
  check_chain(ch);
  const Circuit c = load_circuit(in);
  std::ostream& info = (out.empty() || out == "-") ? std::cerr : std::cout;
  Circuit result;
  bool ok = true;
  if (ch.single()) {
    HadamardResult r = decode_circuit(c, ch.m, cfg.automaton());
    info << r.witness.line() << "\n";
    ok = r.witness.ok();
    result = std::move(r.circuit);
  } else if (ch.one_shot) {
    HadamardResult r = one_shot_decode_circuit(c, ch.n, ch.d, cfg.automaton());
    info << r.witness.line() << "\n";
    ok = r.witness.ok();
    result = std::move(r.circuit);
  } else {
    DecodeChain r = iterated_decode(c, ch.n, ch.d, cfg.automaton());
    for (const auto& w : r.witnesses) {
      info << w.line() << "\n";
      ok = ok && w.ok();
    }
    result = std::move(r.circuit);
  }
  write_output(out, print_circuit(result));
  return ok ? kOk : kVerifyFailed;
}

int cmd_expand(const SessionConfig& cfg, const std::string& in, const std::string& out) {
  const Circuit c = load_circuit(in);
  write_output(out, print_poly(expand(c, cfg.max_degree, cfg.max_terms)));
  return kOk;
}

int cmd_equiv(const SessionConfig& cfg, const std::string& a, const std::string& b, const std::string& mode,
              std::size_t trials, std::size_t dim) {
  const Circuit c1 = load_circuit(a);
  const Circuit c2 = load_circuit(b);
  EquivVerdict v;
  if (mode == "brute") {
    v = circuit_equiv_brute(c1, c2, cfg.max_degree, cfg.max_terms);
  } else if (mode == "random") {
    if (dim == 0) dim = identity_test_dimension(std::max(syntactic_degree(c1), syntactic_degree(c2)));
    v = circuit_equiv_random(c1, c2, trials, dim, cfg.seed);
  } else {
    throw InvalidArgument("--mode must be brute or random");
  }
  std::cout << v.summary() << "\n";
  if (v.result == EquivVerdict::Result::kInconclusiveBudget) return kBudget;
  return v.equal() ? kOk : kVerifyFailed;
}

int cmd_report(const SessionConfig& cfg, u64 n, u64 d, u64 t, const std::string& family) {
  const LiftParams params = LiftParams::make(n, d, t);
  FamilySpec fs{parse_family_kind(family), params.N[0], t, 3, cfg.seed, Modulus(cfg.modulus), std::nullopt};
  const Family g = sample_family(fs);
  LiftBudget budget{cfg.automaton(), cfg.max_degree, cfg.max_terms};
  const LiftReport rep = lift_report(params, measure_lift(params, g.circuit, budget));
  std::cout << rep.table();
  for (const auto& line : rep.lines()) std::cout << line << "\n";
  return rep.ok() ? kOk : kVerifyFailed;
}

int cmd_accept(const SessionConfig& cfg, bool skip_mutations) {
  AcceptanceOptions o;
  o.seed = cfg.seed;
  o.p = Modulus(cfg.modulus);
  o.run_mutations = !skip_mutations;
  const AcceptanceReport rep = run_acceptance(o, [](const CheckResult& c) { std::cout << c.line() << std::endl; });
  return rep.all_pass() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nclift - noncommutative encoder/decoder and Hadamard product toolkit"};
  app.require_subcommand(1);
  SessionConfig cfg;
  if (const char* env = std::getenv("NCLIFT_MODULUS")) {
    try {
      cfg.modulus = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: NCLIFT_MODULUS is not a number\n";
      return kUsage;
    }
  }
  app.add_option("--modulus", cfg.modulus, "prime modulus p (default 1000000007, env NCLIFT_MODULUS)");
  app.add_option("--seed", cfg.seed, "seed for every random choice");
  app.add_option("--max-degree", cfg.max_degree, "degree budget for expansion");
  app.add_option("--max-terms", cfg.max_terms, "support budget for expansion");
  app.add_option("--max-states", cfg.max_states, "state budget for automata");
  app.add_option("--max-transitions", cfg.max_transitions, "transition budget for automata");

  std::string in, out, circuit, automaton, a, b, mode = "brute", family = "single-monomial";
  Chain chain;
  std::size_t trials = 10, dim = 0;
  u64 n = 0, d = 0, t = 1;
  bool skip_mutations = false;

  auto* encode = app.add_subcommand("encode", "apply the encoder to a polynomial or circuit file");
  encode->add_option("--in", in, "input file")->required();
  encode->add_option("--out", out, "output file (default stdout)");
  add_chain_options(encode, chain, false);

  auto* build = app.add_subcommand("build-decoder", "write a decoder automaton");
  build->add_option("--out", out, "output file (default stdout)");
  add_chain_options(build, chain, true);

  auto* had = app.add_subcommand("hadamard", "Hadamard product of a circuit with an automaton");
  had->add_option("--circuit", circuit, "circuit file over Y")->required();
  had->add_option("--automaton", automaton, "automaton file")->required();
  had->add_option("--out", out, "output circuit file (default stdout)");

  auto* dec = app.add_subcommand("decode", "decode a circuit over Y into one over X");
  dec->add_option("--in", in, "circuit file")->required();
  dec->add_option("--out", out, "output file (default stdout)");
  add_chain_options(dec, chain, true);

  auto* exp = app.add_subcommand("expand", "expand a circuit into its polynomial");
  exp->add_option("--in", in, "circuit file")->required();
  exp->add_option("--out", out, "output file (default stdout)");

  auto* eq = app.add_subcommand("equiv", "compare two circuits");
  eq->add_option("--a", a, "first circuit")->required();
  eq->add_option("--b", b, "second circuit")->required();
  eq->add_option("--mode", mode, "brute or random");
  eq->add_option("--trials", trials, "random mode: number of trials");
  eq->add_option("--dim", dim, "random mode: matrix dimension (default floor(deg/2)+1)");

  auto* rep = app.add_subcommand("report", "lifting chain bookkeeping and per-stage decode sizes");
  rep->add_option("--n", n, "final alphabet size")->required();
  rep->add_option("--d", d, "encoder iterations")->required();
  rep->add_option("--t", t, "base degree");
  rep->add_option("--family", family, "sum-of-squares | random-sparse | single-monomial");

  auto* acc = app.add_subcommand("accept", "run the acceptance suite");
  acc->add_flag("--skip-mutations", skip_mutations, "skip the mutation-sensitivity check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*encode) return cmd_encode(cfg, in, chain, out);
    if (*build) return cmd_build_decoder(cfg, chain, out);
    if (*had) return cmd_hadamard(circuit, automaton, out);
    if (*dec) return cmd_decode(cfg, in, chain, out);
    if (*exp) return cmd_expand(cfg, in, out);
    if (*eq) return cmd_equiv(cfg, a, b, mode, trials, dim);
    if (*rep) return cmd_report(cfg, n, d, t, family);
    if (*acc) return cmd_accept(cfg, skip_mutations);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
