#pragma once

#include <charconv>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nclift/automaton.hpp"
#include "nclift/circuit.hpp"
#include "nclift/polynomial.hpp"

namespace nclift {

// Line-oriented text formats. `#` starts a comment; blank lines are ignored.
//
//   poly over <alphabet> vars <n> modulus <p>
//   <coeff> : <letters>            letters like `x0 x3`, or `1` for the empty word
//
//   circuit <name> over <alphabet> vars <n> modulus <p>
//   node <id> var <i> | node <id> const <c> | node <id> add <l> <r> | node <id> mul <l> <r>
//   output <id>
//
//   automaton over <Y> letters <m> states <q> start <s> accept <t> xvars <n> modulus <p>
//   trans <from> y<k> <to> scalar <c> | trans <from> y<k> <to> term <c> x<i>
//
// Printers emit the canonical form; parse followed by print reproduces a
// canonical file byte for byte.

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream is{std::string(line)};
    Line l{number, {}};
    for (std::string tok; is >> tok;) l.tokens.push_back(tok);
    if (!l.tokens.empty()) out.push_back(std::move(l));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline u64 parse_u64(std::string_view s, std::size_t line, const char* what) {
  u64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(s) + "'");
  }
  return v;
}

inline void expect(const Line& l, std::size_t i, std::string_view word) {
  if (i >= l.tokens.size() || l.tokens[i] != word) {
    throw ParseError(l.number, "expected '" + std::string(word) + "'");
  }
}

inline void expect_count(const Line& l, std::size_t n) {
  if (l.tokens.size() != n) {
    throw ParseError(l.number, "expected " + std::to_string(n) + " fields, got " + std::to_string(l.tokens.size()));
  }
}

inline Var parse_letter(std::string_view tok, char prefix, u64 size, std::size_t line) {
  if (tok.empty() || tok.front() != prefix) {
    throw ParseError(line, "expected letter '" + std::string(1, prefix) + "<i>', got '" + std::string(tok) + "'");
  }
  const Var v = parse_u64(tok.substr(1), line, "letter index");
  if (v >= size) throw ParseError(line, "letter " + std::string(tok) + " out of range (size " + std::to_string(size) + ")");
  return v;
}

inline Modulus parse_modulus(std::string_view s, std::size_t line) {
  try {
    return Modulus(parse_u64(s, line, "modulus"));
  } catch (const InvalidArgument& e) {
    throw ParseError(line, e.what());
  }
}

inline Alphabet make_alphabet(const std::string& name, u64 size, std::size_t line) {
  try {
    return Alphabet(name, size);
  } catch (const InvalidArgument& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace detail

enum class FileKind { kPoly, kCircuit, kAutomaton };

inline FileKind detect_kind(std::string_view text) {
  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty file");
  const auto& head = lines.front().tokens.front();
  if (head == "poly") return FileKind::kPoly;
  if (head == "circuit") return FileKind::kCircuit;
  if (head == "automaton") return FileKind::kAutomaton;
  throw ParseError(lines.front().number, "unknown file kind '" + head + "'");
}

inline std::string print_poly(const NCPolynomial& f) {
  std::string out = "poly over " + f.alphabet().name + " vars " + std::to_string(f.alphabet().size) + " modulus " +
                    std::to_string(f.modulus().value()) + "\n";
  for (const auto& [w, c] : f.terms()) out += std::to_string(c) + " : " + Word(f.alphabet(), w).to_string() + "\n";
  return out;
}

inline NCPolynomial parse_poly(std::string_view text) {
  using namespace detail;
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty polynomial file");
  const Line& h = lines.front();
  expect_count(h, 7);
  expect(h, 0, "poly");
  expect(h, 1, "over");
  expect(h, 3, "vars");
  expect(h, 5, "modulus");
  const Alphabet a = make_alphabet(h.tokens[2], parse_u64(h.tokens[4], h.number, "variable count"), h.number);
  const Modulus p = parse_modulus(h.tokens[6], h.number);
  NCPolynomial f(a, p);
  std::set<Letters> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() < 3) throw ParseError(l.number, "expected '<coeff> : <letters>'");
    expect(l, 1, ":");
    const u64 c = parse_u64(l.tokens[0], l.number, "coefficient");
    Letters w;
    if (!(l.tokens.size() == 3 && l.tokens[2] == "1")) {
      for (std::size_t k = 2; k < l.tokens.size(); ++k) {
        w.push_back(parse_letter(l.tokens[k], a.letter_prefix(), a.size, l.number));
      }
    }
    if (!seen.insert(w).second) throw ParseError(l.number, "duplicate word " + Word(a, w).to_string());
    f.add_term(w, Scalar(c, p));
  }
  return f;
}

inline std::string print_circuit(const Circuit& c) {
  std::string out = "circuit " + c.name() + " over " + c.alphabet().name + " vars " +
                    std::to_string(c.alphabet().size) + " modulus " + std::to_string(c.modulus().value()) + "\n";
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.nodes()[id];
    out += "node " + std::to_string(id) + " ";
    switch (n.gate) {
      case Gate::kInput: out += "var " + std::to_string(n.var()); break;
      case Gate::kConst: out += "const " + std::to_string(n.value()); break;
      case Gate::kAdd: out += "add " + std::to_string(n.left()) + " " + std::to_string(n.right()); break;
      case Gate::kMul: out += "mul " + std::to_string(n.left()) + " " + std::to_string(n.right()); break;
    }
    out += "\n";
  }
  out += "output " + std::to_string(c.output()) + "\n";
  return out;
}

/// Syntactic parse only; run validate() on the result before evaluating it.
inline Circuit parse_circuit(std::string_view text) {
  using namespace detail;
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty circuit file");
  const Line& h = lines.front();
  expect_count(h, 8);
  expect(h, 0, "circuit");
  expect(h, 2, "over");
  expect(h, 4, "vars");
  expect(h, 6, "modulus");
  const Alphabet a = make_alphabet(h.tokens[3], parse_u64(h.tokens[5], h.number, "variable count"), h.number);
  const Modulus p = parse_modulus(h.tokens[7], h.number);
  std::vector<Node> nodes;
  std::optional<NodeId> output;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (output) throw ParseError(l.number, "content after 'output'");
    if (l.tokens[0] == "output") {
      expect_count(l, 2);
      output = parse_u64(l.tokens[1], l.number, "output id");
      continue;
    }
    expect(l, 0, "node");
    if (l.tokens.size() < 4) throw ParseError(l.number, "truncated node line");
    const NodeId id = parse_u64(l.tokens[1], l.number, "node id");
    if (id != nodes.size()) throw ParseError(l.number, "node ids must be dense and ascending, expected " + std::to_string(nodes.size()));
    const std::string& kind = l.tokens[2];
    if (kind == "var") {
      expect_count(l, 4);
      nodes.push_back(Node::input(parse_u64(l.tokens[3], l.number, "variable index")));
    } else if (kind == "const") {
      expect_count(l, 4);
      nodes.push_back(Node::constant(parse_u64(l.tokens[3], l.number, "constant") % p.value()));
    } else if (kind == "add" || kind == "mul") {
      expect_count(l, 5);
      const NodeId left = parse_u64(l.tokens[3], l.number, "child id");
      const NodeId right = parse_u64(l.tokens[4], l.number, "child id");
      nodes.push_back(kind == "add" ? Node::add(left, right) : Node::mul(left, right));
    } else {
      throw ParseError(l.number, "unknown node kind '" + kind + "'");
    }
  }
  if (!output) throw ParseError(lines.back().number, "missing 'output' line");
  return Circuit(h.tokens[1], a, p, std::move(nodes), *output);
}

inline std::string print_automaton(const WeightedAutomaton& a) {
  std::string out = "automaton over " + a.letters().name + " letters " + std::to_string(a.letters().size) +
                    " states " + std::to_string(a.states()) + " start " + std::to_string(a.start()) + " accept " +
                    std::to_string(a.accept()) + " xvars " + std::to_string(a.xvars().size) + " modulus " +
                    std::to_string(a.modulus().value()) + "\n";
  for (const auto& t : a.transitions()) {
    out += "trans " + std::to_string(t.from) + " y" + std::to_string(t.letter) + " " + std::to_string(t.to);
    if (t.weight.kind == Weight::Kind::kScalar) {
      out += " scalar " + std::to_string(t.weight.coeff);
    } else {
      out += " term " + std::to_string(t.weight.coeff) + " x" + std::to_string(t.weight.var);
    }
    out += "\n";
  }
  return out;
}

inline WeightedAutomaton parse_automaton(std::string_view text) {
  using namespace detail;
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty automaton file");
  const Line& h = lines.front();
  expect_count(h, 15);
  expect(h, 0, "automaton");
  expect(h, 1, "over");
  expect(h, 3, "letters");
  expect(h, 5, "states");
  expect(h, 7, "start");
  expect(h, 9, "accept");
  expect(h, 11, "xvars");
  expect(h, 13, "modulus");
  const Alphabet y = make_alphabet(h.tokens[2], parse_u64(h.tokens[4], h.number, "letter count"), h.number);
  const u64 states = parse_u64(h.tokens[6], h.number, "state count");
  const u64 start = parse_u64(h.tokens[8], h.number, "start state");
  const u64 accept = parse_u64(h.tokens[10], h.number, "accept state");
  const Alphabet x = make_alphabet("X", parse_u64(h.tokens[12], h.number, "xvars"), h.number);
  const Modulus p = parse_modulus(h.tokens[14], h.number);
  std::vector<Transition> ts;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    expect(l, 0, "trans");
    if (l.tokens.size() < 6) throw ParseError(l.number, "truncated transition line");
    Transition t;
    t.from = parse_u64(l.tokens[1], l.number, "state id");
    t.letter = parse_letter(l.tokens[2], 'y', y.size, l.number);
    t.to = parse_u64(l.tokens[3], l.number, "state id");
    if (l.tokens[4] == "scalar") {
      expect_count(l, 6);
      t.weight = Weight::scalar(parse_u64(l.tokens[5], l.number, "coefficient") % p.value());
    } else if (l.tokens[4] == "term") {
      expect_count(l, 7);
      t.weight = Weight::term(parse_u64(l.tokens[5], l.number, "coefficient") % p.value(),
                              parse_letter(l.tokens[6], 'x', x.size, l.number));
    } else {
      throw ParseError(l.number, "unknown weight kind '" + l.tokens[4] + "'");
    }
    ts.push_back(t);
  }
  try {
    return WeightedAutomaton(y, states, start, accept, x, p, std::move(ts));
  } catch (const InvalidArgument& e) {
    throw ParseError(h.number, e.what());
  }
}

}  // namespace nclift
