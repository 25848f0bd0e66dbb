#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nclift/errors.hpp"
#include "nclift/matrix.hpp"
#include "nclift/polynomial.hpp"

namespace nclift {

using NodeId = std::uint64_t;

enum class Gate : std::uint8_t { kInput, kConst, kAdd, kMul };

/// One circuit node. For inputs `a` is the variable index, for constants `a`
/// is the residue, for gates `a`/`b` are the left/right child ids.
struct Node {
  Gate gate = Gate::kConst;
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  static Node input(Var v) { return {Gate::kInput, v, 0}; }
  static Node constant(u64 c) { return {Gate::kConst, c, 0}; }
  static Node add(NodeId l, NodeId r) { return {Gate::kAdd, l, r}; }
  static Node mul(NodeId l, NodeId r) { return {Gate::kMul, l, r}; }

  bool is_gate() const { return gate == Gate::kAdd || gate == Gate::kMul; }
  Var var() const { return a; }
  u64 value() const { return a; }
  NodeId left() const { return a; }
  NodeId right() const { return b; }

  friend bool operator==(const Node&, const Node&) = default;
};

/// Noncommutative arithmetic circuit: a dense, topologically ordered node list
/// with fan-in-2 gates and a designated output. Mul children are ordered.
///
/// Construction does not validate; call validate() on untrusted input, or build
/// through CircuitBuilder which enforces the invariants as nodes are added.
class Circuit {
 public:
  Circuit() = default;
  Circuit(std::string name, Alphabet alphabet, Modulus p, std::vector<Node> nodes, NodeId output)
      : name_(std::move(name)), alphabet_(std::move(alphabet)), p_(p), nodes_(std::move(nodes)), output_(output) {}

  const std::string& name() const { return name_; }
  const Alphabet& alphabet() const { return alphabet_; }
  Modulus modulus() const { return p_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  NodeId output() const { return output_; }
  std::size_t size() const { return nodes_.size(); }

  Circuit renamed(std::string name) const {
    Circuit c = *this;
    c.name_ = std::move(name);
    return c;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::string name_ = "c";
  Alphabet alphabet_;
  Modulus p_;
  std::vector<Node> nodes_;
  NodeId output_ = 0;
};

class CircuitBuilder {
 public:
  CircuitBuilder(std::string name, Alphabet alphabet, Modulus p)
      : name_(std::move(name)), alphabet_(std::move(alphabet)), p_(p) {}

  NodeId input(Var v) {
    if (!alphabet_.contains(v)) {
      throw InvalidArgument("variable " + std::to_string(v) + " out of range for alphabet " + alphabet_.name);
    }
    return push(Node::input(v));
  }
  NodeId constant(u64 c) { return push(Node::constant(c % p_.value())); }
  NodeId constant(Scalar c) { return constant(c.value()); }
  NodeId add(NodeId l, NodeId r) { return push(Node::add(child(l), child(r))); }
  NodeId mul(NodeId l, NodeId r) { return push(Node::mul(child(l), child(r))); }

  std::size_t size() const { return nodes_.size(); }
  const Alphabet& alphabet() const { return alphabet_; }
  Modulus modulus() const { return p_; }

  Circuit build(NodeId output) && {
    if (output >= nodes_.size()) throw InvalidArgument("output id " + std::to_string(output) + " is not a node");
    return Circuit(std::move(name_), std::move(alphabet_), p_, std::move(nodes_), output);
  }

  /// Output defaults to the last node.
  Circuit build() && {
    if (nodes_.empty()) throw InvalidArgument("circuit has no nodes");
    const NodeId out = nodes_.size() - 1;
    return std::move(*this).build(out);
  }

 private:
  NodeId child(NodeId id) const {
    if (id >= nodes_.size()) throw InvalidArgument("child id " + std::to_string(id) + " does not exist yet");
    return id;
  }
  NodeId push(Node n) {
    nodes_.push_back(n);
    return nodes_.size() - 1;
  }

  std::string name_;
  Alphabet alphabet_;
  Modulus p_;
  std::vector<Node> nodes_;
};

struct ValidationResult {
  bool ok = true;
  std::optional<NodeId> node;
  std::string message;

  explicit operator bool() const { return ok; }
};

/// Checks topological order, child existence, output id and variable ranges.
/// Reports the first violation.
inline ValidationResult validate(const Circuit& c) {
  const auto& nodes = c.nodes();
  auto fail = [](std::optional<NodeId> id, std::string msg) { return ValidationResult{false, id, std::move(msg)}; };
  if (nodes.empty()) return fail(std::nullopt, "circuit has no nodes");
  for (NodeId id = 0; id < nodes.size(); ++id) {
    const Node& n = nodes[id];
    switch (n.gate) {
      case Gate::kInput:
        if (!c.alphabet().contains(n.var())) {
          return fail(id, "node " + std::to_string(id) + ": variable " + std::to_string(n.var()) +
                              " out of range (vars " + std::to_string(c.alphabet().size) + ")");
        }
        break;
      case Gate::kConst:
        if (n.value() >= c.modulus().value()) {
          return fail(id, "node " + std::to_string(id) + ": constant not reduced modulo p");
        }
        break;
      case Gate::kAdd:
      case Gate::kMul:
        for (NodeId ch : {n.left(), n.right()}) {
          if (ch >= nodes.size()) {
            return fail(id, "node " + std::to_string(id) + ": child id " + std::to_string(ch) + " dangling");
          }
          if (ch >= id) {
            return fail(id, "node " + std::to_string(id) + ": child id " + std::to_string(ch) + " >= parent id");
          }
        }
        break;
    }
  }
  if (c.output() >= nodes.size()) return fail(std::nullopt, "output id " + std::to_string(c.output()) + " is not a node");
  return {};
}

inline void require_valid(const Circuit& c) {
  if (auto r = validate(c); !r) throw InvalidArgument("invalid circuit '" + c.name() + "': " + r.message);
}

struct SizeReport {
  std::size_t adds = 0;
  std::size_t muls = 0;
  std::size_t inputs = 0;
  std::size_t consts = 0;
  std::size_t total = 0;

  std::size_t gates() const { return adds + muls; }
  friend bool operator==(const SizeReport&, const SizeReport&) = default;
};

inline SizeReport size_report(const Circuit& c) {
  SizeReport r;
  for (const Node& n : c.nodes()) {
    switch (n.gate) {
      case Gate::kInput: ++r.inputs; break;
      case Gate::kConst: ++r.consts; break;
      case Gate::kAdd: ++r.adds; break;
      case Gate::kMul: ++r.muls; break;
    }
  }
  r.total = c.size();
  return r;
}

/// Nodes that feed the output.
inline std::vector<bool> reachable(const Circuit& c) {
  std::vector<bool> live(c.size(), false);
  live.at(c.output()) = true;
  for (NodeId id = c.size(); id-- > 0;) {
    if (!live[id]) continue;
    const Node& n = c.nodes()[id];
    if (n.is_gate()) {
      live[n.left()] = true;
      live[n.right()] = true;
    }
  }
  return live;
}

/// Variables read by nodes that feed the output.
inline std::set<Var> used_variables(const Circuit& c) {
  std::set<Var> vars;
  const auto live = reachable(c);
  for (NodeId id = 0; id < c.size(); ++id) {
    if (live[id] && c.nodes()[id].gate == Gate::kInput) vars.insert(c.nodes()[id].var());
  }
  return vars;
}

/// Syntactic degree of the output (an upper bound on the true degree).
/// Saturates instead of overflowing.
inline std::size_t syntactic_degree(const Circuit& c) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> deg(c.size(), 0);
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.nodes()[id];
    switch (n.gate) {
      case Gate::kInput: deg[id] = 1; break;
      case Gate::kConst: deg[id] = 0; break;
      case Gate::kAdd: deg[id] = std::max(deg[n.left()], deg[n.right()]); break;
      case Gate::kMul: {
        const std::size_t l = deg[n.left()], r = deg[n.right()];
        deg[id] = l > kMax - r ? kMax : l + r;
        break;
      }
    }
  }
  return deg.at(c.output());
}

namespace detail {

// Evaluates the live part of a circuit bottom-up, releasing each value after
// its last use. `leaf` maps input/const nodes to values.
template <typename T, typename Leaf, typename AddFn, typename MulFn>
T evaluate_dag(const Circuit& c, Leaf&& leaf, AddFn&& add, MulFn&& mul) {
  require_valid(c);
  const auto live = reachable(c);
  std::vector<std::size_t> uses(c.size(), 0);
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.nodes()[id];
    if (live[id] && n.is_gate()) {
      ++uses[n.left()];
      ++uses[n.right()];
    }
  }
  std::vector<std::optional<T>> values(c.size());
  auto take = [&](NodeId id) -> const T& { return *values[id]; };
  auto release = [&](NodeId id) {
    if (--uses[id] == 0 && id != c.output()) values[id].reset();
  };
  for (NodeId id = 0; id <= c.output(); ++id) {
    if (!live[id]) continue;
    const Node& n = c.nodes()[id];
    if (n.is_gate()) {
      values[id] = n.gate == Gate::kAdd ? add(take(n.left()), take(n.right())) : mul(take(n.left()), take(n.right()));
      release(n.left());
      release(n.right());
    } else {
      values[id] = leaf(n);
    }
  }
  return std::move(*values[c.output()]);
}

}  // namespace detail

inline Scalar eval_scalar(const Circuit& c, const std::map<Var, Scalar>& point) {
  const Modulus p = c.modulus();
  return detail::evaluate_dag<Scalar>(
      c,
      [&](const Node& n) {
        if (n.gate == Gate::kConst) return Scalar(n.value(), p);
        auto it = point.find(n.var());
        if (it == point.end()) throw InvalidArgument("variable " + std::to_string(n.var()) + " is unassigned");
        return it->second;
      },
      [](Scalar a, Scalar b) { return a + b; }, [](Scalar a, Scalar b) { return a * b; });
}

/// Order in which a Mul gate multiplies its children's matrices. Only the
/// left-to-right order is correct; the reversed order exists so that the
/// acceptance suite can check it detects the mistake.
enum class ProductOrder { kLeftRight, kRightLeft };

/// Evaluates C with matrix inputs: Mul is the ordered matrix product, Add the
/// sum, Const(c) lifts to c * I_q.
template <typename R>
SquareMatrix<R> eval_matrix(const Circuit& c, const MatrixPoint<R>& point, std::size_t q, const R& zero, const R& one,
                            ProductOrder order = ProductOrder::kLeftRight) {
  for (const auto& [v, m] : point) {
    if (m.dim() != q) throw MismatchError("matrix for variable " + std::to_string(v) + " has wrong dimension");
  }
  const auto id = SquareMatrix<R>::identity(q, zero, one);
  const Modulus p = c.modulus();
  return detail::evaluate_dag<SquareMatrix<R>>(
      c,
      [&](const Node& n) {
        if (n.gate == Gate::kConst) return id.scaled(Scalar(n.value(), p));
        auto it = point.find(n.var());
        if (it == point.end()) throw InvalidArgument("variable " + std::to_string(n.var()) + " is unassigned");
        return it->second;
      },
      [](const SquareMatrix<R>& a, const SquareMatrix<R>& b) { return a + b; },
      [order](const SquareMatrix<R>& a, const SquareMatrix<R>& b) {
        return order == ProductOrder::kLeftRight ? a * b : b * a;
      });
}

/// Convenience overload: q and the ring identities are taken from the point.
template <typename R>
SquareMatrix<R> eval_matrix(const Circuit& c, const MatrixPoint<R>& point,
                            ProductOrder order = ProductOrder::kLeftRight) {
  if (point.empty()) throw InvalidArgument("empty matrix point; pass the dimension explicitly");
  const auto& any = point.begin()->second;
  return eval_matrix(c, point, any.dim(), zero_like(any(0, 0)), one_like(any(0, 0)), order);
}

/// Exact polynomial computed by C. Throws BudgetExceeded when an intermediate
/// degree exceeds max_degree or an intermediate support exceeds max_terms.
inline NCPolynomial expand(const Circuit& c, std::size_t max_degree, std::size_t max_terms) {
  const Alphabet& a = c.alphabet();
  const Modulus p = c.modulus();
  auto check_terms = [&](NCPolynomial f) {
    if (f.size() > max_terms) {
      throw BudgetExceeded("expand: support " + std::to_string(f.size()) + " exceeds max_terms " +
                           std::to_string(max_terms));
    }
    return f;
  };
  return detail::evaluate_dag<NCPolynomial>(
      c,
      [&](const Node& n) {
        if (n.gate == Gate::kConst) return check_terms(NCPolynomial::constant(a, Scalar(n.value(), p)));
        if (max_degree < 1) throw BudgetExceeded("expand: degree 1 exceeds max_degree 0");
        return check_terms(NCPolynomial::variable(a, p, n.var()));
      },
      [&](const NCPolynomial& f, const NCPolynomial& g) { return check_terms(f + g); },
      [&](const NCPolynomial& f, const NCPolynomial& g) {
        if (!f.is_zero() && !g.is_zero() && f.degree() + g.degree() > max_degree) {
          throw BudgetExceeded("expand: degree " + std::to_string(f.degree() + g.degree()) + " exceeds max_degree " +
                               std::to_string(max_degree));
        }
        return check_terms(f * g);
      });
}

/// Replaces every Input(x_i) node by a fresh copy of sub.at(i). The result is
/// over `target`; all replacement circuits must be over `target` too.
inline Circuit substitute_inputs(const Circuit& c, const std::map<Var, Circuit>& sub, const Alphabet& target,
                                 std::string name = {}) {
  require_valid(c);
  for (const auto& [v, s] : sub) {
    require_same(s.alphabet(), target);
    if (!(s.modulus() == c.modulus())) throw MismatchError("substitution circuit modulus differs");
    require_valid(s);
  }
  std::vector<Node> out;
  std::vector<NodeId> map(c.size());
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.nodes()[id];
    switch (n.gate) {
      case Gate::kInput: {
        auto it = sub.find(n.var());
        if (it == sub.end()) throw InvalidArgument("missing substitution for variable " + std::to_string(n.var()));
        const NodeId base = out.size();
        for (const Node& s : it->second.nodes()) {
          out.push_back(s.is_gate() ? Node{s.gate, s.left() + base, s.right() + base} : s);
        }
        map[id] = base + it->second.output();
        break;
      }
      case Gate::kConst: out.push_back(n); map[id] = out.size() - 1; break;
      case Gate::kAdd:
      case Gate::kMul:
        out.push_back(Node{n.gate, map[n.left()], map[n.right()]});
        map[id] = out.size() - 1;
        break;
    }
  }
  return Circuit(name.empty() ? c.name() : std::move(name), target, c.modulus(), std::move(out), map[c.output()]);
}

/// Drops nodes that do not feed the output, keeping relative order.
inline Circuit compact(const Circuit& c) {
  const auto live = reachable(c);
  std::vector<NodeId> map(c.size());
  std::vector<Node> out;
  for (NodeId id = 0; id < c.size(); ++id) {
    if (!live[id]) continue;
    const Node& n = c.nodes()[id];
    out.push_back(n.is_gate() ? Node{n.gate, map[n.left()], map[n.right()]} : n);
    map[id] = out.size() - 1;
  }
  return Circuit(c.name(), c.alphabet(), c.modulus(), std::move(out), map[c.output()]);
}

/// Sum-of-monomials circuit for f: each term is a left-to-right product chain.
inline Circuit from_polynomial(const NCPolynomial& f, std::string name = "poly") {
  CircuitBuilder b(std::move(name), f.alphabet(), f.modulus());
  if (f.is_zero()) {
    b.constant(0);
    return std::move(b).build();
  }
  std::optional<NodeId> sum;
  for (const auto& [w, c] : f.terms()) {
    std::optional<NodeId> term;
    if (w.empty() || c != 1) term = b.constant(c);
    for (Var v : w) {
      const NodeId x = b.input(v);
      term = term ? b.mul(*term, x) : x;
    }
    sum = sum ? b.add(*sum, *term) : *term;
  }
  return std::move(b).build(*sum);
}

}  // namespace nclift
