#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nclift/automaton.hpp"
#include "nclift/circuit.hpp"

namespace nclift {

/// Size accounting for one circuit x automaton synthesis.
namespace detail {

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  for (; v > 0; v /= 10) s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
  return s;
}

}  // namespace detail

struct HadamardWitness {
  SizeReport input;
  std::size_t states = 0;
  SizeReport output;        // after constant folding and dead-node removal
  u128 prefold_total = 0;   // node count of the unfolded block construction
  u128 bound = 0;           // 2 q^3 size(C) + q^2 (inputs + consts)

  bool ok() const { return prefold_total <= bound && output.total <= prefold_total; }

  std::string line() const {
    return "hadamard q=" + std::to_string(states) + " in_gates=" + std::to_string(input.total) +
           " out_gates=" + std::to_string(output.total) + " bound=" + detail::to_string(bound) +
           " ok=" + (ok() ? "1" : "0");
  }
};

namespace detail {

inline u128 hadamard_bound(const SizeReport& in, std::size_t q) {
  const u128 q2 = static_cast<u128>(q) * q;
  return 2 * q2 * q * in.total + q2 * (in.inputs + in.consts);
}

}  // namespace detail

struct HadamardResult {
  Circuit circuit;
  HadamardWitness witness;
};

/// Reference Hadamard product: pairs each w in supp(f) with [w]f * r_w and
/// drops words whose product is zero.
inline SeriesView hadamard_poly(const NCPolynomial& f, const WeightedAutomaton& a, std::size_t d) {
  if (f.degree() > d) throw InvalidArgument("hadamard_poly: degree bound below deg(f)");
  if (f.alphabet().size != a.letters().size) throw MismatchError("polynomial alphabet does not match automaton letters");
  if (!(f.modulus() == a.modulus())) throw MismatchError("moduli differ");
  SeriesView out;
  for (const auto& [w, c] : f.terms()) {
    NCPolynomial r = coeff_of_word(a, w).scaled(Scalar(c, f.modulus()));
    if (!r.is_zero()) out.emplace(w, std::move(r));
  }
  return out;
}

/// (f o S)(a) computed as the (s, t) entry of C(a_1 M_1, ..., a_m M_m).
inline NCPolynomial hadamard_eval(const Circuit& c, const WeightedAutomaton& a, const std::map<Var, Scalar>& point,
                                  ProductOrder order = ProductOrder::kLeftRight) {
  if (c.alphabet().size != a.letters().size) throw MismatchError("circuit alphabet does not match automaton letters");
  if (!(c.modulus() == a.modulus())) throw MismatchError("moduli differ");
  const TransitionMatrices ms = transition_matrices(a);
  MatrixPoint<NCPolynomial> mpoint;
  for (Var y : used_variables(c)) {
    auto it = point.find(y);
    if (it == point.end()) throw InvalidArgument("variable " + std::to_string(y) + " is unassigned");
    mpoint.emplace(y, ms[y].scaled(it->second));
  }
  const NCPolynomial zero(a.xvars(), a.modulus());
  const auto value = eval_matrix(c, mpoint, a.states(), zero, NCPolynomial::one(a.xvars(), a.modulus()), order);
  return value(a.start(), a.accept());
}

namespace detail {

// Node sink that folds constants, drops zeros and shares identical nodes.
// Zero is never materialised: callers represent it by an absent entry.
class FoldingBuilder {
 public:
  explicit FoldingBuilder(Modulus p) : p_(p) {}

  NodeId constant(u64 c) {
    auto [it, fresh] = consts_.try_emplace(c, nodes_.size());
    if (fresh) nodes_.push_back(Node::constant(c));
    return it->second;
  }

  NodeId input(Var v) {
    auto [it, fresh] = inputs_.try_emplace(v, nodes_.size());
    if (fresh) nodes_.push_back(Node::input(v));
    return it->second;
  }

  std::optional<NodeId> add(NodeId l, NodeId r) {
    const Node a = nodes_[l];
    const Node b = nodes_[r];
    if (a.gate == Gate::kConst && b.gate == Gate::kConst) {
      const u64 s = (Scalar(a.value(), p_) + Scalar(b.value(), p_)).value();
      if (s == 0) return std::nullopt;
      return constant(s);
    }
    return gate(Gate::kAdd, l, r);
  }

  NodeId mul(NodeId l, NodeId r) {
    const Node a = nodes_[l];
    const Node b = nodes_[r];
    if (a.gate == Gate::kConst && b.gate == Gate::kConst) {
      return constant((Scalar(a.value(), p_) * Scalar(b.value(), p_)).value());
    }
    if (a.gate == Gate::kConst && a.value() == 1) return r;
    if (b.gate == Gate::kConst && b.value() == 1) return l;
    return gate(Gate::kMul, l, r);
  }

  std::vector<Node> release() { return std::move(nodes_); }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Key {
    Gate gate;
    NodeId l, r;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<NodeId>{}(k.l) * 0x9E3779B97F4A7C15ULL;
      h ^= std::hash<NodeId>{}(k.r) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
      return h ^ static_cast<std::size_t>(k.gate);
    }
  };

  NodeId gate(Gate g, NodeId l, NodeId r) {
    auto [it, fresh] = gates_.try_emplace(Key{g, l, r}, nodes_.size());
    if (fresh) nodes_.push_back(Node{g, l, r});
    return it->second;
  }

  Modulus p_;
  std::vector<Node> nodes_;
  std::map<u64, NodeId> consts_;
  std::unordered_map<Var, NodeId> inputs_;
  std::unordered_map<Key, NodeId, KeyHash> gates_;
};

// Sparse q x q block of node ids; rows hold (column, node) sorted by column.
using BlockRow = std::vector<std::pair<std::uint32_t, NodeId>>;
using Block = std::vector<BlockRow>;

inline u64 leaf_cost(const Weight& w) {
  return (w.kind == Weight::Kind::kTerm && w.coeff != 0 && w.coeff != 1) ? 3 : 1;
}

}  // namespace detail

/// Circuit over X for sum_w [w]f * r_w, with every Y variable set to 1, where
/// f is computed by C and r_w are the coefficients of A. Each node of C becomes
/// a q x q block: inputs become transition matrices, constants c * I_q, adds
/// entrywise sums and muls the naive cubic matrix product. The output is the
/// (start, accept) entry.
inline HadamardResult hadamard_circuit(const Circuit& c, const WeightedAutomaton& a,
                                       ProductOrder order = ProductOrder::kLeftRight) {
  require_valid(c);
  if (c.alphabet().size != a.letters().size) throw MismatchError("circuit alphabet does not match automaton letters");
  if (!(c.modulus() == a.modulus())) throw MismatchError("moduli differ");
  const std::size_t q = a.states();
  if (q > std::numeric_limits<std::uint32_t>::max()) throw BudgetExceeded("too many automaton states");
  const Modulus p = c.modulus();
  using detail::Block;
  using detail::BlockRow;

  HadamardWitness witness;
  witness.input = size_report(c);
  witness.states = q;
  const u64 q2 = detail::checked_mul(q, q, "hadamard");
  const u64 q3 = detail::checked_mul(q2, q, "hadamard");
  witness.bound = detail::hadamard_bound(witness.input, q);

  std::vector<u64> letter_cost(a.letters().size, q2);
  for (const auto& t : a.transitions()) letter_cost[t.letter] += detail::leaf_cost(t.weight) - 1;

  detail::FoldingBuilder fb(p);
  std::vector<std::shared_ptr<const Block>> letter_block(a.letters().size);
  auto input_block = [&](Var y) {
    if (letter_block[y]) return letter_block[y];
    auto blk = std::make_shared<Block>(q);
    for (std::size_t idx : a.on_letter(y)) {
      const Transition& t = a.transitions()[idx];
      if (t.weight.is_zero()) continue;
      NodeId node;
      if (t.weight.kind == Weight::Kind::kScalar) {
        node = fb.constant(t.weight.coeff);
      } else {
        node = fb.input(t.weight.var);
        if (t.weight.coeff != 1) node = fb.mul(fb.constant(t.weight.coeff), node);
      }
      (*blk)[t.from].emplace_back(static_cast<std::uint32_t>(t.to), node);
    }
    for (auto& row : *blk) std::sort(row.begin(), row.end());
    letter_block[y] = blk;
    return letter_block[y];
  };

  const auto live = reachable(c);
  std::vector<std::size_t> uses(c.size(), 0);
  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.nodes()[id];
    if (live[id] && n.is_gate()) {
      ++uses[n.left()];
      ++uses[n.right()];
    }
  }

  std::vector<std::shared_ptr<const Block>> blocks(c.size());
  std::vector<std::vector<NodeId>> acc(q);
  std::vector<std::uint32_t> touched;
  u128 prefold = 0;

  for (NodeId id = 0; id < c.size(); ++id) {
    const Node& n = c.nodes()[id];
    switch (n.gate) {
      case Gate::kInput: prefold += letter_cost[n.var()]; break;
      case Gate::kConst: prefold += q2; break;
      case Gate::kAdd: prefold += q2; break;
      case Gate::kMul: prefold += static_cast<u128>(q3) + static_cast<u128>(q2) * (q - 1); break;
    }
    if (!live[id]) continue;

    if (n.gate == Gate::kInput) {
      blocks[id] = input_block(n.var());
    } else if (n.gate == Gate::kConst) {
      auto blk = std::make_shared<Block>(q);
      if (n.value() != 0) {
        const NodeId k = fb.constant(n.value());
        for (std::size_t i = 0; i < q; ++i) (*blk)[i].emplace_back(static_cast<std::uint32_t>(i), k);
      }
      blocks[id] = std::move(blk);
    } else if (n.gate == Gate::kAdd) {
      const Block& L = *blocks[n.left()];
      const Block& R = *blocks[n.right()];
      auto blk = std::make_shared<Block>(q);
      for (std::size_t i = 0; i < q; ++i) {
        const BlockRow& lr = L[i];
        const BlockRow& rr = R[i];
        BlockRow& out = (*blk)[i];
        std::size_t x = 0, z = 0;
        while (x < lr.size() || z < rr.size()) {
          if (z == rr.size() || (x < lr.size() && lr[x].first < rr[z].first)) {
            out.push_back(lr[x++]);
          } else if (x == lr.size() || rr[z].first < lr[x].first) {
            out.push_back(rr[z++]);
          } else {
            if (auto s = fb.add(lr[x].second, rr[z].second)) out.emplace_back(lr[x].first, *s);
            ++x;
            ++z;
          }
        }
      }
      blocks[id] = std::move(blk);
    } else {
      const bool forward = order == ProductOrder::kLeftRight;
      const Block& L = *blocks[forward ? n.left() : n.right()];
      const Block& R = *blocks[forward ? n.right() : n.left()];
      auto blk = std::make_shared<Block>(q);
      for (std::size_t i = 0; i < q; ++i) {
        for (const auto& [k, lnode] : L[i]) {
          for (const auto& [j, rnode] : R[k]) {
            if (acc[j].empty()) touched.push_back(j);
            acc[j].push_back(fb.mul(lnode, rnode));
          }
        }
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t j : touched) {
          std::optional<NodeId> sum;
          for (NodeId t : acc[j]) sum = sum ? fb.add(*sum, t) : std::optional<NodeId>(t);
          // A folded-away partial sum restarts the chain with the next product.
          if (sum) (*blk)[i].emplace_back(j, *sum);
          acc[j].clear();
        }
        touched.clear();
      }
      blocks[id] = std::move(blk);
    }

    if (n.is_gate()) {
      for (NodeId ch : {n.left(), n.right()}) {
        if (--uses[ch] == 0 && ch != c.output()) blocks[ch].reset();
      }
    }
  }
  witness.prefold_total = prefold;

  std::optional<NodeId> out;
  for (const auto& [j, node] : (*blocks[c.output()])[a.start()]) {
    if (j == a.accept()) out = node;
  }
  std::vector<Node> nodes = fb.release();
  NodeId out_id;
  if (out) {
    out_id = *out;
  } else {
    nodes.push_back(Node::constant(0));
    out_id = nodes.size() - 1;
  }
  Circuit result = compact(Circuit(c.name() + "_h", a.xvars(), p, std::move(nodes), out_id));
  witness.output = size_report(result);
  return {std::move(result), witness};
}

/// hadamard_circuit restricted to the blocks rows actually reachable from the
/// start row of the output. `A` is a WeightedAutomaton or ImplicitDecoder; a
/// row is requested from A only when a product needs it, so automata too large
/// to list are fine as long as the reachable rows are small. prefold_total
/// counts the nodes this construction requests before folding.
template <typename A>
HadamardResult hadamard_circuit_on_demand(const Circuit& c, const A& a, ProductOrder order = ProductOrder::kLeftRight) {
  require_valid(c);
  if (c.alphabet().size != a.letters().size) throw MismatchError("circuit alphabet does not match automaton letters");
  if (!(c.modulus() == a.modulus())) throw MismatchError("moduli differ");
  const std::size_t q = a.states();
  if (q > std::numeric_limits<std::uint32_t>::max()) throw BudgetExceeded("too many automaton states");
  const Modulus p = c.modulus();
  using detail::BlockRow;

  HadamardWitness witness;
  witness.input = size_report(c);
  witness.states = q;
  witness.bound = detail::hadamard_bound(witness.input, q);

  struct Key {
    NodeId id;
    StateId row;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return std::hash<NodeId>{}(k.id) * 0x9E3779B97F4A7C15ULL ^ k.row; }
  };
  std::unordered_map<Key, BlockRow, KeyHash> rows;
  detail::FoldingBuilder fb(p);
  u128 prefold = 0;
  std::vector<std::pair<StateId, Weight>> scratch;
  std::vector<std::vector<NodeId>> acc;
  std::unordered_map<std::uint32_t, std::size_t> slot;

  auto leaf_row = [&](const Node& n, StateId row) {
    BlockRow out;
    if (n.gate == Gate::kConst) {
      ++prefold;
      if (n.value() != 0) out.emplace_back(static_cast<std::uint32_t>(row), fb.constant(n.value()));
      return out;
    }
    scratch.clear();
    a.out(row, n.var(), scratch);
    for (const auto& [to, w] : scratch) {
      prefold += detail::leaf_cost(w);
      if (w.is_zero()) continue;
      NodeId node;
      if (w.kind == Weight::Kind::kScalar) {
        node = fb.constant(w.coeff);
      } else {
        node = fb.input(w.var);
        if (w.coeff != 1) node = fb.mul(fb.constant(w.coeff), node);
      }
      out.emplace_back(static_cast<std::uint32_t>(to), node);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  // Iterative: a row is computed once every row it depends on is available.
  std::vector<Key> stack{{c.output(), a.start()}};
  while (!stack.empty()) {
    const Key k = stack.back();
    if (rows.count(k) != 0) {
      stack.pop_back();
      continue;
    }
    const Node& n = c.node(k.id);
    if (!n.is_gate()) {
      rows.emplace(k, leaf_row(n, k.row));
      stack.pop_back();
      continue;
    }
    if (n.gate == Gate::kAdd) {
      const Key l{n.left(), k.row}, r{n.right(), k.row};
      const bool have_l = rows.count(l) != 0, have_r = rows.count(r) != 0;
      if (!have_l || !have_r) {
        if (!have_l) stack.push_back(l);
        if (!have_r) stack.push_back(r);
        continue;
      }
      const BlockRow& lr = rows.at(l);
      const BlockRow& rr = rows.at(r);
      BlockRow out;
      std::size_t x = 0, z = 0;
      while (x < lr.size() || z < rr.size()) {
        if (z == rr.size() || (x < lr.size() && lr[x].first < rr[z].first)) {
          out.push_back(lr[x++]);
        } else if (x == lr.size() || rr[z].first < lr[x].first) {
          out.push_back(rr[z++]);
        } else {
          ++prefold;
          if (auto sum = fb.add(lr[x].second, rr[z].second)) out.emplace_back(lr[x].first, *sum);
          ++x;
          ++z;
        }
      }
      rows.emplace(k, std::move(out));
      stack.pop_back();
      continue;
    }
    const bool forward = order == ProductOrder::kLeftRight;
    const NodeId first = forward ? n.left() : n.right();
    const NodeId second = forward ? n.right() : n.left();
    const Key fk{first, k.row};
    if (rows.count(fk) == 0) {
      stack.push_back(fk);
      continue;
    }
    bool missing = false;
    for (const auto& [col, unused] : rows.at(fk)) {
      const Key sk{second, col};
      if (rows.count(sk) == 0) {
        stack.push_back(sk);
        missing = true;
      }
    }
    if (missing) continue;
    std::vector<std::uint32_t> cols;
    for (const auto& [col, lnode] : rows.at(fk)) {
      for (const auto& [j, rnode] : rows.at(Key{second, col})) {
        ++prefold;
        auto [it, fresh] = slot.try_emplace(j, acc.size());
        if (fresh) {
          acc.emplace_back();
          cols.push_back(j);
        }
        acc[it->second].push_back(fb.mul(lnode, rnode));
      }
    }
    std::sort(cols.begin(), cols.end());
    BlockRow out;
    for (std::uint32_t j : cols) {
      std::optional<NodeId> sum;
      for (NodeId t : acc[slot.at(j)]) {
        if (sum) ++prefold;
        sum = sum ? fb.add(*sum, t) : std::optional<NodeId>(t);
      }
      if (sum) out.emplace_back(j, *sum);
    }
    acc.clear();
    slot.clear();
    rows.emplace(k, std::move(out));
    stack.pop_back();
  }
  witness.prefold_total = prefold;

  std::optional<NodeId> out;
  for (const auto& [j, node] : rows.at(Key{c.output(), a.start()})) {
    if (j == a.accept()) out = node;
  }
  rows.clear();
  std::vector<Node> nodes = fb.release();
  NodeId out_id;
  if (out) {
    out_id = *out;
  } else {
    nodes.push_back(Node::constant(0));
    out_id = nodes.size() - 1;
    ++witness.prefold_total;
  }
  Circuit result = compact(Circuit(c.name() + "_h", a.xvars(), p, std::move(nodes), out_id));
  witness.output = size_report(result);
  return {std::move(result), witness};
}

}  // namespace nclift
