#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "nclift/circuit.hpp"

namespace nclift {

struct RandomCircuitSpec {
  Alphabet alphabet;
  Modulus p;
  std::size_t max_degree = 4;
  std::size_t max_nodes = 20;
  std::size_t min_nodes = 5;
  double const_probability = 0.1;
};

/// Seeded random DAG. Starts from a few leaves, adds gates whose children
/// favour recent nodes, then folds unused nodes into the output. The syntactic
/// degree of every node stays within max_degree; the output is the last node.
template <typename Rng>
Circuit random_circuit(const RandomCircuitSpec& spec, Rng& rng, std::string name = "rand") {
  if (spec.max_nodes < 1 || spec.min_nodes > spec.max_nodes) throw InvalidArgument("bad random circuit size range");
  CircuitBuilder b(std::move(name), spec.alphabet, spec.p);
  std::vector<std::size_t> deg;
  std::uniform_int_distribution<u64> var(0, spec.alphabet.size - 1);
  std::uniform_int_distribution<u64> coeff(0, spec.p.value() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t target = std::uniform_int_distribution<std::size_t>(spec.min_nodes, spec.max_nodes)(rng);

  auto leaf = [&] {
    if (spec.max_degree == 0 || unit(rng) < spec.const_probability) {
      b.constant(coeff(rng));
      deg.push_back(0);
    } else {
      b.input(var(rng));
      deg.push_back(1);
    }
  };
  // Picks a node index, biased towards the most recent ones.
  auto pick = [&] {
    const std::size_t n = deg.size();
    const std::size_t window = std::min<std::size_t>(n, 6);
    if (unit(rng) < 0.6) return n - 1 - std::uniform_int_distribution<std::size_t>(0, window - 1)(rng);
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  const std::size_t leaves = std::min<std::size_t>(target, std::max<std::size_t>(1, target / 3));
  for (std::size_t i = 0; i < leaves; ++i) leaf();
  // The last quarter of the budget folds otherwise unused nodes into the output.
  const std::size_t grow_until = std::max(deg.size(), target - target / 4);
  std::vector<bool> used(target, false);
  while (deg.size() < grow_until) {
    const double r = unit(rng);
    if (r < 0.15) {
      leaf();
      continue;
    }
    const std::size_t l = pick();
    const std::size_t rr = pick();
    used[l] = used[rr] = true;
    if (r < 0.6 && deg[l] + deg[rr] <= spec.max_degree) {
      b.mul(l, rr);
      deg.push_back(deg[l] + deg[rr]);
    } else {
      b.add(l, rr);
      deg.push_back(std::max(deg[l], deg[rr]));
    }
  }
  std::size_t out = deg.size() - 1;
  for (std::size_t i = out; i-- > 0 && deg.size() < target;) {
    if (used[i]) continue;
    used[i] = used[out] = true;
    const bool can_mul = deg[out] + deg[i] <= spec.max_degree;
    if (can_mul && unit(rng) < 0.3) {
      b.mul(out, i);
      deg.push_back(deg[out] + deg[i]);
    } else {
      b.add(out, i);
      deg.push_back(std::max(deg[out], deg[i]));
    }
    out = deg.size() - 1;
  }
  return std::move(b).build();
}

}  // namespace nclift
