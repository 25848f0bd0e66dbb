#pragma once

#include <map>
#include <string>
#include <utility>

#include "nclift/scalar.hpp"
#include "nclift/word.hpp"

namespace nclift {

/// Finitely supported map Word -> Z_p over one alphabet. Zero coefficients are
/// never stored, so equality of term maps is equality of polynomials.
class NCPolynomial {
 public:
  using Terms = std::map<Letters, u64, LengthLexLess>;

  NCPolynomial() = default;
  NCPolynomial(Alphabet alphabet, Modulus p) : alphabet_(std::move(alphabet)), p_(p) {}

  static NCPolynomial constant(const Alphabet& a, Scalar c) {
    NCPolynomial f(a, c.modulus());
    f.add_term(Letters{}, c);
    return f;
  }
  static NCPolynomial one(const Alphabet& a, Modulus p) { return constant(a, Scalar(1, p)); }
  static NCPolynomial variable(const Alphabet& a, Modulus p, Var v) { return monomial(Word(a, {v}), Scalar(1, p)); }
  static NCPolynomial monomial(const Word& w, Scalar c) {
    NCPolynomial f(w.alphabet(), c.modulus());
    f.add_term(w.letters(), c);
    return f;
  }

  const Alphabet& alphabet() const { return alphabet_; }
  Modulus modulus() const { return p_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Max word length in the support; 0 for the zero polynomial.
  std::size_t degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.size(); }

  Scalar coeff(const Letters& w) const {
    auto it = terms_.find(w);
    return Scalar(it == terms_.end() ? 0 : it->second, p_);
  }
  Scalar coeff(const Word& w) const {
    require_same(alphabet_, w.alphabet());
    return coeff(w.letters());
  }

  /// Adds c to the coefficient of w, keeping the canonical form.
  void add_term(const Letters& w, Scalar c) {
    if (!(c.modulus() == p_)) throw MismatchError("coefficient modulus differs from polynomial modulus");
    for (Var v : w) {
      if (!alphabet_.contains(v)) {
        throw InvalidArgument("letter " + std::to_string(v) + " out of range for alphabet " + alphabet_.name);
      }
    }
    accumulate(w, c.value());
  }

  NCPolynomial operator+(const NCPolynomial& g) const {
    check(g);
    NCPolynomial out = *this;
    for (const auto& [w, c] : g.terms_) out.accumulate(w, c);
    return out;
  }

  NCPolynomial operator-() const {
    NCPolynomial out = *this;
    for (auto& [w, c] : out.terms_) c = p_.value() - c;
    return out;
  }

  NCPolynomial operator-(const NCPolynomial& g) const { return *this + (-g); }

  /// Convolution product; [w](f*g) = sum over w = uv of [u]f [v]g.
  NCPolynomial operator*(const NCPolynomial& g) const {
    check(g);
    NCPolynomial out(alphabet_, p_);
    Letters buf;
    for (const auto& [u, cu] : terms_) {
      for (const auto& [v, cv] : g.terms_) {
        buf.assign(u.begin(), u.end());
        buf.insert(buf.end(), v.begin(), v.end());
        out.accumulate(buf, detail::mul_mod(cu, cv, p_.value()));
      }
    }
    return out;
  }

  NCPolynomial scaled(Scalar c) const {
    NCPolynomial out(alphabet_, p_);
    if (c.is_zero()) return out;
    for (const auto& [w, v] : terms_) out.terms_.emplace(w, detail::mul_mod(v, c.value(), p_.value()));
    return out;
  }

  NCPolynomial& operator+=(const NCPolynomial& g) { return *this = *this + g; }
  NCPolynomial& operator*=(const NCPolynomial& g) { return *this = *this * g; }

  friend bool operator==(const NCPolynomial& f, const NCPolynomial& g) {
    return f.alphabet_ == g.alphabet_ && f.p_ == g.p_ && f.terms_ == g.terms_;
  }

  /// Human-readable sum, e.g. `2*x0 x1 + x1`.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += std::to_string(c) + "*" + Word(alphabet_, w).to_string();
    }
    return out;
  }

 private:
  void accumulate(const Letters& w, u64 c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (inserted) return;
    u64 s = it->second + c;
    if (s >= p_.value()) s -= p_.value();
    if (s == 0) {
      terms_.erase(it);
    } else {
      it->second = s;
    }
  }

  void check(const NCPolynomial& g) const {
    require_same(alphabet_, g.alphabet_);
    if (!(p_ == g.p_)) throw MismatchError("polynomial moduli differ");
  }

  Alphabet alphabet_;
  Modulus p_;
  Terms terms_;
};

inline NCPolynomial poly_add(const NCPolynomial& f, const NCPolynomial& g) { return f + g; }
inline NCPolynomial poly_mul(const NCPolynomial& f, const NCPolynomial& g) { return f * g; }
inline Scalar coeff(const NCPolynomial& f, const Word& w) { return f.coeff(w); }

// Ring helpers used by the generic matrix code.
inline Scalar zero_like(const Scalar& s) { return Scalar(0, s.modulus()); }
inline Scalar one_like(const Scalar& s) { return Scalar(1, s.modulus()); }
inline Scalar scale(Scalar c, const Scalar& s) { return c * s; }
inline NCPolynomial zero_like(const NCPolynomial& f) { return NCPolynomial(f.alphabet(), f.modulus()); }
inline NCPolynomial one_like(const NCPolynomial& f) { return NCPolynomial::one(f.alphabet(), f.modulus()); }
inline NCPolynomial scale(Scalar c, const NCPolynomial& f) { return f.scaled(c); }

/// Replaces every variable x_i by subs.at(i); the result lives over `target`.
inline NCPolynomial substitute(const NCPolynomial& f, const std::map<Var, NCPolynomial>& subs,
                               const Alphabet& target) {
  NCPolynomial out(target, f.modulus());
  for (const auto& [w, c] : f.terms()) {
    NCPolynomial term = NCPolynomial::constant(target, Scalar(c, f.modulus()));
    for (Var v : w) {
      auto it = subs.find(v);
      if (it == subs.end()) throw InvalidArgument("no substitution for variable " + std::to_string(v));
      term = term * it->second;
    }
    out += term;
  }
  return out;
}

/// Value of f at a commutative scalar point.
inline Scalar evaluate(const NCPolynomial& f, const std::map<Var, Scalar>& point) {
  Scalar acc(0, f.modulus());
  for (const auto& [w, c] : f.terms()) {
    Scalar t(c, f.modulus());
    for (Var v : w) {
      auto it = point.find(v);
      if (it == point.end()) throw InvalidArgument("variable " + std::to_string(v) + " is unassigned");
      t *= it->second;
    }
    acc += t;
  }
  return acc;
}

}  // namespace nclift
