#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "nclift/errors.hpp"
#include "nclift/polynomial.hpp"

namespace nclift {

/// Dense q x q matrix over a ring element type R (Scalar or NCPolynomial).
/// R must provide +, *, == and the free functions zero_like/one_like/scale.
template <typename R>
class SquareMatrix {
 public:
  SquareMatrix() = default;

  /// q x q matrix filled with `zero`.
  SquareMatrix(std::size_t q, const R& zero) : q_(q), data_(q * q, zero) {
    if (q == 0) throw InvalidArgument("matrix dimension must be positive");
  }

  static SquareMatrix identity(std::size_t q, const R& zero, const R& one) {
    SquareMatrix m(q, zero);
    for (std::size_t i = 0; i < q; ++i) m(i, i) = one;
    return m;
  }

  /// Square matrix from a row-major initializer; all rows must have length q.
  static SquareMatrix from_rows(const std::vector<std::vector<R>>& rows) {
    if (rows.empty()) throw InvalidArgument("matrix dimension must be positive");
    SquareMatrix m(rows.size(), zero_like(rows.front().front()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw InvalidArgument("matrix rows must have length q");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t dim() const { return q_; }
  R& operator()(std::size_t i, std::size_t j) { return data_[i * q_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return data_[i * q_ + j]; }

  SquareMatrix operator+(const SquareMatrix& o) const {
    check(o);
    SquareMatrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + o.data_[k];
    return out;
  }

  /// Ordered product: (this * o)(i,j) = sum_k this(i,k) * o(k,j).
  SquareMatrix operator*(const SquareMatrix& o) const {
    check(o);
    SquareMatrix out(q_, zero_like(data_.front()));
    for (std::size_t i = 0; i < q_; ++i) {
      for (std::size_t k = 0; k < q_; ++k) {
        const R& a = (*this)(i, k);
        for (std::size_t j = 0; j < q_; ++j) out(i, j) = out(i, j) + a * o(k, j);
      }
    }
    return out;
  }

  SquareMatrix scaled(Scalar c) const {
    SquareMatrix out = *this;
    for (auto& e : out.data_) e = scale(c, e);
    return out;
  }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) { return a.q_ == b.q_ && a.data_ == b.data_; }

 private:
  void check(const SquareMatrix& o) const {
    if (q_ != o.q_) {
      throw MismatchError("matrix dimension mismatch: " + std::to_string(q_) + " vs " + std::to_string(o.q_));
    }
  }

  std::size_t q_ = 0;
  std::vector<R> data_;
};

template <typename R>
using MatrixPoint = std::map<Var, SquareMatrix<R>>;

/// Value of f at a matrix point, word by word (Horner over each monomial).
template <typename R>
SquareMatrix<R> evaluate(const NCPolynomial& f, const MatrixPoint<R>& point, std::size_t q, const R& zero,
                         const R& one) {
  SquareMatrix<R> acc(q, zero);
  const auto id = SquareMatrix<R>::identity(q, zero, one);
  for (const auto& [w, c] : f.terms()) {
    SquareMatrix<R> t = id;
    for (Var v : w) {
      auto it = point.find(v);
      if (it == point.end()) throw InvalidArgument("variable " + std::to_string(v) + " is unassigned");
      t = t * it->second;
    }
    acc = acc + t.scaled(Scalar(c, f.modulus()));
  }
  return acc;
}

}  // namespace nclift
