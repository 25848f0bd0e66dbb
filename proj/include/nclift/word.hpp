#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "nclift/errors.hpp"

namespace nclift {

using Var = std::uint64_t;
using Letters = std::vector<Var>;

/// A named finite set of noncommuting variables, indexed 0..size-1.
struct Alphabet {
  std::string name;
  std::uint64_t size = 0;

  Alphabet() = default;
  Alphabet(std::string n, std::uint64_t s) : name(std::move(n)), size(s) {
    if (size == 0) throw InvalidArgument("alphabet '" + name + "' must be non-empty");
    if (name.empty() || std::isalpha(static_cast<unsigned char>(name.front())) == 0) {
      throw InvalidArgument("alphabet name must start with a letter: '" + name + "'");
    }
  }

  bool contains(Var v) const { return v < size; }

  /// Lowercase token prefix used by the text formats (`x5`, `y1`).
  char letter_prefix() const { return static_cast<char>(std::tolower(static_cast<unsigned char>(name.front()))); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

inline void require_same(const Alphabet& a, const Alphabet& b) {
  if (!(a == b)) {
    throw MismatchError("alphabet mismatch: " + a.name + "[" + std::to_string(a.size) + "] vs " + b.name + "[" +
                        std::to_string(b.size) + "]");
  }
}

/// Shorter words first, then lexicographic by index.
struct LengthLexLess {
  bool operator()(const Letters& a, const Letters& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// A monomial: a finite sequence of variable indices over one alphabet.
class Word {
 public:
  Word() = default;
  explicit Word(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  Word(Alphabet alphabet, Letters letters) : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
    for (Var v : letters_) {
      if (!alphabet_.contains(v)) {
        throw InvalidArgument("letter " + std::to_string(v) + " out of range for alphabet " + alphabet_.name);
      }
    }
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const Letters& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Var operator[](std::size_t i) const { return letters_[i]; }

  std::string to_string() const {
    if (letters_.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i != 0) out += ' ';
      out += alphabet_.letter_prefix();
      out += std::to_string(letters_[i]);
    }
    return out;
  }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  Alphabet alphabet_;
  Letters letters_;
};

inline Word word_concat(const Word& u, const Word& v) {
  require_same(u.alphabet(), v.alphabet());
  Letters out = u.letters();
  out.insert(out.end(), v.letters().begin(), v.letters().end());
  return Word(u.alphabet(), std::move(out));
}

}  // namespace nclift
