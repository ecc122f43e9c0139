#include "dstree/ordinal.hpp"

#include <limits>

namespace dstree {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw input_error("coefficient overflow in ordinal sum");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw input_error("coefficient overflow in ordinal product");
  return r;
}

}  // namespace

Ordinal::Ordinal(std::uint64_t n) {
  if (n > 0) terms_.push_back(Term{Ordinal(), n});
}

Ordinal Ordinal::omega() { return omega_power(Ordinal(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coefficient) {
  Ordinal r;
  if (coefficient > 0) r.terms_.push_back(Term{exponent, coefficient});
  return r;
}

bool Ordinal::is_natural() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

std::uint64_t Ordinal::as_natural() const {
  if (terms_.empty()) return 0;
  if (!is_natural()) throw input_error("ordinal " + str() + " is not a natural number");
  return terms_[0].coefficient;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = a.terms_[i].exponent <=> b.terms_[i].exponent;
    if (c != 0) return c;
    auto d = a.terms_[i].coefficient <=> b.terms_[i].coefficient;
    if (d != 0) return d;
  }
  return a.terms_.size() <=> b.terms_.size();
}

Ordinal Ordinal::plus(const Ordinal& rhs) const {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return rhs;
  const Ordinal& e = rhs.terms_[0].exponent;
  Ordinal out;
  // Terms with exponent below the head of rhs are absorbed.
  for (const Term& t : terms_) {
    if (t.exponent < e) break;
    out.terms_.push_back(t);
  }
  if (!out.terms_.empty() && out.terms_.back().exponent == e) {
    out.terms_.back().coefficient =
        checked_add(out.terms_.back().coefficient, rhs.terms_[0].coefficient);
    out.terms_.insert(out.terms_.end(), rhs.terms_.begin() + 1, rhs.terms_.end());
  } else {
    out.terms_.insert(out.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  }
  return out;
}

Ordinal Ordinal::times_natural(std::uint64_t k) const {
  if (k == 0 || is_zero()) return Ordinal();
  // Only the leading coefficient multiplies; the tail survives one copy.
  Ordinal out = *this;
  out.terms_[0].coefficient = checked_mul(out.terms_[0].coefficient, k);
  return out;
}

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += '+';
    const Term& t = terms_[i];
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (!(t.exponent == Ordinal(1))) {
      out += '^';
      if (t.exponent.is_natural())
        out += std::to_string(t.exponent.as_natural());
      else
        out += '(' + t.exponent.str() + ')';
    }
    if (t.coefficient != 1) out += '*' + std::to_string(t.coefficient);
  }
  return out;
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw input_error("ordinal parse error at position " + std::to_string(pos) +
                      ": " + what);
  }

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  std::uint64_t nat() {
    if (done() || peek() < '1' || peek() > '9') fail("expected a nonzero digit");
    std::uint64_t v = 0;
    while (!done() && peek() >= '0' && peek() <= '9') {
      if (v > (std::numeric_limits<std::uint64_t>::max() - 9) / 10)
        fail("number literal too large");
      v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
      ++pos;
    }
    return v;
  }

  Ordinal term() {
    if (done()) fail("expected a term");
    if (peek() != 'w') return Ordinal(nat());
    ++pos;
    Ordinal exponent(1);
    if (!done() && peek() == '^') {
      ++pos;
      if (done()) fail("expected an exponent");
      if (peek() == '(') {
        ++pos;
        exponent = ordinal();
        if (done() || peek() != ')') fail("expected ')'");
        ++pos;
      } else {
        exponent = Ordinal(nat());
      }
    }
    std::uint64_t coefficient = 1;
    if (!done() && peek() == '*') {
      ++pos;
      coefficient = nat();
    }
    return Ordinal::omega_power(exponent, coefficient);
  }

  Ordinal ordinal() {
    if (!done() && peek() == '0') {
      ++pos;
      return Ordinal();
    }
    Ordinal sum = term();
    while (!done() && peek() == '+') {
      ++pos;
      sum = sum.plus(term());
    }
    return sum;
  }
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text, bool strict) {
  Parser p{text};
  Ordinal value = p.ordinal();
  if (!p.done()) p.fail("trailing input");
  if (strict && value.str() != text)
    throw input_error("ordinal literal '" + std::string(text) +
                      "' is not canonical (expected '" + value.str() + "')");
  return value;
}

}  // namespace dstree
