#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dstree {

// Malformed input, violated precondition, failed validation.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A resource cap was hit before the computation could finish.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordinals below epsilon_0 in Cantor normal form:
///   w^e1*c1 + ... + w^ek*ck   with e1 > e2 > ... > ek and every ci >= 1.
/// The zero ordinal is the empty term list. The canonical term list is the
/// representation, so structural equality is ordinal equality.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;
  Ordinal(std::uint64_t n);  // naturals convert implicitly

  static Ordinal omega();
  // w^exponent * coefficient (zero coefficient yields the zero ordinal)
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coefficient = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_natural() const;
  std::uint64_t as_natural() const;  // throws input_error when infinite
  const std::vector<Term>& terms() const { return terms_; }

  // Ordinal sum; not commutative (1 + w == w).
  Ordinal plus(const Ordinal& rhs) const;
  // Sum of k copies of *this. Coefficient overflow is an error, not wraparound.
  Ordinal times_natural(std::uint64_t k) const;

  std::string str() const;

  /// Parses the textual form:
  ///   ordinal := "0" | term ("+" term)*
  ///   term    := nat | "w" power? coeff?
  ///   power   := "^" "(" ordinal ")" | "^" nat
  ///   coeff   := "*" nat
  ///   nat     := [1-9][0-9]*
  /// With strict=true only the canonical spelling is accepted; otherwise the
  /// terms are summed left to right, which normalises the value.
  static Ordinal parse(std::string_view text, bool strict = true);

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coefficient = 1;
};

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return a.plus(b); }

}  // namespace dstree
