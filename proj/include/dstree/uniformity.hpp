#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dstree/ds_tree.hpp"
#include "dstree/similarity.hpp"
#include "dstree/tree_embed.hpp"

namespace dstree {

/// Domain policy of a colouring: all tuples of size at most the cap
/// (including the empty tuple), or exactly the cap.
enum class Arity { up_to, exact };

/// All tuples of the tree under the policy, in canonical order.
std::vector<Tuple> enumerate_tuples(const Tree& t, Arity policy, std::size_t arity);

class Colouring {
 public:
  Colouring() = default;

  static Colouring from_function(Tree base, Arity policy, std::size_t arity,
                                 std::uint64_t palette,
                                 const std::function<std::uint64_t(const Tuple&)>& fn);
  /// Validates that the table covers the domain exactly and stays inside the
  /// palette.
  static Colouring from_table(Tree base, Arity policy, std::size_t arity,
                              std::uint64_t palette,
                              std::map<Tuple, std::uint64_t, TupleLess> table);

  const Tree& base() const { return base_; }
  Arity policy() const { return policy_; }
  std::size_t arity() const { return arity_; }
  std::uint64_t palette() const { return palette_; }
  const std::map<Tuple, std::uint64_t, TupleLess>& table() const { return table_; }

  std::uint64_t at(const Tuple& u) const;  // throws input_error outside the domain

  /// File form: "palette N", "arity upto:K|exact:K", then "TUPLE;colour"
  /// lines in canonical order. A missing arity line means up_to the largest
  /// size present. The companion tree fixes the expected domain.
  static Colouring load(std::istream& in, const Tree& base);
  void save(std::ostream& out) const;

 private:
  Tree base_;
  Arity policy_ = Arity::up_to;
  std::size_t arity_ = 0;
  std::uint64_t palette_ = 1;
  std::map<Tuple, std::uint64_t, TupleLess> table_;
};

/// Deterministic pseudo-random colouring (mt19937_64 stream, colours taken
/// modulo the palette).
Colouring random_colouring(const Tree& t, Arity policy, std::size_t arity,
                           std::uint64_t palette, std::uint64_t seed);

struct UniformReport {
  bool ok = true;
  Tuple first, second;  // witness pair when not ok
  std::uint64_t pairs_checked = 0;
  std::string describe() const;
  explicit operator bool() const { return ok; }
};

/// Equal colours on similar tuples.
UniformReport is_uniform(const Colouring& c);
/// Equal colours on tuples that differ only in the last element, provided the
/// two last elements have equal length and equally long intersections with
/// the shared predecessor.
UniformReport is_end_uniform(const Colouring& c);
/// Equal colours on similar tuples that share all but their last n elements;
/// n must be positive.
UniformReport is_n_end_uniform(const Colouring& c, std::size_t n);

/// Colours of the one-element extensions of a tuple, keyed by the similarity
/// class of the extended tuple. Classes with no extension are absent.
using DerivedVector = std::map<std::uint64_t, std::uint64_t>;

/// The derived table of an end-uniform colouring: defined on tuples of size
/// below the cap. Throws input_error (with a witness) when c is not
/// end-uniform; policy must be up_to with a positive cap.
std::map<Tuple, DerivedVector, TupleLess> derived_colouring(const Colouring& c);

using u128 = unsigned __int128;
std::string u128_str(u128 v);

/// Injective code of a derived vector: the support is ranked as a
/// combination, the values are chained with the pairing function, and the
/// two are paired with the support size. Throws budget_error when the code
/// leaves 128 bits.
u128 encode_vector(const DerivedVector& v);
DerivedVector decode_vector(u128 code);

/// Pulls a colouring back along an embedding of some tree into c's base;
/// the map must pass check_embedding.
Colouring pushforward(const TreeMap& f, const Colouring& c);

/// One stepping-up stage: derived vectors, encoded, then renumbered densely
/// by first appearance in canonical tuple order. The result has cap one
/// lower and palette equal to the number of distinct vectors.
Colouring derived_encoded_colouring(const Colouring& c);

}  // namespace dstree
