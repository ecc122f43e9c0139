#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dstree/ds_tree.hpp"

namespace dstree {

/// A finite set of tree nodes, identified with the sequence that lists it in
/// increasing order, where "increasing" is the extension-first lexicographic
/// order (a proper extension precedes its prefix).
class Tuple {
 public:
  Tuple() = default;
  explicit Tuple(std::vector<DecSeq> elems);  // must be strictly increasing

  /// Text form: elements joined by '|'; the empty tuple is written "-".
  static Tuple parse(std::string_view text);
  std::string str() const;

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const DecSeq& operator[](std::size_t i) const { return elems_[i]; }
  const DecSeq& back() const { return elems_.back(); }
  const std::vector<DecSeq>& elems() const { return elems_; }

  Tuple extended(const DecSeq& next) const;  // next must come after back()
  Tuple prefix(std::size_t k) const;

  friend bool operator==(const Tuple& a, const Tuple& b) {
    return a.elems_ == b.elems_;
  }

 private:
  std::vector<DecSeq> elems_;
};

/// Canonical tuple order: shorter tuples first, then elementwise.
struct TupleLess {
  bool operator()(const Tuple& a, const Tuple& b) const;
};

/// What a tuple looks like up to similarity: element lengths, pairwise
/// intersection lengths, and the order the elements take under the
/// prefix-first lexicographic order. perm[r] is the index of the r-th
/// element in that order.
struct SimInvariant {
  std::size_t n = 0;
  std::vector<std::size_t> lengths;
  std::vector<std::vector<std::size_t>> meets;  // n x n, symmetric, diagonal = lengths
  std::vector<std::size_t> perm;

  /// Flat form: n, the lengths, the strict upper triangle of meets row by
  /// row, then perm.
  std::vector<std::uint64_t> serialize() const;
  /// Sum of all serialized entries; the enumeration's primary key.
  std::uint64_t total_size() const;

  /// Shape violations (wrong field sizes, asymmetry, meet exceeding a
  /// length, perm not a permutation), or nothing when well formed.
  static std::optional<std::string> check(const SimInvariant& inv);

  friend bool operator==(const SimInvariant&, const SimInvariant&) = default;
};

SimInvariant invariant_of(const Tuple& u);

bool similar(const Tuple& a, const Tuple& b);
/// Same predicate with the order clause evaluated under the prefix-first
/// lexicographic order instead; agreement with similar() is a test target.
bool similar_by_lex1(const Tuple& a, const Tuple& b);

/// Builds a tuple whose invariant is exactly inv, or nothing when none
/// exists. The witness is canonical for the construction, not minimal.
std::optional<Tuple> realize_invariant(const SimInvariant& inv);

/// Indexing of realizable invariants: ascending total size, ties broken by
/// the serialized form. class_index throws input_error on malformed or
/// unrealizable invariants; class_of_index throws budget_error if the walk
/// to position k grows unreasonably.
std::uint64_t class_index(const SimInvariant& inv);
SimInvariant class_of_index(std::uint64_t k);
std::uint64_t class_index_of(const Tuple& u);

}  // namespace dstree
