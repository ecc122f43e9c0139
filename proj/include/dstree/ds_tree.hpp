#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dstree/ordinal.hpp"

namespace dstree {

/// A finite, strictly decreasing sequence of ordinals. Immutable once built.
class DecSeq {
 public:
  DecSeq() = default;
  explicit DecSeq(std::vector<Ordinal> entries);  // validates strict descent

  /// Text form: comma-separated ordinal literals, "()" for the empty sequence.
  static DecSeq parse(std::string_view text);
  std::string str() const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Ordinal& operator[](std::size_t i) const { return entries_[i]; }
  const Ordinal& last() const { return entries_.back(); }
  const std::vector<Ordinal>& entries() const { return entries_; }

  DecSeq prefix(std::size_t n) const;
  DecSeq extended(const Ordinal& next) const;
  bool is_prefix_of(const DecSeq& other) const;  // non-strict

  friend bool operator==(const DecSeq& a, const DecSeq& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Ordinal> entries_;
};

/// Longest common prefix.
DecSeq meet(const DecSeq& a, const DecSeq& b);

/// True when every entry of seq lies below bound (decreasing, so the first
/// entry decides). The empty sequence qualifies for every bound.
bool member_below(const Ordinal& bound, const DecSeq& seq);

/// A finite, nonempty, prefix-closed set of decreasing sequences.
/// Nodes are held sorted by the extension-first lexicographic order, so two
/// trees are equal exactly when their node lists coincide.
class Tree {
 public:
  Tree() = default;  // inert placeholder until assigned from a factory

  static Tree from_nodes(std::vector<DecSeq> nodes);  // throws input_error
  // Diagnostic form: description of the first violation, or nullopt if fine.
  static std::optional<std::string> check_nodes(const std::vector<DecSeq>& nodes);

  /// File form: one node per line, any order; "()" is the root.
  static Tree load(std::istream& in);
  void save(std::ostream& out) const;

  const std::vector<DecSeq>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t depth() const;

  bool contains(const DecSeq& seq) const { return index_of(seq).has_value(); }
  std::optional<std::size_t> index_of(const DecSeq& seq) const;
  std::size_t root_index() const { return root_; }

  // Child indices, ascending in the child's final entry.
  const std::vector<std::size_t>& children_of(std::size_t index) const {
    return children_[index];
  }
  std::vector<std::size_t> level(std::size_t length) const;

  friend bool operator==(const Tree& a, const Tree& b) { return a.nodes_ == b.nodes_; }

 private:
  std::vector<DecSeq> nodes_;
  std::vector<std::vector<std::size_t>> children_;
  std::size_t root_ = 0;
};

inline constexpr std::size_t default_node_budget = std::size_t{1} << 22;

/// The full tree of strictly decreasing sequences over {0, ..., n-1}:
/// 2^n nodes, one per subset. Guarded by the node budget.
Tree full_tree(unsigned n, std::size_t node_budget = default_node_budget);

/// Prefixes of stem plus stem followed by each node of t. Every grafted node
/// must still be strictly decreasing at the junction.
Tree graft(const DecSeq& stem, const Tree& t);

}  // namespace dstree
