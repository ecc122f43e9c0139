#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dstree/ds_tree.hpp"

namespace dstree {

/// A finite map between node sets, stored as pairs sorted by domain node.
/// Plain container: candidate maps need not be embeddings, or even injective.
class TreeMap {
 public:
  TreeMap() = default;
  explicit TreeMap(std::vector<std::pair<DecSeq, DecSeq>> pairs);  // rejects duplicate keys

  const std::vector<std::pair<DecSeq, DecSeq>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  std::optional<DecSeq> try_apply(const DecSeq& node) const;
  const DecSeq& apply(const DecSeq& node) const;  // throws input_error when absent

  std::vector<DecSeq> domain_nodes() const;  // canonical order
  std::vector<DecSeq> image_nodes() const;   // in domain order

  /// Composition: apply this map, then next. Every image must be in next's
  /// domain.
  TreeMap then(const TreeMap& next) const;

  /// File form: lines "domain;image" in canonical domain order.
  static TreeMap load(std::istream& in);
  void save(std::ostream& out) const;

  friend bool operator==(const TreeMap& a, const TreeMap& b) {
    return a.pairs_ == b.pairs_;
  }

 private:
  std::vector<std::pair<DecSeq, DecSeq>> pairs_;
};

struct EmbedReport {
  bool ok = true;
  std::string violation;  // empty when ok
  explicit operator bool() const { return ok; }
};

/// Full check: f total on t1 with image in t2, preserving level, the proper
/// prefix relation, and the prefix-first lexicographic order on every ordered
/// pair. The first violation found is reported.
EmbedReport check_embedding(const TreeMap& f, const Tree& t1, const Tree& t2);
bool is_embedding(const TreeMap& f, const Tree& t1, const Tree& t2);

/// The reduced check: totality, image membership, level and prefix
/// preservation are preconditions (input_error when violated); only sibling
/// image pairs are then tested, under the intersection order. Agrees with
/// check_embedding whenever the preconditions hold.
EmbedReport sibling_check(const TreeMap& f, const Tree& t1, const Tree& t2);

/// Enumerates embeddings of shape into host in a fixed canonical order:
/// images of the root's children are chosen first (ascending combinations of
/// host children), then each deeper sibling group in turn. The callback stops
/// the walk by returning false.
void for_each_copy_of(const Tree& shape, const Tree& host,
                      const std::function<bool(const TreeMap&)>& visit);

std::vector<TreeMap> find_copies_of(const Tree& shape, const Tree& host,
                                    std::size_t limit = std::numeric_limits<std::size_t>::max());

/// Copies of the full tree on m entries inside host.
std::vector<TreeMap> find_copies(const Tree& host, unsigned m,
                                 std::size_t limit = std::numeric_limits<std::size_t>::max(),
                                 std::size_t node_budget = default_node_budget);

}  // namespace dstree
