#pragma once

// Shorthand shared by the test binaries.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "dstree/ds_tree.hpp"
#include "dstree/similarity.hpp"

inline dstree::DecSeq seq(std::string_view text) { return dstree::DecSeq::parse(text); }
inline dstree::Tuple tup(std::string_view text) { return dstree::Tuple::parse(text); }

// Node lists of every subtree rooted at `at` (each contains `at` itself):
// the cross product over the children of "absent or any subtree below".
inline std::vector<std::vector<dstree::DecSeq>> rooted_subtrees(const dstree::Tree& host,
                                                                std::size_t at) {
  std::vector<std::vector<dstree::DecSeq>> out;
  out.push_back({host.nodes()[at]});
  for (std::size_t kid : host.children_of(at)) {
    auto below = rooted_subtrees(host, kid);
    std::vector<std::vector<dstree::DecSeq>> next;
    for (const auto& have : out) {
      next.push_back(have);
      for (const auto& extra : below) {
        auto with = have;
        with.insert(with.end(), extra.begin(), extra.end());
        next.push_back(std::move(with));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Every nonempty prefix-closed subset of host, as trees, in a fixed order.
inline std::vector<dstree::Tree> all_subtrees(const dstree::Tree& host) {
  std::vector<dstree::Tree> out;
  for (auto& nodes : rooted_subtrees(host, host.root_index()))
    out.push_back(dstree::Tree::from_nodes(std::move(nodes)));
  return out;
}
