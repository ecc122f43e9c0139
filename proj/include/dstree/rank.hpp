#pragma once

#include <cstdint>
#include <vector>

#include "dstree/ds_tree.hpp"
#include "dstree/ordinal.hpp"
#include "dstree/tree_embed.hpp"

namespace dstree {

/// Rank of a tree node with splitting parameter mu: the rank is at least
/// a+1 exactly when at least mu children have rank at least a. On a finite
/// tree every rank is a natural number; -1 marks nodes outside the tree.
using RankValue = std::int64_t;

/// Ranks of every node, indexed like t.nodes(). mu must be positive.
std::vector<RankValue> rank_all(const Tree& t, std::uint64_t mu);

RankValue rank_of(const Tree& t, std::uint64_t mu, const DecSeq& node);

/// min(lambda, rank). The cap may be any ordinal; the result is still a
/// natural number (or -1 for absent nodes).
RankValue reduced_rank(const Tree& t, std::uint64_t mu, const Ordinal& lambda,
                       const DecSeq& node);

/// Builds an embedding of graft(eta, full_tree(alpha)) into t that fixes
/// every prefix of eta. Requires eta in t, rank_of(t, mu, eta) >= alpha and
/// mu >= alpha; chooses the least admissible child at every step, so the
/// result is canonical.
TreeMap rank_embed(const Tree& t, std::uint64_t mu, const DecSeq& eta,
                   unsigned alpha, std::size_t node_budget = default_node_budget);

}  // namespace dstree
