#include "dstree/rank.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace dstree {

std::vector<RankValue> rank_all(const Tree& t, std::uint64_t mu) {
  if (mu == 0) throw input_error("the splitting parameter must be positive");
  std::vector<std::size_t> order(t.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return t.nodes()[a].size() > t.nodes()[b].size();
  });
  std::vector<RankValue> ranks(t.size(), 0);
  std::vector<RankValue> kid_ranks;
  for (std::size_t i : order) {
    const auto& kids = t.children_of(i);
    if (kids.size() < mu) continue;  // rank stays 0
    kid_ranks.clear();
    for (std::size_t k : kids) kid_ranks.push_back(ranks[k]);
    std::nth_element(kid_ranks.begin(), kid_ranks.begin() + (mu - 1), kid_ranks.end(),
                     std::greater<RankValue>());
    ranks[i] = kid_ranks[mu - 1] + 1;
  }
  return ranks;
}

RankValue rank_of(const Tree& t, std::uint64_t mu, const DecSeq& node) {
  auto idx = t.index_of(node);
  if (!idx) return -1;
  return rank_all(t, mu)[*idx];
}

RankValue reduced_rank(const Tree& t, std::uint64_t mu, const Ordinal& lambda,
                       const DecSeq& node) {
  RankValue r = rank_of(t, mu, node);
  if (r < 0) return r;
  if (lambda < Ordinal(static_cast<std::uint64_t>(r))) {
    return static_cast<RankValue>(lambda.as_natural());  // below a finite rank, so finite
  }
  return r;
}

namespace {

struct RankEmbedder {
  const Tree& t;
  const std::vector<RankValue>& ranks;
  std::vector<std::pair<DecSeq, DecSeq>> pairs;

  // Maps the full tree on beta entries grafted at target into t below the
  // node at index host, which has rank at least beta. For each b < beta a
  // child of rank at least b is picked, scanning children once in ascending
  // order: the requirement only grows, so the scan never needs to back up.
  void place(const DecSeq& target, std::size_t host, unsigned beta) {
    pairs.emplace_back(target, t.nodes()[host]);
    const auto& kids = t.children_of(host);
    std::size_t at = 0;
    for (unsigned b = 0; b < beta; ++b) {
      while (at < kids.size() && ranks[kids[at]] < static_cast<RankValue>(b)) ++at;
      assert(at < kids.size());  // guaranteed by rank >= beta <= mu
      place(target.extended(Ordinal(std::uint64_t{b})), kids[at], b);
      ++at;
    }
  }
};

}  // namespace

TreeMap rank_embed(const Tree& t, std::uint64_t mu, const DecSeq& eta, unsigned alpha,
                   std::size_t node_budget) {
  auto idx = t.index_of(eta);
  if (!idx) throw input_error("node " + eta.str() + " is not in the tree");
  auto ranks = rank_all(t, mu);
  if (ranks[*idx] < static_cast<RankValue>(alpha)) {
    throw input_error("node " + eta.str() + " has rank " + std::to_string(ranks[*idx]) +
                      ", below " + std::to_string(alpha));
  }
  if (mu < alpha) {
    throw input_error("the splitting parameter " + std::to_string(mu) +
                      " is below the requested depth " + std::to_string(alpha));
  }
  // Validates the junction (eta's last entry must exceed every new entry)
  // and the node budget before any walking happens.
  graft(eta, full_tree(alpha, node_budget));
  RankEmbedder emb{t, ranks, {}};
  // Prefixes of the base node stay put.
  for (std::size_t i = 0; i < eta.size(); ++i) {
    emb.pairs.emplace_back(eta.prefix(i), eta.prefix(i));
  }
  emb.place(eta, *idx, alpha);
  return TreeMap(std::move(emb.pairs));
}

}  // namespace dstree
