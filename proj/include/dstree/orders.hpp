#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <vector>

#include "dstree/ds_tree.hpp"

namespace dstree {

/// The three total orders on decreasing sequences, plus the partial order
/// that is their intersection.
///   lex1: a proper prefix precedes its extensions; otherwise compare the
///         first differing entries.
///   lex2: an extension precedes its proper prefixes; otherwise as lex1.
///   lex3: a proper prefix precedes; at the first difference compare
///         ascending at even depth and descending at odd depth.
///   star: the intersection of lex1 and lex2 (partial).
enum class OrderKind { lex1, lex2, lex3, star };

/// Total comparison for lex1/lex2/lex3. Rejects star (use star_less).
std::strong_ordering seq_compare(OrderKind kind, const DecSeq& a, const DecSeq& b);

bool star_less(const DecSeq& a, const DecSeq& b);  // strict
bool star_le(const DecSeq& a, const DecSeq& b);    // reflexive

struct Lex2Less {
  bool operator()(const DecSeq& a, const DecSeq& b) const {
    return seq_compare(OrderKind::lex2, a, b) < 0;
  }
};

/// Least element under lex2, found by greedy extension: repeatedly append
/// the smallest entry continuing the current stem. No sorting involved.
DecSeq min_lex2(const std::vector<DecSeq>& set);

/// Least element under lex1: shortest stem prefix of min_lex2 that lies in
/// the set.
DecSeq min_lex1(const std::vector<DecSeq>& set);

/// Order embedding of (the lex3 order on sequences below alpha) x (an index
/// below beta) into sequences below alpha + beta*2 + 1, by prepending a
/// two-entry head. The index is the more significant factor; `reversed`
/// flips its direction. Forward head: <alpha+beta+gamma+1, alpha+beta>.
/// Reversed head: <alpha+beta*2, alpha+beta+gamma>.
struct HausdorffMap {
  Ordinal alpha;
  Ordinal beta;
  bool reversed = false;

  DecSeq image(const DecSeq& eta, const Ordinal& gamma) const;
  Ordinal target_bound() const;  // alpha + beta*2 + 1
};

struct HausdorffRow {
  Ordinal gamma;
  DecSeq eta;
  DecSeq image;
};

/// Full table for natural alpha, beta, enumerated in the product order
/// (index major, flipped when reversed; within an index, lex3-ascending).
std::vector<HausdorffRow> hausdorff_table(unsigned alpha, unsigned beta,
                                          bool reversed,
                                          std::size_t node_budget = default_node_budget);

/// Scattered order expressions built from finite ranges, reversed ranges,
/// full trees under lex3, and products with a finite (possibly reversed)
/// index. The index is always the more significant factor.
struct ScatteredExpr {
  enum class Kind { ordinal_range, reversed_range, tree_order, product, reversed_product };

  Kind kind;
  Ordinal param;
  std::shared_ptr<ScatteredExpr> base;  // only for products

  static ScatteredExpr ordinal_range(Ordinal n);
  static ScatteredExpr reversed_range(Ordinal n);
  static ScatteredExpr tree_order(Ordinal n);
  static ScatteredExpr product(ScatteredExpr base, Ordinal n);
  static ScatteredExpr reversed_product(ScatteredExpr base, Ordinal n);
};

struct ScatteredEmbedding {
  Ordinal bound;                // images live below this bound
  std::vector<DecSeq> images;   // listed in the expression's ascending order
};

/// Embeds the expression's order into sequences under lex3 by composing
/// HausdorffMap steps. All parameters must be natural and the total size
/// must fit the budget.
ScatteredEmbedding embed_scattered(const ScatteredExpr& expr,
                                   std::size_t node_budget = default_node_budget);

}  // namespace dstree
