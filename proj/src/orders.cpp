#include "dstree/orders.hpp"

#include <algorithm>
#include <cassert>

namespace dstree {

std::strong_ordering seq_compare(OrderKind kind, const DecSeq& a, const DecSeq& b) {
  if (kind == OrderKind::star)
    throw input_error("the intersection order is partial; compare with star_less");
  std::size_t n = std::min(a.size(), b.size());
  std::size_t l = 0;
  while (l < n && a[l] == b[l]) ++l;
  if (l == a.size() || l == b.size()) {
    if (a.size() == b.size()) return std::strong_ordering::equal;
    bool a_is_prefix = a.size() < b.size();
    if (kind == OrderKind::lex2)  // extensions precede their prefixes
      return a_is_prefix ? std::strong_ordering::greater : std::strong_ordering::less;
    return a_is_prefix ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  auto c = a[l] <=> b[l];
  if (kind == OrderKind::lex3 && l % 2 == 1) return 0 <=> c;
  return c;
}

bool star_less(const DecSeq& a, const DecSeq& b) {
  return seq_compare(OrderKind::lex1, a, b) < 0 &&
         seq_compare(OrderKind::lex2, a, b) < 0;
}

bool star_le(const DecSeq& a, const DecSeq& b) { return a == b || star_less(a, b); }

DecSeq min_lex2(const std::vector<DecSeq>& set) {
  if (set.empty()) throw input_error("minimum of an empty set");
  DecSeq stem;
  for (;;) {
    // Extend the stem by the least entry any member continues it with.
    const Ordinal* next = nullptr;
    for (const DecSeq& s : set) {
      if (s.size() <= stem.size() || !stem.is_prefix_of(s)) continue;
      const Ordinal& e = s[stem.size()];
      if (!next || e < *next) next = &e;
    }
    if (!next) break;
    stem = stem.extended(*next);
  }
  // Nothing extends the stem and it is a prefix of some member, so it is one.
  assert(std::find(set.begin(), set.end(), stem) != set.end());
  return stem;
}

DecSeq min_lex1(const std::vector<DecSeq>& set) {
  DecSeq stem = min_lex2(set);
  for (std::size_t k = 0; k < stem.size(); ++k) {
    DecSeq p = stem.prefix(k);
    if (std::find(set.begin(), set.end(), p) != set.end()) return p;
  }
  return stem;
}

DecSeq HausdorffMap::image(const DecSeq& eta, const Ordinal& gamma) const {
  if (!(gamma < beta))
    throw input_error("index " + gamma.str() + " is not below " + beta.str());
  if (!member_below(alpha, eta))
    throw input_error("sequence " + eta.str() + " does not lie below " + alpha.str());
  std::vector<Ordinal> entries;
  entries.reserve(eta.size() + 2);
  if (reversed) {
    entries.push_back(alpha + beta.times_natural(2));
    entries.push_back(alpha + beta + gamma);
  } else {
    entries.push_back(alpha + beta + gamma + Ordinal(1));
    entries.push_back(alpha + beta);
  }
  entries.insert(entries.end(), eta.entries().begin(), eta.entries().end());
  return DecSeq(std::move(entries));
}

Ordinal HausdorffMap::target_bound() const {
  return alpha + beta.times_natural(2) + Ordinal(1);
}

namespace {

bool lex3_less(const DecSeq& a, const DecSeq& b) {
  return seq_compare(OrderKind::lex3, a, b) < 0;
}

std::vector<DecSeq> lex3_sorted_full_tree(unsigned n, std::size_t node_budget) {
  std::vector<DecSeq> nodes = full_tree(n, node_budget).nodes();
  std::sort(nodes.begin(), nodes.end(), lex3_less);
  return nodes;
}

}  // namespace

std::vector<HausdorffRow> hausdorff_table(unsigned alpha, unsigned beta, bool reversed,
                                          std::size_t node_budget) {
  std::vector<DecSeq> base = lex3_sorted_full_tree(alpha, node_budget);
  if (beta > 0 && base.size() > node_budget / beta)
    throw budget_error("a table of " + std::to_string(base.size()) + " x " +
                       std::to_string(beta) + " rows exceeds the node budget");
  HausdorffMap map{Ordinal(alpha), Ordinal(beta), reversed};
  std::vector<HausdorffRow> rows;
  rows.reserve(base.size() * beta);
  for (unsigned i = 0; i < beta; ++i) {
    Ordinal gamma(std::uint64_t{reversed ? beta - 1 - i : i});
    for (const DecSeq& eta : base)
      rows.push_back(HausdorffRow{gamma, eta, map.image(eta, gamma)});
  }
  return rows;
}

ScatteredExpr ScatteredExpr::ordinal_range(Ordinal n) {
  return ScatteredExpr{Kind::ordinal_range, std::move(n), nullptr};
}

ScatteredExpr ScatteredExpr::reversed_range(Ordinal n) {
  return ScatteredExpr{Kind::reversed_range, std::move(n), nullptr};
}

ScatteredExpr ScatteredExpr::tree_order(Ordinal n) {
  return ScatteredExpr{Kind::tree_order, std::move(n), nullptr};
}

ScatteredExpr ScatteredExpr::product(ScatteredExpr base, Ordinal n) {
  return ScatteredExpr{Kind::product, std::move(n),
                       std::make_shared<ScatteredExpr>(std::move(base))};
}

ScatteredExpr ScatteredExpr::reversed_product(ScatteredExpr base, Ordinal n) {
  return ScatteredExpr{Kind::reversed_product, std::move(n),
                       std::make_shared<ScatteredExpr>(std::move(base))};
}

namespace {

std::uint64_t finite_param(const ScatteredExpr& expr) {
  if (!expr.param.is_natural())
    throw budget_error("cannot enumerate an order with transfinite parameter " +
                       expr.param.str());
  return expr.param.as_natural();
}

ScatteredEmbedding apply_product(ScatteredEmbedding base, std::uint64_t n,
                                 bool reversed, std::size_t node_budget) {
  if (n > 0 && base.images.size() > node_budget / n)
    throw budget_error("a product of " + std::to_string(base.images.size()) + " x " +
                       std::to_string(n) + " elements exceeds the node budget");
  HausdorffMap map{base.bound, Ordinal(n), reversed};
  ScatteredEmbedding out;
  out.bound = map.target_bound();
  out.images.reserve(base.images.size() * n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Ordinal gamma(reversed ? n - 1 - i : i);
    for (const DecSeq& eta : base.images) out.images.push_back(map.image(eta, gamma));
  }
  return out;
}

ScatteredEmbedding embed_rec(const ScatteredExpr& expr, std::size_t node_budget) {
  using Kind = ScatteredExpr::Kind;
  switch (expr.kind) {
    case Kind::tree_order: {
      std::uint64_t n = finite_param(expr);
      if (n >= 63)
        throw budget_error("a full tree on " + std::to_string(n) +
                           " entries exceeds the node budget");
      ScatteredEmbedding out;
      out.bound = expr.param;
      out.images = lex3_sorted_full_tree(static_cast<unsigned>(n), node_budget);
      return out;
    }
    case Kind::ordinal_range:
    case Kind::reversed_range: {
      // A plain range is a product over the one-point order.
      ScatteredEmbedding point{Ordinal(), {DecSeq()}};
      return apply_product(std::move(point), finite_param(expr),
                           expr.kind == Kind::reversed_range, node_budget);
    }
    case Kind::product:
    case Kind::reversed_product:
      return apply_product(embed_rec(*expr.base, node_budget), finite_param(expr),
                           expr.kind == Kind::reversed_product, node_budget);
  }
  throw input_error("unknown order expression");
}

}  // namespace

ScatteredEmbedding embed_scattered(const ScatteredExpr& expr, std::size_t node_budget) {
  return embed_rec(expr, node_budget);
}

}  // namespace dstree
