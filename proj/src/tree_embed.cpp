#include "dstree/tree_embed.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "dstree/orders.hpp"

namespace dstree {

namespace {

bool domain_less(const std::pair<DecSeq, DecSeq>& a, const std::pair<DecSeq, DecSeq>& b) {
  return Lex2Less{}(a.first, b.first);
}

}  // namespace

TreeMap::TreeMap(std::vector<std::pair<DecSeq, DecSeq>> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end(), domain_less);
  for (std::size_t i = 0; i + 1 < pairs_.size(); ++i) {
    if (pairs_[i].first == pairs_[i + 1].first) {
      throw input_error("map assigns two images to " + pairs_[i].first.str());
    }
  }
}

std::optional<DecSeq> TreeMap::try_apply(const DecSeq& node) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(),
                             std::make_pair(node, DecSeq()), domain_less);
  if (it == pairs_.end() || !(it->first == node)) return std::nullopt;
  return it->second;
}

const DecSeq& TreeMap::apply(const DecSeq& node) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(),
                             std::make_pair(node, DecSeq()), domain_less);
  if (it == pairs_.end() || !(it->first == node)) {
    throw input_error("map is not defined on " + node.str());
  }
  return it->second;
}

std::vector<DecSeq> TreeMap::domain_nodes() const {
  std::vector<DecSeq> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.push_back(p.first);
  return out;
}

std::vector<DecSeq> TreeMap::image_nodes() const {
  std::vector<DecSeq> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.push_back(p.second);
  return out;
}

TreeMap TreeMap::then(const TreeMap& next) const {
  std::vector<std::pair<DecSeq, DecSeq>> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.emplace_back(p.first, next.apply(p.second));
  return TreeMap(std::move(out));
}

TreeMap TreeMap::load(std::istream& in) {
  std::vector<std::pair<DecSeq, DecSeq>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto sep = line.find(';');
    if (sep == std::string::npos) {
      throw input_error("line " + std::to_string(lineno) +
                        ": expected \"domain;image\", got \"" + line + "\"");
    }
    try {
      pairs.emplace_back(DecSeq::parse(line.substr(0, sep)), DecSeq::parse(line.substr(sep + 1)));
    } catch (const input_error& e) {
      throw input_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return TreeMap(std::move(pairs));
}

void TreeMap::save(std::ostream& out) const {
  for (const auto& p : pairs_) out << p.first.str() << ';' << p.second.str() << '\n';
}

EmbedReport check_embedding(const TreeMap& f, const Tree& t1, const Tree& t2) {
  for (const auto& p : f.pairs()) {
    if (!t1.contains(p.first)) {
      return {false, "map key " + p.first.str() + " is not in the domain tree"};
    }
  }
  for (const auto& node : t1.nodes()) {
    auto img = f.try_apply(node);
    if (!img) return {false, "map is not defined on " + node.str()};
    if (!t2.contains(*img)) {
      return {false, "image of " + node.str() + ", " + img->str() + ", is not in the host tree"};
    }
  }
  const auto& nodes = t1.nodes();
  for (const auto& a : nodes) {
    const DecSeq fa = f.apply(a);
    if (fa.size() != a.size()) {
      return {false, "level changes: " + a.str() + " maps to " + fa.str()};
    }
    for (const auto& b : nodes) {
      if (a == b) continue;
      const DecSeq fb = f.apply(b);
      if (a.is_prefix_of(b) && !fa.is_prefix_of(fb)) {
        return {false, "prefix order lost on " + a.str() + " and " + b.str()};
      }
      if (seq_compare(OrderKind::lex1, a, b) < 0 &&
          !(seq_compare(OrderKind::lex1, fa, fb) < 0)) {
        return {false, "lexicographic order lost on " + a.str() + " and " + b.str()};
      }
    }
  }
  return {};
}

bool is_embedding(const TreeMap& f, const Tree& t1, const Tree& t2) {
  return check_embedding(f, t1, t2).ok;
}

EmbedReport sibling_check(const TreeMap& f, const Tree& t1, const Tree& t2) {
  for (const auto& node : t1.nodes()) {
    auto img = f.try_apply(node);
    if (!img) throw input_error("map is not defined on " + node.str());
    if (!t2.contains(*img)) {
      throw input_error("image of " + node.str() + ", " + img->str() +
                        ", is not in the host tree");
    }
    if (img->size() != node.size()) {
      throw input_error("level changes: " + node.str() + " maps to " + img->str());
    }
  }
  for (const auto& a : t1.nodes()) {
    const DecSeq fa = f.apply(a);
    for (const auto& b : t1.nodes()) {
      if (!(a == b) && a.is_prefix_of(b) && !fa.is_prefix_of(f.apply(b))) {
        throw input_error("prefix order lost on " + a.str() + " and " + b.str());
      }
    }
  }
  // Only sibling pairs need the order test now.
  for (std::size_t pi = 0; pi < t1.size(); ++pi) {
    const auto& kids = t1.children_of(pi);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      for (std::size_t j = i + 1; j < kids.size(); ++j) {
        const DecSeq& a = t1.nodes()[kids[i]];
        const DecSeq& b = t1.nodes()[kids[j]];
        if (!star_less(f.apply(a), f.apply(b))) {
          return {false, "sibling images of " + a.str() + " and " + b.str() +
                             " are not increasing"};
        }
      }
    }
  }
  return {};
}

namespace {

struct CopyWalker {
  const Tree& shape;
  const Tree& host;
  const std::function<bool(const TreeMap&)>& visit;
  // Sibling groups in breadth-first order of their parents.
  std::vector<std::size_t> parents;           // shape node index per group
  std::vector<std::size_t> image;             // host node index per shape node index
  bool stopped = false;

  bool emit() {
    std::vector<std::pair<DecSeq, DecSeq>> pairs;
    pairs.reserve(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) {
      pairs.emplace_back(shape.nodes()[i], host.nodes()[image[i]]);
    }
    return visit(TreeMap(std::move(pairs)));
  }

  // Chooses images for group g's children among the host children of the
  // parent's image, as ascending combinations in lexicographic order.
  void walk(std::size_t g) {
    if (stopped) return;
    if (g == parents.size()) {
      if (!emit()) stopped = true;
      return;
    }
    const auto& kids = shape.children_of(parents[g]);
    const auto& slots = host.children_of(image[parents[g]]);
    const std::size_t k = kids.size();
    if (slots.size() < k) return;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      for (std::size_t i = 0; i < k; ++i) image[kids[i]] = slots[pick[i]];
      walk(g + 1);
      if (stopped) return;
      // next combination
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == slots.size() - k + (i - 1)) --i;
      if (i == 0) return;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
};

}  // namespace

void for_each_copy_of(const Tree& shape, const Tree& host,
                      const std::function<bool(const TreeMap&)>& visit) {
  if (shape.depth() > host.depth()) return;
  std::vector<std::size_t> order(shape.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return shape.nodes()[a].size() < shape.nodes()[b].size();
  });
  std::vector<std::size_t> parents;
  for (std::size_t i : order) {
    if (!shape.children_of(i).empty()) parents.push_back(i);
  }
  CopyWalker walker{shape, host, visit, std::move(parents),
                    std::vector<std::size_t>(shape.size(), 0), false};
  walker.image[shape.root_index()] = host.root_index();
  walker.walk(0);
}

std::vector<TreeMap> find_copies_of(const Tree& shape, const Tree& host, std::size_t limit) {
  std::vector<TreeMap> out;
  if (limit == 0) return out;
  for_each_copy_of(shape, host, [&](const TreeMap& m) {
    out.push_back(m);
    return out.size() < limit;
  });
  return out;
}

std::vector<TreeMap> find_copies(const Tree& host, unsigned m, std::size_t limit,
                                 std::size_t node_budget) {
  return find_copies_of(full_tree(m, node_budget), host, limit);
}

}  // namespace dstree
