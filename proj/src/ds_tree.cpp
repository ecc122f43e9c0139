#include "dstree/ds_tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <utility>

#include "dstree/orders.hpp"

namespace dstree {

DecSeq::DecSeq(std::vector<Ordinal> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 1; i < entries_.size(); ++i)
    if (!(entries_[i] < entries_[i - 1]))
      throw input_error("sequence is not strictly decreasing at entry " +
                        std::to_string(i) + ": " + entries_[i - 1].str() +
                        " is followed by " + entries_[i].str());
}

DecSeq DecSeq::parse(std::string_view text) {
  if (text == "()") return DecSeq();
  if (text.empty())
    throw input_error("empty sequence literal; the empty sequence is written '()'");
  std::vector<Ordinal> entries;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    entries.push_back(Ordinal::parse(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return DecSeq(std::move(entries));
}

std::string DecSeq::str() const {
  if (entries_.empty()) return "()";
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0) out += ',';
    out += entries_[i].str();
  }
  return out;
}

DecSeq DecSeq::prefix(std::size_t n) const {
  if (n > entries_.size())
    throw input_error("prefix length " + std::to_string(n) +
                      " exceeds sequence length " + std::to_string(entries_.size()));
  DecSeq out;
  out.entries_.assign(entries_.begin(), entries_.begin() + n);
  return out;
}

DecSeq DecSeq::extended(const Ordinal& next) const {
  std::vector<Ordinal> entries = entries_;
  entries.push_back(next);
  return DecSeq(std::move(entries));
}

bool DecSeq::is_prefix_of(const DecSeq& other) const {
  return entries_.size() <= other.entries_.size() &&
         std::equal(entries_.begin(), entries_.end(), other.entries_.begin());
}

DecSeq meet(const DecSeq& a, const DecSeq& b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t l = 0;
  while (l < n && a[l] == b[l]) ++l;
  return a.prefix(l);
}

bool member_below(const Ordinal& bound, const DecSeq& seq) {
  return seq.empty() || seq[0] < bound;
}

Tree Tree::from_nodes(std::vector<DecSeq> nodes) {
  std::sort(nodes.begin(), nodes.end(), Lex2Less{});
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (auto violation = check_nodes(nodes)) throw input_error(*violation);

  Tree t;
  t.nodes_ = std::move(nodes);
  t.children_.resize(t.nodes_.size());
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    const DecSeq& node = t.nodes_[i];
    if (node.empty()) {
      t.root_ = i;
      continue;
    }
    // Node order puts siblings in ascending final-entry order already.
    t.children_[*t.index_of(node.prefix(node.size() - 1))].push_back(i);
  }
  return t;
}

std::optional<std::string> Tree::check_nodes(const std::vector<DecSeq>& nodes) {
  if (nodes.empty()) return "a tree must contain at least the empty sequence";
  std::vector<DecSeq> sorted = nodes;
  std::sort(sorted.begin(), sorted.end(), Lex2Less{});
  for (const DecSeq& node : nodes) {
    if (node.empty()) continue;
    DecSeq parent = node.prefix(node.size() - 1);
    if (!std::binary_search(sorted.begin(), sorted.end(), parent, Lex2Less{}))
      return "node " + node.str() + " lacks its parent " + parent.str();
  }
  if (!std::binary_search(sorted.begin(), sorted.end(), DecSeq(), Lex2Less{}))
    return "a tree must contain the empty sequence";
  return std::nullopt;
}

Tree Tree::load(std::istream& in) {
  std::vector<DecSeq> nodes;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    nodes.push_back(DecSeq::parse(line));
  }
  return from_nodes(std::move(nodes));
}

void Tree::save(std::ostream& out) const {
  for (const DecSeq& node : nodes_) out << node.str() << '\n';
}

std::size_t Tree::depth() const {
  std::size_t d = 0;
  for (const DecSeq& node : nodes_) d = std::max(d, node.size());
  return d;
}

std::optional<std::size_t> Tree::index_of(const DecSeq& seq) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), seq, Lex2Less{});
  if (it == nodes_.end() || !(*it == seq)) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::size_t> Tree::level(std::size_t length) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].size() == length) out.push_back(i);
  return out;
}

Tree full_tree(unsigned n, std::size_t node_budget) {
  if (n >= 63 || (std::size_t{1} << n) > node_budget)
    throw budget_error("a full tree on " + std::to_string(n) + " entries has 2^" +
                       std::to_string(n) + " nodes, beyond the node budget of " +
                       std::to_string(node_budget));
  std::vector<DecSeq> nodes;
  nodes.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Ordinal> entries;
    for (unsigned bit = n; bit-- > 0;)
      if (mask & (std::size_t{1} << bit)) entries.emplace_back(std::uint64_t{bit});
    nodes.push_back(DecSeq(std::move(entries)));
  }
  return Tree::from_nodes(std::move(nodes));
}

Tree graft(const DecSeq& stem, const Tree& t) {
  std::vector<DecSeq> nodes;
  nodes.reserve(stem.size() + t.size());
  for (std::size_t i = 0; i < stem.size(); ++i) nodes.push_back(stem.prefix(i));
  for (const DecSeq& node : t.nodes()) {
    if (!stem.empty() && !node.empty() && !(node[0] < stem.last()))
      throw input_error("grafting " + node.str() + " onto " + stem.str() +
                        " does not yield a decreasing sequence");
    std::vector<Ordinal> entries = stem.entries();
    entries.insert(entries.end(), node.entries().begin(), node.entries().end());
    nodes.push_back(DecSeq(std::move(entries)));
  }
  return Tree::from_nodes(std::move(nodes));
}

}  // namespace dstree
