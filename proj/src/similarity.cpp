#include "dstree/similarity.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "dstree/orders.hpp"

namespace dstree {

Tuple::Tuple(std::vector<DecSeq> elems) : elems_(std::move(elems)) {
  for (std::size_t i = 0; i + 1 < elems_.size(); ++i) {
    if (!(seq_compare(OrderKind::lex2, elems_[i], elems_[i + 1]) < 0)) {
      throw input_error("tuple elements are not increasing: " + elems_[i].str() +
                        " is followed by " + elems_[i + 1].str());
    }
  }
}

Tuple Tuple::parse(std::string_view text) {
  if (text == "-") return Tuple();
  std::vector<DecSeq> elems;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find('|', start);
    auto piece = text.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                  : pos - start);
    elems.push_back(DecSeq::parse(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return Tuple(std::move(elems));
}

std::string Tuple::str() const {
  if (elems_.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) out += '|';
    out += elems_[i].str();
  }
  return out;
}

Tuple Tuple::extended(const DecSeq& next) const {
  if (!elems_.empty() && !(seq_compare(OrderKind::lex2, elems_.back(), next) < 0)) {
    throw input_error("cannot extend a tuple ending in " + elems_.back().str() + " by " +
                      next.str());
  }
  std::vector<DecSeq> elems = elems_;
  elems.push_back(next);
  Tuple out;
  out.elems_ = std::move(elems);  // already validated
  return out;
}

Tuple Tuple::prefix(std::size_t k) const {
  if (k > elems_.size()) throw input_error("tuple prefix length exceeds the tuple");
  Tuple out;
  out.elems_.assign(elems_.begin(), elems_.begin() + k);
  return out;
}

bool TupleLess::operator()(const Tuple& a, const Tuple& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto c = seq_compare(OrderKind::lex2, a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::vector<std::uint64_t> SimInvariant::serialize() const {
  std::vector<std::uint64_t> out;
  out.push_back(n);
  for (std::size_t v : lengths) out.push_back(v);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(meets[i][j]);
  }
  for (std::size_t v : perm) out.push_back(v);
  return out;
}

std::uint64_t SimInvariant::total_size() const {
  auto s = serialize();
  return std::accumulate(s.begin(), s.end(), std::uint64_t{0});
}

std::optional<std::string> SimInvariant::check(const SimInvariant& inv) {
  const std::size_t n = inv.n;
  if (inv.lengths.size() != n) return "lengths holds " + std::to_string(inv.lengths.size()) +
                                      " entries, expected " + std::to_string(n);
  if (inv.meets.size() != n) return std::optional<std::string>("meets must be an n x n table");
  for (const auto& row : inv.meets) {
    if (row.size() != n) return std::optional<std::string>("meets must be an n x n table");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (inv.meets[i][i] != inv.lengths[i]) {
      return "the diagonal of meets must repeat the lengths (entry " + std::to_string(i) + ")";
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (inv.meets[i][j] != inv.meets[j][i]) {
        return "meets is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
      if (inv.meets[i][j] > std::min(inv.lengths[i], inv.lengths[j])) {
        return "meet length at (" + std::to_string(i) + "," + std::to_string(j) +
               ") exceeds an element length";
      }
    }
  }
  if (inv.perm.size() != n) return std::optional<std::string>("perm must list 0..n-1");
  std::vector<bool> seen(n, false);
  for (std::size_t v : inv.perm) {
    if (v >= n || seen[v]) return std::optional<std::string>("perm must list 0..n-1");
    seen[v] = true;
  }
  return std::nullopt;
}

SimInvariant invariant_of(const Tuple& u) {
  SimInvariant inv;
  inv.n = u.size();
  inv.lengths.resize(inv.n);
  inv.meets.assign(inv.n, std::vector<std::size_t>(inv.n, 0));
  for (std::size_t i = 0; i < inv.n; ++i) {
    inv.lengths[i] = u[i].size();
    inv.meets[i][i] = u[i].size();
    for (std::size_t j = i + 1; j < inv.n; ++j) {
      std::size_t m = meet(u[i], u[j]).size();
      inv.meets[i][j] = m;
      inv.meets[j][i] = m;
    }
  }
  inv.perm.resize(inv.n);
  std::iota(inv.perm.begin(), inv.perm.end(), std::size_t{0});
  std::sort(inv.perm.begin(), inv.perm.end(), [&](std::size_t a, std::size_t b) {
    return seq_compare(OrderKind::lex1, u[a], u[b]) < 0;
  });
  return inv;
}

namespace {

bool similar_with(OrderKind order_clause, const Tuple& a, const Tuple& b) {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != b[i].size()) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (meet(a[i], a[j]).size() != meet(b[i], b[j]).size()) return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool la = seq_compare(order_clause, a[i], a[j]) < 0;
      bool lb = seq_compare(order_clause, b[i], b[j]) < 0;
      if (la != lb) return false;
    }
  }
  return true;
}

}  // namespace

bool similar(const Tuple& a, const Tuple& b) { return similar_with(OrderKind::lex2, a, b); }

bool similar_by_lex1(const Tuple& a, const Tuple& b) {
  return similar_with(OrderKind::lex1, a, b);
}

namespace {

// Builds element entries realizing the given lengths and meets, index by
// index, ignoring perm; the caller verifies the outcome via invariant_of.
// Entry values are chosen so that deeper entries are always smaller and
// sibling classes ascend: the value at depth d for the r-th class of a group
// is (D-1-d)*(n+1)+r where D is the largest length.
struct WitnessBuilder {
  const std::vector<std::size_t>& lengths;
  const std::vector<std::vector<std::size_t>>& meets;
  std::size_t n;
  std::uint64_t depth_max;
  std::vector<std::vector<std::uint64_t>> entries;

  bool build(const std::vector<std::size_t>& group, std::size_t d) {
    std::vector<std::size_t> rest;
    std::size_t exact_count = 0;
    for (std::size_t i : group) {
      if (lengths[i] == d) {
        ++exact_count;
        if (i != group.back()) return false;  // a prefix must come last
      } else {
        rest.push_back(i);
      }
    }
    if (exact_count > 1) return false;
    if (rest.empty()) return true;
    // Split by "still together one level deeper".
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i : rest) {
      bool placed = false;
      for (auto& cls : classes) {
        if (meets[cls.front()][i] >= d + 1) {
          cls.push_back(i);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({i});
    }
    for (std::size_t r = 0; r < classes.size(); ++r) {
      std::uint64_t value = (depth_max - 1 - d) * (n + 1) + r;
      for (std::size_t i : classes[r]) entries[i].push_back(value);
      if (!build(classes[r], d + 1)) return false;
    }
    return true;
  }
};

std::optional<Tuple> construct_witness(std::size_t n, const std::vector<std::size_t>& lengths,
                                       const std::vector<std::vector<std::size_t>>& meets) {
  if (n == 0) return Tuple();
  std::uint64_t depth_max = *std::max_element(lengths.begin(), lengths.end());
  WitnessBuilder b{lengths, meets, n, depth_max,
                   std::vector<std::vector<std::uint64_t>>(n)};
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (!b.build(all, 0)) return std::nullopt;
  try {
    std::vector<DecSeq> elems;
    elems.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Ordinal> vals(b.entries[i].begin(), b.entries[i].end());
      elems.emplace_back(std::move(vals));
    }
    return Tuple(std::move(elems));
  } catch (const input_error&) {
    return std::nullopt;  // the shape cannot be listed increasingly
  }
}

}  // namespace

std::optional<Tuple> realize_invariant(const SimInvariant& inv) {
  if (SimInvariant::check(inv)) return std::nullopt;
  auto w = construct_witness(inv.n, inv.lengths, inv.meets);
  if (!w) return std::nullopt;
  if (!(invariant_of(*w) == inv)) return std::nullopt;
  return w;
}

namespace {

// The fixed enumeration of realizable invariants, grown one total size at a
// time and shared by every caller.
class ClassTable {
 public:
  static ClassTable& instance() {
    static ClassTable table;
    return table;
  }

  std::uint64_t index_of(const SimInvariant& inv) {
    std::lock_guard<std::mutex> lock(mtx_);
    grow_until_sum(inv.total_size());
    auto it = pos_.find(inv.serialize());
    if (it == pos_.end()) throw input_error("unrealizable invariant");
    return it->second;
  }

  SimInvariant at(std::uint64_t k) {
    std::lock_guard<std::mutex> lock(mtx_);
    while (classes_.size() <= k) {
      if (next_sum_ > kMaxSum || classes_.size() > kMaxClasses) {
        throw budget_error("the walk to class " + std::to_string(k) +
                           " exceeds the enumeration budget");
      }
      grow_one_sum();
    }
    return classes_[k];
  }

 private:
  static constexpr std::uint64_t kMaxSum = 64;
  static constexpr std::uint64_t kMaxClasses = std::uint64_t{1} << 22;

  std::mutex mtx_;
  std::vector<SimInvariant> classes_;
  std::map<std::vector<std::uint64_t>, std::uint64_t> pos_;
  std::uint64_t next_sum_ = 0;

  void grow_until_sum(std::uint64_t s) {
    while (next_sum_ <= s) grow_one_sum();
  }

  // Appends every realizable invariant of total size next_sum_, in
  // serialization order.
  void grow_one_sum() {
    const std::uint64_t s = next_sum_;
    std::vector<SimInvariant> found;
    for (std::uint64_t n = 0;; ++n) {
      const std::uint64_t fixed = n + n * (n - 1) / 2;  // the size entry plus any perm
      if (fixed > s) break;
      std::vector<std::size_t> lengths(n, 0);
      enumerate_lengths(n, 0, s - fixed, lengths, found);
    }
    std::sort(found.begin(), found.end(), [](const SimInvariant& a, const SimInvariant& b) {
      return a.serialize() < b.serialize();
    });
    for (auto& inv : found) {
      pos_.emplace(inv.serialize(), classes_.size());
      classes_.push_back(std::move(inv));
    }
    ++next_sum_;
  }

  void enumerate_lengths(std::uint64_t n, std::size_t pos, std::uint64_t rem,
                         std::vector<std::size_t>& lengths, std::vector<SimInvariant>& found) {
    if (pos == n) {
      std::vector<std::pair<std::size_t, std::size_t>> cells;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) cells.emplace_back(i, j);
      }
      std::vector<std::vector<std::size_t>> meets(n, std::vector<std::size_t>(n, 0));
      for (std::size_t i = 0; i < n; ++i) meets[i][i] = lengths[i];
      enumerate_meets(cells, 0, rem, lengths, meets, found);
      return;
    }
    for (std::uint64_t v = 0; v <= rem; ++v) {
      lengths[pos] = v;
      enumerate_lengths(n, pos + 1, rem - v, lengths, found);
    }
    lengths[pos] = 0;
  }

  void enumerate_meets(const std::vector<std::pair<std::size_t, std::size_t>>& cells,
                       std::size_t pos, std::uint64_t rem,
                       const std::vector<std::size_t>& lengths,
                       std::vector<std::vector<std::size_t>>& meets,
                       std::vector<SimInvariant>& found) {
    if (pos == cells.size()) {
      if (rem != 0) return;
      auto w = construct_witness(lengths.size(), lengths, meets);
      if (!w) return;
      SimInvariant inv = invariant_of(*w);
      if (inv.lengths == lengths && inv.meets == meets) found.push_back(std::move(inv));
      return;
    }
    auto [i, j] = cells[pos];
    std::uint64_t cap = std::min<std::uint64_t>(std::min(lengths[i], lengths[j]), rem);
    for (std::uint64_t v = 0; v <= cap; ++v) {
      meets[i][j] = v;
      meets[j][i] = v;
      enumerate_meets(cells, pos + 1, rem - v, lengths, meets, found);
    }
    meets[i][j] = 0;
    meets[j][i] = 0;
  }
};

}  // namespace

std::uint64_t class_index(const SimInvariant& inv) {
  if (auto bad = SimInvariant::check(inv)) throw input_error(*bad);
  if (!realize_invariant(inv)) throw input_error("unrealizable invariant");
  return ClassTable::instance().index_of(inv);
}

SimInvariant class_of_index(std::uint64_t k) { return ClassTable::instance().at(k); }

std::uint64_t class_index_of(const Tuple& u) {
  return ClassTable::instance().index_of(invariant_of(u));
}

}  // namespace dstree
