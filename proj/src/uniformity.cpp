#include "dstree/uniformity.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dstree/orders.hpp"

namespace dstree {

std::vector<Tuple> enumerate_tuples(const Tree& t, Arity policy, std::size_t arity) {
  std::vector<Tuple> out;
  const auto& nodes = t.nodes();
  std::size_t lo = policy == Arity::up_to ? 0 : arity;
  for (std::size_t s = lo; s <= arity; ++s) {
    if (s > nodes.size()) break;
    std::vector<std::size_t> pick(s);
    for (std::size_t i = 0; i < s; ++i) pick[i] = i;
    while (true) {
      std::vector<DecSeq> elems;
      elems.reserve(s);
      for (std::size_t i : pick) elems.push_back(nodes[i]);
      out.emplace_back(std::move(elems));
      std::size_t i = s;
      while (i > 0 && pick[i - 1] == nodes.size() - s + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

Colouring Colouring::from_function(Tree base, Arity policy, std::size_t arity,
                                   std::uint64_t palette,
                                   const std::function<std::uint64_t(const Tuple&)>& fn) {
  if (palette == 0) throw input_error("palette must be positive");
  Colouring c;
  c.base_ = std::move(base);
  c.policy_ = policy;
  c.arity_ = arity;
  c.palette_ = palette;
  for (const Tuple& u : enumerate_tuples(c.base_, policy, arity)) {
    std::uint64_t col = fn(u);
    if (col >= palette) {
      throw input_error("colour " + std::to_string(col) + " of tuple " + u.str() +
                        " exceeds the palette");
    }
    c.table_.emplace(u, col);
  }
  return c;
}

Colouring Colouring::from_table(Tree base, Arity policy, std::size_t arity,
                                std::uint64_t palette,
                                std::map<Tuple, std::uint64_t, TupleLess> table) {
  if (palette == 0) throw input_error("palette must be positive");
  Colouring c;
  c.base_ = std::move(base);
  c.policy_ = policy;
  c.arity_ = arity;
  c.palette_ = palette;
  c.table_ = std::move(table);
  auto domain = enumerate_tuples(c.base_, policy, arity);
  auto it = c.table_.begin();
  for (const Tuple& u : domain) {
    if (it == c.table_.end() || TupleLess{}(u, it->first)) {
      throw input_error("the domain tuple " + u.str() + " is missing");
    }
    if (TupleLess{}(it->first, u)) {
      throw input_error("tuple " + it->first.str() + " is outside the colouring domain");
    }
    if (it->second >= palette) {
      throw input_error("colour " + std::to_string(it->second) + " of tuple " + u.str() +
                        " exceeds the palette");
    }
    ++it;
  }
  if (it != c.table_.end()) {
    throw input_error("tuple " + it->first.str() + " is outside the colouring domain");
  }
  return c;
}

std::uint64_t Colouring::at(const Tuple& u) const {
  auto it = table_.find(u);
  if (it == table_.end()) {
    throw input_error("tuple " + u.str() + " is outside the colouring domain");
  }
  return it->second;
}

void Colouring::save(std::ostream& out) const {
  out << "palette " << palette_ << '\n';
  out << "arity " << (policy_ == Arity::up_to ? "upto:" : "exact:") << arity_ << '\n';
  for (const auto& [u, col] : table_) out << u.str() << ';' << col << '\n';
}

namespace {

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw input_error(what + " must be a number, got \"" + text + "\"");
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw input_error(what + " is out of range: \"" + text + "\"");
  }
}

}  // namespace

Colouring Colouring::load(std::istream& in, const Tree& base) {
  std::string line;
  std::size_t lineno = 0;
  bool have_palette = false;
  bool have_arity = false;
  std::uint64_t palette = 0;
  Arity policy = Arity::up_to;
  std::size_t arity = 0;
  std::map<Tuple, std::uint64_t, TupleLess> table;
  std::size_t max_size = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!have_palette) {
      if (line.rfind("palette ", 0) != 0) {
        throw input_error("line " + std::to_string(lineno) + ": expected \"palette N\" first");
      }
      palette = parse_u64(line.substr(8), "palette");
      have_palette = true;
      continue;
    }
    if (!have_arity && line.rfind("arity ", 0) == 0) {
      std::string spec = line.substr(6);
      std::size_t colon = spec.find(':');
      std::string kind = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
      if (colon == std::string::npos || (kind != "upto" && kind != "exact")) {
        throw input_error("line " + std::to_string(lineno) +
                          ": arity must be \"upto:K\" or \"exact:K\"");
      }
      policy = kind == "upto" ? Arity::up_to : Arity::exact;
      arity = parse_u64(spec.substr(colon + 1), "arity");
      have_arity = true;
      continue;
    }
    auto sep = line.find(';');
    if (sep == std::string::npos) {
      throw input_error("line " + std::to_string(lineno) + ": expected \"tuple;colour\"");
    }
    try {
      Tuple u = Tuple::parse(line.substr(0, sep));
      std::uint64_t col = parse_u64(line.substr(sep + 1), "colour");
      max_size = std::max(max_size, u.size());
      if (!table.emplace(std::move(u), col).second) {
        throw input_error("line " + std::to_string(lineno) + ": tuple listed twice");
      }
    } catch (const input_error& e) {
      std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw input_error("line " + std::to_string(lineno) + ": " + msg);
    }
  }
  if (!have_palette) throw input_error("missing \"palette N\" header");
  if (!have_arity) arity = max_size;
  return from_table(base, policy, arity, palette, std::move(table));
}

Colouring random_colouring(const Tree& t, Arity policy, std::size_t arity,
                           std::uint64_t palette, std::uint64_t seed) {
  if (palette == 0) throw input_error("palette must be positive");
  std::mt19937_64 rng(seed);
  return Colouring::from_function(t, policy, arity, palette,
                                  [&](const Tuple&) { return rng() % palette; });
}

std::string UniformReport::describe() const {
  return "tuples " + first.str() + " and " + second.str() + " get different colours";
}

namespace {

// Scans the table in canonical order keeping the first tuple per key; the
// first clash is the witness.
template <typename KeyFn>
UniformReport scan_by_key(const Colouring& c, KeyFn&& key_of) {
  UniformReport rep;
  std::map<std::string, std::pair<const Tuple*, std::uint64_t>> first_seen;
  for (const auto& [u, col] : c.table()) {
    auto key = key_of(u);
    if (!key) continue;
    auto [it, fresh] = first_seen.emplace(*key, std::make_pair(&u, col));
    if (fresh) continue;
    ++rep.pairs_checked;
    if (it->second.second != col) {
      rep.ok = false;
      rep.first = *it->second.first;
      rep.second = u;
      return rep;
    }
  }
  return rep;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::uint64_t x : v) {
    out += std::to_string(x);
    out += ',';
  }
  return out;
}

}  // namespace

UniformReport is_uniform(const Colouring& c) {
  return scan_by_key(c, [](const Tuple& u) -> std::optional<std::string> {
    return join_u64(invariant_of(u).serialize());
  });
}

UniformReport is_end_uniform(const Colouring& c) {
  return scan_by_key(c, [](const Tuple& u) -> std::optional<std::string> {
    if (u.empty()) return std::nullopt;
    const std::size_t s = u.size();
    std::string key = u.prefix(s - 1).str();
    key += '#';
    key += std::to_string(u[s - 1].size());
    key += '#';
    key += s >= 2 ? std::to_string(meet(u[s - 2], u[s - 1]).size()) : std::string("none");
    return key;
  });
}

UniformReport is_n_end_uniform(const Colouring& c, std::size_t n) {
  if (n == 0) throw input_error("the shared-prefix count must be positive");
  return scan_by_key(c, [n](const Tuple& u) -> std::optional<std::string> {
    if (u.size() < n) return std::nullopt;
    std::string key = u.prefix(u.size() - n).str();
    key += '#';
    key += join_u64(invariant_of(u).serialize());
    return key;
  });
}

std::map<Tuple, DerivedVector, TupleLess> derived_colouring(const Colouring& c) {
  if (c.policy() != Arity::up_to || c.arity() == 0) {
    throw input_error("the derived table needs an inclusive size cap of at least 1");
  }
  UniformReport rep = is_end_uniform(c);
  if (!rep) throw input_error("not end-uniform: " + rep.describe());
  std::map<Tuple, DerivedVector, TupleLess> out;
  const auto& nodes = c.base().nodes();
  for (const Tuple& u : enumerate_tuples(c.base(), Arity::up_to, c.arity() - 1)) {
    DerivedVector v;
    for (const DecSeq& eta : nodes) {
      if (!u.empty() && !(seq_compare(OrderKind::lex2, u.back(), eta) < 0)) continue;
      Tuple ext = u.extended(eta);
      std::uint64_t cls = class_index_of(ext);
      std::uint64_t col = c.at(ext);
      auto [it, fresh] = v.emplace(cls, col);
      if (!fresh && it->second != col) {
        throw std::logic_error("ambiguous class value at tuple " + u.str());
      }
    }
    out.emplace(u, std::move(v));
  }
  return out;
}

namespace {

constexpr u128 kU128Max = ~u128{0};

u128 add_checked(u128 a, u128 b) {
  if (b > kU128Max - a) throw budget_error("derived vector code exceeds 128 bits");
  return a + b;
}

u128 mul_checked(u128 a, u128 b) {
  if (a != 0 && b > kU128Max / a) throw budget_error("derived vector code exceeds 128 bits");
  return a * b;
}

u128 pair_code(u128 a, u128 b) {
  u128 s = add_checked(a, b);
  u128 t = s % 2 == 0 ? mul_checked(s / 2, s + 1) : mul_checked(s, s / 2 + 1);
  return add_checked(t, b);
}

// Largest w with w*(w+1)/2 <= z, by bisection; overflow counts as too big.
u128 unpair_row(u128 z) {
  u128 lo = 0, hi = (u128{1} << 66);
  while (lo < hi) {
    u128 mid = lo + (hi - lo + 1) / 2;
    bool fits = false;
    try {
      u128 t = mid % 2 == 0 ? mul_checked(mid / 2, mid + 1) : mul_checked(mid, (mid + 1) / 2);
      fits = t <= z;
    } catch (const budget_error&) {
      fits = false;
    }
    if (fits) lo = mid; else hi = mid - 1;
  }
  return lo;
}

void unpair_code(u128 z, u128& a, u128& b) {
  u128 w = unpair_row(z);
  u128 tri = w % 2 == 0 ? (w / 2) * (w + 1) : w * ((w + 1) / 2);
  b = z - tri;
  a = w - b;
}

u128 binomial_checked(u128 m, std::uint64_t k) {
  if (k > m) return 0;
  u128 res = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    res = mul_checked(res, m - k + j) / j;
  }
  return res;
}

}  // namespace

std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out += static_cast<char>('0' + static_cast<unsigned>(v % 10));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

u128 encode_vector(const DerivedVector& v) {
  u128 comb = 0;
  std::uint64_t t = 1;
  for (const auto& [cls, col] : v) {
    (void)col;
    comb = add_checked(comb, binomial_checked(cls, t));
    ++t;
  }
  u128 chain = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) {
    chain = pair_code(it->second, chain);
  }
  return pair_code(static_cast<u128>(v.size()), pair_code(comb, chain));
}

DerivedVector decode_vector(u128 code) {
  u128 r128 = 0, rest = 0;
  unpair_code(code, r128, rest);
  if (r128 > std::numeric_limits<std::uint64_t>::max()) {
    throw input_error("code does not denote a class table");
  }
  std::uint64_t r = static_cast<std::uint64_t>(r128);
  u128 comb = 0, chain = 0;
  unpair_code(rest, comb, chain);
  std::vector<std::uint64_t> support(r, 0);
  for (std::uint64_t t = r; t >= 1; --t) {
    // largest m with C(m, t) <= comb
    u128 lo = t - 1, hi = u128{1} << 70;
    while (lo < hi) {
      u128 mid = lo + (hi - lo + 1) / 2;
      bool fits = false;
      try {
        fits = binomial_checked(mid, static_cast<std::uint64_t>(t)) <= comb;
      } catch (const budget_error&) {
        fits = false;
      }
      if (fits) lo = mid; else hi = mid - 1;
    }
    if (lo > std::numeric_limits<std::uint64_t>::max()) {
      throw input_error("code does not denote a class table");
    }
    support[t - 1] = static_cast<std::uint64_t>(lo);
    comb -= binomial_checked(lo, static_cast<std::uint64_t>(t));
  }
  DerivedVector out;
  for (std::uint64_t t = 0; t < r; ++t) {
    u128 value = 0;
    unpair_code(chain, value, chain);
    if (value > std::numeric_limits<std::uint64_t>::max()) {
      throw input_error("code does not denote a class table");
    }
    out.emplace(support[t], static_cast<std::uint64_t>(value));
  }
  return out;
}

Colouring pushforward(const TreeMap& f, const Colouring& c) {
  Tree domain = Tree::from_nodes(f.domain_nodes());
  EmbedReport rep = check_embedding(f, domain, c.base());
  if (!rep) throw input_error("the map is not an embedding: " + rep.violation);
  return Colouring::from_function(domain, c.policy(), c.arity(), c.palette(),
                                  [&](const Tuple& u) {
                                    std::vector<DecSeq> elems;
                                    elems.reserve(u.size());
                                    for (const DecSeq& e : u.elems()) elems.push_back(f.apply(e));
                                    return c.at(Tuple(std::move(elems)));
                                  });
}

Colouring derived_encoded_colouring(const Colouring& c) {
  auto dc = derived_colouring(c);
  std::map<u128, std::uint64_t> seen;
  std::map<Tuple, std::uint64_t, TupleLess> table;
  for (const auto& [u, v] : dc) {
    u128 code = encode_vector(v);
    auto [it, fresh] = seen.emplace(code, seen.size());
    table.emplace(u, it->second);
  }
  std::uint64_t palette = std::max<std::uint64_t>(seen.size(), 1);
  return Colouring::from_table(c.base(), Arity::up_to, c.arity() - 1, palette,
                               std::move(table));
}

}  // namespace dstree
