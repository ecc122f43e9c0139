#include "dstree/partition_search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "dstree/orders.hpp"
#include "dstree/similarity.hpp"

namespace dstree {

SearchMode SearchMode::parse(std::string_view token) {
  if (token == "end") return SearchMode{Kind::end_uniform, 0};
  if (token == "level") return SearchMode{Kind::level_unary, 0};
  if (token.rfind("nend:", 0) == 0) {
    std::string num(token.substr(5));
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
      throw input_error("mode \"" + std::string(token) + "\" needs a number after \"nend:\"");
    }
    std::size_t n = std::stoull(num);
    if (n == 0) throw input_error("the shared-prefix count must be positive");
    return SearchMode{Kind::n_end_uniform, n};
  }
  throw input_error("unknown mode \"" + std::string(token) + "\"; use end, nend:K or level");
}

std::string SearchMode::str() const {
  switch (kind) {
    case Kind::end_uniform: return "end";
    case Kind::level_unary: return "level";
    case Kind::n_end_uniform: return "nend:" + std::to_string(n);
  }
  return "end";
}

UniformReport mode_predicate(const SearchMode& mode, const Colouring& c) {
  switch (mode.kind) {
    case SearchMode::Kind::end_uniform:
      return is_end_uniform(c);
    case SearchMode::Kind::n_end_uniform:
      return is_n_end_uniform(c, mode.n);
    case SearchMode::Kind::level_unary:
      break;
  }
  bool have_singletons = (c.policy() == Arity::up_to && c.arity() >= 1) ||
                         (c.policy() == Arity::exact && c.arity() == 1);
  if (!have_singletons) throw input_error("the level test needs singleton colours");
  UniformReport rep;
  std::map<std::size_t, std::pair<const Tuple*, std::uint64_t>> first_seen;
  for (const auto& [u, col] : c.table()) {
    if (u.size() != 1 || u[0].empty()) continue;  // the root is unconstrained
    auto [it, fresh] = first_seen.emplace(u[0].size(), std::make_pair(&u, col));
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

void Certificate::save(std::ostream& out) const {
  out << mode.str() << ';' << m << ';' << palette << '\n';
  map.save(out);
}

Certificate Certificate::load(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty() && line[0] != '#') break;
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(';', start);
    parts.push_back(line.substr(start, pos == std::string::npos ? std::string::npos
                                                                : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) {
    throw input_error("certificate header must be \"mode;m;palette\", got \"" + line + "\"");
  }
  Certificate cert;
  cert.mode = SearchMode::parse(parts[0]);
  for (int i : {1, 2}) {
    if (parts[i].empty() || parts[i].find_first_not_of("0123456789") != std::string::npos) {
      throw input_error("certificate header must be \"mode;m;palette\", got \"" + line + "\"");
    }
  }
  cert.m = std::stoull(parts[1]);
  cert.palette = std::stoull(parts[2]);
  cert.map = TreeMap::load(in);
  return cert;
}

std::optional<Certificate> find_uniform_copy(const Colouring& c, unsigned m,
                                             const SearchMode& mode,
                                             std::uint64_t search_budget,
                                             std::size_t node_budget) {
  const Tree& host = c.base();
  if (m > host.depth()) {
    throw input_error("the host tree has depth " + std::to_string(host.depth()) +
                      ", below the requested " + std::to_string(m));
  }
  Tree shape = full_tree(m, node_budget);
  std::optional<Certificate> found;
  std::uint64_t walked = 0;
  bool out_of_budget = false;
  for_each_copy_of(shape, host, [&](const TreeMap& f) {
    if (++walked > search_budget) {
      out_of_budget = true;
      return false;
    }
    Colouring pulled = pushforward(f, c);
    UniformReport rep = mode_predicate(mode, pulled);
    if (!rep.ok) return true;
    found = Certificate{mode, m, c.palette(), f, rep.pairs_checked};
    return false;
  });
  if (out_of_budget) {
    throw budget_error("the copy walk exceeded the budget after " +
                       std::to_string(search_budget) + " copies");
  }
  return found;
}

namespace {

// A copy pinned down to colour slots: it is satisfied exactly when every
// group is monochromatic. Groups with fewer than two slots are dropped.
struct SlotCopy {
  std::vector<std::vector<std::uint32_t>> groups;
  std::uint32_t last_slot = 0;
};

struct SlotProblem {
  Tree host;
  std::vector<Tuple> slots;      // colouring domain in canonical order
  std::vector<SlotCopy> copies;  // every copy carries at least one group
  std::vector<std::vector<std::uint32_t>> copies_at;  // by last slot
  bool trivially_satisfied = false;  // some copy has no nontrivial group
  Arity policy = Arity::up_to;
  std::size_t arity = 0;
};

// Group keys mirror the uniformity scans, evaluated on the shape side; an
// embedding changes none of the ingredients.
std::optional<std::string> group_key(const SearchMode& mode, const Tuple& u) {
  switch (mode.kind) {
    case SearchMode::Kind::end_uniform: {
      if (u.empty()) return std::nullopt;
      const std::size_t s = u.size();
      std::string key = u.prefix(s - 1).str();
      key += '#';
      key += std::to_string(u[s - 1].size());
      key += '#';
      key += s >= 2 ? std::to_string(meet(u[s - 2], u[s - 1]).size()) : std::string("none");
      return key;
    }
    case SearchMode::Kind::n_end_uniform: {
      if (u.size() < mode.n) return std::nullopt;
      std::string key = u.prefix(u.size() - mode.n).str();
      key += '#';
      for (std::uint64_t x : invariant_of(u).serialize()) {
        key += std::to_string(x);
        key += ',';
      }
      return key;
    }
    case SearchMode::Kind::level_unary: {
      if (u.size() != 1 || u[0].empty()) return std::nullopt;
      return std::to_string(u[0].size());
    }
  }
  return std::nullopt;
}

SlotProblem build_problem(unsigned host_n, unsigned target_m, const SearchMode& mode,
                          std::size_t tuple_cap, std::size_t node_budget) {
  SlotProblem prob;
  prob.host = full_tree(host_n, node_budget);
  if (mode.kind == SearchMode::Kind::level_unary) {
    prob.policy = Arity::exact;
    prob.arity = 1;
  } else {
    prob.policy = Arity::up_to;
    prob.arity = tuple_cap;
  }
  prob.slots = enumerate_tuples(prob.host, prob.policy, prob.arity);
  auto slot_of = [&](const Tuple& u) -> std::uint32_t {
    auto it = std::lower_bound(prob.slots.begin(), prob.slots.end(), u, TupleLess{});
    return static_cast<std::uint32_t>(it - prob.slots.begin());
  };
  Tree shape = full_tree(target_m, node_budget);
  auto shape_tuples = enumerate_tuples(shape, prob.policy, prob.arity);
  for_each_copy_of(shape, prob.host, [&](const TreeMap& f) {
    std::map<std::string, std::vector<std::uint32_t>> by_key;
    for (const Tuple& u : shape_tuples) {
      auto key = group_key(mode, u);
      if (!key) continue;
      std::vector<DecSeq> elems;
      elems.reserve(u.size());
      for (const DecSeq& e : u.elems()) elems.push_back(f.apply(e));
      by_key[*key].push_back(slot_of(Tuple(std::move(elems))));
    }
    SlotCopy copy;
    for (auto& [key, slots] : by_key) {
      if (slots.size() < 2) continue;
      for (std::uint32_t s : slots) copy.last_slot = std::max(copy.last_slot, s);
      copy.groups.push_back(std::move(slots));
    }
    if (copy.groups.empty()) {
      prob.trivially_satisfied = true;
      return false;
    }
    prob.copies.push_back(std::move(copy));
    return true;
  });
  prob.copies_at.assign(prob.slots.size(), {});
  for (std::uint32_t i = 0; i < prob.copies.size(); ++i) {
    prob.copies_at[prob.copies[i].last_slot].push_back(i);
  }
  return prob;
}

bool copy_satisfied(const SlotCopy& copy, const std::vector<std::uint64_t>& colour) {
  for (const auto& group : copy.groups) {
    std::uint64_t c0 = colour[group[0]];
    for (std::size_t i = 1; i < group.size(); ++i) {
      if (colour[group[i]] != c0) goto next_group;
    }
    return true;
  next_group:;
  }
  return false;
}

struct SubtreeResult {
  enum class Outcome { none, found, cutoff } outcome = Outcome::none;
  std::uint64_t work = 0;                 // total, or work at the find
  std::vector<std::uint64_t> colours;     // engaged when found
};

// Depth-first walk below one frontier state. Colour names are canonical:
// slot s may reuse any earlier colour or introduce the next fresh one.
struct SubtreeWalker {
  const SlotProblem& prob;
  std::uint64_t palette;
  std::uint64_t cap;
  std::vector<std::uint64_t> colour;
  SubtreeResult result;

  bool dfs(std::size_t depth, std::uint64_t used) {
    std::uint64_t top = std::min(used + 1, palette);
    for (std::uint64_t col = 0; col < top; ++col) {
      if (++result.work > cap) {
        result.outcome = SubtreeResult::Outcome::cutoff;
        return false;
      }
      colour[depth] = col;
      bool satisfied = false;
      for (std::uint32_t ci : prob.copies_at[depth]) {
        if (copy_satisfied(prob.copies[ci], colour)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (depth + 1 == prob.slots.size()) {
        result.outcome = SubtreeResult::Outcome::found;
        result.colours = colour;
        return false;
      }
      if (!dfs(depth + 1, std::max(used, col + 1))) return false;
    }
    return true;
  }
};

struct Frontier {
  std::vector<std::uint64_t> colours;  // first P slots
  std::uint64_t used = 0;
  std::uint64_t spine_before = 0;      // phase-one work preceding this state
};

}  // namespace

std::optional<Colouring> adversary_search(unsigned host_n, unsigned target_m,
                                          const SearchMode& mode, std::uint64_t palette,
                                          std::uint64_t search_budget, unsigned threads,
                                          std::size_t tuple_cap, std::size_t node_budget) {
  if (palette == 0) throw input_error("palette must be positive");
  SlotProblem prob = build_problem(host_n, target_m, mode, tuple_cap, node_budget);
  if (prob.trivially_satisfied) return std::nullopt;
  const std::size_t nslots = prob.slots.size();

  auto make_colouring = [&](const std::vector<std::uint64_t>& colours) {
    std::map<Tuple, std::uint64_t, TupleLess> table;
    for (std::size_t i = 0; i < nslots; ++i) table.emplace(prob.slots[i], colours[i]);
    return Colouring::from_table(prob.host, prob.policy, prob.arity, palette,
                                 std::move(table));
  };

  if (prob.copies.empty()) {
    // Nothing to satisfy: the all-zero colouring is the canonical first leaf.
    return make_colouring(std::vector<std::uint64_t>(nslots, 0));
  }

  // Split depth is a function of the problem alone, never of the thread
  // count, so budget accounting cannot drift between runs.
  std::size_t split = 0;
  std::uint64_t frontier_bound = 1;
  while (split < nslots && frontier_bound <= 4096) {
    frontier_bound *= std::min<std::uint64_t>(split + 1, palette);
    if (frontier_bound > 4096) break;
    ++split;
  }

  // Phase one: walk the first `split` levels exactly as the sequential
  // search would, collecting the surviving states in order. This part is
  // small by construction, so it always runs to completion; whether the
  // budget was crossed, and where, falls out of the fold below.
  std::vector<Frontier> frontier;
  std::uint64_t spine_work = 0;
  std::vector<std::uint64_t> colour(nslots, 0);
  auto spine_dfs = [&](auto&& self, std::size_t depth, std::uint64_t used) -> void {
    if (depth == split) {
      Frontier f;
      f.colours.assign(colour.begin(), colour.begin() + split);
      f.used = used;
      f.spine_before = spine_work;
      frontier.push_back(std::move(f));
      return;
    }
    std::uint64_t top = std::min(used + 1, palette);
    for (std::uint64_t col = 0; col < top; ++col) {
      ++spine_work;
      colour[depth] = col;
      bool satisfied = false;
      for (std::uint32_t ci : prob.copies_at[depth]) {
        if (copy_satisfied(prob.copies[ci], colour)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      self(self, depth + 1, std::max(used, col + 1));
    }
  };
  spine_dfs(spine_dfs, 0, 0);

  // Hosts whose whole slot list fits inside the split are already decided.
  if (split == nslots) {
    for (const Frontier& f : frontier) {
      if (f.spine_before > search_budget) break;  // found past the budget
      return make_colouring(f.colours);
    }
    if (spine_work > search_budget) {
      throw budget_error("the colouring walk exceeded the budget");
    }
    return std::nullopt;
  }

  // Phase two: measure each frontier subtree independently.
  const std::uint64_t cap = search_budget + 1;
  std::vector<SubtreeResult> results(frontier.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= frontier.size()) return;
      SubtreeWalker walker{prob, palette, cap, std::vector<std::uint64_t>(nslots, 0), {}};
      std::copy(frontier[i].colours.begin(), frontier[i].colours.end(),
                walker.colour.begin());
      walker.dfs(split, frontier[i].used);
      results[i] = std::move(walker.result);
    }
  };
  unsigned nthreads = std::max(1u, threads);
  nthreads = static_cast<unsigned>(
      std::min<std::size_t>(nthreads, std::max<std::size_t>(frontier.size(), 1)));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Sequential fold: replay the walk's budget accounting in order.
  std::uint64_t done = 0;  // subtree work so far
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const std::uint64_t base = frontier[i].spine_before + done;
    switch (results[i].outcome) {
      case SubtreeResult::Outcome::found:
        if (base + results[i].work > search_budget) {
          throw budget_error("the colouring walk exceeded the budget");
        }
        return make_colouring(results[i].colours);
      case SubtreeResult::Outcome::cutoff:
        throw budget_error("the colouring walk exceeded the budget");
      case SubtreeResult::Outcome::none:
        done += results[i].work;
        if (frontier[i].spine_before + done > search_budget) {
          throw budget_error("the colouring walk exceeded the budget");
        }
        break;
    }
  }
  if (spine_work + done > search_budget) {
    throw budget_error("the colouring walk exceeded the budget");
  }
  return std::nullopt;
}

std::optional<unsigned> partition_number(unsigned target_m, const SearchMode& mode,
                                         std::uint64_t palette, unsigned bound,
                                         std::uint64_t search_budget, unsigned threads,
                                         std::size_t tuple_cap, std::size_t node_budget) {
  for (unsigned n = 1; n <= bound; ++n) {
    std::optional<Colouring> adv;
    try {
      adv = adversary_search(n, target_m, mode, palette, search_budget, threads, tuple_cap,
                             node_budget);
    } catch (const budget_error&) {
      throw budget_error("unknown at " + std::to_string(n));
    }
    if (!adv) return n;
  }
  return std::nullopt;
}

PipelineOutcome run_pipeline(const std::vector<Tree>& chain, const Colouring& c,
                             std::size_t n, std::uint64_t search_budget,
                             std::size_t node_budget) {
  (void)node_budget;
  if (n == 0) throw input_error("stepping up needs a positive n");
  if (chain.size() != n + 1) {
    throw input_error("a chain of " + std::to_string(chain.size()) +
                      " trees steps up " + std::to_string(chain.size() ? chain.size() - 1 : 0) +
                      " times, not " + std::to_string(n));
  }
  if (!(c.base() == chain.back())) {
    throw input_error("the colouring must live on the last tree of the chain");
  }
  if (c.policy() != Arity::up_to || c.arity() < n) {
    throw input_error("stepping up " + std::to_string(n) +
                      " times needs an inclusive size cap of at least " + std::to_string(n));
  }
  std::vector<TreeMap> stage_maps;
  Colouring cur = c;
  for (std::size_t stage = 1; stage <= n; ++stage) {
    const Tree& shape = chain[n - stage];
    std::optional<TreeMap> chosen;
    std::uint64_t walked = 0;
    bool out_of_budget = false;
    for_each_copy_of(shape, cur.base(), [&](const TreeMap& f) {
      if (++walked > search_budget) {
        out_of_budget = true;
        return false;
      }
      Colouring pulled = pushforward(f, cur);
      if (!is_end_uniform(pulled).ok) return true;
      chosen = f;
      return false;
    });
    if (out_of_budget) {
      throw budget_error("the copy walk exceeded the budget at stage " +
                         std::to_string(stage));
    }
    if (!chosen) {
      return {std::nullopt, stage,
              "no end-uniform copy of chain tree " + std::to_string(n - stage) +
                  " in chain tree " + std::to_string(n - stage + 1)};
    }
    stage_maps.push_back(*chosen);
    if (stage < n) {
      cur = derived_encoded_colouring(pushforward(*chosen, cur));
    }
  }
  TreeMap total = stage_maps.back();
  for (std::size_t i = stage_maps.size() - 1; i-- > 0;) {
    total = total.then(stage_maps[i]);
  }
  UniformReport rep = is_n_end_uniform(pushforward(total, c), n);
  if (!rep.ok) throw std::logic_error("stepping up produced a non-uniform copy");
  Certificate cert{SearchMode{SearchMode::Kind::n_end_uniform, n}, chain.front().depth(),
                   c.palette(), total, rep.pairs_checked};
  return {cert, 0, ""};
}

VerifyResult verify_certificate(const Tree& host, const Colouring& c,
                                const Certificate& cert) {
  try {
    Tree domain = Tree::from_nodes(cert.map.domain_nodes());
    if (cert.m != domain.depth()) {
      return {false, "certificate says depth " + std::to_string(cert.m) +
                         " but the mapped tree has depth " + std::to_string(domain.depth())};
    }
    if (cert.palette != c.palette()) {
      return {false, "certificate palette " + std::to_string(cert.palette) +
                         " differs from the colouring palette " + std::to_string(c.palette())};
    }
    EmbedReport emb = check_embedding(cert.map, domain, host);
    if (!emb.ok) return {false, emb.violation};
    UniformReport rep = mode_predicate(cert.mode, pushforward(cert.map, c));
    if (!rep.ok) return {false, "the mode predicate fails: " + rep.describe()};
  } catch (const input_error& e) {
    return {false, e.what()};
  }
  return {true, ""};
}

}  // namespace dstree
