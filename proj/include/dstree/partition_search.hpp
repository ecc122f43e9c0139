#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dstree/tree_embed.hpp"
#include "dstree/uniformity.hpp"

namespace dstree {

/// What a copy is asked to satisfy. Tokens: "end", "nend:K", "level".
struct SearchMode {
  enum class Kind { end_uniform, n_end_uniform, level_unary };
  Kind kind = Kind::end_uniform;
  std::size_t n = 0;  // for n_end_uniform

  static SearchMode parse(std::string_view token);
  std::string str() const;

  friend bool operator==(const SearchMode&, const SearchMode&) = default;
};

/// Evaluates the mode's predicate against a colouring. level_unary asks each
/// level of the base tree beyond the root to be monochromatic on singletons.
UniformReport mode_predicate(const SearchMode& mode, const Colouring& c);

inline constexpr std::uint64_t default_search_budget = std::uint64_t{1} << 26;

struct Certificate {
  SearchMode mode;
  std::size_t m = 0;  // depth of the embedded tree
  std::uint64_t palette = 0;
  TreeMap map;
  std::uint64_t checked_pairs = 0;  // informational, not serialized

  /// File form: header "mode;m;palette", then the map's lines.
  static Certificate load(std::istream& in);
  void save(std::ostream& out) const;
};

/// First copy (in the canonical enumeration order) of the full tree on m
/// entries whose pulled-back colouring satisfies the mode. Throws input_error
/// when m exceeds the host depth, budget_error when the copy walk exceeds the
/// budget.
std::optional<Certificate> find_uniform_copy(const Colouring& c, unsigned m,
                                             const SearchMode& mode,
                                             std::uint64_t search_budget = default_search_budget,
                                             std::size_t node_budget = default_node_budget);

/// Searches for a colouring of the full tree on host_n entries that leaves
/// no copy of the full tree on target_m entries satisfying the mode. Colour
/// names are canonicalised by first occurrence, so the first hit is
/// deterministic; threads only split the same walk. Tuple modes colour
/// tuples up to tuple_cap. Throws budget_error when the walk is cut short.
std::optional<Colouring> adversary_search(unsigned host_n, unsigned target_m,
                                          const SearchMode& mode, std::uint64_t palette,
                                          std::uint64_t search_budget = default_search_budget,
                                          unsigned threads = 1,
                                          std::size_t tuple_cap = 3,
                                          std::size_t node_budget = default_node_budget);

/// Least N <= bound such that every palette-colouring of the full tree on N
/// entries admits a copy satisfying the mode; nothing when every N up to the
/// bound still has an adversary. Each N gets a fresh budget; running out
/// raises budget_error naming the undecided N.
std::optional<unsigned> partition_number(unsigned target_m, const SearchMode& mode,
                                         std::uint64_t palette, unsigned bound,
                                         std::uint64_t search_budget = default_search_budget,
                                         unsigned threads = 1,
                                         std::size_t tuple_cap = 3,
                                         std::size_t node_budget = default_node_budget);

struct PipelineOutcome {
  std::optional<Certificate> certificate;
  std::size_t failed_stage = 0;  // 1-based position in the chain when empty
  std::string detail;
};

/// Stepping-up over a chain T_0,...,T_k with a colouring on T_k and n = k:
/// each stage finds the first end-uniform copy of the previous tree and
/// passes the encoded derived colouring down; the composed map is returned
/// once verified n-end-uniform. The colouring needs policy up_to with cap at
/// least n.
PipelineOutcome run_pipeline(const std::vector<Tree>& chain, const Colouring& c,
                             std::size_t n,
                             std::uint64_t search_budget = default_search_budget,
                             std::size_t node_budget = default_node_budget);

struct VerifyResult {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Re-derives everything a certificate claims: the mapped nodes form a tree
/// of depth m, the palette matches, the map embeds that tree into the host,
/// and the pulled-back colouring satisfies the mode.
VerifyResult verify_certificate(const Tree& host, const Colouring& c,
                                const Certificate& cert);

}  // namespace dstree
