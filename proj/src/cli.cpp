#include "dstree/cli.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dstree/ds_tree.hpp"
#include "dstree/ordinal.hpp"
#include "dstree/orders.hpp"
#include "dstree/partition_search.hpp"
#include "dstree/rank.hpp"
#include "dstree/tree_embed.hpp"
#include "dstree/uniformity.hpp"

namespace dstree {

namespace {

Tree load_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return Tree::load(in);
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

Colouring load_colouring_file(const std::string& path, const Tree& base) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return Colouring::load(in, base);
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

Certificate load_cert_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  try {
    return Certificate::load(in);
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::vector<DecSeq> load_seq_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::vector<DecSeq> seqs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      seqs.push_back(DecSeq::parse(line));
    } catch (const input_error& e) {
      throw input_error(path + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return seqs;
}

OrderKind parse_kind(const std::string& name) {
  if (name == "lex1") return OrderKind::lex1;
  if (name == "lex2") return OrderKind::lex2;
  if (name == "lex3") return OrderKind::lex3;
  if (name == "star") return OrderKind::star;
  throw input_error("unknown order \"" + name + "\"; use lex1, lex2, lex3 or star");
}

// Prints to the stream and mirrors into --out when given.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  out << text;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw input_error("cannot write " + out_path);
    f << text;
  }
}

struct ArityFlag {
  Arity policy = Arity::up_to;
  std::size_t cap = 3;
};

ArityFlag parse_arity_flag(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
  if (colon == std::string::npos || (kind != "upto" && kind != "exact")) {
    throw input_error("arity must be \"upto:K\" or \"exact:K\", got \"" + spec + "\"");
  }
  std::string num = spec.substr(colon + 1);
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
    throw input_error("arity must be \"upto:K\" or \"exact:K\", got \"" + spec + "\"");
  }
  return {kind == "upto" ? Arity::up_to : Arity::exact, std::stoull(num)};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trees of decreasing ordinal sequences: orders, ranks, uniform copies"};
  app.name("dstree");
  app.fallthrough();
  app.require_subcommand(1);

  unsigned threads = 1;
  std::size_t node_budget = default_node_budget;
  std::uint64_t search_budget = default_search_budget;
  std::uint64_t seed = 0;
  app.add_option("--threads", threads, "worker threads for searches");
  app.add_option("--node-budget", node_budget, "largest tree the tool will build");
  app.add_option("--search-budget,--budget", search_budget, "step budget for searches");
  app.add_option("--seed", seed, "seed for generated colourings");

  int rc = 0;

  // ---- order ----
  auto* order = app.add_subcommand("order", "compare sequences and build order embeddings");
  order->fallthrough();
  order->require_subcommand(1);

  auto* cmp = order->add_subcommand("cmp", "compare two sequences");
  std::string cmp_kind, cmp_a, cmp_b;
  cmp->add_option("--kind", cmp_kind, "lex1, lex2, lex3 or star")->required();
  cmp->add_option("first", cmp_a, "first sequence")->required();
  cmp->add_option("second", cmp_b, "second sequence")->required();
  cmp->callback([&] {
    OrderKind kind = parse_kind(cmp_kind);
    DecSeq a = DecSeq::parse(cmp_a);
    DecSeq b = DecSeq::parse(cmp_b);
    if (kind == OrderKind::star) {
      if (a == b) out << "equal\n";
      else if (star_less(a, b)) out << "less\n";
      else if (star_less(b, a)) out << "greater\n";
      else out << "incomparable\n";
      return;
    }
    auto c = seq_compare(kind, a, b);
    out << (c < 0 ? "less" : c > 0 ? "greater" : "equal") << '\n';
  });

  auto* omin = order->add_subcommand("min", "least member of a set of sequences");
  std::string min_kind, min_file;
  omin->add_option("--kind", min_kind, "lex1 or lex2")->required();
  omin->add_option("--file", min_file, "file listing one sequence per line")->required();
  omin->callback([&] {
    OrderKind kind = parse_kind(min_kind);
    if (kind != OrderKind::lex1 && kind != OrderKind::lex2) {
      throw input_error("the minimum is computed for lex1 or lex2");
    }
    auto seqs = load_seq_list(min_file);
    DecSeq m = kind == OrderKind::lex1 ? min_lex1(seqs) : min_lex2(seqs);
    out << m.str() << '\n';
  });

  auto* haus = order->add_subcommand("hausdorff", "embedding rows for a sum-of-copies order");
  std::uint64_t h_alpha = 0, h_beta = 0;
  bool h_reversed = false;
  haus->add_option("--alpha", h_alpha, "length bound of the base sequences")->required();
  haus->add_option("--beta", h_beta, "number of copies")->required();
  haus->add_flag("--reversed", h_reversed, "enumerate the copies in reversed order");
  haus->callback([&] {
    if (h_alpha > 1u << 20 || h_beta > 1u << 20) {
      throw budget_error("parameters beyond 2^20 are not enumerated");
    }
    auto rows = hausdorff_table(static_cast<unsigned>(h_alpha),
                                static_cast<unsigned>(h_beta), h_reversed, node_budget);
    for (const auto& row : rows) {
      out << row.gamma.str() << ';' << row.eta.str() << ';' << row.image.str() << '\n';
    }
  });

  // ---- rank ----
  auto* rank_cmd = app.add_subcommand("rank", "ranks of tree nodes");
  std::string rank_file, rank_node, rank_lambda;
  std::uint64_t rank_mu = 1;
  rank_cmd->add_option("--file", rank_file, "tree file")->required();
  rank_cmd->add_option("--mu", rank_mu, "children needed per step")->required();
  rank_cmd->add_option("--node", rank_node, "print one node only");
  rank_cmd->add_option("--lambda", rank_lambda, "cap the rank at this ordinal");
  rank_cmd->callback([&] {
    Tree t = load_tree_file(rank_file);
    std::optional<Ordinal> lambda;
    if (!rank_lambda.empty()) lambda = Ordinal::parse(rank_lambda);
    auto cap = [&](RankValue r) {
      if (r < 0 || !lambda) return r;
      if (*lambda < Ordinal(static_cast<std::uint64_t>(r))) {
        return static_cast<RankValue>(lambda->as_natural());
      }
      return r;
    };
    auto ranks = rank_all(t, rank_mu);
    if (!rank_node.empty()) {
      DecSeq node = DecSeq::parse(rank_node);
      auto idx = t.index_of(node);
      RankValue r = idx ? cap(ranks[*idx]) : RankValue{-1};
      out << node.str() << ';' << r << '\n';
      return;
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      out << t.nodes()[i].str() << ';' << cap(ranks[i]) << '\n';
    }
  });

  // ---- tree ----
  auto* tree_cmd = app.add_subcommand("tree", "build and check tree files");
  tree_cmd->fallthrough();
  tree_cmd->require_subcommand(1);

  auto* tgen = tree_cmd->add_subcommand("gen", "write the full tree on n entries");
  unsigned tgen_n = 0;
  std::string tgen_out;
  tgen->add_option("--n", tgen_n, "entries 0..n-1")->required();
  tgen->add_option("--out", tgen_out, "also write to this file");
  tgen->callback([&] {
    std::ostringstream text;
    full_tree(tgen_n, node_budget).save(text);
    emit(text.str(), tgen_out, out);
  });

  auto* tval = tree_cmd->add_subcommand("validate", "check a tree file for closure");
  std::string tval_file;
  tval->add_option("--file", tval_file, "tree file")->required();
  tval->callback([&] {
    auto seqs = load_seq_list(tval_file);
    if (auto bad = Tree::check_nodes(seqs)) {
      out << *bad << '\n';
      rc = 1;
      return;
    }
    out << "ok\n";
  });

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate inputs");
  gen->fallthrough();
  gen->require_subcommand(1);

  auto* gcol = gen->add_subcommand("colouring", "seeded random colouring of a tree");
  std::string gcol_tree, gcol_arity = "upto:3", gcol_out;
  std::uint64_t gcol_palette = 2;
  gcol->add_option("--tree", gcol_tree, "tree file")->required();
  gcol->add_option("--palette", gcol_palette, "number of colours")->required();
  gcol->add_option("--arity", gcol_arity, "upto:K or exact:K (default upto:3)");
  gcol->add_option("--out", gcol_out, "also write to this file");
  gcol->callback([&] {
    Tree t = load_tree_file(gcol_tree);
    ArityFlag a = parse_arity_flag(gcol_arity);
    std::ostringstream text;
    random_colouring(t, a.policy, a.cap, gcol_palette, seed).save(text);
    emit(text.str(), gcol_out, out);
  });

  // ---- search ----
  auto* search = app.add_subcommand("search", "look for uniform copies and bounds");
  search->fallthrough();
  search->require_subcommand(1);

  auto* scopy = search->add_subcommand("copy", "first copy satisfying the mode");
  std::string scopy_tree, scopy_col, scopy_mode, scopy_out;
  unsigned scopy_m = 0;
  scopy->add_option("--tree", scopy_tree, "host tree file")->required();
  scopy->add_option("--colouring", scopy_col, "colouring file")->required();
  scopy->add_option("--m", scopy_m, "depth of the copy")->required();
  scopy->add_option("--mode", scopy_mode, "end, nend:K or level")->required();
  scopy->add_option("--out", scopy_out, "also write the certificate here");
  scopy->callback([&] {
    Tree host = load_tree_file(scopy_tree);
    Colouring c = load_colouring_file(scopy_col, host);
    auto cert = find_uniform_copy(c, scopy_m, SearchMode::parse(scopy_mode), search_budget,
                                  node_budget);
    if (!cert) {
      out << "none\n";
      rc = 1;
      return;
    }
    std::ostringstream text;
    cert->save(text);
    emit(text.str(), scopy_out, out);
  });

  auto* snum = search->add_subcommand("number", "least host size that forces a copy");
  std::string snum_mode;
  unsigned snum_m = 0, snum_bound = 0;
  std::uint64_t snum_palette = 2;
  std::size_t snum_cap = 3;
  snum->add_option("--m", snum_m, "depth of the forced copy")->required();
  snum->add_option("--mode", snum_mode, "end, nend:K or level")->required();
  snum->add_option("--palette", snum_palette, "number of colours")->required();
  snum->add_option("--bound", snum_bound, "largest host size to try")->required();
  snum->add_option("--cap", snum_cap, "tuple size cap for end and nend modes");
  snum->callback([&] {
    auto n = partition_number(snum_m, SearchMode::parse(snum_mode), snum_palette, snum_bound,
                              search_budget, threads, snum_cap, node_budget);
    if (!n) {
      out << "exceeds bound\n";
      rc = 1;
      return;
    }
    out << *n << '\n';
  });

  auto* spipe = search->add_subcommand("pipeline", "stepping-up over a chain of trees");
  std::string spipe_chain, spipe_col, spipe_out;
  std::size_t spipe_n = 0;
  spipe->add_option("--chain", spipe_chain, "comma-separated tree files, small to large")
      ->required();
  spipe->add_option("--colouring", spipe_col, "colouring on the last chain tree")->required();
  spipe->add_option("--n", spipe_n, "how many end elements the result controls")->required();
  spipe->add_option("--out", spipe_out, "also write the certificate here");
  spipe->callback([&] {
    std::vector<Tree> chain;
    std::size_t start = 0;
    while (true) {
      auto pos = spipe_chain.find(',', start);
      chain.push_back(load_tree_file(spipe_chain.substr(
          start, pos == std::string::npos ? std::string::npos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    Colouring c = load_colouring_file(spipe_col, chain.back());
    PipelineOutcome res = run_pipeline(chain, c, spipe_n, search_budget, node_budget);
    if (!res.certificate) {
      out << "none at stage " << res.failed_stage << ": " << res.detail << '\n';
      rc = 1;
      return;
    }
    std::ostringstream text;
    res.certificate->save(text);
    emit(text.str(), spipe_out, out);
  });

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "re-check a certificate");
  std::string ver_tree, ver_col, ver_cert;
  ver->add_option("--tree", ver_tree, "host tree file")->required();
  ver->add_option("--colouring", ver_col, "colouring file")->required();
  ver->add_option("--cert", ver_cert, "certificate file")->required();
  ver->callback([&] {
    Tree host = load_tree_file(ver_tree);
    Colouring c = load_colouring_file(ver_col, host);
    Certificate cert = load_cert_file(ver_cert);
    VerifyResult res = verify_certificate(host, c, cert);
    if (res.ok) {
      out << "valid\n";
    } else {
      out << "invalid: " << res.reason << '\n';
      rc = 1;
    }
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const input_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const budget_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return rc;
}

}  // namespace dstree
