// rwta: subtree kernels and root-weighted tree automata from the command line.
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 parse or alphabet error,
// 3 oracle or check mismatch, 4 weight overflow.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwta.hpp"

namespace {

using namespace rwta;
using json = nlohmann::ordered_json;

constexpr int exit_usage = 1;
constexpr int exit_parse = 2;
constexpr int exit_mismatch = 3;
constexpr int exit_overflow = 4;

struct Failure {
  int code;
  std::string message;
};

Corpus load_corpus(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Failure{exit_usage, e.what()};
  }
  try {
    return parse_corpus(text);
  } catch (const ParseError& e) {
    throw Failure{exit_parse, path + ":" + e.what()};
  }
}

// Corpus or dump, decided by content.
NaturalRwta load_automaton(const std::string& path, bool indexed_from_corpus = false) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Failure{exit_usage, e.what()};
  }
  try {
    if (looks_like_dump(text)) return parse_automaton<Natural>(text);
    Corpus corpus = parse_corpus(text);
    if (indexed_from_corpus) return build_indexed_subtree_automaton(corpus.trees).automaton;
    return subtree_automaton_language(corpus.trees);
  } catch (const ParseError& e) {
    throw Failure{exit_parse, path + ":" + e.what()};
  }
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{exit_usage, "cannot write '" + path + "'"};
  out << content;
}

// ---- kernel ----------------------------------------------------------------

struct KernelArgs {
  std::string left, right;
  std::string format = "tsv";
  std::string kind = "st";
  std::vector<std::string> oracles;
  std::string dump_automaton, dump_series;
  bool timing = false;
};

int cmd_kernel(const KernelArgs& args) {
  Corpus left = load_corpus(args.left);
  Corpus right = load_corpus(args.right);
  try {
    merge(left.alphabet, right.alphabet);
  } catch (const AlphabetMismatch& e) {
    throw Failure{exit_parse, std::string("alphabet mismatch between corpora: ") + e.what()};
  }

  if (args.kind == "sst") {
    // Subset-tree counts have no automaton counterpart here; only the dynamic programme applies.
    if (!args.oracles.empty()) throw Failure{exit_usage, "--oracle applies to the st kernel only"};
    const std::uint64_t value = dp_kernel_languages(left.trees, right.trees, TreeKernelKind::sst);
    if (args.format == "structured") {
      std::cout << json{{"kernel", "sst"}, {"value", value}}.dump(2) << '\n';
    } else {
      std::cout << "value\t" << value << '\n';
    }
    return 0;
  }

  KernelReport report = subtree_kernel(left.trees, right.trees);
  json oracle_results = json::object();
  bool mismatch = false;
  for (const auto& name : args.oracles) {
    std::uint64_t value = name == "direct" ? ker_series_direct(left.trees, right.trees)
                                           : dp_kernel_languages(left.trees, right.trees, TreeKernelKind::st);
    oracle_results[name] = {{"value", value}, {"agrees", value == report.value}};
    if (value != report.value) {
      mismatch = true;
      std::cerr << "oracle " << name << " gives " << value << ", automaton kernel gives " << report.value << '\n';
    }
  }

  if (!args.dump_automaton.empty()) {
    NaturalRwta a1 = subtree_automaton_language(left.trees);
    NaturalRwta a2 = subtree_automaton_language(right.trees);
    write_file(args.dump_automaton, dump_automaton(rwta_product(a1, a2)));
  }
  if (!args.dump_series.empty()) {
    std::ostringstream out;
    write_series(out, hadamard_product(subtree_series(left.trees), subtree_series(right.trees)));
    write_file(args.dump_series, out.str());
  }

  if (args.format == "structured") {
    json doc;
    doc["kernel"] = "st";
    doc["value"] = report.value;
    json rows = json::array();
    for (const auto& row : report.common_subtrees) {
      rows.push_back({{"tree", format_tree(row.tree)}, {"left", row.left}, {"right", row.right}, {"product", row.product}});
    }
    doc["common_subtrees"] = rows;
    doc["sizes"] = {{"left", report.left_size}, {"right", report.right_size}, {"common", report.common_count}};
    if (!args.oracles.empty()) doc["oracles"] = oracle_results;
    if (args.timing) {
      doc["timing"] = {{"build_left", report.timing.build_left},
                       {"build_right", report.timing.build_right},
                       {"product", report.timing.product},
                       {"total", report.timing.total}};
    }
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << "value\t" << report.value << '\n';
    for (const auto& row : report.common_subtrees) {
      std::cout << format_tree(row.tree) << '\t' << row.left << '\t' << row.right << '\t' << row.product << '\n';
    }
    for (const auto& name : args.oracles) {
      std::cout << "# oracle " << name << '\t' << oracle_results[name]["value"].get<std::uint64_t>() << '\n';
    }
    if (args.timing) {
      std::cout << "# timing build_left " << report.timing.build_left << " build_right " << report.timing.build_right
                << " product " << report.timing.product << " total " << report.timing.total << '\n';
    }
  }
  return mismatch ? exit_mismatch : 0;
}

// ---- automaton -------------------------------------------------------------

struct AutomatonArgs {
  std::string op;
  std::vector<std::string> inputs;
  std::string dump;
};

int cmd_automaton(const AutomatonArgs& args) {
  const bool binary = args.op == "sum" || args.op == "product";
  if (binary != (args.inputs.size() == 2) || args.inputs.empty()) {
    throw Failure{exit_usage, binary ? args.op + " needs two inputs" : args.op + " needs one input"};
  }
  NaturalRwta result;
  try {
    if (args.op == "build") {
      result = load_automaton(args.inputs[0]);
    } else if (args.op == "build-indexed") {
      result = load_automaton(args.inputs[0], true);
    } else if (args.op == "sequentialize") {
      result = sequentialize(load_automaton(args.inputs[0], true));
    } else if (args.op == "quotient-h") {
      NaturalRwta a = load_automaton(args.inputs[0], true);
      result = quotient(a, h_classifier(a));
    } else if (args.op == "sum") {
      result = rwta_sum(load_automaton(args.inputs[0]), load_automaton(args.inputs[1]));
    } else {
      result = rwta_product(load_automaton(args.inputs[0]), load_automaton(args.inputs[1]));
    }
  } catch (const AlphabetMismatch& e) {
    throw Failure{exit_parse, std::string("alphabet mismatch: ") + e.what()};
  }
  std::ostream& info = args.dump == "-" ? std::cerr : std::cout;
  info << "states\t" << result.state_count() << '\n' << "transitions\t" << result.transition_count() << '\n';
  if (!args.dump.empty()) write_file(args.dump, dump_automaton(result));
  return 0;
}

// ---- check -----------------------------------------------------------------

struct CheckArgs {
  std::string corpus;
  std::size_t max_height = 4;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  std::vector<std::string> suites;
  std::string fault;
  std::string format = "tsv";
};

int cmd_check(const CheckArgs& args) {
  CheckOptions options;
  if (!args.corpus.empty()) options.corpus = load_corpus(args.corpus).trees;
  options.max_height = args.max_height;
  options.seed = args.seed;
  options.trials = args.trials;
  options.fault = args.fault;
  std::vector<SuiteResult> results;
  if (args.suites.empty()) {
    results = run_all_suites(options);
  } else {
    for (const auto& name : args.suites) results.push_back(run_suite(name, options));
  }
  bool ok = true;
  json doc = json::array();
  if (args.format != "structured") std::cout << "# seed " << args.seed << " max-height " << args.max_height << '\n';
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (args.format == "structured") {
      doc.push_back({{"suite", r.name}, {"claim", r.claim}, {"passed", r.passed}, {"cases", r.cases}, {"detail", r.detail}});
      continue;
    }
    std::cout << (r.passed ? "PASS" : "FAIL") << '\t' << r.name << '\t' << r.cases << '\t' << r.claim << '\n';
    if (!r.passed) std::cout << "\tcounterexample: " << r.detail << '\n';
  }
  if (args.format == "structured") std::cout << json{{"seed", args.seed}, {"suites", doc}}.dump(2) << '\n';
  for (const auto& r : results) {
    if (!r.passed) std::cerr << "violated: " << r.claim << '\n';
  }
  return ok ? 0 : exit_mismatch;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> sizes{10000, 20000, 40000};
  std::size_t trials = 3;
  std::uint64_t seed = 1;
  std::vector<std::size_t> profile{3, 2, 2, 1};
  std::string format = "tsv";
};

// Random trees of 20..200 nodes until the total reaches `total`.
TreeLanguage bench_corpus(Rng& rng, const GradedAlphabet& alphabet, std::size_t total) {
  TreeLanguage out;
  std::size_t have = 0;
  std::uniform_int_distribution<std::size_t> size(20, 200);
  while (have < total) {
    Tree t = random_tree(rng, alphabet, std::min(size(rng), total - have));
    if (out.insert(t)) have += t.size();
  }
  return out;
}

template <class F>
double min_time(std::size_t trials, F&& body) {
  double best = 1e300;
  for (std::size_t i = 0; i < std::max<std::size_t>(trials, 1); ++i) {
    auto start = std::chrono::steady_clock::now();
    body();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

int cmd_bench(const BenchArgs& args) {
  for (std::size_t i = 1; i < args.sizes.size(); ++i) {
    if (args.sizes[i] < args.sizes[i - 1]) throw Failure{exit_usage, "--sizes must be ascending"};
  }
  Rng rng(args.seed);
  GradedAlphabet left_alphabet = alphabet_profile(args.profile, "l");
  GradedAlphabet right_alphabet = alphabet_profile(args.profile, "r");
  json rows = json::array();
  if (args.format != "structured") std::cout << "# seed " << args.seed << "\nsize\tbuild_s\tkernel_s\tdisjoint_kernel_s\tbuild_ratio\n";
  std::optional<double> previous;
  for (std::size_t n : args.sizes) {
    TreeLanguage left = bench_corpus(rng, left_alphabet, n);
    TreeLanguage same = bench_corpus(rng, left_alphabet, n);
    TreeLanguage other = bench_corpus(rng, right_alphabet, n);
    const double build = min_time(args.trials, [&] { subtree_automaton_language(left); });
    const double kernel = min_time(args.trials, [&] { subtree_kernel(left, same, false); });
    const double disjoint = min_time(args.trials, [&] { subtree_kernel(left, other, false); });
    std::optional<double> ratio;
    if (previous && *previous > 0) ratio = build / *previous;
    previous = build;
    if (args.format == "structured") {
      json row = {{"size", n}, {"build_s", build}, {"kernel_s", kernel}, {"disjoint_kernel_s", disjoint}};
      if (ratio) row["build_ratio"] = *ratio;
      rows.push_back(row);
    } else {
      std::cout << n << '\t' << build << '\t' << kernel << '\t' << disjoint << '\t';
      if (ratio) {
        std::cout << *ratio;
      } else {
        std::cout << '-';
      }
      std::cout << '\n';
    }
  }
  if (args.format == "structured") std::cout << json{{"seed", args.seed}, {"rows", rows}}.dump(2) << '\n';
  return 0;
}

// ---- matrix ----------------------------------------------------------------

struct MatrixArgs {
  std::vector<std::string> inputs;
  bool per_tree = false;
  unsigned threads = 1;
};

int cmd_matrix(const MatrixArgs& args) {
  std::vector<TreeLanguage> corpus;
  GradedAlphabet alphabet;
  for (const auto& path : args.inputs) {
    Corpus c = load_corpus(path);
    try {
      alphabet = merge(alphabet, c.alphabet);
    } catch (const AlphabetMismatch& e) {
      throw Failure{exit_parse, path + ": " + e.what()};
    }
    if (args.per_tree) {
      for (Tree t : c.trees) corpus.push_back(TreeLanguage{t});
    } else {
      corpus.push_back(c.trees);
    }
  }
  if (corpus.empty()) throw Failure{exit_usage, "empty corpus"};
  kernel_matrix_rows(
      corpus,
      [](std::size_t, const std::vector<std::uint64_t>& row) {
        for (std::size_t j = 0; j < row.size(); ++j) std::cout << (j ? "\t" : "") << row[j];
        std::cout << '\n';
      },
      args.threads);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subtree kernels via root-weighted tree automata"};
  app.require_subcommand(1);

  KernelArgs kernel;
  auto* k = app.add_subcommand("kernel", "Kernel between two corpora (one tree per line)");
  k->add_option("left", kernel.left)->required();
  k->add_option("right", kernel.right)->required();
  k->add_option("--format", kernel.format)->check(CLI::IsMember({"tsv", "structured"}));
  k->add_option("--kernel", kernel.kind, "st: common subtrees, sst: subset trees")->check(CLI::IsMember({"st", "sst"}));
  k->add_option("--oracle", kernel.oracles, "Recompute with an independent method")
      ->check(CLI::IsMember({"direct", "dp"}))
      ->take_all()
      ->expected(1);
  k->add_option("--dump-automaton", kernel.dump_automaton, "Write the product automaton");
  k->add_option("--dump-series", kernel.dump_series, "Write the Hadamard product of the subtree series");
  k->add_flag("--timing", kernel.timing);

  AutomatonArgs automaton;
  auto* a = app.add_subcommand("automaton", "Build or combine automata from corpora or dumps");
  a->add_option("op", automaton.op)
      ->required()
      ->check(CLI::IsMember({"build", "build-indexed", "sequentialize", "sum", "product", "quotient-h"}));
  a->add_option("inputs", automaton.inputs)->required()->expected(1, 2);
  a->add_option("--dump-automaton,-o", automaton.dump, "Write the result ('-' for standard output)");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Run the property suites");
  c->add_option("corpus", check.corpus);
  c->add_option("--max-height", check.max_height)->check(CLI::Range(0, 64));
  c->add_option("--seed", check.seed);
  c->add_option("--trials", check.trials);
  c->add_option("--suite", check.suites)->take_all()->expected(1);
  c->add_option("--inject-fault", check.fault, "Corrupt one suite's construction (negative control)");
  c->add_option("--format", check.format)->check(CLI::IsMember({"tsv", "structured"}));

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time A_L construction and kernels at growing sizes");
  b->add_option("--sizes", bench.sizes)->delimiter(',');
  b->add_option("--trials", bench.trials);
  b->add_option("--seed", bench.seed);
  b->add_option("--profile", bench.profile, "Symbols per rank, e.g. 3,2,2,1")->delimiter(',');
  b->add_option("--format", bench.format)->check(CLI::IsMember({"tsv", "structured"}));

  MatrixArgs matrix;
  auto* m = app.add_subcommand("matrix", "Kernel matrix, one corpus file per row");
  m->add_option("inputs", matrix.inputs)->required();
  m->add_flag("--per-tree", matrix.per_tree, "Use every tree as its own item");
  m->add_option("--threads", matrix.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    if (k->parsed()) return cmd_kernel(kernel);
    if (a->parsed()) return cmd_automaton(automaton);
    if (c->parsed()) return cmd_check(check);
    if (b->parsed()) return cmd_bench(bench);
    if (m->parsed()) return cmd_matrix(matrix);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const OverflowError& e) {
    std::cerr << "error: overflow: " << e.what() << '\n';
    return exit_overflow;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_parse;
  } catch (const AlphabetMismatch& e) {
    std::cerr << "error: alphabet mismatch: " << e.what() << '\n';
    return exit_parse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}
