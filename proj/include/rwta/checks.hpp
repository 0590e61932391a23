#ifndef RWTA_CHECKS_HPP
#define RWTA_CHECKS_HPP

// Property suites shared by the command-line checker and the tests. Each
// suite runs over the given corpus plus seeded random instances and stops
// at the first counterexample.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rwta/analysis.hpp"
#include "rwta/constructions.hpp"
#include "rwta/kernel.hpp"
#include "rwta/random.hpp"
#include "rwta/series.hpp"
#include "rwta/subtree_automata.hpp"
#include "rwta/term_io.hpp"

namespace rwta {

struct CheckOptions {
  TreeLanguage corpus;
  std::size_t max_height = 4;
  std::size_t image_height = 5;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  /// Negative control: name of a suite whose construction is deliberately corrupted.
  std::string fault;
};

struct SuiteResult {
  std::string name;
  std::string claim;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;  // first counterexample
};

namespace detail {

struct SuiteFailure {
  std::string detail;
};

class SuiteContext {
 public:
  SuiteContext(const CheckOptions& options, const std::string& name)
      : options(options), rng(options.seed ^ std::hash<std::string>{}(name)), faulty(options.fault == name) {}

  const CheckOptions& options;
  Rng rng;
  bool faulty;
  std::size_t cases = 0;

  void expect(bool ok, const std::function<std::string()>& detail) {
    if (!ok) throw SuiteFailure{detail()};
  }

  GradedAlphabet random_alphabet() { return small_alphabet(cases % 3 == 2); }

  NaturalRwta random_automaton() { return rwta::random_automaton(rng, random_alphabet()); }

  /// Two automata over one alphabet. With a ternary symbol the joint run
  /// classes grow cubically, so those pairs get at most three states each.
  std::pair<NaturalRwta, NaturalRwta> random_automaton_pair() {
    GradedAlphabet alphabet = random_alphabet();
    RandomAutomatonOptions opts;
    if (alphabet.max_rank() > 2) opts.max_states = 3;
    NaturalRwta a1 = rwta::random_automaton(rng, alphabet, opts);
    NaturalRwta a2 = rwta::random_automaton(rng, alphabet, opts);
    return {std::move(a1), std::move(a2)};
  }

  /// Corpus trees and random trees, for the tree-level suites.
  std::vector<Tree> sample_trees(std::size_t max_size) {
    std::vector<Tree> out(options.corpus.begin(), options.corpus.end());
    for (std::size_t i = 0; i < options.trials; ++i) {
      out.push_back(random_tree(rng, small_alphabet(i % 3 == 2), 1 + i % max_size));
    }
    return out;
  }

  /// Language pairs: corpus against itself and its halves, then random pairs.
  std::vector<std::pair<TreeLanguage, TreeLanguage>> sample_language_pairs() {
    std::vector<std::pair<TreeLanguage, TreeLanguage>> out;
    const TreeLanguage& corpus = options.corpus;
    if (!corpus.empty()) {
      TreeLanguage front, back;
      for (std::size_t i = 0; i < corpus.size(); ++i) (i < corpus.size() / 2 ? front : back).insert(corpus.trees()[i]);
      out.push_back({corpus, corpus});
      out.push_back({front, back});
      out.push_back({back, front});
      GradedAlphabet alphabet = alphabet_of(corpus);
      if (!alphabet.symbols_of_rank(0).empty()) {
        for (std::size_t i = 0; i < 4; ++i) out.push_back({corpus, random_language(rng, alphabet, 8, 12)});
      }
    }
    for (std::size_t i = 0; i < options.trials; ++i) {
      GradedAlphabet alphabet = small_alphabet(i % 3 == 2);
      out.push_back({random_language(rng, alphabet, 8, 12), random_language(rng, alphabet, 8, 12)});
    }
    return out;
  }
};

inline std::string show(Tree t) { return format_tree(t); }

inline std::string show(const TreeLanguage& l) {
  std::string out = "{";
  for (std::size_t i = 0; i < l.size(); ++i) out += (i ? "," : "") + format_tree(l.trees()[i]);
  return out + "}";
}

template <WeightDomain D>
std::string show(const Rwta<D>& a) {
  std::ostringstream out;
  out << a.state_count() << " states, " << a.transition_count() << " transitions; nu =";
  for (StateId q = 0; q < a.state_count(); ++q) out << ' ' << D::format(a.nu(q));
  for (const Transition& tr : a.transitions()) {
    out << "; " << tr.target << "<-" << tr.symbol.name() << '(';
    for (std::size_t i = 0; i < tr.children.size(); ++i) out << (i ? "," : "") << tr.children[i];
    out << ')';
  }
  return out.str();
}

// Apply a deliberate corruption for negative controls.
inline NaturalRwta corrupt(const NaturalRwta& a) {
  if (a.state_count() == 0) return a;
  return a.with_nu(0, a.nu(0) + 1);
}

inline void suite_sequentialize(SuiteContext& ctx) {
  const std::size_t h = ctx.options.max_height;
  for (std::size_t i = 0; i < ctx.options.trials; ++i, ++ctx.cases) {
    NaturalRwta a = ctx.random_automaton();
    NaturalRwta s = sequentialize(a);
    if (ctx.faulty) s = corrupt(s);
    ctx.expect(is_deterministic(s), [&] { return "not deterministic: " + show(a); });
    for (const RunClass& rc : run_classes<Natural>({&a, &s}, h)) {
      ctx.expect(rc.runs[1].size() <= 1, [&] { return "run of size > 1 on " + show(rc.witness) + " for " + show(a); });
      ctx.expect(weight(a, rc.witness) == weight(s, rc.witness), [&] {
        return "weights differ on " + show(rc.witness) + ": " + std::to_string(weight(a, rc.witness)) + " vs " +
               std::to_string(weight(s, rc.witness)) + " for " + show(a);
      });
    }
    Tree t = random_tree_bounded_height(ctx.rng, a.alphabet(), h);
    ctx.expect(weight(a, t) == weight(s, t), [&] { return "weights differ on " + show(t) + " for " + show(a); });
  }
}

inline void suite_sum(SuiteContext& ctx) {
  const std::size_t h = ctx.options.max_height;
  for (std::size_t i = 0; i < ctx.options.trials; ++i, ++ctx.cases) {
    auto [a1, a2] = ctx.random_automaton_pair();
    NaturalRwta s = rwta_sum(a1, a2);
    if (ctx.faulty) s = corrupt(s);
    ctx.expect(s.state_count() == a1.state_count() + a2.state_count(), [&] { return "sum is not a disjoint union"; });
    for (const RunClass& rc : run_classes<Natural>({&a1, &a2, &s}, h)) {
      const auto expected = Natural::add(weight(a1, rc.witness), weight(a2, rc.witness));
      ctx.expect(weight(s, rc.witness) == expected, [&] {
        return "sum weight on " + show(rc.witness) + " is " + std::to_string(weight(s, rc.witness)) + ", expected " +
               std::to_string(expected);
      });
    }
  }
}

inline void suite_product(SuiteContext& ctx) {
  const std::size_t h = ctx.options.max_height;
  for (std::size_t i = 0; i < ctx.options.trials; ++i, ++ctx.cases) {
    auto [a1, a2] = ctx.random_automaton_pair();
    ProductResult<Natural> prod = accessible_product(a1, a2);
    NaturalRwta p = ctx.faulty ? corrupt(prod.automaton) : prod.automaton;
    for (const RunClass& rc : run_classes<Natural>({&a1, &a2, &p}, h)) {
      const auto expected = Natural::mul(weight(a1, rc.witness), weight(a2, rc.witness));
      ctx.expect(weight(p, rc.witness) == expected, [&] {
        return "product weight on " + show(rc.witness) + " is " + std::to_string(weight(p, rc.witness)) +
               ", expected " + std::to_string(expected);
      });
      // The run of the product is the cartesian product of the runs.
      std::set<std::pair<StateId, StateId>> pairs;
      for (StateId q : rc.runs[2]) pairs.insert(prod.components[q]);
      std::set<std::pair<StateId, StateId>> expected_pairs;
      for (StateId x : rc.runs[0]) {
        for (StateId y : rc.runs[1]) expected_pairs.insert({x, y});
      }
      ctx.expect(pairs == expected_pairs, [&] { return "product run is not the product of runs on " + show(rc.witness); });
    }
  }
}

inline void suite_quotient(SuiteContext& ctx) {
  const std::size_t h = ctx.options.max_height;
  for (std::size_t i = 0; i < ctx.options.trials; ++i, ++ctx.cases) {
    NaturalRwta a = ctx.random_automaton();
    if (i % 4 != 3) a = with_cloned_state(ctx.rng, a);
    StateClassifier cls = down_equivalence_bounded(a, h);
    ctx.expect(check_down_compatible_bounded(a, cls, h), [&] { return "bounded down equivalence is not compatible"; });
    NaturalRwta q = quotient(a, cls);
    if (ctx.faulty) q = corrupt(q);
    auto diff = series_difference_bounded(a, q, h);
    ctx.expect(!diff, [&] {
      return "quotient changes the series on " + show(*diff) + ": " + std::to_string(weight(a, *diff)) + " vs " +
             std::to_string(weight(q, *diff)) + " for " + show(a);
    });
  }
}

inline void suite_image(SuiteContext& ctx) {
  const std::size_t h = ctx.options.image_height;
  for (std::size_t i = 0; i < ctx.options.trials; ++i, ++ctx.cases) {
    NaturalRwta a = ctx.random_automaton();
    auto image = image_bounded(a, h);
    if (ctx.faulty) {
      for (std::uint64_t extra = 0; image.size() <= (std::uint64_t{1} << a.state_count()); ++extra) image.insert(1000 + extra);
    }
    ctx.expect(image.size() <= (std::uint64_t{1} << a.state_count()), [&] {
      return std::to_string(image.size()) + " distinct weights for " + std::to_string(a.state_count()) + " states";
    });
    // Cross-check on the enumerable fragment: every weight seen there is in the image.
    for (Tree t : enumerate_trees(a.alphabet(), 2)) {
      ctx.expect(image.count(weight(a, t)) == 1, [&] { return "weight of " + show(t) + " missing from the image"; });
    }
  }
}

inline void suite_subtree_automata(SuiteContext& ctx) {
  for (Tree t : ctx.sample_trees(12)) {
    ++ctx.cases;
    IndexedSubtreeAutomaton at = build_indexed_subtree_automaton(t);
    NaturalRwta seq = seq_subtree_automaton(t);
    if (ctx.faulty) seq = corrupt(seq);
    NaturalSeries series = subtree_series(t);
    const std::size_t h = t.height();
    // A_t realizes the subtree series: exact, since its run classes are finite.
    for (const RunClass& rc : run_classes<Natural>({&at.automaton}, std::nullopt)) {
      ctx.expect(weight(at.automaton, rc.witness) == series.at(rc.witness),
                 [&] { return "A_t weight differs from the subtree series on " + show(rc.witness); });
    }
    // Each subtree r runs to the indexed copies of r, and seq(A_t) weights it by its count.
    std::unordered_map<Tree, std::vector<StateId>, TreeHash> copies;
    for (StateId q = 0; q < at.automaton.state_count(); ++q) copies[drop_index(at.subtree(q))].push_back(q);
    for (const auto& [r, states] : copies) {
      ctx.expect(run(at.automaton, r) == states, [&] { return "run of A_t on " + show(r) + " is not its copies"; });
      ctx.expect(weight(seq, r) == series.at(r), [&] { return "seq(A_t) weight wrong on " + show(r); });
      ctx.expect(down_language_bounded(at.automaton, states.front(), h) == TreeLanguage{r},
                 [&] { return "down language of a copy of " + show(r) + " is not {" + show(r) + "}"; });
    }
    StateClassifier cls = h_classifier(at);
    ctx.expect(check_down_compatible_bounded(at.automaton, cls, h), [&] { return "~h not down compatible for " + show(t); });
    NaturalRwta q = quotient(at.automaton, cls);
    ctx.expect(iso_sequential(seq, q), [&] { return "seq(A_t) not isomorphic to A_t/~h for " + show(t); });
    ctx.expect(iso_sequential(seq, sequentialize(at.automaton)),
               [&] { return "seq(A_t) not isomorphic to the subset automaton of A_t for " + show(t); });
    if (h <= 2) {
      FormalTreeSeries<Natural> bounded = realized_series_bounded(at.automaton, h);
      for (const auto& [r, w] : bounded.coefficients()) {
        ctx.expect(series.at(r) == w, [&] { return "bounded series of A_t differs on " + show(r); });
      }
      ctx.expect(bounded.support_size() == series.support_size(), [&] { return "bounded support differs for " + show(t); });
    }
  }
}

inline void suite_language_automata(SuiteContext& ctx) {
  for (const auto& [l1, l2] : ctx.sample_language_pairs()) {
    ++ctx.cases;
    NaturalRwta direct = subtree_automaton_language(l1);
    if (ctx.faulty) direct = corrupt(direct);
    NaturalSeries series = subtree_series(l1);
    TreeLanguage subtrees = subtree_set(l1);
    ctx.expect(is_deterministic(direct), [&] { return "A_L not deterministic for " + show(l1); });
    ctx.expect(direct.state_count() == subtrees.size(), [&] { return "A_L state count differs for " + show(l1); });
    for (Tree r : subtrees) {
      const StateSet reached = run(direct, r);
      ctx.expect(reached.size() == 1 && *direct.label(reached.front()).as_term() == r,
                 [&] { return "run of A_L on " + show(r) + " is not {" + show(r) + "}"; });
      ctx.expect(direct.nu(reached.front()) == series.at(r), [&] { return "A_L root weight wrong on " + show(r); });
    }
    NaturalRwta incremental = subtree_automaton_language_incremental(l1);
    ctx.expect(iso_sequential(direct, incremental),
               [&] { return "incremental and direct A_L differ for " + show(l1); });
    // The union statement needs disjoint languages: a tree in both would be
    // counted twice by the sum but once in A_{L1 u L2}.
    TreeLanguage rest;
    for (Tree t : l2) {
      if (!l1.contains(t)) rest.insert(t);
    }
    TreeLanguage both = l1;
    both.insert(rest);
    NaturalRwta joined = sequentialize(rwta_sum(subtree_automaton_language(l1), subtree_automaton_language(rest)));
    NaturalRwta direct_both = subtree_automaton_language(both);
    if (ctx.faulty) direct_both = corrupt(direct_both);
    ctx.expect(iso_sequential(direct_both, joined),
               [&] { return "A_{L1 u L2} not isomorphic to seq(A_L1 + A_L2) for " + show(l1) + ", " + show(rest); });
    // Without disjointness the sum still realizes the sum of the two series.
    NaturalRwta sum = rwta_sum(subtree_automaton_language(l1), subtree_automaton_language(l2));
    NaturalSeries expected = series_add(series, subtree_series(l2));
    for (const auto& [r, w] : expected.coefficients()) {
      ctx.expect(weight(sum, r) == w, [&] { return "A_L1 + A_L2 weight wrong on " + show(r); });
    }
  }
}

inline void suite_kernel_oracles(SuiteContext& ctx) {
  for (const auto& [l1, l2] : ctx.sample_language_pairs()) {
    ++ctx.cases;
    std::uint64_t automaton = subtree_kernel(l1, l2, false).value;
    if (ctx.faulty) automaton += 1;
    const std::uint64_t direct = ker_series_direct(l1, l2);
    const std::uint64_t dp = dp_kernel_languages(l1, l2, TreeKernelKind::st);
    ctx.expect(automaton == direct && direct == dp, [&] {
      return "kernel " + std::to_string(automaton) + ", series " + std::to_string(direct) + ", dp " +
             std::to_string(dp) + " on " + show(l1) + " vs " + show(l2);
    });
  }
}

inline void suite_kernel_properties(SuiteContext& ctx) {
  for (const auto& [l1, l2] : ctx.sample_language_pairs()) {
    ++ctx.cases;
    KernelReport forward = subtree_kernel(l1, l2);
    if (ctx.faulty) forward.value += 1;
    const KernelReport backward = subtree_kernel(l2, l1);
    ctx.expect(forward.value == backward.value, [&] { return "kernel not symmetric on " + show(l1) + ", " + show(l2); });
    std::uint64_t table = 0;
    for (const auto& row : forward.common_subtrees) table += row.product;
    ctx.expect(table == forward.value, [&] { return "common-subtree table does not sum to the kernel"; });
    std::size_t common = 0;
    TreeLanguage s2 = subtree_set(l2);
    for (Tree r : subtree_set(l1)) common += s2.contains(r);
    ctx.expect(forward.common_count == common, [&] { return "product state count is not the subtree intersection size"; });
    TreeLanguage grown = l1;
    if (!l2.empty()) grown.insert(l2.trees().front());
    ctx.expect(subtree_kernel(grown, l2, false).value >= forward.value, [&] { return "kernel decreased after adding a tree"; });
    if (!l1.empty()) {
      ctx.expect(subtree_kernel(l1, l1, false).value >= subtree_set(l1).size(),
                 [&] { return "self-kernel below the subtree count for " + show(l1); });
    }
  }
}

}  // namespace detail

struct SuiteInfo {
  std::string name;
  std::string claim;
  void (*run)(detail::SuiteContext&);
};

inline const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> all = {
      {"sequentialize", "the accessible subset automaton realizes the same series and every run has at most one state",
       detail::suite_sequentialize},
      {"sum", "the sum automaton realizes the pointwise sum", detail::suite_sum},
      {"product", "the accessible product realizes the pointwise product and runs multiply as sets",
       detail::suite_product},
      {"quotient", "quotienting by a down-compatible equivalence preserves the series", detail::suite_quotient},
      {"image", "an automaton with |Q| states realizes at most 2^|Q| distinct weights", detail::suite_image},
      {"subtree-automata", "A_t realizes the subtree series and seq(A_t), A_t/~h and the subset automaton coincide",
       detail::suite_subtree_automata},
      {"language-automata", "A_L is deterministic, realizes the subtree series of L and A_{L1 u L2} = seq(A_L1 + A_L2)",
       detail::suite_language_automata},
      {"kernel-oracles", "the product-automaton kernel equals the series definition and the dynamic programme",
       detail::suite_kernel_oracles},
      {"kernel-properties", "the kernel is symmetric, monotone, counts common subtrees and bounds self-similarity",
       detail::suite_kernel_properties},
  };
  return all;
}

inline SuiteResult run_suite(const SuiteInfo& suite, const CheckOptions& options) {
  SuiteResult result{suite.name, suite.claim, true, 0, {}};
  detail::SuiteContext ctx(options, suite.name);
  try {
    suite.run(ctx);
  } catch (const detail::SuiteFailure& failure) {
    result.passed = false;
    result.detail = failure.detail;
  }
  result.cases = ctx.cases;
  return result;
}

inline SuiteResult run_suite(const std::string& name, const CheckOptions& options) {
  for (const auto& s : suites()) {
    if (s.name == name) return run_suite(s, options);
  }
  throw InvalidArgument("unknown suite '" + name + "'");
}

inline std::vector<SuiteResult> run_all_suites(const CheckOptions& options) {
  if (!options.fault.empty()) {
    bool known = false;
    for (const auto& s : suites()) known = known || s.name == options.fault;
    if (!known) throw InvalidArgument("unknown fault target '" + options.fault + "'");
  }
  std::vector<SuiteResult> out;
  for (const auto& s : suites()) out.push_back(run_suite(s, options));
  return out;
}

}  // namespace rwta

#endif  // RWTA_CHECKS_HPP
