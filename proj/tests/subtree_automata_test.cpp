#include <gtest/gtest.h>

#include <set>

#include "common.hpp"

using namespace rwta;
using namespace rwta::testing;

namespace {

using NuTable = std::map<std::string, std::uint64_t>;

std::set<std::string> run_labels(const NaturalRwta& a, Tree t) {
  std::set<std::string> out;
  for (StateId q : run(a, t)) out.insert(a.label(q).str());
  return out;
}

std::set<std::set<std::string>> class_labels(const NaturalRwta& a, const StateClassifier& cls) {
  std::set<std::set<std::string>> out;
  for (std::size_t c = 0; c < cls.class_count(); ++c) {
    std::set<std::string> members;
    for (StateId q : cls.members(c)) members.insert(a.label(q).str());
    out.insert(members);
  }
  return out;
}

}  // namespace

TEST(IndexedAutomaton, ExampleTree) {
  IndexedSubtreeAutomaton at = build_indexed_subtree_automaton(t1());
  const NaturalRwta& a = at.automaton;
  ASSERT_EQ(a.state_count(), 7u);
  EXPECT_EQ(a.transition_count(), 7u);
  for (StateId q = 0; q < a.state_count(); ++q) EXPECT_EQ(a.nu(q), 1u);
  EXPECT_EQ(a.label(0).str(), "f@1(h@2(a@3),f@4(h@5(a@6),b@7))");
  EXPECT_EQ(run_labels(a, T("h(a)")), (std::set<std::string>{"h@2(a@3)", "h@5(a@6)"}));
  EXPECT_EQ(run_labels(a, T("a")), (std::set<std::string>{"a@3", "a@6"}));
  EXPECT_EQ(run_labels(a, t1()), (std::set<std::string>{"f@1(h@2(a@3),f@4(h@5(a@6),b@7))"}));
  EXPECT_TRUE(run(a, T("h(b)")).empty());
  EXPECT_FALSE(is_deterministic(a));
  EXPECT_EQ(format_indexed(at.subtree(4)), "h@5(a@6)");
}

TEST(IndexedAutomaton, Constant) {
  NaturalRwta a = subtree_automaton_indexed(T("a"));
  EXPECT_EQ(a.state_count(), 1u);
  EXPECT_EQ(a.transition_count(), 1u);
  EXPECT_EQ(realized_series_bounded(a, 3), series_of({{"a", 1}}));
}

TEST(IndexedAutomaton, RealizesSubtreeSeries) {
  Rng rng(79);
  for (int i = 0; i < 200; ++i) {
    Tree t = random_tree(rng, small_alphabet(i % 3 == 2), 1 + i % 12);
    NaturalRwta a = subtree_automaton_indexed(t);
    EXPECT_EQ(realized_series_bounded(a, tree_height(t)), subtree_series(t)) << format_tree(t);
  }
}

TEST(IndexedAutomaton, RunIsTheHPreimage) {
  Rng rng(83);
  for (int i = 0; i < 100; ++i) {
    Tree t = random_tree(rng, small_alphabet(), 1 + i % 12);
    IndexedSubtreeAutomaton at = build_indexed_subtree_automaton(t);
    for (Tree r : enumerate_trees(at.automaton.alphabet(), std::min<std::size_t>(tree_height(t), 2))) {
      std::set<StateId> expected;
      for (StateId q = 0; q < at.automaton.state_count(); ++q) {
        if (drop_index(at.subtree(q)) == r) expected.insert(q);
      }
      StateSet got = run(at.automaton, r);
      EXPECT_EQ(std::set<StateId>(got.begin(), got.end()), expected);
    }
    for (StateId q = 0; q < at.automaton.state_count(); ++q) {
      EXPECT_EQ(down_language_bounded(at.automaton, q, tree_height(t) + 1), TreeLanguage{drop_index(at.subtree(q))});
    }
  }
}

TEST(SequentialAutomaton, ExampleTree) {
  NaturalRwta s = seq_subtree_automaton(t1());
  EXPECT_EQ(s.state_count(), 5u);
  EXPECT_EQ(nu_by_label(s), (NuTable{{"a", 2}, {"h(a)", 2}, {"b", 1}, {"f(h(a),b)", 1}, {"f(h(a),f(h(a),b))", 1}}));
  EXPECT_TRUE(is_deterministic(s));
  EXPECT_EQ(nu_by_label(seq_subtree_automaton(T("a"))), (NuTable{{"a", 1}}));
}

TEST(SequentialAutomaton, SameAsSequentializedIndexedAutomaton) {
  NaturalRwta direct = seq_subtree_automaton(t1());
  NaturalRwta subset = sequentialize(subtree_automaton_indexed(t1()));
  EXPECT_TRUE(iso_sequential(direct, subset));
  EXPECT_EQ(nu_multiset(subset), nu_multiset(direct));
}

TEST(HClassifier, ExampleTree) {
  IndexedSubtreeAutomaton at = build_indexed_subtree_automaton(t1());
  StateClassifier cls = h_classifier(at);
  EXPECT_EQ(class_labels(at.automaton, cls), (std::set<std::set<std::string>>{
                                                  {"a@3", "a@6"},
                                                  {"h@2(a@3)", "h@5(a@6)"},
                                                  {"b@7"},
                                                  {"f@4(h@5(a@6),b@7)"},
                                                  {"f@1(h@2(a@3),f@4(h@5(a@6),b@7))"},
                                              }));
  EXPECT_TRUE(check_down_compatible_bounded(at.automaton, cls, tree_height(t1())));
  StateClassifier by_label = h_classifier(at.automaton);
  EXPECT_EQ(class_labels(at.automaton, by_label), class_labels(at.automaton, cls));
  NaturalRwta q = quotient(at.automaton, cls);
  EXPECT_TRUE(iso_sequential(q, seq_subtree_automaton(t1())));
}

TEST(HClassifier, DistinctSubtreesGiveSingletons) {
  Tree t = T("f(h(a),b)");
  IndexedSubtreeAutomaton at = build_indexed_subtree_automaton(t);
  EXPECT_EQ(h_classifier(at).class_count(), at.automaton.state_count());
}

TEST(HClassifier, RejectsUnindexedLabels) { EXPECT_THROW(h_classifier(chain_automaton()), InvalidArgument); }

TEST(HClassifier, IsomorphismChainOnRandomTrees) {
  Rng rng(89);
  for (int i = 0; i < 300; ++i) {
    Tree t = random_tree(rng, small_alphabet(i % 3 == 2), 1 + i % 14);
    IndexedSubtreeAutomaton at = build_indexed_subtree_automaton(t);
    StateClassifier cls = h_classifier(at);
    EXPECT_TRUE(check_down_compatible_bounded(at.automaton, cls, tree_height(t)));
    NaturalRwta seq = seq_subtree_automaton(t);
    NaturalRwta quo = quotient(at.automaton, cls);
    NaturalRwta sub = sequentialize(at.automaton);
    EXPECT_TRUE(iso_sequential(seq, quo)) << format_tree(t);
    EXPECT_TRUE(iso_sequential(quo, sub)) << format_tree(t);
  }
}

TEST(LanguageAutomaton, ExampleLanguages) {
  NaturalRwta l12 = subtree_automaton_language(TreeLanguage{t1(), t2()});
  EXPECT_EQ(nu_by_label(l12), (NuTable{{"a", 3},
                                       {"h(a)", 3},
                                       {"b", 2},
                                       {"h(b)", 1},
                                       {"f(h(a),b)", 1},
                                       {"f(h(a),f(h(a),b))", 1},
                                       {"f(h(a),h(b))", 1}}));
  NaturalRwta l3 = subtree_automaton_language(TreeLanguage{t3()});
  EXPECT_EQ(nu_by_label(l3), (NuTable{{"a", 1},
                                      {"h(a)", 1},
                                      {"b", 3},
                                      {"h(b)", 2},
                                      {"f(b,h(b))", 1},
                                      {"f(h(a),h(b))", 1},
                                      {"f(f(b,h(b)),f(h(a),h(b)))", 1}}));
  EXPECT_TRUE(is_deterministic(l12));
  EXPECT_TRUE(is_deterministic(l3));
}

TEST(LanguageAutomaton, SingletonMatchesSequentialTreeAutomaton) {
  for (Tree t : {t1(), t2(), t3(), T("a")}) {
    EXPECT_TRUE(iso_sequential(subtree_automaton_language(TreeLanguage{t}), seq_subtree_automaton(t)));
    EXPECT_EQ(dump_automaton(subtree_automaton_language_incremental(TreeLanguage{t})),
              dump_automaton(seq_subtree_automaton(t)));
  }
}

TEST(LanguageAutomaton, IncrementalMatchesDirect) {
  TreeLanguage l{t1(), t2()};
  NaturalRwta inc = subtree_automaton_language_incremental(l);
  NaturalRwta direct = subtree_automaton_language(l);
  EXPECT_TRUE(iso_sequential(inc, direct));
  EXPECT_EQ(nu_by_label(inc), nu_by_label(direct));
}

TEST(LanguageAutomaton, EmptyLanguage) {
  NaturalRwta a = subtree_automaton_language(TreeLanguage{});
  EXPECT_EQ(a.state_count(), 0u);
  EXPECT_EQ(subtree_automaton_language_incremental(TreeLanguage{}).state_count(), 0u);
}

TEST(LanguageAutomaton, RandomLanguages) {
  Rng rng(97);
  for (int i = 0; i < 150; ++i) {
    TreeLanguage l = random_language(rng, small_alphabet(i % 3 == 2), 8, 12);
    NaturalRwta direct = subtree_automaton_language(l);
    TreeLanguage subtrees = subtree_set(l);
    EXPECT_EQ(direct.state_count(), subtrees.size());
    EXPECT_LE(direct.state_count(), l.total_size());
    EXPECT_TRUE(is_deterministic(direct));
    EXPECT_TRUE(iso_sequential(subtree_automaton_language_incremental(l), direct));
    // Run of r is {r} on subtrees and empty elsewhere.
    for (Tree r : subtrees) {
      StateSet s = run(direct, r);
      ASSERT_EQ(s.size(), 1u);
      EXPECT_EQ(*direct.label(s.front()).as_term(), r);
    }
    for (int j = 0; j < 10; ++j) {
      Tree r = random_tree(rng, small_alphabet(i % 3 == 2), 1 + j);
      EXPECT_EQ(run(direct, r).size(), subtrees.contains(r) ? 1u : 0u);
    }
    EXPECT_EQ(realized_series_bounded(direct, 12), subtree_series(l));
  }
}

TEST(LanguageAutomaton, IndexedLanguageAutomatonNumbersAcrossTrees) {
  IndexedSubtreeAutomaton at = build_indexed_subtree_automaton(TreeLanguage{t1(), t2()});
  ASSERT_EQ(at.automaton.state_count(), 12u);
  EXPECT_EQ(at.automaton.label(7).str(), "f@8(h@9(a@10),h@11(b@12))");
  EXPECT_TRUE(iso_sequential(sequentialize(at.automaton), subtree_automaton_language(TreeLanguage{t1(), t2()})));
}
