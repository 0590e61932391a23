#ifndef RWTA_SUBTREE_AUTOMATA_HPP
#define RWTA_SUBTREE_AUTOMATA_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "rwta/automaton.hpp"
#include "rwta/constructions.hpp"
#include "rwta/indexed.hpp"
#include "rwta/language.hpp"
#include "rwta/term_io.hpp"
#include "rwta/weight.hpp"

namespace rwta {

using NaturalRwta = Rwta<Natural>;

/// A_t together with the indexed trees its states come from: states are
/// numbered in prefix order, tree after tree, so state i is the i-th indexed
/// subtree overall. For several trees the indices continue across trees and
/// the automaton is the sum of their A_t.
struct IndexedSubtreeAutomaton {
  NaturalRwta automaton;
  std::vector<IndexedTree> trees;

  /// The indexed subtree of state q.
  IndexedTree subtree(StateId q) const {
    for (const auto& t : trees) {
      if (q < t.size()) return t.subtree(q);
      q -= static_cast<StateId>(t.size());
    }
    throw InvalidArgument("unknown state " + std::to_string(q));
  }
};

inline IndexedSubtreeAutomaton build_indexed_subtree_automaton(const TreeLanguage& language) {
  IndexedSubtreeAutomaton out;
  RwtaBuilder<Natural> b(alphabet_of(language));
  std::size_t next_index = 1;
  for (Tree t : language) {
    out.trees.push_back(index_tree(t, next_index));
    next_index += t.size();
  }
  for (const auto& it : out.trees) {
    for (std::size_t i = 0; i < it.size(); ++i) b.add_state(StateLabel::indexed(format_indexed(it.subtree(i))), 1);
  }
  StateId base = 0;
  for (const auto& it : out.trees) {
    const auto& nodes = it.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::vector<StateId> kids;
      for (std::size_t c : it.child_offsets(i)) kids.push_back(base + static_cast<StateId>(c));
      b.add_transition(base + static_cast<StateId>(i), nodes[i].symbol, std::move(kids));
    }
    base += static_cast<StateId>(nodes.size());
  }
  out.automaton = std::move(b).build();
  return out;
}

inline IndexedSubtreeAutomaton build_indexed_subtree_automaton(Tree t) {
  return build_indexed_subtree_automaton(TreeLanguage{t});
}

/// A_t: one state per indexed subtree of t, all root weights 1.
inline NaturalRwta subtree_automaton_indexed(Tree t) { return build_indexed_subtree_automaton(t).automaton; }

/// ~h on A_t: states with the same image under h share a class.
inline StateClassifier h_classifier(const IndexedSubtreeAutomaton& at) {
  std::vector<std::size_t> keys;
  std::unordered_map<Tree, std::size_t, TreeHash> ids;
  for (const auto& it : at.trees) {
    for (std::size_t i = 0; i < it.size(); ++i) {
      Tree image = drop_index(it.subtree(i));
      keys.push_back(ids.try_emplace(image, ids.size()).first->second);
    }
  }
  return StateClassifier(keys);
}

/// Reads an indexed label such as f@1(h@2(a@3)) back to the tree h(label).
inline Tree drop_index_label(const std::string& label) {
  std::string plain;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] != '@') {
      plain += label[i];
      continue;
    }
    std::size_t j = i + 1;
    while (j < label.size() && std::isdigit(static_cast<unsigned char>(label[j]))) ++j;
    if (j == i + 1) throw InvalidArgument("state '" + label + "' is not an indexed tree");
    i = j - 1;
  }
  if (plain.size() == label.size()) throw InvalidArgument("state '" + label + "' is not an indexed tree");
  try {
    return parse_tree(plain).tree;
  } catch (const ParseError&) {
    throw InvalidArgument("state '" + label + "' is not an indexed tree");
  }
}

/// ~h for an automaton whose state labels are indexed trees.
inline StateClassifier h_classifier(const NaturalRwta& a) {
  std::vector<std::size_t> keys;
  std::unordered_map<Tree, std::size_t, TreeHash> ids;
  for (StateId q = 0; q < a.state_count(); ++q) {
    keys.push_back(ids.try_emplace(drop_index_label(a.label(q).str()), ids.size()).first->second);
  }
  return StateClassifier(keys);
}

/// A_L built directly: one state per distinct subtree across L (labelled by
/// that subtree), nu = number of occurrences in L, one transition per state.
inline NaturalRwta subtree_automaton_language(const TreeLanguage& language) {
  RwtaBuilder<Natural> b(alphabet_of(language));
  std::unordered_map<Tree, StateId, TreeHash> state;
  std::vector<std::uint64_t> count;
  std::vector<StateId> kids;
  for (Tree t : language) {
    for (Tree node : postorder_distinct(t)) {
      if (state.count(node)) continue;
      kids.clear();
      for (std::size_t i = 0; i < node.arity(); ++i) kids.push_back(state.at(node.child(i)));
      StateId q = b.add_state(StateLabel::term(node), 0);
      state.emplace(node, q);
      count.push_back(0);
      b.add_transition(q, node.symbol(), kids);
    }
    for_each_position(t, [&](Tree node) { count[state.find(node)->second] += 1; });
  }
  for (StateId q = 0; q < count.size(); ++q) b.set_nu(q, count[q]);
  return std::move(b).build();
}

/// seq(A_t): distinct subtrees of t weighted by their occurrence counts.
inline NaturalRwta seq_subtree_automaton(Tree t) { return subtree_automaton_language(TreeLanguage{t}); }

/// A_L as a fold: start from A_{t0}, then repeatedly take the sum with the
/// next A_{t} and sequentialize. States are relabelled by their witness trees,
/// which for these automata are exactly the subtrees they stand for.
inline NaturalRwta subtree_automaton_language_incremental(const TreeLanguage& language) {
  if (language.empty()) return subtree_automaton_language(language);
  auto it = language.begin();
  NaturalRwta acc = seq_subtree_automaton(*it);
  for (++it; it != language.end(); ++it) {
    acc = sequentialize(rwta_sum(acc, seq_subtree_automaton(*it)), SubsetLabels::witness);
  }
  return acc;
}

}  // namespace rwta

#endif  // RWTA_SUBTREE_AUTOMATA_HPP
