#ifndef RWTA_RANDOM_HPP
#define RWTA_RANDOM_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rwta/automaton.hpp"
#include "rwta/language.hpp"
#include "rwta/tree.hpp"
#include "rwta/weight.hpp"

namespace rwta {

using Rng = std::mt19937_64;

/// Symbols a, b (rank 0), h (rank 1), f (rank 2), plus g (rank 3) when asked.
inline GradedAlphabet small_alphabet(bool with_ternary = false) {
  GradedAlphabet out{{"a", 0}, {"b", 0}, {"h", 1}, {"f", 2}};
  if (with_ternary) out.add("g", 3);
  return out;
}

/// Alphabet with the given number of symbols per rank, named c0.., u0.., b0.., t0..
/// for ranks 0..3 and sK_i beyond; `prefix` keeps several profiles disjoint.
inline GradedAlphabet alphabet_profile(const std::vector<std::size_t>& counts_per_rank, const std::string& prefix = "") {
  static const char* names[] = {"c", "u", "b", "t"};
  GradedAlphabet out;
  for (std::size_t rank = 0; rank < counts_per_rank.size(); ++rank) {
    for (std::size_t i = 0; i < counts_per_rank[rank]; ++i) {
      std::string base = rank < 4 ? names[rank] : "s" + std::to_string(rank) + "_";
      out.add(prefix + base + std::to_string(i), rank);
    }
  }
  return out;
}

/// A random tree of at most `size` nodes (and exactly `size` whenever the
/// alphabet's ranks allow it). Sizes are split among children uniformly.
inline Tree random_tree(Rng& rng, const GradedAlphabet& alphabet, std::size_t size) {
  std::vector<Symbol> constants = alphabet.symbols_of_rank(0);
  if (constants.empty()) throw InvalidArgument("alphabet has no constant");
  std::vector<Symbol> ranked;
  for (Symbol f : alphabet.symbols()) {
    if (f.rank() > 0) ranked.push_back(f);
  }
  size = std::max<std::size_t>(size, 1);

  struct Frame {
    Symbol symbol;
    std::vector<std::size_t> budgets;
    std::vector<Tree> children;
  };
  std::vector<Frame> stack;
  auto pick = [&](const std::vector<Symbol>& from) { return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)]; };
  // Opens a node with the given budget; returns a finished tree for leaves.
  auto open = [&](std::size_t budget) -> std::optional<Tree> {
    std::vector<Symbol> fitting;
    for (Symbol f : ranked) {
      if (f.rank() <= budget - 1) fitting.push_back(f);
    }
    if (budget == 1 || fitting.empty()) return Tree::make(pick(constants), {});
    Symbol f = pick(fitting);
    // Split budget - 1 into rank() positive parts.
    std::vector<std::size_t> cuts;
    std::uniform_int_distribution<std::size_t> cut(1, budget - 2 == 0 ? 1 : budget - 2);
    while (cuts.size() + 1 < f.rank()) {
      std::size_t c = cut(rng);
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::size_t> budgets;
    std::size_t prev = 0;
    for (std::size_t c : cuts) {
      budgets.push_back(c - prev);
      prev = c;
    }
    budgets.push_back(budget - 1 - prev);
    stack.push_back(Frame{f, std::move(budgets), {}});
    return std::nullopt;
  };

  std::optional<Tree> done = open(size);
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (done) {
      top.children.push_back(*done);
      done.reset();
    }
    if (top.children.size() == top.symbol.rank()) {
      done = Tree::make(top.symbol, top.children);
      stack.pop_back();
      continue;
    }
    done = open(top.budgets[top.children.size()]);
  }
  return *done;
}

/// Between 1 and max_trees random trees of size 1..max_size (duplicates collapse).
inline TreeLanguage random_language(Rng& rng, const GradedAlphabet& alphabet, std::size_t max_trees, std::size_t max_size) {
  TreeLanguage out;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_trees)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    out.insert(random_tree(rng, alphabet, std::uniform_int_distribution<std::size_t>(1, max_size)(rng)));
  }
  return out;
}

/// A random tree of height at most max_height.
inline Tree random_tree_bounded_height(Rng& rng, const GradedAlphabet& alphabet, std::size_t max_height) {
  std::vector<Symbol> constants = alphabet.symbols_of_rank(0);
  if (constants.empty()) throw InvalidArgument("alphabet has no constant");
  std::vector<Symbol> all = alphabet.symbols();
  std::function<Tree(std::size_t)> grow = [&](std::size_t h) -> Tree {
    const auto& from = h == 0 ? constants : all;
    Symbol f = from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
    std::vector<Tree> kids;
    for (std::size_t i = 0; i < f.rank(); ++i) kids.push_back(grow(h - 1));
    return Tree::make(f, kids);
  };
  return grow(max_height);
}

struct RandomAutomatonOptions {
  std::size_t max_states = 4;
  std::uint64_t max_nu = 5;
  double density = 0.35;  // probability that a (symbol, child tuple) gets a transition
  double extra_target = 0.25;  // probability of a second target, making it nondeterministic
};

/// A random automaton over the alphabet with 1..max_states states.
inline Rwta<Natural> random_automaton(Rng& rng, const GradedAlphabet& alphabet,
                                      const RandomAutomatonOptions& options = {}) {
  RwtaBuilder<Natural> b(alphabet);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, options.max_states)(rng);
  std::uniform_int_distribution<std::uint64_t> nu(0, options.max_nu);
  for (std::size_t q = 0; q < n; ++q) b.add_state(StateLabel::name("q" + std::to_string(q)), nu(rng));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<StateId> state(0, static_cast<StateId>(n - 1));
  for (Symbol f : alphabet.symbols()) {
    std::vector<StateId> tuple(f.rank(), 0);
    while (true) {
      if (coin(rng) < options.density || (f.rank() == 0 && coin(rng) < 0.5)) {
        b.add_transition(state(rng), f, tuple);
        if (coin(rng) < options.extra_target) b.add_transition(state(rng), f, tuple);
      }
      std::size_t pos = 0;
      while (pos < tuple.size() && ++tuple[pos] == n) tuple[pos++] = 0;
      if (pos == tuple.size()) break;
    }
  }
  return std::move(b).build();
}

/// Adds a copy of one state (same incoming transitions, and the same uses as
/// a child) with its own root weight, so the copy has the same down language.
inline Rwta<Natural> with_cloned_state(Rng& rng, const Rwta<Natural>& a, std::uint64_t max_nu = 5) {
  if (a.state_count() == 0) return a;
  const StateId original = std::uniform_int_distribution<StateId>(0, static_cast<StateId>(a.state_count() - 1))(rng);
  RwtaBuilder<Natural> b(a.alphabet());
  for (StateId q = 0; q < a.state_count(); ++q) b.add_state(a.label(q), a.nu(q));
  const StateId copy = b.add_state(StateLabel::name(a.label(original).str() + "'"),
                                   std::uniform_int_distribution<std::uint64_t>(0, max_nu)(rng));
  for (const Transition& tr : a.transitions()) {
    // Every way of replacing occurrences of the original by the copy.
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i < tr.children.size(); ++i) {
      if (tr.children[i] == original) spots.push_back(i);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << spots.size()); ++mask) {
      std::vector<StateId> kids = tr.children;
      for (std::size_t s = 0; s < spots.size(); ++s) {
        if (mask >> s & 1) kids[spots[s]] = copy;
      }
      b.add_transition(tr.target, tr.symbol, kids);
      if (tr.target == original) b.add_transition(copy, tr.symbol, kids);
    }
  }
  return std::move(b).build();
}

}  // namespace rwta

#endif  // RWTA_RANDOM_HPP
