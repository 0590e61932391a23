#ifndef RWTA_SUBSET_HPP
#define RWTA_SUBSET_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rwta/automaton.hpp"
#include "rwta/tree.hpp"

namespace rwta {

/// The accessible part of the subset construction of an automaton: every
/// nonempty set Delta(t), discovered breadth-first by tree height, with a
/// minimal-height witness for each set.
struct SubsetGraph {
  struct Step {
    Symbol symbol;
    std::vector<std::uint32_t> children;  // subset ids
  };

  std::vector<StateSet> subsets;
  std::vector<std::size_t> height;  // minimal height of a tree reaching the subset
  std::vector<Step> witness;
  std::vector<Transition> transitions;  // over subset ids
  /// False when the height bound stopped the exploration before the fixpoint.
  bool complete = true;
  /// Minimal height of a tree with an empty run, if one exists within the bound.
  std::optional<std::size_t> empty_run_height;

  std::size_t size() const noexcept { return subsets.size(); }
};

namespace detail {

struct SetHash {
  std::size_t operator()(const StateSet& s) const noexcept {
    std::size_t h = s.size();
    for (StateId q : s) h = hash_combine(h, q);
    return h;
  }
};

inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

}  // namespace detail

/// Explores the accessible subsets of a, round by round: round h combines
/// subsets of height < h under every symbol, keeping only child tuples
/// along which at least one transition fires, so an automaton whose states
/// each belong to few accessible subsets is explored in time linear in its
/// transitions. max_height bounds the rounds (nullopt: run to the fixpoint).
template <WeightDomain D>
SubsetGraph explore_subsets(const Rwta<D>& a, std::optional<std::size_t> max_height = std::nullopt) {
  SubsetGraph g;
  std::unordered_map<StateSet, std::uint32_t, detail::SetHash> index;
  std::vector<std::vector<std::uint32_t>> member_of(a.state_count());
  std::unordered_set<detail::TransitionKey, detail::KeyHash, detail::KeyEq> seen;
  std::unordered_map<Symbol, std::uint64_t, detail::SymbolHash> supported;

  auto intern = [&](StateSet set, std::size_t h, SubsetGraph::Step step) -> std::uint32_t {
    auto [it, inserted] = index.try_emplace(set, static_cast<std::uint32_t>(g.subsets.size()));
    if (inserted) {
      for (StateId q : set) member_of[q].push_back(it->second);
      g.subsets.push_back(std::move(set));
      g.height.push_back(h);
      g.witness.push_back(std::move(step));
    }
    return it->second;
  };

  // Height 0.
  for (Symbol c : a.alphabet().symbols_of_rank(0)) {
    const StateSet& reached = a.targets(c, {});
    if (reached.empty()) {
      if (!g.empty_run_height) g.empty_run_height = 0;
      continue;
    }
    std::uint32_t id = intern(reached, 0, {c, {}});
    g.transitions.push_back(Transition{id, c, {}});
  }

  std::vector<Symbol> ranked;
  for (Symbol f : a.alphabet().symbols()) {
    if (f.rank() > 0) ranked.push_back(f);
  }

  std::size_t frontier_begin = 0;
  std::vector<std::uint32_t> tuple;
  std::vector<const StateSet*> sets;
  for (std::size_t h = 1;; ++h) {
    const std::size_t limit = g.subsets.size();
    if (frontier_begin == limit) break;  // fixpoint
    if (max_height && h > *max_height) {
      g.complete = false;
      break;
    }
    for (std::size_t s = frontier_begin; s < limit; ++s) {
      // Copy: g.subsets may reallocate while we insert.
      const StateSet members = g.subsets[s];
      for (StateId q : members) {
        for (const auto& occ : a.occurrences_of(q)) {
          const Transition& tr = a.transitions()[occ.transition];
          const std::size_t k = tr.children.size();
          // Candidate subsets per position: those containing the transition's child.
          // (state, count): the first count subsets of member_of[state]. Lists
          // may grow while we enumerate, so index them afresh each time.
          std::vector<std::pair<StateId, std::size_t>> options(k);
          bool viable = true;
          for (std::size_t j = 0; j < k && viable; ++j) {
            if (j == occ.position) {
              options[j] = {0, 1};
              continue;
            }
            const auto& list = member_of[tr.children[j]];
            std::size_t n = std::lower_bound(list.begin(), list.end(), static_cast<std::uint32_t>(limit)) - list.begin();
            options[j] = {tr.children[j], n};
            viable = n > 0;
          }
          if (!viable) continue;
          std::vector<std::size_t> pick(k, 0);
          tuple.assign(k, 0);
          while (true) {
            for (std::size_t j = 0; j < k; ++j) {
              tuple[j] = j == occ.position ? static_cast<std::uint32_t>(s) : member_of[options[j].first][pick[j]];
            }
            if (seen.insert(detail::TransitionKey{tr.symbol, tuple}).second) {
              ++supported[tr.symbol];
              sets.clear();
              for (std::uint32_t id : tuple) sets.push_back(&g.subsets[id]);
              StateSet target = a.delta(tr.symbol, sets);
              if (!target.empty()) {
                std::uint32_t id = intern(std::move(target), h, {tr.symbol, tuple});
                g.transitions.push_back(Transition{id, tr.symbol, tuple});
              }
            }
            std::size_t pos = 0;
            while (pos < k && ++pick[pos] == options[pos].second) pick[pos++] = 0;
            if (pos == k) break;
          }
        }
      }
    }
    // A tuple of subsets of height < h along which nothing fires yields an
    // empty run at height h.
    if (!g.empty_run_height) {
      for (Symbol f : ranked) {
        if (detail::saturating_pow(limit, f.rank()) > supported[f]) {
          g.empty_run_height = h;
          break;
        }
      }
    }
    frontier_begin = limit;
  }
  return g;
}

/// Minimal-height witness trees for every subset, indexed by subset id.
inline std::vector<Tree> witness_trees(const SubsetGraph& g) {
  std::vector<Tree> out(g.size());
  // Children of a subset were discovered in an earlier round, hence have smaller ids.
  std::vector<Tree> kids;
  for (std::size_t id = 0; id < g.size(); ++id) {
    kids.clear();
    for (std::uint32_t c : g.witness[id].children) kids.push_back(out[c]);
    out[id] = Tree::make(g.witness[id].symbol, kids);
  }
  return out;
}

}  // namespace rwta

#endif  // RWTA_SUBSET_HPP
