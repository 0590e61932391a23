#ifndef RWTA_ANALYSIS_HPP
#define RWTA_ANALYSIS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "rwta/automaton.hpp"
#include "rwta/constructions.hpp"
#include "rwta/language.hpp"
#include "rwta/series.hpp"
#include "rwta/subset.hpp"

namespace rwta {

/// The trees of height <= max_height whose run contains q, generated top-down
/// from the transitions into q (not by filtering run()).
template <WeightDomain D>
TreeLanguage down_language_bounded(const Rwta<D>& a, StateId q, std::size_t max_height) {
  if (q >= a.state_count()) throw InvalidArgument("unknown state " + std::to_string(q));
  // level[s] = trees of height <= h in the down language of s, for the current h.
  std::vector<TreeLanguage> level(a.state_count());
  for (const Transition& tr : a.transitions()) {
    if (tr.children.empty()) level[tr.target].insert(Tree::make(tr.symbol, {}));
  }
  std::vector<Tree> kids;
  for (std::size_t h = 1; h <= max_height; ++h) {
    std::vector<TreeLanguage> next = level;
    for (const Transition& tr : a.transitions()) {
      const std::size_t k = tr.children.size();
      if (k == 0) continue;
      std::vector<std::vector<Tree>> options(k);
      bool viable = true;
      for (std::size_t j = 0; j < k && viable; ++j) {
        options[j] = level[tr.children[j]].trees();
        viable = !options[j].empty();
      }
      if (!viable) continue;
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        kids.clear();
        for (std::size_t j = 0; j < k; ++j) kids.push_back(options[j][pick[j]]);
        next[tr.target].insert(Tree::make(tr.symbol, kids));
        std::size_t pos = 0;
        while (pos < k && ++pick[pos] == options[pos].size()) pick[pos++] = 0;
        if (pos == k) break;
      }
    }
    level = std::move(next);
  }
  return level[q];
}

/// One class of trees that every automaton in a family runs identically on,
/// with a minimal-height member.
struct RunClass {
  Tree witness;
  std::size_t height;
  std::vector<StateSet> runs;  // per automaton
};

/// The run classes of trees of height <= max_height (all heights when
/// nullopt) for several automata at once. Two trees in one class get the
/// same weight from every automaton, so comparing weights on the witnesses
/// compares the series on the whole bounded domain. A class where every run
/// is empty is included when such trees exist.
template <WeightDomain D>
std::vector<RunClass> run_classes(const std::vector<const Rwta<D>*>& automata,
                                  std::optional<std::size_t> max_height) {
  GradedAlphabet alphabet;
  for (const auto* a : automata) alphabet = merge(alphabet, a->alphabet());
  RwtaBuilder<D> b(alphabet);
  std::vector<StateId> offsets;
  for (const auto* a : automata) {
    const StateId offset = static_cast<StateId>(b.state_count());
    offsets.push_back(offset);
    for (StateId q = 0; q < a->state_count(); ++q) b.add_state(a->label(q), a->nu(q));
    for (const Transition& tr : a->transitions()) {
      std::vector<StateId> kids = tr.children;
      for (StateId& c : kids) c += offset;
      b.add_transition(tr.target + offset, tr.symbol, std::move(kids));
    }
  }
  offsets.push_back(static_cast<StateId>(b.state_count()));
  Rwta<D> joint = std::move(b).build();
  SubsetGraph g = explore_subsets(joint, max_height);
  std::vector<Tree> witnesses = witness_trees(g);

  std::vector<RunClass> out;
  for (std::size_t id = 0; id < g.size(); ++id) {
    RunClass rc{witnesses[id], g.height[id], std::vector<StateSet>(automata.size())};
    for (StateId q : g.subsets[id]) {
      const std::size_t which = std::upper_bound(offsets.begin(), offsets.end(), q) - offsets.begin() - 1;
      rc.runs[which].push_back(q - offsets[which]);
    }
    out.push_back(std::move(rc));
  }
  if (g.empty_run_height) {
    // Build a minimal tree with an empty run: a constant without transitions,
    // or a symbol over witnesses along which nothing fires.
    std::optional<Tree> empty;
    for (Symbol c : alphabet.symbols_of_rank(0)) {
      if (joint.targets(c, {}).empty()) {
        empty = Tree::make(c, {});
        break;
      }
    }
    const std::size_t h = *g.empty_run_height;
    for (Symbol f : alphabet.symbols()) {
      if (empty || f.rank() == 0) continue;
      std::vector<std::uint32_t> below;
      for (std::size_t id = 0; id < g.size(); ++id) {
        if (g.height[id] < h) below.push_back(static_cast<std::uint32_t>(id));
      }
      std::vector<std::size_t> pick(f.rank(), 0);
      std::vector<const StateSet*> sets(f.rank());
      while (!below.empty()) {
        for (std::size_t j = 0; j < f.rank(); ++j) sets[j] = &g.subsets[below[pick[j]]];
        if (joint.delta(f, sets).empty()) {
          std::vector<Tree> kids;
          for (std::size_t j = 0; j < f.rank(); ++j) kids.push_back(witnesses[below[pick[j]]]);
          empty = Tree::make(f, kids);
          break;
        }
        std::size_t pos = 0;
        while (pos < f.rank() && ++pick[pos] == below.size()) pick[pos++] = 0;
        if (pos == f.rank()) break;
      }
    }
    if (empty) out.push_back(RunClass{*empty, h, std::vector<StateSet>(automata.size())});
  }
  return out;
}

/// A tree of height <= max_height on which the two automata disagree, if any.
/// Exact over the bounded domain; weights are recomputed with weight().
template <WeightDomain D>
std::optional<Tree> series_difference_bounded(const Rwta<D>& a1, const Rwta<D>& a2, std::size_t max_height) {
  for (const RunClass& rc : run_classes<D>({&a1, &a2}, max_height)) {
    if (!(weight(a1, rc.witness) == weight(a2, rc.witness))) return rc.witness;
  }
  return std::nullopt;
}

template <WeightDomain D>
bool series_equal_bounded(const Rwta<D>& a1, const Rwta<D>& a2, std::size_t max_height) {
  return !series_difference_bounded(a1, a2, max_height).has_value();
}

struct DownCompatibilityReport {
  bool compatible = true;
  std::size_t bound = 0;
  /// True when the bound did not cut the exploration, so the verdict holds for all heights.
  bool exhaustive = false;
  std::optional<std::pair<StateId, StateId>> states;  // a same-class pair that differs
  std::optional<Tree> witness;                        // a tree in exactly one of their down languages
};

template <WeightDomain D>
DownCompatibilityReport down_compatibility_report(const Rwta<D>& a, const StateClassifier& cls,
                                                  std::size_t max_height) {
  if (cls.state_count() != a.state_count()) throw InvalidArgument("classifier does not cover every state");
  SubsetGraph g = explore_subsets(a, max_height);
  DownCompatibilityReport report;
  report.bound = max_height;
  report.exhaustive = g.complete;
  // q1 ~ q2 have equal bounded down languages iff every accessible subset
  // contains both or neither.
  std::vector<std::size_t> seen(cls.class_count(), 0);
  for (std::size_t id = 0; id < g.size() && report.compatible; ++id) {
    std::fill(seen.begin(), seen.end(), 0);
    for (StateId q : g.subsets[id]) ++seen[cls.class_of(q)];
    for (StateId q : g.subsets[id]) {
      const std::size_t c = cls.class_of(q);
      if (seen[c] == cls.members(c).size()) continue;
      for (StateId other : cls.members(c)) {
        if (!contains(g.subsets[id], other)) {
          report.compatible = false;
          report.states = std::make_pair(q, other);
          report.witness = witness_trees(g)[id];
          break;
        }
      }
      break;  // this subset already refutes the classifier
    }
  }
  return report;
}

/// True iff same-class states have equal down languages up to max_height.
template <WeightDomain D>
bool check_down_compatible_bounded(const Rwta<D>& a, const StateClassifier& cls, std::size_t max_height) {
  return down_compatibility_report(a, cls, max_height).compatible;
}

/// The coarsest down-compatible classifier at the bound: states with the
/// same membership across all accessible subsets share a class.
template <WeightDomain D>
StateClassifier down_equivalence_bounded(const Rwta<D>& a, std::size_t max_height) {
  SubsetGraph g = explore_subsets(a, max_height);
  std::vector<std::vector<std::uint32_t>> signature(a.state_count());
  for (std::size_t id = 0; id < g.size(); ++id) {
    for (StateId q : g.subsets[id]) signature[q].push_back(static_cast<std::uint32_t>(id));
  }
  std::map<std::vector<std::uint32_t>, std::size_t> keys;
  std::vector<std::size_t> cls;
  for (const auto& s : signature) cls.push_back(keys.try_emplace(s, keys.size()).first->second);
  return StateClassifier(cls);
}

/// The realized series on every tree of height <= max_height. Trees are
/// enumerated bottom-up by height, dropping those with an empty run: they
/// weigh zero, and so does every tree containing them.
template <WeightDomain D>
FormalTreeSeries<D> realized_series_bounded(const Rwta<D>& a, std::size_t max_height) {
  FormalTreeSeries<D> out(a.alphabet());
  std::vector<Tree> alive;
  std::vector<StateSet> runs;
  for (Symbol c : a.alphabet().symbols_of_rank(0)) {
    StateSet r = a.delta(c, {});
    if (r.empty()) continue;
    alive.push_back(Tree::make(c, {}));
    runs.push_back(std::move(r));
  }
  std::size_t fresh_begin = 0;
  std::vector<Tree> kids;
  std::vector<const StateSet*> child_runs;
  for (std::size_t h = 1; h <= max_height; ++h) {
    const std::size_t limit = alive.size();
    for (Symbol f : a.alphabet().symbols()) {
      const std::size_t k = f.rank();
      if (k == 0 || limit == 0) continue;
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        bool has_fresh = false;
        kids.clear();
        child_runs.clear();
        for (std::size_t i = 0; i < k; ++i) {
          kids.push_back(alive[pick[i]]);
          child_runs.push_back(&runs[pick[i]]);
          has_fresh = has_fresh || pick[i] >= fresh_begin;
        }
        if (has_fresh) {
          StateSet r = a.delta(f, child_runs);
          if (!r.empty()) {
            alive.push_back(Tree::make(f, kids));
            runs.push_back(std::move(r));
          }
        }
        std::size_t pos = k;
        while (pos > 0 && ++pick[pos - 1] == limit) pick[--pos] = 0;
        if (pos == 0) break;
      }
    }
    fresh_begin = limit;
    if (alive.size() == limit) break;
  }
  for (std::size_t i = 0; i < alive.size(); ++i) out.set(alive[i], a.nu_of(runs[i]));
  return out;
}

/// Sum over q of nu(q) times the indicator of the bounded down language of q.
template <WeightDomain D>
FormalTreeSeries<D> series_from_down_languages(const Rwta<D>& a, std::size_t max_height) {
  FormalTreeSeries<D> out(a.alphabet());
  for (StateId q = 0; q < a.state_count(); ++q) {
    if (is_zero<D>(a.nu(q))) continue;
    for (Tree t : down_language_bounded(a, q, max_height)) out.accumulate(t, a.nu(q));
  }
  return out;
}

/// Distinct weights over trees of height <= max_height (all heights when nullopt).
template <WeightDomain D>
std::set<typename D::value_type> image_bounded(const Rwta<D>& a, std::optional<std::size_t> max_height) {
  SubsetGraph g = explore_subsets(a, max_height);
  std::set<typename D::value_type> out;
  for (const StateSet& s : g.subsets) out.insert(a.nu_of(s));
  if (g.empty_run_height) out.insert(D::zero());
  return out;
}

/// Isomorphism of deterministic automata. Accessible states are matched
/// through their minimal witness trees; the matching must be a bijection
/// preserving nu and transitions. Inaccessible states only need to agree in
/// number and nu multiset. max_height bounds the witness search.
template <WeightDomain D>
bool iso_sequential(const Rwta<D>& a1, const Rwta<D>& a2, std::optional<std::size_t> max_height = std::nullopt) {
  if (!is_deterministic(a1) || !is_deterministic(a2)) throw InvalidArgument("iso_sequential needs deterministic automata");
  if (a1.state_count() != a2.state_count()) return false;
  std::vector<RunClass> classes = run_classes<D>({&a1, &a2}, max_height);
  constexpr StateId none = std::numeric_limits<StateId>::max();
  std::vector<StateId> forward(a1.state_count(), none), backward(a2.state_count(), none);
  for (const RunClass& rc : classes) {
    const StateSet& r1 = rc.runs[0];
    const StateSet& r2 = rc.runs[1];
    // Deterministic automata reach at most one state; each class pins a pair.
    if (r1.size() > 1 || r2.size() > 1) return false;
    if (r1.size() != r2.size()) return false;
    if (r1.empty()) continue;
    const StateId p = r1.front(), q = r2.front();
    if (forward[p] != none && forward[p] != q) return false;
    if (backward[q] != none && backward[q] != p) return false;
    forward[p] = q;
    backward[q] = p;
    if (!(a1.nu(p) == a2.nu(q))) return false;
  }
  // Transitions among accessible states must correspond one-to-one.
  std::size_t accessible_transitions1 = 0;
  for (const Transition& tr : a1.transitions()) {
    bool accessible = forward[tr.target] != none;
    for (StateId c : tr.children) accessible = accessible && forward[c] != none;
    if (!accessible) continue;
    ++accessible_transitions1;
    std::vector<StateId> kids;
    for (StateId c : tr.children) kids.push_back(forward[c]);
    if (!contains(a2.targets(tr.symbol, kids), forward[tr.target])) return false;
  }
  std::size_t accessible_transitions2 = 0;
  for (const Transition& tr : a2.transitions()) {
    bool accessible = backward[tr.target] != none;
    for (StateId c : tr.children) accessible = accessible && backward[c] != none;
    if (accessible) ++accessible_transitions2;
  }
  if (accessible_transitions1 != accessible_transitions2) return false;
  std::multiset<typename D::value_type> rest1, rest2;
  for (StateId p = 0; p < a1.state_count(); ++p) {
    if (forward[p] == none) rest1.insert(a1.nu(p));
  }
  for (StateId q = 0; q < a2.state_count(); ++q) {
    if (backward[q] == none) rest2.insert(a2.nu(q));
  }
  return rest1 == rest2;
}

}  // namespace rwta

#endif  // RWTA_ANALYSIS_HPP
