#ifndef RWTA_CONSTRUCTIONS_HPP
#define RWTA_CONSTRUCTIONS_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rwta/automaton.hpp"
#include "rwta/error.hpp"
#include "rwta/subset.hpp"

namespace rwta {

enum class SubsetLabels {
  members,   // {q1,q2,...}
  witness,   // the minimal witness tree, printed as a term
};

/// Builds the sequential automaton whose states are the graph's subsets.
template <WeightDomain D>
Rwta<D> automaton_from_subsets(const Rwta<D>& a, const SubsetGraph& g, SubsetLabels labels = SubsetLabels::members) {
  RwtaBuilder<D> b(a.alphabet());
  std::vector<Tree> witnesses;
  if (labels == SubsetLabels::witness) witnesses = witness_trees(g);
  for (std::size_t id = 0; id < g.size(); ++id) {
    StateLabel label;
    if (labels == SubsetLabels::witness) {
      label = StateLabel::term(witnesses[id]);
    } else if (g.subsets[id].size() == 1) {
      label = a.label(g.subsets[id].front());
    } else {
      std::vector<StateLabel> parts;
      for (StateId q : g.subsets[id]) parts.push_back(a.label(q));
      label = StateLabel::set(std::move(parts));
    }
    b.add_state(std::move(label), a.nu_of(g.subsets[id]));
  }
  for (const Transition& tr : g.transitions) b.add_transition(tr.target, tr.symbol, tr.children);
  return std::move(b).build();
}

/// The accessible part of the subset automaton of a; deterministic and
/// realizing the same series. The empty set is not a state: a tree that
/// would reach it simply has an empty run.
template <WeightDomain D>
Rwta<D> sequentialize(const Rwta<D>& a, SubsetLabels labels = SubsetLabels::members) {
  return automaton_from_subsets(a, explore_subsets(a), labels);
}

namespace detail {

template <WeightDomain D>
bool labels_collide(const Rwta<D>& a1, const Rwta<D>& a2) {
  std::unordered_set<const void*> terms;
  std::unordered_set<std::string> names;
  for (const StateLabel& l : a1.labels()) {
    if (const Tree* t = l.as_term()) {
      terms.insert(t->identity());
    } else {
      names.insert(l.str());
    }
  }
  for (const StateLabel& l : a2.labels()) {
    if (const Tree* t = l.as_term()) {
      if (terms.count(t->identity())) return true;
      if (!names.empty() && names.count(l.str())) return true;
    } else if (names.count(l.str())) {
      return true;
    }
  }
  if (!terms.empty()) {
    // A name label on the right might print like a term on the left.
    for (const StateLabel& l : a2.labels()) {
      if (l.as_term()) continue;
      for (const StateLabel& m : a1.labels()) {
        if (m.as_term() && m.str() == l.str()) return true;
      }
    }
  }
  return false;
}

}  // namespace detail

/// A1 + A2: disjoint union. When the two label sets overlap, states are
/// relabelled "1:q" and "2:q". Throws AlphabetMismatch on a rank conflict.
template <WeightDomain D>
Rwta<D> rwta_sum(const Rwta<D>& a1, const Rwta<D>& a2) {
  RwtaBuilder<D> b(merge(a1.alphabet(), a2.alphabet()));
  const bool tag = detail::labels_collide(a1, a2);
  for (StateId q = 0; q < a1.state_count(); ++q) {
    b.add_state(tag ? StateLabel::tagged("1", a1.label(q)) : a1.label(q), a1.nu(q));
  }
  const StateId offset = static_cast<StateId>(a1.state_count());
  for (StateId q = 0; q < a2.state_count(); ++q) {
    b.add_state(tag ? StateLabel::tagged("2", a2.label(q)) : a2.label(q), a2.nu(q));
  }
  for (const Transition& tr : a1.transitions()) b.add_transition(tr.target, tr.symbol, tr.children);
  for (const Transition& tr : a2.transitions()) {
    std::vector<StateId> kids = tr.children;
    for (StateId& c : kids) c += offset;
    b.add_transition(tr.target + offset, tr.symbol, std::move(kids));
  }
  return std::move(b).build();
}

template <WeightDomain D>
struct ProductResult {
  Rwta<D> automaton;
  std::vector<std::pair<StateId, StateId>> components;  // per product state
};

/// Accessible part of A1 x A2 with the component pair of every state.
/// Pairs are discovered bottom-up from the constants; for each new pair
/// only the A1 transitions having its first component as a child are tried.
template <SemiringDomain D>
ProductResult<D> accessible_product(const Rwta<D>& a1, const Rwta<D>& a2) {
  GradedAlphabet alphabet = merge(a1.alphabet(), a2.alphabet());
  std::vector<std::pair<StateId, StateId>> pairs;
  std::unordered_map<std::uint64_t, StateId> index;
  std::vector<std::vector<StateId>> partners(a1.state_count());  // pair ids by first component
  std::vector<Transition> transitions;
  std::deque<StateId> work;

  auto intern = [&](StateId p, StateId q) -> StateId {
    const std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | q;
    auto [it, inserted] = index.try_emplace(key, static_cast<StateId>(pairs.size()));
    if (inserted) {
      pairs.emplace_back(p, q);
      partners[p].push_back(it->second);
      work.push_back(it->second);
    }
    return it->second;
  };

  for (Symbol c : a1.alphabet().symbols_of_rank(0)) {
    const StateSet& left = a1.targets(c, {});
    const StateSet& right = a2.targets(c, {});
    for (StateId p : left) {
      for (StateId q : right) transitions.push_back(Transition{intern(p, q), c, {}});
    }
  }

  std::vector<StateId> tuple, right_children;
  while (!work.empty()) {
    const StateId current = work.front();
    work.pop_front();
    const StateId p = pairs[current].first;
    for (const auto& occ : a1.occurrences_of(p)) {
      const Transition& tr = a1.transitions()[occ.transition];
      if (a2.transitions_of(tr.symbol).empty()) continue;
      const std::size_t k = tr.children.size();
      std::vector<std::size_t> limit(k);
      bool viable = true;
      for (std::size_t j = 0; j < k && viable; ++j) {
        limit[j] = j == occ.position ? 1 : partners[tr.children[j]].size();
        viable = limit[j] > 0;
      }
      if (!viable) continue;
      std::vector<std::size_t> pick(k, 0);
      tuple.assign(k, 0);
      right_children.assign(k, 0);
      while (true) {
        for (std::size_t j = 0; j < k; ++j) {
          tuple[j] = j == occ.position ? current : partners[tr.children[j]][pick[j]];
          right_children[j] = pairs[tuple[j]].second;
        }
        for (StateId q : a2.targets(tr.symbol, right_children)) {
          transitions.push_back(Transition{intern(tr.target, q), tr.symbol, tuple});
        }
        std::size_t pos = 0;
        while (pos < k && ++pick[pos] == limit[pos]) pick[pos++] = 0;
        if (pos == k) break;
      }
    }
  }

  RwtaBuilder<D> b(std::move(alphabet));
  for (const auto& [p, q] : pairs) {
    b.add_state(StateLabel::tuple({a1.label(p), a2.label(q)}), D::mul(a1.nu(p), a2.nu(q)));
  }
  for (Transition& tr : transitions) b.add_transition(tr.target, tr.symbol, std::move(tr.children));
  return {std::move(b).build(), std::move(pairs)};
}

/// A1 x A2 restricted to its accessible part; nu(p,q) = nu1(p) x nu2(q).
template <SemiringDomain D>
Rwta<D> rwta_product(const Rwta<D>& a1, const Rwta<D>& a2) {
  return accessible_product(a1, a2).automaton;
}

/// An equivalence relation on the states of one automaton, as a class id per state.
class StateClassifier {
 public:
  StateClassifier() = default;

  /// Any class keys; they are renumbered densely by first appearance.
  explicit StateClassifier(const std::vector<std::size_t>& keys) {
    std::unordered_map<std::size_t, std::size_t> dense;
    for (std::size_t k : keys) {
      auto [it, inserted] = dense.try_emplace(k, members_.size());
      if (inserted) members_.emplace_back();
      members_[it->second].push_back(static_cast<StateId>(class_of_.size()));
      class_of_.push_back(it->second);
    }
  }

  static StateClassifier identity(std::size_t states) {
    std::vector<std::size_t> keys(states);
    for (std::size_t i = 0; i < states; ++i) keys[i] = i;
    return StateClassifier(keys);
  }

  std::size_t state_count() const noexcept { return class_of_.size(); }
  std::size_t class_count() const noexcept { return members_.size(); }
  std::size_t class_of(StateId q) const { return class_of_.at(q); }
  const std::vector<StateId>& members(std::size_t c) const { return members_.at(c); }
  bool same(StateId p, StateId q) const { return class_of(p) == class_of(q); }

 private:
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<StateId>> members_;
};

/// Classifier from label text to class name; every state must be mapped.
template <WeightDomain D>
StateClassifier classifier_from_labels(const Rwta<D>& a, const std::map<std::string, std::string>& classes) {
  std::map<std::string, std::size_t> names;
  std::vector<std::size_t> keys;
  for (StateId q = 0; q < a.state_count(); ++q) {
    auto it = classes.find(a.label(q).str());
    if (it == classes.end()) throw InvalidArgument("classifier does not cover state '" + a.label(q).str() + "'");
    keys.push_back(names.try_emplace(it->second, names.size()).first->second);
  }
  return StateClassifier(keys);
}

/// A/~: one state per class with nu(C) = sum of nu(q) over q in C, and a
/// class transition whenever some member tuple has one.
template <WeightDomain D>
Rwta<D> quotient(const Rwta<D>& a, const StateClassifier& cls) {
  if (cls.state_count() != a.state_count()) {
    throw InvalidArgument("classifier covers " + std::to_string(cls.state_count()) + " states, automaton has " +
                          std::to_string(a.state_count()));
  }
  RwtaBuilder<D> b(a.alphabet());
  for (std::size_t c = 0; c < cls.class_count(); ++c) {
    const auto& members = cls.members(c);
    typename D::value_type nu = D::zero();
    std::vector<StateLabel> parts;
    for (StateId q : members) {
      nu = D::add(nu, a.nu(q));
      parts.push_back(a.label(q));
    }
    b.add_state(members.size() == 1 ? parts.front() : StateLabel::set(std::move(parts)), nu);
  }
  for (const Transition& tr : a.transitions()) {
    std::vector<StateId> kids;
    kids.reserve(tr.children.size());
    for (StateId c : tr.children) kids.push_back(static_cast<StateId>(cls.class_of(c)));
    b.add_transition(static_cast<StateId>(cls.class_of(tr.target)), tr.symbol, std::move(kids));
  }
  return std::move(b).build();
}

}  // namespace rwta

#endif  // RWTA_CONSTRUCTIONS_HPP
