#ifndef RWTA_AUTOMATON_HPP
#define RWTA_AUTOMATON_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "rwta/error.hpp"
#include "rwta/term_io.hpp"
#include "rwta/tree.hpp"
#include "rwta/weight.hpp"

namespace rwta {

using StateId = std::uint32_t;

/// A sorted, duplicate-free set of states.
using StateSet = std::vector<StateId>;

inline bool contains(const StateSet& set, StateId q) { return std::binary_search(set.begin(), set.end(), q); }

/// Printable identity of a state. Composite labels (tuples, sets, tagged)
/// share their parts, so building them is cheap; text is produced on demand.
class StateLabel {
 public:
  StateLabel() : StateLabel(name("?")) {}

  static StateLabel name(std::string text) { return StateLabel(Node{std::move(text)}); }
  static StateLabel term(Tree t) { return StateLabel(Node{t}); }
  static StateLabel indexed(std::string text) { return name(std::move(text)); }
  static StateLabel tagged(std::string tag, StateLabel inner) {
    return StateLabel(Node{Composite{Composite::Kind::tagged, std::move(tag), {std::move(inner)}}});
  }
  static StateLabel tuple(std::vector<StateLabel> parts) {
    return StateLabel(Node{Composite{Composite::Kind::tuple, {}, std::move(parts)}});
  }
  static StateLabel set(std::vector<StateLabel> parts) {
    return StateLabel(Node{Composite{Composite::Kind::set, {}, std::move(parts)}});
  }

  /// The term this label denotes, when it was built from one.
  const Tree* as_term() const { return std::get_if<Tree>(&node_->value); }

  std::string str() const {
    std::string out;
    append(out);
    return out;
  }

 private:
  struct Composite {
    enum class Kind { tagged, tuple, set } kind;
    std::string tag;
    std::vector<StateLabel> parts;
  };
  struct Node {
    std::variant<std::string, Tree, Composite> value;
  };

  explicit StateLabel(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

  void append(std::string& out) const {
    if (const auto* s = std::get_if<std::string>(&node_->value)) {
      out += *s;
    } else if (const auto* t = std::get_if<Tree>(&node_->value)) {
      out += format_tree(*t);
    } else {
      const auto& c = std::get<Composite>(node_->value);
      if (c.kind == Composite::Kind::tagged) {
        out += c.tag;
        out += ':';
        c.parts.front().append(out);
        return;
      }
      out += c.kind == Composite::Kind::tuple ? '(' : '{';
      for (std::size_t i = 0; i < c.parts.size(); ++i) {
        if (i) out += ',';
        c.parts[i].append(out);
      }
      out += c.kind == Composite::Kind::tuple ? ')' : '}';
    }
  }

  std::shared_ptr<const Node> node_;
};

struct Transition {
  StateId target;
  Symbol symbol;
  std::vector<StateId> children;

  friend bool operator==(const Transition&, const Transition&) = default;
};

namespace detail {

struct KeyView {
  Symbol symbol;
  std::span<const StateId> children;
};

struct TransitionKey {
  Symbol symbol;
  std::vector<StateId> children;
};

inline std::size_t key_hash(Symbol s, std::span<const StateId> children) noexcept {
  std::size_t h = std::hash<const void*>{}(s.identity());
  for (StateId c : children) h = hash_combine(h, c);
  return h;
}

struct KeyHash {
  using is_transparent = void;
  std::size_t operator()(const TransitionKey& k) const noexcept { return key_hash(k.symbol, k.children); }
  std::size_t operator()(const KeyView& k) const noexcept { return key_hash(k.symbol, k.children); }
};

struct KeyEq {
  using is_transparent = void;
  template <class A, class B>
  bool operator()(const A& a, const B& b) const noexcept {
    return a.symbol == b.symbol && std::equal(a.children.begin(), a.children.end(), b.children.begin(),
                                              b.children.end());
  }
};

struct SymbolHash {
  std::size_t operator()(Symbol s) const noexcept { return std::hash<const void*>{}(s.identity()); }
};

struct TransitionHash {
  std::size_t operator()(const Transition& t) const noexcept {
    return hash_combine(key_hash(t.symbol, t.children), t.target);
  }
};

}  // namespace detail

template <WeightDomain D>
class RwtaBuilder;

/// A root-weighted tree automaton (alphabet, states, root weights nu,
/// bottom-up transitions). Immutable; build one with RwtaBuilder.
template <WeightDomain D>
class Rwta {
 public:
  using domain_type = D;
  using weight_type = typename D::value_type;

  struct ChildOccurrence {
    std::uint32_t transition;
    std::uint32_t position;
  };

  Rwta() = default;

  const GradedAlphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t state_count() const noexcept { return nu_.size(); }
  std::size_t transition_count() const noexcept { return transitions_.size(); }

  const weight_type& nu(StateId q) const { return nu_.at(q); }
  const std::vector<weight_type>& nu_table() const noexcept { return nu_; }
  const StateLabel& label(StateId q) const { return labels_.at(q); }
  const std::vector<StateLabel>& labels() const noexcept { return labels_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }

  /// delta(f, q1..qk) as a sorted set (empty when undefined).
  const StateSet& targets(Symbol f, std::span<const StateId> children) const {
    auto it = by_key_.find(detail::KeyView{f, children});
    return it == by_key_.end() ? empty_ : it->second;
  }

  /// Indices into transitions() of the transitions reading f.
  const std::vector<std::uint32_t>& transitions_of(Symbol f) const {
    auto it = by_symbol_.find(f);
    return it == by_symbol_.end() ? no_transitions_ : it->second;
  }

  /// Transitions having q as a child, with the child position.
  const std::vector<ChildOccurrence>& occurrences_of(StateId q) const { return occurrences_.at(q); }

  /// Symbols that label at least one transition.
  std::vector<Symbol> used_symbols() const {
    std::vector<Symbol> out;
    for (const auto& [s, list] : by_symbol_) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// delta extended to state sets: the union of delta(f, q1..qk) over
  /// (q1..qk) in Q1 x ... x Qk.
  StateSet delta(Symbol f, std::span<const StateSet* const> child_sets) const {
    const auto& candidates = transitions_of(f);
    if (candidates.empty()) return {};
    if (child_sets.empty()) return targets(f, {});
    std::uint64_t tuples = 1;
    for (const StateSet* s : child_sets) {
      if (s->empty()) return {};
      tuples *= s->size();
      if (tuples > candidates.size()) break;
    }
    StateSet out;
    if (tuples <= candidates.size()) {
      std::vector<std::size_t> pick(child_sets.size(), 0);
      std::vector<StateId> tuple(child_sets.size());
      while (true) {
        for (std::size_t i = 0; i < tuple.size(); ++i) tuple[i] = (*child_sets[i])[pick[i]];
        const auto& hit = targets(f, tuple);
        out.insert(out.end(), hit.begin(), hit.end());
        std::size_t pos = 0;
        while (pos < pick.size() && ++pick[pos] == child_sets[pos]->size()) pick[pos++] = 0;
        if (pos == pick.size()) break;
      }
    } else {
      for (std::uint32_t idx : candidates) {
        const Transition& tr = transitions_[idx];
        bool fires = true;
        for (std::size_t i = 0; i < tr.children.size() && fires; ++i) fires = contains(*child_sets[i], tr.children[i]);
        if (fires) out.push_back(tr.target);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// nu extended to sets.
  weight_type nu_of(const StateSet& set) const {
    weight_type total = D::zero();
    for (StateId q : set) total = D::add(total, nu_[q]);
    return total;
  }

  /// Copy with one root weight replaced.
  Rwta with_nu(StateId q, weight_type w) const {
    Rwta copy = *this;
    copy.nu_.at(q) = w;
    return copy;
  }

 private:
  friend class RwtaBuilder<D>;

  GradedAlphabet alphabet_;
  std::vector<StateLabel> labels_;
  std::vector<weight_type> nu_;
  std::vector<Transition> transitions_;
  std::unordered_map<detail::TransitionKey, StateSet, detail::KeyHash, detail::KeyEq> by_key_;
  std::unordered_map<Symbol, std::vector<std::uint32_t>, detail::SymbolHash> by_symbol_;
  std::vector<std::vector<ChildOccurrence>> occurrences_;
  StateSet empty_;
  std::vector<std::uint32_t> no_transitions_;
};

template <WeightDomain D>
class RwtaBuilder {
 public:
  using weight_type = typename D::value_type;

  RwtaBuilder() = default;
  explicit RwtaBuilder(GradedAlphabet alphabet) { automaton_.alphabet_ = std::move(alphabet); }

  StateId add_state(StateLabel label, weight_type nu) {
    if (automaton_.nu_.size() >= std::numeric_limits<StateId>::max()) throw Error("too many states");
    automaton_.labels_.push_back(std::move(label));
    automaton_.nu_.push_back(nu);
    automaton_.occurrences_.emplace_back();
    return static_cast<StateId>(automaton_.nu_.size() - 1);
  }

  void set_nu(StateId q, weight_type nu) { automaton_.nu_.at(q) = nu; }

  /// Declares a symbol without adding transitions.
  void add_symbol(Symbol f) {
    if (!automaton_.alphabet_.contains(f)) automaton_.alphabet_.add(f);
  }

  /// Adds (target, f, children); duplicates are ignored. The symbol joins
  /// the alphabet (AlphabetMismatch on a rank conflict).
  void add_transition(StateId target, Symbol f, std::vector<StateId> children) {
    if (children.size() != f.rank()) {
      throw InvalidArgument("transition on '" + f.name() + "' needs " + std::to_string(f.rank()) + " children");
    }
    check_state(target);
    for (StateId c : children) check_state(c);
    add_symbol(f);
    Transition tr{target, f, std::move(children)};
    if (!seen_.insert(tr).second) return;
    automaton_.transitions_.push_back(std::move(tr));
  }

  std::size_t state_count() const noexcept { return automaton_.nu_.size(); }

  Rwta<D> build() && {
    Rwta<D>& a = automaton_;
    for (std::uint32_t i = 0; i < a.transitions_.size(); ++i) {
      const Transition& tr = a.transitions_[i];
      auto [it, inserted] = a.by_key_.try_emplace(detail::TransitionKey{tr.symbol, tr.children});
      it->second.push_back(tr.target);
      a.by_symbol_[tr.symbol].push_back(i);
      for (std::uint32_t p = 0; p < tr.children.size(); ++p) {
        auto& occ = a.occurrences_[tr.children[p]];
        // A state repeated as several children of one transition is listed once per position.
        occ.push_back({i, p});
      }
    }
    for (auto& [key, set] : a.by_key_) {
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    seen_.clear();
    return std::move(automaton_);
  }

 private:
  void check_state(StateId q) const {
    if (q >= automaton_.nu_.size()) throw InvalidArgument("unknown state " + std::to_string(q));
  }

  Rwta<D> automaton_;
  std::unordered_set<Transition, detail::TransitionHash> seen_;
};

/// Delta(t): the states reached bottom-up on t.
template <WeightDomain D>
StateSet run(const Rwta<D>& a, Tree t) {
  check_consistent(a.alphabet(), t);
  std::unordered_map<Tree, StateSet, TreeHash> memo;
  std::vector<const StateSet*> kids;
  for (Tree node : postorder_distinct(t)) {
    kids.clear();
    for (std::size_t i = 0; i < node.arity(); ++i) kids.push_back(&memo.at(node.child(i)));
    memo.emplace(node, a.delta(node.symbol(), kids));
  }
  return memo.at(t);
}

/// P_A(t) = nu(Delta(t)), zero for an empty run.
template <WeightDomain D>
typename D::value_type weight(const Rwta<D>& a, Tree t) {
  return a.nu_of(run(a, t));
}

/// Find a state by its printed label.
template <WeightDomain D>
StateId state_by_label(const Rwta<D>& a, const std::string& label) {
  for (StateId q = 0; q < a.state_count(); ++q) {
    if (a.label(q).str() == label) return q;
  }
  throw InvalidArgument("no state labelled '" + label + "'");
}

/// Structural determinism: no (symbol, children) pair has two targets.
template <WeightDomain D>
bool is_deterministic(const Rwta<D>& a) {
  std::unordered_set<detail::TransitionKey, detail::KeyHash, detail::KeyEq> keys;
  for (const Transition& tr : a.transitions()) {
    if (!keys.insert(detail::TransitionKey{tr.symbol, tr.children}).second) return false;
  }
  return true;
}

}  // namespace rwta

#endif  // RWTA_AUTOMATON_HPP
