#ifndef RWTA_LANGUAGE_HPP
#define RWTA_LANGUAGE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rwta/error.hpp"
#include "rwta/tree.hpp"

namespace rwta {

/// A finite set of trees. Iteration follows first-insertion order.
class TreeLanguage {
 public:
  TreeLanguage() = default;
  TreeLanguage(std::initializer_list<Tree> trees) {
    for (Tree t : trees) insert(t);
  }
  explicit TreeLanguage(const std::vector<Tree>& trees) {
    for (Tree t : trees) insert(t);
  }

  bool insert(Tree t) {
    if (!members_.insert(t).second) return false;
    order_.push_back(t);
    return true;
  }
  void insert(const TreeLanguage& other) {
    for (Tree t : other) insert(t);
  }

  bool contains(Tree t) const { return members_.count(t) != 0; }
  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return order_.empty(); }

  using const_iterator = std::vector<Tree>::const_iterator;
  const_iterator begin() const noexcept { return order_.begin(); }
  const_iterator end() const noexcept { return order_.end(); }
  const std::vector<Tree>& trees() const noexcept { return order_; }

  /// Sum of tree sizes, |L| = sum over t in L of |t|.
  std::uint64_t total_size() const {
    std::uint64_t n = 0;
    for (Tree t : order_) n += t.size();
    return n;
  }

  bool subset_of(const TreeLanguage& other) const {
    return std::all_of(order_.begin(), order_.end(), [&](Tree t) { return other.contains(t); });
  }

  friend bool operator==(const TreeLanguage& a, const TreeLanguage& b) {
    return a.size() == b.size() && a.subset_of(b);
  }

 private:
  std::vector<Tree> order_;
  std::unordered_set<Tree, TreeHash> members_;
};

inline GradedAlphabet alphabet_of(const TreeLanguage& language) {
  GradedAlphabet out;
  for (Tree t : language) out = merge(out, alphabet_of(t));
  return out;
}

/// SubTree(t): every subtree of t, duplicates collapsed.
inline TreeLanguage subtree_set(Tree t) {
  TreeLanguage out;
  std::vector<Tree> nodes = postorder_distinct(t);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) out.insert(*it);
  return out;
}

inline TreeLanguage subtree_set(const TreeLanguage& language) {
  TreeLanguage out;
  for (Tree t : language) out.insert(subtree_set(t));
  return out;
}

namespace detail {

inline void require_constant(Symbol c) {
  if (!c.valid() || c.rank() != 0) {
    throw InvalidArgument("substitution symbol must have rank 0");
  }
}

}  // namespace detail

/// t_{c <- L}: each occurrence of c is replaced independently by a member of L.
inline TreeLanguage substitute(Tree t, Symbol c, const TreeLanguage& replacement) {
  detail::require_constant(c);
  std::unordered_map<Tree, std::vector<Tree>, TreeHash> memo;
  for (Tree node : postorder_distinct(t)) {
    std::vector<Tree> results;
    if (node.arity() == 0) {
      if (node.symbol() == c) {
        results = replacement.trees();
      } else {
        results.push_back(node);
      }
    } else {
      // Cartesian product of the children's substitution languages.
      std::vector<const std::vector<Tree>*> options;
      bool empty = false;
      for (std::size_t i = 0; i < node.arity(); ++i) {
        const auto& opt = memo.at(node.child(i));
        empty = empty || opt.empty();
        options.push_back(&opt);
      }
      if (!empty) {
        std::vector<std::size_t> pick(node.arity(), 0);
        std::vector<Tree> kids(node.arity());
        TreeLanguage unique;
        while (true) {
          for (std::size_t i = 0; i < kids.size(); ++i) kids[i] = (*options[i])[pick[i]];
          unique.insert(Tree::make(node.symbol(), kids));
          std::size_t pos = 0;
          while (pos < pick.size() && ++pick[pos] == options[pos]->size()) pick[pos++] = 0;
          if (pos == pick.size()) break;
        }
        results = unique.trees();
      }
    }
    memo.emplace(node, std::move(results));
  }
  return TreeLanguage(memo.at(t));
}

/// L1 ._c L2 = union over t in L1 of t_{c <- L2}.
inline TreeLanguage c_product(const TreeLanguage& left, Symbol c, const TreeLanguage& right) {
  detail::require_constant(c);
  TreeLanguage out;
  for (Tree t : left) out.insert(substitute(t, c, right));
  return out;
}

/// L^{n_c}: L^{0_c} = {c}, L^{(n+1)_c} = L^{n_c} u L ._c L^{n_c}.
inline TreeLanguage iterated_c_product(const TreeLanguage& language, Symbol c, std::size_t n) {
  detail::require_constant(c);
  TreeLanguage current{Tree::make(c)};
  for (std::size_t i = 0; i < n; ++i) {
    TreeLanguage next = current;
    next.insert(c_product(language, c, current));
    current = std::move(next);
  }
  return current;
}

/// The c-closure truncated after n steps; equal to L^{n_c}.
inline TreeLanguage c_closure_bounded(const TreeLanguage& language, Symbol c, std::size_t n) {
  return iterated_c_product(language, c, n);
}

/// Every tree over the alphabet with height <= max_height, by increasing
/// height, then by symbol name, then by children in lexicographic order of
/// their enumeration index.
inline TreeLanguage enumerate_trees(const GradedAlphabet& alphabet, std::size_t max_height) {
  std::vector<Symbol> constants = alphabet.symbols_of_rank(0);
  if (constants.empty()) throw InvalidArgument("alphabet has no rank-0 symbol");
  std::vector<Symbol> all = alphabet.symbols();

  std::vector<Tree> trees;
  for (Symbol c : constants) trees.push_back(Tree::make(c));
  std::size_t previous_end = 0;  // trees[0, previous_end) have height < h-1
  for (std::size_t h = 1; h <= max_height; ++h) {
    const std::size_t limit = trees.size();  // trees of height <= h-1
    const std::size_t fresh_begin = previous_end;
    previous_end = limit;
    for (Symbol f : all) {
      const std::size_t k = f.rank();
      if (k == 0) continue;
      // Tuples over [0, limit) with at least one component of height h-1.
      std::vector<std::size_t> pick(k, 0);
      std::vector<Tree> kids(k);
      while (true) {
        bool has_fresh = false;
        for (std::size_t i = 0; i < k; ++i) {
          kids[i] = trees[pick[i]];
          has_fresh = has_fresh || pick[i] >= fresh_begin;
        }
        if (has_fresh) trees.push_back(Tree::make(f, kids));
        std::size_t pos = k;
        while (pos > 0 && ++pick[pos - 1] == limit) pick[--pos] = 0;
        if (pos == 0) break;
      }
    }
  }
  return TreeLanguage(trees);
}

}  // namespace rwta

#endif  // RWTA_LANGUAGE_HPP
