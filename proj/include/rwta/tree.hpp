#ifndef RWTA_TREE_HPP
#define RWTA_TREE_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rwta/error.hpp"

namespace rwta {

namespace detail {

struct SymbolInfo {
  std::string name;
  std::size_t rank;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) noexcept {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace detail

/// A ranked symbol. Symbols are interned process-wide on (name, rank), so
/// f/1 and f/2 are distinct symbols; a GradedAlphabet forbids mixing them.
class Symbol {
 public:
  Symbol() = default;

  static Symbol get(std::string_view name, std::size_t rank);

  const std::string& name() const noexcept { return info_->name; }
  std::size_t rank() const noexcept { return info_->rank; }
  bool valid() const noexcept { return info_ != nullptr; }

  friend bool operator==(Symbol a, Symbol b) noexcept { return a.info_ == b.info_; }
  friend bool operator<(Symbol a, Symbol b) noexcept {
    if (a.info_->name != b.info_->name) return a.info_->name < b.info_->name;
    return a.info_->rank < b.info_->rank;
  }

  const void* identity() const noexcept { return info_; }

 private:
  explicit Symbol(const detail::SymbolInfo* info) : info_(info) {}
  const detail::SymbolInfo* info_ = nullptr;
};

namespace detail {

class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  const SymbolInfo* intern(std::string_view name, std::size_t rank) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(std::string(name), rank);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    storage_.push_back(SymbolInfo{key.first, rank});
    const SymbolInfo* info = &storage_.back();
    index_.emplace(std::move(key), info);
    return info;
  }

 private:
  std::mutex mutex_;
  std::deque<SymbolInfo> storage_;
  std::map<std::pair<std::string, std::size_t>, const SymbolInfo*> index_;
};

}  // namespace detail

inline Symbol Symbol::get(std::string_view name, std::size_t rank) {
  return Symbol(detail::SymbolTable::instance().intern(name, rank));
}

/// Symbol names with fixed ranks. Each name carries exactly one rank.
class GradedAlphabet {
 public:
  GradedAlphabet() = default;
  GradedAlphabet(std::initializer_list<std::pair<std::string_view, std::size_t>> entries) {
    for (auto [name, rank] : entries) add(name, rank);
  }

  /// Adds name/rank. Throws AlphabetMismatch if name is known at another rank.
  Symbol add(std::string_view name, std::size_t rank) {
    auto it = ranks_.find(name);
    if (it != ranks_.end()) {
      if (it->second != rank) {
        throw AlphabetMismatch("symbol '" + std::string(name) + "' used with rank " + std::to_string(rank) +
                               " but declared with rank " + std::to_string(it->second));
      }
    } else {
      ranks_.emplace(std::string(name), rank);
    }
    return Symbol::get(name, rank);
  }
  Symbol add(Symbol s) { return add(s.name(), s.rank()); }

  bool contains(Symbol s) const {
    auto it = ranks_.find(s.name());
    return it != ranks_.end() && it->second == s.rank();
  }
  bool contains_name(std::string_view name) const { return ranks_.find(name) != ranks_.end(); }

  /// Rank of a known name; throws InvalidArgument when unknown.
  std::size_t rank_of(std::string_view name) const {
    auto it = ranks_.find(name);
    if (it == ranks_.end()) throw InvalidArgument("unknown symbol '" + std::string(name) + "'");
    return it->second;
  }

  /// Throws AlphabetMismatch if s clashes with a declared rank.
  void check_consistent(Symbol s) const {
    auto it = ranks_.find(s.name());
    if (it != ranks_.end() && it->second != s.rank()) {
      throw AlphabetMismatch("symbol '" + s.name() + "' has rank " + std::to_string(s.rank()) +
                             " but the alphabet declares rank " + std::to_string(it->second));
    }
  }

  /// Symbols sorted by name.
  std::vector<Symbol> symbols() const {
    std::vector<Symbol> out;
    out.reserve(ranks_.size());
    for (const auto& [name, rank] : ranks_) out.push_back(Symbol::get(name, rank));
    return out;
  }

  std::vector<Symbol> symbols_of_rank(std::size_t rank) const {
    std::vector<Symbol> out;
    for (const auto& [name, r] : ranks_) {
      if (r == rank) out.push_back(Symbol::get(name, r));
    }
    return out;
  }

  std::size_t max_rank() const {
    std::size_t m = 0;
    for (const auto& entry : ranks_) m = std::max(m, entry.second);
    return m;
  }

  std::size_t size() const noexcept { return ranks_.size(); }
  bool empty() const noexcept { return ranks_.empty(); }

  /// Union of two alphabets; throws AlphabetMismatch on a rank conflict.
  friend GradedAlphabet merge(const GradedAlphabet& a, const GradedAlphabet& b) {
    GradedAlphabet out = a;
    for (const auto& [name, rank] : b.ranks_) out.add(name, rank);
    return out;
  }

  friend bool operator==(const GradedAlphabet&, const GradedAlphabet&) = default;

 private:
  std::map<std::string, std::size_t, std::less<>> ranks_;
};

namespace detail {

struct TermNode {
  Symbol symbol;
  std::vector<const TermNode*> children;
  std::size_t hash;
  std::uint64_t size;
  std::size_t height;
  std::uint64_t serial;
};

}  // namespace detail

/// A ranked tree. Trees are hash-consed: structurally equal trees share one
/// node, so equality, hashing and set membership are pointer operations.
/// Nodes live for the lifetime of the process.
class Tree {
 public:
  Tree() = default;

  /// Interns symbol(children...). Throws InvalidArgument on an arity mismatch.
  static Tree make(Symbol symbol, std::span<const Tree> children = {});
  static Tree make(Symbol symbol, std::initializer_list<Tree> children) {
    return make(symbol, std::span<const Tree>(children.begin(), children.size()));
  }
  static Tree leaf(std::string_view name) { return make(Symbol::get(name, 0)); }

  Symbol symbol() const noexcept { return node_->symbol; }
  std::size_t arity() const noexcept { return node_->children.size(); }
  Tree child(std::size_t i) const noexcept { return Tree(node_->children[i]); }
  std::vector<Tree> children() const {
    std::vector<Tree> out;
    out.reserve(arity());
    for (auto* c : node_->children) out.push_back(Tree(c));
    return out;
  }

  /// Number of nodes (positions).
  std::uint64_t size() const noexcept { return node_->size; }
  /// Constants have height 0.
  std::size_t height() const noexcept { return node_->height; }
  /// Creation order of the interned node.
  std::uint64_t serial() const noexcept { return node_->serial; }

  bool valid() const noexcept { return node_ != nullptr; }
  const void* identity() const noexcept { return node_; }

  friend bool operator==(Tree a, Tree b) noexcept { return a.node_ == b.node_; }

 private:
  friend class TermStore;
  explicit Tree(const detail::TermNode* node) : node_(node) {}
  const detail::TermNode* node_ = nullptr;
};

struct TreeHash {
  std::size_t operator()(Tree t) const noexcept { return std::hash<const void*>{}(t.identity()); }
};

/// The process-wide unique table for tree nodes. Insertion is serialized by
/// a mutex; reading an existing Tree never touches the table.
class TermStore {
 public:
  static TermStore& instance() {
    static TermStore store;
    return store;
  }

  Tree intern(Symbol symbol, std::span<const Tree> children) {
    std::size_t h = std::hash<const void*>{}(symbol.identity());
    for (Tree c : children) h = detail::hash_combine(h, std::hash<const void*>{}(c.node_));
    Probe probe{symbol, children, h};

    std::lock_guard lock(mutex_);
    if (auto it = table_.find(probe); it != table_.end()) return Tree(*it);

    detail::TermNode node{symbol, {}, h, 1, 0, next_serial_++};
    node.children.reserve(children.size());
    for (Tree c : children) {
      node.children.push_back(c.node_);
      node.size += c.size();
      node.height = std::max(node.height, c.height() + 1);
    }
    nodes_.push_back(std::move(node));
    const detail::TermNode* stored = &nodes_.back();
    table_.insert(stored);
    return Tree(stored);
  }

  std::size_t node_count() {
    std::lock_guard lock(mutex_);
    return nodes_.size();
  }

 private:
  struct Probe {
    Symbol symbol;
    std::span<const Tree> children;
    std::size_t hash;
  };

  struct NodeHash {
    using is_transparent = void;
    std::size_t operator()(const detail::TermNode* n) const noexcept { return n->hash; }
    std::size_t operator()(const Probe& p) const noexcept { return p.hash; }
  };

  struct NodeEq {
    using is_transparent = void;
    bool operator()(const detail::TermNode* a, const detail::TermNode* b) const noexcept { return a == b; }
    bool operator()(const Probe& p, const detail::TermNode* n) const noexcept { return match(p, n); }
    bool operator()(const detail::TermNode* n, const Probe& p) const noexcept { return match(p, n); }
    static bool match(const Probe& p, const detail::TermNode* n) noexcept {
      if (p.hash != n->hash || !(p.symbol == n->symbol) || p.children.size() != n->children.size()) return false;
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (p.children[i].node_ != n->children[i]) return false;
      }
      return true;
    }
  };

  std::mutex mutex_;
  std::deque<detail::TermNode> nodes_;
  std::unordered_set<const detail::TermNode*, NodeHash, NodeEq> table_;
  std::uint64_t next_serial_ = 0;
};

inline Tree Tree::make(Symbol symbol, std::span<const Tree> children) {
  if (!symbol.valid()) throw InvalidArgument("invalid symbol");
  if (children.size() != symbol.rank()) {
    throw InvalidArgument("symbol '" + symbol.name() + "' has rank " + std::to_string(symbol.rank()) + " but got " +
                          std::to_string(children.size()) + " children");
  }
  for (Tree c : children) {
    if (!c.valid()) throw InvalidArgument("invalid child tree");
  }
  return TermStore::instance().intern(symbol, children);
}

/// Distinct nodes of t, children before parents. Iterative, so arbitrarily
/// deep trees are fine.
inline std::vector<Tree> postorder_distinct(Tree t) {
  std::vector<Tree> out;
  std::unordered_set<Tree, TreeHash> done;
  std::vector<std::pair<Tree, std::size_t>> stack{{t, 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next == 0 && done.count(node)) {
      stack.pop_back();
      continue;
    }
    if (next < node.arity()) {
      Tree c = node.child(next++);
      if (!done.count(c)) stack.emplace_back(c, 0);
      continue;
    }
    if (done.insert(node).second) out.push_back(node);
    stack.pop_back();
  }
  return out;
}

/// Visits every position of t in prefix order (repeated subtrees are visited
/// once per occurrence).
template <class F>
void for_each_position(Tree t, F&& visit) {
  std::vector<Tree> stack{t};
  while (!stack.empty()) {
    Tree node = stack.back();
    stack.pop_back();
    visit(node);
    for (std::size_t i = node.arity(); i-- > 0;) stack.push_back(node.child(i));
  }
}

inline std::uint64_t tree_size(Tree t) { return t.size(); }
inline std::size_t tree_height(Tree t) { return t.height(); }

/// Alphabet of the symbols occurring in t; throws AlphabetMismatch on a rank conflict.
inline GradedAlphabet alphabet_of(Tree t) {
  GradedAlphabet out;
  for (Tree n : postorder_distinct(t)) out.add(n.symbol());
  return out;
}

/// Throws AlphabetMismatch if some symbol of t clashes with the alphabet.
inline void check_consistent(const GradedAlphabet& alphabet, Tree t) {
  for (Tree n : postorder_distinct(t)) alphabet.check_consistent(n.symbol());
}

}  // namespace rwta

template <>
struct std::hash<rwta::Tree> {
  std::size_t operator()(rwta::Tree t) const noexcept { return rwta::TreeHash{}(t); }
};

#endif  // RWTA_TREE_HPP
