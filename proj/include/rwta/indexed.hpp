#ifndef RWTA_INDEXED_HPP
#define RWTA_INDEXED_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "rwta/error.hpp"
#include "rwta/tree.hpp"

namespace rwta {

/// A tree whose nodes carry position indices (t#). Nodes are stored in
/// prefix order, so every subtree occupies a contiguous range.
class IndexedTree {
 public:
  struct Node {
    Symbol symbol;
    std::size_t index;    // prefix-order position label
    std::size_t extent;   // number of nodes in the subtree rooted here
  };

  IndexedTree() = default;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const Node& root() const { return nodes_.front(); }

  /// The indexed subtree rooted at the given offset into nodes().
  IndexedTree subtree(std::size_t offset) const {
    IndexedTree out;
    out.nodes_.assign(nodes_.begin() + offset, nodes_.begin() + offset + nodes_[offset].extent);
    return out;
  }

  /// Offsets of the children of the node at offset.
  std::vector<std::size_t> child_offsets(std::size_t offset) const {
    std::vector<std::size_t> out;
    std::size_t next = offset + 1;
    for (std::size_t i = 0; i < nodes_[offset].symbol.rank(); ++i) {
      out.push_back(next);
      next += nodes_[next].extent;
    }
    return out;
  }

  friend bool operator==(const IndexedTree& a, const IndexedTree& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
      if (!(a.nodes_[i].symbol == b.nodes_[i].symbol) || a.nodes_[i].index != b.nodes_[i].index) return false;
    }
    return true;
  }

 private:
  friend IndexedTree index_tree(Tree t, std::size_t first_index);
  std::vector<Node> nodes_;
};

/// t#: symbols indexed by prefix position, starting at first_index (1 by default).
inline IndexedTree index_tree(Tree t, std::size_t first_index = 1) {
  IndexedTree out;
  std::vector<std::pair<Tree, std::size_t>> stack{{t, 0}};
  // Prefix walk, filling extents on the way back up.
  std::vector<std::size_t> offset_stack;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next == 0) {
      offset_stack.push_back(out.nodes_.size());
      out.nodes_.push_back(IndexedTree::Node{node.symbol(), first_index + out.nodes_.size(), 0});
    }
    if (next == node.arity()) {
      std::size_t offset = offset_stack.back();
      offset_stack.pop_back();
      out.nodes_[offset].extent = out.nodes_.size() - offset;
      stack.pop_back();
      continue;
    }
    Tree c = node.child(next++);
    stack.emplace_back(c, 0);
  }
  return out;
}

/// h: drop the indices.
inline Tree drop_index(const IndexedTree& it) {
  if (it.empty()) throw InvalidArgument("empty indexed tree");
  const auto& nodes = it.nodes();
  std::vector<Tree> built(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    std::vector<Tree> kids;
    for (std::size_t c : it.child_offsets(i)) kids.push_back(built[c]);
    built[i] = Tree::make(nodes[i].symbol, kids);
  }
  return built[0];
}

/// a ~h b iff h(a) = h(b).
inline bool h_equivalent(const IndexedTree& a, const IndexedTree& b) { return drop_index(a) == drop_index(b); }

/// Text form with '@' separating symbol and index, e.g. f@1(h@2(a@3),b@4).
inline std::string format_indexed(const IndexedTree& it) {
  std::string out;
  const auto& nodes = it.nodes();
  std::vector<std::size_t> remaining;  // children left to print per open node
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out += nodes[i].symbol.name();
    out += '@';
    out += std::to_string(nodes[i].index);
    if (nodes[i].symbol.rank() > 0) {
      out += '(';
      remaining.push_back(nodes[i].symbol.rank());
      continue;
    }
    // Leaf: close finished parents, or separate from the next sibling.
    while (!remaining.empty()) {
      if (--remaining.back() == 0) {
        out += ')';
        remaining.pop_back();
      } else {
        out += ',';
        break;
      }
    }
  }
  return out;
}

}  // namespace rwta

#endif  // RWTA_INDEXED_HPP
