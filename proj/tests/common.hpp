#ifndef RWTA_TESTS_COMMON_HPP
#define RWTA_TESTS_COMMON_HPP

#include <map>
#include <string>
#include <vector>

#include "rwta.hpp"

namespace rwta::testing {

inline Tree T(std::string_view text) { return parse_tree(text).tree; }

inline Tree t1() { return T("f(h(a),f(h(a),b))"); }
inline Tree t2() { return T("f(h(a),h(b))"); }
inline Tree t3() { return T("f(f(b,h(b)),f(h(a),h(b)))"); }

inline NaturalSeries series_of(const std::vector<std::pair<std::string, std::uint64_t>>& terms) {
  NaturalSeries out;
  for (const auto& [text, w] : terms) out.set(T(text), w);
  return out;
}

// a reaches 1 and 3, f(a,a) reaches 2 and 4, h-chains above it reach 5.
inline const char* chain_text() {
  return "[alphabet]\na/0\nf/2\nh/1\n"
         "[states]\n1\n2\n3\n4\n5\n"
         "[nu]\n1\t0\n2\t3\n3\t1\n4\t2\n5\t4\n"
         "[transitions]\n1\ta\t\n3\ta\t\n2\tf\t1,3\n4\tf\t3,3\n5\th\t2\n5\th\t4\n5\th\t5\n";
}

inline NaturalRwta chain_automaton() { return parse_automaton<Natural>(chain_text()); }

inline NaturalRwta primed_automaton() {
  return parse_automaton<Natural>(
      "[alphabet]\na/0\nf/2\nh/1\n"
      "[states]\n1'\n2'\n3'\n4'\n5'\n"
      "[nu]\n1'\t0\n2'\t3\n3'\t2\n4'\t0\n5'\t0\n"
      "[transitions]\n3'\ta\t\n5'\th\t2'\n1'\th\t3'\n5'\th\t4'\n2'\th\t5'\n2'\tf\t1',3'\n4'\tf\t3',3'\n");
}

/// Root weights keyed by the tree text of each state label.
inline std::map<std::string, std::uint64_t> nu_by_label(const NaturalRwta& a) {
  std::map<std::string, std::uint64_t> out;
  for (StateId q = 0; q < a.state_count(); ++q) out[a.label(q).str()] = a.nu(q);
  return out;
}

/// Sorted multiset of root weights.
inline std::vector<std::uint64_t> nu_multiset(const NaturalRwta& a) {
  std::vector<std::uint64_t> out = a.nu_table();
  std::sort(out.begin(), out.end());
  return out;
}

/// Every node of every tree, written out as text.
inline std::vector<std::string> positions(const TreeLanguage& l) {
  std::vector<std::string> out;
  for (Tree t : l) {
    std::vector<Tree> stack{t};
    while (!stack.empty()) {
      Tree n = stack.back();
      stack.pop_back();
      out.push_back(format_tree(n));
      for (std::size_t i = 0; i < n.arity(); ++i) stack.push_back(n.child(i));
    }
  }
  return out;
}

/// Number of pairs of positions, one in each language, whose subtrees print the same.
inline std::uint64_t brute_force_kernel(const TreeLanguage& l1, const TreeLanguage& l2) {
  std::uint64_t n = 0;
  const auto p1 = positions(l1), p2 = positions(l2);
  for (const auto& x : p1) {
    for (const auto& y : p2) n += x == y;
  }
  return n;
}

}  // namespace rwta::testing

#endif  // RWTA_TESTS_COMMON_HPP
