#ifndef RWTA_KERNEL_HPP
#define RWTA_KERNEL_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwta/constructions.hpp"
#include "rwta/subtree_automata.hpp"
#include "rwta/term_io.hpp"

namespace rwta {

struct CommonSubtree {
  Tree tree;
  std::uint64_t left;
  std::uint64_t right;
  std::uint64_t product;
};

struct KernelReport {
  std::uint64_t value = 0;
  std::vector<CommonSubtree> common_subtrees;  // sorted by tree text
  std::size_t left_size = 0;                   // |L1|
  std::size_t right_size = 0;                  // |L2|
  std::size_t common_count = 0;                // |SubTreeSet(L1) n SubTreeSet(L2)|
  struct Timing {
    double build_left = 0;  // seconds
    double build_right = 0;
    double product = 0;
    double total = 0;
  } timing;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Kernel from prebuilt A_{L1}, A_{L2}: the sum of root weights of their
/// accessible product, whose states are the pairs (r, r) of common subtrees.
inline KernelReport kernel_from_automata(const NaturalRwta& left, const NaturalRwta& right, bool with_table = true) {
  auto start = std::chrono::steady_clock::now();
  KernelReport report;
  ProductResult<Natural> prod = accessible_product(left, right);
  const NaturalRwta& p = prod.automaton;
  for (StateId q = 0; q < p.state_count(); ++q) report.value = Natural::add(report.value, p.nu(q));
  report.common_count = p.state_count();
  if (with_table) {
    std::vector<std::pair<std::string, CommonSubtree>> keyed;
    for (StateId q = 0; q < p.state_count(); ++q) {
      const auto [l, r] = prod.components[q];
      const Tree* t = left.label(l).as_term();
      if (!t) throw InvalidArgument("kernel needs subtree automata");
      keyed.push_back({format_tree(*t), CommonSubtree{*t, left.nu(l), right.nu(r), p.nu(q)}});
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [text, row] : keyed) report.common_subtrees.push_back(row);
  }
  report.timing.product = detail::seconds_since(start);
  return report;
}

/// KerSeries(L1, L2) through the product of the two subtree automata.
/// Throws AlphabetMismatch when the corpora use a symbol at two ranks and
/// OverflowError when a count leaves 64 bits.
inline KernelReport subtree_kernel(const TreeLanguage& left, const TreeLanguage& right, bool with_table = true) {
  auto start = std::chrono::steady_clock::now();
  merge(alphabet_of(left), alphabet_of(right));
  auto t0 = std::chrono::steady_clock::now();
  NaturalRwta a1 = subtree_automaton_language(left);
  const double build_left = detail::seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  NaturalRwta a2 = subtree_automaton_language(right);
  const double build_right = detail::seconds_since(t0);
  KernelReport report = kernel_from_automata(a1, a2, with_table);
  report.left_size = left.size();
  report.right_size = right.size();
  report.timing.build_left = build_left;
  report.timing.build_right = build_right;
  report.timing.total = detail::seconds_since(start);
  return report;
}

enum class TreeKernelKind {
  st,   // full subtrees: Delta = prod Delta_j
  sst,  // subset trees: Delta = prod (1 + Delta_j)
};

/// Node-pair dynamic programme over two trees, memoized on interned
/// subtree pairs. Delta(n1, n2) is 0 for different symbols, 1 for equal
/// leaves, and prod_j (sigma + Delta(child_j, child_j')) otherwise.
class DpKernel {
 public:
  explicit DpKernel(TreeKernelKind kind) : sigma_(kind == TreeKernelKind::sst ? 1 : 0) {}

  std::uint64_t delta(Tree u, Tree v) {
    if (!(u.symbol() == v.symbol())) return 0;
    if (u.arity() == 0) return 1;
    const std::pair<Tree, Tree> key{u, v};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::uint64_t r = 1;
    for (std::size_t j = 0; j < u.arity(); ++j) r = Natural::mul(r, Natural::add(sigma_, delta(u.child(j), v.child(j))));
    memo_.emplace(key, r);
    return r;
  }

  /// K(t1, t2) = sum over node pairs of Delta.
  std::uint64_t kernel(Tree t1, Tree t2) {
    std::vector<Tree> left, right;
    for_each_position(t1, [&](Tree n) { left.push_back(n); });
    for_each_position(t2, [&](Tree n) { right.push_back(n); });
    std::uint64_t total = 0;
    for (Tree n1 : left) {
      for (Tree n2 : right) total = Natural::add(total, delta(n1, n2));
    }
    return total;
  }

 private:
  std::uint64_t sigma_;
  struct PairHash {
    std::size_t operator()(const std::pair<Tree, Tree>& p) const noexcept {
      return detail::hash_combine(TreeHash{}(p.first), TreeHash{}(p.second));
    }
  };
  std::unordered_map<std::pair<Tree, Tree>, std::uint64_t, PairHash> memo_;
};

inline std::uint64_t dp_subtree_kernel(Tree t1, Tree t2, TreeKernelKind kind) { return DpKernel(kind).kernel(t1, t2); }

/// Sum of dp_subtree_kernel over L1 x L2.
inline std::uint64_t dp_kernel_languages(const TreeLanguage& left, const TreeLanguage& right, TreeKernelKind kind) {
  DpKernel dp(kind);
  std::uint64_t total = 0;
  for (Tree u : left) {
    for (Tree v : right) total = Natural::add(total, dp.kernel(u, v));
  }
  return total;
}

/// Overflow in one kernel matrix cell.
class MatrixOverflow : public OverflowError {
 public:
  MatrixOverflow(std::size_t row, std::size_t column, const std::string& what)
      : OverflowError("kernel(" + std::to_string(row) + "," + std::to_string(column) + "): " + what),
        row_(row),
        column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Computes the symmetric kernel matrix row by row, handing each finished
/// row to on_row in order. Each A_{L_i} is built once. Cells of a row are
/// split across up to `threads` workers.
inline void kernel_matrix_rows(const std::vector<TreeLanguage>& corpus,
                               const std::function<void(std::size_t, const std::vector<std::uint64_t>&)>& on_row,
                               unsigned threads = 1) {
  if (corpus.empty()) throw InvalidArgument("kernel matrix needs a nonempty corpus");
  GradedAlphabet shared;
  for (const auto& l : corpus) shared = merge(shared, alphabet_of(l));
  std::vector<NaturalRwta> automata;
  automata.reserve(corpus.size());
  for (const auto& l : corpus) automata.push_back(subtree_automaton_language(l));

  const std::size_t n = corpus.size();
  std::vector<std::vector<std::uint64_t>> upper(n);  // upper[i][j - i]
  threads = std::max(1u, threads);
  for (std::size_t i = 0; i < n; ++i) {
    upper[i].assign(n - i, 0);
    std::atomic<std::size_t> next{i};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t j; (j = next.fetch_add(1)) < n;) {
        try {
          upper[i][j - i] = kernel_from_automata(automata[i], automata[j], false).value;
        } catch (const OverflowError& e) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::make_exception_ptr(MatrixOverflow(i, j, e.what()));
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    if (threads == 1 || n - i == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<std::uint64_t> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = j >= i ? upper[i][j - i] : upper[j][i - j];
    on_row(i, row);
  }
}

inline std::vector<std::vector<std::uint64_t>> kernel_matrix(const std::vector<TreeLanguage>& corpus,
                                                             unsigned threads = 1) {
  std::vector<std::vector<std::uint64_t>> out;
  kernel_matrix_rows(corpus, [&](std::size_t, const std::vector<std::uint64_t>& row) { out.push_back(row); }, threads);
  return out;
}

/// Corpus of single trees.
inline std::vector<std::vector<std::uint64_t>> kernel_matrix(const std::vector<Tree>& trees, unsigned threads = 1) {
  std::vector<TreeLanguage> corpus;
  for (Tree t : trees) corpus.push_back(TreeLanguage{t});
  return kernel_matrix(corpus, threads);
}

}  // namespace rwta

#endif  // RWTA_KERNEL_HPP
