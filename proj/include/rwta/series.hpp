#ifndef RWTA_SERIES_HPP
#define RWTA_SERIES_HPP

#include <algorithm>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwta/error.hpp"
#include "rwta/language.hpp"
#include "rwta/term_io.hpp"
#include "rwta/tree.hpp"
#include "rwta/weight.hpp"

namespace rwta {

/// A formal tree series with finite support. Zero coefficients are never
/// stored, so two series are equal iff their stored maps are equal.
template <WeightDomain D>
class FormalTreeSeries {
 public:
  using domain_type = D;
  using weight_type = typename D::value_type;

  FormalTreeSeries() = default;
  explicit FormalTreeSeries(GradedAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const GradedAlphabet& alphabet() const noexcept { return alphabet_; }

  /// P(t); zero outside the support. Throws AlphabetMismatch when t uses a
  /// symbol name at a rank other than the alphabet's.
  weight_type at(Tree t) const {
    check_consistent(alphabet_, t);
    auto it = coefficients_.find(t);
    return it == coefficients_.end() ? D::zero() : it->second;
  }

  /// Sets P(t) = w (removing t from the support when w is zero).
  void set(Tree t, weight_type w) {
    alphabet_ = merge(alphabet_, alphabet_of(t));
    if (is_zero<D>(w)) {
      coefficients_.erase(t);
    } else {
      coefficients_[t] = w;
    }
  }

  /// P(t) += w.
  void accumulate(Tree t, weight_type w) {
    auto it = coefficients_.find(t);
    set(t, it == coefficients_.end() ? w : D::add(it->second, w));
  }

  /// P(t) += w for a tree already known to be over alphabet(); skips the
  /// alphabet bookkeeping of accumulate().
  void accumulate_within_alphabet(Tree t, weight_type w) {
    auto [it, inserted] = coefficients_.try_emplace(t, w);
    if (!inserted) it->second = D::add(it->second, w);
    if (is_zero<D>(it->second)) coefficients_.erase(it);
  }

  std::size_t support_size() const noexcept { return coefficients_.size(); }
  bool empty() const noexcept { return coefficients_.empty(); }

  TreeLanguage support() const {
    TreeLanguage out;
    for (const auto& [t, w] : sorted()) out.insert(t);
    return out;
  }

  /// (tree, weight) pairs sorted by tree text.
  std::vector<std::pair<Tree, weight_type>> sorted() const {
    std::vector<std::pair<std::string, std::pair<Tree, weight_type>>> keyed;
    keyed.reserve(coefficients_.size());
    for (const auto& [t, w] : coefficients_) keyed.push_back({format_tree(t), {t, w}});
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Tree, weight_type>> out;
    out.reserve(keyed.size());
    for (auto& entry : keyed) out.push_back(entry.second);
    return out;
  }

  const std::unordered_map<Tree, weight_type, TreeHash>& coefficients() const noexcept { return coefficients_; }

  /// Equality on coefficients; alphabets are not compared.
  friend bool operator==(const FormalTreeSeries& a, const FormalTreeSeries& b) {
    return a.coefficients_ == b.coefficients_;
  }

 private:
  GradedAlphabet alphabet_;
  std::unordered_map<Tree, weight_type, TreeHash> coefficients_;
};

using NaturalSeries = FormalTreeSeries<Natural>;

/// Dump format: one line per support element, "<weight>\t<tree-text>",
/// sorted by tree text.
template <WeightDomain D>
void write_series(std::ostream& out, const FormalTreeSeries<D>& series) {
  for (const auto& [t, w] : series.sorted()) out << D::format(w) << '\t' << format_tree(t) << '\n';
}

template <WeightDomain D>
typename D::value_type series_eval(const FormalTreeSeries<D>& series, Tree t) {
  return series.at(t);
}

/// SubTreeSeries_t: coefficient of r is the number of positions of t where r occurs.
inline NaturalSeries subtree_series(Tree t) {
  NaturalSeries out(alphabet_of(t));
  for_each_position(t, [&](Tree node) { out.accumulate_within_alphabet(node, 1); });
  return out;
}

/// SubTreeSeries_L = sum over t in L of SubTreeSeries_t.
inline NaturalSeries subtree_series(const TreeLanguage& language) {
  NaturalSeries out(alphabet_of(language));
  for (Tree t : language) for_each_position(t, [&](Tree node) { out.accumulate_within_alphabet(node, 1); });
  return out;
}

template <WeightDomain D>
FormalTreeSeries<D> series_add(const FormalTreeSeries<D>& a, const FormalTreeSeries<D>& b) {
  FormalTreeSeries<D> out(merge(a.alphabet(), b.alphabet()));
  for (const auto& [t, w] : a.coefficients()) out.accumulate_within_alphabet(t, w);
  for (const auto& [t, w] : b.coefficients()) out.accumulate_within_alphabet(t, w);
  return out;
}

/// Pointwise product (P1 x P2)(t) = P1(t) x P2(t).
template <SemiringDomain D>
FormalTreeSeries<D> hadamard_product(const FormalTreeSeries<D>& a, const FormalTreeSeries<D>& b) {
  FormalTreeSeries<D> out(merge(a.alphabet(), b.alphabet()));
  const auto& small = a.support_size() <= b.support_size() ? a : b;
  const auto& large = &small == &a ? b : a;
  for (const auto& [t, w] : small.coefficients()) {
    auto it = large.coefficients().find(t);
    if (it == large.coefficients().end()) continue;
    out.accumulate_within_alphabet(t, &small == &a ? D::mul(w, it->second) : D::mul(it->second, w));
  }
  return out;
}

/// Sum of all coefficients of a finite-support series.
template <WeightDomain D>
typename D::value_type series_total(const FormalTreeSeries<D>& series) {
  typename D::value_type total = D::zero();
  for (const auto& [t, w] : series.coefficients()) total = D::add(total, w);
  return total;
}

/// KerSeries(L1, L2) computed straight from the definition: the sum of the
/// coefficients of SubTreeSeries_L1 x SubTreeSeries_L2.
inline Natural::value_type ker_series_direct(const TreeLanguage& left, const TreeLanguage& right) {
  return series_total(hadamard_product(subtree_series(left), subtree_series(right)));
}

/// c-product of series evaluated on a finite domain:
///   (P1 ._c P2)(t) = sum over (t1, t2) with t = t1_{c <- t2} of P1(t1) x P2(t2),
/// the sum ranging over support(P1) x support(P2). When c does not occur in
/// t1, every t2 of the support pairs with t1 = t.
template <SemiringDomain D>
FormalTreeSeries<D> a_product_bruteforce(const FormalTreeSeries<D>& left, Symbol c,
                                         const FormalTreeSeries<D>& right, const TreeLanguage& domain) {
  detail::require_constant(c);
  FormalTreeSeries<D> out(merge(left.alphabet(), right.alphabet()));
  std::unordered_map<Tree, typename D::value_type, TreeHash> wanted;
  for (Tree t : domain) wanted.emplace(t, D::zero());
  for (const auto& [t1, w1] : left.sorted()) {
    for (const auto& [t2, w2] : right.sorted()) {
      TreeLanguage image = substitute(t1, c, TreeLanguage{t2});
      Tree t = *image.begin();
      auto it = wanted.find(t);
      if (it != wanted.end()) it->second = D::add(it->second, D::mul(w1, w2));
    }
  }
  for (Tree t : domain) out.set(t, wanted.at(t));
  return out;
}

/// Distinct values of P over the domain; zero is included when some domain
/// tree lies outside the support.
template <WeightDomain D>
std::set<typename D::value_type> series_image(const FormalTreeSeries<D>& series, const TreeLanguage& domain) {
  std::set<typename D::value_type> out;
  for (Tree t : domain) out.insert(series.at(t));
  return out;
}

}  // namespace rwta

#endif  // RWTA_SERIES_HPP
