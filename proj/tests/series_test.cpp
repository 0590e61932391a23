#include <gtest/gtest.h>

#include <limits>
#include <map>
#include <sstream>

#include "common.hpp"

using namespace rwta;
using namespace rwta::testing;

namespace {

NaturalSeries random_series(Rng& rng, std::size_t terms) {
  NaturalSeries out;
  std::uniform_int_distribution<std::uint64_t> w(0, 6);
  for (std::size_t i = 0; i < terms; ++i) out.set(random_tree(rng, small_alphabet(), 1 + i % 7), w(rng));
  return out;
}

template <class D>
void check_laws(const std::vector<typename D::value_type>& values) {
  for (auto a : values) {
    EXPECT_EQ(D::add(a, D::zero()), a);
    EXPECT_EQ(D::mul(a, D::one()), a);
    EXPECT_EQ(D::mul(D::one(), a), a);
    EXPECT_EQ(D::mul(a, D::zero()), D::zero());
    EXPECT_EQ(D::mul(D::zero(), a), D::zero());
    for (auto b : values) {
      EXPECT_EQ(D::add(a, b), D::add(b, a));
      for (auto c : values) {
        EXPECT_EQ(D::add(D::add(a, b), c), D::add(a, D::add(b, c)));
        EXPECT_EQ(D::mul(D::mul(a, b), c), D::mul(a, D::mul(b, c)));
        EXPECT_EQ(D::mul(a, D::add(b, c)), D::add(D::mul(a, b), D::mul(a, c)));
        EXPECT_EQ(D::mul(D::add(a, b), c), D::add(D::mul(a, c), D::mul(b, c)));
      }
    }
  }
}

}  // namespace

TEST(Weights, NaturalLaws) { check_laws<Natural>({0, 1, 2, 3, 7, 1000}); }
TEST(Weights, BooleanLaws) { check_laws<Boolean>({false, true}); }
TEST(Weights, TropicalLaws) { check_laws<Tropical>({0, 1, 4, 9, Tropical::infinity}); }

TEST(Weights, NaturalOverflowThrows) {
  const std::uint64_t big = std::numeric_limits<std::uint64_t>::max();
  EXPECT_THROW(Natural::add(big, 1), OverflowError);
  EXPECT_THROW(Natural::mul(big / 2 + 1, 2), OverflowError);
  EXPECT_EQ(Natural::mul(big, 1), big);
  EXPECT_THROW(Natural::parse("18446744073709551616"), OverflowError);
  EXPECT_EQ(Natural::parse("18446744073709551615"), big);
}

TEST(Series, EvalExamples) {
  NaturalSeries p1 = subtree_series(t1());
  EXPECT_EQ(series_eval(p1, T("h(a)")), 2u);
  EXPECT_EQ(series_eval(p1, t3()), 0u);
  EXPECT_EQ(series_eval(subtree_series(t2()), T("b")), 1u);
}

TEST(Series, EvalRejectsRankConflict) {
  NaturalSeries p1 = subtree_series(t1());
  EXPECT_THROW(series_eval(p1, T("h(a,a)")), AlphabetMismatch);
  EXPECT_EQ(series_eval(p1, T("g(a)")), 0u);  // new names are fine, just outside the support
}

TEST(Series, SubtreeSeriesOfExampleTrees) {
  EXPECT_EQ(subtree_series(t1()), series_of({{"f(h(a),f(h(a),b))", 1}, {"f(h(a),b)", 1}, {"h(a)", 2}, {"a", 2}, {"b", 1}}));
  EXPECT_EQ(subtree_series(t2()), series_of({{"f(h(a),h(b))", 1}, {"h(b)", 1}, {"h(a)", 1}, {"a", 1}, {"b", 1}}));
  EXPECT_EQ(subtree_series(t3()), series_of({{"f(f(b,h(b)),f(h(a),h(b)))", 1},
                                              {"f(b,h(b))", 1},
                                              {"f(h(a),h(b))", 1},
                                              {"h(b)", 2},
                                              {"h(a)", 1},
                                              {"b", 3},
                                              {"a", 1}}));
  EXPECT_EQ(subtree_series(TreeLanguage{t1(), t2()}), series_of({{"f(h(a),f(h(a),b))", 1},
                                                                  {"f(h(a),h(b))", 1},
                                                                  {"f(h(a),b)", 1},
                                                                  {"h(a)", 3},
                                                                  {"h(b)", 1},
                                                                  {"a", 3},
                                                                  {"b", 2}}));
}

TEST(Series, SubtreeSeriesMatchesPositionCount) {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    TreeLanguage l = random_language(rng, small_alphabet(i % 2 == 1), 6, 14);
    std::map<std::string, std::uint64_t> count;
    for (const auto& s : positions(l)) ++count[s];
    NaturalSeries p = subtree_series(l);
    EXPECT_EQ(p.coefficients().size(), count.size());
    for (const auto& [text, n] : count) EXPECT_EQ(p.at(T(text)), n) << text;
  }
}

TEST(Series, AddExamples) {
  EXPECT_EQ(series_add(subtree_series(t1()), subtree_series(t2())), subtree_series(TreeLanguage{t1(), t2()}));
  NaturalSeries p = subtree_series(t3());
  EXPECT_EQ(series_add(p, NaturalSeries{}), p);
  EXPECT_EQ(series_add(series_of({{"a", 2}}), series_of({{"a", 3}})), series_of({{"a", 5}}));
}

TEST(Series, AddRejectsRankConflict) {
  EXPECT_THROW(series_add(series_of({{"h(a)", 1}}), series_of({{"h(a,a)", 1}})), AlphabetMismatch);
}

TEST(Series, HadamardExamples) {
  EXPECT_EQ(hadamard_product(subtree_series(TreeLanguage{t1(), t2()}), subtree_series(t3())),
            series_of({{"f(h(a),h(b))", 1}, {"h(b)", 2}, {"h(a)", 3}, {"b", 6}, {"a", 3}}));
  EXPECT_EQ(hadamard_product(subtree_series(t1()), NaturalSeries{}), NaturalSeries{});
  EXPECT_EQ(hadamard_product(series_of({{"a", 2}}), series_of({{"a", 3}})), series_of({{"a", 6}}));
}

TEST(Series, ZeroCoefficientsArePruned) {
  NaturalSeries p = series_of({{"a", 2}, {"b", 0}});
  EXPECT_EQ(p.coefficients().size(), 1u);
  p.set(T("a"), 0);
  EXPECT_TRUE(p.coefficients().empty());
  EXPECT_EQ(p, NaturalSeries{});
}

TEST(Series, AlgebraOnRandomTriples) {
  Rng rng(29);
  for (int i = 0; i < 300; ++i) {
    NaturalSeries a = random_series(rng, 6), b = random_series(rng, 6), c = random_series(rng, 6);
    EXPECT_EQ(series_add(a, b), series_add(b, a));
    EXPECT_EQ(series_add(series_add(a, b), c), series_add(a, series_add(b, c)));
    EXPECT_EQ(hadamard_product(a, b), hadamard_product(b, a));
    EXPECT_EQ(hadamard_product(a, series_add(b, c)), series_add(hadamard_product(a, b), hadamard_product(a, c)));
  }
}

TEST(Series, KernelDirectExamples) {
  EXPECT_EQ(ker_series_direct(TreeLanguage{t1(), t2()}, TreeLanguage{t3()}), 15u);
  EXPECT_EQ(ker_series_direct(TreeLanguage{t1()}, TreeLanguage{t3()}), 7u);
  EXPECT_EQ(ker_series_direct(TreeLanguage{T("a")}, TreeLanguage{T("b")}), 0u);
  EXPECT_EQ(ker_series_direct(TreeLanguage{}, TreeLanguage{t3()}), 0u);
}

TEST(Series, KernelDirectSymmetricAndMatchesPositionPairs) {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    GradedAlphabet sigma = small_alphabet(i % 3 == 2);
    TreeLanguage l1 = random_language(rng, sigma, 8, 12), l2 = random_language(rng, sigma, 8, 12);
    const std::uint64_t k = ker_series_direct(l1, l2);
    EXPECT_EQ(k, ker_series_direct(l2, l1));
    EXPECT_EQ(k, brute_force_kernel(l1, l2));
  }
}

TEST(Series, AProductExamples) {
  Symbol c = Symbol::get("c", 0);
  NaturalSeries p2 = series_of({{"a", 2}, {"f(a,b)", 3}, {"h(b)", 5}});
  NaturalSeries identity = series_of({{"c", 1}});
  NaturalSeries left_identity = a_product_bruteforce(identity, c, p2, p2.support());
  for (const auto& [t, w] : p2.coefficients()) EXPECT_EQ(left_identity.at(t), w) << format_tree(t);

  NaturalSeries fcb = series_of({{"f(c,b)", 1}});
  NaturalSeries two_a = series_of({{"a", 2}});
  EXPECT_EQ(a_product_bruteforce(fcb, c, two_a, TreeLanguage{T("f(a,b)")}).at(T("f(a,b)")), 2u);

  // No c in t1 = b: the single pair (b, a) of support(P1) x support(P2) counts once.
  NaturalSeries one_b = series_of({{"b", 1}});
  EXPECT_EQ(a_product_bruteforce(one_b, c, two_a, TreeLanguage{T("b")}).at(T("b")), 2u);
  // ... and with two members in support(P2), both pairs count.
  NaturalSeries two = series_of({{"a", 2}, {"h(a)", 3}});
  EXPECT_EQ(a_product_bruteforce(one_b, c, two, TreeLanguage{T("b")}).at(T("b")), 5u);
}

TEST(Series, AProductRequiresConstant) {
  EXPECT_THROW(a_product_bruteforce(series_of({{"a", 1}}), Symbol::get("h", 1), series_of({{"a", 1}}),
                                    TreeLanguage{T("a")}),
               InvalidArgument);
}

TEST(Series, AProductMultipleOccurrencesUseOneReplacement) {
  // t1_{c <- {t2}} replaces every c by the same t2.
  Symbol c = Symbol::get("c", 0);
  NaturalSeries p1 = series_of({{"f(c,c)", 1}});
  NaturalSeries p2 = series_of({{"a", 2}, {"b", 3}});
  NaturalSeries out = a_product_bruteforce(p1, c, p2, TreeLanguage{T("f(a,a)"), T("f(a,b)"), T("f(b,b)")});
  EXPECT_EQ(out.at(T("f(a,a)")), 2u);
  EXPECT_EQ(out.at(T("f(a,b)")), 0u);
  EXPECT_EQ(out.at(T("f(b,b)")), 3u);
}

TEST(Series, ImageExamples) {
  EXPECT_EQ(series_image(subtree_series(t1()), subtree_set(t1())), (std::set<std::uint64_t>{1, 2}));
  EXPECT_EQ(series_image(NaturalSeries{}, subtree_set(t3())), (std::set<std::uint64_t>{0}));
  EXPECT_EQ(series_image(subtree_series(t1()), subtree_set(t3())), (std::set<std::uint64_t>{0, 1, 2}));
}

TEST(Series, ImageOfRealizedSeriesIsBounded) {
  Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    NaturalRwta a = random_automaton(rng, small_alphabet());
    TreeLanguage domain = enumerate_trees(a.alphabet(), 2);
    NaturalSeries p = realized_series_bounded(a, 2);
    EXPECT_LE(series_image(p, domain).size(), std::size_t{1} << a.state_count());
  }
}

TEST(Series, DumpFormat) {
  std::ostringstream out;
  write_series(out, hadamard_product(subtree_series(TreeLanguage{t1(), t2()}), subtree_series(t3())));
  EXPECT_EQ(out.str(), "3\ta\n6\tb\n1\tf(h(a),h(b))\n3\th(a)\n2\th(b)\n");
}
