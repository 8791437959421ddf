#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lemfact/classgroup.hpp"
#include "lemfact/classical.hpp"
#include "lemfact/oracles.hpp"

using namespace lemfact;

namespace {

std::vector<i64> imaginary_fundamental(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 d = lo; d <= hi; ++d)
    if (d < 0 && is_fundamental_discriminant(d)) out.push_back(d);
  return out;
}

// f(x, y) = n for some |x|, |y| <= r
bool represents(const QuadForm& f, i64 n, i64 r) {
  for (i64 x = -r; x <= r; ++x)
    for (i64 y = -r; y <= r; ++y)
      if (f.a * x * x + f.b * x * y + f.c * y * y == n) return true;
  return false;
}

// f transformed by [[p, q], [r, s]] with ps - qr = 1
QuadForm transform(const QuadForm& f, i64 p, i64 q, i64 r, i64 s) {
  return {f.a * p * p + f.b * p * r + f.c * r * r, 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s,
          f.a * q * q + f.b * q * s + f.c * s * s};
}

// random SL2(Z) word in T = [[1,1],[0,1]] and S = [[0,-1],[1,0]]
QuadForm scramble(QuadForm f, std::mt19937_64& rng) {
  for (int i = 0; i < 6; ++i) {
    const int k = static_cast<int>(rng() % 5) - 2;
    f = transform(f, 1, k, 0, 1);
    if (rng() % 2) f = transform(f, 0, -1, 1, 0);
  }
  return f;
}

int log2_exact(std::size_t n) {
  int r = 0;
  while (n > 1) {
    n /= 2;
    ++r;
  }
  return r;
}

}  // namespace

TEST(ReduceForm, Examples) {
  EXPECT_EQ(reduce_form({1, 0, 1}), (QuadForm{1, 0, 1}));
  const QuadForm f{2, 2, 3};
  EXPECT_EQ(f.disc(), -20);
  EXPECT_EQ(reduce_form(f), f);
  const QuadForm g{3, 2, 1};
  EXPECT_EQ(g.disc(), -8);
  const auto rg = reduce_form(g);
  EXPECT_EQ(rg, (QuadForm{1, 0, 2}));
  EXPECT_EQ(reduce_form(rg), rg);
  EXPECT_TRUE(is_reduced(rg));
}

TEST(ReduceForm, Errors) {
  EXPECT_THROW((void)reduce_form({1, 3, 1}), InvalidInput);   // d = 5
  EXPECT_THROW((void)reduce_form({1, 2, 1}), InvalidInput);   // d = 0
  EXPECT_THROW((void)reduce_form({-1, 0, -1}), InvalidInput); // negative definite
}

TEST(ReduceForm, UniqueRepresentativeOfEachClass) {
  std::mt19937_64 rng(73);
  for (i64 d : imaginary_fundamental(-600, -3)) {
    const auto forms = reduced_forms(d);
    for (const auto& f : forms) {
      ASSERT_TRUE(is_reduced(f));
      for (int k = 0; k < 5; ++k) {
        const auto g = scramble(f, rng);
        ASSERT_EQ(g.disc(), d);
        const auto r = reduce_form(g);
        EXPECT_EQ(r, f) << to_string(g);
        EXPECT_EQ(reduce_form(r), r);
      }
    }
  }
}

TEST(Compose, IdentityInverseAndThreeTorsionAtMinus23) {
  const auto forms = reduced_forms(-23);
  ASSERT_EQ(forms.size(), 3u);
  const auto one = principal_form(-23);
  EXPECT_EQ(one, (QuadForm{1, 1, 6}));
  for (const auto& f : forms) {
    EXPECT_EQ(compose(one, f), f);
    EXPECT_EQ(compose(f, one), f);
    EXPECT_EQ(compose(f, opposite(f)), one);
    if (f == one) continue;
    EXPECT_NE(compose(f, f), one);
    EXPECT_EQ(compose(compose(f, f), f), one);
  }
  EXPECT_THROW((void)compose(QuadForm{1, 1, 6}, QuadForm{1, 0, 1}), InvalidInput);
}

TEST(Compose, GroupLawsOnSamples) {
  std::mt19937_64 rng(79);
  int triples = 0;
  for (i64 d : imaginary_fundamental(-5000, -3)) {
    const auto forms = reduced_forms(d);
    if (forms.size() < 3) continue;
    for (int k = 0; k < 3; ++k) {
      const auto& f = forms[rng() % forms.size()];
      const auto& g = forms[rng() % forms.size()];
      const auto& h = forms[rng() % forms.size()];
      EXPECT_EQ(compose(compose(f, g), h), compose(f, compose(g, h))) << d;
      EXPECT_EQ(compose(f, g), compose(g, f)) << d;
      const auto fg = compose(f, g);
      EXPECT_TRUE(is_reduced(fg));
      // the composite of coprime a1, a2 represents a1 a2
      if (std::gcd(f.a, g.a) == 1) {
        EXPECT_TRUE(represents(fg, f.a * g.a, 2 * f.a * g.a)) << d;
      }
      ++triples;
    }
  }
  EXPECT_GT(triples, 1000);
}

TEST(ClassGroup, Examples) {
  const auto m4 = class_group_structure(-4);
  EXPECT_EQ(m4.h(), 1);
  EXPECT_EQ(m4.forms, (std::vector<QuadForm>{{1, 0, 1}}));
  EXPECT_EQ(m4.structure.order(), 1);

  const auto m23 = class_group_structure(-23);
  EXPECT_EQ(m23.h(), 3);
  EXPECT_EQ(m23.structure, AbGroup{3});

  const auto m84 = class_group_structure(-84);
  EXPECT_EQ(m84.h(), 4);
  EXPECT_EQ(m84.structure, (AbGroup{2, 2}));
  EXPECT_EQ(two_rank(-84), 2);
}

TEST(ClassGroup, Errors) {
  EXPECT_THROW((void)class_group_structure(5), InvalidInput);
  EXPECT_THROW((void)class_group_structure(-12 * 4), InvalidInput);
  EXPECT_THROW((void)class_group_structure(0), InvalidInput);
  EXPECT_THROW((void)class_group_structure(-1000003, 1000), BoundExceeded);
  EXPECT_THROW((void)two_rank(-9), InvalidInput);
  EXPECT_THROW((void)four_rank(13), InvalidInput);
  EXPECT_THROW((void)redei_rank(9), InvalidInput);
  EXPECT_THROW((void)redei_rank(1), InvalidInput);
}

TEST(ClassGroup, StructureMatchesElementOrders) {
  // the number of elements of each order, counted by repeated composition,
  // matches the invariant factors
  for (i64 d : imaginary_fundamental(-4000, -3)) {
    const auto cg = class_group_structure(d);
    ASSERT_EQ(cg.h(), oracle::naive_class_number(d)) << d;
    ASSERT_EQ(cg.structure.order(), cg.h());
    if (d < -1500 && d % 7 != 0) continue;
    const auto one = principal_form(d);
    std::map<i64, i64> want, got;
    for (const auto& x : cg.structure.elements()) ++want[elem_order(cg.structure, x)];
    for (const auto& f : cg.forms) {
      i64 n = 1;
      for (QuadForm g = f; g != one; g = compose(g, f)) ++n;
      ++got[n];
    }
    EXPECT_EQ(got, want) << d;
  }
}

TEST(Ranks, Examples) {
  EXPECT_EQ(two_rank(-4), 0);
  EXPECT_EQ(four_rank(-4), 0);
  for (i64 q : {3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83, 103, 127, 131, 163}) {
    EXPECT_EQ(two_rank(-q), 0) << q;
    EXPECT_EQ(four_rank(-q), 0) << q;
    EXPECT_EQ(redei_rank(-q), 0) << q;
  }
  EXPECT_EQ(redei_rank(-84), four_rank(-84));
  EXPECT_EQ(four_rank(-84), 0);
  EXPECT_GE(redei_rank(205), 1);
  EXPECT_TRUE(c4_criterion(205).exists);
  for (i64 d : {5, 13, 17, 8, -8, -4, 41}) EXPECT_EQ(redei_rank(d), 0) << d;
}

TEST(Ranks, GenusTheoryAndRedeiOnSweep) {
  for (i64 d : imaginary_fundamental(-20000, -4)) {
    const auto cg = class_group_structure(d);
    // ranks read off the invariant factors
    int r2 = 0, r4 = 0;
    for (i64 m : cg.structure.moduli()) {
      r2 += m % 2 == 0;
      r4 += m % 4 == 0;
    }
    const auto t = static_cast<int>(prime_discriminants(d).size());
    ASSERT_EQ(two_rank(d), r2) << d;
    ASSERT_EQ(four_rank(d), r4) << d;
    ASSERT_EQ(r2, t - 1) << d;
    ASSERT_EQ(redei_rank(d), r4) << d;
  }
}

TEST(RedeiMatrix, RowsSumToZero) {
  for (i64 d = -5000; d <= 5000; ++d) {
    if (d == 1 || d == 0 || !is_fundamental_discriminant(d)) continue;
    const auto r = redei_matrix(d);
    const auto pd = prime_discriminants(d);
    ASSERT_EQ(r.size(), pd.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      int s = 0;
      for (int x : r[i]) s ^= x;
      EXPECT_EQ(s, 0) << d;
    }
    EXPECT_GE(redei_rank(d), 0);
    EXPECT_LE(redei_rank(d), static_cast<int>(pd.size()) - 1);
  }
}

TEST(RankF2, SmallMatrices) {
  EXPECT_EQ(rank_f2({}), 0);
  EXPECT_EQ(rank_f2({{0, 0}, {0, 0}}), 0);
  EXPECT_EQ(rank_f2({{1, 1}, {1, 1}}), 1);
  EXPECT_EQ(rank_f2({{1, 0, 1}, {0, 1, 1}, {1, 1, 0}}), 2);
  EXPECT_EQ(rank_f2({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), 3);
  // against brute force: 2^rank = number of distinct row combinations
  std::mt19937_64 rng(83);
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = 1 + rng() % 5, m = 1 + rng() % 5;
    std::vector<std::vector<int>> a(n, std::vector<int>(m));
    for (auto& row : a)
      for (int& x : row) x = static_cast<int>(rng() % 2);
    std::set<std::vector<int>> span;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> v(m, 0);
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1)
          for (std::size_t j = 0; j < m; ++j) v[j] ^= a[i][j];
      span.insert(v);
    }
    EXPECT_EQ(rank_f2(a), log2_exact(span.size()));
  }
}

TEST(NaiveClassNumber, MatchesReducedFormCount) {
  for (i64 d : imaginary_fundamental(-999, -4)) EXPECT_EQ(oracle::naive_class_number(d), class_group_structure(d).h()) << d;
  EXPECT_EQ(oracle::naive_class_number(-3), 1);
  EXPECT_EQ(class_group_structure(-3).h(), 1);
}
