#include <gtest/gtest.h>

#include <random>

#include "lemfact/arith.hpp"

using namespace lemfact;

namespace {

i64 naive_pow(i64 b, i64 e, i64 m) {
  i64 r = 1 % m;
  b = mod(b, m);
  for (i64 i = 0; i < e; ++i) r = r * b % m;
  return r;
}

i64 naive_order(i64 g, i64 m) {
  if (std::gcd(g, m) != 1) return 0;
  i64 k = 1;
  for (i64 cur = mod(g, m); cur != 1 % m; cur = cur * g % m) ++k;
  return k;
}

// Legendre symbol by Euler's criterion
int euler(i64 a, i64 p) {
  const i64 v = naive_pow(a, (p - 1) / 2, p);
  return v == 0 ? 0 : (v == 1 ? 1 : -1);
}

// Kronecker symbol from its definition: multiplicative in n, Euler at odd
// primes, the mod-8 rule at 2, sign at -1.
int kronecker_by_definition(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int k = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  for (i64 p = 2; n > 1; ++p) {
    while (n % p == 0) {
      n /= p;
      if (p == 2) {
        if (a % 2 == 0) return 0;
        const i64 r = mod(a, 8);
        if (r == 3 || r == 5) k = -k;
      } else {
        k *= euler(a, p);
      }
    }
  }
  return k;
}

bool naive_is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST(Factorize, Examples) {
  EXPECT_TRUE(factorize(1).empty());
  EXPECT_EQ(factorize(205), (std::vector<PrimePower>{{5, 1}, {41, 1}}));
  EXPECT_EQ(factorize(24), (std::vector<PrimePower>{{2, 3}, {3, 1}}));
}

TEST(Factorize, BoundAndDomain) {
  EXPECT_THROW(factorize(1000, 999), BoundExceeded);
  EXPECT_THROW(factorize(0), InvalidInput);
  EXPECT_THROW(factorize(-5), InvalidInput);
}

TEST(Factorize, ReassemblesAndLargePrimes) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const i64 n = 1 + static_cast<i64>(rng() % 1'000'000'000'000ULL);
    i64 prod = 1, last = 1;
    for (const auto& pp : factorize(n)) {
      EXPECT_GT(pp.q, last);
      EXPECT_TRUE(is_prime(pp.q));
      last = pp.q;
      for (i64 k = 0; k < pp.e; ++k) prod *= pp.q;
    }
    EXPECT_EQ(prod, n);
  }
  EXPECT_EQ(factorize(999999999989LL), (std::vector<PrimePower>{{999999999989LL, 1}}));
}

TEST(IsPrime, MatchesTrialDivision) {
  for (i64 n = -3; n < 20000; ++n) EXPECT_EQ(is_prime(n), naive_is_prime(n)) << n;
  EXPECT_TRUE(is_prime(2305843009213693951LL));    // 2^61 - 1
  EXPECT_FALSE(is_prime(3215031751LL));            // strong pseudoprime to 2,3,5,7
  EXPECT_FALSE(is_prime(3825123056546413051LL));   // strong pseudoprime to the first 9 prime bases
}

TEST(FundamentalDiscriminant, Examples) {
  EXPECT_TRUE(is_fundamental_discriminant(5));
  EXPECT_TRUE(is_fundamental_discriminant(-4));
  EXPECT_TRUE(is_fundamental_discriminant(12));
  EXPECT_FALSE(is_fundamental_discriminant(9));
  EXPECT_TRUE(is_fundamental_discriminant(1));
  EXPECT_FALSE(is_fundamental_discriminant(0));
  EXPECT_FALSE(is_fundamental_discriminant(-16));
  EXPECT_TRUE(is_fundamental_discriminant(-8));
  EXPECT_TRUE(is_fundamental_discriminant(205));
}

TEST(FundamentalDiscriminant, MatchesDefinition) {
  auto squarefree = [](i64 n) {
    n = std::llabs(n);
    for (i64 p = 2; p * p <= n; ++p)
      if (n % (p * p) == 0) return false;
    return true;
  };
  for (i64 d = -3000; d <= 3000; ++d) {
    if (d == 0) continue;
    bool expect = d == 1 || (mod(d, 4) == 1 && squarefree(d)) ||
                  (d % 4 == 0 && (mod(d / 4, 4) == 2 || mod(d / 4, 4) == 3) && squarefree(d / 4));
    EXPECT_EQ(is_fundamental_discriminant(d), expect) << d;
  }
}

TEST(PrimeStar, Examples) {
  EXPECT_EQ(prime_star(5), 5);
  EXPECT_EQ(prime_star(7), -7);
  EXPECT_EQ(prime_star(41), 41);
  EXPECT_THROW(prime_star(2), InvalidInput);
  EXPECT_THROW(prime_star(9), InvalidInput);
  for (i64 p = 3; p < 2000; p += 2) {
    if (naive_is_prime(p)) {
      EXPECT_EQ(mod(prime_star(p), 4), 1);
    }
  }
}

TEST(PrimeDiscriminants, ProductAndShape) {
  for (i64 d = -2000; d <= 2000; ++d) {
    if (d == 1 || d == 0 || !is_fundamental_discriminant(d)) continue;
    i64 prod = 1;
    for (const auto& pd : prime_discriminants(d)) {
      prod *= pd.disc;
      EXPECT_TRUE(pd.disc == -4 || pd.disc == 8 || pd.disc == -8 || pd.disc == prime_star(pd.prime));
    }
    EXPECT_EQ(prod, d) << d;
  }
}

TEST(Kronecker, Examples) {
  EXPECT_EQ(euler(5, 41), 1);
  EXPECT_EQ(kronecker(5, 41), 1);
  EXPECT_EQ(kronecker(41, 5), 1);
  for (i64 a = -50; a <= 50; ++a) EXPECT_EQ(kronecker(a, 1), 1);
  EXPECT_EQ(kronecker(4, 3), 1);
}

TEST(Kronecker, MatchesDefinition) {
  for (i64 a = -60; a <= 60; ++a)
    for (i64 n = -60; n <= 60; ++n) {
      if (a == 0 && n == 0) continue;
      ASSERT_EQ(kronecker(a, n), kronecker_by_definition(a, n)) << a << " " << n;
    }
}

TEST(Kronecker, EulerCriterionRandomized) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    i64 p;
    do p = 3 + static_cast<i64>(rng() % 100000); while (!naive_is_prime(p));
    const i64 a = static_cast<i64>(rng() % 2000001) - 1000000;
    const i64 e = powmod(a, (p - 1) / 2, p);
    const int expect = e == 0 ? 0 : (e == 1 ? 1 : -1);
    ASSERT_EQ(kronecker(a, p), expect) << a << " " << p;
  }
}

TEST(PrimitiveRoot, Examples) {
  EXPECT_EQ(naive_order(2, 7), 3);
  EXPECT_EQ(naive_order(3, 7), 6);
  EXPECT_EQ(primitive_root(7, 1), 3);
  EXPECT_EQ(primitive_root(41, 1), 6);
  EXPECT_EQ(naive_order(2, 9), 6);
  EXPECT_EQ(primitive_root(3, 2), 2);
  EXPECT_THROW(primitive_root(2, 1), InvalidInput);
  EXPECT_THROW(primitive_root(15, 1), InvalidInput);
}

TEST(PrimitiveRoot, SmallestGeneratorModSquare) {
  for (i64 q = 3; q < 400; q += 2) {
    if (!naive_is_prime(q)) continue;
    const i64 q2 = q * q;
    i64 g = 1;
    while (naive_order(g, q2) != q * (q - 1)) ++g;
    for (i64 e = 1; e <= 3; ++e) EXPECT_EQ(primitive_root(q, e), g) << q;
    EXPECT_EQ(naive_order(g, q2 * q), q2 * (q - 1));
  }
}

TEST(DiscreteLog, Examples) {
  EXPECT_EQ(discrete_log(3, 1, {7, 1}), 0);
  EXPECT_EQ(discrete_log(3, 3, {7, 1}), 1);
  EXPECT_EQ(naive_pow(3, 5, 7), 5);
  EXPECT_EQ(discrete_log(3, 5, {7, 1}), 5);
  EXPECT_THROW(discrete_log(3, 14, {7, 1}), InvalidInput);
}

TEST(DiscreteLog, MatchesPowering) {
  for (const PrimePower m : {PrimePower{7, 2}, PrimePower{101, 1}, PrimePower{5, 3}, PrimePower{13, 2}}) {
    const i64 g = primitive_root(m.q, m.e);
    const i64 mv = m.value();
    i64 cur = 1;
    for (i64 k = 0; k < euler_phi(m); ++k) {
      ASSERT_EQ(discrete_log(g, cur, m), k);
      cur = cur * g % mv;
    }
  }
}

TEST(PowerResidueChar, Examples) {
  for (i64 q : {3, 5, 7, 11, 13, 41, 101})
    for (i64 p = 1; p < 60; ++p) {
      if (p % q == 0) continue;
      EXPECT_EQ(power_residue_char(p, {q, 1}, 2) == 0, kronecker(p, q) == 1) << p << " mod " << q;
    }
  EXPECT_EQ(power_residue_char(1 + 49, {7, 2}, 3), 0);
  EXPECT_EQ(power_residue_char(1 + 7 * 49, {7, 3}, 6), 0);
  // dlog base 3 of 2 mod 7 is 2
  EXPECT_EQ(discrete_log(3, 2, {7, 1}), 2);
  EXPECT_EQ(power_residue_char(2, {7, 1}, 3), 2);
  EXPECT_THROW(power_residue_char(14, {7, 1}, 3), InvalidInput);
  EXPECT_THROW(power_residue_char(3, {2, 1}, 2), InvalidInput);
}

TEST(PowerResidueChar, FormulaAgainstDirectDlog) {
  for (const PrimePower m : {PrimePower{7, 1}, PrimePower{7, 2}, PrimePower{5, 2}, PrimePower{13, 1}, PrimePower{3, 3}})
    for (i64 n : {2, 3, 4, 5, 6, 9, 12}) {
      const i64 mv = m.value(), phi = euler_phi(m), d = std::gcd(n, phi);
      const i64 g = primitive_root(m.q, m.e);
      for (i64 p = 1; p < 3 * mv; ++p) {
        if (p % m.q == 0) continue;
        i64 k = 0;
        for (i64 cur = 1; cur != p % mv; cur = cur * g % mv) ++k;
        ASSERT_EQ(power_residue_char(p, m, n), mod((n / d) * (k % d), n)) << p << " " << m.value() << " " << n;
      }
    }
}

TEST(PowerResidueChar, Homomorphism) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    i64 q;
    do q = 3 + static_cast<i64>(rng() % 3000); while (!naive_is_prime(q));
    const i64 e = 1 + static_cast<i64>(rng() % 2);
    const PrimePower qp{q, e};
    const i64 n = 2 + static_cast<i64>(rng() % 10);
    const i64 mv = qp.value();
    i64 x, y;
    do x = 1 + static_cast<i64>(rng() % static_cast<std::uint64_t>(mv - 1)); while (x % q == 0);
    do y = 1 + static_cast<i64>(rng() % static_cast<std::uint64_t>(mv - 1)); while (y % q == 0);
    ASSERT_EQ(power_residue_char(x * y % mv, qp, n), mod(power_residue_char(x, qp, n) + power_residue_char(y, qp, n), n));
  }
}

TEST(PowerResidueChar, VanishesOnNthPowers) {
  for (i64 q = 3; q < 100; q += 2) {
    if (!naive_is_prime(q)) continue;
    for (i64 n : {2, 3, 4, 5, 6}) {
      for (i64 x = 1; x < q; ++x) EXPECT_EQ(power_residue_char(naive_pow(x, n, q), {q, 1}, n), 0);
    }
  }
  for (i64 x = 1; x < 49; ++x) {
    if (x % 7) {
      EXPECT_EQ(power_residue_char(naive_pow(x, 7, 49), {7, 2}, 7), 0);
    }
  }
}

TEST(CharComposite, Examples) {
  EXPECT_EQ(char_composite(123, 1, 3), 0);
  EXPECT_EQ(char_composite(123, -1, 3), 0);
  EXPECT_EQ(char_composite(2, 7, 3), power_residue_char(2, {7, 1}, 3));
  EXPECT_EQ(char_composite(2, -7, 3), power_residue_char(2, {7, 1}, 3));
  EXPECT_THROW(char_composite(3, 21, 2), InvalidInput);
  EXPECT_THROW(char_composite(3, 10, 2), InvalidInput);
}

TEST(CharComposite, LegendreEncodingRandomized) {
  std::mt19937_64 rng(17);
  int done = 0;
  while (done < 1000) {
    i64 a = 1 + 2 * static_cast<i64>(rng() % 5000);
    i64 p = static_cast<i64>(rng() % 100000) + 1;
    if (std::gcd(a, p) != 1 || !is_squarefree(a)) continue;
    if (rng() & 1) a = -a;
    ASSERT_EQ(char_composite(p, a, 2) == 0, kronecker_by_definition(p, std::llabs(a)) == 1) << p << " " << a;
    ++done;
  }
}

TEST(Omega, CountsDistinctPrimes) {
  EXPECT_EQ(omega(205), 2);
  EXPECT_EQ(omega(-84), 3);
  EXPECT_EQ(omega(1), 0);
}
