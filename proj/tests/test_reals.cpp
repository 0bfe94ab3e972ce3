#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ctopo/reals.hpp"
#include "oracles.hpp"

using namespace ctopo;
using namespace ctopo::reals;
using oracle::pow2_inv;

namespace {

Rational q(long long p, long long d = 1) { return Rational(p, d); }

Rational approx_ok(const Nat& x, unsigned n, Fuel fuel = 10000000) {
  auto v = approx_value(x, n, fuel);
  EXPECT_TRUE(v) << "approx at " << n;
  return v ? *v : Rational(0);
}

// |a - x| < 2^-n for x = sqrt 2, decided with exact squares.
bool near_sqrt2(const Rational& a, unsigned n) {
  Rational lo = a - pow2_inv(n), hi = a + pow2_inv(n);
  return (lo <= 0 || lo * lo < 2) && hi > 0 && 2 < hi * hi;
}

}  // namespace

// -- rationals and names ------------------------------------------------------

TEST(Rationals, CodeRoundTrip) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long long> num(-1000, 1000), den(1, 500);
  for (int i = 0; i < 500; ++i) {
    Rational r(num(rng), den(rng));
    ASSERT_EQ(cq_decode(cq_encode(r)), r);
  }
  EXPECT_EQ(cq_encode(0), 0);                    // [TRIVIAL]
  EXPECT_EQ(cq_decode(pair(1, pair(3, 1))), q(-3, 2));  // (-1)^1 * 3/(1+1)
  EXPECT_EQ(cq_decode(pair(2, pair(3, 1))), q(3, 2));   // sign by parity
}

TEST(Rationals, ParseAndFormat) {
  EXPECT_EQ(parse_rational("-2/6"), q(-1, 3));
  EXPECT_EQ(parse_rational("5"), q(5));
  EXPECT_EQ(format_rational(q(1, 3)), "1/3");
  EXPECT_THROW(parse_rational("1/0"), PreconditionError);
  EXPECT_THROW(parse_rational("x"), PreconditionError);
}

TEST(Reals, ConstantNamesAreExact) {
  for (Rational r : {q(1, 3), q(-7, 2), q(0)}) {
    Nat x = real_from_rational(r);
    for (unsigned n : {0u, 5u, 20u}) EXPECT_EQ(approx_ok(x, n), r);
  }
  EXPECT_FALSE(approx(real_from_rational(q(1)), 3, 0).halted);  // fuel 0
}

TEST(Reals, Sqrt2WithinPrecision) {
  // [DERIVED] oracle: exact squares of the enclosure.
  for (unsigned n = 0; n <= 30; ++n) {
    ASSERT_TRUE(near_sqrt2(approx_ok(sqrt2_code(), n), n)) << n;
  }
}

TEST(Reals, CauchyContract) {
  std::vector<Nat> names = {
      real_from_rational(q(2, 7)), sqrt2_code(), limit_fast(shifted_sequence(q(1, 3), false)),
      limit_with_modulus(harmonic_sequence(), pow2_program()), limit_fast(shifted_sequence(q(-1), true))};
  for (const auto& x : names) {
    std::vector<Rational> v;
    for (unsigned n = 0; n <= 20; ++n) v.push_back(approx_ok(x, n));
    for (unsigned n = 0; n <= 20; ++n)
      for (unsigned m = 0; m <= 20; ++m)
        ASSERT_LE(oracle::abs(v[n] - v[m]), pow2_inv(n) + pow2_inv(m));
  }
}

// -- opens --------------------------------------------------------------------

TEST(Opens, ParseOpen) {
  EXPECT_EQ(parse_open("empty"), kDivergeCode);
  EXPECT_EQ(parse_open("full"), full_open_code());
  EXPECT_EQ(parse_intervals("(0/1,1/1);(2,3)").size(), 2u);
  EXPECT_TRUE(parse_intervals("(1,0)").size() == 1u);  // empty interval, allowed
  EXPECT_THROW(parse_intervals("(0,1"), PreconditionError);
  EXPECT_THROW(parse_intervals("0,1"), PreconditionError);
}

TEST(Opens, MemberDocumentedFuel) {
  // [DERIVED] oracle: 0 < 1/2 < 1; step count frozen.
  Outcome o = member_real(real_from_rational(q(1, 2)), parse_open("(0,1)"), 1000000);
  ASSERT_TRUE(o.halted);
  EXPECT_EQ(o.steps, 517u);
  EXPECT_FALSE(member_real(real_from_rational(q(2)), parse_open("(0,1)"), 1000000).halted);
  EXPECT_TRUE(member_real(sqrt2_code(), parse_open("full"), 100000).halted);
  EXPECT_FALSE(member_real(sqrt2_code(), parse_open("empty"), 100000).halted);
}

TEST(Opens, MemberAgreesWithIntervalOracle) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long long> num(-40, 40), den(1, 8);
  int inside = 0, outside = 0;
  for (int i = 0; i < 40; ++i) {
    std::vector<Interval> ivs;
    for (int j = 0; j < 2; ++j) {
      Rational a(num(rng), den(rng));
      ivs.push_back({a, a + Rational(1 + num(rng) % 5 + 5, den(rng))});
    }
    Rational x(num(rng), den(rng));
    // Skip points within 1/64 of an endpoint: budgets there are unbounded.
    bool edge = false;
    for (auto& [a, b] : ivs) edge |= oracle::abs(x - a) < q(1, 64) || oracle::abs(x - b) < q(1, 64);
    if (edge) continue;
    bool in = oracle::in_union(x, ivs);
    Outcome o = member_real(real_from_rational(x), open_from_intervals(ivs), in ? 2000000 : 100000);
    ASSERT_EQ(o.halted, in) << format_rational(x);
    (in ? inside : outside)++;
  }
  EXPECT_GT(inside, 5);
  EXPECT_GT(outside, 5);
}

TEST(Opens, UnionAndIntersection) {
  Nat a = parse_open("(0,1)"), b = parse_open("(2,3)"), c = parse_open("(1/2,5/2)");
  Nat seq = assemble_code([&](Assembler& as) {
    auto second = as.label();
    as.jz(Assembler::in(), second);
    as.ret_const(b);
    as.bind(second);
    as.ret_const(a);
  });
  Nat u = open_union(seq);
  Nat i = open_intersect(a, c);
  auto& s = real_space();
  Nat u2 = ctopo::open_union(s, seq);
  Nat i2 = ctopo::open_intersect(s, a, c);
  struct Case { Rational x; bool in_u, in_i; };
  for (auto [x, in_u, in_i] : {Case{q(1, 4), true, false}, Case{q(3, 4), true, true},
                               Case{q(5, 2), true, false}, Case{q(3, 2), false, false}}) {
    Nat xn = real_from_rational(x);
    EXPECT_EQ(member_real(xn, u, in_u ? 5000000 : 200000).halted, in_u) << format_rational(x);
    EXPECT_EQ(member_real(xn, i, in_i ? 5000000 : 200000).halted, in_i) << format_rational(x);
    EXPECT_EQ(member_real(xn, u2, in_u ? 5000000 : 200000).halted, in_u) << format_rational(x);
    EXPECT_EQ(member_real(xn, i2, in_i ? 5000000 : 200000).halted, in_i) << format_rational(x);
  }
}

// -- limits -------------------------------------------------------------------

TEST(Limits, LimitFastProducesTheLimit) {
  for (Rational c : {q(0), q(1, 3), q(-5, 4)}) {
    for (bool below : {false, true}) {
      Nat lim = limit_fast(shifted_sequence(c, below));
      for (unsigned n = 0; n <= 20; ++n) ASSERT_LT(oracle::abs(approx_ok(lim, n) - c), pow2_inv(n));
    }
  }
}

TEST(Limits, ModulusSubsequence) {
  Nat lim = limit_with_modulus(harmonic_sequence(), pow2_program());
  EXPECT_EQ(approx_ok(lim, 10), q(1, 4097));  // [DERIVED] 1/(2^12 + 1)
  for (unsigned n = 0; n <= 14; ++n) ASSERT_LT(approx_ok(lim, n), pow2_inv(n));
}

// -- sobriety -----------------------------------------------------------------

TEST(Sober, RecoversRationals) {
  auto& s = real_space();
  for (Rational x : {q(1, 3), q(-2, 7), q(5, 2)}) {
    Nat t = nu_to_taustar(s, real_from_rational(x));
    for (unsigned n : {0u, 3u, 8u}) {
      Outcome o = sober_recover_real(t, n, 10000000);
      ASSERT_TRUE(o.halted);
      EXPECT_LT(oracle::abs(cq_decode(o.value) - x), pow2_inv(n));
    }
  }
  Outcome frozen = sober_recover_real(nu_to_taustar(s, real_from_rational(q(1, 3))), 10, 10000000);
  EXPECT_EQ(cq_decode(frozen.value), q(341, 1024));  // [DERIVED] bisection oracle, frozen
}

TEST(Sober, RecoverNameIsARealName) {
  Nat name = recover_name(nu_to_taustar(real_space(), sqrt2_code()));
  for (unsigned n : {0u, 4u, 8u}) EXPECT_TRUE(near_sqrt2(approx_ok(name, n), n));
}

// -- closed balls -------------------------------------------------------------

TEST(Balls, BallInsideIntervalAndAroundPoint) {
  struct Fx { Rational x; const char* open; };
  for (auto [x, text] : {Fx{q(1, 2), "(0,1)"}, Fx{q(-1, 3), "(-1,0);(5,6)"}, Fx{q(9, 4), "(2,3)"}}) {
    auto b = closed_ball_basis(real_from_rational(x), parse_open(text), 5000000);
    ASSERT_TRUE(b);
    Rational c = b->center_value(), r = b->radius_value();
    auto [ea, eb] = unpair(b->interval);
    EXPECT_LE(c - r, x);
    EXPECT_LE(x, c + r);
    EXPECT_LT(cq_decode(ea), c - r);
    EXPECT_LT(c + r, cq_decode(eb));
  }
  auto b = closed_ball_basis(real_from_rational(q(1, 2)), parse_open("(0,1)"), 5000000);
  EXPECT_EQ(b->center_value(), q(1, 2));  // [DERIVED] frozen
  EXPECT_EQ(b->radius_value(), q(1, 4));
}

TEST(Balls, ComplementSemiDecider) {
  auto b = closed_ball_basis(real_from_rational(q(1, 2)), parse_open("(0,1)"), 5000000);
  ASSERT_TRUE(b);
  Nat co = ball_complement(*b);
  for (Rational y : {q(2), q(-1), q(9, 10)}) EXPECT_TRUE(run(co, real_from_rational(y), 1000000).halted);
  EXPECT_FALSE(run(co, real_from_rational(q(1, 2)), 1000000).halted);
  EXPECT_FALSE(run(co, real_from_rational(q(3, 4)), 1000000).halted);  // on the boundary
}

TEST(Balls, BasisDescriptor) {
  Nat x = real_from_rational(q(1, 2));
  auto basis = ball_basis(x);
  Outcome ball = refine_neighborhood(basis, parse_open("(0,1)"), 5000000);
  ASSERT_TRUE(ball.halted);
  Outcome co = run(*basis.cosd_code, ball.value, 100000);
  ASSERT_TRUE(co.halted);
  EXPECT_TRUE(run(co.value, real_from_rational(q(2)), 1000000).halted);
  EXPECT_FALSE(run(co.value, x, 200000).halted);
}

// -- dense search and norms ---------------------------------------------------

TEST(Dense, FindsPointInBoth) {
  Outcome o = dense_search(open_semidecider(parse_open("(0,2)")), parse_open("(1,3)"), 10000000);
  ASSERT_TRUE(o.halted);
  Rational v = approx_ok(o.value, 0);
  EXPECT_GT(v, 1);
  EXPECT_LT(v, 2);
  EXPECT_FALSE(dense_search(open_semidecider(parse_open("(0,1)")), parse_open("(2,3)"), 300000).halted);
  // Negative pairs are reached as early as positive ones.
  o = dense_search(open_semidecider(parse_open("(-5,-4)")), parse_open("(-9/2,0)"), 10000000);
  ASSERT_TRUE(o.halted);
  EXPECT_EQ(approx_ok(o.value, 0), q(-17, 4));  // [DERIVED] first dyadic in (-9/2,-4), frozen
}

TEST(Dense, CandidatesCoverSmallDyadics) {
  std::set<Rational> seen;
  for (unsigned k = 0; k < 2000; ++k) seen.insert(dense_candidate(k));
  for (int j = 0; j <= 3; ++j)
    for (int m = -10; m <= 10; ++m) EXPECT_TRUE(seen.count(Rational(m, 1 << j))) << m << "/" << (1 << j);
  EXPECT_EQ(dense_candidate(pair(2, 33)), q(-17, 4));  // [TRIVIAL]
}

TEST(Norms, RationalNorm) {
  Nat o = parse_open("(0,1/2)");
  Outcome n = run(rational_norm(q(1, 3)), o, 1000000);
  ASSERT_TRUE(n.halted);
  EXPECT_EQ(n.value, 3);  // [DERIVED] 1/3 + 1/8 < 1/2, frozen
  for (unsigned k = 3; k <= 13; ++k) {
    EXPECT_TRUE(oracle::in_union(q(1, 3) + pow2_inv(k), {{q(0), q(1, 2)}}));
    EXPECT_TRUE(oracle::in_union(q(1, 3) - pow2_inv(k), {{q(0), q(1, 2)}}));
  }
}
