#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "snum/error.hpp"
#include "snum/operators.hpp"
#include "snum/sequences.hpp"
#include "support.hpp"

using namespace snum;

namespace {

// Plain linear scan of the two growth conditions.
std::vector<std::size_t> scan_indices(const DecaySequence& a, Variant v, std::size_t blocks) {
  std::vector<std::size_t> out;
  std::size_t prev = 0;
  for (std::size_t k = 0; k < blocks; ++k) {
    const std::size_t anchor = v == Variant::controlled ? prev + 1 : 5 * (prev + 1);
    std::size_t n = 5 * (prev + 1) + 1;
    while (!(a(n) <= a(anchor) / 5.0)) ++n;
    out.push_back(n);
    prev = n;
  }
  return out;
}

}  // namespace

TEST(Sequence, Eval) {
  EXPECT_DOUBLE_EQ(eval_sequence(DecaySequence::geometric(0.5), 3), 0.125);
  EXPECT_EQ(eval_sequence(DecaySequence::table({1, 1, 0}), 5), 0.0);
  EXPECT_DOUBLE_EQ(eval_sequence(DecaySequence::power(1), 7), 1.0 / 7.0);
}

TEST(Sequence, RejectsBadInput) {
  EXPECT_THROW(DecaySequence::geometric(1.0), InvalidInput);
  EXPECT_THROW(DecaySequence::power(0.0), InvalidInput);
  EXPECT_THROW(DecaySequence::table({1, 2}), InvalidInput);
  EXPECT_THROW(DecaySequence::table({0, 0}), InvalidInput);
  EXPECT_THROW(DecaySequence::parse("geometric"), ParseError);
  EXPECT_THROW(DecaySequence::parse("cubic:2"), ParseError);
  EXPECT_THROW(DecaySequence::parse("geometric:0.5x"), ParseError);
}

TEST(Sequence, ParseSpecs) {
  const auto g = DecaySequence::parse("geometric:0.25");
  EXPECT_DOUBLE_EQ(g(2), 0.0625);
  const auto p = DecaySequence::parse("power:2");
  EXPECT_DOUBLE_EQ(p(3), 1.0 / 9.0);
}

TEST(Minorant, GeometricIsItsOwnMinorant) {
  const auto m = convex_minorant(DecaySequence::geometric(0.5), 8);
  for (std::size_t k = 1; k <= 8; ++k) EXPECT_NEAR(m(k), std::ldexp(1.0, -static_cast<int>(k)), 1e-15);
}

TEST(Minorant, TableExamples) {
  const auto a = convex_minorant(DecaySequence::table({1, 1, 0, 0}), 4);
  EXPECT_NEAR(a(1), 1.0, 1e-15);
  EXPECT_NEAR(a(2), 0.5, 1e-15);
  EXPECT_NEAR(a(3), 0.0, 1e-15);
  EXPECT_NEAR(a(4), 0.0, 1e-15);
  const auto b = convex_minorant(DecaySequence::table({4, 2, 2, 0}), 4);
  const double want[] = {4, 2, 1, 0};
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_NEAR(b(k), want[k - 1], 1e-15);
}

TEST(Minorant, RejectsShortHorizon) {
  EXPECT_THROW(convex_minorant(DecaySequence::geometric(0.5), 1), InvalidInput);
}

TEST(Minorant, MatchesChordScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = ref::random_decay(rng, 40);
    const auto seq = DecaySequence::table(v);
    const auto m = convex_minorant(seq, 24);
    std::vector<double> alpha(m.chord_horizon);
    for (std::size_t j = 1; j <= alpha.size(); ++j) alpha[j - 1] = seq(j);
    const auto ref = ref::chord_scan(alpha, 24);
    for (std::size_t k = 1; k <= 24; ++k) ASSERT_NEAR(m(k), ref[k - 1], 1e-12) << "trial " << trial << " k " << k;
  }
}

TEST(Minorant, PropertySuite) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t horizon = 2 + rng() % 511;
    const auto seq = DecaySequence::table(ref::random_decay(rng, horizon + rng() % 64));
    const auto m = convex_minorant(seq, horizon);
    ASSERT_EQ(m.values.size(), horizon);
    if (horizon >= 3) ASSERT_TRUE(check_convexity(m.values));
    for (std::size_t k = 1; k <= horizon; ++k) {
      const double floor = std::min(seq(k) / 2.0, seq(2 * k - 1));
      ASSERT_LE(m(k), seq(k) + kSequenceTolerance);
      ASSERT_GE(m(k), floor - kSequenceTolerance);
    }
    const auto twice = convex_minorant(m.as_table(), horizon);
    for (std::size_t k = 1; k <= horizon; ++k) ASSERT_NEAR(twice(k), m(k), 1e-12);
  }
}

TEST(Minorant, SlopeMonotonicityOnConvexOutput) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto seq = DecaySequence::table(ref::random_decay(rng, 80));
    const auto m = convex_minorant(seq, 64);
    for (std::size_t i = 1; i <= 64; ++i)
      for (std::size_t j = i + 1; j <= 64; ++j)
        for (std::size_t mm = i; mm <= 64; ++mm)
          for (std::size_t n = std::max(j, mm + 1); n <= 64; ++n) {
            ASSERT_TRUE(check_slope_monotonicity(m.values, i, j, mm, n)) << i << ' ' << j << ' ' << mm << ' ' << n;
          }
  }
}

TEST(Convexity, Examples) {
  EXPECT_TRUE(check_convexity(std::vector<double>{4, 2, 1, 0}));
  EXPECT_FALSE(check_convexity(std::vector<double>{1, 1, 0, 0}));
  EXPECT_TRUE(check_convexity(std::vector<double>{1, 0.5, 0.25, 0.125}));
  EXPECT_THROW(check_convexity(std::vector<double>{1, 0}), InvalidInput);
}

TEST(Convexity, SlopeExamples) {
  const std::vector<double> v{4, 2, 1, 0};
  EXPECT_TRUE(check_slope_monotonicity(v, 1, 2, 2, 4));
  EXPECT_TRUE(check_slope_monotonicity(std::vector<double>{3, 3, 3, 3}, 1, 3, 2, 4));
  EXPECT_THROW(check_slope_monotonicity(v, 2, 4, 1, 2), InvalidInput);
  EXPECT_THROW(check_slope_monotonicity(v, 1, 5, 1, 2), InvalidInput);
}

TEST(Plan, Examples) {
  const auto g = select_block_indices(DecaySequence::geometric(0.5), Variant::controlled, 3);
  EXPECT_EQ(g.indices, (std::vector<std::size_t>{6, 36, 186}));
  const auto p = select_block_indices(DecaySequence::power(1), Variant::controlled, 3);
  EXPECT_EQ(p.indices, (std::vector<std::size_t>{6, 36, 186}));
  const auto t = select_block_indices(DecaySequence::geometric(0.5), Variant::twosum, 1);
  EXPECT_EQ(t.indices, (std::vector<std::size_t>{8}));
}

TEST(Plan, MatchesLinearScanAndIsMinimal) {
  const std::vector<DecaySequence> seqs{DecaySequence::geometric(0.5), DecaySequence::geometric(0.9),
                                        DecaySequence::power(1), DecaySequence::power(0.5),
                                        DecaySequence::power(2, 3.0)};
  for (const auto& s : seqs) {
    for (auto v : {Variant::controlled, Variant::twosum, Variant::nocotype}) {
      const auto plan = select_block_indices(s, v, 3);
      EXPECT_EQ(plan.indices, scan_indices(s, v, 3)) << s.spec();
      std::size_t prev = 0;
      for (auto n : plan.indices) {
        const std::size_t anchor = v == Variant::controlled ? prev + 1 : 5 * (prev + 1);
        EXPECT_GT(n, 5 * (prev + 1));
        EXPECT_LE(s(n), s(anchor) / 5.0);
        if (n > prev + 1) {
          const std::size_t below = n - 1;
          EXPECT_TRUE(!(below > 5 * (prev + 1)) || !(s(below) <= s(anchor) / 5.0));
        }
        prev = n;
      }
    }
  }
}

TEST(Plan, ZeroTailAcceptsFirstZero) {
  const auto plan = select_block_indices(DecaySequence::table({1, 0.5}), Variant::controlled, 2);
  EXPECT_EQ(plan.indices, (std::vector<std::size_t>{6, 36}));
}

TEST(Plan, ScanCapRaises) {
  EXPECT_THROW(select_block_indices(DecaySequence::power(0.01), Variant::controlled, 3, 1000), ResourceLimit);
}

TEST(Beta, ControlledExamples) {
  const auto seq = DecaySequence::geometric(0.5);
  const auto plan = select_block_indices(seq, Variant::controlled, 2);
  const auto b1 = beta_table(seq, plan, 1);
  ASSERT_EQ(b1.size(), 6u);
  for (std::size_t j = 1; j <= 6; ++j) EXPECT_DOUBLE_EQ(b1[j - 1], std::ldexp(1.0, -static_cast<int>(j)));
  const auto b2 = beta_table(seq, plan, 2);
  ASSERT_EQ(b2.size(), 36u);
  for (std::size_t j = 1; j <= 36; ++j) {
    const double want = j <= 7 ? std::ldexp(1.0, -7) : std::ldexp(1.0, -static_cast<int>(j));
    EXPECT_DOUBLE_EQ(b2[j - 1], want);
  }
}

TEST(Beta, TwosumExample) {
  const auto seq = DecaySequence::geometric(0.5);
  const auto plan = select_block_indices(seq, Variant::twosum, 1);
  const auto b = beta_table(seq, plan, 1);
  for (std::size_t j = 1; j <= b.size(); ++j) {
    EXPECT_NEAR(b[j - 1], std::ldexp(1.0, -static_cast<int>(j)) * std::sqrt(3.0) / 2.0, 1e-15);
  }
}

TEST(Beta, NocotypeTable) {
  const auto seq = DecaySequence::table({2, 1, 0});
  const auto plan = select_block_indices(seq, Variant::nocotype, 1);
  const auto b = beta_table(seq, plan, 1);
  EXPECT_EQ(b[0], 1.0);
  EXPECT_EQ(b[1], 1.0);
  for (std::size_t j = 2; j < b.size(); ++j) EXPECT_EQ(b[j], 0.0);
}

TEST(Beta, RejectsNonConvexInput) {
  const auto seq = DecaySequence::table({1, 1, 1, 1, 1, 1, 1, 1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1,
                                         0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0});
  const auto plan = select_block_indices(seq, Variant::nocotype, 1);
  EXPECT_THROW(beta_table(seq, plan, 1), InvalidInput);
}

TEST(Beta, TypeExponent) {
  EXPECT_DOUBLE_EQ(type_exponent(2, 2), 2.0);
  EXPECT_DOUBLE_EQ(type_exponent(4, 2), 4.0);
  EXPECT_THROW(type_exponent(2, 1), InvalidInput);
  EXPECT_THROW(type_exponent(1, 2), InvalidInput);
}

TEST(Beta, Telescoping) {
  for (const auto& raw : {DecaySequence::geometric(0.5), DecaySequence::power(1), DecaySequence::power(0.5)}) {
    for (auto v : {Variant::twosum, Variant::nocotype}) {
      const auto w = convex_working_sequence(raw, v, 2);
      for (std::size_t k = 1; k <= 2; ++k) {
        const auto beta = beta_table(w.sequence, w.plan, k);
        const std::size_t nk = w.plan.n(k);
        const std::size_t shift = 2 * w.plan.n(k - 1);
        for (std::size_t m = 1; m <= nk; m += 1 + nk / 50) {
          double acc = 0.0;
          for (std::size_t j = m; j <= nk; ++j) acc += v == Variant::twosum ? beta[j - 1] * beta[j - 1] : beta[j - 1];
          const double a = w.sequence(m + shift);
          const double b = w.sequence(nk + shift + 1);
          const double want = v == Variant::twosum ? a * a - b * b : a - b;
          ASSERT_NEAR(acc, want, 1e-12) << raw.spec() << ' ' << to_string(v) << " k=" << k << " m=" << m;
        }
      }
    }
  }
}
