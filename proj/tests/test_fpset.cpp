#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "mdecomp/fpset.hpp"

using namespace mdecomp;

namespace {

std::vector<Residue> elems(std::initializer_list<Residue> xs) { return std::vector<Residue>(xs); }

ResidueSet random_set(std::mt19937_64& rng, std::uint32_t p, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
  std::uniform_int_distribution<std::int64_t> elem(0, p - 1);
  ResidueSet s(p);
  const std::size_t k = size_dist(rng);
  while (s.size() < k) s = s.with(elem(rng));
  return s;
}

// Shortest progression over every (start, difference, length); independent of the gap scan.
std::uint32_t brute_cover_length(const ResidueSet& x) {
  const std::uint32_t p = x.modulus();
  std::uint32_t best = p;
  for (std::uint32_t start = 0; start < p; ++start)
    for (std::uint32_t d = 1; d < p; ++d) {
      std::set<std::uint32_t> seen;
      std::uint32_t v = start;
      for (std::uint32_t len = 1; len < best; ++len, v = (v + d) % p) {
        if (x.contains(v)) seen.insert(v);
        if (seen.size() == x.size()) {
          best = len;
          break;
        }
      }
    }
  return best;
}

}  // namespace

TEST(Interval, MakeInterval) {
  EXPECT_EQ(make_interval({7, 3, 3}).elements(), elems({4, 5, 6}));
  EXPECT_EQ(make_interval({7, 5, 3}).elements(), elems({0, 1, 6}));
  EXPECT_EQ(make_interval({13, 0, 6}).elements(), elems({1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(make_interval({13, 0, 13}).size(), 13u);
}

TEST(Interval, RejectsBadSpecs) {
  EXPECT_THROW((void)make_interval({9, 0, 3}), InvalidArgument);
  EXPECT_THROW((void)make_interval({2, 0, 1}), InvalidArgument);
  EXPECT_THROW((void)make_interval({7, 0, 0}), InvalidArgument);
  EXPECT_THROW((void)make_interval({7, 0, 8}), InvalidArgument);
  EXPECT_THROW((void)make_interval({7, 7, 1}), InvalidArgument);
  EXPECT_THROW(ResidueSet(1), InvalidArgument);
}

TEST(Interval, FromBounds) {
  EXPECT_EQ(interval_from_bounds(11, -4, 4), (IntervalSpec{11, 6, 9}));
  EXPECT_EQ(make_interval(interval_from_bounds(11, -4, 4)).elements(), elems({0, 1, 2, 3, 4, 7, 8, 9, 10}));
  EXPECT_THROW((void)interval_from_bounds(11, 3, 2), InvalidArgument);
  EXPECT_THROW((void)interval_from_bounds(5, 0, 5), InvalidArgument);
}

TEST(Sumset, Examples) {
  const auto y = ResidueSet::of(7, {1, 3, 4});
  EXPECT_EQ(sumset(ResidueSet::of(7, {0}), y), y);
  EXPECT_EQ(sumset(ResidueSet::of(5, {1, 2}), ResidueSet::of(5, {1, 2})).elements(), elems({2, 3, 4}));
  EXPECT_EQ(sumset(ResidueSet::of(7, {1, 2}), ResidueSet::of(7, {3, 5})).elements(), elems({0, 4, 5, 6}));
  EXPECT_THROW((void)sumset(ResidueSet(5), ResidueSet(7)), InvalidArgument);
}

TEST(Sumset, TranslateMatchesNaiveAcrossWordBoundaries) {
  std::mt19937_64 rng(7);
  for (std::uint32_t p : {3u, 61u, 67u, 127u, 131u, 257u, 1031u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const ResidueSet x = random_set(rng, p, p);
      const std::int64_t shift = std::uniform_int_distribution<std::int64_t>(-3 * p, 3 * p)(rng);
      ResidueSet expect(p);
      for (Residue r : x.elements()) expect = expect.with(std::int64_t{r} + shift);
      ASSERT_EQ(x.translate(shift), expect) << "p=" << p << " shift=" << shift;
    }
  }
}

TEST(Productset, Examples) {
  const auto y = ResidueSet::of(11, {0, 2, 9});
  EXPECT_EQ(productset(ResidueSet::of(11, {1}), y), y);
  EXPECT_EQ(productset(ResidueSet::of(7, {-1, 2}), ResidueSet::of(7, {2, 3})).elements(), elems({4, 5, 6}));
  EXPECT_EQ(productset(ResidueSet::of(13, {1, 5}), ResidueSet::of(13, {1, 3, 6})).elements(),
            elems({1, 2, 3, 4, 5, 6}));
  EXPECT_THROW((void)productset(ResidueSet(5), ResidueSet(7)), InvalidArgument);
}

TEST(KfoldSum, Examples) {
  const auto x = ResidueSet::of(11, {3, 7});
  EXPECT_EQ(kfold_sum(1, x), x);
  EXPECT_EQ(kfold_sum(2, ResidueSet::of(11, {0, 1})).elements(), elems({0, 1, 2}));
  EXPECT_EQ(kfold_sum(3, ResidueSet::of(11, {1, 2})).elements(), elems({3, 4, 5, 6}));
  EXPECT_THROW((void)kfold_sum(0, x), InvalidArgument);
}

TEST(KfoldSum, DoublingMatchesIteration) {
  std::mt19937_64 rng(11);
  for (std::uint32_t p : {17u, 101u, 263u}) {
    const ResidueSet x = random_set(rng, p, 4);
    ResidueSet iter = x;
    for (std::uint64_t k = 2; k <= 20; ++k) {
      iter = sumset(iter, x);
      ASSERT_EQ(kfold_sum(k, x), iter) << "k=" << k;
    }
  }
}

TEST(KfoldSum, IntervalSizeGrowsLinearly) {
  for (std::uint32_t p : {31u, 101u}) {
    for (std::uint32_t len = 1; len <= 6; ++len) {
      const ResidueSet interval = make_interval({p, 5, len});
      for (std::uint64_t k = 1; k * (len - 1) + 1 <= p; ++k) {
        ASSERT_EQ(kfold_sum(k, interval).size(), k * (len - 1) + 1);
        if (k > 40) break;
      }
    }
  }
}

TEST(Dilate, Examples) {
  const auto x = ResidueSet::of(13, {1, 3, 6});
  EXPECT_EQ(dilate(1, x), x);
  EXPECT_EQ(dilate(12, x), negate(x));
  EXPECT_EQ(dilate(5, x).elements(), elems({2, 4, 5}));
  EXPECT_THROW((void)dilate(13, x), InvalidArgument);
}

TEST(Dilate, ProductSetBilinearity) {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {7u, 13u, 29u, 97u}) {
    for (int trial = 0; trial < 30; ++trial) {
      const ResidueSet a = random_set(rng, p, 6);
      const ResidueSet b = random_set(rng, p, 6);
      const std::int64_t lambda = std::uniform_int_distribution<std::int64_t>(1, p - 1)(rng);
      const auto inv = static_cast<std::int64_t>(inv_mod(static_cast<Residue>(lambda), p));
      ASSERT_EQ(productset(dilate(lambda, a), dilate(inv, b)), productset(a, b));
      ASSERT_EQ(dilate(lambda, a).size(), a.size());
    }
  }
}

TEST(Symmetry, NegateStripSymmetric) {
  EXPECT_EQ(negate(ResidueSet::of(7, {1, 2})).elements(), elems({5, 6}));
  EXPECT_EQ(strip_zero(ResidueSet::of(7, {0, 1, 2})).elements(), elems({1, 2}));
  const auto s = ResidueSet::of(11, {7, 8, 9, 10, 0, 1, 2, 3, 4});
  EXPECT_TRUE(is_symmetric(s));
  EXPECT_TRUE(is_symmetric(strip_zero(s)));
  EXPECT_FALSE(is_symmetric(ResidueSet::of(11, {1, 2, 9})));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ResidueSet x = random_set(rng, 23, 10);
    ASSERT_EQ(negate(negate(x)), x);
    ASSERT_EQ(strip_zero(strip_zero(x)), strip_zero(x));
  }
}

TEST(ApCover, Examples) {
  EXPECT_EQ(ap_cover_mod_p(ResidueSet::of(11, {1, 4, 7}), 5), (ApCover{1, 3, 3}));
  const auto cover = ap_cover_mod_p(ResidueSet::of(11, {1, 2, 5}), 5);
  ASSERT_TRUE(cover.has_value());
  EXPECT_EQ(cover->length, 4u);
  EXPECT_EQ(brute_cover_length(ResidueSet::of(11, {1, 2, 5})), 4u);
  EXPECT_EQ(ap_cover_mod_p(ResidueSet::of(11, {1, 2, 5}), 3), std::nullopt);
  EXPECT_EQ(ap_cover_mod_p(ResidueSet::of(13, {3}), 1), (ApCover{3, 1, 1}));
  EXPECT_THROW((void)ap_cover_mod_p(ResidueSet(7), 3), InvalidArgument);
}

TEST(ApCover, TieBreaksOnSmallestDifferenceThenStart) {
  // {0,1} is covered by (0,1,2); difference 1 wins over any other pair.
  EXPECT_EQ(ap_cover_mod_p(ResidueSet::of(7, {0, 1}), 7), (ApCover{0, 1, 2}));
  // whole field: length p, difference 1, start 0
  EXPECT_EQ(ap_cover_mod_p(ResidueSet::full(5), 5), (ApCover{0, 1, 5}));
}

TEST(ApCover, MatchesBruteForceOnSmallSets) {
  std::mt19937_64 rng(2024);
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const ResidueSet x = random_set(rng, p, std::min<std::uint32_t>(4, p));
      const auto cover = ap_cover_mod_p(x, p);
      ASSERT_TRUE(cover.has_value());
      for (Residue r : x.elements()) {
        const auto terms = cover->terms(p);
        ASSERT_NE(std::find(terms.begin(), terms.end(), r), terms.end());
      }
      ASSERT_EQ(cover->length, brute_cover_length(x)) << "p=" << p << " X=" << to_string(x);
    }
  }
}

TEST(IsInterval, Examples) {
  EXPECT_EQ(is_interval(ResidueSet::of(7, {4, 5, 6})), (IntervalSpec{7, 3, 3}));
  EXPECT_EQ(is_interval(ResidueSet::of(7, {6, 0, 1})), (IntervalSpec{7, 5, 3}));
  EXPECT_EQ(is_interval(ResidueSet::of(7, {1, 3})), std::nullopt);
  EXPECT_EQ(is_interval(ResidueSet(7)), (IntervalSpec{7, 0, 0}));
  EXPECT_EQ(is_interval(ResidueSet::full(7)), (IntervalSpec{7, 0, 7}));
  for (std::uint32_t n = 0; n < 11; ++n)
    for (std::uint32_t len = 1; len < 11; ++len)
      ASSERT_EQ(is_interval(make_interval({11, n, len})), (IntervalSpec{11, n, len}));
}

TEST(CauchyDavenport, RandomSetsNeverViolate) {
  std::mt19937_64 rng(99);
  for (std::uint32_t p : {3u, 7u, 31u, 101u}) {
    for (int trial = 0; trial < 100; ++trial) {
      const ResidueSet x = random_set(rng, p, p);
      const ResidueSet y = random_set(rng, p, p);
      ASSERT_GE(sumset(x, y).size(), std::min<std::size_t>(p, x.size() + y.size() - 1));
    }
  }
}
