#include <algorithm>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "mots/hungarian.hpp"
#include "oracles.hpp"

namespace mots {
namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

Matrix make(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  Matrix c(m, m ? rows.begin()->size() : 0);
  std::size_t j = 0;
  for (const auto& row : rows) {
    std::size_t i = 0;
    for (double x : row) c(j, i++) = x;
    ++j;
  }
  return c;
}

Pairs sorted(Pairs p) {
  std::sort(p.begin(), p.end());
  return p;
}

double total(const Matrix& cost, const Pairs& pairs) {
  double s = 0.0;
  for (const auto& [r, c] : pairs) s += cost(r, c);
  return s;
}

TEST(Hungarian, DiagonalOptimum) {
  const auto r = hungarian_solve({make({{0.1, 0.9}, {0.9, 0.1}}), 0.6});
  EXPECT_EQ(sorted(r.matches), (Pairs{{0, 0}, {1, 1}}));
}

TEST(Hungarian, FullyGated) {
  const auto r = hungarian_solve({make({{0.9}}), 0.6});
  EXPECT_TRUE(r.matches.empty());
  EXPECT_EQ(r.unmatched_tracks, (std::vector<std::size_t>{0}));
  EXPECT_EQ(r.unmatched_detections, (std::vector<std::size_t>{0}));
}

TEST(Hungarian, EmptyProblems) {
  EXPECT_TRUE(hungarian_solve({Matrix(0, 3), 0.7}).matches.empty());
  const auto r = hungarian_solve({Matrix(2, 0), 0.7});
  EXPECT_EQ(r.unmatched_tracks.size(), 2u);
}

TEST(Hungarian, PrefersMoreAdmissibleMatches) {
  // Taking (0,0) alone costs 0; the gate-respecting optimum pairs both rows.
  const auto r = hungarian_solve({make({{0.0, 0.5}, {0.5, 0.9}}), 0.6});
  EXPECT_EQ(sorted(r.matches), (Pairs{{0, 1}, {1, 0}}));
}

TEST(Hungarian, RejectsNonFiniteCost) {
  Matrix c = make({{0.1, std::numeric_limits<double>::quiet_NaN()}});
  EXPECT_THROW(solve_assignment(c), std::exception);
}

TEST(Hungarian, RectangularPaddingNeverSurfaces) {
  const Matrix c = make({{0.2, 0.1, 0.3}});
  const auto r = hungarian_solve({c, 0.7});
  EXPECT_EQ(r.matches, (Pairs{{0, 1}}));
  EXPECT_EQ(r.unmatched_detections, (std::vector<std::size_t>{0, 2}));
  const auto t = hungarian_solve({make({{0.2}, {0.1}, {0.3}}), 0.7});
  EXPECT_EQ(t.matches, (Pairs{{1, 0}}));
}

TEST(Hungarian, FiveByFiveMatchesAllPermutations) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix c(5, 5);
    for (auto& x : c.values()) x = unit(rng);
    const auto brute = testing::brute_force_assignment(testing::to_rows(c), 1.0);
    const auto r = hungarian_solve({c, 1.0});
    ASSERT_EQ(r.matches.size(), 5u);
    ASSERT_NEAR(total(c, r.matches), brute.cost, 1e-9);
  }
}

TEST(HungarianProperty, AllShapesUpToSixMatchBruteForce) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t m = 0; m <= 6; ++m) {
    for (std::size_t n = 0; n <= 6; ++n) {
      for (int trial = 0; trial < 25; ++trial) {
        Matrix c(m, n);
        // Mix of plain uniform costs and coarse values that create ties.
        for (auto& x : c.values()) x = trial % 2 ? unit(rng) : std::floor(unit(rng) * 4) / 4;
        for (double gate : {0.3, 0.7, 1.0}) {
          const auto brute = testing::brute_force_assignment(testing::to_rows(c), gate);
          const auto r = hungarian_solve({c, gate});
          ASSERT_TRUE(is_partition(r, m, n));
          for (const auto& [j, i] : r.matches) ASSERT_LE(c(j, i), gate);
          ASSERT_EQ(r.matches.size(), brute.admissible) << m << "x" << n << " gate " << gate;
          ASSERT_NEAR(total(c, r.matches), brute.cost, 1e-9) << m << "x" << n;
        }
      }
    }
  }
}

TEST(HungarianProperty, UngatedSolverIsOptimalAndComplete) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unit(-5.0, 5.0);
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::size_t n = 1; n <= 6; ++n) {
      Matrix c(m, n);
      for (auto& x : c.values()) x = unit(rng);
      const auto assign = solve_assignment(c);
      ASSERT_EQ(assign.size(), m);
      double cost = 0.0;
      std::size_t assigned = 0;
      std::vector<char> used(n, 0);
      for (std::size_t j = 0; j < m; ++j) {
        if (assign[j] < 0) continue;
        ASSERT_FALSE(used[assign[j]]);
        used[assign[j]] = 1;
        cost += c(j, assign[j]);
        ++assigned;
      }
      ASSERT_EQ(assigned, std::min(m, n));
      const auto brute =
          testing::brute_force_assignment(testing::to_rows(c), std::numeric_limits<double>::max());
      ASSERT_NEAR(cost, brute.cost, 1e-9);
    }
  }
}

TEST(HungarianProperty, Deterministic) {
  std::mt19937_64 rng(34);
  std::uniform_int_distribution<int> coarse(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix c(5, 6);
    for (auto& x : c.values()) x = coarse(rng) / 4.0;
    EXPECT_EQ(hungarian_solve({c, 0.7}).matches, hungarian_solve({c, 0.7}).matches);
  }
}

}  // namespace
}  // namespace mots
