#include <gtest/gtest.h>

#include <cmath>

#include "wsaw/census.hpp"
#include "wsaw/enumerate.hpp"

using namespace wsaw;

TEST(Census, MaxPairs) {
  EXPECT_EQ(max_pairs(0), 0);
  EXPECT_EQ(max_pairs(1), 0);
  EXPECT_EQ(max_pairs(2), 1);   // 0, e1, 0
  EXPECT_EQ(max_pairs(3), 2);   // 0, e1, 0, e1
  EXPECT_EQ(max_pairs(4), 4);   // three visits to 0, two to e1
}

TEST(Census, FreeWalkCountsOnZd) {
  const WalkCensus c = census_parallel(Domain::whole(2), Point(2), 6, false, 2);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(c.walks_of_length(k), static_cast<std::uint64_t>(std::pow(4, k)));
}

TEST(Census, SelfAvoidingCountsOnZ2) {
  const std::uint64_t saw[] = {1, 4, 12, 36, 100, 284, 780, 2172, 5916};
  const WalkCensus c = census_parallel(Domain::whole(2), Point(2), 8, true, 1);
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(c.walks_of_length(k), saw[k]);
  EXPECT_TRUE(c.self_avoiding_only());
}

TEST(Census, ParallelMatchesSerial) {
  struct Case {
    const char* domain;
    int d;
    Point start;
    int n;
    bool saw;
  };
  const Case cases[] = {
      {"box:2", 2, Point{0, 0}, 8, false},   {"box:2", 2, Point{2, 1}, 7, false},
      {"halfspace:0", 2, Point{0, 0}, 7, false}, {"set:0,0;1,0;1,1;0,1", 2, Point{1, 1}, 9, false},
      {"box:1", 3, Point{0, 0, 0}, 6, false}, {"all", 2, Point{0, 0}, 8, true},
      {"posbox:3", 2, Point{1, 0}, 7, false},  {"box:3", 1, Point{0}, 12, false},
  };
  for (const Case& c : cases) {
    const Domain dom = parse_domain(c.domain, c.d);
    const WalkCensus serial = census_serial(dom, c.start, c.n, c.saw);
    for (int threads : {1, 2, 3}) {
      EXPECT_TRUE(census_parallel(dom, c.start, c.n, c.saw, threads) == serial) << c.domain << " threads " << threads;
    }
  }
}

TEST(Census, TransformedMatchesDirect) {
  const Domain box = Domain::box(Point(2), 2);
  const WalkCensus base = census_parallel(box, Point{2, 1}, 6, false, 1);
  for (const auto& g : hyperoctahedral_group(2)) {
    const WalkCensus direct = census_parallel(box, g.apply(Point{2, 1}), 6, false, 1);
    EXPECT_TRUE(base.transformed(g) == direct);
  }
}

TEST(Census, FreeSumsMatchCensusAtLambdaZero) {
  const Domain dom = Domain::box(Point(2), 2);
  const double beta = 0.1;
  const WalkCensus c = census_serial(dom, Point{1, 0}, 9, false);
  const FreeWalkSums f = free_walk_sums(dom, Point{1, 0}, 9, beta, 2);
  ASSERT_EQ(f.endpoints, c.endpoints());
  for (std::size_t i = 0; i < f.endpoints.size(); ++i) {
    const double v = evaluate_block(c, i, beta, 0.0);
    EXPECT_NEAR(f.sums[i], v, 1e-15 * v);
  }
}

TEST(Census, EndpointLookup) {
  const WalkCensus c = census_serial(Domain::box(Point(2), 1), Point(2), 3, false);
  EXPECT_GE(c.find(Point{1, 1}), 0);
  EXPECT_EQ(c.find(Point{5, 5}), -1);
  EXPECT_EQ(c.count(Point{0, 0}, 0, 0), 1u);
  EXPECT_EQ(c.count(Point{0, 0}, 2, 1), 4u);  // out and back along each axis
}
