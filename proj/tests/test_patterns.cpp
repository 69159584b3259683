#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpaudit/patterns.hpp"

#include <set>
#include <vector>

using namespace dpaudit;

namespace {

std::vector<std::int64_t> v(std::initializer_list<std::int64_t> xs) { return xs; }

const AdjacentPair* find_pair(const PatternSet& set, const std::string& id) {
  for (const auto& p : set.pairs)
    if (p.id == id) return &p;
  return nullptr;
}

}  // namespace

TEST_CASE("query adjacency predicate") {
  CHECK(is_query_adjacent(v({1, 1}), v({2, 0})));
  CHECK_FALSE(is_query_adjacent(v({1, 1}), v({3, 1})));
  CHECK(is_query_adjacent(v({0}), v({0})));
  CHECK_THROWS_AS((void)is_query_adjacent(v({1}), v({1, 2})), std::invalid_argument);
}

TEST_CASE("standard patterns at d=6") {
  const auto set = table1_pairs(6);
  CHECK(set.pairs.size() == 7);
  CHECK(set.warnings.empty());

  const auto* one_above = find_pair(set, "one-above");
  REQUIRE(one_above != nullptr);
  CHECK(one_above->x.query == v({1, 1, 1, 1, 1, 1}));
  CHECK(one_above->x_prime.query == v({2, 1, 1, 1, 1, 1}));

  const auto* one_below = find_pair(set, "one-below");
  REQUIRE(one_below != nullptr);
  CHECK(one_below->x_prime.query == v({0, 1, 1, 1, 1, 1}));

  const auto* oarb = find_pair(set, "one-above-rest-below");
  REQUIRE(oarb != nullptr);
  CHECK(oarb->x_prime.query == v({2, 0, 0, 0, 0, 0}));

  const auto* obra = find_pair(set, "one-below-rest-above");
  REQUIRE(obra != nullptr);
  CHECK(obra->x_prime.query == v({0, 2, 2, 2, 2, 2}));

  const auto* half = find_pair(set, "half-half");
  REQUIRE(half != nullptr);
  CHECK(half->x.query == v({1, 1, 1, 1, 1, 1}));
  CHECK(half->x_prime.query == v({0, 0, 0, 1, 1, 1}));

  const auto* all = find_pair(set, "all-above-all-below");
  REQUIRE(all != nullptr);
  CHECK(all->x_prime.query == v({2, 2, 2, 2, 2, 2}));

  const auto* x_shape = find_pair(set, "x-shape");
  REQUIRE(x_shape != nullptr);
  CHECK(x_shape->x.query == v({1, 1, 1, 0, 0, 0}));
  CHECK(x_shape->x_prime.query == v({0, 0, 0, 1, 1, 1}));
}

TEST_CASE("odd d omits the half-split patterns with warnings") {
  const auto set = table1_pairs(5);
  CHECK(set.pairs.size() == 5);
  CHECK(set.warnings.size() == 2);
  CHECK(find_pair(set, "half-half") == nullptr);
  CHECK(find_pair(set, "x-shape") == nullptr);
  CHECK(find_pair(set, "one-above") != nullptr);
  CHECK_THROWS_AS((void)table1_pairs(1), std::invalid_argument);
}

TEST_CASE("every generated pair is adjacent") {
  for (int d : {2, 5, 6, 9}) {
    for (const auto& p : table1_pairs(d).pairs) {
      CHECK(is_query_adjacent(p.x.query, p.x_prime.query));
    }
  }
  for (const auto& p : binary_neighborhood(6)) {
    CHECK(is_query_adjacent(p.x.query, p.x_prime.query));
  }
}

TEST_CASE("binary neighborhood enumerates the cube") {
  const auto one = binary_neighborhood(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].x.query == v({0}));
  CHECK(one[0].x_prime.query == v({1}));

  const auto six = binary_neighborhood(6);
  CHECK(six.size() == 63);
  std::set<std::vector<std::int64_t>> seen;
  for (const auto& p : six) {
    CHECK(p.x.query == v({0, 0, 0, 0, 0, 0}));
    for (auto e : p.x_prime.query) CHECK((e == 0 || e == 1));
    seen.insert(p.x_prime.query);
  }
  CHECK(seen.size() == 63);  // all distinct, zero vector excluded
  CHECK(seen.count(v({0, 0, 0, 0, 0, 0})) == 0);
  CHECK_THROWS_AS((void)binary_neighborhood(21), std::invalid_argument);
}

TEST_CASE("cube grid neighborhood") {
  const auto k3 = cube_grid_neighborhood(3);
  CHECK(k3.size() == 26);
  std::set<std::vector<double>> seen;
  for (const auto& p : k3) {
    CHECK(p.x.stat == std::vector<double>{0.5, 0.5, 0.5});
    for (double e : p.x_prime.stat) CHECK((e == 0.0 || e == 0.5 || e == 1.0));
    seen.insert(p.x_prime.stat);
  }
  CHECK(seen.size() == 26);
  CHECK(seen.count({0.0, 0.0, 0.0}) == 1);
  CHECK(seen.count({1.0, 1.0, 1.0}) == 1);
  CHECK(seen.count({0.5, 0.5, 0.5}) == 0);
  CHECK(cube_grid_neighborhood(1).size() == 2);
}

TEST_CASE("statistic pair presets") {
  const auto lap = statistic_pairs("laplace");
  REQUIRE(lap.size() == 10);
  CHECK(lap[0].x.stat == std::vector<double>{0.0});
  CHECK(lap[0].x_prime.stat == std::vector<double>{0.1});
  CHECK(lap[9].x_prime.stat == std::vector<double>{1.0});

  const auto nm = statistic_pairs("noisy-max");
  CHECK(nm[4].x_prime.stat == std::vector<double>{0.5, 0.5, 0.5});

  const auto ex = statistic_pairs("exponential");
  CHECK(ex[0].x.stat == std::vector<double>{1.0});
  CHECK(ex[9].x_prime.stat == std::vector<double>{2.0});

  CHECK_THROWS_AS((void)statistic_pairs("nope"), std::invalid_argument);
}

TEST_CASE("generation is order-stable") {
  const auto a = table1_pairs(6);
  const auto b = table1_pairs(6);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) CHECK(a.pairs[i].id == b.pairs[i].id);
  const auto n1 = binary_neighborhood(4);
  const auto n2 = binary_neighborhood(4);
  for (std::size_t i = 0; i < n1.size(); ++i) CHECK(n1[i].id == n2[i].id);
}

TEST_CASE("json round trip") {
  const auto pairs = table1_pairs(6).pairs;
  const auto text = pairs_to_json(pairs);
  const auto back = pairs_from_json(text);
  REQUIRE(back.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(back[i].id == pairs[i].id);
    CHECK(back[i].x.query == pairs[i].x.query);
    CHECK(back[i].x_prime.query == pairs[i].x_prime.query);
    CHECK(back[i].kind == pairs[i].kind);
  }
  const auto stats = statistic_pairs("laplace");
  const auto back2 = pairs_from_json(pairs_to_json(stats));
  CHECK(back2[3].x_prime.stat == stats[3].x_prime.stat);
  CHECK(back2[3].kind == AdjacencyKind::StatisticPair);
}
