#include <doctest.h>

#include <algorithm>

#include "dml/events.hpp"
#include "dml/rng.hpp"
#include "errcheck.hpp"
#include "fixtures.hpp"

using namespace dml;

TEST_CASE("marginal counts match the toy walkthrough tables") {
  ObservationSet labeled = with_class(fx::toy10(), fx::init10());
  MarginalCounts f1s = marginal_counts(labeled, {0, 2});
  CHECK(f1s.at({0, 0}) == 3);
  CHECK(f1s.at({1, 0}) == 1);
  CHECK(f1s.at({0, 1}) == 2);
  CHECK(f1s.at({1, 1}) == 2);
  CHECK(f1s.at({0, 2}) == 2);
  CHECK(f1s.at({1, 2}) == 0);
  CHECK(f1s.total == 10);

  MarginalCounts f2s = marginal_counts(labeled, {1, 2});
  CHECK(f2s.at({0, 0}) == 3);
  CHECK(f2s.at({1, 0}) == 1);
  CHECK(f2s.at({0, 2}) == 1);
  CHECK(f2s.at({1, 2}) == 1);

  MarginalCounts s = project(f1s, {2});
  REQUIRE(s.counts.size() == 3);
  CHECK(s.counts[0] == 4);
  CHECK(s.counts[1] == 4);
  CHECK(s.counts[2] == 2);
}

TEST_CASE("single-row counting puts one count in one cell") {
  ObservationSet d;
  d.schema.names = {"A", "B", "S"};
  d.schema.cards = {3, 2, 2};
  d.schema.class_col = 2;
  d.rows = {{2, 1, 0}};
  MarginalCounts m = marginal_counts(d, {0, 1});
  long long sum = 0;
  for (long long c : m.counts) sum += c;
  CHECK(sum == 1);
  CHECK(m.at({2, 1}) == 1);
  CHECK(m.total == 1);
}

TEST_CASE("24-row sample marginals") {
  ObservationSet d = fx::select24();
  MarginalCounts ab = marginal_counts(d, {0, 1});
  CHECK(ab.at({0, 0}) == 1);
  CHECK(ab.at({0, 1}) == 17);
  CHECK(ab.at({1, 0}) == 3);
  CHECK(ab.at({1, 1}) == 3);

  MarginalCounts abc = marginal_counts(d, {0, 1, 2});
  MarginalCounts c = project(abc, {2});
  CHECK(c.counts[0] == 7);
  CHECK(c.counts[1] == 17);
  CHECK(c.total == 24);
}

TEST_CASE("projection onto the full variable set is the identity") {
  MarginalCounts abc = marginal_counts(fx::select24(), {0, 1, 2});
  MarginalCounts same = project(abc, {0, 1, 2});
  CHECK(same.counts == abc.counts);
  CHECK(same.vars == abc.vars);
}

TEST_CASE("projection commutes with direct counting") {
  ObservationSet d = fx::select24();
  std::vector<std::vector<int>> supersets = {{0, 1, 2}, {0, 1}, {1, 2}, {0, 2}};
  for (const auto& sup : supersets) {
    MarginalCounts big = marginal_counts(d, sup);
    for (int v : sup) {
      MarginalCounts direct = marginal_counts(d, {v});
      MarginalCounts via = project(big, {v});
      CHECK(via.counts == direct.counts);
    }
  }
}

TEST_CASE("empty variable subset yields the one-cell total table") {
  MarginalCounts t = marginal_counts(fx::select24(), {});
  REQUIRE(t.counts.size() == 1);
  CHECK(t.counts[0] == 24);
  CHECK(t.total == 24);
}

TEST_CASE("counting is invariant under row order") {
  ObservationSet d = fx::select24();
  ObservationSet shuffled = d;
  Rng rng(17);
  rng.shuffle(shuffled.rows);
  CHECK(marginal_counts(d, {0, 1}).counts ==
        marginal_counts(shuffled, {0, 1}).counts);
}

TEST_CASE("cell sums equal N") {
  ObservationSet d = fx::select24();
  for (const auto& vars :
       std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 1}, {0, 1, 2}}) {
    MarginalCounts m = marginal_counts(d, vars);
    long long sum = 0;
    for (long long c : m.counts) sum += c;
    CHECK(sum == d.n());
  }
}

TEST_CASE("validation rejects malformed observation sets") {
  ObservationSet d = fx::toy10();
  SUBCASE("ragged row") {
    d.rows[3].pop_back();
    CHECK_THROWS_AS(validate(d), Error);
  }
  SUBCASE("value outside cardinality") {
    d.rows[0][0] = 2;
    CHECK_THROWS_AS(validate(d), Error);
  }
  SUBCASE("missing marker in a feature column") {
    d.rows[0][0] = kMissing;
    CHECK_THROWS_AS(validate(d), Error);
  }
  SUBCASE("empty set") {
    d.rows.clear();
    CHECK_THROWS_AS(validate(d), Error);
  }
}

TEST_CASE("counting the class column of unlabeled rows is an error") {
  ObservationSet d = fx::toy10();
  CHECK_ERRC(marginal_counts(d, {2}), Errc::MissingValue);
  CHECK_ERRC(marginal_counts(d, {0, 2}), Errc::MissingValue);
}

TEST_CASE("projection onto a non-subset is an error") {
  MarginalCounts ab = marginal_counts(fx::select24(), {0, 1});
  CHECK_ERRC(project(ab, {2}), Errc::NotSubset);
}

TEST_CASE("labeled and unlabeled predicates") {
  ObservationSet d = fx::toy10();
  CHECK(d.fully_unlabeled());
  CHECK_FALSE(d.fully_labeled());
  ObservationSet l = with_class(d, fx::init10());
  CHECK(l.fully_labeled());
  CHECK_FALSE(l.fully_unlabeled());
  l.rows[4][2] = kMissing;
  CHECK_FALSE(l.fully_labeled());
  CHECK_FALSE(l.fully_unlabeled());
}

TEST_CASE("class cardinality widening keeps data intact") {
  ObservationSet d = with_class_cardinality(fx::toy10(), 5);
  CHECK(d.schema.k() == 5);
  CHECK(d.rows == fx::toy10().rows);
  CHECK_THROWS_AS(with_class_cardinality(with_class(fx::toy10(), fx::init10()), 2),
                  Error);
}
