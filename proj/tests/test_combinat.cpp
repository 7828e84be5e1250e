#include <doctest.h>

#include <functional>
#include <numeric>

#include "noncollide/combinat.hpp"
#include "noncollide/walks.hpp"
#include "support.hpp"

using namespace noncollide;
using noncollide::testing::thrown_kind;

namespace {

const SSYT kFigureTableau(Partition({4, 3, 2}), {{2, 3, 4, 6}, {4, 4, 6}, {5, 6}}, 6);

WalkRecord figure_walk() {
  return WalkRecord(canonical_start(4),
                    {{1, -1, 1, -1, -1, 1}, {1, 1, -1, -1, 1, -1}, {1, 1, 1, -1, 1, -1}, {1, 1, 1, 1, 1, -1}}, 6);
}

// Every partition fitting in a rows x cols box.
void for_each_in_box(int rows, int cols, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> parts;
  std::function<void(int)> rec = [&](int max_part) {
    fn(parts);
    if (static_cast<int>(parts.size()) == rows) return;
    for (int p = 1; p <= max_part; ++p) {
      parts.push_back(p);
      rec(p);
      parts.pop_back();
    }
  };
  rec(cols);
}

}  // namespace

TEST_CASE("partition canonical form") {
  CHECK(Partition({3, 1, 0, 0}) == Partition({3, 1}));
  CHECK(Partition({3, 1}).size() == 4);
  CHECK(Partition({2, 2}).padded(4) == std::vector<int>{2, 2, 0, 0});
  CHECK(thrown_kind([] { Partition({1, 2}); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { Partition({2, -1}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("conjugate examples") {
  CHECK(conjugate(Partition({3, 3, 2, 1})) == Partition({4, 3, 2}));
  CHECK(conjugate(Partition()) == Partition());
  CHECK(conjugate(Partition({5})) == Partition({1, 1, 1, 1, 1}));
}

TEST_CASE("conjugate is an involution inside the 12 x 12 box") {
  std::size_t seen = 0, bad = 0;
  for_each_in_box(12, 12, [&](const std::vector<int>& parts) {
    const Partition p(parts);
    const Partition c = conjugate(p);
    if (conjugate(c) != p || c.size() != p.size()) ++bad;
    ++seen;
  });
  CHECK(seen == 2704156);
  CHECK(bad == 0);
}

TEST_CASE("walk_to_tableau examples") {
  const SSYT t = walk_to_tableau(figure_walk());
  CHECK(t == kFigureTableau);
  CHECK(t.at(1, 3) == 4);
  CHECK(t.at(3, 1) == 5);

  const SSYT empty = walk_to_tableau(WalkRecord({0}, {{1, 1}}, 2));
  CHECK(empty.shape().empty());
  CHECK(empty.max_entry() == 2);

  const SSYT two = walk_to_tableau(WalkRecord({0, 2}, {{-1}, {-1}}, 1));
  CHECK(two.shape() == Partition({2}));
  CHECK(two.rows() == std::vector<std::vector<int>>{{1, 1}});
}

TEST_CASE("walk_to_tableau rejects bad input") {
  CHECK(thrown_kind([] { walk_to_tableau(WalkRecord({2, 4}, {{1}, {1}}, 1)); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { walk_to_tableau(WalkRecord({0, 2}, {{1, 1}, {-1, 1}}, 2)); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { WalkRecord({1, 2}, {{1}, {1}}, 1); }) == ErrorKind::Parity);
}

TEST_CASE("tableau_to_walk examples") {
  const SSYT empty(Partition(), {}, 2);
  CHECK(tableau_to_walk(empty, 1, 2).steps() == std::vector<std::vector<int>>{{1, 1}});

  const SSYT row(Partition({2}), {{1, 1}}, 1);
  CHECK(tableau_to_walk(row, 2, 1).steps() == std::vector<std::vector<int>>{{-1}, {-1}});

  CHECK(tableau_to_walk(kFigureTableau, 4, 6) == figure_walk());
}

TEST_CASE("tableau_to_walk rejects unrealizable fillings") {
  const SSYT wide(Partition({3}), {{1, 1, 1}}, 1);
  CHECK(thrown_kind([&] { tableau_to_walk(wide, 2, 1); }) == ErrorKind::NotRealizable);
  const SSYT tall(Partition({1}), {{3}}, 3);
  CHECK(thrown_kind([&] { tableau_to_walk(tall, 1, 2); }) == ErrorKind::NotRealizable);
}

TEST_CASE("bijection round trip over every N=2, T=3 walk") {
  const std::vector<long> start = canonical_start(2);
  std::size_t walks = 0;
  for (const auto& end : reachable_endpoints(start, 3)) {
    for (const WalkRecord& w : enumerate_vicious(LatticeConfig(start), end, 3)) {
      const SSYT t = walk_to_tableau(w);
      CHECK(tableau_to_walk(t, 2, 3) == w);
      CHECK(t.shape() == endpoints_to_partition(w.endpoint(), 3));
      ++walks;
    }
  }
  CHECK(walks == build_count_table(start, 3).surviving());
}

TEST_CASE("SSYT construction validates the filling") {
  CHECK(thrown_kind([] { SSYT(Partition({2}), {{2, 1}}, 2); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { SSYT(Partition({1, 1}), {{1}, {1}}, 2); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { SSYT(Partition({1}), {{3}}, 2); }) == ErrorKind::InvalidArgument);
  CHECK(thrown_kind([] { SSYT(Partition({2}), {{1}}, 2); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("enumerate_ssyt examples") {
  const auto two = enumerate_ssyt(Partition({2}), 2);
  REQUIRE(two.size() == 3);
  CHECK(two[0].rows()[0] == std::vector<int>{1, 1});
  CHECK(two[1].rows()[0] == std::vector<int>{1, 2});
  CHECK(two[2].rows()[0] == std::vector<int>{2, 2});
  CHECK(enumerate_ssyt(Partition({2, 1}), 3).size() == 8);
  CHECK(enumerate_ssyt(Partition({1, 1, 1}), 2).empty());
  CHECK(enumerate_ssyt(Partition(), 0).size() == 1);
  CHECK(enumerate_ssyt(Partition({4, 3, 2}), 6).size() == 5880);
}

TEST_CASE("SSYT counts grow with the alphabet and exponents sum to the size") {
  for_each_in_box(4, 4, [](const std::vector<int>& parts) {
    const Partition shape(parts);
    std::size_t prev = 0;
    for (int m = 0; m <= 5; ++m) {
      const auto all = enumerate_ssyt(shape, m);
      CHECK(all.size() == count_ssyt(shape, m));
      CHECK(all.size() >= prev);
      if (static_cast<int>(shape.length()) > m) CHECK(all.empty());
      for (const SSYT& t : all) {
        const auto e = monomial_exponents(t, m);
        CHECK(std::accumulate(e.begin(), e.end(), 0) == shape.size());
      }
      prev = all.size();
    }
  });
}

TEST_CASE("monomial_exponents examples") {
  CHECK(monomial_exponents(kFigureTableau, 6) == std::vector<int>{0, 1, 1, 3, 1, 3});
  CHECK(monomial_exponents(SSYT(Partition(), {}, 0), 3) == std::vector<int>{0, 0, 0});
  CHECK(monomial_exponents(SSYT(Partition({2}), {{1, 1}}, 2), 2) == std::vector<int>{2, 0});
}

TEST_CASE("endpoints_to_partition") {
  const std::vector<long> y{0, 2, 6, 10};
  CHECK(endpoints_to_partition(y, 6) == Partition({4, 3, 2}));
  const std::vector<long> right{5};
  CHECK(endpoints_to_partition(right, 5).empty());
  const std::vector<long> odd{1, 2};
  CHECK(thrown_kind([&] { endpoints_to_partition(odd, 2); }) == ErrorKind::Parity);
  const std::vector<long> far{-4};
  CHECK(thrown_kind([&] { endpoints_to_partition(far, 2); }) == ErrorKind::Unreachable);
  const std::vector<long> crossed{2, 2};
  CHECK(thrown_kind([&] { endpoints_to_partition(crossed, 2); }) == ErrorKind::Unreachable);
}
