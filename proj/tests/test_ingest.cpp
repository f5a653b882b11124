#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gli/ingest.hpp"

using namespace gli;

TEST_CASE("contact parsing: well-formed, empty, malformed") {
  std::istringstream in("0 A B\n20 A B\n3620 B C\n");
  auto events = parse_contacts(in);
  REQUIRE(events.size() == 3);
  CHECK(events[2].t == 3620);
  CHECK(events[2].u == "B");

  std::istringstream empty("");
  CHECK(parse_contacts(empty).empty());

  std::istringstream bad("x y\n");
  CHECK_THROWS_AS(parse_contacts(bad, /*strict=*/true), Error);

  std::istringstream bad2("x y\n10 A B\n");
  std::vector<std::string> errors;
  auto ok = parse_contacts(bad2, false, &errors);
  CHECK(ok.size() == 1);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("line 1") != std::string::npos);

  std::istringstream comments("# header\n5 A B extra columns\n");
  auto ev = parse_contacts(comments);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].t == 5);
}

TEST_CASE("aggregation: hourly snapshots over a shared node universe") {
  std::istringstream in("0 A B\n20 A B\n3620 B C\n");
  auto events = parse_contacts(in);
  std::vector<long long> starts;
  auto g = aggregate_snapshots(events, SnapshotSpec{}, &starts);
  REQUIRE(g.d() == 2);
  CHECK(g.n == 3);
  REQUIRE(g.node_ids.has_value());
  CHECK((*g.node_ids)[0] == "A");
  CHECK(starts == std::vector<long long>{0, 3600});
  // layer 0: edge AB; layer 1: edge BC
  CHECK(g.layers[0].at(0, 1));
  CHECK(g.layers[0].edge_count() == 1);
  CHECK(g.layers[1].at(1, 2));
  CHECK(g.layers[1].edge_count() == 1);
}

TEST_CASE("aggregation: one window and the min-events threshold") {
  std::istringstream in("0 A B\n30 A B\n90 B C\n");
  auto events = parse_contacts(in);
  auto g = aggregate_snapshots(events, SnapshotSpec{});
  CHECK(g.d() == 1);

  SnapshotSpec strict;
  strict.min_events = 3;
  auto g2 = aggregate_snapshots(events, strict);
  CHECK(g2.layers[0].edge_count() == 0);  // AB has only 2 contacts

  SnapshotSpec two;
  two.min_events = 2;
  auto g3 = aggregate_snapshots(events, two);
  CHECK(g3.layers[0].at(0, 1));
  CHECK(!g3.layers[0].at(1, 2));
}

TEST_CASE("aggregation is order-independent") {
  std::istringstream in("0 A B\n20 C D\n3620 B C\n7300 D A\n40 B D\n");
  auto events = parse_contacts(in);
  auto g1 = aggregate_snapshots(events, SnapshotSpec{});
  std::mt19937 rng(3);
  std::shuffle(events.begin(), events.end(), rng);
  auto g2 = aggregate_snapshots(events, SnapshotSpec{});
  REQUIRE(g1.d() == g2.d());
  CHECK(*g1.node_ids == *g2.node_ids);
  for (int l = 0; l < g1.d(); ++l)
    for (int i = 0; i < g1.n; ++i)
      for (int j = i + 1; j < g1.n; ++j) CHECK(g1.layers[l].at(i, j) == g2.layers[l].at(i, j));
}

TEST_CASE("empty windows are dropped unless kept") {
  std::istringstream in("0 A B\n7300 A B\n");
  auto events = parse_contacts(in);
  std::vector<long long> starts;
  auto g = aggregate_snapshots(events, SnapshotSpec{}, &starts);
  CHECK(g.d() == 2);
  CHECK(starts == std::vector<long long>{0, 7200});

  SnapshotSpec keep;
  keep.keep_empty = true;
  auto g2 = aggregate_snapshots(events, keep, &starts);
  CHECK(g2.d() == 3);
  CHECK(starts == std::vector<long long>{0, 3600, 7200});
  CHECK(g2.layers[1].edge_count() == 0);
}
