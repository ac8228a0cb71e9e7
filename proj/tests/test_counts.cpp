#include "ctm/counts.hpp"

#include <sstream>

#include "catch_amalgamated.hpp"

using namespace ctm;

namespace {

CountsTable tiny_table() {
  ExplorationPlan plan = ExplorationPlan::full(2);
  CountsTable t = CountsTable::empty(plan);
  t.add(1, 0, "0", 6);
  t.add(1, 0, "1", 6);
  t.add(1, 1, "0", 6);
  t.add(1, 1, "1", 6);
  t.add(2, 0, "0", 1000);
  t.add(2, 0, "00", 7);
  t.stats[0][0] = {36, 12};
  t.stats[0][1] = {36, 12};
  t.stats[1][0] = {10000, 1007};
  t.stats[1][1] = {10000, 0};
  return t;
}

std::string to_text(const CountsTable& t) {
  std::ostringstream os;
  save_counts(t, os);
  return os.str();
}

}  // namespace

TEST_CASE("save format is the documented line layout") {
  std::string text = to_text(tiny_table());
  REQUIRE(text.rfind("ctm-counts v1\n", 0) == 0);
  REQUIRE(text.find("meta max_states=2\n") != std::string::npos);
  REQUIRE(text.find("meta cutoff.2=10\n") != std::string::npos);
  REQUIRE(text.find("meta examined.2.0=10000\n") != std::string::npos);
  REQUIRE(text.find("row 1 0 0 6\n") != std::string::npos);
  REQUIRE(text.find("row 2 0 0 1000\nrow 2 0 00 7\n") != std::string::npos);
}

TEST_CASE("rows are sorted by (n, blank, length, lexicographic)") {
  CountsTable t = tiny_table();
  t.add(2, 0, "1", 3);
  t.stats[1][0].halted += 3;
  std::string text = to_text(t);
  auto p0 = text.find("row 2 0 0 1000");
  auto p1 = text.find("row 2 0 1 3");
  auto p2 = text.find("row 2 0 00 7");
  REQUIRE(p0 < p1);
  REQUIRE(p1 < p2);  // "00" is longer than "1", so it sorts after
}

TEST_CASE("load inverts save bit-exactly") {
  CountsTable t = tiny_table();
  std::istringstream is(to_text(t));
  CountsTable back = load_counts(is);
  REQUIRE(back == t);
  REQUIRE(to_text(back) == to_text(t));
}

TEST_CASE("round trip preserves counts at the 64-bit ceiling") {
  ExplorationPlan plan = ExplorationPlan::full(1);
  CountsTable t = CountsTable::empty(plan);
  t.add(1, 0, "0", UINT64_MAX);
  t.stats[0][0] = {UINT64_MAX, UINT64_MAX};
  std::istringstream is(to_text(t));
  REQUIRE(load_counts(is) == t);
}

TEST_CASE("malformed files are rejected") {
  const std::string good = to_text(tiny_table());

  auto reject = [](std::string text) {
    std::istringstream is(text);
    REQUIRE_THROWS_AS(load_counts(is), std::runtime_error);
  };

  reject("ctm-counts v2\n");                       // version mismatch
  reject("");                                      // empty
  reject(good + "garbage line\n");                 // unknown tag
  reject(good + "row 3 0 0 5\n");                  // row outside declared spaces
  reject(good + "row 2 1 0 0\n");                  // zero count
  reject(good + "row 2 1 2 4\n");                  // bad output alphabet
  {
    // altered count breaks the halted totals
    std::string bad = good;
    auto pos = bad.find("row 2 0 0 1000");
    bad.replace(pos, 14, "row 2 0 0 1001");
    reject(bad);
  }
  {
    // dropped meta key
    std::string bad = good;
    auto pos = bad.find("meta seed=0\n");
    bad.erase(pos, 12);
    reject(bad);
  }
  {
    // reordered rows
    std::string bad = good;
    auto a = bad.find("row 1 0 0 6\n");
    bad.insert(a, "row 1 0 1 6\n");
    reject(bad);
  }
}

TEST_CASE("merge sums rows and totals; empty table is the identity") {
  CountsTable t = tiny_table();
  CountsTable empty = CountsTable::empty(t.plan);
  REQUIRE(merge_counts(t, empty) == t);
  REQUIRE(merge_counts(empty, t) == t);

  CountsTable other = CountsTable::empty(t.plan);
  other.add(2, 0, "0", 11);
  other.add(2, 1, "111", 2);
  other.stats[1][0] = {50, 11};
  other.stats[1][1] = {50, 2};

  CountsTable ab = merge_counts(t, other);
  CountsTable ba = merge_counts(other, t);
  REQUIRE(ab == ba);
  REQUIRE(ab.count(2, 0, "0") == 1011);
  REQUIRE(ab.count(2, 1, "111") == 2);
  REQUIRE(ab.stats[1][0].examined == 10050);
  REQUIRE(ab.stats[1][0].halted == 1018);
}

TEST_CASE("merge rejects incompatible plans") {
  CountsTable t = tiny_table();
  ExplorationPlan other_plan = ExplorationPlan::full(2);
  other_plan.step_cutoff[1] = 99;
  CountsTable other = CountsTable::empty(other_plan);
  REQUIRE_THROWS_AS(merge_counts(t, other), std::invalid_argument);

  ExplorationPlan seeded = ExplorationPlan::full(2);
  seeded.seed = 1;
  REQUIRE_THROWS_AS(merge_counts(t, CountsTable::empty(seeded)),
                    std::invalid_argument);
}

TEST_CASE("plan validation") {
  REQUIRE_THROWS_AS(ExplorationPlan::full(6).validate(), std::invalid_argument);
  REQUIRE_NOTHROW(ExplorationPlan::full(5).validate());
  REQUIRE_NOTHROW(ExplorationPlan::sampled(6, 100, 1).validate());
  REQUIRE_THROWS_AS(ExplorationPlan::sampled(7, 100, 1).validate(),
                    std::invalid_argument);
  ExplorationPlan bad = ExplorationPlan::full(2);
  bad.step_cutoff[0] = 0;
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  ExplorationPlan no_samples = ExplorationPlan::full(2);
  no_samples.mode[1] = ExploreMode::sample;
  REQUIRE_THROWS_AS(no_samples.validate(), std::invalid_argument);
}

TEST_CASE("plan echo and fingerprint") {
  ExplorationPlan p = ExplorationPlan::full(2);
  REQUIRE(p.echo() ==
          "max_states=2 mode.1=full cutoff.1=2 mode.2=full cutoff.2=10 seed=0");
  ExplorationPlan q = p;
  REQUIRE(p.fingerprint() == q.fingerprint());
  q.chunk_size = 123;
  REQUIRE(p.fingerprint() != q.fingerprint());  // work split matters to resume
  REQUIRE(p.result_compatible(q));              // but not to the result
}
