#include "ctm/explore.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "oracle.hpp"

using namespace ctm;

namespace {

std::string table_text(const CountsTable& t) {
  std::ostringstream os;
  save_counts(t, os);
  return os.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ExplorationPlan plan_22(std::uint64_t cutoff = 10) {
  ExplorationPlan p = ExplorationPlan::full(2);
  p.step_cutoff[1] = cutoff;
  return p;
}

}  // namespace

TEST_CASE("full (1,2) table matches the independent oracle") {
  CountsTable t = explore(ExplorationPlan::full(1));
  oracle::SpaceCensus c = oracle::census(1, 10);

  REQUIRE(t.stats[0][0].examined == 36);
  REQUIRE(t.stats[0][1].examined == 36);
  REQUIRE(t.stats[0][0].halted == c.halted[0]);
  REQUIRE(t.stats[0][1].halted == c.halted[1]);
  REQUIRE(c.halted[0] == 12);  // frozen from the census

  std::uint64_t oracle_rows = 0;
  for (const auto& [key, count] : c.rows) {
    REQUIRE(t.count(1, static_cast<std::uint8_t>(key.first), key.second) == count);
    ++oracle_rows;
  }
  REQUIRE(t.rows.size() == oracle_rows);
  REQUIRE(t.count(1, 0, "0") == 6);
  REQUIRE(t.count(1, 0, "1") == 6);
}

TEST_CASE("full (2,2) table matches the independent oracle") {
  CountsTable t = explore(plan_22());
  oracle::SpaceCensus c = oracle::census(2, 10);

  for (const auto& [key, count] : c.rows)
    REQUIRE(t.count(2, static_cast<std::uint8_t>(key.first), key.second) == count);
  std::uint64_t n2_rows = 0;
  for (const auto& [key, count] : t.rows)
    if (key.states == 2) ++n2_rows;
  REQUIRE(n2_rows == c.rows.size());

  REQUIRE(t.count(2, 0, "0") == 1000);
  REQUIRE(t.stats[1][0].halted == 3044);  // regression constant
  REQUIRE(t.stats[1][1].halted == 3044);
  REQUIRE(t.stats[1][0].halted > 1000);
  REQUIRE(t.stats[1][0].halted < 10000);
  REQUIRE(c.max_halting_steps == 6);  // cutoff 10 is exact for (2,2)
}

TEST_CASE("prefilter on/off and blank symmetry on/off leave the table unchanged") {
  ExplorationPlan base = plan_22();
  CountsTable reference = explore(base);

  ExplorationPlan no_prefilter = base;
  no_prefilter.prefilter = false;
  REQUIRE(explore(no_prefilter) == reference);

  ExplorationPlan no_symmetry = base;
  no_symmetry.use_blank_symmetry = false;
  REQUIRE(explore(no_symmetry) == reference);
}

TEST_CASE("blank and reversal symmetries hold on the simulated (2,2) table") {
  ExplorationPlan p = plan_22();
  p.use_blank_symmetry = false;  // simulate both blanks for real
  CountsTable t = explore(p);
  for (const auto& [key, c] : t.rows) {
    std::string comp = key.output;
    for (char& ch : comp) ch ^= 1;
    REQUIRE(t.count(key.states, key.blank ^ 1, comp) == c);
    std::string rev(key.output.rbegin(), key.output.rend());
    REQUIRE(t.count(key.states, key.blank, rev) == c);
  }
}

TEST_CASE("raising the cutoff never lowers a count") {
  CountsTable low = explore(plan_22(3));
  CountsTable high = explore(plan_22(1000));
  for (const auto& [key, c] : low.rows)
    REQUIRE(high.count(key.states, key.blank, key.output) >= c);
  // coverage guarantee: length-1 outputs are final at cutoff 4 = 2^1*1*2
  CountsTable four = explore(plan_22(4));
  for (const auto& [key, c] : high.rows)
    if (key.output.size() == 1)
      REQUIRE(four.count(key.states, key.blank, key.output) == c);
}

TEST_CASE("split_range and partition_ranks") {
  auto one = partition_ranks(1, 1);
  REQUIRE(one == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 36}});

  auto five = partition_ranks(1, 5);
  std::vector<std::uint64_t> sizes;
  for (auto [b, e] : five) sizes.push_back(e - b);
  REQUIRE(sizes == std::vector<std::uint64_t>{8, 7, 7, 7, 7});

  std::mt19937_64 rng(37);
  for (int i = 0; i < 50; ++i) {
    std::uint32_t n = 1 + rng() % 5;
    std::uint64_t workers = 1 + rng() % 64;
    auto parts = partition_ranks(n, workers);
    REQUIRE(parts.size() == workers);
    std::uint64_t expect_begin = 0;
    std::uint64_t lo = UINT64_MAX, hi = 0;
    for (auto [b, e] : parts) {
      REQUIRE(b == expect_begin);  // contiguous and disjoint
      REQUIRE(e >= b);
      expect_begin = e;
      lo = std::min(lo, e - b);
      hi = std::max(hi, e - b);
    }
    REQUIRE(expect_begin == machine_count(n).to_u64());
    REQUIRE(hi - lo <= 1);
  }
}

TEST_CASE("worker count never changes the table") {
  ExplorationPlan p = plan_22();
  p.chunk_size = 512;  // force many chunks
  CountsTable w1 = explore(p, ExploreOptions{1});
  CountsTable w4 = explore(p, ExploreOptions{4});
  CountsTable w13 = explore(p, ExploreOptions{13});
  REQUIRE(table_text(w1) == table_text(w4));
  REQUIRE(table_text(w1) == table_text(w13));
}

TEST_CASE("per-partition tables merge to the whole-run table") {
  ExplorationPlan p = plan_22();
  p.use_blank_symmetry = false;  // merge raw partials without derivation
  CountsTable whole = explore(p);

  auto chunk_table = [&](std::uint32_t n, std::uint64_t b, std::uint64_t e) {
    detail::Chunk ch{n, false, b, e};
    detail::PartialCounts pc = detail::process_chunk(p, ch);
    CountsTable t = CountsTable::empty(p);
    detail::merge_partial(t, n, pc);
    return t;
  };

  std::vector<CountsTable> parts;
  parts.push_back(chunk_table(1, 0, 36));
  for (auto [b, e] : partition_ranks(2, 4)) parts.push_back(chunk_table(2, b, e));

  CountsTable fwd = CountsTable::empty(p);
  for (const auto& t : parts) fwd = merge_counts(fwd, t);
  CountsTable rev = CountsTable::empty(p);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it)
    rev = merge_counts(rev, *it);

  REQUIRE(fwd == whole);
  REQUIRE(rev == whole);
}

TEST_CASE("sampled exploration is reproducible and seed-sensitive") {
  ExplorationPlan p = ExplorationPlan::sampled(2, 3000, 99);
  CountsTable a = explore(p, ExploreOptions{1});
  CountsTable b = explore(p, ExploreOptions{7});
  REQUIRE(a == b);
  REQUIRE(a.stats[1][0].examined == 3000);
  REQUIRE(a.stats[1][1].examined == 3000);

  ExplorationPlan q = ExplorationPlan::sampled(2, 3000, 100);
  CountsTable c = explore(q);
  REQUIRE_FALSE(a == c);  // different draw
}

TEST_CASE("sample mode sees roughly the right halting fraction") {
  // (2,2) has 3044/10000 halting computations per blank; a 20k sample is
  // within a few standard errors of that.
  ExplorationPlan p = ExplorationPlan::sampled(2, 20000, 7);
  CountsTable t = explore(p, ExploreOptions{2});
  double frac = static_cast<double>(t.stats[1][0].halted) / 20000.0;
  REQUIRE(frac > 0.28);
  REQUIRE(frac < 0.33);
}

TEST_CASE("interrupt and resume reproduce the uninterrupted table") {
  ExplorationPlan p = plan_22();
  p.chunk_size = 1000;  // 10 chunks for n=2, 1 for n=1
  CountsTable whole = explore(p);

  std::string ckpt = temp_path("ctm_test_ckpt.txt");
  std::remove(ckpt.c_str());

  ExploreOptions stop_opts;
  stop_opts.workers = 3;
  stop_opts.checkpoint_path = ckpt;
  stop_opts.stop_after_chunks = 4;
  CountsTable partial = explore(p, stop_opts);
  REQUIRE(partial.stats[1][0].examined < 10000);

  ExploreOptions resume_opts;
  resume_opts.workers = 2;
  CountsTable resumed = resume_explore(ckpt, resume_opts);
  REQUIRE(resumed == whole);
  REQUIRE(table_text(resumed) == table_text(whole));
  std::remove(ckpt.c_str());
}

TEST_CASE("periodic checkpoints allow resume after a simulated crash") {
  ExplorationPlan p = plan_22();
  p.chunk_size = 700;
  CountsTable whole = explore(p);

  std::string ckpt = temp_path("ctm_test_ckpt2.txt");
  std::remove(ckpt.c_str());

  ExploreOptions opts;
  opts.workers = 2;
  opts.checkpoint_path = ckpt;
  opts.checkpoint_every_chunks = 3;
  CountsTable direct = explore(p, opts);
  REQUIRE(direct == whole);

  // the file left behind is a valid mid-run checkpoint; resuming from it
  // must reach the same final table
  CountsTable resumed = resume_explore(ckpt, ExploreOptions{5});
  REQUIRE(resumed == whole);
  std::remove(ckpt.c_str());
}

TEST_CASE("checkpoint refuses a mismatched plan") {
  ExplorationPlan p = plan_22();
  p.chunk_size = 1000;
  std::string ckpt = temp_path("ctm_test_ckpt3.txt");
  std::remove(ckpt.c_str());
  ExploreOptions opts;
  opts.checkpoint_path = ckpt;
  opts.stop_after_chunks = 2;
  explore(p, opts);

  // tamper: change the declared chunk size
  std::ifstream is(ckpt);
  std::stringstream buf;
  buf << is.rdbuf();
  std::string text = buf.str();
  auto pos = text.find("chunk_size=1000");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 15, "chunk_size=1001");
  std::ofstream os(ckpt, std::ios::trunc);
  os << text;
  os.close();
  REQUIRE_THROWS_AS(resume_explore(ckpt, ExploreOptions{}), std::runtime_error);
  std::remove(ckpt.c_str());
}

TEST_CASE("explore validates plans") {
  REQUIRE_THROWS_AS(explore(ExplorationPlan::full(6)), std::invalid_argument);
}
