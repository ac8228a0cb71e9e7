#pragma once
// Halting-computation count tables: for each (n, blank, output string) the
// number of machines in (n,2) that halt on that blank producing that output,
// plus how many computations were examined and how many halted. These tables
// are the persisted artifact of an exploration; everything downstream (the
// measures, the complexity estimates) is a fold over them.
//
// On-disk format (UTF-8, line oriented, bit-exact round trip):
//   ctm-counts v1
//   meta <key>=<value>
//   row <n> <blank> <output> <count>
// Rows are sorted by (n, blank, output length, output lexicographic).

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctm/plan.hpp"
#include "ctm/version.hpp"

namespace ctm {

struct CountKey {
  std::uint32_t states = 1;
  std::uint8_t blank = 0;
  std::string output;

  friend bool operator==(const CountKey&, const CountKey&) = default;
  friend bool operator<(const CountKey& a, const CountKey& b) {
    if (a.states != b.states) return a.states < b.states;
    if (a.blank != b.blank) return a.blank < b.blank;
    if (a.output.size() != b.output.size())
      return a.output.size() < b.output.size();
    return a.output < b.output;
  }
};

struct SpaceStats {
  std::uint64_t examined = 0;  // computations looked at (incl. prefiltered)
  std::uint64_t halted = 0;    // computations that halted within the cutoff

  friend bool operator==(const SpaceStats&, const SpaceStats&) = default;
};

struct CountsTable {
  ExplorationPlan plan;
  std::string tool_version = kToolVersion;
  std::map<CountKey, std::uint64_t> rows;
  std::vector<std::array<SpaceStats, 2>> stats;  // [n-1][blank]

  static CountsTable empty(const ExplorationPlan& p) {
    CountsTable t;
    t.plan = p;
    t.stats.assign(p.max_states, {});
    return t;
  }

  std::uint64_t count(std::uint32_t n, std::uint8_t blank,
                      const std::string& output) const {
    auto it = rows.find(CountKey{n, blank, output});
    return it == rows.end() ? 0 : it->second;
  }

  void add(std::uint32_t n, std::uint8_t blank, const std::string& output,
           std::uint64_t c) {
    if (c == 0) return;
    std::uint64_t& slot = rows[CountKey{n, blank, output}];
    if (slot > UINT64_MAX - c) throw std::overflow_error("counts: row overflow");
    slot += c;
  }

  friend bool operator==(const CountsTable& a, const CountsTable& b) {
    return a.plan.result_compatible(b.plan) && a.tool_version == b.tool_version &&
           a.rows == b.rows && a.stats == b.stats;
  }
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b,
                                 const char* what) {
  if (a > UINT64_MAX - b) throw std::overflow_error(what);
  return a + b;
}

inline std::uint64_t parse_u64(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::runtime_error(std::string("counts file: bad number in ") + what);
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size())
    throw std::runtime_error(std::string("counts file: bad number in ") + what);
  return v;
}

}  // namespace detail

inline void save_counts(const CountsTable& t, std::ostream& os) {
  os << "ctm-counts v1\n";
  os << "meta max_states=" << t.plan.max_states << "\n";
  for (std::uint32_t n = 1; n <= t.plan.max_states; ++n) {
    bool sampled = t.plan.mode[n - 1] == ExploreMode::sample;
    os << "meta mode." << n << "=" << (sampled ? "sample" : "full") << "\n";
    os << "meta cutoff." << n << "=" << t.plan.step_cutoff[n - 1] << "\n";
    if (sampled) os << "meta samples." << n << "=" << t.plan.samples[n - 1] << "\n";
  }
  os << "meta seed=" << t.plan.seed << "\n";
  for (std::uint32_t n = 1; n <= t.plan.max_states; ++n)
    for (int b = 0; b < 2; ++b) {
      os << "meta examined." << n << "." << b << "=" << t.stats[n - 1][b].examined
         << "\n";
      os << "meta halted." << n << "." << b << "=" << t.stats[n - 1][b].halted
         << "\n";
    }
  os << "meta tool_version=" << t.tool_version << "\n";
  for (const auto& [key, c] : t.rows)
    os << "row " << key.states << " " << static_cast<int>(key.blank) << " "
       << key.output << " " << c << "\n";
}

inline void save_counts(const CountsTable& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  save_counts(t, os);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline CountsTable load_counts(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "ctm-counts v1")
    throw std::runtime_error("counts file: unsupported version or not a counts file");

  std::map<std::string, std::string> meta;
  CountsTable t;
  bool seen_row = false;
  CountKey prev;

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "meta") {
      if (seen_row) throw std::runtime_error("counts file: meta after rows");
      std::string kv;
      ls >> kv;
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("counts file: malformed meta line");
      if (!meta.emplace(kv.substr(0, eq), kv.substr(eq + 1)).second)
        throw std::runtime_error("counts file: duplicate meta key");
    } else if (tag == "row") {
      std::string ns, bs, out, cs;
      if (!(ls >> ns >> bs >> out >> cs))
        throw std::runtime_error("counts file: malformed row line");
      std::string extra;
      if (ls >> extra) throw std::runtime_error("counts file: malformed row line");
      CountKey key;
      key.states = static_cast<std::uint32_t>(detail::parse_u64(ns, "row n"));
      std::uint64_t b = detail::parse_u64(bs, "row blank");
      if (b > 1) throw std::runtime_error("counts file: blank must be 0/1");
      key.blank = static_cast<std::uint8_t>(b);
      if (out.empty() || out.find_first_not_of("01") != std::string::npos)
        throw std::runtime_error("counts file: output must be non-empty over 0/1");
      key.output = out;
      std::uint64_t c = detail::parse_u64(cs, "row count");
      if (c == 0) throw std::runtime_error("counts file: zero count row");
      if (seen_row && !(prev < key))
        throw std::runtime_error("counts file: rows out of order");
      prev = key;
      seen_row = true;
      t.rows.emplace(std::move(key), c);
    } else {
      throw std::runtime_error("counts file: unknown line tag '" + tag + "'");
    }
  }

  auto need = [&](const std::string& k) -> const std::string& {
    auto it = meta.find(k);
    if (it == meta.end())
      throw std::runtime_error("counts file: missing meta key " + k);
    return it->second;
  };

  ExplorationPlan& p = t.plan;
  p.max_states =
      static_cast<std::uint32_t>(detail::parse_u64(need("max_states"), "max_states"));
  if (p.max_states < 1) throw std::runtime_error("counts file: bad max_states");
  p.mode.assign(p.max_states, ExploreMode::full);
  p.step_cutoff.assign(p.max_states, 1);
  p.samples.assign(p.max_states, 0);
  std::size_t expected_meta = 2;  // max_states + tool_version
  for (std::uint32_t n = 1; n <= p.max_states; ++n) {
    const std::string& m = need("mode." + std::to_string(n));
    if (m == "full")
      p.mode[n - 1] = ExploreMode::full;
    else if (m == "sample")
      p.mode[n - 1] = ExploreMode::sample;
    else
      throw std::runtime_error("counts file: bad mode." + std::to_string(n));
    p.step_cutoff[n - 1] =
        detail::parse_u64(need("cutoff." + std::to_string(n)), "cutoff");
    expected_meta += 2;
    if (p.mode[n - 1] == ExploreMode::sample) {
      p.samples[n - 1] =
          detail::parse_u64(need("samples." + std::to_string(n)), "samples");
      ++expected_meta;
    }
  }
  p.seed = detail::parse_u64(need("seed"), "seed");
  ++expected_meta;
  t.stats.assign(p.max_states, {});
  for (std::uint32_t n = 1; n <= p.max_states; ++n)
    for (int b = 0; b < 2; ++b) {
      std::string suffix = std::to_string(n) + "." + std::to_string(b);
      t.stats[n - 1][b].examined =
          detail::parse_u64(need("examined." + suffix), "examined");
      t.stats[n - 1][b].halted =
          detail::parse_u64(need("halted." + suffix), "halted");
      expected_meta += 2;
    }
  t.tool_version = need("tool_version");
  if (meta.size() != expected_meta)
    throw std::runtime_error("counts file: unexpected meta keys");

  // Shape checks: rows must live inside the declared spaces and agree with
  // the per-space halting totals.
  std::vector<std::array<std::uint64_t, 2>> sums(p.max_states, {0, 0});
  for (const auto& [key, c] : t.rows) {
    if (key.states < 1 || key.states > p.max_states)
      throw std::runtime_error("counts file: row outside declared spaces");
    sums[key.states - 1][key.blank] =
        detail::checked_add(sums[key.states - 1][key.blank], c, "row totals");
  }
  for (std::uint32_t n = 1; n <= p.max_states; ++n)
    for (int b = 0; b < 2; ++b) {
      if (sums[n - 1][b] != t.stats[n - 1][b].halted)
        throw std::runtime_error("counts file: rows disagree with halted totals");
      if (t.stats[n - 1][b].halted > t.stats[n - 1][b].examined)
        throw std::runtime_error("counts file: halted exceeds examined");
    }
  return t;
}

inline CountsTable load_counts(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return load_counts(is);
}

// Pointwise sum of two tables produced under the same plan over disjoint
// partitions of the work.
inline CountsTable merge_counts(const CountsTable& a, const CountsTable& b) {
  if (!a.plan.result_compatible(b.plan))
    throw std::invalid_argument("merge_counts: incompatible plans");
  CountsTable r = a;
  for (const auto& [key, c] : b.rows) r.add(key.states, key.blank, key.output, c);
  for (std::uint32_t n = 1; n <= r.plan.max_states; ++n)
    for (int blank = 0; blank < 2; ++blank) {
      r.stats[n - 1][blank].examined =
          detail::checked_add(r.stats[n - 1][blank].examined,
                              b.stats[n - 1][blank].examined, "examined totals");
      r.stats[n - 1][blank].halted =
          detail::checked_add(r.stats[n - 1][blank].halted,
                              b.stats[n - 1][blank].halted, "halted totals");
    }
  return r;
}

}  // namespace ctm
