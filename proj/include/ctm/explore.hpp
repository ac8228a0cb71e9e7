#pragma once
// Mass simulation driver. Splits each space (n,2) into contiguous rank
// chunks, processes chunks on a worker pool, and merges results in chunk
// order so that progress can be checkpointed as "first C chunks done".
// Counts are sums, so the final table is identical for any worker count;
// the in-order merge only matters for checkpoints.
//
// Blank symmetry: swapping the two symbols everywhere is a bijection of
// (n,2) that exchanges the roles of the blanks and complements outputs, so
// a full sweep needs only blank 0; the blank-1 half of the table is derived
// by complementing output strings. Sampled spaces run both blanks directly.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ctm/counts.hpp"
#include "ctm/machine.hpp"
#include "ctm/plan.hpp"
#include "ctm/simulate.hpp"

namespace ctm {

struct ExploreOptions {
  unsigned workers = 1;
  std::string checkpoint_path;                     // empty: no checkpointing
  std::uint64_t checkpoint_every_chunks = 0;       // 0: only on early stop
  std::optional<std::uint64_t> stop_after_chunks;  // merge N chunks, then
                                                   // checkpoint and return
};

// Contiguous [begin,end) intervals covering 0..total-1, sizes differing by
// at most one.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> split_range(
    std::uint64_t total, std::uint64_t parts) {
  if (parts < 1) throw std::invalid_argument("split_range: parts must be >= 1");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(parts);
  const std::uint64_t base = total / parts;
  const std::uint64_t rem = total % parts;
  std::uint64_t begin = 0;
  for (std::uint64_t i = 0; i < parts; ++i) {
    std::uint64_t len = base + (i < rem ? 1 : 0);
    out.emplace_back(begin, begin + len);
    begin += len;
  }
  return out;
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> partition_ranks(
    std::uint32_t n, std::uint64_t workers) {
  BigUint total = machine_count(n);
  if (!total.fits_u64())
    throw std::invalid_argument("partition_ranks: space too large to enumerate");
  return split_range(total.to_u64(), workers);
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform rank in [0, bound) for sample i of space n. Counter-based so the
// draw depends only on (seed, n, i), never on worker or chunk layout.
inline std::uint64_t sample_rank(std::uint64_t seed, std::uint32_t n,
                                 std::uint64_t i, std::uint64_t bound) {
  std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * (n + 1));
  s ^= i * 0xD1B54A32D192ED03ull;
  const std::uint64_t reject_below = (0 - bound) % bound;  // Lemire
  for (;;) {
    unsigned __int128 m =
        static_cast<unsigned __int128>(splitmix64(s)) * bound;
    if (static_cast<std::uint64_t>(m) >= reject_below)
      return static_cast<std::uint64_t>(m >> 64);
  }
}

struct Chunk {
  std::uint32_t n = 1;
  bool sampled = false;
  std::uint64_t begin = 0, end = 0;  // ranks (full) or sample indices
};

inline std::vector<Chunk> make_chunks(const ExplorationPlan& plan) {
  std::vector<Chunk> chunks;
  for (std::uint32_t n = 1; n <= plan.max_states; ++n) {
    const bool sampled = plan.mode[n - 1] == ExploreMode::sample;
    const std::uint64_t total =
        sampled ? plan.samples[n - 1] : machine_count(n).to_u64();
    const std::uint64_t parts =
        total == 0 ? 1 : (total + plan.chunk_size - 1) / plan.chunk_size;
    for (auto [b, e] : split_range(total, parts))
      chunks.push_back(Chunk{n, sampled, b, e});
  }
  return chunks;
}

struct PartialCounts {
  std::map<CountKey, std::uint64_t> rows;
  std::array<SpaceStats, 2> stats{};  // for the chunk's own n
};

inline PartialCounts process_chunk(const ExplorationPlan& plan, const Chunk& ch) {
  PartialCounts out;
  const std::uint32_t n = ch.n;
  const std::uint64_t cutoff = plan.step_cutoff[n - 1];
  const bool both_blanks = ch.sampled || !plan.use_blank_symmetry;
  const std::uint64_t space = machine_count(n).to_u64();

  Machine m;
  Simulator sim[2];
  for (std::uint64_t i = ch.begin; i < ch.end; ++i) {
    const std::uint64_t t =
        ch.sampled ? sample_rank(plan.seed, n, i, space) : i;
    unrank_into(MachineIndex{n, t}, m);
    const bool no_halt = plan.prefilter && has_no_halt_transition(m);
    const int blank_hi = both_blanks ? 1 : 0;
    for (int blank = 0; blank <= blank_hi; ++blank) {
      SpaceStats& st = out.stats[blank];
      ++st.examined;
      if (plan.prefilter &&
          (no_halt || is_initial_self_loop(m, static_cast<std::uint8_t>(blank))))
        continue;  // provably non-halting; counts as examined, never halts
      SimOutcome oc = sim[blank].run(
          m, SimConfig{static_cast<std::uint8_t>(blank), cutoff});
      if (oc.halted()) {
        ++out.rows[CountKey{n, static_cast<std::uint8_t>(blank), oc.output}];
        ++st.halted;
      }
    }
  }
  return out;
}

inline void merge_partial(CountsTable& table, std::uint32_t n,
                          const PartialCounts& p) {
  for (const auto& [key, c] : p.rows) table.add(key.states, key.blank, key.output, c);
  for (int b = 0; b < 2; ++b) {
    table.stats[n - 1][b].examined = checked_add(
        table.stats[n - 1][b].examined, p.stats[b].examined, "examined totals");
    table.stats[n - 1][b].halted = checked_add(
        table.stats[n - 1][b].halted, p.stats[b].halted, "halted totals");
  }
}

// Fill in the blank-1 half of every fully swept space from the blank-0 half.
inline void derive_blank1(CountsTable& table) {
  const ExplorationPlan& plan = table.plan;
  std::map<CountKey, std::uint64_t> derived;
  for (const auto& [key, c] : table.rows) {
    if (plan.mode[key.states - 1] == ExploreMode::full) {
      std::string comp = key.output;
      for (char& ch : comp) ch ^= 1;  // '0' <-> '1'
      derived.emplace(CountKey{key.states, 1, std::move(comp)}, c);
    }
  }
  for (auto& [key, c] : derived) table.rows[key] = c;
  for (std::uint32_t n = 1; n <= plan.max_states; ++n)
    if (plan.mode[n - 1] == ExploreMode::full)
      table.stats[n - 1][1] = table.stats[n - 1][0];
}

inline void write_checkpoint(const std::string& path, const ExplorationPlan& plan,
                             std::uint64_t chunks_done, const CountsTable& table) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
    os << "ctm-checkpoint v1\n";
    os << "meta fingerprint=" << plan.fingerprint() << "\n";
    os << "meta chunks_done=" << chunks_done << "\n";
    os << "meta use_blank_symmetry=" << (plan.use_blank_symmetry ? 1 : 0) << "\n";
    os << "meta prefilter=" << (plan.prefilter ? 1 : 0) << "\n";
    os << "meta chunk_size=" << plan.chunk_size << "\n";
    save_counts(table, os);
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot replace checkpoint: " + path);
}

struct CheckpointState {
  ExplorationPlan plan;
  std::uint64_t chunks_done = 0;
  CountsTable table;
};

inline CheckpointState load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line != "ctm-checkpoint v1")
    throw std::runtime_error("checkpoint: unsupported version");
  std::uint64_t fingerprint = 0, chunks_done = 0, chunk_size = 0;
  int sym = -1, pre = -1;
  for (int i = 0; i < 5; ++i) {
    if (!std::getline(is, line)) throw std::runtime_error("checkpoint: truncated");
    std::istringstream ls(line);
    std::string tag, kv;
    ls >> tag >> kv;
    auto eq = kv.find('=');
    if (tag != "meta" || eq == std::string::npos)
      throw std::runtime_error("checkpoint: malformed header");
    std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
    if (k == "fingerprint") fingerprint = parse_u64(v, "fingerprint");
    else if (k == "chunks_done") chunks_done = parse_u64(v, "chunks_done");
    else if (k == "use_blank_symmetry") sym = static_cast<int>(parse_u64(v, "sym"));
    else if (k == "prefilter") pre = static_cast<int>(parse_u64(v, "prefilter"));
    else if (k == "chunk_size") chunk_size = parse_u64(v, "chunk_size");
    else throw std::runtime_error("checkpoint: unknown header key " + k);
  }
  if (sym < 0 || pre < 0 || chunk_size == 0)
    throw std::runtime_error("checkpoint: incomplete header");
  CheckpointState st;
  st.table = load_counts(is);
  st.plan = st.table.plan;
  st.plan.use_blank_symmetry = sym != 0;
  st.plan.prefilter = pre != 0;
  st.plan.chunk_size = chunk_size;
  st.table.plan = st.plan;
  st.chunks_done = chunks_done;
  if (st.plan.fingerprint() != fingerprint)
    throw std::runtime_error("checkpoint: fingerprint mismatch");
  return st;
}

inline CountsTable explore_impl(const ExplorationPlan& plan,
                                const ExploreOptions& opts,
                                std::uint64_t start_chunk, CountsTable table) {
  plan.validate();
  const std::vector<Chunk> chunks = make_chunks(plan);
  const std::uint64_t total = chunks.size();
  if (start_chunk > total)
    throw std::runtime_error("explore: checkpoint beyond plan's chunk count");

  std::uint64_t limit = total;
  if (opts.stop_after_chunks)
    limit = std::min(total, start_chunk + *opts.stop_after_chunks);

  std::mutex mu;
  std::condition_variable cv;
  std::map<std::uint64_t, PartialCounts> done;
  std::atomic<std::uint64_t> next{start_chunk};
  std::atomic<bool> stop{false};

  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t i = next.fetch_add(1);
        if (i >= total || stop.load()) break;
        PartialCounts p = process_chunk(plan, chunks[i]);
        {
          std::lock_guard<std::mutex> lock(mu);
          done.emplace(i, std::move(p));
        }
        cv.notify_all();
      }
    });

  std::uint64_t merged = start_chunk;
  {
    std::unique_lock<std::mutex> lock(mu);
    while (merged < limit) {
      cv.wait(lock, [&] { return done.count(merged) != 0; });
      merge_partial(table, chunks[merged].n, done.at(merged));
      done.erase(merged);
      ++merged;
      if (!opts.checkpoint_path.empty() && opts.checkpoint_every_chunks != 0 &&
          (merged - start_chunk) % opts.checkpoint_every_chunks == 0 &&
          merged < total)
        write_checkpoint(opts.checkpoint_path, plan, merged, table);
    }
  }
  if (merged < total) stop.store(true);
  for (std::thread& th : pool) th.join();

  if (merged < total) {
    if (opts.checkpoint_path.empty())
      throw std::invalid_argument("explore: early stop needs a checkpoint path");
    write_checkpoint(opts.checkpoint_path, plan, merged, table);
    return table;  // partial; resume via resume_explore
  }

  if (plan.use_blank_symmetry) derive_blank1(table);
  return table;
}

}  // namespace detail

inline CountsTable explore(const ExplorationPlan& plan,
                           const ExploreOptions& opts = {}) {
  return detail::explore_impl(plan, opts, 0, CountsTable::empty(plan));
}

inline CountsTable resume_explore(const std::string& checkpoint_path,
                                  const ExploreOptions& opts = {}) {
  detail::CheckpointState st = detail::load_checkpoint(checkpoint_path);
  return detail::explore_impl(st.plan, opts, st.chunks_done, std::move(st.table));
}

}  // namespace ctm
