#pragma once
// From count tables to measures:
//
//   m_k(s)  = sum over n <= k of  (#machines outputting s on blank 0 or 1)
//                                 / 2^encoding_length(n)
//   D(k)(s) = (#halting computations in (k,2) with output s, both blanks)
//             / (#detected halting computations in (k,2), both blanks)
//
// m_k over fully swept spaces is exact dyadic arithmetic; D(k) is an exact
// ratio of 64-bit counts. The Coding Theorem reading K(s) = -log2(measure)
// is the only place floating point appears.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ctm/codec.hpp"
#include "ctm/counts.hpp"
#include "ctm/dyadic.hpp"
#include "ctm/simulate.hpp"

namespace ctm {

enum class Exactness { exact, lower_approximation, sampled_estimate };

inline const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::exact: return "exact";
    case Exactness::lower_approximation: return "lower-approximation";
    default: return "sampled-estimate";
  }
}

// Shortlex order on output strings; used everywhere a deterministic string
// order is needed.
struct OutputOrder {
  bool operator()(const std::string& a, const std::string& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

namespace detail {

// Full-mode cutoffs known to capture every halting computation (for n <= 4
// the maximum halting time is known and below these).
inline bool cutoff_known_exact(std::uint32_t n, std::uint64_t cutoff) {
  switch (n) {
    case 1: return cutoff >= 2;
    case 2: return cutoff >= 10;
    case 3: return cutoff >= 30;
    case 4: return cutoff >= 110;
    default: return false;
  }
}

inline Exactness table_exactness(const ExplorationPlan& plan, std::uint32_t n_lo,
                                 std::uint32_t n_hi) {
  bool all_exact = true;
  for (std::uint32_t n = n_lo; n <= n_hi; ++n) {
    if (plan.mode[n - 1] == ExploreMode::sample) return Exactness::sampled_estimate;
    all_exact = all_exact && cutoff_known_exact(n, plan.step_cutoff[n - 1]);
  }
  return all_exact ? Exactness::exact : Exactness::lower_approximation;
}

}  // namespace detail

struct MkDistribution {
  std::uint32_t k = 1;
  Exactness exactness = Exactness::exact;
  std::string provenance;  // plan echo of the source table
  std::map<std::string, Dyadic, OutputOrder> entries;

  const Dyadic* find(const std::string& s) const {
    auto it = entries.find(s);
    return it == entries.end() ? nullptr : &it->second;
  }
};

struct DkDistribution {
  std::uint32_t k = 1;
  std::uint64_t halting_total = 0;  // denominator H
  Exactness exactness = Exactness::exact;
  std::string provenance;
  std::map<std::string, std::uint64_t, OutputOrder> counts;

  double value(const std::string& s) const {
    auto it = counts.find(s);
    if (it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(halting_total);
  }
};

inline MkDistribution compute_mk(const CountsTable& t) {
  const ExplorationPlan& plan = t.plan;
  plan.validate();
  MkDistribution d;
  d.k = plan.max_states;
  d.provenance = plan.echo();
  d.exactness = detail::table_exactness(plan, 1, plan.max_states);
  for (const auto& [key, c] : t.rows) {
    const std::uint32_t n = key.states;
    const std::uint64_t len = encoding_length(n);
    Dyadic term;
    if (plan.mode[n - 1] == ExploreMode::full) {
      term = Dyadic(BigUint(c), len);
    } else {
      // Scale sampled counts by machine_count(n)/samples; estimate only.
      double scaled = static_cast<double>(c) * machine_count(n).to_double() /
                      static_cast<double>(plan.samples[n - 1]);
      term = Dyadic::from_double(std::ldexp(scaled, -static_cast<int>(len)));
    }
    auto [it, fresh] = d.entries.try_emplace(key.output, term);
    if (!fresh) it->second += term;
  }
  return d;
}

inline DkDistribution compute_dk(const CountsTable& t) {
  const ExplorationPlan& plan = t.plan;
  plan.validate();
  DkDistribution d;
  d.k = plan.max_states;
  d.provenance = plan.echo();
  d.exactness = detail::table_exactness(plan, d.k, d.k);
  d.halting_total = detail::checked_add(t.stats[d.k - 1][0].halted,
                                        t.stats[d.k - 1][1].halted, "D(k) H");
  if (d.halting_total == 0)
    throw std::runtime_error("compute_dk: no detected halting computations");
  for (const auto& [key, c] : t.rows) {
    if (key.states != d.k) continue;  // D(k) uses the (k,2) space only
    auto [it, fresh] = d.counts.try_emplace(key.output, 0);
    it->second = detail::checked_add(it->second, c, "D(k) counts");
  }
  return d;
}

// Sum of all entries; < 1 for every exact full-mode table (the deficit is
// the weight of non-halting programs).
inline Dyadic total_measure(const MkDistribution& d) {
  Dyadic sum;
  for (const auto& [s, v] : d.entries) sum += v;
  return sum;
}

inline double coding_theorem_k(double measure) {
  if (!(measure > 0))
    throw std::domain_error("coding_theorem_k: measure must be positive");
  return -std::log2(measure);
}

// K(s) = -log2(measure(s)); nullopt when s is absent from the table, since a
// missing string may only reflect the cutoffs, never probability zero.
inline std::optional<double> complexity(const MkDistribution& d,
                                        const std::string& s) {
  const Dyadic* v = d.find(s);
  if (!v || v->is_zero()) return std::nullopt;
  return v->neg_log2();
}

inline std::optional<double> complexity(const DkDistribution& d,
                                        const std::string& s) {
  auto it = d.counts.find(s);
  if (it == d.counts.end() || it->second == 0) return std::nullopt;
  return std::log2(static_cast<double>(d.halting_total)) -
         std::log2(static_cast<double>(it->second));
}

struct RankRow {
  std::string output;
  double measure_a = 0, measure_b = 0;
  double k_a = 0, k_b = 0;
  double rank_a = 0, rank_b = 0;
};

struct RankComparison {
  double spearman_rho = 0;
  std::size_t n_common = 0;
  std::vector<RankRow> table;  // sorted by rank_a, then shortlex
};

namespace detail {

// Average (fractional) ranks, rank 1 = highest measure.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = avg;
    i = j;
  }
  return ranks;
}

}  // namespace detail

// Spearman rank correlation over the common support, ties resolved by
// average ranks (Pearson correlation of the rank vectors).
inline RankComparison rank_compare(
    const std::map<std::string, double, OutputOrder>& a,
    const std::map<std::string, double, OutputOrder>& b) {
  std::vector<std::string> common;
  for (const auto& [s, v] : a)
    if (b.count(s)) common.push_back(s);
  if (common.size() < 3)
    throw std::invalid_argument("rank_compare: needs >= 3 common strings");

  std::vector<double> va, vb;
  va.reserve(common.size());
  vb.reserve(common.size());
  for (const std::string& s : common) {
    va.push_back(a.at(s));
    vb.push_back(b.at(s));
  }
  std::vector<double> ra = detail::average_ranks(va);
  std::vector<double> rb = detail::average_ranks(vb);

  const std::size_t n = common.size();
  double mean_a = 0, mean_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double cov = 0, var_a = 0, var_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (ra[i] - mean_a) * (rb[i] - mean_b);
    var_a += (ra[i] - mean_a) * (ra[i] - mean_a);
    var_b += (rb[i] - mean_b) * (rb[i] - mean_b);
  }

  RankComparison out;
  out.n_common = n;
  out.spearman_rho = cov / std::sqrt(var_a * var_b);
  out.table.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    RankRow& row = out.table[i];
    row.output = common[i];
    row.measure_a = va[i];
    row.measure_b = vb[i];
    row.k_a = coding_theorem_k(va[i]);
    row.k_b = coding_theorem_k(vb[i]);
    row.rank_a = ra[i];
    row.rank_b = rb[i];
  }
  std::sort(out.table.begin(), out.table.end(),
            [](const RankRow& x, const RankRow& y) {
              if (x.rank_a != y.rank_a) return x.rank_a < y.rank_a;
              if (x.output.size() != y.output.size())
                return x.output.size() < y.output.size();
              return x.output < y.output;
            });
  return out;
}

inline std::map<std::string, double, OutputOrder> measure_values(
    const MkDistribution& d) {
  std::map<std::string, double, OutputOrder> out;
  for (const auto& [s, v] : d.entries) out.emplace(s, v.to_double());
  return out;
}

inline std::map<std::string, double, OutputOrder> measure_values(
    const DkDistribution& d) {
  std::map<std::string, double, OutputOrder> out;
  for (const auto& [s, c] : d.counts)
    out.emplace(s, static_cast<double>(c) / static_cast<double>(d.halting_total));
  return out;
}

template <class DistA, class DistB>
RankComparison rank_compare(const DistA& a, const DistB& b) {
  return rank_compare(measure_values(a), measure_values(b));
}

struct MinKOptions {
  std::size_t max_len = 4;  // exhaustive-search feasibility limit on |s|
};

// Smallest n such that some machine in (n,2) outputs s on some blank. Each
// candidate space is scanned to the runtime bound 2^|s| * |s| * n, which any
// machine producing s must respect; a straight-line writer guarantees the
// answer is at most |s|.
inline std::uint32_t min_k_positive(std::string_view s,
                                    const MinKOptions& opts = {}) {
  if (s.empty())
    throw std::invalid_argument("min_k_positive: string must be non-empty");
  if (s.find_first_not_of("01") != std::string_view::npos)
    throw std::invalid_argument("min_k_positive: string must be over 0/1");
  if (s.size() > opts.max_len)
    throw std::invalid_argument(
        "min_k_positive: string longer than the configured exhaustive-search limit");

  const std::string target(s);
  for (std::uint32_t n = 1; n <= s.size(); ++n) {
    const std::uint64_t bound = runtime_bound(s.size(), n).to_u64();
    const std::uint64_t space = machine_count(n).to_u64();
    Machine m;
    Simulator sim[2];
    for (std::uint64_t t = 0; t < space; ++t) {
      detail::unrank_into(MachineIndex{n, t}, m);
      const bool no_halt = has_no_halt_transition(m);
      for (int blank = 0; blank < 2; ++blank) {
        if (no_halt || is_initial_self_loop(m, static_cast<std::uint8_t>(blank)))
          continue;
        SimOutcome oc =
            sim[blank].run(m, SimConfig{static_cast<std::uint8_t>(blank), bound});
        if (oc.halted() && oc.output == target) return n;
      }
    }
  }
  throw std::logic_error("min_k_positive: no producer found up to |s| states");
}

struct DeltaBoundResult {
  bool within = false;
  Dyadic gap;    // sum over s of (m_j(s) - m_k(s)), exact
  Dyadic bound;  // 1/2^k
};

// Exact check of the convergence bound on two full-mode tables: the total
// mass added between m_k and m_j (j > k) can never exceed 1/2^k.
inline DeltaBoundResult delta_bound_check(const MkDistribution& d_j,
                                          const MkDistribution& d_k) {
  if (d_j.k <= d_k.k)
    throw std::invalid_argument("delta_bound_check: needs j > k");
  if (d_j.exactness != Exactness::exact || d_k.exactness != Exactness::exact)
    throw std::invalid_argument("delta_bound_check: needs exact full-mode inputs");
  DeltaBoundResult r;
  r.gap = total_measure(d_j) - total_measure(d_k);
  r.bound = Dyadic::one_over_pow2(d_k.k);
  r.within = !(r.bound < r.gap);
  return r;
}

}  // namespace ctm
