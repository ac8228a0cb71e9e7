#pragma once
// Exploration plans: which spaces (n,2) to sweep, how (full enumeration or
// seeded uniform sampling), and with what step cutoffs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctm/machine.hpp"

namespace ctm {

enum class ExploreMode { full, sample };

struct ExplorationPlan {
  std::uint32_t max_states = 1;
  std::vector<ExploreMode> mode;          // per n, index n-1
  std::vector<std::uint64_t> step_cutoff; // per n, index n-1
  std::vector<std::uint64_t> samples;     // per n, meaningful when sampled
  std::uint64_t seed = 0;

  // These change how the work is carried out but not the resulting table.
  bool use_blank_symmetry = true;
  bool prefilter = true;
  std::uint64_t chunk_size = 1 << 16;

  // Default cutoffs: for n <= 4 the longest halting computation in (n,2) is
  // dominated by these; for n = 5, 500 steps is the conventional sweep depth.
  static std::uint64_t default_cutoff(std::uint32_t n) {
    switch (n) {
      case 1: return 2;
      case 2: return 10;
      case 3: return 30;
      case 4: return 110;
      default: return 500;
    }
  }

  static ExplorationPlan full(std::uint32_t k) {
    ExplorationPlan p;
    p.max_states = k;
    p.mode.assign(k, ExploreMode::full);
    p.samples.assign(k, 0);
    p.step_cutoff.resize(k);
    for (std::uint32_t n = 1; n <= k; ++n) p.step_cutoff[n - 1] = default_cutoff(n);
    return p;
  }

  static ExplorationPlan sampled(std::uint32_t k, std::uint64_t samples_per_n,
                                 std::uint64_t seed) {
    ExplorationPlan p = full(k);
    p.mode.assign(k, ExploreMode::sample);
    p.samples.assign(k, samples_per_n);
    p.seed = seed;
    return p;
  }

  void validate() const {
    if (max_states < 1)
      throw std::invalid_argument("plan: max_states must be >= 1");
    if (mode.size() != max_states || step_cutoff.size() != max_states ||
        samples.size() != max_states)
      throw std::invalid_argument("plan: per-n vectors must have max_states entries");
    for (std::uint32_t n = 1; n <= max_states; ++n) {
      if (step_cutoff[n - 1] < 1)
        throw std::invalid_argument("plan: step cutoff must be >= 1");
      if (mode[n - 1] == ExploreMode::full) {
        if (n > 5)
          throw std::invalid_argument(
              "plan infeasible: full enumeration is limited to n <= 5");
      } else {
        if (samples[n - 1] < 1)
          throw std::invalid_argument("plan: sample mode needs samples >= 1");
        if (n > 6)
          throw std::invalid_argument(
              "plan infeasible: sampled ranks are limited to n <= 6 (64-bit index)");
      }
    }
  }

  // Canonical one-line echo of the result-relevant fields.
  std::string echo() const {
    std::string s = "max_states=" + std::to_string(max_states);
    for (std::uint32_t n = 1; n <= max_states; ++n) {
      bool sampled_n = mode[n - 1] == ExploreMode::sample;
      s += " mode." + std::to_string(n) + "=" + (sampled_n ? "sample" : "full");
      s += " cutoff." + std::to_string(n) + "=" + std::to_string(step_cutoff[n - 1]);
      if (sampled_n)
        s += " samples." + std::to_string(n) + "=" + std::to_string(samples[n - 1]);
    }
    s += " seed=" + std::to_string(seed);
    return s;
  }

  // True when two plans describe the same table contents (work-splitting
  // knobs excluded).
  bool result_compatible(const ExplorationPlan& o) const {
    return max_states == o.max_states && mode == o.mode &&
           step_cutoff == o.step_cutoff && samples == o.samples && seed == o.seed;
  }

  // FNV-1a over the echo plus the work-splitting knobs; checkpoints must
  // match on all of it to resume.
  std::uint64_t fingerprint() const {
    std::string all = echo() + " sym=" + std::to_string(use_blank_symmetry) +
                      " prefilter=" + std::to_string(prefilter) +
                      " chunk=" + std::to_string(chunk_size);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : all) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace ctm
