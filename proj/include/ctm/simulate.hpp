#pragma once
// Bounded execution of a machine over a two-way infinite tape filled with a
// blank symbol. Execution starts in state 1 with the head on cell 0. One step
// is one transition application; the transition into the halting state writes
// its symbol, does not move the head, and counts as a step. On halting the
// output is the contents of the contiguous interval of cells the head
// occupied at any point, read left to right, so the output is never empty.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctm/bigint.hpp"
#include "ctm/machine.hpp"

namespace ctm {

struct SimConfig {
  std::uint8_t blank = 0;       // symbol the tape is initially filled with
  std::uint64_t max_steps = 1;  // step budget, >= 1
};

enum class NonHaltReason {
  initial_self_loop,    // entry (1, blank) stays in state 1
  no_halt_transition,   // no entry reaches the halting state
};

struct SimOutcome {
  enum class Kind { halted, exhausted, proved_non_halting };

  Kind kind = Kind::exhausted;
  std::string output;       // halted only; non-empty
  std::uint64_t steps = 0;  // halted: steps taken; exhausted: the budget
  NonHaltReason reason = NonHaltReason::initial_self_loop;  // proved only

  bool halted() const { return kind == Kind::halted; }

  static SimOutcome make_halted(std::string out, std::uint64_t steps) {
    return SimOutcome{Kind::halted, std::move(out), steps, {}};
  }
  static SimOutcome make_exhausted(std::uint64_t steps) {
    return SimOutcome{Kind::exhausted, {}, steps, {}};
  }
  static SimOutcome make_proved_non_halting(NonHaltReason r) {
    return SimOutcome{Kind::proved_non_halting, {}, 0, r};
  }

  friend bool operator==(const SimOutcome&, const SimOutcome&) = default;
};

// Reusable simulator. Keeps its tape buffer between runs so that sweeping a
// whole machine space does not reallocate per machine. Not thread-safe; use
// one instance per worker.
class Simulator {
 public:
  SimOutcome run(const Machine& m, const SimConfig& cfg) {
    if (cfg.max_steps < 1)
      throw std::invalid_argument("simulate: max_steps must be >= 1");
    if (cfg.blank > 1) throw std::invalid_argument("simulate: blank must be 0/1");

    if (tape_.empty()) tape_.assign(kInitialCells, fill_);
    if (cfg.blank != fill_) {
      std::fill(tape_.begin(), tape_.end(), cfg.blank);
      fill_ = cfg.blank;
    }

    std::int64_t origin = static_cast<std::int64_t>(tape_.size() / 2);
    std::int64_t pos = 0;
    std::int64_t lo = 0, hi = 0;  // interval of cells the head has occupied
    std::uint32_t state = 1;
    const Instruction* table = m.transitions.data();

    for (std::uint64_t step = 1; step <= cfg.max_steps; ++step) {
      const std::uint8_t sym = tape_[origin + pos];
      const Instruction& ins = table[2 * (state - 1) + sym];
      tape_[origin + pos] = ins.write_symbol;
      if (ins.next_state == 0) {
        std::string out(static_cast<std::size_t>(hi - lo + 1), '0');
        for (std::int64_t c = lo; c <= hi; ++c)
          out[static_cast<std::size_t>(c - lo)] =
              static_cast<char>('0' + tape_[origin + c]);
        restore(origin, lo, hi);
        return SimOutcome::make_halted(std::move(out), step);
      }
      pos += ins.direction;
      if (pos < lo) lo = pos;
      if (pos > hi) hi = pos;
      if (origin + pos <= 0 ||
          origin + pos >= static_cast<std::int64_t>(tape_.size()) - 1)
        grow(origin);
      state = ins.next_state;
    }
    restore(origin, lo, hi);
    return SimOutcome::make_exhausted(cfg.max_steps);
  }

 private:
  static constexpr std::size_t kInitialCells = 1 << 12;

  void restore(std::int64_t origin, std::int64_t lo, std::int64_t hi) {
    std::fill(tape_.begin() + (origin + lo), tape_.begin() + (origin + hi + 1),
              fill_);
  }

  void grow(std::int64_t& origin) {
    const std::size_t old_size = tape_.size();
    std::vector<std::uint8_t> bigger(old_size * 2, fill_);
    const std::size_t shift = old_size / 2;
    std::copy(tape_.begin(), tape_.end(), bigger.begin() + shift);
    tape_.swap(bigger);
    origin += static_cast<std::int64_t>(shift);
  }

  std::vector<std::uint8_t> tape_;
  std::uint8_t fill_ = 0;
};

inline SimOutcome simulate(const Machine& m, const SimConfig& cfg) {
  if (!m.is_valid()) throw std::invalid_argument("simulate: invalid machine");
  Simulator sim;
  return sim.run(m, cfg);
}

// Maximum number of steps a k-state machine can take and still halt with an
// output of the given length: 2^len * len * k, exact.
inline BigUint runtime_bound(std::uint64_t output_len, std::uint64_t k) {
  if (output_len < 1 || k < 1)
    throw std::invalid_argument("runtime_bound: arguments must be >= 1");
  return BigUint::pow2(output_len) * output_len * k;
}

// True iff entry (1, blank) keeps the machine in state 1. Such a machine
// re-enters state 1 on a fresh blank cell forever (a moving instruction must
// move, so the head lands on an unvisited cell) and never halts on that blank.
inline bool is_initial_self_loop(const Machine& m, std::uint8_t blank) {
  return m.entry(1, blank).next_state == 1;
}

// True iff no instruction reaches the halting state; such machines halt on
// no blank at all.
inline bool has_no_halt_transition(const Machine& m) {
  for (const Instruction& ins : m.transitions)
    if (ins.next_state == 0) return false;
  return true;
}

}  // namespace ctm
