#pragma once
// n-state 2-symbol Turing machines in the Busy Beaver formalism: working
// states 1..n plus a distinguished halting state 0. A machine is a table of
// 2n instructions, one per (state, read symbol) entry, stored in the order
// (1,0),(1,1),(2,0),(2,1),...,(n,1).
//
// There are 4n+2 possible instructions per entry (2 halting, 4n moving), so
// |(n,2)| = (4n+2)^(2n). Machines are put in bijection with the integers
// 0..(4n+2)^(2n)-1 by reading the table as a 2n-digit base-(4n+2) numeral,
// entry (1,0) being the most significant digit. Halting instructions sort
// first within a digit; see instruction_index for the exact ordering.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ctm/bigint.hpp"

namespace ctm {

struct Instruction {
  std::uint8_t next_state = 0;    // 0 is the halting state
  std::uint8_t write_symbol = 0;  // 0 or 1
  std::int8_t direction = 0;      // -1 left, +1 right; 0 exactly when halting

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

inline bool instruction_valid(const Instruction& ins, std::uint32_t states) {
  if (ins.write_symbol > 1) return false;
  if (ins.next_state > states) return false;
  if (ins.next_state == 0) return ins.direction == 0;
  return ins.direction == -1 || ins.direction == +1;
}

struct Machine {
  std::uint32_t states = 1;
  std::vector<Instruction> transitions;  // exactly 2*states entries

  // Entry for (state s1 in 1..states, symbol k1 in {0,1}).
  const Instruction& entry(std::uint32_t s1, std::uint8_t k1) const {
    return transitions[2 * (s1 - 1) + k1];
  }
  Instruction& entry(std::uint32_t s1, std::uint8_t k1) {
    return transitions[2 * (s1 - 1) + k1];
  }

  bool is_valid() const {
    if (states < 1) return false;
    if (transitions.size() != 2 * static_cast<std::size_t>(states)) return false;
    for (const Instruction& ins : transitions)
      if (!instruction_valid(ins, states)) return false;
    return true;
  }

  friend bool operator==(const Machine&, const Machine&) = default;
};

struct MachineIndex {
  std::uint32_t states = 1;
  std::uint64_t index = 0;

  friend bool operator==(const MachineIndex&, const MachineIndex&) = default;
};

// |(n,2)| = (4n+2)^(2n), exact for any n.
inline BigUint machine_count(std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("machine_count: n must be >= 1");
  return BigUint::pow(4ull * n + 2, 2ull * n);
}

// Bijection from instructions (for a fixed n) onto 0..4n+1.
// Halting first: (0,k2,0) -> k2. Moving: (s2,k2,d) -> 2 + 4(s2-1) + 2k2 + (d+1)/2.
inline std::uint32_t instruction_index(const Instruction& ins, std::uint32_t n) {
  if (!instruction_valid(ins, n))
    throw std::invalid_argument("instruction_index: invalid instruction");
  if (ins.next_state == 0) return ins.write_symbol;
  return 2 + 4 * (ins.next_state - 1) + 2 * ins.write_symbol +
         (ins.direction + 1) / 2;
}

inline Instruction instruction_from_index(std::uint32_t idx, std::uint32_t n) {
  if (idx >= 4 * n + 2)
    throw std::out_of_range("instruction_from_index: digit out of range");
  if (idx < 2) return Instruction{0, static_cast<std::uint8_t>(idx), 0};
  std::uint32_t v = idx - 2;
  return Instruction{static_cast<std::uint8_t>(v / 4 + 1),
                     static_cast<std::uint8_t>((v % 4) / 2),
                     static_cast<std::int8_t>((v % 2) ? +1 : -1)};
}

namespace detail {

// Decodes the digits of mi.index into m without reallocating; assumes the
// index has already been range-checked.
inline void unrank_into(const MachineIndex& mi, Machine& m) {
  const std::uint64_t base = 4ull * mi.states + 2;
  m.states = mi.states;
  m.transitions.resize(2 * static_cast<std::size_t>(mi.states));
  std::uint64_t t = mi.index;
  for (std::size_t i = m.transitions.size(); i-- > 0;) {
    m.transitions[i] = instruction_from_index(
        static_cast<std::uint32_t>(t % base), mi.states);
    t /= base;
  }
}

}  // namespace detail

inline Machine unrank(const MachineIndex& mi) {
  if (mi.states < 1) throw std::invalid_argument("unrank: states must be >= 1");
  if (BigUint(mi.index) >= machine_count(mi.states))
    throw std::out_of_range("unrank: index out of range");
  Machine m;
  detail::unrank_into(mi, m);
  return m;
}

inline MachineIndex rank(const Machine& m) {
  if (!m.is_valid()) throw std::invalid_argument("rank: invalid machine");
  BigUint acc;
  const std::uint64_t base = 4ull * m.states + 2;
  for (const Instruction& ins : m.transitions) {
    acc *= base;
    acc += BigUint(instruction_index(ins, m.states));
  }
  return MachineIndex{m.states, acc.to_u64()};
}

// Swaps the (s,0) and (s,1) entries of every state and complements every
// written symbol. Involution. Running the complement on blank 1 mirrors the
// original's run on blank 0 with all tape symbols complemented.
inline Machine complement_machine(const Machine& m) {
  if (!m.is_valid())
    throw std::invalid_argument("complement_machine: invalid machine");
  Machine r = m;
  for (std::uint32_t s = 1; s <= m.states; ++s) {
    r.entry(s, 0) = m.entry(s, 1);
    r.entry(s, 1) = m.entry(s, 0);
    r.entry(s, 0).write_symbol ^= 1;
    r.entry(s, 1).write_symbol ^= 1;
  }
  return r;
}

// Negates every direction (halting entries unchanged). Involution. The
// mirrored machine's output is the reversal of the original's.
inline Machine mirror_machine(const Machine& m) {
  if (!m.is_valid())
    throw std::invalid_argument("mirror_machine: invalid machine");
  Machine r = m;
  for (Instruction& ins : r.transitions) ins.direction = -ins.direction;
  return r;
}

}  // namespace ctm
