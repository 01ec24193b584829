#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "iotauth/bits.hpp"
#include "iotauth/errors.hpp"
#include "iotauth/reconcile.hpp"

namespace iotauth {

// Fibonacci LFSR tap specification. Cell j holds state bit j-1; each step
// outputs cell `degree`, shifts every cell up, and feeds the XOR of the
// tapped cells back into cell 1. Tap sets are not taken on faith: maximality
// is established by lfsr_period() in the test suite, not by a table lookup.
struct LfsrSpec {
  unsigned degree = 8;
  std::vector<unsigned> taps{8, 6, 5, 4};

  void validate() const {
    if (degree < 2 || degree > 24)
      throw std::invalid_argument("LfsrSpec: degree must be in [2,24]");
    if (taps.empty()) throw std::invalid_argument("LfsrSpec: taps empty");
    bool has_degree = false;
    for (unsigned t : taps) {
      if (t < 1 || t > degree)
        throw std::invalid_argument("LfsrSpec: tap out of range");
      if (t == degree) has_degree = true;
    }
    if (!has_degree)
      throw std::invalid_argument("LfsrSpec: taps must include the degree");
  }

  // Known-good maximal-length taps, degree 2..20.
  static LfsrSpec maximal(unsigned degree) {
    static const std::vector<std::vector<unsigned>> table = {
        /* 2*/ {2, 1},        /* 3*/ {3, 2},
        /* 4*/ {4, 3},        /* 5*/ {5, 3},
        /* 6*/ {6, 5},        /* 7*/ {7, 6},
        /* 8*/ {8, 6, 5, 4},  /* 9*/ {9, 5},
        /*10*/ {10, 7},       /*11*/ {11, 9},
        /*12*/ {12, 11, 10, 4}, /*13*/ {13, 12, 11, 8},
        /*14*/ {14, 13, 12, 2}, /*15*/ {15, 14},
        /*16*/ {16, 14, 13, 11}, /*17*/ {17, 14},
        /*18*/ {18, 11},      /*19*/ {19, 18, 17, 14},
        /*20*/ {20, 17},
    };
    if (degree < 2 || degree > 20)
      throw std::invalid_argument("LfsrSpec::maximal: degree must be in [2,20]");
    LfsrSpec spec;
    spec.degree = degree;
    spec.taps = table[degree - 2];
    return spec;
  }
};

class Lfsr {
 public:
  Lfsr(const LfsrSpec& spec, std::uint32_t initial_state)
      : degree_(spec.degree), state_(initial_state) {
    spec.validate();
    mask_ = (1u << degree_) - 1u;
    if ((initial_state & mask_) == 0)
      throw ZeroState("Lfsr: all-zero initial state");
    state_ &= mask_;
    tap_mask_ = 0;
    for (unsigned t : spec.taps) tap_mask_ |= 1u << (t - 1);
  }

  bool step() {
    const bool out = (state_ >> (degree_ - 1)) & 1u;
    const std::uint32_t fb =
        static_cast<std::uint32_t>(std::popcount(state_ & tap_mask_) & 1);
    state_ = ((state_ << 1) | fb) & mask_;
    return out;
  }

  std::uint32_t state() const { return state_; }

 private:
  unsigned degree_;
  std::uint32_t state_;
  std::uint32_t mask_;
  std::uint32_t tap_mask_;
};

// XOR-fold the seed into a k-bit initial state. Chunks are read MSB-first;
// the final partial chunk is zero-padded on the right.
inline std::uint32_t fold_seed(const Seed& seed, unsigned degree) {
  std::uint32_t folded = 0;
  std::uint32_t chunk = 0;
  unsigned fill = 0;
  for (std::size_t i = 0; i < seed.length(); ++i) {
    chunk = (chunk << 1) | seed.bits()[i];
    if (++fill == degree) {
      folded ^= chunk;
      chunk = 0;
      fill = 0;
    }
  }
  if (fill > 0) folded ^= chunk << (degree - fill);
  return folded;
}

inline BitString prbs_generate(const Seed& seed, const LfsrSpec& spec,
                               std::size_t n_bits) {
  spec.validate();
  const std::uint32_t state = fold_seed(seed, spec.degree);
  if (state == 0) throw ZeroState("prbs_generate: seed folds to all-zero state");
  Lfsr lfsr(spec, state);
  BitString out;
  for (std::size_t i = 0; i < n_bits; ++i) out.push_back(lfsr.step());
  return out;
}

// Length of the state cycle containing state 1, by direct walk. Equals
// 2^degree - 1 exactly when the taps are maximal.
inline std::uint64_t lfsr_period(const LfsrSpec& spec) {
  Lfsr lfsr(spec, 1);
  std::uint64_t steps = 0;
  do {
    lfsr.step();
    ++steps;
  } while (lfsr.state() != 1);
  return steps;
}

// ---------------------------------------------------------------------------
// Slot/frequency schedules
// ---------------------------------------------------------------------------

enum class AccessMode { time_slots, frequencies };

struct AccessSchedule {
  AccessMode mode = AccessMode::time_slots;
  std::uint32_t slots_per_frame = 0;  // S = 2^bits_per_index
  std::vector<std::uint32_t> slot_indices;
};

// Consecutive groups of `bits_per_index` bits, read big-endian, become slot
// (or channel) indices.
inline AccessSchedule schedule(const BitString& bits, AccessMode mode,
                               unsigned bits_per_index) {
  if (bits_per_index < 1 || bits_per_index > 20)
    throw std::invalid_argument("schedule: bits_per_index must be in [1,20]");
  if (bits.size() % bits_per_index != 0)
    throw LengthError("schedule: bit count not divisible by bits_per_index");
  AccessSchedule out;
  out.mode = mode;
  out.slots_per_frame = 1u << bits_per_index;
  out.slot_indices.reserve(bits.size() / bits_per_index);
  std::uint32_t value = 0;
  unsigned fill = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    value = (value << 1) | bits[i];
    if (++fill == bits_per_index) {
      out.slot_indices.push_back(value);
      value = 0;
      fill = 0;
    }
  }
  return out;
}

enum class AccessVerdict { accept, reject };

struct AuthDecision {
  AccessVerdict verdict = AccessVerdict::reject;
  std::size_t matched = 0;
  std::size_t total = 0;

  bool accepted() const { return verdict == AccessVerdict::accept; }
};

// Compare the first `window` observed indices against the expected schedule.
// With max_mismatches == 0 the verdict is decided at the first mismatch and
// `matched` reports the agreeing prefix; with tolerance enabled, `matched`
// counts agreements across the whole window.
inline AuthDecision authenticate_access(const AccessSchedule& expected,
                                        std::span<const std::uint32_t> observed,
                                        std::size_t window,
                                        std::size_t max_mismatches = 0) {
  if (observed.size() < window)
    throw std::invalid_argument("authenticate_access: observed shorter than window");
  if (expected.slot_indices.size() < window)
    throw std::invalid_argument("authenticate_access: schedule shorter than window");
  AuthDecision decision;
  decision.total = window;
  if (max_mismatches == 0) {
    for (std::size_t i = 0; i < window; ++i) {
      if (observed[i] != expected.slot_indices[i]) {
        decision.verdict = AccessVerdict::reject;
        decision.matched = i;
        return decision;
      }
    }
    decision.verdict = AccessVerdict::accept;
    decision.matched = window;
    return decision;
  }
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < window; ++i)
    mismatches += observed[i] != expected.slot_indices[i];
  decision.matched = window - mismatches;
  decision.verdict =
      mismatches <= max_mismatches ? AccessVerdict::accept : AccessVerdict::reject;
  return decision;
}

}  // namespace iotauth
