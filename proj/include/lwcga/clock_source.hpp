#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string_view>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define LWCGA_HAVE_RDTSC 1
#endif

#include "lwcga/error.hpp"

namespace lwcga::entropy {

/// splitmix64 step. Used wherever a seeded stream must be identical across
/// platforms (std distributions are implementation-defined).
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class ClockKind { HardwareCounter, Virtual };
enum class ClockProvenance { CycleCounter, MonotonicFallback, Virtual };

inline std::string_view to_string(ClockProvenance p) {
  switch (p) {
    case ClockProvenance::CycleCounter: return "cycle-counter";
    case ClockProvenance::MonotonicFallback: return "monotonic-fallback";
    case ClockProvenance::Virtual: return "virtual";
  }
  return "?";
}

struct VirtualClockConfig {
  std::uint64_t seed = 1;
  std::uint64_t base_step = 40;
  std::uint64_t jitter_spread = 64;
  std::uint64_t interrupt_period = 1000;  // 0: never
};

/// CLKREAD(). Reads are strictly increasing. The virtual mode advances by
/// base_step plus seeded jitter, with a large jump on every
/// interrupt_period-th read; it is a pure function of its configuration.
class ClockSource {
 public:
  static ClockSource hardware() { return ClockSource(ClockKind::HardwareCounter, {}); }
  static ClockSource make_virtual(VirtualClockConfig cfg) {
    if (cfg.base_step == 0) throw Error("virtual clock base_step must be >= 1");
    return ClockSource(ClockKind::Virtual, cfg);
  }

  ClockKind kind() const { return kind_; }
  const VirtualClockConfig& virtual_config() const { return cfg_; }

  ClockProvenance provenance() const {
    if (kind_ == ClockKind::Virtual) return ClockProvenance::Virtual;
#ifdef LWCGA_HAVE_RDTSC
    return ClockProvenance::CycleCounter;
#else
    return ClockProvenance::MonotonicFallback;
#endif
  }

  /// Size of the jump injected on interrupt reads.
  std::uint64_t interrupt_jump_floor() const { return 64 * (cfg_.base_step + cfg_.jitter_spread); }

  std::uint64_t read() {
    if (kind_ == ClockKind::Virtual) return read_virtual();
    return read_hardware();
  }

 private:
  ClockSource(ClockKind k, VirtualClockConfig cfg) : kind_(k), cfg_(cfg), rng_(cfg.seed) {
    if (k == ClockKind::Virtual) value_ = splitmix64(rng_) >> 24;
  }

  std::uint64_t read_virtual() {
    ++reads_;
    std::uint64_t delta = cfg_.base_step;
    if (cfg_.jitter_spread > 0) delta += splitmix64(rng_) % cfg_.jitter_spread;
    if (cfg_.interrupt_period > 0 && reads_ % cfg_.interrupt_period == 0)
      delta += interrupt_jump_floor() + splitmix64(rng_) % (cfg_.base_step + cfg_.jitter_spread);
    value_ += delta;
    return value_;
  }

  static std::uint64_t read_hardware() {
    thread_local std::uint64_t last = 0;
#ifdef LWCGA_HAVE_RDTSC
    std::uint64_t v = __rdtsc();
#else
    std::uint64_t v = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
            .count());
#endif
    last = std::max(v, last + 1);
    return last;
  }

  ClockKind kind_;
  VirtualClockConfig cfg_;
  std::uint64_t rng_ = 0;
  std::uint64_t value_ = 0;
  std::uint64_t reads_ = 0;
};

/// factor x median of `samples` back-to-back read deltas.
inline std::uint64_t calibrate_interrupt_threshold(ClockSource& clock, std::size_t samples = 1024,
                                                   std::uint64_t factor = 32) {
  std::vector<std::uint64_t> deltas(samples);
  std::uint64_t prev = clock.read();
  for (auto& d : deltas) {
    std::uint64_t now = clock.read();
    d = now - prev;
    prev = now;
  }
  auto mid = deltas.begin() + static_cast<std::ptrdiff_t>(deltas.size() / 2);
  std::nth_element(deltas.begin(), mid, deltas.end());
  return std::max<std::uint64_t>(1, *mid * factor);
}

}  // namespace lwcga::entropy
