#pragma once

// Jitter-driven entropy collector. A ring buffer accumulates clock reads
// until enough interrupts have been observed; the saved buffer then seeds a
// walk table twice the L1 size, whose self-modifying traversal (mixed with
// further clock reads) produces the output words.

#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "lwcga/bit_sequence.hpp"
#include "lwcga/clock_source.hpp"
#include "lwcga/error.hpp"

namespace lwcga::entropy {

/// How the second walk pointer picks its next slot.
enum class Pt2Indexing {
  /// (PT2 mod C) xor (C if bit log2(C) of PT is clear): low half of PT2
  /// steered into either half of the table by PT.
  HalfSelect,
  /// The printed expression read left to right, ((PT2 & C) - 1) ^ ..., then
  /// masked into the table. Kept for comparison runs only.
  Printed,
};

struct CollectorConfig {
  std::uint32_t cachesize_words = 8192;  // C; walk table holds 2*C words
  std::uint32_t buffersize_words = 1024;
  std::uint32_t max_interrupts = 16;
  std::uint32_t collect_unroll = 32;  // x
  std::uint32_t walk_unroll = 512;    // y
  std::uint64_t interrupt_threshold = 0;  // 0: calibrate on first collection
  std::chrono::milliseconds stall_budget{5000};
  Pt2Indexing pt2_indexing = Pt2Indexing::HalfSelect;

  void validate() const {
    if (!std::has_single_bit(cachesize_words) || cachesize_words < 16)
      throw Error("cachesize_words must be a power of two >= 16");
    if (!std::has_single_bit(buffersize_words) || buffersize_words < 2)
      throw Error("buffersize_words must be a power of two >= 2");
    if (collect_unroll < 2) throw Error("collect_unroll must be >= 2");
    if (walk_unroll < 1) throw Error("walk_unroll must be >= 1");
  }
};

class CollectorStalled : public Error {
 public:
  using Error::Error;
};

class EntropyCollector {
 public:
  explicit EntropyCollector(CollectorConfig cfg = {}) : cfg_(cfg) {
    cfg_.validate();
    entropy_.assign(cfg_.buffersize_words, 0);
    snapshot_.assign(cfg_.buffersize_words, 0);
    scroll_.assign(2 * std::size_t{cfg_.cachesize_words}, 0);
    result_.assign(cfg_.walk_unroll, 0);
    result_bit_ = result_.size() * 32;
    threshold_ = cfg_.interrupt_threshold;
  }

  const CollectorConfig& config() const { return cfg_; }

  /// Gather clock jitter into the ring buffer until max_interrupts deltas
  /// above the threshold have been seen, then save the buffer, zero it, and
  /// fold the saved copy into the walk table.
  void collect_entropy(ClockSource& clock) {
    if (threshold_ == 0) threshold_ = calibrate_interrupt_threshold(clock);
    interrupt_count_ = 0;
    const std::uint32_t c = cfg_.collect_unroll;
    auto last_progress = std::chrono::steady_clock::now();
    std::uint64_t last = read(clock);
    std::uint32_t seen = 0;
    while (interrupt_count_ < cfg_.max_interrupts) {
      for (std::uint32_t a = 1; a < c; ++a) {
        std::uint64_t now = read(clock);
        if (now - last > threshold_) ++interrupt_count_;
        last = now;
        if (n_toggle_ == 0) {
          ++n_toggle_;
          entropy_step(now);
        } else {
          --n_toggle_;
          entropy_step(now);
        }
        if (interrupt_count_ >= cfg_.max_interrupts) break;
      }
      if (interrupt_count_ != seen) {
        seen = interrupt_count_;
        last_progress = std::chrono::steady_clock::now();
      } else if (std::chrono::steady_clock::now() - last_progress > cfg_.stall_budget) {
        throw CollectorStalled("entropy collection stalled: " + std::to_string(interrupt_count_) + "/" +
                               std::to_string(cfg_.max_interrupts) + " interrupts after " +
                               std::to_string(clock_reads_) + " clock reads (threshold " +
                               std::to_string(threshold_) + ", clock " +
                               std::string(to_string(clock.provenance())) + ")");
      }
    }
    snapshot_ = entropy_;
    dynamtable_[0] = dynamtable_[1];
    dynamtable_[1] = last;
    std::fill(entropy_.begin(), entropy_.end(), 0u);
    seed_scroll();
    ++collections_;
  }

  /// One ring-buffer update with the given clock reading:
  /// E[X] = rotl(E[X], 5) ^ clk ^ (E[X+1] >> 31); X = X+1.
  void entropy_step(std::uint64_t clk) {
    const std::uint32_t mask = cfg_.buffersize_words - 1;
    std::uint32_t& e = entropy_[x_index_];
    e = (e << 5) ^ (e >> 27) ^ static_cast<std::uint32_t>(clk) ^ (entropy_[(x_index_ + 1) & mask] >> 31);
    x_index_ = (x_index_ + 1) & mask;
  }

  /// One traversal step of the walk table; returns PT2 ^ pt.
  std::uint32_t walk_step(ClockSource& clock) {
    const std::uint32_t cache = cfg_.cachesize_words;
    const std::uint32_t table_mask = 2 * cache - 1;
    if (pt_ & (8 * cache)) ++branch_taken_[0];
    if (pt_ & (16 * cache)) ++branch_taken_[1];
    PT_ = pt_ & table_mask;
    pt_ = scroll_[PT_];
    PT2_ = scroll_[pt2_index(cache)];
    const std::uint32_t out = PT2_ ^ pt_;
    t_reg_ = (t_reg_ << 7) ^ static_cast<std::uint32_t>(read(clock)) ^ (t_reg_ >> 25);
    pt_ ^= t_reg_;
    scroll_[PT_] = pt_;
    ++walk_steps_;
    return out;
  }

  /// Next `width` (<= 64) bits of the output stream, first bit in the MSB.
  std::uint64_t take_bits(ClockSource& clock, unsigned width) {
    require_seeded();
    std::uint64_t v = 0;
    while (width > 0) {
      if (result_bit_ == result_.size() * 32) refill(clock);
      std::size_t word = result_bit_ / 32;
      unsigned offset = static_cast<unsigned>(result_bit_ % 32);
      unsigned avail = 32 - offset;
      unsigned take = width < avail ? width : avail;
      std::uint32_t chunk = (result_[word] << offset) >> (32 - take);
      v = (v << take) | chunk;
      result_bit_ += take;
      width -= take;
    }
    return v;
  }

  /// The next `nbits` of the stream. Consecutive calls continue where the
  /// previous one stopped, so the stream can be split at any bit.
  BitSequence generate_bits(ClockSource& clock, std::size_t nbits) {
    std::vector<std::uint8_t> bits;
    bits.reserve(nbits);
    while (bits.size() < nbits) {
      unsigned width = static_cast<unsigned>(std::min<std::size_t>(32, nbits - bits.size()));
      auto w = take_bits(clock, width);
      for (unsigned i = width; i-- > 0;) bits.push_back(static_cast<std::uint8_t>((w >> i) & 1));
    }
    return BitSequence(std::move(bits));
  }

  bool seeded() const { return collections_ > 0; }

  // Inspection.
  const std::vector<std::uint32_t>& entropy_buf() const { return entropy_; }
  const std::vector<std::uint32_t>& snapshot() const { return snapshot_; }
  const std::vector<std::uint32_t>& scroll() const { return scroll_; }
  const std::array<std::uint64_t, 2>& dynamtable() const { return dynamtable_; }
  std::uint32_t x_index() const { return x_index_; }
  std::uint32_t interrupt_count() const { return interrupt_count_; }
  std::uint64_t interrupt_threshold() const { return threshold_; }
  std::uint64_t clock_reads() const { return clock_reads_; }
  std::uint64_t walk_steps() const { return walk_steps_; }
  std::uint64_t collections() const { return collections_; }
  std::uint32_t last_walk_index() const { return PT_; }
  const std::array<std::uint64_t, 2>& branch_taken() const { return branch_taken_; }
  int n_toggle() const { return n_toggle_; }

 private:
  std::uint64_t read(ClockSource& clock) {
    ++clock_reads_;
    return clock.read();
  }

  std::uint32_t pt2_index(std::uint32_t cache) const {
    const std::uint32_t half = (PT_ ^ cache) & cache;
    if (cfg_.pt2_indexing == Pt2Indexing::HalfSelect) return (PT2_ & (cache - 1)) ^ half;
    return (((PT2_ & cache) - 1) ^ half) & (2 * cache - 1);
  }

  // xorshift64* keyed by the saved buffer, xored into the table together
  // with the buffer itself.
  void seed_scroll() {
    std::uint64_t h = 0x6a09e667f3bcc908ULL ^ collections_;
    for (auto w : snapshot_) {
      h ^= w;
      h = splitmix64(h);
    }
    std::uint64_t s = h | 1;
    auto next = [&s]() {
      s ^= s >> 12;
      s ^= s << 25;
      s ^= s >> 27;
      return static_cast<std::uint32_t>((s * 0x2545f4914f6cdd1dULL) >> 32);
    };
    const std::size_t bmask = snapshot_.size() - 1;
    for (std::size_t i = 0; i < scroll_.size(); ++i) scroll_[i] ^= next() ^ snapshot_[i & bmask];
    pt_ = next();
    PT2_ = next();
    t_reg_ = next();
    PT_ = 0;
    result_bit_ = result_.size() * 32;
  }

  void refill(ClockSource& clock) {
    for (auto& w : result_) w = walk_step(clock);
    result_bit_ = 0;
  }

  void require_seeded() const {
    if (!seeded()) throw Error("entropy collector used before collect_entropy()");
  }

  CollectorConfig cfg_;
  std::vector<std::uint32_t> entropy_;
  std::vector<std::uint32_t> snapshot_;
  std::array<std::uint64_t, 2> dynamtable_{};
  std::uint32_t x_index_ = 0;
  std::uint32_t interrupt_count_ = 0;
  std::uint64_t threshold_ = 0;
  int n_toggle_ = 0;

  std::vector<std::uint32_t> scroll_;
  std::uint32_t pt_ = 0, PT_ = 0, PT2_ = 0;
  std::uint32_t t_reg_ = 0;
  std::vector<std::uint32_t> result_;
  std::size_t result_bit_ = 0;

  std::uint64_t clock_reads_ = 0;
  std::uint64_t walk_steps_ = 0;
  std::uint64_t collections_ = 0;
  std::array<std::uint64_t, 2> branch_taken_{};
};

}  // namespace lwcga::entropy
