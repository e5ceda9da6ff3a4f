#pragma once

// Latency comparison of SEND-CGA at each requested Sec against LW-CGA.
//
// Each trial generates one RSA key and runs one sign/verify round trip;
// both are charged to every scheme in that trial, since all schemes need the
// same key and the same proof of possession. What differs per scheme is then
// timed on its own: the CGA-specific verification, the address generation
// and a fresh-IID regeneration on the same prefix. Scheme order rotates from
// trial to trial. Operation counts (digests, clock reads, modifier-search
// iterations) are recorded beside the wall times.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "lwcga/addr.hpp"
#include "lwcga/clock_source.hpp"
#include "lwcga/digest.hpp"
#include "lwcga/entropy_collector.hpp"
#include "lwcga/error.hpp"
#include "lwcga/lwcga.hpp"
#include "lwcga/rsa_key.hpp"
#include "lwcga/send_cga.hpp"

namespace lwcga::bench {

struct ColumnStats {
  double median = 0, q1 = 0, q3 = 0, mean = 0, min = 0, max = 0;
  double iqr() const { return q3 - q1; }
};

/// Quartiles by linear interpolation between order statistics.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

inline ColumnStats summarize(const std::vector<double>& v) {
  ColumnStats s;
  if (v.empty()) return s;
  s.median = quantile(v, 0.5);
  s.q1 = quantile(v, 0.25);
  s.q3 = quantile(v, 0.75);
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  s.min = *mn;
  s.max = *mx;
  return s;
}

struct Scheme {
  std::string name;  // "SEND (Sec=0)", "LW-CGA"
  int sec = -1;      // -1 for LW-CGA

  bool is_lwcga() const { return sec < 0; }
  friend bool operator==(const Scheme&, const Scheme&) = default;
};

inline Scheme send_scheme(int sec) { return {"SEND (Sec=" + std::to_string(sec) + ")", sec}; }
inline Scheme lwcga_scheme() { return {"LW-CGA", -1}; }

/// Raw per-trial samples for one scheme; durations in seconds.
struct BenchRecord {
  Scheme scheme;
  std::size_t trials = 0;
  std::vector<double> key_generation;
  std::vector<double> key_verification;
  std::vector<double> cga_generation;
  std::vector<double> iid_total;
  std::vector<double> regeneration;         // fresh IID, same prefix
  std::vector<double> prefix_regeneration;  // new prefix, same key
  std::vector<std::uint64_t> iid_digests;   // digest invocations for generation + verification
  std::vector<std::uint64_t> regeneration_digests;
  std::vector<std::uint64_t> hash2_iterations;
  std::vector<std::uint64_t> clock_reads;  // collector clock reads during generation

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchConfig {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::vector<int> sec_levels{0, 1};
  bool parallel = false;  // keeps operation counts, forfeits wall-time comparability
  entropy::CollectorConfig collector;
  entropy::ClockKind clock = entropy::ClockKind::Virtual;
};

namespace bench_detail {

using Clock = std::chrono::steady_clock;

inline double seconds(Clock::time_point a, Clock::time_point b) { return std::chrono::duration<double>(b - a).count(); }

struct Worker {
  std::vector<Scheme> schemes;
  std::vector<BenchRecord> records;
  entropy::ClockSource clock;
  entropy::EntropyCollector collector;
  std::uint64_t rng;

  Worker(const BenchConfig& cfg, std::uint64_t stream)
      : clock(make_clock(cfg, stream)),
        collector(cfg.collector),
        rng(cfg.seed + stream) {
    for (int s : cfg.sec_levels) schemes.push_back(send_scheme(s));
    schemes.push_back(lwcga_scheme());
    for (const auto& s : schemes) {
      BenchRecord r;
      r.scheme = s;
      records.push_back(std::move(r));
    }
    collector.collect_entropy(clock);
  }

  static entropy::ClockSource make_clock(const BenchConfig& cfg, std::uint64_t stream) {
    if (cfg.clock != entropy::ClockKind::Virtual) return entropy::ClockSource::hardware();
    entropy::VirtualClockConfig vc;
    vc.seed = cfg.seed ^ (stream * 0x9e3779b97f4a7c15ULL);
    return entropy::ClockSource::make_virtual(vc);
  }

  void trial(std::size_t t) {
    const SubnetPrefix64 prefix{0x2001'0db8'0000'0000ULL | (t & 0xffff)};
    const SubnetPrefix64 next_prefix{prefix.bits + 0x10000};

    auto k0 = Clock::now();
    KeyPair key = KeyPair::generate();
    auto k1 = Clock::now();
    const std::array<std::uint8_t, 16> challenge = make_address(prefix, InterfaceId64{t}).to_bytes();
    auto sig = sign_nd_message(key, challenge);
    bool ok = verify_nd_signature(key.public_key(), challenge, sig).accepted;
    auto k2 = Clock::now();
    if (!ok) throw Error("signature round trip failed during benchmark");
    const double keygen = seconds(k0, k1), roundtrip = seconds(k1, k2);

    const std::size_t n = schemes.size();
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t idx = (r + t) % n;
      const Scheme& s = schemes[idx];
      BenchRecord& rec = records[idx];
      rec.key_generation.push_back(keygen);
      if (s.is_lwcga()) run_lwcga(rec, key, prefix, next_prefix, roundtrip, keygen, t);
      else run_send(rec, s, key, prefix, next_prefix, roundtrip, keygen);
      ++rec.trials;
    }
  }

  void run_send(BenchRecord& rec, const Scheme& s, const KeyPair& key, SubnetPrefix64 prefix, SubnetPrefix64 next,
                double roundtrip, double keygen) {
    const cga::SecLevel sec(s.sec);
    const auto d0 = digest_invocations();
    auto t0 = Clock::now();
    auto res = cga::cga_generate(key, sec, prefix, cga::Modifier128::from_u64(entropy::splitmix64(rng), entropy::splitmix64(rng)));
    auto t1 = Clock::now();
    auto verdict = cga::cga_verify(res.address, res.params, sec);
    auto t2 = Clock::now();
    if (verdict != cga::VerifyOutcome::Valid) throw Error("benchmark CGA failed to verify");
    const auto d1 = digest_invocations();

    // Same prefix, fresh address: SEND has to search for a new modifier.
    auto r0 = Clock::now();
    auto again = cga::cga_generate(key, sec, prefix, cga::Modifier128::from_u64(entropy::splitmix64(rng), entropy::splitmix64(rng)));
    auto r1 = Clock::now();
    const auto d2 = digest_invocations();
    auto p0 = Clock::now();
    auto moved = cga::cga_regenerate(res.params, next, sec);
    auto p1 = Clock::now();
    if (moved.address.prefix != next) throw Error("benchmark regeneration failed");
    (void)again;

    rec.cga_generation.push_back(seconds(t0, t1));
    rec.key_verification.push_back(roundtrip + seconds(t1, t2));
    rec.iid_total.push_back(keygen + roundtrip + seconds(t0, t2));
    rec.regeneration.push_back(seconds(r0, r1));
    rec.prefix_regeneration.push_back(seconds(p0, p1));
    rec.iid_digests.push_back(d1 - d0);
    rec.regeneration_digests.push_back(d2 - d1);
    rec.hash2_iterations.push_back(res.hash2_iterations);
    rec.clock_reads.push_back(0);
  }

  void run_lwcga(BenchRecord& rec, const KeyPair& key, SubnetPrefix64 prefix, SubnetPrefix64 next, double roundtrip,
                 double keygen, std::size_t t) {
    const auto d0 = digest_invocations();
    const auto c0 = collector.clock_reads();
    auto t0 = Clock::now();
    auto binding = lwcga_generate(prefix, collector, clock, key, t);
    auto t1 = Clock::now();
    const auto c1 = collector.clock_reads();
    const auto d1 = digest_invocations();

    RegenerationPolicy policy;
    auto r0 = Clock::now();
    auto again = regenerate(binding, trigger::UserRequest{}, policy, collector, clock, key, t);
    auto r1 = Clock::now();
    const auto d2 = digest_invocations();
    auto p0 = Clock::now();
    auto moved = regenerate(binding, trigger::PrefixUpdate{next}, policy, collector, clock, key, t);
    auto p1 = Clock::now();
    if (moved.address.prefix != next) throw Error("benchmark regeneration failed");
    (void)again;

    rec.cga_generation.push_back(seconds(t0, t1));
    rec.key_verification.push_back(roundtrip);
    rec.iid_total.push_back(keygen + roundtrip + seconds(t0, t1));
    rec.regeneration.push_back(seconds(r0, r1));
    rec.prefix_regeneration.push_back(seconds(p0, p1));
    rec.iid_digests.push_back(d1 - d0);
    rec.regeneration_digests.push_back(d2 - d1);
    rec.hash2_iterations.push_back(0);
    rec.clock_reads.push_back(c1 - c0);
  }
};

inline void append(BenchRecord& into, const BenchRecord& from) {
  into.trials += from.trials;
  auto cat = [](auto& a, const auto& b) { a.insert(a.end(), b.begin(), b.end()); };
  cat(into.key_generation, from.key_generation);
  cat(into.key_verification, from.key_verification);
  cat(into.cga_generation, from.cga_generation);
  cat(into.iid_total, from.iid_total);
  cat(into.regeneration, from.regeneration);
  cat(into.prefix_regeneration, from.prefix_regeneration);
  cat(into.iid_digests, from.iid_digests);
  cat(into.regeneration_digests, from.regeneration_digests);
  cat(into.hash2_iterations, from.hash2_iterations);
  cat(into.clock_reads, from.clock_reads);
}

}  // namespace bench_detail

inline constexpr std::size_t kMinTrials = 30;

inline std::vector<BenchRecord> bench_schemes(const BenchConfig& cfg) {
  if (cfg.trials < kMinTrials) throw Error("bench needs at least " + std::to_string(kMinTrials) + " trials");
  for (int s : cfg.sec_levels)
    if (s < 0 || s > 2) throw Error("bench sec levels are limited to 0..2");
  cfg.collector.validate();

  if (!cfg.parallel) {
    bench_detail::Worker w(cfg, 0);
    for (std::size_t t = 0; t < cfg.trials; ++t) w.trial(t);
    return w.records;
  }

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), cfg.trials));
  std::vector<std::future<std::vector<BenchRecord>>> parts;
  for (std::size_t k = 0; k < workers; ++k)
    parts.push_back(std::async(std::launch::async, [&cfg, k, workers] {
      bench_detail::Worker w(cfg, k + 1);
      for (std::size_t t = k; t < cfg.trials; t += workers) w.trial(t);
      return w.records;
    }));
  std::vector<BenchRecord> out;
  for (auto& f : parts) {
    auto recs = f.get();
    if (out.empty()) {
      out = std::move(recs);
      continue;
    }
    for (std::size_t i = 0; i < out.size(); ++i) bench_detail::append(out[i], recs[i]);
  }
  return out;
}

}  // namespace lwcga::bench
