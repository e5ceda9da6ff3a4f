#pragma once

// `key = value` collector configuration files. '#' starts a comment.

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "lwcga/clock_source.hpp"
#include "lwcga/entropy_collector.hpp"
#include "lwcga/error.hpp"

namespace lwcga::entropy {

struct CollectorSetup {
  CollectorConfig collector;
  ClockKind clock = ClockKind::HardwareCounter;
  VirtualClockConfig virtual_clock;
  bool seed_given = false;

  ClockSource make_clock() const {
    return clock == ClockKind::Virtual ? ClockSource::make_virtual(virtual_clock) : ClockSource::hardware();
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_unsigned(std::string_view key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ParseError("bad value for " + std::string(key) + ": '" + std::string(v) + "'");
  return out;
}

}  // namespace detail

inline void apply_collector_setting(CollectorSetup& s, std::string_view key, std::string_view value) {
  using detail::parse_unsigned;
  if (key == "cachesize_words") s.collector.cachesize_words = parse_unsigned<std::uint32_t>(key, value);
  else if (key == "buffersize_words") s.collector.buffersize_words = parse_unsigned<std::uint32_t>(key, value);
  else if (key == "max_interrupts") s.collector.max_interrupts = parse_unsigned<std::uint32_t>(key, value);
  else if (key == "collect_unroll") s.collector.collect_unroll = parse_unsigned<std::uint32_t>(key, value);
  else if (key == "walk_unroll") s.collector.walk_unroll = parse_unsigned<std::uint32_t>(key, value);
  else if (key == "interrupt_threshold") s.collector.interrupt_threshold = parse_unsigned<std::uint64_t>(key, value);
  else if (key == "stall_budget_ms")
    s.collector.stall_budget = std::chrono::milliseconds(parse_unsigned<std::uint64_t>(key, value));
  else if (key == "pt2_indexing") {
    if (value == "half_select") s.collector.pt2_indexing = Pt2Indexing::HalfSelect;
    else if (value == "printed") s.collector.pt2_indexing = Pt2Indexing::Printed;
    else throw ParseError("pt2_indexing must be half_select or printed");
  } else if (key == "clock") {
    if (value == "hardware") s.clock = ClockKind::HardwareCounter;
    else if (value == "virtual") s.clock = ClockKind::Virtual;
    else throw ParseError("clock must be hardware or virtual");
  } else if (key == "seed") {
    s.virtual_clock.seed = parse_unsigned<std::uint64_t>(key, value);
    s.seed_given = true;
  } else if (key == "base_step") s.virtual_clock.base_step = parse_unsigned<std::uint64_t>(key, value);
  else if (key == "jitter_spread") s.virtual_clock.jitter_spread = parse_unsigned<std::uint64_t>(key, value);
  else if (key == "interrupt_period") s.virtual_clock.interrupt_period = parse_unsigned<std::uint64_t>(key, value);
  else throw ParseError("unknown collector setting '" + std::string(key) + "'");
}

inline CollectorSetup parse_collector_config(std::string_view text, CollectorSetup base = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = line;
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = detail::trim(l);
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    apply_collector_setting(base, detail::trim(l.substr(0, eq)), detail::trim(l.substr(eq + 1)));
  }
  base.collector.validate();
  return base;
}

inline CollectorSetup load_collector_config(const std::string& path, CollectorSetup base = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open collector config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_collector_config(ss.str(), base);
}

}  // namespace lwcga::entropy
