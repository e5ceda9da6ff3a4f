#pragma once

// Suite front end: test kinds with their default parameters, per-test
// results with a pass flag, whole-suite reports, the multi-sequence
// proportion rule, and the byte-entropy estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lwcga/bit_sequence.hpp"
#include "lwcga/error.hpp"
#include "lwcga/nist_tests.hpp"

namespace lwcga::randtest {

enum class TestId {
  Frequency,
  BlockFrequency,
  CusumForward,
  CusumReverse,
  Runs,
  LongestRunOfOnes,
  Rank,
  SpectralDFT,
  NonOverlappingTemplate,
  OverlappingTemplate,
  Universal,
  ApproximateEntropy,
  RandomExcursions,
  RandomExcursionsVariant,
  LinearComplexity,
  Serial,
};

struct TestKind {
  TestId id = TestId::Frequency;
  std::size_t m = 0;        // block or pattern length, where the test has one
  std::string templ;        // NonOverlappingTemplate only

  friend bool operator==(const TestKind&, const TestKind&) = default;

  static TestKind of(TestId id, std::size_t m = 0, std::string templ = {}) {
    TestKind k;
    k.id = id;
    k.m = m;
    k.templ = std::move(templ);
    return k;
  }

  static TestKind frequency() { return of(TestId::Frequency); }
  static TestKind block_frequency(std::size_t m = 128) { return of(TestId::BlockFrequency, m); }
  static TestKind cusum_forward() { return of(TestId::CusumForward); }
  static TestKind cusum_reverse() { return of(TestId::CusumReverse); }
  static TestKind runs() { return of(TestId::Runs); }
  static TestKind longest_run() { return of(TestId::LongestRunOfOnes); }
  static TestKind rank() { return of(TestId::Rank); }
  static TestKind spectral_dft() { return of(TestId::SpectralDFT); }
  static TestKind non_overlapping(std::string B = "000000001") {
    auto m = B.size();
    return of(TestId::NonOverlappingTemplate, m, std::move(B));
  }
  static TestKind overlapping(std::size_t m = 9) { return of(TestId::OverlappingTemplate, m); }
  static TestKind universal() { return of(TestId::Universal); }
  static TestKind approximate_entropy(std::size_t m = 10) { return of(TestId::ApproximateEntropy, m); }
  static TestKind random_excursions() { return of(TestId::RandomExcursions); }
  static TestKind random_excursions_variant() { return of(TestId::RandomExcursionsVariant); }
  static TestKind linear_complexity(std::size_t M = 500) { return of(TestId::LinearComplexity, M); }
  static TestKind serial(std::size_t m = 16) { return of(TestId::Serial, m); }
};

/// All sixteen rows with default parameters, in report order.
inline std::vector<TestKind> default_kinds() {
  return {TestKind::frequency(),        TestKind::block_frequency(),
          TestKind::cusum_forward(),    TestKind::cusum_reverse(),
          TestKind::runs(),             TestKind::longest_run(),
          TestKind::rank(),             TestKind::spectral_dft(),
          TestKind::non_overlapping(),  TestKind::overlapping(),
          TestKind::universal(),        TestKind::approximate_entropy(),
          TestKind::random_excursions(), TestKind::random_excursions_variant(),
          TestKind::linear_complexity(), TestKind::serial()};
}

/// Short machine name, also accepted by parse_kind.
inline std::string kind_key(TestId id) {
  switch (id) {
    case TestId::Frequency: return "frequency";
    case TestId::BlockFrequency: return "block_frequency";
    case TestId::CusumForward: return "cusum_forward";
    case TestId::CusumReverse: return "cusum_reverse";
    case TestId::Runs: return "runs";
    case TestId::LongestRunOfOnes: return "longest_run";
    case TestId::Rank: return "rank";
    case TestId::SpectralDFT: return "spectral_dft";
    case TestId::NonOverlappingTemplate: return "non_overlapping_template";
    case TestId::OverlappingTemplate: return "overlapping_template";
    case TestId::Universal: return "universal";
    case TestId::ApproximateEntropy: return "approximate_entropy";
    case TestId::RandomExcursions: return "random_excursions";
    case TestId::RandomExcursionsVariant: return "random_excursions_variant";
    case TestId::LinearComplexity: return "linear_complexity";
    case TestId::Serial: return "serial";
  }
  return "?";
}

/// Table row label, e.g. "Block Frequency (m = 128)".
inline std::string kind_label(const TestKind& k) {
  auto m = std::to_string(k.m);
  switch (k.id) {
    case TestId::Frequency: return "Frequency";
    case TestId::BlockFrequency: return "Block Frequency (m = " + m + ")";
    case TestId::CusumForward: return "Cusum-Forward";
    case TestId::CusumReverse: return "Cusum-Reverse";
    case TestId::Runs: return "Runs";
    case TestId::LongestRunOfOnes: return "Long Runs of Ones";
    case TestId::Rank: return "Rank";
    case TestId::SpectralDFT: return "Spectral DFT";
    case TestId::NonOverlappingTemplate: return "Non Overlapping Templates (m = " + m + ", B = " + k.templ + ")";
    case TestId::OverlappingTemplate: return "Overlapping Templates (m = " + m + ")";
    case TestId::Universal: return "Universal";
    case TestId::ApproximateEntropy: return "Approximate Entropy (m = " + m + ")";
    case TestId::RandomExcursions: return "Random Excursions (x = +1)";
    case TestId::RandomExcursionsVariant: return "Random Excursions Variant (x = -1)";
    case TestId::LinearComplexity: return "Linear Complexity (M = " + m + ")";
    case TestId::Serial: return "Serial (m = " + m + ")";
  }
  return "?";
}

/// "name" or "name:param", e.g. "serial:8", "non_overlapping_template:000111".
inline TestKind parse_kind(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  for (const auto& k : default_kinds()) {
    if (kind_key(k.id) != name) continue;
    TestKind out = k;
    if (arg.empty()) return out;
    if (k.id == TestId::NonOverlappingTemplate) {
      if (arg.find_first_not_of("01") != std::string::npos) throw ParseError("template must be a bit string: " + arg);
      return TestKind::non_overlapping(arg);
    }
    if (k.m == 0) throw ParseError("test '" + name + "' takes no parameter");
    try {
      std::size_t pos = 0;
      unsigned long v = std::stoul(arg, &pos);
      if (pos != arg.size() || v == 0) throw ParseError("bad parameter");
      out.m = v;
    } catch (const std::exception&) {
      throw ParseError("bad parameter for " + name + ": '" + arg + "'");
    }
    return out;
  }
  throw ParseError("unknown test '" + name + "'");
}

struct TestResult {
  TestKind kind;
  double statistic = 0.0;
  std::vector<double> p_values;
  std::vector<std::string> p_labels;
  bool applicable = true;
  std::string note;
  bool pass = false;

  double min_p() const {
    return p_values.empty() ? 0.0 : *std::min_element(p_values.begin(), p_values.end());
  }
  /// The p-value a one-number summary shows: x = +1 / x = -1 for the
  /// excursion tests, the first p-value otherwise.
  double headline_p() const {
    if (p_values.empty()) return 0.0;
    const char* want = kind.id == TestId::RandomExcursions          ? "x=+1"
                       : kind.id == TestId::RandomExcursionsVariant ? "x=-1"
                                                                    : nullptr;
    if (want)
      for (std::size_t i = 0; i < p_labels.size(); ++i)
        if (p_labels[i] == want) return p_values[i];
    return p_values.front();
  }

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
}

inline TestResult nist_test(const TestKind& kind, const BitSequence& bits, double alpha = 0.01) {
  check_alpha(alpha);
  nist::Outcome o;
  switch (kind.id) {
    case TestId::Frequency: o = nist::frequency(bits); break;
    case TestId::BlockFrequency: o = nist::block_frequency(bits, kind.m); break;
    case TestId::CusumForward: o = nist::cumulative_sums(bits, false); break;
    case TestId::CusumReverse: o = nist::cumulative_sums(bits, true); break;
    case TestId::Runs: o = nist::runs(bits); break;
    case TestId::LongestRunOfOnes: o = nist::longest_run_of_ones(bits); break;
    case TestId::Rank: o = nist::binary_matrix_rank(bits); break;
    case TestId::SpectralDFT: o = nist::spectral_dft(bits); break;
    case TestId::NonOverlappingTemplate: {
      std::vector<std::uint8_t> B;
      for (char c : kind.templ) B.push_back(static_cast<std::uint8_t>(c == '1'));
      o = nist::non_overlapping_template(bits, B);
      break;
    }
    case TestId::OverlappingTemplate: o = nist::overlapping_template(bits, kind.m); break;
    case TestId::Universal: o = nist::universal(bits); break;
    case TestId::ApproximateEntropy: o = nist::approximate_entropy(bits, kind.m); break;
    case TestId::RandomExcursions: o = nist::random_excursions(bits); break;
    case TestId::RandomExcursionsVariant: o = nist::random_excursions_variant(bits); break;
    case TestId::LinearComplexity: o = nist::linear_complexity(bits, kind.m); break;
    case TestId::Serial: o = nist::serial(bits, kind.m); break;
  }
  TestResult r{kind, o.statistic, std::move(o.p_values), std::move(o.labels), o.applicable, std::move(o.note), false};
  r.pass = r.applicable && !r.p_values.empty() && r.min_p() >= alpha;
  return r;
}

struct SequenceInfo {
  std::string source;
  std::size_t length = 0;
  std::string provenance;  // seed, clock kind, file name

  friend bool operator==(const SequenceInfo&, const SequenceInfo&) = default;
};

struct SuiteReport {
  double alpha = 0.01;
  SequenceInfo sequence;
  std::vector<TestResult> results;

  const TestResult* find(const TestKind& k) const {
    for (const auto& r : results)
      if (r.kind == k) return &r;
    return nullptr;
  }
  bool all_applicable_pass() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return !r.applicable || r.pass; });
  }

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

inline SuiteReport run_suite(const BitSequence& bits, double alpha = 0.01, std::vector<TestKind> kinds = {},
                             SequenceInfo info = {}) {
  check_alpha(alpha);
  if (kinds.empty()) kinds = default_kinds();
  info.length = bits.size();
  SuiteReport rep{alpha, std::move(info), {}};
  for (const auto& k : kinds) rep.results.push_back(nist_test(k, bits, alpha));
  return rep;
}

struct Proportion {
  double proportion = 0.0;
  double lower_bound = 0.0;
  std::size_t sequences = 0;  // reports where the test was applicable
  bool accepted() const { return proportion >= lower_bound; }
};

inline double proportion_bound(double alpha, std::size_t s) {
  return (1.0 - alpha) - 3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(s));
}

/// Share of sequences passing `kind`. For tests with several p-values each
/// slot (state, statistic) is judged on its own and the worst slot returned.
inline Proportion pass_proportion(const std::vector<SuiteReport>& reports, const TestKind& kind, double alpha) {
  check_alpha(alpha);
  if (reports.size() < 10) throw Error("pass_proportion needs at least 10 reports");
  std::vector<std::size_t> passes;
  std::size_t s = 0;
  for (const auto& rep : reports) {
    const TestResult* r = rep.find(kind);
    if (!r) throw Error("report lacks test " + kind_label(kind));
    if (!r->applicable) continue;
    ++s;
    if (passes.size() < r->p_values.size()) passes.resize(r->p_values.size(), 0);
    for (std::size_t i = 0; i < r->p_values.size(); ++i) passes[i] += r->p_values[i] >= alpha;
  }
  Proportion out;
  out.sequences = s;
  if (s == 0) return out;
  std::size_t worst = *std::min_element(passes.begin(), passes.end());
  out.proportion = static_cast<double>(worst) / static_cast<double>(s);
  out.lower_bound = proportion_bound(alpha, s);
  return out;
}

/// H = -sum p_i log2 p_i, with 0 log 0 = 0.
inline double shannon_entropy(const std::vector<double>& p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || v > 1.0) throw Error("probabilities must lie in [0, 1]");
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw Error("probabilities sum to " + std::to_string(total) + ", not 1");
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

/// Relative frequency of each byte value over the floor(n/8) whole bytes.
inline std::vector<double> byte_histogram(const BitSequence& bits) {
  if (bits.size() < 8) throw Error("byte_histogram needs at least 8 bits");
  std::vector<double> h(256, 0.0);
  const std::size_t nbytes = bits.size() / 8;
  for (std::size_t i = 0; i < nbytes; ++i) {
    unsigned v = 0;
    for (std::size_t j = 0; j < 8; ++j) v = (v << 1) | bits[i * 8 + j];
    h[v] += 1.0;
  }
  for (auto& v : h) v /= static_cast<double>(nbytes);
  return h;
}

}  // namespace lwcga::randtest
