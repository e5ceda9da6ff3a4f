#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <numeric>
#include <random>

#include "lwcga/randtest.hpp"
#include "reference_bits.hpp"

using namespace lwcga;
using namespace lwcga::randtest;
namespace nt = lwcga::randtest::nist;

namespace {

BitSequence bits(const char* s) { return BitSequence::from_string(s); }

// First 100 bits of the binary expansion of pi.
constexpr const char* kPi100 =
    "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

BitSequence periodic(std::size_t n, const char* pattern) {
  std::string p(pattern), s;
  while (s.size() < n) s += p;
  s.resize(n);
  return BitSequence::from_string(s);
}

}  // namespace

// ---- special functions: values frozen from mpmath at 30 digits ----

TEST(SpecialFunctions, IgamcMatchesFrozenValues) {
  struct Case {
    double a, x, q;
  };
  const Case cases[] = {
      {0.5, 0.1, 0.654720846018577020}, {1, 1, 0.367879441171442322},
      {2.5, 3.7, 0.192550433079395731}, {10, 5, 0.968171942693795188},
      {10, 20, 0.00499541230830758717}, {64, 60, 0.680433224535681840},
      {256, 300, 0.00430548273245791414}, {1000, 1050, 0.0586711113773180771},
      {3.5, 0.01, 0.999999991469419531},
  };
  for (const auto& c : cases) EXPECT_NEAR(stats::igamc(c.a, c.x), c.q, 1e-12 * std::max(1.0, c.q)) << c.a << "," << c.x;
}

TEST(SpecialFunctions, IgamcAgreesWithBoost) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(0.05, 2000), ux(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double a = ua(rng);
    double x = a * (0.3 + 1.4 * ux(rng));
    double want = boost::math::gamma_q(a, x);
    EXPECT_NEAR(stats::igamc(a, x), want, 1e-10 + 1e-9 * want) << a << "," << x;
    EXPECT_NEAR(stats::igam(a, x) + stats::igamc(a, x), 1.0, 1e-12);
  }
}

TEST(SpecialFunctions, EdgeValues) {
  EXPECT_EQ(stats::igamc(3, 0), 1.0);
  EXPECT_NEAR(stats::igamc(1, 50), std::exp(-50.0), 1e-30);
  EXPECT_NEAR(stats::normal_cdf(0), 0.5, 1e-15);
  EXPECT_NEAR(stats::normal_cdf(1.959963984540054), 0.975, 1e-12);
}

// ---- known answers, computed beforehand from the closed forms ----

TEST(KnownAnswer, Frequency) {
  auto r = nist_test(TestKind::frequency(), bits("1011010101"));
  EXPECT_NEAR(r.p_values[0], 0.527089256865538, 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(nt::frequency(bits(kPi100)).p_values[0], 0.109598583399116, 1e-9);
}

TEST(KnownAnswer, Runs) {
  auto r = nist_test(TestKind::runs(), bits("1001101011"));
  EXPECT_NEAR(r.p_values[0], 0.147232255363666, 1e-9);
}

TEST(KnownAnswer, BlockFrequency) {
  EXPECT_NEAR(nt::block_frequency(bits("0110011010"), 3).p_values[0], 0.801251956901201, 1e-9);
}

TEST(KnownAnswer, CumulativeSums) {
  EXPECT_NEAR(nt::cumulative_sums(bits("1011010111"), false).p_values[0], 0.411658619153802, 1e-9);
  EXPECT_NEAR(nt::cumulative_sums(bits(kPi100), false).p_values[0], 0.219193993485627, 1e-9);
  EXPECT_NEAR(nt::cumulative_sums(bits(kPi100), true).p_values[0], 0.114866215302522, 1e-9);
}

TEST(KnownAnswer, LongestRunOfOnes) {
  auto r = nt::longest_run_of_ones(bits(
      "11001100000101010110110001001100111000000000001001001101010100010001001111010110100000001101011111001100111001"
      "101101100010110010"));
  EXPECT_NEAR(r.p_values[0], 0.180609318239712, 1e-9);
}

TEST(KnownAnswer, NonOverlappingTemplate) {
  auto r = nt::non_overlapping_template(bits("10100100101110010110"), {0, 0, 1}, 2);
  EXPECT_NEAR(r.p_values[0], 0.344154, 1e-6);
}

TEST(KnownAnswer, ApproximateEntropy) {
  EXPECT_NEAR(nt::approximate_entropy_formula(bits("0100110101"), 3).p_values.at(0), 0.261961104881665, 1e-9);
  EXPECT_FALSE(nt::approximate_entropy(bits("0100110101"), 3).applicable);
}

TEST(KnownAnswer, Serial) {
  EXPECT_FALSE(nt::serial(bits("0011011101"), 3).applicable);
  auto r = nt::serial_formula(bits("0011011101"), 3);
  ASSERT_EQ(r.p_values.size(), 2u);
  EXPECT_NEAR(r.p_values[0], 0.808792135410999, 1e-9);
  EXPECT_NEAR(r.p_values[1], 0.670320046035639, 1e-9);
  EXPECT_EQ(r.labels, (std::vector<std::string>{"del_psi2", "del2_psi2"}));
}

TEST(KnownAnswer, BerlekampMassey) {
  std::vector<std::uint8_t> s{1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1};
  EXPECT_EQ(nt::berlekamp_massey(s), 4u);
  std::vector<std::uint8_t> zeros(50, 0);
  EXPECT_EQ(nt::berlekamp_massey(zeros), 0u);
  std::vector<std::uint8_t> impulse(50, 0);
  impulse.back() = 1;
  EXPECT_EQ(nt::berlekamp_massey(impulse), 50u);
}

TEST(KnownAnswer, GfTwoRank) {
  std::array<std::uint32_t, 32> id{};
  for (int i = 0; i < 32; ++i) id[static_cast<std::size_t>(i)] = 1u << i;
  EXPECT_EQ(nt::gf2_rank(id), 32);
  std::array<std::uint32_t, 32> dup{};
  dup.fill(0xdeadbeef);
  EXPECT_EQ(nt::gf2_rank(dup), 1);
  EXPECT_EQ(nt::gf2_rank({}), 0);
  double total = 0;
  for (int r = 0; r <= 32; ++r) total += nt::rank_probability(r);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(nt::rank_probability(32), 0.2888, 1e-4);
  EXPECT_NEAR(nt::rank_probability(31), 0.5776, 1e-4);
}

// ---- properties ----

TEST(Property, LfsrLinearComplexity) {
  // x^5 + x^2 + 1 and x^17 + x^3 + 1, both primitive.
  for (auto [deg, tap] : {std::pair{5, 2}, std::pair{17, 3}}) {
    std::vector<std::uint8_t> s(static_cast<std::size_t>(deg), 0);
    s.back() = 1;
    for (std::size_t i = static_cast<std::size_t>(deg); i < 400; ++i)
      s.push_back(s[i - static_cast<std::size_t>(deg)] ^ s[i - static_cast<std::size_t>(deg - tap)]);
    EXPECT_EQ(nt::berlekamp_massey(s), static_cast<std::size_t>(deg));
  }
  auto lfsr = periodic(1'000'000, "0000100101100111110001101110101");
  EXPECT_FALSE(nist_test(TestKind::linear_complexity(), lfsr).pass);
}

TEST(Property, FrequencyPMonotoneInBias) {
  const std::size_t n = 10000;
  double prev = 2.0;
  for (std::size_t ones = n / 2; ones <= n / 2 + 300; ones += 20) {
    std::vector<std::uint8_t> v(n, 0);
    for (std::size_t i = 0; i < ones; ++i) v[(i * 7919) % n] = 1;
    double p = nt::frequency(BitSequence(v)).p_values[0];
    EXPECT_LT(p, prev);
    prev = p;
  }
  auto zeros = BitSequence(std::vector<std::uint8_t>(1000, 0));
  auto r = nist_test(TestKind::frequency(), zeros);
  EXPECT_LT(r.p_values[0], 1e-100);
  EXPECT_FALSE(r.pass);
}

TEST(Property, PeriodicInput) {
  auto alt = periodic(100'000, "01");
  EXPECT_TRUE(nist_test(TestKind::frequency(), alt).pass);
  EXPECT_FALSE(nist_test(TestKind::runs(), alt).pass);
  EXPECT_FALSE(nist_test(TestKind::spectral_dft(), alt).pass);
}

TEST(Property, FrequencyPValuesAreUniform) {
  std::array<int, 10> bins{};
  for (std::uint64_t s = 0; s < 300; ++s) {
    double p = nt::frequency(lwcga::testing::counter_mode_bits(1000 + s, 20000)).p_values[0];
    ++bins[std::min<std::size_t>(9, static_cast<std::size_t>(p * 10))];
  }
  double chi2 = 0;
  for (int b : bins) chi2 += (b - 30.0) * (b - 30.0) / 30.0;
  EXPECT_GE(stats::igamc(4.5, chi2 / 2), 0.001);
}

TEST(Property, CounterModeMegabitPassesApEn) {
  auto b = lwcga::testing::counter_mode_bits(77, 1'000'000);
  EXPECT_GE(nist_test(TestKind::approximate_entropy(), b).min_p(), 0.001);
}

TEST(Property, CyclicCountsSumToLength) {
  auto b = lwcga::testing::counter_mode_bits(5, 5000);
  for (std::size_t m : {1u, 2u, 5u, 9u}) {
    auto c = nt::cyclic_pattern_counts(b, m);
    EXPECT_EQ(c.size(), std::size_t{1} << m);
    EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::size_t{0}), b.size());
  }
}

TEST(Property, MinimumLengths) {
  auto short_bits = lwcga::testing::counter_mode_bits(1, 500);
  EXPECT_FALSE(nist_test(TestKind::spectral_dft(), short_bits).applicable);
  EXPECT_FALSE(nist_test(TestKind::universal(), lwcga::testing::counter_mode_bits(1, 300000)).applicable);
  EXPECT_FALSE(nist_test(TestKind::rank(), short_bits).applicable);
  EXPECT_FALSE(nist_test(TestKind::linear_complexity(), short_bits).applicable);
  EXPECT_FALSE(nist_test(TestKind::random_excursions(), short_bits).applicable);
  auto r = nist_test(TestKind::random_excursions_variant(), short_bits);
  EXPECT_FALSE(r.applicable);
  EXPECT_FALSE(r.note.empty());
  EXPECT_FALSE(r.pass);
}

TEST(Property, ExcursionLabelsAndHeadline) {
  // Find a stream with enough cycles to be applicable.
  for (std::uint64_t seed = 1; seed < 40; ++seed) {
    auto b = lwcga::testing::counter_mode_bits(seed, 1'000'000);
    auto ex = nist_test(TestKind::random_excursions(), b);
    if (!ex.applicable) continue;
    ASSERT_EQ(ex.p_values.size(), 8u);
    EXPECT_EQ(ex.p_labels.front(), "x=-4");
    auto it = std::find(ex.p_labels.begin(), ex.p_labels.end(), "x=+1");
    ASSERT_NE(it, ex.p_labels.end());
    EXPECT_EQ(ex.headline_p(), ex.p_values[static_cast<std::size_t>(it - ex.p_labels.begin())]);
    auto var = nist_test(TestKind::random_excursions_variant(), b);
    ASSERT_TRUE(var.applicable);
    EXPECT_EQ(var.p_values.size(), 18u);
    return;
  }
  FAIL() << "no applicable stream found";
}

TEST(Suite, DeterministicAndComplete) {
  auto b = lwcga::testing::counter_mode_bits(3, 1'000'000);
  auto a = run_suite(b, 0.01);
  EXPECT_EQ(a, run_suite(b, 0.01));
  EXPECT_EQ(a.results.size(), 16u);
  EXPECT_EQ(a.sequence.length, b.size());
  for (const auto& k : default_kinds()) EXPECT_NE(a.find(k), nullptr) << kind_label(k);
  EXPECT_THROW(run_suite(b, 0.0), Error);
  EXPECT_THROW(run_suite(b, 1.5), Error);
}

TEST(Suite, SubsetAndParameters) {
  auto b = lwcga::testing::counter_mode_bits(3, 200'000);
  auto rep = run_suite(b, 0.01, {TestKind::serial(8), TestKind::block_frequency(1000)});
  ASSERT_EQ(rep.results.size(), 2u);
  EXPECT_EQ(rep.results[0].kind.m, 8u);
  EXPECT_EQ(rep.results[1].kind.m, 1000u);
}

TEST(Kinds, ParseAndLabel) {
  for (const auto& k : default_kinds()) {
    std::string name = kind_key(k.id);
    EXPECT_EQ(parse_kind(name), k) << name;
  }
  EXPECT_EQ(parse_kind("serial:8"), TestKind::serial(8));
  EXPECT_EQ(parse_kind("non_overlapping_template:000000011"), TestKind::non_overlapping("000000011"));
  EXPECT_THROW(parse_kind("nope"), ParseError);
  EXPECT_THROW(parse_kind("serial:x"), ParseError);
  EXPECT_THROW(parse_kind("serial:0"), ParseError);
  EXPECT_EQ(kind_label(TestKind::approximate_entropy()), "Approximate Entropy (m = 10)");
  EXPECT_EQ(kind_label(TestKind::linear_complexity()), "Linear Complexity (M = 500)");
}

TEST(Proportion, Examples) {
  auto make = [](std::size_t passes, std::size_t total) {
    std::vector<SuiteReport> reps(total);
    for (std::size_t i = 0; i < total; ++i) {
      TestResult r;
      r.kind = TestKind::frequency();
      r.p_values = {i < passes ? 0.5 : 0.0001};
      r.pass = i < passes;
      reps[i].results.push_back(r);
    }
    return reps;
  };
  auto p = pass_proportion(make(19, 20), TestKind::frequency(), 0.01);
  EXPECT_DOUBLE_EQ(p.proportion, 0.95);
  EXPECT_NEAR(p.lower_bound, 0.92325, 1e-4);
  EXPECT_TRUE(p.accepted());
  EXPECT_TRUE(pass_proportion(make(20, 20), TestKind::frequency(), 0.01).accepted());
  for (double alpha : {0.001, 0.01, 0.05})
    EXPECT_FALSE(pass_proportion(make(10, 20), TestKind::frequency(), alpha).accepted());
  EXPECT_THROW(pass_proportion(make(5, 5), TestKind::frequency(), 0.01), Error);
  EXPECT_THROW(pass_proportion(make(20, 20), TestKind::runs(), 0.01), Error);
}

TEST(Proportion, SkipsInapplicableAndJudgesEachSlot) {
  std::vector<SuiteReport> reps(12);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    TestResult r;
    r.kind = TestKind::serial();
    r.applicable = i != 0;
    r.p_values = {0.5, i < 4 ? 0.0001 : 0.5};
    reps[i].results.push_back(r);
  }
  auto p = pass_proportion(reps, TestKind::serial(), 0.01);
  EXPECT_EQ(p.sequences, 11u);
  EXPECT_DOUBLE_EQ(p.proportion, 8.0 / 11.0);
}

TEST(Entropy, Identities) {
  EXPECT_NEAR(shannon_entropy({0.5, 0.5}), 1.0, 1e-12);
  EXPECT_NEAR(shannon_entropy({1.0}), 0.0, 1e-12);
  EXPECT_NEAR(shannon_entropy({1.0, 0.0, 0.0}), 0.0, 1e-12);
  EXPECT_NEAR(shannon_entropy({0.5, 0.25, 0.25}), 1.5, 1e-12);
  EXPECT_NEAR(shannon_entropy(std::vector<double>(256, 1.0 / 256)), 8.0, 1e-12);
  EXPECT_THROW(shannon_entropy({0.5, 0.6}), Error);
  EXPECT_THROW(shannon_entropy({1.5, -0.5}), Error);
}

TEST(Entropy, ByteHistogram) {
  auto zero = byte_histogram(BitSequence(std::vector<std::uint8_t>(800, 0)));
  EXPECT_DOUBLE_EQ(zero[0], 1.0);
  EXPECT_NEAR(shannon_entropy(zero), 0.0, 1e-12);
  std::vector<std::uint8_t> counter;
  for (int rep = 0; rep < 4; ++rep)
    for (int v = 0; v < 256; ++v) counter.push_back(static_cast<std::uint8_t>(v));
  auto uni = byte_histogram(BitSequence::from_bytes(counter));
  for (double p : uni) EXPECT_DOUBLE_EQ(p, 1.0 / 256);
  EXPECT_NEAR(shannon_entropy(uni), 8.0, 1e-12);
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto h = byte_histogram(lwcga::testing::counter_mode_bits(s, 8 + s * 37));
    EXPECT_NEAR(std::accumulate(h.begin(), h.end(), 0.0), 1.0, 1e-9);
  }
  EXPECT_THROW(byte_histogram(bits("0101")), Error);
}
