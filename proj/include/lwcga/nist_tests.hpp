#pragma once

// The fifteen statistical tests of NIST SP 800-22 rev 1a. Each function
// returns raw outcomes; randtest.hpp wraps them into TestResult rows.

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "lwcga/bit_sequence.hpp"
#include "lwcga/special_functions.hpp"

namespace lwcga::randtest::nist {

struct Outcome {
  bool applicable = true;
  std::string note;  // why a test was not applicable
  double statistic = 0.0;
  std::vector<double> p_values;
  std::vector<std::string> labels;  // one per p-value when more than one
};

inline Outcome not_applicable(std::string why) {
  Outcome o;
  o.applicable = false;
  o.note = std::move(why);
  return o;
}

inline double clamp_p(double p) {
  if (std::isnan(p)) return 0.0;
  return std::clamp(p, 0.0, 1.0);
}

// ---- frequency (monobit) ----
inline Outcome frequency(const BitSequence& e) {
  const double n = static_cast<double>(e.size());
  if (e.size() < 1) return not_applicable("empty sequence");
  long long s = 2 * static_cast<long long>(e.count_ones()) - static_cast<long long>(e.size());
  double s_obs = std::fabs(static_cast<double>(s)) / std::sqrt(n);
  return {true, {}, s_obs, {clamp_p(std::erfc(s_obs / std::sqrt(2.0)))}, {}};
}

// ---- frequency within a block ----
inline Outcome block_frequency(const BitSequence& e, std::size_t M) {
  std::size_t N = e.size() / M;
  if (N < 1) return not_applicable("sequence shorter than one block");
  double chi2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < M; ++j) ones += e[i * M + j];
    double pi = static_cast<double>(ones) / static_cast<double>(M) - 0.5;
    chi2 += pi * pi;
  }
  chi2 *= 4.0 * static_cast<double>(M);
  return {true, {}, chi2, {clamp_p(stats::igamc(static_cast<double>(N) / 2.0, chi2 / 2.0))}, {}};
}

// ---- cumulative sums ----
inline Outcome cumulative_sums(const BitSequence& e, bool reverse) {
  const long long n = static_cast<long long>(e.size());
  if (n < 1) return not_applicable("empty sequence");
  long long s = 0, z = 0;
  for (long long k = 0; k < n; ++k) {
    std::size_t idx = static_cast<std::size_t>(reverse ? n - 1 - k : k);
    s += e.pm1(idx);
    z = std::max(z, std::llabs(s));
  }
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double zd = static_cast<double>(z);
  // Summation limits use truncating integer division.
  double sum1 = 0.0;
  for (long long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
    sum1 += stats::normal_cdf(static_cast<double>(4 * k + 1) * zd / sqrt_n);
    sum1 -= stats::normal_cdf(static_cast<double>(4 * k - 1) * zd / sqrt_n);
  }
  double sum2 = 0.0;
  for (long long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
    sum2 += stats::normal_cdf(static_cast<double>(4 * k + 3) * zd / sqrt_n);
    sum2 -= stats::normal_cdf(static_cast<double>(4 * k + 1) * zd / sqrt_n);
  }
  return {true, {}, zd, {clamp_p(1.0 - sum1 + sum2)}, {}};
}

// ---- runs ----
inline Outcome runs(const BitSequence& e) {
  const std::size_t n = e.size();
  if (n < 2) return not_applicable("need at least two bits");
  const double nd = static_cast<double>(n);
  double pi = static_cast<double>(e.count_ones()) / nd;
  // Frequency prerequisite: the test is not run and reports p = 0.
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(nd)) return {true, "frequency prerequisite failed", 0.0, {0.0}, {}};
  std::size_t v = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) v += e[k] != e[k + 1];
  double num = std::fabs(static_cast<double>(v) - 2.0 * nd * pi * (1.0 - pi));
  double den = 2.0 * std::sqrt(2.0 * nd) * pi * (1.0 - pi);
  return {true, {}, static_cast<double>(v), {clamp_p(std::erfc(num / den))}, {}};
}

// ---- longest run of ones in a block ----
inline Outcome longest_run_of_ones(const BitSequence& e) {
  const std::size_t n = e.size();
  if (n < 128) return not_applicable("need n >= 128");
  std::size_t M;
  int lo, K;
  std::vector<double> pi;
  if (n < 6272) {
    M = 8, K = 3, lo = 1;
    pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
  } else if (n < 750000) {
    M = 128, K = 5, lo = 4;
    pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
  } else {
    M = 10000, K = 6, lo = 10;
    pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
  }
  const std::size_t N = n / M;
  std::vector<double> nu(static_cast<std::size_t>(K) + 1, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    int run = 0, longest = 0;
    for (std::size_t j = 0; j < M; ++j) {
      run = e[i * M + j] ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    int bin = std::clamp(longest - lo, 0, K);
    nu[static_cast<std::size_t>(bin)] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double expct = static_cast<double>(N) * pi[i];
    chi2 += (nu[i] - expct) * (nu[i] - expct) / expct;
  }
  return {true, {}, chi2, {clamp_p(stats::igamc(K / 2.0, chi2 / 2.0))}, {}};
}

// ---- binary matrix rank ----
inline int gf2_rank(std::array<std::uint32_t, 32> rows) {
  int rank = 0;
  for (int col = 31; col >= 0 && rank < 32; --col) {
    std::uint32_t bit = std::uint32_t{1} << col;
    int pivot = -1;
    for (int r = rank; r < 32; ++r)
      if (rows[static_cast<std::size_t>(r)] & bit) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < 32; ++r)
      if (r != rank && (rows[static_cast<std::size_t>(r)] & bit))
        rows[static_cast<std::size_t>(r)] ^= rows[static_cast<std::size_t>(rank)];
    ++rank;
  }
  return rank;
}

/// Probability that a random M x Q binary matrix has rank r.
inline double rank_probability(int r, int M = 32, int Q = 32) {
  double product = 1.0;
  for (int i = 0; i < r; ++i)
    product *= (1.0 - std::ldexp(1.0, i - Q)) * (1.0 - std::ldexp(1.0, i - M)) / (1.0 - std::ldexp(1.0, i - r));
  return std::ldexp(1.0, r * (Q + M - r) - M * Q) * product;
}

inline Outcome binary_matrix_rank(const BitSequence& e) {
  const std::size_t N = e.size() / 1024;
  if (N < 38) return not_applicable("need at least 38 32x32 matrices (n >= 38912)");
  const double p32 = rank_probability(32), p31 = rank_probability(31), p30 = 1.0 - p32 - p31;
  double f32 = 0, f31 = 0;
  for (std::size_t k = 0; k < N; ++k) {
    std::array<std::uint32_t, 32> rows{};
    for (std::size_t i = 0; i < 32; ++i)
      for (std::size_t j = 0; j < 32; ++j)
        rows[i] = (rows[i] << 1) | e[k * 1024 + i * 32 + j];
    int r = gf2_rank(rows);
    if (r == 32) f32 += 1;
    else if (r == 31) f31 += 1;
  }
  const double Nd = static_cast<double>(N);
  double rest = Nd - f32 - f31;
  double chi2 = (f32 - p32 * Nd) * (f32 - p32 * Nd) / (p32 * Nd) + (f31 - p31 * Nd) * (f31 - p31 * Nd) / (p31 * Nd) +
                (rest - p30 * Nd) * (rest - p30 * Nd) / (p30 * Nd);
  return {true, {}, chi2, {clamp_p(std::exp(-chi2 / 2.0))}, {}};
}

// ---- discrete Fourier transform (spectral) ----
inline Outcome spectral_dft(const BitSequence& e) {
  const std::size_t n = e.size();
  if (n < 1000) return not_applicable("need n >= 1000");
  // The FFTW planner is not re-entrant.
  static std::mutex planner_mutex;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in[i] = e.pm1(i);
  fftw_execute(plan);
  const double nd = static_cast<double>(n);
  const double T = std::sqrt(std::log(1.0 / 0.05) * nd);
  const double N0 = 0.95 * nd / 2.0;
  std::size_t N1 = 0;
  for (std::size_t k = 0; k < n / 2; ++k) N1 += std::hypot(out[k][0], out[k][1]) < T;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  double d = (static_cast<double>(N1) - N0) / std::sqrt(nd * 0.95 * 0.05 / 4.0);
  return {true, {}, d, {clamp_p(std::erfc(std::fabs(d) / std::sqrt(2.0)))}, {}};
}

// ---- non-overlapping template matching ----
inline Outcome non_overlapping_template(const BitSequence& e, const std::vector<std::uint8_t>& B,
                                        std::size_t N = 8) {
  const std::size_t m = B.size();
  const std::size_t M = e.size() / N;
  if (m == 0 || M < (std::size_t{1} << m)) return not_applicable("blocks shorter than 2^m bits");
  const double mu = static_cast<double>(M - m + 1) / std::ldexp(1.0, static_cast<int>(m));
  const double var = static_cast<double>(M) * (1.0 / std::ldexp(1.0, static_cast<int>(m)) -
                                               (2.0 * static_cast<double>(m) - 1.0) /
                                                   std::ldexp(1.0, 2 * static_cast<int>(m)));
  double chi2 = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    std::size_t W = 0, i = 0;
    while (i + m <= M) {
      bool match = true;
      for (std::size_t k = 0; k < m; ++k)
        if (e[j * M + i + k] != B[k]) {
          match = false;
          break;
        }
      if (match) {
        ++W;
        i += m;
      } else {
        ++i;
      }
    }
    chi2 += (static_cast<double>(W) - mu) * (static_cast<double>(W) - mu) / var;
  }
  return {true, {}, chi2, {clamp_p(stats::igamc(static_cast<double>(N) / 2.0, chi2 / 2.0))}, {}};
}

// ---- overlapping template matching (all-ones template) ----
inline Outcome overlapping_template(const BitSequence& e, std::size_t m) {
  constexpr std::size_t M = 1032;
  constexpr int K = 5;
  // Class probabilities for M = 1032, m = 9 as tabulated in rev 1a.
  static constexpr std::array<double, 6> kPi{0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865};
  const std::size_t N = e.size() / M;
  if (m != 9) return not_applicable("class probabilities are tabulated for m = 9 only");
  if (static_cast<double>(N) * kPi[4] < 5.0) return not_applicable("need N * min(pi) >= 5 (n >= 74304)");
  std::array<double, 6> nu{};
  for (std::size_t i = 0; i < N; ++i) {
    int w = 0;
    for (std::size_t j = 0; j + m <= M; ++j) {
      bool match = true;
      for (std::size_t k = 0; k < m; ++k)
        if (!e[i * M + j + k]) {
          match = false;
          break;
        }
      w += match;
    }
    nu[static_cast<std::size_t>(std::min(w, K))] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double ex = static_cast<double>(N) * kPi[i];
    chi2 += (nu[i] - ex) * (nu[i] - ex) / ex;
  }
  return {true, {}, chi2, {clamp_p(stats::igamc(K / 2.0, chi2 / 2.0))}, {}};
}

// ---- Maurer's universal statistical test ----
inline Outcome universal(const BitSequence& e) {
  static constexpr std::array<double, 17> kExpected{0,         0,         0,         0,         0,         0,
                                                    5.2177052, 6.1962507, 7.1836656, 8.1764248, 9.1723243,
                                                    10.170032, 11.168765, 12.168070, 13.167693, 14.167488,
                                                    15.167379};
  static constexpr std::array<double, 17> kVariance{0,     0,     0,     0,     0,     0,     2.954, 3.125, 3.238,
                                                    3.311, 3.356, 3.384, 3.401, 3.410, 3.416, 3.419, 3.421};
  static constexpr std::array<std::size_t, 11> kMinN{387840,    904960,    2068480,   4654080,
                                                     10342400,  22753280,  49643520,  107560960,
                                                     231669760, 496435200, 1059061760};
  const std::size_t n = e.size();
  int L = 0;
  for (std::size_t i = 0; i < kMinN.size(); ++i)
    if (n >= kMinN[i]) L = 6 + static_cast<int>(i);
  if (L == 0) return not_applicable("need n >= 387840");
  const std::size_t Q = 10 * (std::size_t{1} << L);
  const std::size_t K = n / static_cast<std::size_t>(L) - Q;
  std::vector<std::size_t> T(std::size_t{1} << L, 0);
  auto block = [&](std::size_t i) {
    std::size_t v = 0;
    for (int j = 0; j < L; ++j) v = (v << 1) | e[(i - 1) * static_cast<std::size_t>(L) + static_cast<std::size_t>(j)];
    return v;
  };
  for (std::size_t i = 1; i <= Q; ++i) T[block(i)] = i;
  double sum = 0.0;
  for (std::size_t i = Q + 1; i <= Q + K; ++i) {
    std::size_t v = block(i);
    sum += std::log2(static_cast<double>(i - T[v]));
    T[v] = i;
  }
  const double Kd = static_cast<double>(K);
  const double c = 0.7 - 0.8 / L + (4.0 + 32.0 / L) * std::pow(Kd, -3.0 / L) / 15.0;
  const double sigma = c * std::sqrt(kVariance[static_cast<std::size_t>(L)] / Kd);
  const double fn = sum / Kd;
  double p = std::erfc(std::fabs(fn - kExpected[static_cast<std::size_t>(L)]) / (std::sqrt(2.0) * sigma));
  return {true, {}, fn, {clamp_p(p)}, {}};
}

// ---- approximate entropy / serial helpers ----

// Counts of every overlapping m-bit pattern, the sequence wrapped around.
inline std::vector<std::uint32_t> cyclic_pattern_counts(const BitSequence& e, std::size_t m) {
  std::vector<std::uint32_t> counts(std::size_t{1} << m, 0);
  if (m == 0) {
    counts[0] = static_cast<std::uint32_t>(e.size());
    return counts;
  }
  const std::size_t n = e.size();
  const std::size_t mask = (std::size_t{1} << m) - 1;
  std::size_t v = 0;
  for (std::size_t i = 0; i < m - 1; ++i) v = (v << 1) | e[i];
  for (std::size_t i = 0; i < n; ++i) {
    v = ((v << 1) | e[(i + m - 1) % n]) & mask;
    ++counts[v];
  }
  return counts;
}

/// The formula alone, for any 1 <= m < n; approximate_entropy adds the
/// length recommendation.
inline Outcome approximate_entropy_formula(const BitSequence& e, std::size_t m) {
  const std::size_t n = e.size();
  if (m == 0 || m >= n) return not_applicable("need 1 <= m < n");
  const double nd = static_cast<double>(n);
  auto phi = [&](std::size_t k) {
    double s = 0.0;
    for (auto c : cyclic_pattern_counts(e, k))
      if (c) s += (c / nd) * std::log(c / nd);
    return s;
  };
  const double apen = phi(m) - phi(m + 1);
  const double chi2 = 2.0 * nd * (std::log(2.0) - apen);
  return {true, {}, chi2, {clamp_p(stats::igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2.0))}, {}};
}

inline Outcome approximate_entropy(const BitSequence& e, std::size_t m) {
  const std::size_t n = e.size();
  if (n < 2 || static_cast<double>(m) >= std::floor(std::log2(static_cast<double>(n))) - 5.0)
    return not_applicable("need m < floor(log2 n) - 5");
  return approximate_entropy_formula(e, m);
}

inline Outcome serial_formula(const BitSequence& e, std::size_t m) {
  const std::size_t n = e.size();
  if (m < 3 || m >= n) return not_applicable("need 3 <= m < n");
  const double nd = static_cast<double>(n);
  auto psi2 = [&](std::size_t k) {
    if (k == 0) return 0.0;
    double s = 0.0;
    for (auto c : cyclic_pattern_counts(e, k)) s += static_cast<double>(c) * static_cast<double>(c);
    return s * std::ldexp(1.0, static_cast<int>(k)) / nd - nd;
  };
  const double pm = psi2(m), pm1 = psi2(m - 1), pm2 = psi2(m - 2);
  const double del1 = pm - pm1, del2 = pm - 2.0 * pm1 + pm2;
  Outcome o;
  o.statistic = del1;
  o.p_values = {clamp_p(stats::igamc(std::ldexp(1.0, static_cast<int>(m) - 2), del1 / 2.0)),
                clamp_p(stats::igamc(std::ldexp(1.0, static_cast<int>(m) - 3), del2 / 2.0))};
  o.labels = {"del_psi2", "del2_psi2"};
  return o;
}

inline Outcome serial(const BitSequence& e, std::size_t m) {
  const std::size_t n = e.size();
  if (m < 3 || n < 2 || static_cast<double>(m) >= std::floor(std::log2(static_cast<double>(n))) - 2.0)
    return not_applicable("need 3 <= m < floor(log2 n) - 2");
  return serial_formula(e, m);
}

// ---- random excursions ----
struct Walk {
  std::vector<int> S;            // partial sums S_1..S_n
  std::vector<std::size_t> ends;  // index one past each cycle's end
};

inline Walk random_walk(const BitSequence& e) {
  Walk w;
  w.S.resize(e.size());
  int s = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    s += e.pm1(i);
    w.S[i] = s;
    if (s == 0) w.ends.push_back(i + 1);
  }
  if (!e.empty() && s != 0) w.ends.push_back(e.size());
  return w;
}

inline double excursion_cycle_minimum(std::size_t n) {
  return std::max(0.005 * std::sqrt(static_cast<double>(n)), 500.0);
}

inline Outcome random_excursions(const BitSequence& e) {
  auto w = random_walk(e);
  const double J = static_cast<double>(w.ends.size());
  if (J < excursion_cycle_minimum(e.size()))
    return not_applicable("only " + std::to_string(w.ends.size()) + " cycles (need 500)");
  static constexpr std::array<int, 8> kStates{-4, -3, -2, -1, 1, 2, 3, 4};
  // nu[state][k]: cycles visiting the state exactly k times (k = 5 means >= 5).
  std::array<std::array<double, 6>, 8> nu{};
  std::size_t start = 0;
  for (std::size_t end : w.ends) {
    std::array<int, 9> visits{};
    for (std::size_t i = start; i < end; ++i)
      if (w.S[i] >= -4 && w.S[i] <= 4 && w.S[i] != 0) ++visits[static_cast<std::size_t>(w.S[i] + 4)];
    for (std::size_t s = 0; s < 8; ++s) {
      int v = visits[static_cast<std::size_t>(kStates[s] + 4)];
      nu[s][static_cast<std::size_t>(std::min(v, 5))] += 1.0;
    }
    start = end;
  }
  Outcome o;
  for (std::size_t s = 0; s < 8; ++s) {
    const double x = std::abs(kStates[s]);
    std::array<double, 6> pi{};
    pi[0] = 1.0 - 1.0 / (2.0 * x);
    for (int k = 1; k <= 4; ++k) pi[static_cast<std::size_t>(k)] = 1.0 / (4.0 * x * x) * std::pow(pi[0], k - 1);
    pi[5] = 1.0 / (2.0 * x) * std::pow(pi[0], 4);
    double chi2 = 0.0;
    for (std::size_t k = 0; k < 6; ++k) chi2 += (nu[s][k] - J * pi[k]) * (nu[s][k] - J * pi[k]) / (J * pi[k]);
    if (s == 4) o.statistic = chi2;
    o.p_values.push_back(clamp_p(stats::igamc(2.5, chi2 / 2.0)));
    o.labels.push_back("x=" + std::string(kStates[s] > 0 ? "+" : "") + std::to_string(kStates[s]));
  }
  return o;
}

inline Outcome random_excursions_variant(const BitSequence& e) {
  auto w = random_walk(e);
  const double J = static_cast<double>(w.ends.size());
  if (J < excursion_cycle_minimum(e.size()))
    return not_applicable("only " + std::to_string(w.ends.size()) + " cycles (need 500)");
  std::array<double, 19> xi{};
  for (int s : w.S)
    if (s >= -9 && s <= 9) xi[static_cast<std::size_t>(s + 9)] += 1.0;
  Outcome o;
  for (int x = -9; x <= 9; ++x) {
    if (x == 0) continue;
    double count = xi[static_cast<std::size_t>(x + 9)];
    double p = std::erfc(std::fabs(count - J) / std::sqrt(2.0 * J * (4.0 * std::abs(x) - 2.0)));
    if (x == -1) o.statistic = count;
    o.p_values.push_back(clamp_p(p));
    o.labels.push_back("x=" + std::string(x > 0 ? "+" : "") + std::to_string(x));
  }
  return o;
}

// ---- linear complexity ----

/// Berlekamp-Massey over GF(2): length of the shortest LFSR generating `s`.
inline std::size_t berlekamp_massey(std::span<const std::uint8_t> s) {
  const std::size_t n = s.size();
  std::vector<std::uint8_t> C(n + 1, 0), B(n + 1, 0), T;
  C[0] = B[0] = 1;
  std::size_t L = 0;
  std::ptrdiff_t m = -1;
  for (std::size_t N = 0; N < n; ++N) {
    std::uint8_t d = s[N];
    for (std::size_t i = 1; i <= L; ++i) d ^= C[i] & s[N - i];
    if (!d) continue;
    T = C;
    const std::size_t shift = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(N) - m);
    for (std::size_t i = 0; i + shift <= n; ++i) C[i + shift] ^= B[i];
    if (2 * L <= N) {
      L = N + 1 - L;
      m = static_cast<std::ptrdiff_t>(N);
      B = T;
    }
  }
  return L;
}

inline Outcome linear_complexity(const BitSequence& e, std::size_t M) {
  const std::size_t N = e.size() / M;
  if (N < 200) return not_applicable("need at least 200 blocks");
  static constexpr std::array<double, 7> kPi{0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833};
  const double Md = static_cast<double>(M);
  const double sign = (M % 2 == 0) ? 1.0 : -1.0;  // (-1)^M
  const double mu = Md / 2.0 + (9.0 - sign) / 36.0 - (Md / 3.0 + 2.0 / 9.0) / std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(M, 1000)));
  std::array<double, 7> nu{};
  for (std::size_t i = 0; i < N; ++i) {
    auto L = static_cast<double>(berlekamp_massey(e.bits().subspan(i * M, M)));
    double T = sign * (L - mu) + 2.0 / 9.0;
    std::size_t bin = T <= -2.5 ? 0 : T <= -1.5 ? 1 : T <= -0.5 ? 2 : T <= 0.5 ? 3 : T <= 1.5 ? 4 : T <= 2.5 ? 5 : 6;
    nu[bin] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    double ex = static_cast<double>(N) * kPi[i];
    chi2 += (nu[i] - ex) * (nu[i] - ex) / ex;
  }
  return {true, {}, chi2, {clamp_p(stats::igamc(3.0, chi2 / 2.0))}, {}};
}

}  // namespace lwcga::randtest::nist
