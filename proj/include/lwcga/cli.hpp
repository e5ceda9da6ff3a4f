#pragma once

// Command-line front end. run() returns the process exit code: 0 success,
// 1 runtime failure, 2 usage error.

#include <openssl/rand.h>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lwcga/addr.hpp"
#include "lwcga/bench.hpp"
#include "lwcga/bit_sequence.hpp"
#include "lwcga/collector_config.hpp"
#include "lwcga/error.hpp"
#include "lwcga/lwcga.hpp"
#include "lwcga/nd_sim.hpp"
#include "lwcga/randtest.hpp"
#include "lwcga/report.hpp"
#include "lwcga/rsa_key.hpp"
#include "lwcga/send_cga.hpp"

namespace lwcga::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad flag value; reported like a command-line parse error.
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace cli_detail {

template <class F>
auto flag_value(const std::string& flag, F&& parse) {
  try {
    return parse();
  } catch (const ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

inline cga::Modifier128 random_modifier() {
  cga::Modifier128 m;
  if (RAND_bytes(m.bytes.data(), static_cast<int>(m.bytes.size())) != 1) throw Error("RAND_bytes failed");
  return m;
}

inline std::string hex(const std::vector<std::uint8_t>& v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (auto b : v) {
    s += kDigits[b >> 4];
    s += kDigits[b & 15];
  }
  return s;
}

inline void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  report::write_text(path, std::string(bytes.begin(), bytes.end()));
}

struct CollectorFlags {
  std::optional<std::string> clock;
  std::optional<std::uint64_t> seed;
  std::string config;

  void add_to(CLI::App* app) {
    app->add_option("--clock", clock, "hardware or virtual (default hardware, or as set in --config)")->check(CLI::IsMember({"hardware", "virtual"}));
    app->add_option("--seed", seed, "virtual clock seed (required with --clock virtual)");
    app->add_option("--config", config, "collector configuration file")->check(CLI::ExistingFile);
  }

  entropy::CollectorSetup resolve() const {
    entropy::CollectorSetup setup;
    if (!config.empty()) setup = entropy::load_collector_config(config);
    if (clock) setup.clock = *clock == "virtual" ? entropy::ClockKind::Virtual : entropy::ClockKind::HardwareCounter;
    if (seed) {
      setup.virtual_clock.seed = *seed;
      setup.seed_given = true;
    }
    if (setup.clock == entropy::ClockKind::Virtual && !setup.seed_given)
      throw UsageError("--seed is required with the virtual clock");
    return setup;
  }
};

}  // namespace cli_detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Address generation, randomness testing, benchmarking and ND simulation for CGA schemes", "lwcga"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");
  int status = kExitOk;

  // eui64
  std::string mac_text;
  auto* eui = app.add_subcommand("eui64", "EUI-64 interface identifier of a MAC address");
  eui->add_option("--mac", mac_text, "MAC address, aa:bb:cc:dd:ee:ff")->required();
  eui->callback([&] {
    auto mac = flag_value("--mac", [&] { return MacAddress48::parse(mac_text); });
    out << eui64_from_mac(mac).to_string() << "\n";
  });

  // cga gen / verify
  auto* cga_cmd = app.add_subcommand("cga", "SEND cryptographically generated addresses");
  cga_cmd->require_subcommand(1);
  int gen_sec = 0;
  std::string gen_prefix, gen_out, gen_key_out;
  std::optional<std::uint64_t> gen_seed;
  auto* cga_gen = cga_cmd->add_subcommand("gen", "generate a CGA");
  cga_gen->add_option("--sec", gen_sec, "security parameter 0..7")->required()->check(CLI::Range(0, 7));
  cga_gen->add_option("--prefix", gen_prefix, "64-bit subnet prefix, e.g. 2001:db8::/64")->required();
  cga_gen->add_option("--seed", gen_seed, "derive key and starting modifier from this seed");
  cga_gen->add_option("--out", gen_out, "write the CGA parameters here");
  cga_gen->add_option("--key-out", gen_key_out, "write the private key (DER) here");
  cga_gen->callback([&] {
    auto prefix = flag_value("--prefix", [&] { return SubnetPrefix64::parse(gen_prefix); });
    KeyPair key = gen_seed ? KeyPair::from_seed(*gen_seed) : KeyPair::generate();
    std::uint64_t s = gen_seed.value_or(0) ^ 0x6d6f646966696572ULL;
    auto modifier =
        gen_seed ? cga::Modifier128::from_u64(entropy::splitmix64(s), entropy::splitmix64(s)) : random_modifier();
    auto res = cga::cga_generate(key, cga::SecLevel(gen_sec), prefix, modifier);
    out << "address " << res.address.to_string() << "\n";
    out << "sec " << gen_sec << "\n";
    out << "modifier " << hex({res.params.modifier.bytes.begin(), res.params.modifier.bytes.end()}) << "\n";
    out << "hash2_iterations " << res.hash2_iterations << "\n";
    if (!gen_out.empty()) write_bytes(gen_out, res.params.serialize());
    if (!gen_key_out.empty()) write_bytes(gen_key_out, key.private_der());
  });

  std::string ver_addr, ver_params;
  int ver_sec = 0;
  auto* cga_ver = cga_cmd->add_subcommand("verify", "verify an address against CGA parameters");
  cga_ver->add_option("--addr", ver_addr, "IPv6 address")->required();
  cga_ver->add_option("--params", ver_params, "CGA parameters file")->required()->check(CLI::ExistingFile);
  cga_ver->add_option("--sec", ver_sec, "security parameter 0..7")->required()->check(CLI::Range(0, 7));
  cga_ver->callback([&] {
    auto addr = flag_value("--addr", [&] { return Ipv6Address::parse(ver_addr); });
    auto blob = read_file_bytes(ver_params);
    auto params = cga::CgaParameters::deserialize(blob);
    auto verdict = cga::cga_verify(addr, params, cga::SecLevel(ver_sec));
    out << cga::to_string(verdict) << "\n";
    if (verdict != cga::VerifyOutcome::Valid) status = kExitFailure;
  });

  // lwcga gen / bits
  auto* lw_cmd = app.add_subcommand("lwcga", "light-weight CGA from the entropy collector");
  lw_cmd->require_subcommand(1);
  std::string lw_prefix;
  CollectorFlags lw_gen_flags;
  auto* lw_gen = lw_cmd->add_subcommand("gen", "generate an LW-CGA address");
  lw_gen->add_option("--prefix", lw_prefix, "64-bit subnet prefix")->required();
  lw_gen_flags.add_to(lw_gen);
  lw_gen->callback([&] {
    auto prefix = flag_value("--prefix", [&] { return SubnetPrefix64::parse(lw_prefix); });
    auto setup = lw_gen_flags.resolve();
    auto clock = setup.make_clock();
    entropy::EntropyCollector collector(setup.collector);
    collector.collect_entropy(clock);
    KeyPair key = setup.seed_given ? KeyPair::from_seed(setup.virtual_clock.seed) : KeyPair::generate();
    auto binding = lwcga_generate(prefix, collector, clock, key);
    out << "address " << binding.address.to_string() << "\n";
    out << "iid " << binding.address.iid.to_string() << "\n";
    out << "clock " << entropy::to_string(clock.provenance()) << "\n";
  });

  std::size_t nbits = 0;
  std::string bits_out, bits_format = "raw";
  CollectorFlags bits_flags;
  auto* lw_bits = lw_cmd->add_subcommand("bits", "write collector output bits to a file");
  lw_bits->add_option("--n", nbits, "number of bits")->required()->check(CLI::PositiveNumber);
  lw_bits->add_option("--out", bits_out, "output file")->required();
  lw_bits->add_option("--format", bits_format, "raw (packed bytes) or ascii ('0'/'1')")
      ->check(CLI::IsMember({"raw", "ascii"}));
  bits_flags.add_to(lw_bits);
  lw_bits->callback([&] {
    auto setup = bits_flags.resolve();
    auto clock = setup.make_clock();
    entropy::EntropyCollector collector(setup.collector);
    collector.collect_entropy(clock);
    auto bits = collector.generate_bits(clock, nbits);
    write_bit_file(bits_out, bits, bits_format == "ascii" ? BitFileFormat::Ascii : BitFileFormat::Raw);
    out << "wrote " << nbits << " bits to " << bits_out << " (clock " << entropy::to_string(clock.provenance())
        << ")\n";
  });

  // nist run
  auto* nist_cmd = app.add_subcommand("nist", "NIST SP 800-22 randomness tests");
  nist_cmd->require_subcommand(1);
  std::string nist_in, nist_format = "auto", nist_report, nist_report_format = "json";
  double nist_alpha = 0.01;
  std::vector<std::string> nist_tests;
  auto* nist_run = nist_cmd->add_subcommand("run", "run the suite on a bit file");
  nist_run->add_option("--in", nist_in, "bit file")->required()->check(CLI::ExistingFile);
  nist_run->add_option("--alpha", nist_alpha, "significance level")->check(CLI::Range(0.001, 0.01));
  nist_run->add_option("--tests", nist_tests, "subset, e.g. frequency,serial:8")->delimiter(',');
  nist_run->add_option("--input-format", nist_format, "raw, ascii or auto")->check(CLI::IsMember({"raw", "ascii", "auto"}));
  nist_run->add_option("--report", nist_report, "write the report here");
  nist_run->add_option("--report-format", nist_report_format, "json or table")->check(CLI::IsMember({"json", "table"}));
  nist_run->callback([&] {
    std::vector<randtest::TestKind> kinds;
    for (const auto& t : nist_tests) kinds.push_back(flag_value("--tests", [&] { return randtest::parse_kind(t); }));
    auto fmt = nist_format == "raw" ? BitFileFormat::Raw : nist_format == "ascii" ? BitFileFormat::Ascii : BitFileFormat::Auto;
    auto bits = read_bit_file(nist_in, fmt);
    if (bits.empty()) throw Error(nist_in + " holds no bits");
    auto rep = randtest::run_suite(bits, nist_alpha, kinds, {nist_in, 0, ""});
    out << report::suite_table(rep);
    if (!nist_report.empty()) report::emit_report(rep, report::parse_format(nist_report_format), nist_report);
  });

  // bench
  bench::BenchConfig bcfg;
  std::string bench_out, bench_format = "json";
  auto* bench_cmd = app.add_subcommand("bench", "SEND vs LW-CGA generation latency");
  bench_cmd->add_option("--trials", bcfg.trials, "trials (>= 30)")->check(CLI::Range(30, 1000000));
  bench_cmd->add_option("--seed", bcfg.seed, "seed for modifiers and the virtual clock")->required();
  bench_cmd->add_option("--sec", bcfg.sec_levels, "SEND sec levels")->delimiter(',')->check(CLI::Range(0, 2));
  bench_cmd->add_flag("--parallel", bcfg.parallel, "spread trials over threads (counts stay valid, times do not)");
  bench_cmd->add_option("--out", bench_out, "write the records here");
  bench_cmd->add_option("--format", bench_format, "json or table")->check(CLI::IsMember({"json", "table"}));
  bench_cmd->callback([&] {
    auto recs = bench::bench_schemes(bcfg);
    out << report::bench_table(recs);
    if (!bench_out.empty()) report::emit_report(recs, report::parse_format(bench_format), bench_out);
  });

  // sim run
  auto* sim_cmd = app.add_subcommand("sim", "neighbor discovery simulation");
  sim_cmd->require_subcommand(1);
  std::string scenario_path, trace_path;
  auto* sim_run = sim_cmd->add_subcommand("run", "run a scenario file");
  sim_run->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
  sim_run->add_option("--out", trace_path, "trace output file")->required();
  sim_run->callback([&] {
    auto scenario = nd::load_scenario(scenario_path);
    auto trace = nd::run_scenario(scenario);
    report::write_text(trace_path, trace.to_text());
    for (const auto& n : trace.nodes)
      out << n.name << " " << nd::to_string(n.scheme) << " " << nd::to_string(n.phase) << " "
          << (n.permanent.empty() ? std::string("-") : n.permanent.back().to_string()) << "\n";
  });

  std::vector<const char*> argv{"lwcga"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return status;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

}  // namespace lwcga::cli
