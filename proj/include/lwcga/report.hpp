#pragma once

// Report emission: JSON documents that parse back to the same values, and
// fixed-width text tables for people.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lwcga/bench.hpp"
#include "lwcga/error.hpp"
#include "lwcga/randtest.hpp"

namespace lwcga::report {

using Json = nlohmann::ordered_json;

enum class Format { Structured, Table };

inline Format parse_format(const std::string& s) {
  if (s == "json" || s == "structured") return Format::Structured;
  if (s == "table" || s == "text") return Format::Table;
  throw ParseError("format must be json or table");
}

// ---- suite reports ----

inline Json to_json(const randtest::TestResult& r) {
  Json params = Json::object();
  if (r.kind.m) params["m"] = r.kind.m;
  if (!r.kind.templ.empty()) params["template"] = r.kind.templ;
  return Json{{"test", randtest::kind_key(r.kind.id)},
              {"label", randtest::kind_label(r.kind)},
              {"parameters", params},
              {"statistic", r.statistic},
              {"p_values", r.p_values},
              {"p_labels", r.p_labels},
              {"applicable", r.applicable},
              {"note", r.note},
              {"pass", r.pass}};
}

inline Json to_json(const randtest::SuiteReport& rep) {
  Json results = Json::array();
  for (const auto& r : rep.results) results.push_back(to_json(r));
  return Json{{"alpha", rep.alpha},
              {"sequence",
               {{"source", rep.sequence.source},
                {"length", rep.sequence.length},
                {"provenance", rep.sequence.provenance}}},
              {"results", results}};
}

inline randtest::TestResult test_result_from_json(const Json& j) {
  randtest::TestResult r;
  std::string name = j.at("test").get<std::string>();
  const auto& params = j.at("parameters");
  if (params.contains("template")) name += ":" + params.at("template").get<std::string>();
  else if (params.contains("m")) name += ":" + std::to_string(params.at("m").get<std::size_t>());
  r.kind = randtest::parse_kind(name);
  r.statistic = j.at("statistic").get<double>();
  r.p_values = j.at("p_values").get<std::vector<double>>();
  r.p_labels = j.at("p_labels").get<std::vector<std::string>>();
  r.applicable = j.at("applicable").get<bool>();
  r.note = j.at("note").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  return r;
}

inline randtest::SuiteReport suite_from_json(const Json& j) {
  randtest::SuiteReport rep;
  rep.alpha = j.at("alpha").get<double>();
  const auto& s = j.at("sequence");
  rep.sequence = {s.at("source").get<std::string>(), s.at("length").get<std::size_t>(),
                  s.at("provenance").get<std::string>()};
  for (const auto& r : j.at("results")) rep.results.push_back(test_result_from_json(r));
  return rep;
}

inline std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", p);
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

/// Test name, headline p-value, verdict. Excursion rows show x = +1 and
/// x = -1; their other states only affect the verdict.
inline std::string suite_table(const randtest::SuiteReport& rep) {
  std::string out;
  out += "sequence: " + (rep.sequence.source.empty() ? std::string("-") : rep.sequence.source) +
         "  n=" + std::to_string(rep.sequence.length);
  if (!rep.sequence.provenance.empty()) out += "  " + rep.sequence.provenance;
  out += "  alpha=" + format_p(rep.alpha) + "\n";
  out += pad("NIST statistical test", 56) + pad("p-value", 12) + "result\n";
  for (const auto& r : rep.results) {
    out += pad(randtest::kind_label(r.kind), 56);
    if (!r.applicable) {
      out += pad("-", 12) + "n/a (" + r.note + ")\n";
      continue;
    }
    out += pad(format_p(r.headline_p()), 12) + (r.pass ? "pass" : "FAIL");
    if (r.p_values.size() > 1) out += "  (min " + format_p(r.min_p()) + " over " + std::to_string(r.p_values.size()) + ")";
    out += "\n";
  }
  return out;
}

// ---- benchmark records ----

inline Json stats_json(const std::vector<double>& v) {
  auto s = bench::summarize(v);
  return Json{{"median", s.median}, {"q1", s.q1}, {"q3", s.q3}, {"iqr", s.iqr()}, {"mean", s.mean}};
}

inline Json to_json(const bench::BenchRecord& r) {
  return Json{{"scheme", r.scheme.name},
              {"sec", r.scheme.sec},
              {"trials", r.trials},
              {"summary",
               {{"key_generation", stats_json(r.key_generation)},
                {"key_verification", stats_json(r.key_verification)},
                {"cga_generation", stats_json(r.cga_generation)},
                {"iid_total", stats_json(r.iid_total)},
                {"regeneration", stats_json(r.regeneration)},
                {"prefix_regeneration", stats_json(r.prefix_regeneration)}}},
              {"samples",
               {{"key_generation", r.key_generation},
                {"key_verification", r.key_verification},
                {"cga_generation", r.cga_generation},
                {"iid_total", r.iid_total},
                {"regeneration", r.regeneration},
                {"prefix_regeneration", r.prefix_regeneration}}},
              {"counts",
               {{"iid_digests", r.iid_digests},
                {"regeneration_digests", r.regeneration_digests},
                {"hash2_iterations", r.hash2_iterations},
                {"clock_reads", r.clock_reads}}}};
}

inline Json to_json(const std::vector<bench::BenchRecord>& recs) {
  Json arr = Json::array();
  for (const auto& r : recs) arr.push_back(to_json(r));
  return Json{{"unit", "seconds"}, {"records", arr}};
}

inline std::vector<bench::BenchRecord> bench_from_json(const Json& j) {
  std::vector<bench::BenchRecord> out;
  for (const auto& e : j.at("records")) {
    bench::BenchRecord r;
    r.scheme = {e.at("scheme").get<std::string>(), e.at("sec").get<int>()};
    r.trials = e.at("trials").get<std::size_t>();
    const auto& s = e.at("samples");
    r.key_generation = s.at("key_generation").get<std::vector<double>>();
    r.key_verification = s.at("key_verification").get<std::vector<double>>();
    r.cga_generation = s.at("cga_generation").get<std::vector<double>>();
    r.iid_total = s.at("iid_total").get<std::vector<double>>();
    r.regeneration = s.at("regeneration").get<std::vector<double>>();
    r.prefix_regeneration = s.at("prefix_regeneration").get<std::vector<double>>();
    const auto& c = e.at("counts");
    r.iid_digests = c.at("iid_digests").get<std::vector<std::uint64_t>>();
    r.regeneration_digests = c.at("regeneration_digests").get<std::vector<std::uint64_t>>();
    r.hash2_iterations = c.at("hash2_iterations").get<std::vector<std::uint64_t>>();
    r.clock_reads = c.at("clock_reads").get<std::vector<std::uint64_t>>();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string format_s(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline double mean_u64(const std::vector<std::uint64_t>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (auto x : v) s += static_cast<double>(x);
  return s / static_cast<double>(v.size());
}

/// Medians in seconds, then IQR and mean rows, then operation counts.
inline std::string bench_table(const std::vector<bench::BenchRecord>& recs) {
  using bench::summarize;
  std::string out;
  const std::vector<std::string> cols{"Key generation", "Key verification", "CGA generation", "IID total",
                                      "Regeneration", "Prefix regen"};
  auto row = [&](const std::string& head, auto pick) {
    std::string line = pad(head, 18);
    for (const auto& r : recs) line += pad(pick(r), 18);
    return line + "\n";
  };
  auto header = [&](const std::string& title) {
    std::string line = pad(title, 18);
    for (const auto& r : recs) line += pad(r.scheme.name, 18);
    return line + "\n";
  };
  auto columns = [](const bench::BenchRecord& r) {
    return std::vector<const std::vector<double>*>{&r.key_generation, &r.key_verification, &r.cga_generation,
                                                   &r.iid_total,      &r.regeneration,     &r.prefix_regeneration};
  };
  out += "trials: " + std::to_string(recs.empty() ? 0 : recs.front().trials) + "\n\n";
  out += header("median (s)");
  for (std::size_t c = 0; c < cols.size(); ++c)
    out += row(cols[c], [&](const auto& r) { return format_s(summarize(*columns(r)[c]).median); });
  out += "\n" + header("IQR (s)");
  for (std::size_t c = 0; c < cols.size(); ++c)
    out += row(cols[c], [&](const auto& r) { return format_s(summarize(*columns(r)[c]).iqr()); });
  out += "\n" + header("mean (s)");
  for (std::size_t c = 0; c < cols.size(); ++c)
    out += row(cols[c], [&](const auto& r) { return format_s(summarize(*columns(r)[c]).mean); });
  out += "\n" + header("mean count");
  out += row("IID digests", [](const auto& r) { return format_s(mean_u64(r.iid_digests)); });
  out += row("Regen digests", [](const auto& r) { return format_s(mean_u64(r.regeneration_digests)); });
  out += row("Hash2 iters", [](const auto& r) { return format_s(mean_u64(r.hash2_iterations)); });
  out += row("Clock reads", [](const auto& r) { return format_s(mean_u64(r.clock_reads)); });
  return out;
}

// ---- files ----

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("short write to " + path);
}

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

template <class T>
std::string render(const T& data, Format fmt) {
  if (fmt == Format::Structured) return to_json(data).dump(2) + "\n";
  if constexpr (std::is_same_v<T, randtest::SuiteReport>) return suite_table(data);
  else return bench_table(data);
}

template <class T>
void emit_report(const T& data, Format fmt, const std::string& path) {
  write_text(path, render(data, fmt));
}

}  // namespace lwcga::report
