#pragma once

// Simulation scenarios and their text form:
//
//   seed = 7
//   horizon = 2000
//   link.delay_max = 4
//   router.prefixes = 2001:db8:1::/64@0, 2001:db8:2::/64@900
//
//   [node]
//   name = a
//   scheme = lwcga
//   interval = 300
//
//   [attacker]
//   kind = impersonation
//   victim = a
//
//   [event]
//   at = 500
//   kind = user_request
//   node = a
//
// Global keys come before the first section. '#' starts a comment.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lwcga/addr.hpp"
#include "lwcga/error.hpp"
#include "lwcga/lwcga.hpp"

namespace lwcga::nd {

enum class Scheme { Slaac, SendCga, Lwcga };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Slaac: return "slaac";
    case Scheme::SendCga: return "send";
    case Scheme::Lwcga: return "lwcga";
  }
  return "?";
}

struct NodeSpec {
  std::string name;
  Scheme scheme = Scheme::Slaac;
  int sec = 0;  // SEND only
  std::optional<MacAddress48> mac;  // default 02:00:00:00:00:<index+1>
  std::uint64_t start = 0;
  RegenerationPolicy policy;  // LW-CGA only
  std::optional<std::uint64_t> key_seed;
  std::optional<std::uint64_t> collector_seed;
};

enum class AttackKind { DadDos, Impersonation, Replay };

inline std::string to_string(AttackKind k) {
  switch (k) {
    case AttackKind::DadDos: return "dad_dos";
    case AttackKind::Impersonation: return "impersonation";
    case AttackKind::Replay: return "replay";
  }
  return "?";
}

/// What a forged NA carries in place of the victim's credentials.
enum class ForgeryMode {
  Fabricated,  // parameters built around the attacker's own key, validly self-signed
  Copied,      // the victim's captured parameters, signed with the attacker's key
  Absent,      // no parameters or signature at all
};

inline std::string to_string(ForgeryMode m) {
  switch (m) {
    case ForgeryMode::Fabricated: return "fabricated";
    case ForgeryMode::Copied: return "copied";
    case ForgeryMode::Absent: return "absent";
  }
  return "?";
}

struct AttackerSpec {
  std::string name;
  AttackKind kind = AttackKind::DadDos;
  std::optional<MacAddress48> mac;  // default 02:00:00:00:ff:<index+1>
  std::uint64_t start = 0;           // inactive before this tick
  std::string victim;                // Impersonation: node name
  ForgeryMode mode = ForgeryMode::Fabricated;
  std::uint64_t window = 100;  // Replay: capture to re-emission. Impersonation: sighting to forgery.
};

enum class EventKind { InterfaceChange, UserRequest };

struct ScenarioEvent {
  std::uint64_t at = 0;
  EventKind kind = EventKind::UserRequest;
  std::string node;
};

struct PrefixAnnouncement {
  SubnetPrefix64 prefix;
  std::uint64_t from = 0;  // advertised from this tick on
};

struct RouterSpec {
  std::vector<PrefixAnnouncement> prefixes;
  std::uint64_t ra_period = 100;
  MacAddress48 mac{{0x02, 0x00, 0x00, 0x00, 0xfe, 0x01}};
};

struct LinkSpec {
  double loss = 0.0;
  std::uint64_t delay_min = 1;
  std::uint64_t delay_max = 3;
};

struct Scenario {
  std::uint64_t seed = 1;
  std::uint64_t horizon = 1000;
  std::uint64_t dad_window = 20;
  std::uint64_t timestamp_window = 30;
  bool timestamp_check = true;
  LinkSpec link;
  std::optional<RouterSpec> router;
  std::vector<NodeSpec> nodes;
  std::vector<AttackerSpec> attackers;
  std::vector<ScenarioEvent> events;

  MacAddress48 node_mac(std::size_t i) const {
    if (nodes[i].mac) return *nodes[i].mac;
    return MacAddress48{{0x02, 0x00, 0x00, 0x00, static_cast<std::uint8_t>((i + 1) >> 8),
                         static_cast<std::uint8_t>(i + 1)}};
  }
  MacAddress48 attacker_mac(std::size_t i) const {
    if (attackers[i].mac) return *attackers[i].mac;
    return MacAddress48{{0x02, 0x00, 0x00, 0x00, 0xff, static_cast<std::uint8_t>(i + 1)}};
  }
  std::optional<std::size_t> node_index(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].name == name) return i;
    return std::nullopt;
  }

  void validate() const {
    if (nodes.empty()) throw Error("scenario has no nodes");
    if (!(link.loss >= 0.0 && link.loss < 1.0)) throw Error("link.loss must lie in [0, 1)");
    if (link.delay_min > link.delay_max) throw Error("link.delay_min exceeds link.delay_max");
    if (dad_window <= 2 * link.delay_max)
      throw Error("dad_window must exceed twice link.delay_max so a defending NA can arrive in time");
    if (timestamp_window == 0) throw Error("timestamp_window must be positive");
    std::set<std::string> names;
    for (const auto& n : nodes) {
      if (n.name.empty()) throw Error("node without a name");
      if (!names.insert(n.name).second) throw Error("duplicate node name '" + n.name + "'");
      if (n.scheme == Scheme::SendCga && (n.sec < 0 || n.sec > 7)) throw Error("node " + n.name + ": sec out of range");
      if (n.scheme == Scheme::Lwcga) n.policy.validate();
    }
    for (const auto& a : attackers) {
      if (a.kind == AttackKind::Impersonation && !node_index(a.victim))
        throw Error("attacker " + a.name + ": unknown victim '" + a.victim + "'");
      if (a.kind == AttackKind::Replay && a.window == 0) throw Error("attacker " + a.name + ": window must be positive");
    }
    for (const auto& e : events)
      if (!node_index(e.node)) throw Error("event at " + std::to_string(e.at) + ": unknown node '" + e.node + "'");
    if (router) {
      if (router->ra_period == 0) throw Error("router.ra_period must be positive");
      if (router->prefixes.empty()) throw Error("router has no prefixes");
      for (std::size_t i = 1; i < router->prefixes.size(); ++i)
        if (router->prefixes[i].from <= router->prefixes[i - 1].from)
          throw Error("router.prefixes must be listed in increasing tick order");
    }
  }
};

namespace scenario_detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ParseError("bad integer for " + std::string(key) + ": '" + std::string(v) + "'");
  return out;
}

inline double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(std::string(v), &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ParseError("bad number for " + std::string(key) + ": '" + std::string(v) + "'");
  }
}

inline bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("bad boolean for " + std::string(key) + ": '" + std::string(v) + "'");
}

inline RegenerationPolicy to_policy(std::string_view v, RegenerationPolicy base) {
  base.on_prefix_update = base.on_interface_change = base.on_user_request = false;
  if (v == "none") return base;
  for (auto part : lwcga::detail::split(v, ',')) {
    part = trim(part);
    if (part == "prefix_update") base.on_prefix_update = true;
    else if (part == "interface_change") base.on_interface_change = true;
    else if (part == "user_request") base.on_user_request = true;
    else throw ParseError("unknown regeneration trigger '" + std::string(part) + "'");
  }
  return base;
}

}  // namespace scenario_detail

inline Scenario parse_scenario(std::string_view text) {
  using namespace scenario_detail;
  enum class Section { Global, Node, Attacker, Event } section = Section::Global;
  Scenario s;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) { throw ParseError("scenario line " + std::to_string(lineno) + ": " + what); };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = line;
    if (auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
    l = trim(l);
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l == "[node]") {
        section = Section::Node;
        s.nodes.emplace_back();
        s.nodes.back().name = "n" + std::to_string(s.nodes.size());
      } else if (l == "[attacker]") {
        section = Section::Attacker;
        s.attackers.emplace_back();
        s.attackers.back().name = "attacker" + std::to_string(s.attackers.size());
      } else if (l == "[event]") {
        section = Section::Event;
        s.events.emplace_back();
      } else {
        fail("unknown section " + std::string(l));
      }
      continue;
    }
    auto eq = l.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    auto key = trim(l.substr(0, eq));
    auto val = trim(l.substr(eq + 1));
    try {
      switch (section) {
        case Section::Global:
          if (key == "seed") s.seed = to_u64(key, val);
          else if (key == "horizon") s.horizon = to_u64(key, val);
          else if (key == "dad_window") s.dad_window = to_u64(key, val);
          else if (key == "timestamp_window") s.timestamp_window = to_u64(key, val);
          else if (key == "timestamp_check") s.timestamp_check = to_bool(key, val);
          else if (key == "link.loss") s.link.loss = to_double(key, val);
          else if (key == "link.delay_min") s.link.delay_min = to_u64(key, val);
          else if (key == "link.delay_max") s.link.delay_max = to_u64(key, val);
          else if (key.starts_with("router.")) {
            if (!s.router) s.router.emplace();
            if (key == "router.ra_period") s.router->ra_period = to_u64(key, val);
            else if (key == "router.mac") s.router->mac = MacAddress48::parse(val);
            else if (key == "router.prefixes") {
              for (auto item : lwcga::detail::split(val, ',')) {
                item = trim(item);
                auto at = item.find('@');
                PrefixAnnouncement pa;
                pa.prefix = SubnetPrefix64::parse(trim(item.substr(0, at)));
                if (at != std::string_view::npos) pa.from = to_u64(key, trim(item.substr(at + 1)));
                s.router->prefixes.push_back(pa);
              }
            } else fail("unknown key " + std::string(key));
          } else fail("unknown key " + std::string(key));
          break;
        case Section::Node: {
          auto& n = s.nodes.back();
          if (key == "name") n.name = val;
          else if (key == "scheme") {
            if (val == "slaac") n.scheme = Scheme::Slaac;
            else if (val == "send") n.scheme = Scheme::SendCga;
            else if (val == "lwcga") n.scheme = Scheme::Lwcga;
            else fail("scheme must be slaac, send or lwcga");
          } else if (key == "sec") n.sec = static_cast<int>(to_u64(key, val));
          else if (key == "mac") n.mac = MacAddress48::parse(val);
          else if (key == "start") n.start = to_u64(key, val);
          else if (key == "policy") n.policy = to_policy(val, n.policy);
          else if (key == "interval") n.policy.interval = to_u64(key, val);
          else if (key == "key_seed") n.key_seed = to_u64(key, val);
          else if (key == "collector_seed") n.collector_seed = to_u64(key, val);
          else fail("unknown node key " + std::string(key));
          break;
        }
        case Section::Attacker: {
          auto& a = s.attackers.back();
          if (key == "name") a.name = val;
          else if (key == "kind") {
            if (val == "dad_dos") a.kind = AttackKind::DadDos;
            else if (val == "impersonation") a.kind = AttackKind::Impersonation;
            else if (val == "replay") a.kind = AttackKind::Replay;
            else fail("attacker kind must be dad_dos, impersonation or replay");
          } else if (key == "mac") a.mac = MacAddress48::parse(val);
          else if (key == "start") a.start = to_u64(key, val);
          else if (key == "victim") a.victim = val;
          else if (key == "mode") {
            if (val == "fabricated") a.mode = ForgeryMode::Fabricated;
            else if (val == "copied") a.mode = ForgeryMode::Copied;
            else if (val == "absent") a.mode = ForgeryMode::Absent;
            else fail("mode must be fabricated, copied or absent");
          } else if (key == "window") a.window = to_u64(key, val);
          else fail("unknown attacker key " + std::string(key));
          break;
        }
        case Section::Event: {
          auto& e = s.events.back();
          if (key == "at") e.at = to_u64(key, val);
          else if (key == "node") e.node = val;
          else if (key == "kind") {
            if (val == "interface_change") e.kind = EventKind::InterfaceChange;
            else if (val == "user_request") e.kind = EventKind::UserRequest;
            else fail("event kind must be interface_change or user_request");
          } else fail("unknown event key " + std::string(key));
          break;
        }
      }
    } catch (const ParseError& e) {
      std::string msg = e.what();
      if (msg.starts_with("scenario line")) throw;
      fail(msg);
    }
  }
  s.validate();
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace lwcga::nd
