#pragma once

// Discrete-event simulation of address autoconfiguration on one shared
// link. Nodes run SLAAC, SEND-CGA or LW-CGA; attackers listen to every
// frame. Events are ordered by (tick, insertion sequence) and every random
// draw (delay, loss, modifiers, nonces) comes from one per-run splitmix64
// stream, so a scenario fully determines its trace.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lwcga/addr.hpp"
#include "lwcga/clock_source.hpp"
#include "lwcga/entropy_collector.hpp"
#include "lwcga/lwcga.hpp"
#include "lwcga/nd_message.hpp"
#include "lwcga/rsa_key.hpp"
#include "lwcga/scenario.hpp"
#include "lwcga/send_cga.hpp"

namespace lwcga::nd {

enum class Phase { Idle, Tentative, Configured, Disabled };

inline std::string to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Tentative: return "Tentative";
    case Phase::Configured: return "Configured";
    case Phase::Disabled: return "Disabled";
  }
  return "?";
}

inline constexpr int kMaxDadAttempts = 3;

struct TraceEvent {
  std::uint64_t tick = 0;
  std::string node;
  std::string event;
  std::string payload;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct NodeMetrics {
  std::optional<std::uint64_t> config_latency;  // ticks from start to first Configured
  std::uint64_t regenerations = 0;
  std::uint64_t dad_failures = 0;
  std::uint64_t forged_accepted = 0;  // forged or replayed NAs this node believed
  std::uint64_t forged_rejected = 0;
  std::uint64_t rejected = 0;  // every verification failure, forged or not

  friend bool operator==(const NodeMetrics&, const NodeMetrics&) = default;
};

struct NodeSummary {
  std::string name;
  Scheme scheme = Scheme::Slaac;
  Phase phase = Phase::Idle;
  std::vector<Ipv6Address> permanent;
  int dad_attempts = 0;
  NodeMetrics metrics;

  friend bool operator==(const NodeSummary&, const NodeSummary&) = default;
};

struct SimTrace {
  std::vector<TraceEvent> events;
  std::vector<NodeSummary> nodes;

  std::size_t count(std::string_view event) const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.event == event;
    return n;
  }
  std::size_t count(std::string_view node, std::string_view event) const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.node == node && e.event == event;
    return n;
  }
  const NodeSummary* node(std::string_view name) const {
    for (const auto& n : nodes)
      if (n.name == name) return &n;
    return nullptr;
  }

  /// One line per event, then one `final` and one `metrics` line per node.
  std::string to_text() const {
    std::string out;
    for (const auto& e : events) {
      out += "tick=" + std::to_string(e.tick) + " node=" + e.node + " event=" + e.event;
      if (!e.payload.empty()) out += " " + e.payload;
      out += '\n';
    }
    for (const auto& n : nodes) {
      out += "final node=" + n.name + " scheme=" + to_string(n.scheme) + " phase=" + to_string(n.phase) +
             " dad_attempts=" + std::to_string(n.dad_attempts) + " addrs=";
      for (std::size_t i = 0; i < n.permanent.size(); ++i) out += (i ? "," : "") + n.permanent[i].to_string();
      if (n.permanent.empty()) out += "-";
      out += '\n';
    }
    for (const auto& n : nodes) {
      const auto& m = n.metrics;
      out += "metrics node=" + n.name + " config_latency=" +
             (m.config_latency ? std::to_string(*m.config_latency) : std::string("-")) +
             " regenerations=" + std::to_string(m.regenerations) + " dad_failures=" + std::to_string(m.dad_failures) +
             " forged_accepted=" + std::to_string(m.forged_accepted) +
             " forged_rejected=" + std::to_string(m.forged_rejected) + " rejected=" + std::to_string(m.rejected) +
             '\n';
    }
    return out;
  }

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

namespace sim_detail {

/// Deterministic keys are costly to derive; runs share them by seed.
inline std::shared_ptr<const KeyPair> cached_key(std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const KeyPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[seed];
  if (!slot) slot = std::make_shared<const KeyPair>(KeyPair::from_seed(seed));
  return slot;
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
  return entropy::splitmix64(s);
}

}  // namespace sim_detail

class Simulator {
 public:
  explicit Simulator(Scenario s) : sc_(std::move(s)) {
    sc_.validate();
    rng_state_ = sim_detail::derive(sc_.seed, 0x51b);
    for (std::size_t i = 0; i < sc_.nodes.size(); ++i) nodes_.push_back(make_node(i));
    for (std::size_t i = 0; i < sc_.attackers.size(); ++i) {
      Attacker a;
      a.spec = sc_.attackers[i];
      a.mac = sc_.attacker_mac(i);
      a.key = sim_detail::cached_key(sim_detail::derive(sc_.seed, 0xa77ac000 + i));
      if (a.spec.kind == AttackKind::Impersonation) a.victim = *sc_.node_index(a.spec.victim);
      attackers_.push_back(std::move(a));
    }
  }

  SimTrace run() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      schedule(nodes_[i].spec.start, StartNode{i});
      if (nodes_[i].spec.scheme == Scheme::Lwcga && nodes_[i].spec.policy.interval)
        schedule(*nodes_[i].spec.policy.interval, IntervalTimer{i});
    }
    if (sc_.router) schedule(0, RouterTimer{});
    for (const auto& e : sc_.events) schedule(e.at, UserEvent{*sc_.node_index(e.node), e.kind});

    while (!queue_.empty() && queue_.top().tick < sc_.horizon) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.tick;
      std::visit([this](auto& body) { handle(body); }, ev.body);
    }

    SimTrace out;
    out.events = std::move(trace_);
    for (const auto& n : nodes_)
      out.nodes.push_back({n.spec.name, n.spec.scheme, n.phase, n.permanent, n.dad_attempts, n.metrics});
    return out;
  }

 private:
  enum class Role { Node, Attacker, Router };
  struct Endpoint {
    Role role = Role::Node;
    std::size_t index = 0;
  };

  struct Frame {
    NdMessage msg;
    bool forged = false;  // emitted by an attacker
    Endpoint from;
  };

  struct StartNode {
    std::size_t node;
  };
  struct Deliver {
    Endpoint to;
    Frame frame;
  };
  struct DadTimeout {
    std::size_t node;
    std::uint64_t token;
  };
  struct RouterTimer {};
  struct IntervalTimer {
    std::size_t node;
  };
  struct UserEvent {
    std::size_t node;
    EventKind kind;
  };
  struct Reemit {
    std::size_t attacker;
    Frame frame;
  };
  struct Forge {
    std::size_t attacker;
    NdMessage observed;
  };
  using Body = std::variant<StartNode, Deliver, DadTimeout, RouterTimer, IntervalTimer, UserEvent, Reemit, Forge>;

  struct Event {
    std::uint64_t tick;
    std::uint64_t seq;
    Body body;
    bool operator>(const Event& o) const { return tick != o.tick ? tick > o.tick : seq > o.seq; }
  };

  enum class Purpose { LinkLocal, Global };

  // What the current tentative address is for, and what to do once it sticks.
  struct Pending {
    Purpose purpose = Purpose::LinkLocal;
    std::optional<Ipv6Address> replaces;
    std::optional<cga::CgaParameters> params;  // SEND
  };

  struct Work {
    enum Kind { Prefix, Regenerate } kind;
    SubnetPrefix64 prefix;
    std::optional<RegenerationTrigger> trigger;
  };

  struct Node {
    NodeSpec spec;
    MacAddress48 mac;
    Phase phase = Phase::Idle;
    std::optional<Ipv6Address> tentative;
    Pending pending;
    std::vector<Ipv6Address> permanent;
    int dad_attempts = 0;
    std::uint64_t dad_token = 0;
    std::shared_ptr<const KeyPair> key;
    std::map<Ipv6Address, cga::CgaParameters> params;  // SEND: per permanent address
    std::unique_ptr<entropy::EntropyCollector> collector;
    std::optional<entropy::ClockSource> clock;
    std::map<Ipv6Address, std::uint64_t> generated_at;  // LW-CGA binding instants
    std::map<Ipv6Address, PublicKeyBlob> pinned;
    std::map<Ipv6Address, MacAddress48> neighbors;
    std::optional<SubnetPrefix64> global_prefix;
    std::optional<Ipv6Address> global;
    std::deque<Work> work;
    bool solicited_router = false;
    NodeMetrics metrics;
  };

  struct Attacker {
    AttackerSpec spec;
    MacAddress48 mac;
    std::shared_ptr<const KeyPair> key;
    std::size_t victim = 0;
    std::set<Ipv6Address> forged_targets;
  };

  // ---- plumbing ----

  std::uint64_t draw() { return entropy::splitmix64(rng_state_); }

  template <class T>
  void schedule(std::uint64_t tick, T body) {
    queue_.push(Event{tick, seq_++, Body{std::move(body)}});
  }

  void log(const std::string& who, std::string event, std::string payload = {}) {
    trace_.push_back({now_, who, std::move(event), std::move(payload)});
  }

  std::string name_of(Endpoint e) const {
    switch (e.role) {
      case Role::Node: return nodes_[e.index].spec.name;
      case Role::Attacker: return attackers_[e.index].spec.name;
      case Role::Router: return "router";
    }
    return "?";
  }

  /// Every other station hears the frame after its own delay, unless lost.
  void transmit(Endpoint from, NdMessage msg, bool forged = false) {
    Frame f{std::move(msg), forged, from};
    log(name_of(from), "tx", summary(f.msg));
    std::vector<Endpoint> receivers;
    for (std::size_t i = 0; i < nodes_.size(); ++i) receivers.push_back({Role::Node, i});
    for (std::size_t i = 0; i < attackers_.size(); ++i) receivers.push_back({Role::Attacker, i});
    if (sc_.router) receivers.push_back({Role::Router, 0});
    const std::uint64_t span = sc_.link.delay_max - sc_.link.delay_min + 1;
    for (auto to : receivers) {
      if (to.role == from.role && to.index == from.index) continue;
      std::uint64_t delay = sc_.link.delay_min + draw() % span;
      double u = static_cast<double>(draw() >> 11) * 0x1.0p-53;
      if (u < sc_.link.loss) {
        log(name_of(from), "loss", "to=" + name_of(to) + " kind=" + to_string(f.msg.kind));
        continue;
      }
      schedule(now_ + delay, Deliver{to, f});
    }
  }

  Node make_node(std::size_t i) {
    Node n;
    n.spec = sc_.nodes[i];
    n.mac = sc_.node_mac(i);
    if (n.spec.scheme != Scheme::Slaac)
      n.key = sim_detail::cached_key(n.spec.key_seed.value_or(sim_detail::derive(sc_.seed, 0x6e0de000 + i)));
    if (n.spec.scheme == Scheme::Lwcga) {
      entropy::VirtualClockConfig vc;
      vc.seed = n.spec.collector_seed.value_or(sim_detail::derive(sc_.seed, 0xc011ec70 + i));
      n.clock = entropy::ClockSource::make_virtual(vc);
      n.collector = std::make_unique<entropy::EntropyCollector>();
      n.collector->collect_entropy(*n.clock);
    }
    return n;
  }

  // ---- credentials ----

  /// The CGA parameters a node vouches for `addr` with.
  std::optional<cga::CgaParameters> params_for(const Node& n, const Ipv6Address& addr) const {
    if (n.spec.scheme == Scheme::SendCga) {
      if (auto it = n.params.find(addr); it != n.params.end()) return it->second;
      return std::nullopt;
    }
    if (n.spec.scheme == Scheme::Lwcga)
      return cga::CgaParameters{cga::Modifier128{}, addr.prefix, cga::CollisionCount{0}, n.key->public_key()};
    return std::nullopt;
  }

  void add_credentials(const Node& n, const Ipv6Address& addr, NdMessage& m) {
    auto p = params_for(n, addr);
    if (!p) return;
    m.options.push_back(opt::CgaParams{p->serialize()});
    m.options.push_back(opt::Timestamp{now_});
    if (n.spec.scheme == Scheme::SendCga) {
      std::vector<std::uint8_t> nonce(8);
      std::uint64_t r = draw();
      for (int i = 0; i < 8; ++i) nonce[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(r >> (8 * i));
      m.options.push_back(opt::Nonce{std::move(nonce)});
    }
    sign(m, *n.key);
  }

  NdMessage advertisement(const Node& n, const Ipv6Address& addr, const Ipv6Address& dst) {
    NdMessage m{MessageKind::NA, addr, dst, addr, {opt::TargetLinkLayerAddr{n.mac}}};
    add_credentials(n, addr, m);
    return m;
  }

  /// Verdict of a secured-scheme receiver on an NA; empty means accepted.
  std::string verify_na(Node& n, const NdMessage& m) {
    if (n.spec.scheme == Scheme::Slaac) return {};
    auto* cp = m.find<opt::CgaParams>();
    auto* sig = m.find<opt::RsaSignature>();
    auto* ts = m.find<opt::Timestamp>();
    if (!cp || !sig || !ts) return "unsecured";
    if (!m.target || !(*m.target == m.src)) return "source_target_mismatch";
    cga::CgaParameters params;
    try {
      params = cga::CgaParameters::deserialize(cp->blob);
    } catch (const Error&) {
      return "malformed_params";
    }
    if (n.spec.scheme == Scheme::SendCga) {
      auto outcome = cga::cga_verify(m.src, params, cga::sec_from_iid(m.src.iid));
      if (outcome != cga::VerifyOutcome::Valid) return "cga_" + std::string(cga::to_string(outcome));
    }
    if (!verify_nd_signature(params.public_key, signed_payload(m), sig->sig).accepted) return "bad_signature";
    if (n.spec.scheme == Scheme::Lwcga) {
      if (auto it = n.pinned.find(m.src); it != n.pinned.end() && !(it->second == params.public_key))
        return "pin_mismatch";
    }
    if (sc_.timestamp_check) {
      std::uint64_t age = now_ >= ts->t ? now_ - ts->t : ts->t - now_;
      if (age > sc_.timestamp_window) return "stale_timestamp";
    }
    if (n.spec.scheme == Scheme::Lwcga && !n.pinned.count(m.src)) {
      n.pinned.emplace(m.src, params.public_key);
      log(n.spec.name, "pin", "addr=" + m.src.to_string());
    }
    return {};
  }

  // ---- node behaviour ----

  static bool owns(const Node& n, const Ipv6Address& a) {
    return std::find(n.permanent.begin(), n.permanent.end(), a) != n.permanent.end();
  }

  bool listening(const Node& n, const Ipv6Address& dst) const {
    if (dst == kAllNodesMulticast) return true;
    if (n.tentative && dst == solicited_node_multicast(*n.tentative)) return true;
    for (const auto& a : n.permanent)
      if (dst == a || dst == solicited_node_multicast(a)) return true;
    return false;
  }

  void begin_dad(std::size_t i) {
    Node& n = nodes_[i];
    n.phase = Phase::Tentative;
    ++n.dad_token;
    log(n.spec.name, "dad_start", "addr=" + n.tentative->to_string() + " attempt=" + std::to_string(n.dad_attempts));
    NdMessage ns{MessageKind::NS, Ipv6Address{}, solicited_node_multicast(*n.tentative), *n.tentative, {}};
    transmit({Role::Node, i}, std::move(ns));
    schedule(now_ + sc_.dad_window, DadTimeout{i, n.dad_token});
  }

  /// Tentative link-local address for a first start.
  void form_link_local(Node& n) {
    switch (n.spec.scheme) {
      case Scheme::Slaac: n.tentative = make_link_local(eui64_from_mac(n.mac)); break;
      case Scheme::SendCga: {
        auto res = cga::cga_generate(*n.key, cga::SecLevel(n.spec.sec), kLinkLocalPrefix,
                                     cga::Modifier128::from_u64(draw(), draw()));
        n.tentative = res.address;
        n.pending.params = res.params;
        break;
      }
      case Scheme::Lwcga: n.tentative = make_link_local(lwcga_iid(*n.collector, *n.clock)); break;
    }
  }

  void handle(StartNode& e) {
    Node& n = nodes_[e.node];
    if (n.phase != Phase::Idle) return;
    log(n.spec.name, "start", "scheme=" + to_string(n.spec.scheme) + " mac=" + n.mac.to_string());
    form_link_local(n);
    n.pending.purpose = Purpose::LinkLocal;
    n.dad_attempts = 1;
    begin_dad(e.node);
  }

  void handle(DadTimeout& e) {
    Node& n = nodes_[e.node];
    if (n.phase != Phase::Tentative || e.token != n.dad_token || !n.tentative) return;
    const Ipv6Address addr = *n.tentative;
    n.tentative.reset();
    n.permanent.push_back(addr);
    if (n.pending.replaces) {
      std::erase(n.permanent, *n.pending.replaces);
      n.params.erase(*n.pending.replaces);
      n.generated_at.erase(*n.pending.replaces);
    }
    if (n.pending.params) n.params[addr] = *n.pending.params;
    n.generated_at[addr] = now_;
    if (n.pending.purpose == Purpose::Global) {
      n.global = addr;
      n.global_prefix = addr.prefix;
    }
    n.phase = Phase::Configured;
    n.dad_attempts = 0;
    if (!n.metrics.config_latency) n.metrics.config_latency = now_ - n.spec.start;
    log(n.spec.name, "configured", "addr=" + addr.to_string());
    transmit({Role::Node, e.node}, advertisement(n, addr, kAllNodesMulticast));
    if (!n.solicited_router && sc_.router) {
      n.solicited_router = true;
      transmit({Role::Node, e.node},
               NdMessage{MessageKind::RS, addr, kAllRoutersMulticast, std::nullopt, {opt::SourceLinkLayerAddr{n.mac}}});
    }
    n.pending = {};
    run_work(e.node);
  }

  void collision(std::size_t i, const std::string& reason) {
    Node& n = nodes_[i];
    ++n.metrics.dad_failures;
    log(n.spec.name, "dad_collision",
        "addr=" + n.tentative->to_string() + " attempt=" + std::to_string(n.dad_attempts) + " reason=" + reason);
    if (n.dad_attempts >= kMaxDadAttempts) {
      n.phase = Phase::Disabled;
      n.tentative.reset();
      log(n.spec.name, "disabled", "attempts=" + std::to_string(n.dad_attempts));
      log(n.spec.name, "warning", "duplicate address detected " + std::to_string(kMaxDadAttempts) +
                                      " times, interface disabled");
      return;
    }
    ++n.dad_attempts;
    switch (n.spec.scheme) {
      case Scheme::Slaac: break;  // EUI-64 again: the same address
      case Scheme::SendCga: {
        auto res = cga::cga_after_collision(*n.pending.params, cga::SecLevel(n.spec.sec));
        n.tentative = res.address;
        n.pending.params = res.params;
        break;
      }
      case Scheme::Lwcga: n.tentative = make_address(n.tentative->prefix, lwcga_iid(*n.collector, *n.clock)); break;
    }
    begin_dad(i);
  }

  /// Address that regeneration replaces: the global one if present.
  static std::optional<Ipv6Address> current_address(const Node& n) {
    if (n.global) return n.global;
    for (const auto& a : n.permanent)
      if (a.prefix == kLinkLocalPrefix) return a;
    return std::nullopt;
  }

  void run_work(std::size_t i) {
    Node& n = nodes_[i];
    while (n.phase == Phase::Configured && !n.work.empty()) {
      Work w = n.work.front();
      n.work.pop_front();
      if (w.kind == Work::Prefix) start_prefix(i, w.prefix);
      else start_regeneration(i, *w.trigger);
    }
  }

  void queue_work(std::size_t i, Work w) {
    nodes_[i].work.push_back(std::move(w));
    run_work(i);
  }

  void start_prefix(std::size_t i, SubnetPrefix64 prefix) {
    Node& n = nodes_[i];
    if (n.global_prefix && *n.global_prefix == prefix) return;
    auto ll = current_address(n);
    if (!ll) return;
    std::optional<Ipv6Address> old = n.global;
    n.pending = {};
    n.pending.purpose = Purpose::Global;
    n.pending.replaces = old;
    switch (n.spec.scheme) {
      case Scheme::Slaac: n.tentative = make_address(prefix, eui64_from_mac(n.mac)); break;
      case Scheme::SendCga: {
        auto base = n.params.at(*ll);
        base.collision_count = cga::CollisionCount{0};
        auto res = cga::cga_regenerate(base, prefix, cga::SecLevel(n.spec.sec));
        n.tentative = res.address;
        n.pending.params = res.params;
        break;
      }
      case Scheme::Lwcga: {
        trigger::PrefixUpdate trig{prefix};
        if (n.spec.policy.on_prefix_update) {
          n.tentative = regenerate_lwcga(i, *ll, trig);
        } else {
          n.tentative = make_address(prefix, ll->iid);
        }
        break;
      }
    }
    n.global_prefix = prefix;
    n.dad_attempts = 1;
    begin_dad(i);
  }

  Ipv6Address regenerate_lwcga(std::size_t i, const Ipv6Address& from, const RegenerationTrigger& trig) {
    Node& n = nodes_[i];
    LwcgaBinding binding{from, n.key->public_key(), n.generated_at[from]};
    auto next = regenerate(binding, trig, n.spec.policy, *n.collector, *n.clock, *n.key, now_);
    ++n.metrics.regenerations;
    log(n.spec.name, "regenerate",
        "trigger=" + trigger_name(trig) + " old=" + from.to_string() + " new=" + next.address.to_string());
    return next.address;
  }

  void start_regeneration(std::size_t i, const RegenerationTrigger& trig) {
    Node& n = nodes_[i];
    auto from = current_address(n);
    if (!from) return;
    n.pending = {};
    n.pending.purpose = n.global && *n.global == *from ? Purpose::Global : Purpose::LinkLocal;
    n.pending.replaces = from;
    n.tentative = regenerate_lwcga(i, *from, trig);
    n.dad_attempts = 1;
    begin_dad(i);
  }

  /// A trigger from the scenario or a timer. Only LW-CGA nodes regenerate on
  /// these; a disabled trigger is logged and dropped.
  void request_regeneration(std::size_t i, RegenerationTrigger trig) {
    Node& n = nodes_[i];
    if (n.phase == Phase::Disabled || n.phase == Phase::Idle) {
      log(n.spec.name, "regen_skipped", "trigger=" + trigger_name(trig) + " phase=" + to_string(n.phase));
      return;
    }
    if (n.spec.scheme != Scheme::Lwcga) {
      log(n.spec.name, "regen_unsupported", "trigger=" + trigger_name(trig));
      return;
    }
    if (!trigger_enabled(n.spec.policy, trig)) {
      log(n.spec.name, "regen_rejected", "trigger=" + trigger_name(trig) + " reason=disabled_by_policy");
      return;
    }
    queue_work(i, Work{Work::Regenerate, {}, std::move(trig)});
  }

  void handle(IntervalTimer& e) {
    request_regeneration(e.node, trigger::IntervalElapsed{});
    schedule(now_ + *nodes_[e.node].spec.policy.interval, IntervalTimer{e.node});
  }

  void handle(UserEvent& e) {
    if (e.kind == EventKind::UserRequest) request_regeneration(e.node, trigger::UserRequest{});
    else request_regeneration(e.node, trigger::InterfaceChange{});
  }

  void node_receive(std::size_t i, const Frame& f) {
    Node& n = nodes_[i];
    if (n.phase == Phase::Idle || n.phase == Phase::Disabled) return;
    const NdMessage& m = f.msg;
    if (!listening(n, m.dst)) return;
    switch (m.kind) {
      case MessageKind::NS: {
        if (!m.target) return;
        if (n.tentative && *m.target == *n.tentative && m.src.is_unspecified()) {
          collision(i, "simultaneous_dad");
        } else if (owns(n, *m.target)) {
          log(n.spec.name, "defend", "addr=" + m.target->to_string());
          transmit({Role::Node, i}, advertisement(n, *m.target, solicited_node_multicast(*m.target)));
        }
        return;
      }
      case MessageKind::NA: {
        if (!m.target) return;
        if (n.tentative && *m.target == *n.tentative) {
          // DAD cannot demand credentials: an unsecured NA still ends the
          // attempt. Secured ones must verify.
          if (m.is_secured()) {
            if (auto why = verify_na(n, m); !why.empty()) {
              reject(i, f, why);
              return;
            }
          }
          collision(i, m.is_secured() ? "na" : "unsecured_na");
          return;
        }
        if (owns(n, *m.target)) {
          log(n.spec.name, "na_conflict", "addr=" + m.target->to_string());
          return;
        }
        if (auto why = verify_na(n, m); !why.empty()) {
          reject(i, f, why);
          return;
        }
        auto* tll = m.find<opt::TargetLinkLayerAddr>();
        if (tll) n.neighbors[*m.target] = tll->mac;
        if (f.forged) {
          ++n.metrics.forged_accepted;
          log(n.spec.name, "forged_accepted", "addr=" + m.target->to_string() + " from=" + name_of(f.from));
        }
        return;
      }
      case MessageKind::RA: {
        auto* pi = m.find<opt::PrefixInfo>();
        if (!pi) return;
        if (n.global_prefix && *n.global_prefix == pi->prefix) return;
        for (const auto& w : n.work)
          if (w.kind == Work::Prefix && w.prefix == pi->prefix) return;
        if (n.tentative && n.pending.purpose == Purpose::Global && n.tentative->prefix == pi->prefix) return;
        log(n.spec.name, "ra_prefix", "prefix=" + pi->prefix.to_string() + (pi->is_update ? " update=1" : ""));
        queue_work(i, Work{Work::Prefix, pi->prefix, std::nullopt});
        return;
      }
      case MessageKind::RS: return;
    }
  }

  void reject(std::size_t i, const Frame& f, const std::string& why) {
    Node& n = nodes_[i];
    ++n.metrics.rejected;
    if (f.forged) ++n.metrics.forged_rejected;
    log(n.spec.name, "reject",
        "kind=" + to_string(f.msg.kind) + " target=" + (f.msg.target ? f.msg.target->to_string() : "-") +
            " reason=" + why + " from=" + name_of(f.from));
  }

  // ---- router ----

  std::optional<std::size_t> current_prefix_index() const {
    std::optional<std::size_t> idx;
    for (std::size_t k = 0; k < sc_.router->prefixes.size(); ++k)
      if (sc_.router->prefixes[k].from <= now_) idx = k;
    return idx;
  }

  void send_ra() {
    auto idx = current_prefix_index();
    if (!idx) return;
    bool update = *idx > 0 && (!announced_ || *announced_ != *idx);
    announced_ = idx;
    const auto& pa = sc_.router->prefixes[*idx];
    Ipv6Address src = make_link_local(eui64_from_mac(sc_.router->mac));
    transmit({Role::Router, 0}, NdMessage{MessageKind::RA,
                                          src,
                                          kAllNodesMulticast,
                                          std::nullopt,
                                          {opt::SourceLinkLayerAddr{sc_.router->mac}, opt::PrefixInfo{pa.prefix, update}}});
  }

  void handle(RouterTimer&) {
    send_ra();
    schedule(now_ + sc_.router->ra_period, RouterTimer{});
  }

  // ---- attackers ----

  void attacker_receive(std::size_t ai, const Frame& f) {
    Attacker& a = attackers_[ai];
    if (now_ < a.spec.start || f.forged) return;
    const NdMessage& m = f.msg;
    switch (a.spec.kind) {
      case AttackKind::DadDos:
        if (m.kind == MessageKind::NS && m.src.is_unspecified() && m.target) {
          NdMessage na{MessageKind::NA, *m.target, solicited_node_multicast(*m.target), *m.target,
                       {opt::TargetLinkLayerAddr{a.mac}}};
          log(a.spec.name, "spoof_na", "target=" + m.target->to_string());
          transmit({Role::Attacker, ai}, std::move(na), true);
        }
        return;
      case AttackKind::Impersonation:
        if (m.kind != MessageKind::NA || !m.target || f.from.role != Role::Node || f.from.index != a.victim) return;
        if (!a.forged_targets.insert(*m.target).second) return;
        schedule(now_ + a.spec.window, Forge{ai, m});
        return;
      case AttackKind::Replay:
        if (!m.is_secured() || f.from.role == Role::Attacker) return;
        log(a.spec.name, "capture", summary(m));
        schedule(now_ + a.spec.window, Reemit{ai, Frame{m, true, {Role::Attacker, ai}}});
        return;
    }
  }

  void handle(Forge& e) {
    Attacker& a = attackers_[e.attacker];
    const NdMessage& m = e.observed;
    NdMessage na{MessageKind::NA, *m.target, kAllNodesMulticast, *m.target, {opt::TargetLinkLayerAddr{a.mac}}};
    if (a.spec.mode != ForgeryMode::Absent) {
      auto* cp = m.find<opt::CgaParams>();
      if (a.spec.mode == ForgeryMode::Copied && cp) {
        na.options.push_back(*cp);
      } else {
        cga::CgaParameters fake{cga::Modifier128::from_u64(draw(), draw()), m.target->prefix, cga::CollisionCount{0},
                                a.key->public_key()};
        na.options.push_back(opt::CgaParams{fake.serialize()});
      }
      na.options.push_back(opt::Timestamp{now_});
      sign(na, *a.key);
    }
    log(a.spec.name, "impersonate", "target=" + m.target->to_string() + " mode=" + to_string(a.spec.mode));
    transmit({Role::Attacker, e.attacker}, std::move(na), true);
  }

  void handle(Reemit& e) {
    log(attackers_[e.attacker].spec.name, "replay", "age=" + std::to_string(attackers_[e.attacker].spec.window));
    transmit({Role::Attacker, e.attacker}, e.frame.msg, true);
  }

  void handle(Deliver& d) {
    switch (d.to.role) {
      case Role::Node: node_receive(d.to.index, d.frame); break;
      case Role::Attacker: attacker_receive(d.to.index, d.frame); break;
      case Role::Router:
        if (d.frame.msg.kind == MessageKind::RS) send_ra();
        break;
    }
  }

  Scenario sc_;
  std::vector<Node> nodes_;
  std::vector<Attacker> attackers_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::vector<TraceEvent> trace_;
  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t rng_state_ = 0;
  std::optional<std::size_t> announced_;
};

/// Runs a scenario to its horizon. Throws on a malformed scenario before
/// anything executes.
inline SimTrace run_scenario(const Scenario& s) { return Simulator(s).run(); }

}  // namespace lwcga::nd
