#pragma once

// Light-weight CGA: the interface identifier comes straight from the entropy
// collector's output stream. The RSA key is bound to the address alongside,
// never hashed into it.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "lwcga/addr.hpp"
#include "lwcga/clock_source.hpp"
#include "lwcga/entropy_collector.hpp"
#include "lwcga/error.hpp"
#include "lwcga/rsa_key.hpp"

namespace lwcga {

struct LwcgaBinding {
  Ipv6Address address;
  PublicKeyBlob key;
  std::uint64_t generation_instant = 0;  // event time (simulator ticks, or a trial index)

  friend bool operator==(const LwcgaBinding&, const LwcgaBinding&) = default;
};

struct RegenerationPolicy {
  bool on_prefix_update = true;
  bool on_interface_change = true;
  bool on_user_request = true;
  std::optional<std::uint64_t> interval;  // event-time units

  void validate() const {
    if (!on_prefix_update && !on_interface_change && !on_user_request && !interval)
      throw Error("regeneration policy has no trigger enabled");
    if (interval && *interval == 0) throw Error("regeneration interval must be positive");
  }
};

namespace trigger {
struct PrefixUpdate {
  SubnetPrefix64 new_prefix;
};
struct InterfaceChange {};
struct UserRequest {};
struct IntervalElapsed {};
}  // namespace trigger

using RegenerationTrigger =
    std::variant<trigger::PrefixUpdate, trigger::InterfaceChange, trigger::UserRequest, trigger::IntervalElapsed>;

inline std::string trigger_name(const RegenerationTrigger& t) {
  static constexpr std::array<const char*, 4> kNames{"prefix_update", "interface_change", "user_request",
                                                     "interval_elapsed"};
  return kNames[t.index()];
}

inline bool trigger_enabled(const RegenerationPolicy& p, const RegenerationTrigger& t) {
  switch (t.index()) {
    case 0: return p.on_prefix_update;
    case 1: return p.on_interface_change;
    case 2: return p.on_user_request;
    default: return p.interval.has_value();
  }
}

class RegenerationRejected : public Error {
 public:
  using Error::Error;
};

/// 64 fresh bits of the collector stream, u/l and i/g cleared.
inline InterfaceId64 lwcga_iid(entropy::EntropyCollector& collector, entropy::ClockSource& clock) {
  std::uint64_t hi = collector.take_bits(clock, 32);
  std::uint64_t lo = collector.take_bits(clock, 32);
  return set_flag_bits(InterfaceId64{(hi << 32) | lo}, false, false);
}

inline LwcgaBinding lwcga_generate(SubnetPrefix64 prefix, entropy::EntropyCollector& collector,
                                   entropy::ClockSource& clock, const KeyPair& key, std::uint64_t instant = 0) {
  return {make_address(prefix, lwcga_iid(collector, clock)), key.public_key(), instant};
}

/// Proof of possession: the private half signs a challenge that the bound
/// public key then verifies.
inline bool key_authentic(const LwcgaBinding& binding, const KeyPair& key) {
  if (!(binding.key == key.public_key())) return false;
  auto a = binding.address.to_bytes();
  std::array<std::uint8_t, 24> challenge{};
  std::copy(a.begin(), a.end(), challenge.begin());
  for (int i = 0; i < 8; ++i) challenge[16 + i] = static_cast<std::uint8_t>(binding.generation_instant >> (56 - 8 * i));
  auto sig = sign_nd_message(key, challenge);
  return verify_nd_signature(binding.key, challenge, sig).accepted;
}

/// New IID from the stream; the key is kept and re-checked, never
/// regenerated. Only a prefix update changes the prefix.
inline LwcgaBinding regenerate(const LwcgaBinding& binding, const RegenerationTrigger& trig,
                               const RegenerationPolicy& policy, entropy::EntropyCollector& collector,
                               entropy::ClockSource& clock, const KeyPair& key, std::uint64_t now = 0) {
  if (!trigger_enabled(policy, trig))
    throw RegenerationRejected("regeneration trigger '" + trigger_name(trig) + "' is disabled by policy");
  if (!key_authentic(binding, key)) throw RegenerationRejected("key authenticity check failed");
  SubnetPrefix64 prefix = binding.address.prefix;
  if (auto* pu = std::get_if<trigger::PrefixUpdate>(&trig)) prefix = pu->new_prefix;
  return {make_address(prefix, lwcga_iid(collector, clock)), binding.key, now};
}

}  // namespace lwcga
