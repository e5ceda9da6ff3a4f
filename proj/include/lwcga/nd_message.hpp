#pragma once

// Neighbor discovery messages as structured values. Only the signed payload
// is ever flattened to bytes; there is no ICMPv6 wire encoding.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lwcga/addr.hpp"
#include "lwcga/rsa_key.hpp"

namespace lwcga::nd {

enum class MessageKind : std::uint8_t { RS = 133, RA = 134, NS = 135, NA = 136 };

inline std::string to_string(MessageKind k) {
  switch (k) {
    case MessageKind::RS: return "RS";
    case MessageKind::RA: return "RA";
    case MessageKind::NS: return "NS";
    case MessageKind::NA: return "NA";
  }
  return "?";
}

namespace opt {
struct SourceLinkLayerAddr {
  static constexpr std::uint8_t kType = 1;
  MacAddress48 mac;
  friend bool operator==(const SourceLinkLayerAddr&, const SourceLinkLayerAddr&) = default;
};
struct TargetLinkLayerAddr {
  static constexpr std::uint8_t kType = 2;
  MacAddress48 mac;
  friend bool operator==(const TargetLinkLayerAddr&, const TargetLinkLayerAddr&) = default;
};
struct PrefixInfo {
  static constexpr std::uint8_t kType = 3;
  SubnetPrefix64 prefix;
  bool is_update = false;
  friend bool operator==(const PrefixInfo&, const PrefixInfo&) = default;
};
struct CgaParams {
  static constexpr std::uint8_t kType = 11;
  std::vector<std::uint8_t> blob;  // serialized CGA parameters
  friend bool operator==(const CgaParams&, const CgaParams&) = default;
};
struct RsaSignature {
  static constexpr std::uint8_t kType = 12;
  Signature sig;
  friend bool operator==(const RsaSignature&, const RsaSignature&) = default;
};
struct Timestamp {
  static constexpr std::uint8_t kType = 13;
  std::uint64_t t = 0;
  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};
struct Nonce {
  static constexpr std::uint8_t kType = 14;
  std::vector<std::uint8_t> bytes;
  friend bool operator==(const Nonce&, const Nonce&) = default;
};
}  // namespace opt

using Option = std::variant<opt::SourceLinkLayerAddr, opt::TargetLinkLayerAddr, opt::PrefixInfo, opt::CgaParams,
                            opt::RsaSignature, opt::Timestamp, opt::Nonce>;

inline std::uint8_t option_type(const Option& o) {
  return std::visit([](const auto& v) { return std::decay_t<decltype(v)>::kType; }, o);
}

struct NdMessage {
  MessageKind kind = MessageKind::NS;
  Ipv6Address src;
  Ipv6Address dst;
  std::optional<Ipv6Address> target;
  std::vector<Option> options;

  template <class T>
  const T* find() const {
    for (const auto& o : options)
      if (auto* p = std::get_if<T>(&o)) return p;
    return nullptr;
  }
  template <class T>
  std::vector<const T*> find_all() const {
    std::vector<const T*> out;
    for (const auto& o : options)
      if (auto* p = std::get_if<T>(&o)) out.push_back(p);
    return out;
  }
  bool is_secured() const { return find<opt::RsaSignature>() != nullptr; }

  friend bool operator==(const NdMessage&, const NdMessage&) = default;
};

namespace detail {
inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline void put_addr(std::vector<std::uint8_t>& out, const Ipv6Address& a) {
  auto b = a.to_bytes();
  out.insert(out.end(), b.begin(), b.end());
}
}  // namespace detail

/// Bytes covered by the RSA signature: every field and option except the
/// signature itself.
inline std::vector<std::uint8_t> signed_payload(const NdMessage& m) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(m.kind));
  detail::put_addr(out, m.src);
  detail::put_addr(out, m.dst);
  out.push_back(m.target ? 1 : 0);
  if (m.target) detail::put_addr(out, *m.target);
  for (const auto& o : m.options) {
    if (std::holds_alternative<opt::RsaSignature>(o)) continue;
    out.push_back(option_type(o));
    std::visit(
        [&out](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, opt::SourceLinkLayerAddr> || std::is_same_v<T, opt::TargetLinkLayerAddr>) {
            out.insert(out.end(), v.mac.octets.begin(), v.mac.octets.end());
          } else if constexpr (std::is_same_v<T, opt::PrefixInfo>) {
            detail::put_u64(out, v.prefix.bits);
            out.push_back(v.is_update ? 1 : 0);
          } else if constexpr (std::is_same_v<T, opt::CgaParams>) {
            detail::put_u64(out, v.blob.size());
            out.insert(out.end(), v.blob.begin(), v.blob.end());
          } else if constexpr (std::is_same_v<T, opt::Timestamp>) {
            detail::put_u64(out, v.t);
          } else if constexpr (std::is_same_v<T, opt::Nonce>) {
            detail::put_u64(out, v.bytes.size());
            out.insert(out.end(), v.bytes.begin(), v.bytes.end());
          }
        },
        o);
  }
  return out;
}

/// Appends a signature over the current payload.
inline void sign(NdMessage& m, const KeyPair& key) {
  m.options.push_back(opt::RsaSignature{sign_nd_message(key, signed_payload(m))});
}

/// One-line summary for traces: kind, addresses, then option tags.
inline std::string summary(const NdMessage& m) {
  std::string s = "kind=" + to_string(m.kind) + " src=" + m.src.to_string() + " dst=" + m.dst.to_string();
  if (m.target) s += " target=" + m.target->to_string();
  if (auto* p = m.find<opt::PrefixInfo>()) s += " prefix=" + p->prefix.to_string() + (p->is_update ? " update=1" : "");
  if (!m.options.empty()) {
    s += " opts=";
    for (std::size_t i = 0; i < m.options.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(option_type(m.options[i]));
    }
  }
  return s;
}

}  // namespace lwcga::nd
