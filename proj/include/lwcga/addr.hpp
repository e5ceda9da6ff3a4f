#pragma once

// IPv6 address and interface-identifier primitives: EUI-64 derivation,
// u/l and i/g flag handling, prefix composition, solicited-node mapping.

#include <array>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lwcga/error.hpp"

namespace lwcga {

namespace detail {

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// 1-4 hex digits, any case.
inline std::optional<std::uint16_t> parse_group(std::string_view g) {
  if (g.empty() || g.size() > 4) return std::nullopt;
  std::uint16_t v = 0;
  for (char c : g) {
    int d = hex_digit(c);
    if (d < 0) return std::nullopt;
    v = static_cast<std::uint16_t>((v << 4) | d);
  }
  return v;
}

inline void store_be64(std::uint64_t v, std::uint8_t* out) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v);
    v >>= 8;
  }
}

inline std::uint64_t load_be64(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace detail

/// 48-bit IEEE MAC address.
struct MacAddress48 {
  std::array<std::uint8_t, 6> octets{};

  friend auto operator<=>(const MacAddress48&, const MacAddress48&) = default;

  /// Six colon-separated hex octets, e.g. "00:11:22:33:44:55".
  static MacAddress48 parse(std::string_view text) {
    auto parts = detail::split(text, ':');
    if (parts.size() != 6) throw ParseError("MAC address needs six octets: " + std::string(text));
    MacAddress48 mac;
    for (std::size_t i = 0; i < 6; ++i) {
      auto g = detail::parse_group(parts[i]);
      if (!g || parts[i].size() > 2) throw ParseError("bad MAC octet in: " + std::string(text));
      mac.octets[i] = static_cast<std::uint8_t>(*g);
    }
    return mac;
  }

  std::string to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", octets[0], octets[1], octets[2],
                  octets[3], octets[4], octets[5]);
    return buf;
  }
};

/// Low 64 bits of an IPv6 address. Bit 0 is the LSB of the last octet;
/// "bit 6/7 of the first octet" (MSB-first numbering) are the u/l and i/g
/// flags, i.e. value bits 57 and 56.
struct InterfaceId64 {
  std::uint64_t bits = 0;

  static constexpr std::uint64_t kUniversalLocalMask = std::uint64_t{1} << 57;
  static constexpr std::uint64_t kGroupMask = std::uint64_t{1} << 56;
  static constexpr std::uint64_t kFlagMask = kUniversalLocalMask | kGroupMask;

  friend auto operator<=>(const InterfaceId64&, const InterfaceId64&) = default;

  constexpr bool universal_local_bit() const { return (bits & kUniversalLocalMask) != 0; }
  constexpr bool group_bit() const { return (bits & kGroupMask) != 0; }
  constexpr std::uint8_t first_octet() const { return static_cast<std::uint8_t>(bits >> 56); }

  std::array<std::uint8_t, 8> to_bytes() const {
    std::array<std::uint8_t, 8> out{};
    detail::store_be64(bits, out.data());
    return out;
  }

  /// "0211:22ff:fe33:4455"
  std::string to_string() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%04x:%04x:%04x:%04x", static_cast<unsigned>(bits >> 48) & 0xffff,
                  static_cast<unsigned>(bits >> 32) & 0xffff, static_cast<unsigned>(bits >> 16) & 0xffff,
                  static_cast<unsigned>(bits) & 0xffff);
    return buf;
  }
};

struct SubnetPrefix64 {
  std::uint64_t bits = 0;

  friend auto operator<=>(const SubnetPrefix64&, const SubnetPrefix64&) = default;

  std::array<std::uint8_t, 8> to_bytes() const {
    std::array<std::uint8_t, 8> out{};
    detail::store_be64(bits, out.data());
    return out;
  }

  /// Accepts an address-style prefix ("2001:db8:0:1::", optional "/64") or
  /// exactly four hex groups ("2001:0db8:0000:0001").
  static SubnetPrefix64 parse(std::string_view text);
  std::string to_string() const;
};

/// FE80 followed by 54 zero bits, stored as a full /64.
inline constexpr SubnetPrefix64 kLinkLocalPrefix{0xfe80'0000'0000'0000ULL};

struct Ipv6Address {
  SubnetPrefix64 prefix;
  InterfaceId64 iid;

  friend auto operator<=>(const Ipv6Address&, const Ipv6Address&) = default;

  std::array<std::uint8_t, 16> to_bytes() const {
    std::array<std::uint8_t, 16> out{};
    detail::store_be64(prefix.bits, out.data());
    detail::store_be64(iid.bits, out.data() + 8);
    return out;
  }

  static Ipv6Address from_bytes(const std::array<std::uint8_t, 16>& b) {
    return {SubnetPrefix64{detail::load_be64(b.data())}, InterfaceId64{detail::load_be64(b.data() + 8)}};
  }

  std::array<std::uint16_t, 8> groups() const {
    std::array<std::uint16_t, 8> g{};
    for (int i = 0; i < 4; ++i) {
      g[i] = static_cast<std::uint16_t>(prefix.bits >> (48 - 16 * i));
      g[4 + i] = static_cast<std::uint16_t>(iid.bits >> (48 - 16 * i));
    }
    return g;
  }

  bool is_unspecified() const { return prefix.bits == 0 && iid.bits == 0; }
  bool is_multicast() const { return (prefix.bits >> 56) == 0xff; }

  /// Lowercase hex, leading zeros dropped, longest run (>= 2) of zero groups
  /// compressed to "::" (leftmost run wins ties).
  std::string to_string() const {
    auto g = groups();
    int best_start = -1, best_len = 0;
    for (int i = 0; i < 8;) {
      if (g[i] != 0) {
        ++i;
        continue;
      }
      int j = i;
      while (j < 8 && g[j] == 0) ++j;
      if (j - i > best_len) {
        best_start = i;
        best_len = j - i;
      }
      i = j;
    }
    if (best_len < 2) best_start = -1;

    std::string out;
    char buf[8];
    for (int i = 0; i < 8; ++i) {
      if (i == best_start) {
        out += "::";
        i += best_len - 1;
        continue;
      }
      if (!out.empty() && out.back() != ':') out += ':';
      std::snprintf(buf, sizeof buf, "%x", g[i]);
      out += buf;
    }
    return out;
  }

  /// RFC 4291 text form: hex groups in either case with at most one "::".
  /// Embedded dotted-quad suffixes are not accepted.
  static std::optional<Ipv6Address> try_parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::array<std::uint16_t, 8> g{};
    auto dbl = text.find("::");
    std::vector<std::string_view> head, tail;
    auto parse_side = [](std::string_view side, std::vector<std::string_view>& out) {
      if (side.empty()) return true;
      out = detail::split(side, ':');
      for (auto p : out)
        if (!detail::parse_group(p)) return false;
      return true;
    };
    if (dbl == std::string_view::npos) {
      if (!parse_side(text, head) || head.size() != 8) return std::nullopt;
    } else {
      if (text.find("::", dbl + 1) != std::string_view::npos) return std::nullopt;
      if (!parse_side(text.substr(0, dbl), head)) return std::nullopt;
      if (!parse_side(text.substr(dbl + 2), tail)) return std::nullopt;
      if (head.size() + tail.size() > 7) return std::nullopt;
    }
    for (std::size_t i = 0; i < head.size(); ++i) g[i] = *detail::parse_group(head[i]);
    for (std::size_t i = 0; i < tail.size(); ++i) g[8 - tail.size() + i] = *detail::parse_group(tail[i]);
    Ipv6Address a;
    for (int i = 0; i < 4; ++i) {
      a.prefix.bits = (a.prefix.bits << 16) | g[i];
      a.iid.bits = (a.iid.bits << 16) | g[4 + i];
    }
    return a;
  }

  static Ipv6Address parse(std::string_view text) {
    auto a = try_parse(text);
    if (!a) throw ParseError("malformed IPv6 address: " + std::string(text));
    return *a;
  }
};

inline SubnetPrefix64 SubnetPrefix64::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    if (text.substr(slash + 1) != "64") throw ParseError("only /64 prefixes are supported: " + std::string(text));
    text = text.substr(0, slash);
  }
  if (text.find("::") == std::string_view::npos) {
    auto parts = detail::split(text, ':');
    if (parts.size() == 4) {
      SubnetPrefix64 p;
      for (auto part : parts) {
        auto g = detail::parse_group(part);
        if (!g) throw ParseError("malformed prefix: " + std::string(text));
        p.bits = (p.bits << 16) | *g;
      }
      return p;
    }
  }
  auto a = Ipv6Address::try_parse(text);
  if (!a) throw ParseError("malformed prefix: " + std::string(text));
  if (a->iid.bits != 0) throw ParseError("prefix has bits set below /64: " + std::string(text));
  return a->prefix;
}

inline std::string SubnetPrefix64::to_string() const { return Ipv6Address{*this, {}}.to_string() + "/64"; }

// ---- operations ----

/// Modified EUI-64: OUI half, 0xFFFE, NIC half, u/l flag inverted.
constexpr InterfaceId64 eui64_from_mac(const MacAddress48& mac) {
  std::uint64_t v = 0;
  for (int i = 0; i < 3; ++i) v = (v << 8) | mac.octets[i];
  v = (v << 16) | 0xfffe;
  for (int i = 3; i < 6; ++i) v = (v << 8) | mac.octets[i];
  return InterfaceId64{v ^ InterfaceId64::kUniversalLocalMask};
}

/// Inverse of eui64_from_mac on its image. Bits 24..39 (the FFFE filler)
/// are ignored.
constexpr MacAddress48 mac_from_eui64(InterfaceId64 iid) {
  std::uint64_t v = iid.bits ^ InterfaceId64::kUniversalLocalMask;
  MacAddress48 mac;
  mac.octets[0] = static_cast<std::uint8_t>(v >> 56);
  mac.octets[1] = static_cast<std::uint8_t>(v >> 48);
  mac.octets[2] = static_cast<std::uint8_t>(v >> 40);
  mac.octets[3] = static_cast<std::uint8_t>(v >> 16);
  mac.octets[4] = static_cast<std::uint8_t>(v >> 8);
  mac.octets[5] = static_cast<std::uint8_t>(v);
  return mac;
}

constexpr Ipv6Address make_address(SubnetPrefix64 prefix, InterfaceId64 iid) { return {prefix, iid}; }

constexpr Ipv6Address make_link_local(InterfaceId64 iid) { return {kLinkLocalPrefix, iid}; }

/// FF02::1:FFxx:xxxx with the low 24 bits of addr.
constexpr Ipv6Address solicited_node_multicast(const Ipv6Address& addr) {
  return {SubnetPrefix64{0xff02'0000'0000'0000ULL},
          InterfaceId64{0x0000'0001'ff00'0000ULL | (addr.iid.bits & 0x00ff'ffffULL)}};
}

inline constexpr Ipv6Address kAllNodesMulticast{SubnetPrefix64{0xff02'0000'0000'0000ULL}, InterfaceId64{1}};
inline constexpr Ipv6Address kAllRoutersMulticast{SubnetPrefix64{0xff02'0000'0000'0000ULL}, InterfaceId64{2}};

/// Overwrite only the u/l (bit 6) and i/g (bit 7) flags of the first octet.
constexpr InterfaceId64 set_flag_bits(InterfaceId64 iid, bool universal_local, bool group) {
  std::uint64_t v = iid.bits & ~InterfaceId64::kFlagMask;
  if (universal_local) v |= InterfaceId64::kUniversalLocalMask;
  if (group) v |= InterfaceId64::kGroupMask;
  return InterfaceId64{v};
}

}  // namespace lwcga
