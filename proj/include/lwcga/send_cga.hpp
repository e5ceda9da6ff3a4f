#pragma once

// SeND-style Cryptographically Generated Addresses: Sec-parameterised
// modifier search (hash2), IID derivation (hash1), parameter blobs and
// verification.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lwcga/addr.hpp"
#include "lwcga/digest.hpp"
#include "lwcga/error.hpp"
#include "lwcga/rsa_key.hpp"

namespace lwcga::cga {

class SecLevel {
 public:
  constexpr SecLevel() = default;
  constexpr explicit SecLevel(int v) : value_(static_cast<std::uint8_t>(v)) {
    if (v < 0 || v > 7) throw Error("Sec must be in 0..7, got " + std::to_string(v));
  }
  constexpr int value() const { return value_; }
  constexpr int zero_bits() const { return 16 * value_; }
  friend constexpr auto operator<=>(SecLevel, SecLevel) = default;

 private:
  std::uint8_t value_ = 0;
};

struct Modifier128 {
  std::array<std::uint8_t, 16> bytes{};
  friend auto operator<=>(const Modifier128&, const Modifier128&) = default;

  /// +1 as a big-endian 128-bit integer (wraps).
  void increment() {
    for (int i = 15; i >= 0; --i)
      if (++bytes[static_cast<std::size_t>(i)] != 0) break;
  }

  static Modifier128 from_u64(std::uint64_t hi, std::uint64_t lo) {
    Modifier128 m;
    detail::store_be64(hi, m.bytes.data());
    detail::store_be64(lo, m.bytes.data() + 8);
    return m;
  }
};

/// On the wire this is an arbitrary octet; only 0..2 are valid.
struct CollisionCount {
  static constexpr std::uint8_t kMax = 2;
  std::uint8_t value = 0;
  constexpr bool valid() const { return value <= kMax; }
  friend constexpr auto operator<=>(CollisionCount, CollisionCount) = default;
};

struct CgaParameters {
  Modifier128 modifier;
  SubnetPrefix64 subnet_prefix;
  CollisionCount collision_count;
  PublicKeyBlob public_key;

  friend bool operator==(const CgaParameters&, const CgaParameters&) = default;

  /// modifier(16) || prefix(8, network order) || collision count(1) || DER key.
  std::vector<std::uint8_t> serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(25 + public_key.size());
    out.insert(out.end(), modifier.bytes.begin(), modifier.bytes.end());
    auto p = subnet_prefix.to_bytes();
    out.insert(out.end(), p.begin(), p.end());
    out.push_back(collision_count.value);
    out.insert(out.end(), public_key.der().begin(), public_key.der().end());
    return out;
  }

  static CgaParameters deserialize(Bytes blob);
};

namespace detail {

// Total length of one DER TLV starting at `der`, or nullopt if truncated.
inline std::optional<std::size_t> der_tlv_length(Bytes der) {
  if (der.size() < 2) return std::nullopt;
  std::size_t hdr = 2, len = der[1];
  if (len & 0x80) {
    std::size_t n = len & 0x7f;
    if (n == 0 || n > 4 || der.size() < 2 + n) return std::nullopt;
    len = 0;
    for (std::size_t i = 0; i < n; ++i) len = (len << 8) | der[2 + i];
    hdr += n;
  }
  if (der.size() < hdr + len) return std::nullopt;
  return hdr + len;
}

}  // namespace detail

inline CgaParameters CgaParameters::deserialize(Bytes blob) {
  if (blob.size() < 25 + 2) throw ParseError("CGA parameter blob too short");
  CgaParameters p;
  std::copy_n(blob.begin(), 16, p.modifier.bytes.begin());
  p.subnet_prefix.bits = lwcga::detail::load_be64(blob.data() + 16);
  p.collision_count.value = blob[24];
  auto key = blob.subspan(25);
  if (key[0] != 0x30) throw ParseError("CGA public key is not a DER SEQUENCE");
  auto len = detail::der_tlv_length(key);
  if (!len || *len != key.size()) throw ParseError("CGA public key length does not match blob length");
  p.public_key = PublicKeyBlob(std::vector<std::uint8_t>(key.begin(), key.end()));
  return p;
}

enum class VerifyOutcome { Valid, BadHash1, BadHash2, BadCollisionCount, PrefixMismatch };

inline std::string_view to_string(VerifyOutcome v) {
  switch (v) {
    case VerifyOutcome::Valid: return "Valid";
    case VerifyOutcome::BadHash1: return "BadHash1";
    case VerifyOutcome::BadHash2: return "BadHash2";
    case VerifyOutcome::BadCollisionCount: return "BadCollisionCount";
    case VerifyOutcome::PrefixMismatch: return "PrefixMismatch";
  }
  return "?";
}

class ModifierSearchExhausted : public Error {
 public:
  ModifierSearchExhausted(int sec, std::uint64_t cap)
      : Error("modifier search for Sec=" + std::to_string(sec) + " exceeded " + std::to_string(cap) +
              " iterations"),
        cap_(cap) {}
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

inline constexpr std::uint64_t kDefaultIterationCap = std::uint64_t{1} << 22;

/// IID bits that verification compares: everything except the three Sec
/// bits and the u/l, i/g flags.
inline constexpr std::uint64_t kSecMask = std::uint64_t{0x7} << 61;
inline constexpr std::uint64_t kComparedIidMask = ~(kSecMask | InterfaceId64::kFlagMask);

template <DigestPolicy Digest = Sha1>
typename Digest::Output hash2(const Modifier128& modifier, Bytes public_key_der) {
  static constexpr std::array<std::uint8_t, 9> kZeros{};
  return Digest::hash({Bytes(modifier.bytes), Bytes(kZeros), public_key_der});
}

template <DigestPolicy Digest = Sha1>
typename Digest::Output hash2(const Modifier128& modifier, const PublicKeyBlob& key) {
  return hash2<Digest>(modifier, Bytes(key.der()));
}

/// Leftmost 16*sec bits all zero.
template <std::size_t N>
bool hash2_condition(const std::array<std::uint8_t, N>& digest, SecLevel sec) {
  std::size_t zero_bytes = static_cast<std::size_t>(sec.zero_bits() / 8);
  if (zero_bytes > N) return false;
  for (std::size_t i = 0; i < zero_bytes; ++i)
    if (digest[i] != 0) return false;
  return true;
}

struct ModifierSearchResult {
  Modifier128 modifier;
  std::uint64_t iterations = 0;  // hash2 evaluations performed
};

/// Increment from `initial` until hash2 meets the Sec condition. Sec=0 is
/// vacuous but still costs the one evaluation.
template <DigestPolicy Digest = Sha1>
ModifierSearchResult find_modifier(const PublicKeyBlob& key, SecLevel sec, Modifier128 initial,
                                   std::uint64_t iteration_cap = kDefaultIterationCap) {
  ModifierSearchResult r{initial, 0};
  while (r.iterations < iteration_cap) {
    ++r.iterations;
    if (hash2_condition(hash2<Digest>(r.modifier, key), sec)) return r;
    r.modifier.increment();
  }
  throw ModifierSearchExhausted(sec.value(), iteration_cap);
}

/// Leftmost 64 bits of the digest of the serialized parameters.
template <DigestPolicy Digest = Sha1>
InterfaceId64 hash1(Bytes serialized_params) {
  auto d = Digest::hash({serialized_params});
  return InterfaceId64{lwcga::detail::load_be64(d.data())};
}

template <DigestPolicy Digest = Sha1>
InterfaceId64 hash1(const CgaParameters& params) {
  auto blob = params.serialize();
  return hash1<Digest>(Bytes(blob));
}

/// Sec in the top three bits, u/l and i/g cleared.
inline InterfaceId64 encode_cga_iid(InterfaceId64 h1, SecLevel sec) {
  std::uint64_t v = h1.bits & kComparedIidMask;
  v |= static_cast<std::uint64_t>(sec.value()) << 61;
  return InterfaceId64{v};
}

inline SecLevel sec_from_iid(InterfaceId64 iid) { return SecLevel(static_cast<int>(iid.bits >> 61)); }

struct CgaResult {
  Ipv6Address address;
  CgaParameters params;
  std::uint64_t hash2_iterations = 0;
};

template <DigestPolicy Digest = Sha1>
CgaResult cga_generate(const KeyPair& key, SecLevel sec, SubnetPrefix64 prefix, Modifier128 rng_modifier,
                       std::uint64_t iteration_cap = kDefaultIterationCap) {
  auto search = find_modifier<Digest>(key.public_key(), sec, rng_modifier, iteration_cap);
  CgaParameters params{search.modifier, prefix, CollisionCount{0}, key.public_key()};
  auto iid = encode_cga_iid(hash1<Digest>(params), sec);
  return {make_address(prefix, iid), std::move(params), search.iterations};
}

/// Checks in order: collision count, prefix, hash1, hash2. The first failure
/// is the verdict.
template <DigestPolicy Digest = Sha1>
VerifyOutcome cga_verify(const Ipv6Address& addr, const CgaParameters& params, SecLevel sec) {
  if (!params.collision_count.valid()) return VerifyOutcome::BadCollisionCount;
  if (params.subnet_prefix != addr.prefix) return VerifyOutcome::PrefixMismatch;
  auto h1 = hash1<Digest>(params);
  if ((h1.bits & kComparedIidMask) != (addr.iid.bits & kComparedIidMask)) return VerifyOutcome::BadHash1;
  if (!hash2_condition(hash2<Digest>(params.modifier, params.public_key), sec)) return VerifyOutcome::BadHash2;
  return VerifyOutcome::Valid;
}

/// New prefix, same modifier and key: one hash1, no search.
template <DigestPolicy Digest = Sha1>
CgaResult cga_regenerate(const CgaParameters& params, SubnetPrefix64 new_prefix, SecLevel sec) {
  CgaParameters next = params;
  next.subnet_prefix = new_prefix;
  auto iid = encode_cga_iid(hash1<Digest>(next), sec);
  return {make_address(new_prefix, iid), std::move(next), 0};
}

/// DAD collision: bump the collision count and recompute hash1. Throws once
/// the count would exceed 2.
template <DigestPolicy Digest = Sha1>
CgaResult cga_after_collision(const CgaParameters& params, SecLevel sec) {
  if (params.collision_count.value >= CollisionCount::kMax) throw Error("collision count exhausted");
  CgaParameters next = params;
  ++next.collision_count.value;
  auto iid = encode_cga_iid(hash1<Digest>(next), sec);
  return {make_address(next.subnet_prefix, iid), std::move(next), 0};
}

}  // namespace lwcga::cga
