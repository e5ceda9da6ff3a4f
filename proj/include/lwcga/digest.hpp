#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>

#include "lwcga/error.hpp"

namespace lwcga {

using Bytes = std::span<const std::uint8_t>;

/// Per-thread count of digest invocations; the benchmark reports it next to
/// wall time so cost comparisons do not depend on the host.
inline std::uint64_t& digest_invocations() {
  thread_local std::uint64_t count = 0;
  return count;
}

namespace detail {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

template <std::size_t N>
std::array<std::uint8_t, N> evp_digest(const EVP_MD* md, std::initializer_list<Bytes> parts, bool counted = true) {
  thread_local std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx{EVP_MD_CTX_new()};
  std::array<std::uint8_t, N> out{};
  unsigned len = 0;
  bool ok = ctx && EVP_DigestInit_ex(ctx.get(), md, nullptr) == 1;
  for (auto p : parts) ok = ok && EVP_DigestUpdate(ctx.get(), p.data(), p.size()) == 1;
  ok = ok && EVP_DigestFinal_ex(ctx.get(), out.data(), &len) == 1 && len == N;
  if (!ok) throw Error("libcrypto digest failure");
  if (counted) ++digest_invocations();
  return out;
}

}  // namespace detail

/// Digest policy used by the CGA code. Any type with `kSize`, `Output` and a
/// static `hash(parts)` works; SHA-1 is the one in use.
struct Sha1 {
  static constexpr std::size_t kSize = 20;
  using Output = std::array<std::uint8_t, kSize>;

  static Output hash(std::initializer_list<Bytes> parts) {
    static const EVP_MD* md = EVP_sha1();
    return detail::evp_digest<kSize>(md, parts);
  }
};

struct Sha256 {
  static constexpr std::size_t kSize = 32;
  using Output = std::array<std::uint8_t, kSize>;

  static Output hash(std::initializer_list<Bytes> parts) {
    static const EVP_MD* md = EVP_sha256();
    return detail::evp_digest<kSize>(md, parts);
  }
};

template <class D>
concept DigestPolicy = requires(std::initializer_list<Bytes> parts) {
  { D::kSize } -> std::convertible_to<std::size_t>;
  { D::hash(parts) } -> std::same_as<typename D::Output>;
} && (D::kSize >= 8);

}  // namespace lwcga
