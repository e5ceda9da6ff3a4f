#pragma once

// RSA key pairs, DER public-key blobs and PKCS#1 v1.5 signatures (SHA-1),
// backed by libcrypto.

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>
#include <openssl/x509.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lwcga/digest.hpp"
#include "lwcga/error.hpp"

namespace lwcga {

/// DER SubjectPublicKeyInfo. Never empty.
class PublicKeyBlob {
 public:
  PublicKeyBlob() = default;
  explicit PublicKeyBlob(std::vector<std::uint8_t> der) : der_(std::move(der)) {
    if (der_.empty()) throw Error("public key blob must not be empty");
  }

  const std::vector<std::uint8_t>& der() const { return der_; }
  std::size_t size() const { return der_.size(); }
  bool empty() const { return der_.empty(); }

  friend bool operator==(const PublicKeyBlob&, const PublicKeyBlob&) = default;

 private:
  std::vector<std::uint8_t> der_;
};

struct Signature {
  std::vector<std::uint8_t> bytes;
  friend bool operator==(const Signature&, const Signature&) = default;
};

namespace detail {

struct PkeyDeleter {
  void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};
struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_free(b); }
};
struct BnCtxDeleter {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct ParamBldDeleter {
  void operator()(OSSL_PARAM_BLD* b) const { OSSL_PARAM_BLD_free(b); }
};
struct ParamDeleter {
  void operator()(OSSL_PARAM* p) const { OSSL_PARAM_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;

inline BnPtr bn_new() {
  BnPtr b{BN_new()};
  if (!b) throw Error("BN_new failed");
  return b;
}

inline void check(int rc, const char* what) {
  if (rc != 1) throw Error(std::string("libcrypto: ") + what + " failed");
}

// SHA-256 in counter mode; only used to turn a 64-bit seed into prime
// candidates so that seeded keys are reproducible.
class SeededByteStream {
 public:
  explicit SeededByteStream(std::uint64_t seed) : seed_(seed) {}

  void fill(std::uint8_t* out, std::size_t n) {
    while (n > 0) {
      if (pos_ == block_.size()) refill();
      std::size_t take = std::min(n, block_.size() - pos_);
      std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(pos_), take, out);
      pos_ += take;
      out += take;
      n -= take;
    }
  }

 private:
  void refill() {
    std::uint8_t in[16];
    for (int i = 0; i < 8; ++i) {
      in[i] = static_cast<std::uint8_t>(seed_ >> (56 - 8 * i));
      in[8 + i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
    }
    ++counter_;
    block_ = evp_digest<32>(EVP_sha256(), {Bytes(in, 16)}, /*counted=*/false);
    pos_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t pos_ = block_.size();
};

inline BnPtr seeded_prime(SeededByteStream& rng, int bits, const BIGNUM* e, BN_CTX* ctx) {
  if (bits < 16 || bits % 8 != 0) throw Error("prime size must be a multiple of 8 bits, at least 16");
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(bits / 8));
  if (buf.size() < 2) throw Error("prime buffer too short");
  auto cand = bn_new();
  auto tmp = bn_new();
  auto gcd = bn_new();
  for (;;) {
    rng.fill(buf.data(), buf.size());
    buf.front() |= 0xc0;  // top two bits: product has the full modulus width
    buf.back() |= 0x01;
    if (!BN_bin2bn(buf.data(), static_cast<int>(buf.size()), cand.get())) throw Error("BN_bin2bn failed");
    for (int step = 0; step < 4096; ++step) {
      check(BN_sub(tmp.get(), cand.get(), BN_value_one()), "BN_sub");
      check(BN_gcd(gcd.get(), tmp.get(), e, ctx), "BN_gcd");
      if (BN_is_one(gcd.get()) && BN_check_prime(cand.get(), ctx, nullptr) == 1) return cand;
      check(BN_add_word(cand.get(), 2), "BN_add_word");
    }
  }
}

}  // namespace detail

/// RSA key pair. Key material is immutable once created, so copies share it.
class KeyPair {
 public:
  static constexpr int kDefaultModulusBits = 1024;

  /// Fresh key from the libcrypto DRBG.
  static KeyPair generate(int modulus_bits = kDefaultModulusBits) {
    check_modulus(modulus_bits);
    std::unique_ptr<EVP_PKEY_CTX, detail::PkeyCtxDeleter> ctx{EVP_PKEY_CTX_new_from_name(nullptr, "RSA", nullptr)};
    if (!ctx) throw Error("EVP_PKEY_CTX_new_from_name failed");
    detail::check(EVP_PKEY_keygen_init(ctx.get()), "EVP_PKEY_keygen_init");
    detail::check(EVP_PKEY_CTX_set_rsa_keygen_bits(ctx.get(), modulus_bits), "set_rsa_keygen_bits");
    EVP_PKEY* raw = nullptr;
    detail::check(EVP_PKEY_generate(ctx.get(), &raw), "EVP_PKEY_generate");
    return KeyPair(raw);
  }

  /// Key derived deterministically from `seed` (same seed, same key). Used by
  /// the simulator and by seeded CLI runs; not for production keys.
  static KeyPair from_seed(std::uint64_t seed, int modulus_bits = kDefaultModulusBits) {
    using detail::check;
    check_modulus(modulus_bits);
    std::unique_ptr<BN_CTX, detail::BnCtxDeleter> ctx{BN_CTX_new()};
    auto e = detail::bn_new();
    check(BN_set_word(e.get(), 65537), "BN_set_word");
    detail::SeededByteStream rng(seed);
    auto p = detail::seeded_prime(rng, modulus_bits / 2, e.get(), ctx.get());
    auto q = detail::seeded_prime(rng, modulus_bits / 2, e.get(), ctx.get());
    while (BN_cmp(p.get(), q.get()) == 0) q = detail::seeded_prime(rng, modulus_bits / 2, e.get(), ctx.get());
    if (BN_cmp(p.get(), q.get()) < 0) std::swap(p, q);

    auto n = detail::bn_new(), d = detail::bn_new(), p1 = detail::bn_new(), q1 = detail::bn_new(),
         phi = detail::bn_new(), dmp1 = detail::bn_new(), dmq1 = detail::bn_new(), iqmp = detail::bn_new();
    check(BN_mul(n.get(), p.get(), q.get(), ctx.get()), "BN_mul");
    check(BN_sub(p1.get(), p.get(), BN_value_one()), "BN_sub");
    check(BN_sub(q1.get(), q.get(), BN_value_one()), "BN_sub");
    check(BN_mul(phi.get(), p1.get(), q1.get(), ctx.get()), "BN_mul");
    if (!BN_mod_inverse(d.get(), e.get(), phi.get(), ctx.get())) throw Error("BN_mod_inverse failed");
    check(BN_mod(dmp1.get(), d.get(), p1.get(), ctx.get()), "BN_mod");
    check(BN_mod(dmq1.get(), d.get(), q1.get(), ctx.get()), "BN_mod");
    if (!BN_mod_inverse(iqmp.get(), q.get(), p.get(), ctx.get())) throw Error("BN_mod_inverse failed");

    std::unique_ptr<OSSL_PARAM_BLD, detail::ParamBldDeleter> bld{OSSL_PARAM_BLD_new()};
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, n.get()), "push n");
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, e.get()), "push e");
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_D, d.get()), "push d");
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR1, p.get()), "push p");
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR2, q.get()), "push q");
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT1, dmp1.get()), "push dmp1");
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT2, dmq1.get()), "push dmq1");
    check(OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_COEFFICIENT1, iqmp.get()), "push iqmp");
    std::unique_ptr<OSSL_PARAM, detail::ParamDeleter> params{OSSL_PARAM_BLD_to_param(bld.get())};
    if (!params) throw Error("OSSL_PARAM_BLD_to_param failed");

    std::unique_ptr<EVP_PKEY_CTX, detail::PkeyCtxDeleter> pctx{EVP_PKEY_CTX_new_from_name(nullptr, "RSA", nullptr)};
    if (!pctx) throw Error("EVP_PKEY_CTX_new_from_name failed");
    check(EVP_PKEY_fromdata_init(pctx.get()), "EVP_PKEY_fromdata_init");
    EVP_PKEY* raw = nullptr;
    check(EVP_PKEY_fromdata(pctx.get(), &raw, EVP_PKEY_KEYPAIR, params.get()), "EVP_PKEY_fromdata");
    return KeyPair(raw);
  }

  /// PKCS#8 / traditional DER private key, as written by private_der().
  static KeyPair from_private_der(const std::vector<std::uint8_t>& der) {
    const unsigned char* p = der.data();
    EVP_PKEY* raw = d2i_AutoPrivateKey(nullptr, &p, static_cast<long>(der.size()));
    if (!raw) throw ParseError("malformed DER private key");
    if (EVP_PKEY_get_base_id(raw) != EVP_PKEY_RSA) {
      EVP_PKEY_free(raw);
      throw ParseError("private key is not RSA");
    }
    return KeyPair(raw);
  }

  const PublicKeyBlob& public_key() const { return public_; }
  int modulus_bits() const { return EVP_PKEY_get_bits(pkey_.get()); }
  EVP_PKEY* handle() const { return pkey_.get(); }

  std::vector<std::uint8_t> private_der() const {
    unsigned char* buf = nullptr;
    int len = i2d_PrivateKey(pkey_.get(), &buf);
    if (len <= 0) throw Error("i2d_PrivateKey failed");
    std::vector<std::uint8_t> out(buf, buf + len);
    OPENSSL_free(buf);
    return out;
  }

 private:
  explicit KeyPair(EVP_PKEY* raw) : pkey_(raw, detail::PkeyDeleter{}) {
    unsigned char* buf = nullptr;
    int len = i2d_PUBKEY(pkey_.get(), &buf);
    if (len <= 0) throw Error("i2d_PUBKEY failed");
    public_ = PublicKeyBlob(std::vector<std::uint8_t>(buf, buf + len));
    OPENSSL_free(buf);
  }

  static void check_modulus(int bits) {
    if (bits != 1024 && bits != 2048) throw Error("unsupported RSA modulus size " + std::to_string(bits));
  }

  std::shared_ptr<EVP_PKEY> pkey_;
  PublicKeyBlob public_;
};

/// RSASSA-PKCS1-v1_5 over SHA-1 of the message.
inline Signature sign_nd_message(const KeyPair& key, Bytes message) {
  std::unique_ptr<EVP_MD_CTX, detail::MdCtxDeleter> ctx{EVP_MD_CTX_new()};
  if (!ctx) throw Error("EVP_MD_CTX_new failed");
  detail::check(EVP_DigestSignInit(ctx.get(), nullptr, EVP_sha1(), nullptr, key.handle()), "EVP_DigestSignInit");
  std::size_t len = 0;
  detail::check(EVP_DigestSign(ctx.get(), nullptr, &len, message.data(), message.size()), "EVP_DigestSign");
  Signature sig;
  sig.bytes.resize(len);
  detail::check(EVP_DigestSign(ctx.get(), sig.bytes.data(), &len, message.data(), message.size()), "EVP_DigestSign");
  sig.bytes.resize(len);
  return sig;
}

struct SignatureCheck {
  bool accepted = false;
  std::string diagnostic;  // empty when accepted
  explicit operator bool() const { return accepted; }
};

inline SignatureCheck verify_nd_signature(const PublicKeyBlob& public_key, Bytes message, const Signature& sig) {
  const unsigned char* p = public_key.der().data();
  std::unique_ptr<EVP_PKEY, detail::PkeyDeleter> pkey{
      d2i_PUBKEY(nullptr, &p, static_cast<long>(public_key.der().size()))};
  if (!pkey || p != public_key.der().data() + public_key.der().size())
    return {false, "malformed public key encoding"};
  if (EVP_PKEY_get_base_id(pkey.get()) != EVP_PKEY_RSA) return {false, "public key is not RSA"};
  if (sig.bytes.size() != static_cast<std::size_t>(EVP_PKEY_get_size(pkey.get())))
    return {false, "signature length does not match modulus"};
  std::unique_ptr<EVP_MD_CTX, detail::MdCtxDeleter> ctx{EVP_MD_CTX_new()};
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, EVP_sha1(), nullptr, pkey.get()) != 1)
    return {false, "verifier initialisation failed"};
  int rc = EVP_DigestVerify(ctx.get(), sig.bytes.data(), sig.bytes.size(), message.data(), message.size());
  if (rc != 1) return {false, "signature does not verify"};
  return {true, {}};
}

inline PublicKeyBlob load_public_der(std::vector<std::uint8_t> der) {
  const unsigned char* p = der.data();
  std::unique_ptr<EVP_PKEY, detail::PkeyDeleter> pkey{d2i_PUBKEY(nullptr, &p, static_cast<long>(der.size()))};
  if (!pkey) throw ParseError("malformed DER public key");
  return PublicKeyBlob(std::move(der));
}

}  // namespace lwcga
