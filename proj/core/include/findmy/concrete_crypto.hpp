#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "findmy/protocol.hpp"

namespace findmy::crypto {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kScalarBytes = 28;
inline constexpr std::size_t kPointBytes = 1 + 2 * kScalarBytes;  // uncompressed X9.62
inline constexpr std::size_t kSymKeyBytes = 32;
inline constexpr std::size_t kDiversifyBytes = 72;

class CryptoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPeer : public CryptoError {
 public:
  using CryptoError::CryptoError;
};

/// P-224 private scalar, big-endian, always in [1, n-1].
struct Scalar {
  std::array<std::uint8_t, kScalarBytes> be{};
  auto operator<=>(const Scalar&) const = default;
};

/// P-224 public point, uncompressed X9.62 encoding (04 || X || Y).
struct Point {
  std::array<std::uint8_t, kPointBytes> x962{};
  auto operator<=>(const Point&) const = default;
};

using SymKey = std::array<std::uint8_t, kSymKeyBytes>;
using SharedSecret = std::array<std::uint8_t, kScalarBytes>;
using AesKey = std::array<std::uint8_t, 16>;
using Iv = std::array<std::uint8_t, 16>;
using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(ByteView bytes);
template <std::size_t N>
std::string to_hex(const std::array<std::uint8_t, N>& a) {
  return to_hex(ByteView(a));
}
Bytes from_hex(std::string_view hex);
inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

Digest sha256(ByteView data);

/// ANSI X9.63 KDF over SHA-256: SHA-256(secret || counter_be32 || info) for
/// counter = 1, 2, ... concatenated and truncated to out_len.
Bytes x963_kdf(ByteView secret, ByteView shared_info, std::size_t out_len);

/// SK_i = KDF(SK_{i-1}, "update", 32).
SymKey sk_next_bytes(ByteView sk_prev);

/// (u_i, v_i) as reduced scalars: u from the first 36 bytes of
/// KDF(SK_i, "diversify", 72) as (u mod (n-1)) + 1, v from the last 36 as
/// v mod n.
struct DiversifiedScalars {
  Bytes u;  // big-endian, kScalarBytes
  Bytes v;
};
DiversifiedScalars diversify(const SymKey& sk);

/// d_i = (d0 * u_i + v_i) mod n. A zero result is re-derived from the next
/// symmetric key in the chain.
Scalar d_next_scalar(const Scalar& d0, const SymKey& sk);

/// Validates the range [1, n-1]; throws std::invalid_argument otherwise.
Scalar scalar_from_bytes(ByteView be);
/// Reduces arbitrary bytes into [1, n-1] as (x mod (n-1)) + 1.
Scalar scalar_reduce(ByteView be);
bool is_valid_scalar(ByteView be);
const Scalar& group_order_minus_one();

Point pub_of(const Scalar& d);
bool is_valid_point(ByteView encoded);
/// x-coordinate of secret * peer, 28 bytes. Throws InvalidPeer for points
/// not on the curve or a point-at-infinity result.
SharedSecret ecdh_p224(const Scalar& secret, const Point& peer);

struct KeyIv {
  AesKey key;
  Iv iv;
};
/// KDF(shared, p_i encoding, 32) split into e' (first 16) and IV (last 16).
KeyIv key_iv_split(ByteView shared, ByteView p_encoding);

/// AES-128-GCM with nonce IV[0..12] and the full 16-byte IV as associated
/// data. Output is ciphertext || 16-byte tag.
Bytes aead_seal(const AesKey& key, ByteView plaintext, const Iv& iv);
std::optional<Bytes> aead_open(const AesKey& key, ByteView sealed, const Iv& iv);

/// AES-128-CTR from an all-zero counter block. Self-inverse.
Bytes sym_crypt(const AesKey& key, ByteView data);

Digest report_id(ByteView p_encoding);

/// Byte source for key material; either OS entropy or a seeded generator.
class RandomSource {
 public:
  static RandomSource system();
  static RandomSource seeded(std::uint64_t seed);

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n) {
    Bytes b(n);
    fill(b);
    return b;
  }
  std::uint64_t next_u64();

 private:
  std::optional<std::mt19937_64> engine_;
};

/// CryptoProvider running the real pipeline: P-224, X9.63 KDF, AES-GCM.
class ConcreteProvider {
 public:
  using Secret = Scalar;
  using Pub = Point;
  using SymKey = crypto::SymKey;
  using Shared = SharedSecret;
  using EncKey = AesKey;
  using Iv = crypto::Iv;
  using Plain = Bytes;
  using Cipher = Bytes;
  using Digest = crypto::Digest;
  using Timestamp = std::uint64_t;
  using Param = std::string;

  explicit ConcreteProvider(RandomSource rng) : rng_(std::move(rng)) {}

  RandomSource& rng() { return rng_; }

  Scalar fresh_secret(std::string_view);
  SymKey fresh_symkey(std::string_view);
  Point pub_of(const Scalar& d) const { return crypto::pub_of(d); }
  SymKey sk_next(const SymKey& sk) const { return sk_next_bytes(sk); }
  Scalar d_next(const Scalar& d0, const SymKey& sk) const { return d_next_scalar(d0, sk); }
  SharedSecret ecdh(const Scalar& d, const Point& p) const { return ecdh_p224(d, p); }
  AesKey key_of(const SharedSecret& ss, const Point& p) const { return key_iv_split(ss, p.x962).key; }
  Iv iv_of(const SharedSecret& ss, const Point& p) const { return key_iv_split(ss, p.x962).iv; }
  Bytes sym_seal(const Bytes& m, const AesKey& k) const { return sym_crypt(k, m); }
  std::optional<Bytes> sym_open(const Bytes& c, const AesKey& k) const { return sym_crypt(k, c); }
  Bytes pack(const Bytes& inner, std::uint64_t ts) const;
  std::optional<std::pair<Bytes, std::uint64_t>> unpack(const Bytes& pt) const;
  Bytes aead_seal(const AesKey& k, const Bytes& pt, const Iv& iv) const { return crypto::aead_seal(k, pt, iv); }
  std::optional<Bytes> aead_open(const AesKey& k, const Bytes& c, const Iv& iv) const {
    return crypto::aead_open(k, c, iv);
  }
  Digest hash(const Point& p) const { return report_id(p.x962); }

  std::string param(const protocol::AgentId& a) const { return a.name; }
  std::string param(const Scalar& s) const { return to_hex(s.be); }
  std::string param(const Point& p) const { return to_hex(p.x962); }
  std::string param(const Bytes& b) const { return to_hex(b); }
  std::string param(std::uint64_t ts) const { return std::to_string(ts); }
  template <std::size_t N>
  std::string param(const std::array<std::uint8_t, N>& a) const {
    return to_hex(a);
  }

 private:
  RandomSource rng_;
};

static_assert(protocol::CryptoProvider<ConcreteProvider>);

}  // namespace findmy::crypto
