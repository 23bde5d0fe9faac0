#include "findmy/concrete_crypto.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>
#include <openssl/rand.h>

#include <algorithm>
#include <cstring>

namespace findmy::crypto {
namespace {

struct BnFree {
  void operator()(BIGNUM* b) const { BN_clear_free(b); }
};
struct CtxFree {
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct CipherCtxFree {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

using Bn = std::unique_ptr<BIGNUM, BnFree>;
using BnCtx = std::unique_ptr<BN_CTX, CtxFree>;
using EcPoint = std::unique_ptr<EC_POINT, PointFree>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

void check(int ok, const char* what) {
  if (ok != 1) throw CryptoError(std::string("OpenSSL failure: ") + what);
}

Bn bn() {
  Bn b(BN_new());
  if (!b) throw CryptoError("BN_new");
  return b;
}

Bn bn_from(ByteView be) {
  Bn b(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
  if (!b) throw CryptoError("BN_bin2bn");
  return b;
}

template <std::size_t N>
std::array<std::uint8_t, N> bn_to_array(const BIGNUM* b) {
  std::array<std::uint8_t, N> out{};
  check(BN_bn2binpad(b, out.data(), static_cast<int>(N)) == static_cast<int>(N) ? 1 : 0, "BN_bn2binpad");
  return out;
}

BnCtx ctx() {
  BnCtx c(BN_CTX_new());
  if (!c) throw CryptoError("BN_CTX_new");
  return c;
}

const EC_GROUP* group() {
  static const EC_GROUP* g = [] {
    EC_GROUP* grp = EC_GROUP_new_by_curve_name(NID_secp224r1);
    if (!grp) throw CryptoError("P-224 group unavailable");
    return grp;
  }();
  return g;
}

const BIGNUM* order() { return EC_GROUP_get0_order(group()); }

Bn order_minus_one() {
  Bn m(BN_dup(order()));
  check(BN_sub_word(m.get(), 1), "BN_sub_word");
  return m;
}

EcPoint point_from(const Point& p, BN_CTX* c) {
  EcPoint pt(EC_POINT_new(group()));
  if (!pt) throw CryptoError("EC_POINT_new");
  if (EC_POINT_oct2point(group(), pt.get(), p.x962.data(), p.x962.size(), c) != 1) {
    throw InvalidPeer("peer is not an encoded P-224 point");
  }
  if (EC_POINT_is_on_curve(group(), pt.get(), c) != 1 || EC_POINT_is_at_infinity(group(), pt.get())) {
    throw InvalidPeer("peer is not a valid P-224 point");
  }
  return pt;
}

Point encode(const EC_POINT* pt, BN_CTX* c) {
  Point out;
  std::size_t n = EC_POINT_point2oct(group(), pt, POINT_CONVERSION_UNCOMPRESSED, out.x962.data(),
                                     out.x962.size(), c);
  if (n != kPointBytes) throw CryptoError("EC_POINT_point2oct");
  return out;
}

Bytes gcm(bool encrypt, const AesKey& key, ByteView nonce, ByteView aad, ByteView in, std::uint8_t* tag,
          bool& ok) {
  CipherCtx c(EVP_CIPHER_CTX_new());
  if (!c) throw CryptoError("EVP_CIPHER_CTX_new");
  auto init = encrypt ? EVP_EncryptInit_ex : EVP_DecryptInit_ex;
  check(init(c.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr), "gcm init");
  check(EVP_CIPHER_CTX_ctrl(c.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(nonce.size()), nullptr),
        "gcm ivlen");
  check(init(c.get(), nullptr, nullptr, key.data(), nonce.data()), "gcm key");
  int len = 0;
  auto update = encrypt ? EVP_EncryptUpdate : EVP_DecryptUpdate;
  check(update(c.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())), "gcm aad");
  Bytes out(in.size() + 16);
  check(update(c.get(), out.data(), &len, in.data(), static_cast<int>(in.size())), "gcm update");
  int total = len;
  if (encrypt) {
    check(EVP_EncryptFinal_ex(c.get(), out.data() + total, &len), "gcm final");
    total += len;
    check(EVP_CIPHER_CTX_ctrl(c.get(), EVP_CTRL_GCM_GET_TAG, 16, tag), "gcm tag");
    ok = true;
  } else {
    check(EVP_CIPHER_CTX_ctrl(c.get(), EVP_CTRL_GCM_SET_TAG, 16, tag), "gcm tag");
    ok = EVP_DecryptFinal_ex(c.get(), out.data() + total, &len) == 1;
    if (ok) total += len;
  }
  out.resize(static_cast<std::size_t>(total));
  return out;
}

}  // namespace

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2) throw std::invalid_argument("odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex digit");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

Digest sha256(ByteView data) {
  Digest d{};
  unsigned int len = 0;
  check(EVP_Digest(data.data(), data.size(), d.data(), &len, EVP_sha256(), nullptr), "sha256");
  return d;
}

Bytes x963_kdf(ByteView secret, ByteView shared_info, std::size_t out_len) {
  if (out_len == 0) throw std::invalid_argument("x963_kdf: out_len must be at least 1");
  Bytes out;
  out.reserve(out_len + 32);
  Bytes block;
  for (std::uint32_t counter = 1; out.size() < out_len; ++counter) {
    block.assign(secret.begin(), secret.end());
    for (int shift = 24; shift >= 0; shift -= 8) block.push_back(static_cast<std::uint8_t>(counter >> shift));
    block.insert(block.end(), shared_info.begin(), shared_info.end());
    auto d = sha256(block);
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(out_len);
  return out;
}

SymKey sk_next_bytes(ByteView sk_prev) {
  if (sk_prev.size() != kSymKeyBytes) throw std::invalid_argument("sk_next: symmetric key must be 32 bytes");
  auto k = x963_kdf(sk_prev, as_bytes("update"), kSymKeyBytes);
  SymKey out;
  std::copy(k.begin(), k.end(), out.begin());
  return out;
}

DiversifiedScalars diversify(const SymKey& sk) {
  auto uv = x963_kdf(sk, as_bytes("diversify"), kDiversifyBytes);
  auto c = ctx();
  Bn u = bn_from(ByteView(uv).first(36));
  Bn v = bn_from(ByteView(uv).subspan(36));
  Bn m = order_minus_one();
  Bn ur = bn(), vr = bn();
  check(BN_nnmod(ur.get(), u.get(), m.get(), c.get()), "u mod (n-1)");
  check(BN_add_word(ur.get(), 1), "u + 1");
  check(BN_nnmod(vr.get(), v.get(), order(), c.get()), "v mod n");
  auto ua = bn_to_array<kScalarBytes>(ur.get());
  auto va = bn_to_array<kScalarBytes>(vr.get());
  return {Bytes(ua.begin(), ua.end()), Bytes(va.begin(), va.end())};
}

bool is_valid_scalar(ByteView be) {
  Bn x = bn_from(be);
  return !BN_is_zero(x.get()) && BN_cmp(x.get(), order()) < 0;
}

Scalar scalar_from_bytes(ByteView be) {
  if (be.size() > kScalarBytes || !is_valid_scalar(be)) {
    throw std::invalid_argument("scalar outside [1, n-1]");
  }
  return Scalar{bn_to_array<kScalarBytes>(bn_from(be).get())};
}

Scalar scalar_reduce(ByteView be) {
  auto c = ctx();
  Bn x = bn_from(be);
  Bn m = order_minus_one();
  Bn r = bn();
  check(BN_nnmod(r.get(), x.get(), m.get(), c.get()), "reduce");
  check(BN_add_word(r.get(), 1), "reduce + 1");
  return Scalar{bn_to_array<kScalarBytes>(r.get())};
}

const Scalar& group_order_minus_one() {
  static const Scalar s{bn_to_array<kScalarBytes>(order_minus_one().get())};
  return s;
}

Scalar d_next_scalar(const Scalar& d0, const SymKey& sk) {
  if (!is_valid_scalar(d0.be)) throw std::invalid_argument("d_next: d0 outside [1, n-1]");
  auto c = ctx();
  Bn d = bn_from(d0.be);
  SymKey key = sk;
  for (;;) {
    auto [u_bytes, v_bytes] = diversify(key);
    Bn u = bn_from(u_bytes);
    Bn v = bn_from(v_bytes);
    Bn prod = bn(), out = bn();
    check(BN_mod_mul(prod.get(), d.get(), u.get(), order(), c.get()), "d0*u");
    check(BN_mod_add(out.get(), prod.get(), v.get(), order(), c.get()), "+v");
    if (!BN_is_zero(out.get())) return Scalar{bn_to_array<kScalarBytes>(out.get())};
    key = sk_next_bytes(key);
  }
}

Point pub_of(const Scalar& d) {
  auto c = ctx();
  Bn k = bn_from(d.be);
  EcPoint pt(EC_POINT_new(group()));
  if (!pt) throw CryptoError("EC_POINT_new");
  check(EC_POINT_mul(group(), pt.get(), k.get(), nullptr, nullptr, c.get()), "d*G");
  return encode(pt.get(), c.get());
}

bool is_valid_point(ByteView encoded) {
  if (encoded.size() != kPointBytes) return false;
  Point p;
  std::copy(encoded.begin(), encoded.end(), p.x962.begin());
  try {
    auto c = ctx();
    point_from(p, c.get());
    return true;
  } catch (const InvalidPeer&) {
    return false;
  }
}

SharedSecret ecdh_p224(const Scalar& secret, const Point& peer) {
  if (!is_valid_scalar(secret.be)) throw std::invalid_argument("ecdh: secret outside [1, n-1]");
  auto c = ctx();
  EcPoint q = point_from(peer, c.get());
  Bn k = bn_from(secret.be);
  EcPoint r(EC_POINT_new(group()));
  if (!r) throw CryptoError("EC_POINT_new");
  check(EC_POINT_mul(group(), r.get(), nullptr, q.get(), k.get(), c.get()), "ecdh mul");
  if (EC_POINT_is_at_infinity(group(), r.get())) throw InvalidPeer("ECDH result is the point at infinity");
  Bn x = bn(), y = bn();
  check(EC_POINT_get_affine_coordinates(group(), r.get(), x.get(), y.get(), c.get()), "affine");
  return bn_to_array<kScalarBytes>(x.get());
}

KeyIv key_iv_split(ByteView shared, ByteView p_encoding) {
  if (shared.empty() || p_encoding.empty()) throw std::invalid_argument("key_iv_split: empty input");
  auto k = x963_kdf(shared, p_encoding, 32);
  KeyIv out{};
  std::copy_n(k.begin(), 16, out.key.begin());
  std::copy_n(k.begin() + 16, 16, out.iv.begin());
  return out;
}

Bytes aead_seal(const AesKey& key, ByteView plaintext, const Iv& iv) {
  std::array<std::uint8_t, 16> tag{};
  bool ok = false;
  Bytes out = gcm(true, key, ByteView(iv).first(12), iv, plaintext, tag.data(), ok);
  out.insert(out.end(), tag.begin(), tag.end());
  return out;
}

std::optional<Bytes> aead_open(const AesKey& key, ByteView sealed, const Iv& iv) {
  if (sealed.size() < 16) return std::nullopt;
  std::array<std::uint8_t, 16> tag{};
  std::copy(sealed.end() - 16, sealed.end(), tag.begin());
  bool ok = false;
  Bytes out = gcm(false, key, ByteView(iv).first(12), iv, sealed.first(sealed.size() - 16), tag.data(), ok);
  if (!ok) return std::nullopt;
  return out;
}

Bytes sym_crypt(const AesKey& key, ByteView data) {
  CipherCtx c(EVP_CIPHER_CTX_new());
  if (!c) throw CryptoError("EVP_CIPHER_CTX_new");
  std::array<std::uint8_t, 16> counter{};
  check(EVP_EncryptInit_ex(c.get(), EVP_aes_128_ctr(), nullptr, key.data(), counter.data()), "ctr init");
  Bytes out(data.size() + 16);
  int len = 0;
  check(EVP_EncryptUpdate(c.get(), out.data(), &len, data.data(), static_cast<int>(data.size())), "ctr update");
  int total = len;
  check(EVP_EncryptFinal_ex(c.get(), out.data() + total, &len), "ctr final");
  out.resize(static_cast<std::size_t>(total + len));
  return out;
}

Digest report_id(ByteView p_encoding) { return sha256(p_encoding); }

RandomSource RandomSource::system() { return RandomSource{}; }

RandomSource RandomSource::seeded(std::uint64_t seed) {
  RandomSource r;
  r.engine_.emplace(seed);
  return r;
}

void RandomSource::fill(std::span<std::uint8_t> out) {
  if (!engine_) {
    check(RAND_bytes(out.data(), static_cast<int>(out.size())), "RAND_bytes");
    return;
  }
  for (std::size_t i = 0; i < out.size(); i += 8) {
    std::uint64_t v = (*engine_)();
    for (std::size_t j = 0; j < 8 && i + j < out.size(); ++j) out[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
  }
}

std::uint64_t RandomSource::next_u64() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  std::uint64_t v = 0;
  for (auto x : b) v = v << 8 | x;
  return v;
}

Scalar ConcreteProvider::fresh_secret(std::string_view) { return scalar_reduce(rng_.bytes(36)); }

SymKey ConcreteProvider::fresh_symkey(std::string_view) {
  SymKey k{};
  rng_.fill(k);
  return k;
}

Bytes ConcreteProvider::pack(const Bytes& inner, std::uint64_t ts) const {
  Bytes out = inner;
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(ts >> shift));
  return out;
}

std::optional<std::pair<Bytes, std::uint64_t>> ConcreteProvider::unpack(const Bytes& pt) const {
  if (pt.size() < 8) return std::nullopt;
  std::uint64_t ts = 0;
  for (std::size_t i = pt.size() - 8; i < pt.size(); ++i) ts = ts << 8 | pt[i];
  return std::pair{Bytes(pt.begin(), pt.end() - 8), ts};
}

}  // namespace findmy::crypto
