#pragma once

// Role logic for pairing, key rotation, beacon emission, report creation,
// server storage and owner retrieval. Every algorithm is written once against
// the CryptoProvider concept and runs unchanged over symbolic terms or real
// P-224 / AES-GCM cryptography.

#include <compare>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "findmy/events.hpp"

namespace findmy::protocol {

struct AgentId {
  std::string name;
  auto operator<=>(const AgentId&) const = default;
};

// clang-format off
template <class P>
concept CryptoProvider = requires(P& p,
                                  const typename P::Secret& secret,
                                  const typename P::Pub& pub,
                                  const typename P::SymKey& sk,
                                  const typename P::Shared& shared,
                                  const typename P::EncKey& key,
                                  const typename P::Iv& iv,
                                  const typename P::Plain& plain,
                                  const typename P::Cipher& cipher,
                                  const typename P::Digest& digest,
                                  const typename P::Timestamp& ts,
                                  const AgentId& agent) {
  { p.fresh_secret(std::string_view{}) } -> std::same_as<typename P::Secret>;
  { p.fresh_symkey(std::string_view{}) } -> std::same_as<typename P::SymKey>;
  { p.pub_of(secret) } -> std::same_as<typename P::Pub>;
  { p.sk_next(sk) } -> std::same_as<typename P::SymKey>;
  { p.d_next(secret, sk) } -> std::same_as<typename P::Secret>;
  { p.ecdh(secret, pub) } -> std::same_as<typename P::Shared>;
  { p.key_of(shared, pub) } -> std::same_as<typename P::EncKey>;
  { p.iv_of(shared, pub) } -> std::same_as<typename P::Iv>;
  { p.sym_seal(plain, key) } -> std::same_as<typename P::Cipher>;
  { p.sym_open(cipher, key) } -> std::same_as<std::optional<typename P::Plain>>;
  { p.pack(cipher, ts) } -> std::same_as<typename P::Plain>;
  { p.unpack(plain) } -> std::same_as<std::optional<std::pair<typename P::Cipher, typename P::Timestamp>>>;
  { p.aead_seal(key, plain, iv) } -> std::same_as<typename P::Cipher>;
  { p.aead_open(key, cipher, iv) } -> std::same_as<std::optional<typename P::Plain>>;
  { p.hash(pub) } -> std::same_as<typename P::Digest>;
  { p.param(agent) } -> std::same_as<typename P::Param>;
  { p.param(secret) } -> std::same_as<typename P::Param>;
  { p.param(sk) } -> std::same_as<typename P::Param>;
  { p.param(pub) } -> std::same_as<typename P::Param>;
  { p.param(plain) } -> std::same_as<typename P::Param>;
  { p.param(ts) } -> std::same_as<typename P::Param>;
  { p.param(digest) } -> std::same_as<typename P::Param>;
};
// clang-format on

template <CryptoProvider P>
struct ProtocolEvent {
  EventKind kind;
  std::vector<typename P::Param> params;
};

template <CryptoProvider P>
using EventLog = std::vector<ProtocolEvent<P>>;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PairingRefused : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

enum class Role { Owner, Lta, Finder };

/// Consumable role assignments. A granted role is used up by the first
/// protocol step that needs it.
class RoleRegistry {
 public:
  void grant(const AgentId& agent, Role role) { roles_.insert({agent, role}); }
  bool holds(const AgentId& agent, Role role) const { return roles_.count({agent, role}) > 0; }
  bool consume(const AgentId& agent, Role role) { return roles_.erase({agent, role}) > 0; }

 private:
  std::set<std::pair<AgentId, Role>> roles_;
};

template <CryptoProvider P>
struct MasterBeaconKey {
  typename P::Secret d0;
  typename P::SymKey sk0;
  AgentId owner;
  AgentId lta;

  bool operator==(const MasterBeaconKey&) const = default;
};

template <CryptoProvider P>
struct EpochKeys {
  std::uint32_t epoch = 0;
  typename P::SymKey sk;
  typename P::Secret d;
  typename P::Pub p;

  bool operator==(const EpochKeys&) const = default;
};

template <CryptoProvider P>
struct Beacon {
  typename P::Pub p;
  std::vector<std::uint8_t> metadata;
};

template <CryptoProvider P>
struct LocationReport {
  typename P::Cipher ciphertext;
  typename P::Pub ephemeral_pub;
  typename P::Digest report_id;
  std::optional<std::uint64_t> upload_time;
};

template <CryptoProvider P>
struct Recovered {
  typename P::Plain location;
  typename P::Timestamp finder_time;
};

enum class DecryptFailure { Authentication, Framing, InnerCipher };

template <CryptoProvider P>
using DecryptResult = std::variant<Recovered<P>, DecryptFailure>;

template <CryptoProvider P>
void record(EventLog<P>* log, EventKind kind, std::vector<typename P::Param> params) {
  if (log) log->push_back({kind, std::move(params)});
}

/// Pairing over the out-of-band channel: the owner draws (d0, SK0) and both
/// sides keep identical copies. Nothing is sent on the network.
template <CryptoProvider P>
MasterBeaconKey<P> pair_devices(const AgentId& owner, const AgentId& lta, RoleRegistry& roles,
                                P& provider, EventLog<P>* log = nullptr) {
  if (!roles.holds(owner, Role::Owner)) {
    throw PairingRefused(owner.name + " does not hold an unused owner role");
  }
  if (!roles.holds(lta, Role::Lta)) {
    throw PairingRefused(lta.name + " does not hold an unused LTA role");
  }
  roles.consume(owner, Role::Owner);
  roles.consume(lta, Role::Lta);
  MasterBeaconKey<P> key{provider.fresh_secret("d0"), provider.fresh_symkey("SK0"), owner, lta};
  record<P>(log, EventKind::KeyEst,
            {provider.param(owner), provider.param(lta), provider.param(key.d0), provider.param(key.sk0)});
  return key;
}

/// Epoch 1 from the master key.
template <CryptoProvider P>
EpochKeys<P> rotate_epoch(const MasterBeaconKey<P>& master, P& provider) {
  auto sk = provider.sk_next(master.sk0);
  auto d = provider.d_next(master.d0, sk);
  auto p = provider.pub_of(d);
  return {1, std::move(sk), std::move(d), std::move(p)};
}

/// Epoch i+1 from epoch i.
template <CryptoProvider P>
EpochKeys<P> rotate_epoch(const MasterBeaconKey<P>& master, const EpochKeys<P>& previous, P& provider) {
  auto sk = provider.sk_next(previous.sk);
  auto d = provider.d_next(master.d0, sk);
  auto p = provider.pub_of(d);
  return {previous.epoch + 1, std::move(sk), std::move(d), std::move(p)};
}

/// Epochs 1..count.
template <CryptoProvider P>
std::vector<EpochKeys<P>> derive_epochs(const MasterBeaconKey<P>& master, std::uint32_t count, P& provider) {
  std::vector<EpochKeys<P>> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    out.push_back(i == 0 ? rotate_epoch(master, provider) : rotate_epoch(master, out.back(), provider));
  }
  return out;
}

template <CryptoProvider P>
Beacon<P> emit_beacon(const MasterBeaconKey<P>& master, const EpochKeys<P>& keys, P& provider,
                      EventLog<P>* log = nullptr) {
  record<P>(log, keys.epoch == 1 ? EventKind::LPFS1 : EventKind::LPFS2,
            {provider.param(master.lta), provider.param(master.owner), provider.param(master.d0),
             provider.param(master.sk0), provider.param(keys.d), provider.param(keys.sk)});
  if (keys.epoch == 1) {
    record<P>(log, EventKind::Ok_s,
              {provider.param(master.lta), provider.param(master.owner), provider.param(master.d0),
               provider.param(master.sk0)});
  }
  return {keys.p, {}};
}

/// The lost device: rotates its key schedule and emits the current beacon
/// once it has entered lost mode.
template <CryptoProvider P>
class LostDevice {
 public:
  explicit LostDevice(MasterBeaconKey<P> master) : master_(std::move(master)) {}

  void enter_lost_mode() { lost_ = true; }
  bool lost() const { return lost_; }
  const std::optional<EpochKeys<P>>& current() const { return current_; }

  const EpochKeys<P>& rotate(P& provider) {
    current_ = current_ ? rotate_epoch(master_, *current_, provider) : rotate_epoch(master_, provider);
    return *current_;
  }

  Beacon<P> emit(P& provider, EventLog<P>* log = nullptr) const {
    if (!lost_) throw ProtocolError("beacons are only emitted in lost mode");
    if (!current_) throw ProtocolError("no epoch keys derived yet");
    return emit_beacon(master_, *current_, provider, log);
  }

 private:
  MasterBeaconKey<P> master_;
  std::optional<EpochKeys<P>> current_;
  bool lost_ = false;
};

/// Finder side: fresh ephemeral key, ECDH with the beacon key, inner
/// encryption of the location under e', then AEAD over <inner, t_F> with
/// the IV as both nonce and associated data.
template <CryptoProvider P>
LocationReport<P> finder_make_report(const Beacon<P>& beacon, const typename P::Plain& location,
                                     const typename P::Timestamp& finder_time, P& provider,
                                     EventLog<P>* log = nullptr) {
  auto d_f = provider.fresh_secret("d_f");
  auto shared = provider.ecdh(d_f, beacon.p);
  auto key = provider.key_of(shared, beacon.p);
  auto iv = provider.iv_of(shared, beacon.p);
  auto inner = provider.sym_seal(location, key);
  auto ciphertext = provider.aead_seal(key, provider.pack(inner, finder_time), iv);
  record<P>(log, EventKind::Floc, {provider.param(location), provider.param(d_f), provider.param(beacon.p)});
  return {std::move(ciphertext), provider.pub_of(d_f), provider.hash(beacon.p), std::nullopt};
}

/// Authenticated owner session; the channel itself is abstract.
struct OwnerSession {
  AgentId owner;
  bool authenticated = false;
};

class AuthenticationRequired : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

template <CryptoProvider P>
class ReportServer {
 public:
  void store(LocationReport<P> report, std::uint64_t upload_time) {
    report.upload_time = upload_time;
    auto id = report.report_id;
    reports_[std::move(id)].push_back(std::move(report));
  }

  std::vector<LocationReport<P>> fetch(const OwnerSession& session, const typename P::Digest& digest) const {
    if (!session.authenticated) throw AuthenticationRequired(session.owner.name + " is not authenticated");
    auto it = reports_.find(digest);
    return it == reports_.end() ? std::vector<LocationReport<P>>{} : it->second;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [_, v] : reports_) n += v.size();
    return n;
  }

 private:
  std::map<typename P::Digest, std::vector<LocationReport<P>>> reports_;
};

template <CryptoProvider P>
std::optional<EpochKeys<P>> owner_match(const std::vector<EpochKeys<P>>& keys, const typename P::Digest& digest,
                                        P& provider) {
  for (const auto& k : keys) {
    if (provider.hash(k.p) == digest) return k;
  }
  return std::nullopt;
}

template <CryptoProvider P>
DecryptResult<P> owner_decrypt(const LocationReport<P>& report, const EpochKeys<P>& keys, P& provider) {
  auto shared = provider.ecdh(keys.d, report.ephemeral_pub);
  auto key = provider.key_of(shared, keys.p);
  auto iv = provider.iv_of(shared, keys.p);
  auto plain = provider.aead_open(key, report.ciphertext, iv);
  if (!plain) return DecryptFailure::Authentication;
  auto parts = provider.unpack(*plain);
  if (!parts) return DecryptFailure::Framing;
  auto location = provider.sym_open(parts->first, key);
  if (!location) return DecryptFailure::InnerCipher;
  return Recovered<P>{std::move(*location), std::move(parts->second)};
}

}  // namespace findmy::protocol
