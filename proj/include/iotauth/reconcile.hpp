#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "iotauth/bits.hpp"
#include "iotauth/digest.hpp"
#include "iotauth/errors.hpp"
#include "iotauth/feature.hpp"
#include "iotauth/svm.hpp"
#include "iotauth/transcript.hpp"

namespace iotauth {

// Shared secret obtained without transmitting any of its bits.
struct Seed {
  explicit Seed(BitString bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw std::invalid_argument("Seed: empty");
    if (bits_.all_zero()) throw std::invalid_argument("Seed: all-zero forbidden");
  }
  const BitString& bits() const { return bits_; }
  std::size_t length() const { return bits_.size(); }
  friend bool operator==(const Seed&, const Seed&) = default;

 private:
  BitString bits_;
};

struct ReconcileConfig {
  std::size_t target_bits = 128;
  std::string hash_algorithm = "sha-256";
};

enum class HandshakeStatus { ok, mismatch };

struct HandshakeResult {
  HandshakeStatus status = HandshakeStatus::mismatch;
  std::optional<Seed> seed;  // engaged iff status == ok
  Transcript transcript;

  bool ok() const { return status == HandshakeStatus::ok; }
};

using SensorProbeFn = std::function<FeatureVector(std::size_t round_index)>;

constexpr std::uint64_t kIndexBits = 32;
constexpr std::uint64_t kAckBits = 8;

// Boundary-plus-hash handshake: the gateway sends the trained boundary, the
// indices that survived its guard band, and a digest of its bit string. The
// sensor re-quantizes its own measurements at those indices and acks iff the
// digests agree. No seed bits and no parity ever cross the air; a mismatch is
// resolved by the caller probing fresh rounds and retrying.
inline HandshakeResult establish_seed(const QuantizedBits& gateway_bits,
                                      const SensorProbeFn& sensor_probe_fn,
                                      const Boundary& boundary,
                                      const ReconcileConfig& config) {
  if (gateway_bits.bits.size() < config.target_bits)
    throw InsufficientBits(gateway_bits.bits.size(), config.target_bits);
  if (config.target_bits < 1)
    throw std::invalid_argument("establish_seed: target_bits must be >= 1");

  const BitString seed_bits = gateway_bits.bits.prefix(config.target_bits);
  const auto kept =
      std::vector<std::size_t>(gateway_bits.kept_indices.begin(),
                               gateway_bits.kept_indices.begin() +
                                   static_cast<std::ptrdiff_t>(config.target_bits));

  HandshakeResult result;
  result.transcript.append(Party::gateway, PayloadKind::boundary,
                           boundary.serialized_size_bits());
  result.transcript.append(Party::gateway, PayloadKind::kept_indices,
                           kIndexBits * kept.size());
  const HashDigest gateway_digest = hash_bits(seed_bits, config.hash_algorithm);
  result.transcript.append(Party::gateway, PayloadKind::digest, kDigestBits);

  BitString sensor_bits;
  for (std::size_t idx : kept)
    sensor_bits.push_back(decision_value(boundary, sensor_probe_fn(idx)) > 0.0);
  const HashDigest sensor_digest = hash_bits(sensor_bits, config.hash_algorithm);

  if (sensor_digest == gateway_digest) {
    result.transcript.append(Party::sensor, PayloadKind::ack, kAckBits);
    result.status = HandshakeStatus::ok;
    result.seed = Seed{seed_bits};
  } else {
    result.transcript.append(Party::sensor, PayloadKind::nack, kAckBits);
    result.status = HandshakeStatus::mismatch;
  }
  return result;
}

// True iff the transcript carries no seed/key material: neither reconciliation
// parity nor key-derived payloads.
inline bool assert_no_secret_leak(const Transcript& t) {
  for (const auto& m : t.messages()) {
    if (m.kind == PayloadKind::parity || m.kind == PayloadKind::key_material)
      return false;
  }
  return true;
}

}  // namespace iotauth
