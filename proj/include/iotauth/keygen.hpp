#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "iotauth/bits.hpp"
#include "iotauth/channel.hpp"
#include "iotauth/digest.hpp"
#include "iotauth/reconcile.hpp"
#include "iotauth/rng.hpp"
#include "iotauth/transcript.hpp"

namespace iotauth {

struct OpCounts {
  std::uint64_t sensor_computations = 0;
  std::uint64_t gateway_computations = 0;
  std::uint64_t messages = 0;

  OpCounts& operator+=(const OpCounts& o) {
    sensor_computations += o.sensor_computations;
    gateway_computations += o.gateway_computations;
    messages += o.messages;
    return *this;
  }
};

struct KeygenConfig {
  std::size_t key_bits = 128;
  std::size_t block_bits = 8;   // parity block size
  std::size_t retry_cap = 5;
  std::string hash_algorithm = "sha-256";

  void validate() const {
    if (key_bits < 8 || key_bits > 256)
      throw std::invalid_argument("KeygenConfig: key_bits must be in [8,256]");
    if (block_bits < 2)
      throw std::invalid_argument("KeygenConfig: block_bits must be >= 2");
    if (retry_cap < 1)
      throw std::invalid_argument("KeygenConfig: retry_cap must be >= 1");
  }
};

struct KeygenSession {
  BitString key;
  Transcript transcript;
  OpCounts op_counts;
  std::size_t discarded_blocks = 0;
  std::size_t attempts = 0;
  std::string hash_algorithm = "sha-256";
};

struct KeygenFailure : std::runtime_error {
  KeygenFailure(const std::string& what, Transcript t, OpCounts ops)
      : std::runtime_error(what), transcript(std::move(t)), op_counts(ops) {}
  Transcript transcript;
  OpCounts op_counts;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::uint8_t parity_of(const std::vector<std::uint8_t>& bits,
                              std::size_t begin, std::size_t len) {
  std::uint8_t p = 0;
  for (std::size_t i = 0; i < len; ++i) p ^= bits[begin + i];
  return p;
}

// Domain-separated from the confirmation digest so the transmitted digest
// does not equal the derived key.
inline HashDigest amplify(const BitString& bits, const std::string& algorithm) {
  std::vector<std::uint8_t> buf{'a', 'm', 'p'};
  const auto packed = bits.packed_bytes();
  buf.insert(buf.end(), packed.begin(), packed.end());
  return hash_bytes(buf, algorithm);
}

}  // namespace detail

// Reference physical-layer key generation: median-threshold RSS quantization,
// one parity pass per batch with mismatched blocks discarded, then a 256-bit
// hash as privacy amplification. The parity bits on the air are exactly the
// leakage the boundary+hash handshake avoids.
inline KeygenSession run_keygen_session(const ReciprocityParams& params,
                                        const KeygenConfig& config, Rng& rng) {
  config.validate();
  params.validate();

  KeygenSession session;
  session.hash_algorithm = config.hash_algorithm;
  std::vector<std::uint8_t> agreed_gateway, agreed_sensor;

  while (session.attempts < config.retry_cap) {
    ++session.attempts;

    const std::size_t deficit = config.key_bits - agreed_gateway.size();
    const std::size_t n_blocks =
        std::max<std::size_t>(2, (2 * deficit + config.block_bits - 1) / config.block_bits);
    const std::size_t n_rounds = n_blocks * config.block_bits;

    std::vector<double> gw_rssi(n_rounds), sn_rssi(n_rounds);
    for (std::size_t i = 0; i < n_rounds; ++i) {
      const ProbeRound round = probe(params, rng);
      gw_rssi[i] = round.gateway_obs.rssi;
      sn_rssi[i] = round.sensor_obs.rssi;
    }

    // Each side thresholds its own batch at its own median; nothing crosses
    // the air for quantization.
    const double gw_thresh = detail::median(gw_rssi);
    const double sn_thresh = detail::median(sn_rssi);
    std::vector<std::uint8_t> gw_bits(n_rounds), sn_bits(n_rounds);
    for (std::size_t i = 0; i < n_rounds; ++i) {
      gw_bits[i] = gw_rssi[i] > gw_thresh;
      sn_bits[i] = sn_rssi[i] > sn_thresh;
    }
    session.op_counts.gateway_computations += n_rounds + 1;
    session.op_counts.sensor_computations += n_rounds + 1;

    // Single-pass block parity; both sides drop every mismatched block.
    session.transcript.append(Party::gateway, PayloadKind::parity, n_blocks);
    session.transcript.append(Party::sensor, PayloadKind::kept_indices, n_blocks);
    session.op_counts.messages += 2;
    session.op_counts.gateway_computations += n_blocks;
    session.op_counts.sensor_computations += n_blocks;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const std::size_t begin = b * config.block_bits;
      if (detail::parity_of(gw_bits, begin, config.block_bits) ==
          detail::parity_of(sn_bits, begin, config.block_bits)) {
        agreed_gateway.insert(agreed_gateway.end(), gw_bits.begin() + begin,
                              gw_bits.begin() + begin + config.block_bits);
        agreed_sensor.insert(agreed_sensor.end(), sn_bits.begin() + begin,
                             sn_bits.begin() + begin + config.block_bits);
      } else {
        ++session.discarded_blocks;
      }
    }

    if (agreed_gateway.size() < config.key_bits) continue;

    // Key confirmation before amplification.
    BitString gw_key(std::vector<std::uint8_t>(
        agreed_gateway.begin(), agreed_gateway.begin() + config.key_bits));
    BitString sn_key(std::vector<std::uint8_t>(
        agreed_sensor.begin(), agreed_sensor.begin() + config.key_bits));
    const HashDigest gw_digest = hash_bits(gw_key, config.hash_algorithm);
    const HashDigest sn_digest = hash_bits(sn_key, config.hash_algorithm);
    session.transcript.append(Party::gateway, PayloadKind::digest, kDigestBits);
    session.op_counts.messages += 1;
    session.op_counts.gateway_computations += 1;
    session.op_counts.sensor_computations += 1;

    if (gw_digest == sn_digest) {
      session.transcript.append(Party::sensor, PayloadKind::ack, kAckBits);
      session.op_counts.messages += 1;
      // Privacy amplification: key = leading key_bits of H(agreed bits).
      const HashDigest amplified = detail::amplify(gw_key, config.hash_algorithm);
      session.op_counts.gateway_computations += 1;
      session.op_counts.sensor_computations += 1;
      for (std::size_t i = 0; i < config.key_bits; ++i)
        session.key.push_back((amplified.bytes[i / 8] >> (7 - i % 8)) & 1);
      return session;
    }

    // Undetected even-weight errors slipped through the parity pass; start
    // over with fresh measurements.
    session.transcript.append(Party::sensor, PayloadKind::nack, kAckBits);
    session.op_counts.messages += 1;
    agreed_gateway.clear();
    agreed_sensor.clear();
  }

  throw KeygenFailure("keygen: retry cap exhausted", session.transcript,
                      session.op_counts);
}

inline KeygenSession run_keygen_session(const ReciprocityParams& params,
                                        std::size_t key_bits, Rng& rng) {
  KeygenConfig config;
  config.key_bits = key_bits;
  return run_keygen_session(params, config, rng);
}

constexpr std::uint64_t kChallengeBits = 128;

// Challenge-response authentication with the established key: every
// authentication costs two messages and one hash per side, unlike the
// schedule check which costs none.
inline OpCounts authenticate_with_key(KeygenSession& session, std::size_t n_times) {
  for (std::size_t i = 0; i < n_times; ++i) {
    session.transcript.append(Party::gateway, PayloadKind::challenge, kChallengeBits);
    session.transcript.append(Party::sensor, PayloadKind::key_material, kDigestBits);
    session.op_counts.messages += 2;
    session.op_counts.sensor_computations += 1;   // response MAC
    session.op_counts.gateway_computations += 1;  // verification
  }
  return session.op_counts;
}

}  // namespace iotauth
