#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace iotauth {

enum class Party { gateway, sensor };

enum class PayloadKind {
  boundary,
  kept_indices,
  digest,
  ack,
  nack,
  parity,
  challenge,
  key_material,
};

constexpr std::string_view to_string(Party p) {
  return p == Party::gateway ? "gateway" : "sensor";
}

constexpr std::string_view to_string(PayloadKind k) {
  switch (k) {
    case PayloadKind::boundary: return "boundary";
    case PayloadKind::kept_indices: return "kept_indices";
    case PayloadKind::digest: return "digest";
    case PayloadKind::ack: return "ack";
    case PayloadKind::nack: return "nack";
    case PayloadKind::parity: return "parity";
    case PayloadKind::challenge: return "challenge";
    case PayloadKind::key_material: return "key_material";
  }
  return "?";
}

struct Message {
  Party sender;
  PayloadKind kind;
  std::uint64_t size_bits;
};

// Append-only record of every over-the-air message in one protocol run.
class Transcript {
 public:
  void append(Party sender, PayloadKind kind, std::uint64_t size_bits) {
    messages_.push_back({sender, kind, size_bits});
  }
  void append(const Transcript& other) {
    messages_.insert(messages_.end(), other.messages_.begin(),
                     other.messages_.end());
  }

  const std::vector<Message>& messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }
  bool empty() const { return messages_.empty(); }

  std::uint64_t total_bits() const {
    std::uint64_t total = 0;
    for (const auto& m : messages_) total += m.size_bits;
    return total;
  }

  std::size_t count_kind(PayloadKind kind) const {
    std::size_t n = 0;
    for (const auto& m : messages_) n += m.kind == kind;
    return n;
  }

 private:
  std::vector<Message> messages_;
};

}  // namespace iotauth
