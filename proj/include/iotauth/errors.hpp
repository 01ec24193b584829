#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iotauth {

// Clustering input that cannot be partitioned (e.g. all points identical).
struct DegenerateInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// SVM training gave up before reaching the KKT tolerance.
struct NoConvergence : std::runtime_error {
  NoConvergence(const std::string& what, double gap)
      : std::runtime_error(what), duality_gap(gap) {}
  double duality_gap;
};

// Quantization kept fewer bits than the requested seed length. The caller is
// expected to probe more rounds and retry.
struct InsufficientBits : std::runtime_error {
  InsufficientBits(std::size_t kept_in, std::size_t target_in)
      : std::runtime_error("quantizer kept " + std::to_string(kept_in) +
                           " bits, need " + std::to_string(target_in)),
        kept(kept_in),
        target(target_in) {}
  std::size_t kept;
  std::size_t target;
};

// LFSR seed folded to the all-zero state (the one fixed point).
struct ZeroState : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LengthError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownEvidenceKind : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad configuration value; `field` is the dotted section.key path and `line`
// the 1-based line in the source file (0 when not file-backed).
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& field_in, const std::string& what,
              int line_in = 0)
      : std::runtime_error(field_in.empty() ? what : field_in + ": " + what),
        field(field_in),
        line(line_in) {}
  std::string field;
  int line;
};

}  // namespace iotauth
