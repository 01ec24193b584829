#pragma once

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "iotauth/digest.hpp"
#include "iotauth/sim.hpp"

namespace iotauth {

constexpr const char* kReportFormatVersion = "1";

// Reproducibility stamp carried by every output file. The timestamp honors
// SOURCE_DATE_EPOCH so identical runs can emit identical bytes.
struct RunStamp {
  std::string format_version = kReportFormatVersion;
  std::string config_hash;
  std::uint64_t rng_seed = 0;
  std::string timestamp;

  static RunStamp make(const std::string& config_text, std::uint64_t rng_seed) {
    RunStamp stamp;
    stamp.config_hash =
        hash_bytes(reinterpret_cast<const std::uint8_t*>(config_text.data()),
                   config_text.size())
            .hex();
    stamp.rng_seed = rng_seed;
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
      now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    }
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    stamp.timestamp = buf;
    return stamp;
  }

  // CSV stamp line. No timestamp here: CSV artifacts stay byte-identical
  // across reruns unconditionally.
  std::string csv_comment() const {
    std::ostringstream out;
    out << "# format_version=" << format_version << " config_hash=" << config_hash
        << " rng_seed=" << rng_seed << "\n";
    return out.str();
  }
};

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace detail

inline void write_report(const std::string& path, const RunStamp& stamp,
                         const std::string& body) {
  auto out = detail::open_out(path);
  out << "format_version: " << stamp.format_version << "\n"
      << "timestamp: " << stamp.timestamp << "\n"
      << "config_hash: " << stamp.config_hash << "\n"
      << "rng_seed: " << stamp.rng_seed << "\n"
      << body;
}

// step,device_id,evidence_source_count,trust,level
inline void write_trajectories_csv(const std::string& path, const RunStamp& stamp,
                                   const MetricsReport& report) {
  auto out = detail::open_out(path);
  out << stamp.csv_comment();
  out << "step,device_id,evidence_source_count,trust,level\n";
  for (const auto& tr : report.trajectories) {
    for (const auto& p : tr.points) {
      out << p.step << ',' << tr.device_id << ',' << tr.evidence_sources << ','
          << detail::fmt_g17(p.trust) << ',' << p.level << "\n";
    }
  }
}

// sender,payload_kind,size_bits
inline void write_transcripts_csv(const std::string& path, const RunStamp& stamp,
                                  const std::vector<Transcript>& transcripts) {
  auto out = detail::open_out(path);
  out << stamp.csv_comment();
  out << "sender,payload_kind,size_bits\n";
  for (const auto& t : transcripts) {
    for (const auto& m : t.messages()) {
      out << to_string(m.sender) << ',' << to_string(m.kind) << ','
          << m.size_bits << "\n";
    }
  }
}

// n,scheme,messages,sensor_ops,gateway_ops,privacy_leak_free
inline void write_comparison_csv(const std::string& path, const RunStamp& stamp,
                                 const CostComparison& cmp) {
  auto out = detail::open_out(path);
  out << stamp.csv_comment();
  out << "n,scheme,messages,sensor_ops,gateway_ops,privacy_leak_free\n";
  for (const auto& r : cmp.rows) {
    out << r.n_auth << ',' << r.scheme << ',' << r.messages << ','
        << r.sensor_ops << ',' << r.gateway_ops << ','
        << (r.privacy_leak_free ? "true" : "false") << "\n";
  }
}

inline std::string boundary_summary(const Boundary& b) {
  std::ostringstream out;
  out << "kernel=" << (b.kernel.kind == KernelKind::rbf ? "rbf" : "linear");
  if (b.kernel.kind == KernelKind::rbf)
    out << " gamma=" << detail::fmt_g17(b.kernel.gamma);
  out << " support_points=" << b.support_points.size()
      << " bias=" << detail::fmt_g17(b.bias)
      << " size_bits=" << b.serialized_size_bits();
  return out.str();
}

}  // namespace iotauth
