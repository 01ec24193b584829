#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdint>
#include <future>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "iotauth/channel.hpp"
#include "iotauth/config.hpp"
#include "iotauth/detector.hpp"
#include "iotauth/errors.hpp"
#include "iotauth/keygen.hpp"
#include "iotauth/prbs.hpp"
#include "iotauth/reconcile.hpp"
#include "iotauth/rng.hpp"
#include "iotauth/svm.hpp"
#include "iotauth/transcript.hpp"
#include "iotauth/trust.hpp"

namespace iotauth {

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

struct ScenarioConfig {
  std::uint64_t rng_seed = 1;
  std::size_t n_sensors = 2;
  std::size_t n_steps = 64;

  ReciprocityParams channel = ReciprocityParams::from_rho(0.95, 3);

  KernelSpec kernel = KernelSpec::rbf_for_dim(5);
  double soft_margin_c = 10.0;
  std::size_t training_rounds = 200;
  TrainOptions train_options{};

  double guard_epsilon = 0.5;
  std::size_t target_bits = 128;
  std::size_t probe_batch = 512;
  std::size_t handshake_retry_cap = 5;
  std::string hash_algorithm = "sha-256";

  LfsrSpec lfsr = LfsrSpec::maximal(8);
  AccessMode access_mode = AccessMode::time_slots;
  unsigned bits_per_slot = 2;
  std::size_t window = 4;
  std::size_t max_mismatches = 0;
  std::size_t spoofers = 1;

  UpdateRule trust_rule{};
  AuthorizationPolicy policy = AuthorizationPolicy::default_policy();
  double k_sigma = 3.0;
  std::size_t warmup_n = 30;
  std::vector<std::size_t> evidence_source_counts = {1, 2, 3};
  double attack_duty_cycle = 1.0;
  std::size_t attack_period = 2;
  double feature_offset = 8.0;
  double p_detect = 0.9;
  double p_false = 0.0;

  KeygenConfig keygen{};

  QuantizerConfig quantizer_config() const {
    return {guard_epsilon, soft_margin_c, target_bits};
  }
  ReconcileConfig reconcile_config() const {
    return {target_bits, hash_algorithm};
  }

  void validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
      throw ConfigError(field, why);
    };
    try {
      channel.validate();
    } catch (const std::exception& e) {
      fail("channel", e.what());
    }
    try {
      kernel.validate();
      quantizer_config().validate();
      lfsr.validate();
      trust_rule.validate();
      policy.validate();
      keygen.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail("config", e.what());
    }
    if (n_sensors < 1) fail("scenario.n_sensors", "must be >= 1");
    if (n_steps < 1) fail("scenario.n_steps", "must be >= 1");
    if (training_rounds < 8) fail("svm.training_rounds", "must be >= 8");
    if (probe_batch < target_bits)
      fail("quantizer.probe_batch", "must be >= quantizer.target_bits");
    if (handshake_retry_cap < 1) fail("quantizer.retry_cap", "must be >= 1");
    if (bits_per_slot < 1 || bits_per_slot > 16)
      fail("access.bits_per_slot", "must be in [1,16]");
    if (window < 1) fail("access.window", "must be >= 1 (0 accepts vacuously)");
    if (window > n_steps) fail("access.window", "must be <= scenario.n_steps");
    if (!(k_sigma > 0.0)) fail("detector.k_sigma", "must be > 0");
    if (evidence_source_counts.empty())
      fail("holistic.evidence_sources", "must not be empty");
    for (std::size_t s : evidence_source_counts)
      if (s < 1 || s > 3) fail("holistic.evidence_sources", "entries must be in [1,3]");
    if (attack_duty_cycle < 0.0 || attack_duty_cycle > 1.0)
      fail("holistic.attack_duty_cycle", "must be in [0,1]");
    if (attack_period < 1) fail("holistic.attack_period", "must be >= 1");
    if (p_detect < 0.0 || p_detect > 1.0) fail("holistic.p_detect", "must be in [0,1]");
    if (p_false < 0.0 || p_false > 1.0) fail("holistic.p_false", "must be in [0,1]");
  }
};

// Builds a ScenarioConfig from a parsed file, rejecting unknown keys.
inline ScenarioConfig load_scenario_config(const ConfigFile& cf) {
  static const std::set<std::string> known = {
      "scenario.rng_seed", "scenario.n_sensors", "scenario.n_steps",
      "channel.rho", "channel.dims", "channel.drift_rate",
      "svm.kernel", "svm.gamma", "svm.C", "svm.training_rounds",
      "svm.tol", "svm.max_passes",
      "quantizer.guard_epsilon", "quantizer.target_bits",
      "quantizer.probe_batch", "quantizer.retry_cap", "quantizer.hash",
      "lfsr.degree", "lfsr.taps",
      "access.mode", "access.bits_per_slot", "access.window",
      "access.max_mismatches", "access.spoofers",
      "trust.reward", "trust.penalty_base", "trust.escalation", "trust.thresholds",
      "detector.k_sigma", "detector.warmup",
      "holistic.evidence_sources", "holistic.attack_duty_cycle",
      "holistic.attack_period", "holistic.feature_offset",
      "holistic.p_detect", "holistic.p_false",
      "compare.n_grid", "compare.key_bits", "compare.block_bits",
  };
  for (const auto& key : cf.keys())
    if (!known.count(key))
      throw ConfigError(key, "unknown configuration key", cf.line_of(key));

  ScenarioConfig sc;
  sc.rng_seed = cf.get_uint("scenario.rng_seed", 1);
  sc.n_sensors = cf.get_uint("scenario.n_sensors", 2);
  sc.n_steps = cf.get_uint("scenario.n_steps", 64);

  const double rho = cf.get_double("channel.rho");  // required
  const std::size_t dims = cf.get_uint("channel.dims", 3);
  const double drift = cf.get_double("channel.drift_rate", 0.0);
  try {
    sc.channel = ReciprocityParams::from_rho(rho, dims, drift);
  } catch (const std::exception& e) {
    throw ConfigError("channel.rho", e.what(), cf.line_of("channel.rho"));
  }

  const std::string kernel_kind = cf.get_string("svm.kernel", "rbf");
  const std::string gamma_str = cf.get_string("svm.gamma", "auto");
  if (kernel_kind == "linear") {
    sc.kernel = KernelSpec::linear();
  } else if (kernel_kind == "rbf") {
    if (gamma_str == "auto") {
      sc.kernel = KernelSpec::rbf_for_dim(sc.channel.feature_dim());
    } else {
      try {
        sc.kernel = KernelSpec::rbf(std::stod(gamma_str));
      } catch (const std::exception&) {
        throw ConfigError("svm.gamma", "expected 'auto' or a positive number",
                          cf.line_of("svm.gamma"));
      }
    }
  } else {
    throw ConfigError("svm.kernel", "expected 'linear' or 'rbf'",
                      cf.line_of("svm.kernel"));
  }
  sc.soft_margin_c = cf.get_double("svm.C", 10.0);
  sc.training_rounds = cf.get_uint("svm.training_rounds", 200);
  sc.train_options.tol = cf.get_double("svm.tol", 1e-3);
  sc.train_options.max_passes = cf.get_uint("svm.max_passes", 10000);

  sc.guard_epsilon = cf.get_double("quantizer.guard_epsilon", 0.5);
  sc.target_bits = cf.get_uint("quantizer.target_bits", 128);
  sc.probe_batch = cf.get_uint("quantizer.probe_batch", 512);
  sc.handshake_retry_cap = cf.get_uint("quantizer.retry_cap", 5);
  sc.hash_algorithm = cf.get_string("quantizer.hash", "sha-256");

  const unsigned degree = static_cast<unsigned>(cf.get_uint("lfsr.degree", 8));
  const std::string taps = cf.get_string("lfsr.taps", "auto");
  try {
    if (taps == "auto") {
      sc.lfsr = LfsrSpec::maximal(degree);
    } else {
      sc.lfsr.degree = degree;
      sc.lfsr.taps.clear();
      for (std::uint64_t t : cf.get_uint_list("lfsr.taps"))
        sc.lfsr.taps.push_back(static_cast<unsigned>(t));
      sc.lfsr.validate();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("lfsr.taps", e.what(), cf.line_of("lfsr.taps"));
  }

  const std::string mode = cf.get_string("access.mode", "time_slots");
  if (mode == "time_slots") sc.access_mode = AccessMode::time_slots;
  else if (mode == "frequencies") sc.access_mode = AccessMode::frequencies;
  else
    throw ConfigError("access.mode", "expected 'time_slots' or 'frequencies'",
                      cf.line_of("access.mode"));
  sc.bits_per_slot = static_cast<unsigned>(cf.get_uint("access.bits_per_slot", 2));
  sc.window = cf.get_uint("access.window", 4);
  sc.max_mismatches = cf.get_uint("access.max_mismatches", 0);
  sc.spoofers = cf.get_uint("access.spoofers", 1);

  sc.trust_rule.reward = cf.get_double("trust.reward", 0.01);
  sc.trust_rule.penalty_base = cf.get_double("trust.penalty_base", 0.05);
  sc.trust_rule.escalation = cf.get_double("trust.escalation", 1.0);
  sc.policy.thresholds = cf.get_double_list("trust.thresholds", {0.2, 0.5});

  sc.k_sigma = cf.get_double("detector.k_sigma", 3.0);
  sc.warmup_n = cf.get_uint("detector.warmup", 30);

  sc.evidence_source_counts.clear();
  for (std::uint64_t s : cf.get_uint_list("holistic.evidence_sources", {1, 2, 3}))
    sc.evidence_source_counts.push_back(s);
  sc.attack_duty_cycle = cf.get_double("holistic.attack_duty_cycle", 1.0);
  sc.attack_period = cf.get_uint("holistic.attack_period", 2);
  sc.feature_offset = cf.get_double("holistic.feature_offset", 8.0);
  sc.p_detect = cf.get_double("holistic.p_detect", 0.9);
  sc.p_false = cf.get_double("holistic.p_false", 0.0);

  sc.keygen.key_bits = cf.get_uint("compare.key_bits", 128);
  sc.keygen.block_bits = cf.get_uint("compare.block_bits", 8);
  sc.keygen.hash_algorithm = sc.hash_algorithm;

  sc.validate();
  return sc;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct TrajectoryPoint {
  std::size_t step;
  double trust;
  std::size_t level;
};

struct Trajectory {
  std::string device_id;
  std::size_t evidence_sources = 1;
  std::vector<TrajectoryPoint> points;
  std::optional<std::size_t> demotion_step;  // first step with trust < 0.5
};

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

struct MetricsReport {
  std::string scenario;
  std::uint64_t rng_seed = 0;

  std::size_t sensors_total = 0;
  std::size_t sensors_established = 0;
  std::size_t establishment_attempts = 0;
  double seed_establishment_success_rate = 0.0;

  std::size_t auth_windows = 0;
  std::size_t auth_rejects = 0;
  double false_reject_rate = 0.0;

  std::size_t spoof_attempts = 0;
  std::size_t spoof_accepts = 0;
  double spoof_detection_rate = 0.0;

  double eve_bit_agreement = 0.0;

  OpCounts costs;  // establishment messages; computations incl. schedule upkeep
  std::uint64_t incremental_auth_messages = 0;

  std::vector<Trajectory> trajectories;
  std::vector<Transcript> transcripts;

  // Canonical serialization: stable ordering, full-precision doubles, no
  // timestamps. Reruns with the same seed must produce identical bytes.
  std::string to_text() const {
    using detail::fmt_g17;
    std::ostringstream out;
    out << "metrics_format: 1\n";
    out << "scenario: " << scenario << "\n";
    out << "rng_seed: " << rng_seed << "\n";
    out << "sensors_total: " << sensors_total << "\n";
    out << "sensors_established: " << sensors_established << "\n";
    out << "establishment_attempts: " << establishment_attempts << "\n";
    out << "seed_establishment_success_rate: "
        << fmt_g17(seed_establishment_success_rate) << "\n";
    out << "auth_windows: " << auth_windows << "\n";
    out << "auth_rejects: " << auth_rejects << "\n";
    out << "false_reject_rate: " << fmt_g17(false_reject_rate) << "\n";
    out << "spoof_attempts: " << spoof_attempts << "\n";
    out << "spoof_accepts: " << spoof_accepts << "\n";
    out << "spoof_detection_rate: " << fmt_g17(spoof_detection_rate) << "\n";
    out << "eve_bit_agreement: " << fmt_g17(eve_bit_agreement) << "\n";
    out << "messages_establishment: " << costs.messages << "\n";
    out << "incremental_auth_messages: " << incremental_auth_messages << "\n";
    out << "gateway_computations: " << costs.gateway_computations << "\n";
    out << "sensor_computations: " << costs.sensor_computations << "\n";
    out << "transcript_count: " << transcripts.size() << "\n";
    std::uint64_t transcript_messages = 0;
    std::size_t leak_free = 0;
    for (const auto& t : transcripts) {
      transcript_messages += t.size();
      leak_free += assert_no_secret_leak(t) ? 1 : 0;
    }
    out << "transcript_messages: " << transcript_messages << "\n";
    out << "leak_free_transcripts: " << leak_free << "\n";
    out << "trajectory_count: " << trajectories.size() << "\n";
    for (const auto& tr : trajectories) {
      out << "trajectory: device=" << tr.device_id
          << " sources=" << tr.evidence_sources
          << " steps=" << tr.points.size() << " demotion_step=";
      if (tr.demotion_step) out << *tr.demotion_step;
      else out << "none";
      out << " final_trust=" << fmt_g17(tr.points.back().trust)
          << " final_level=" << tr.points.back().level << "\n";
    }
    return out.str();
  }
};

// ---------------------------------------------------------------------------
// Lightweight scheme scenario
// ---------------------------------------------------------------------------

namespace detail {

struct SensorRun {
  bool established = false;
  std::optional<Seed> seed;
  std::vector<Transcript> transcripts;
  std::size_t attempts = 0;
  OpCounts costs;
  std::size_t eve_matches = 0;
  std::size_t eve_bits = 0;
};

// One sensor's bootstrap: probe in batches, quantize behind the guard band,
// run the boundary+hash handshake; on a digest mismatch discard the batch and
// start over with fresh measurements.
inline SensorRun establish_sensor(const ScenarioConfig& cfg,
                                  const Boundary& boundary, Rng& rng) {
  SensorRun run;
  std::vector<FeatureVector> gw_obs, sn_obs, eve_obs;
  const QuantizerConfig qc = cfg.quantizer_config();
  while (run.attempts < cfg.handshake_retry_cap) {
    ++run.attempts;
    for (std::size_t i = 0; i < cfg.probe_batch; ++i) {
      const ProbeRound round = probe(cfg.channel, rng);
      gw_obs.push_back(round.gateway_obs);
      sn_obs.push_back(round.sensor_obs);
      eve_obs.push_back(round.eve_obs);
    }
    run.costs.gateway_computations += cfg.probe_batch;  // decision evaluations
    QuantizedBits gw_bits;
    try {
      gw_bits = quantize(gw_obs, boundary, qc);
    } catch (const InsufficientBits&) {
      continue;  // guard band ate too many rounds; probe more
    }

    HandshakeResult hr = establish_seed(
        gw_bits, [&](std::size_t idx) { return sn_obs[idx]; }, boundary,
        cfg.reconcile_config());
    run.costs.sensor_computations += cfg.target_bits;
    run.costs.gateway_computations += 1;  // digest
    run.costs.sensor_computations += 1;
    run.costs.messages += hr.transcript.size();
    run.transcripts.push_back(hr.transcript);

    if (hr.ok()) {
      run.established = true;
      run.seed = hr.seed;
      // Eavesdropper's view: same public boundary and kept indices, her own
      // decorrelated measurements.
      for (std::size_t i = 0; i < cfg.target_bits; ++i) {
        const std::size_t idx = gw_bits.kept_indices[i];
        const bool eve_bit = decision_value(boundary, eve_obs[idx]) > 0.0;
        run.eve_matches += eve_bit == (gw_bits.bits[i] != 0);
        ++run.eve_bits;
      }
      return run;
    }
    gw_obs.clear();
    sn_obs.clear();
    eve_obs.clear();
  }
  return run;
}

inline bool attack_active_at(std::size_t step, double duty_cycle,
                             std::size_t period) {
  const std::size_t pos = (step - 1) % period;
  return static_cast<double>(pos) < duty_cycle * static_cast<double>(period);
}

}  // namespace detail

inline MetricsReport run_lightweight_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  MetricsReport report;
  report.scenario = "lightweight";
  report.rng_seed = cfg.rng_seed;
  report.sensors_total = cfg.n_sensors;

  // Gateway-side training: partition its own measurements, fit the boundary.
  Rng train_rng = fork_rng(cfg.rng_seed, 0);
  std::vector<FeatureVector> train_pts;
  train_pts.reserve(cfg.training_rounds);
  for (std::size_t i = 0; i < cfg.training_rounds; ++i)
    train_pts.push_back(probe(cfg.channel, train_rng).gateway_obs);
  const std::vector<int> labels = label_two_partitions(train_pts);
  const TrainResult trained = train_svm(train_pts, labels, cfg.kernel,
                                        cfg.soft_margin_c, cfg.train_options);
  report.costs.gateway_computations += cfg.training_rounds + trained.passes;

  const std::size_t n_windows = cfg.n_steps / cfg.window;
  std::vector<AccessSchedule> schedules;

  for (std::size_t s = 0; s < cfg.n_sensors; ++s) {
    Rng rng = fork_rng(cfg.rng_seed, 1 + s);
    detail::SensorRun run = detail::establish_sensor(cfg, trained.boundary, rng);
    report.establishment_attempts += run.attempts;
    report.costs += run.costs;
    for (auto& t : run.transcripts) report.transcripts.push_back(std::move(t));
    report.eve_bit_agreement += static_cast<double>(run.eve_matches);
    if (!run.established) continue;
    ++report.sensors_established;

    // Both sides walk the same PRBS; the sensor just shows up in the right
    // slots, so authentication costs no messages at all.
    const BitString stream =
        prbs_generate(*run.seed, cfg.lfsr, cfg.n_steps * cfg.bits_per_slot);
    const AccessSchedule sched =
        schedule(stream, cfg.access_mode, cfg.bits_per_slot);
    report.costs.sensor_computations += cfg.n_steps * cfg.bits_per_slot;
    report.costs.gateway_computations += cfg.n_steps * cfg.bits_per_slot;

    for (std::size_t w = 0; w < n_windows; ++w) {
      AccessSchedule expected;
      expected.mode = sched.mode;
      expected.slots_per_frame = sched.slots_per_frame;
      expected.slot_indices.assign(
          sched.slot_indices.begin() + static_cast<std::ptrdiff_t>(w * cfg.window),
          sched.slot_indices.begin() + static_cast<std::ptrdiff_t>((w + 1) * cfg.window));
      const AuthDecision d = authenticate_access(
          expected, expected.slot_indices, cfg.window, cfg.max_mismatches);
      ++report.auth_windows;
      report.auth_rejects += d.accepted() ? 0 : 1;
      report.costs.gateway_computations += cfg.window;
    }
    schedules.push_back(sched);
  }

  const double eve_total =
      static_cast<double>(report.sensors_established) *
      static_cast<double>(cfg.target_bits);
  report.eve_bit_agreement =
      eve_total > 0 ? report.eve_bit_agreement / eve_total : 0.0;
  report.seed_establishment_success_rate =
      cfg.n_sensors > 0
          ? static_cast<double>(report.sensors_established) / cfg.n_sensors
          : 0.0;
  report.false_reject_rate =
      report.auth_windows > 0
          ? static_cast<double>(report.auth_rejects) / report.auth_windows
          : 0.0;

  // Spoofers guess slots uniformly; they never saw the seed.
  if (!schedules.empty()) {
    Rng spoof_rng = fork_rng(cfg.rng_seed, 0x5b00f);
    for (std::size_t a = 0; a < cfg.spoofers; ++a) {
      const AccessSchedule& target = schedules[a % schedules.size()];
      for (std::size_t w = 0; w < n_windows; ++w) {
        AccessSchedule expected;
        expected.mode = target.mode;
        expected.slots_per_frame = target.slots_per_frame;
        expected.slot_indices.assign(
            target.slot_indices.begin() + static_cast<std::ptrdiff_t>(w * cfg.window),
            target.slot_indices.begin() + static_cast<std::ptrdiff_t>((w + 1) * cfg.window));
        std::vector<std::uint32_t> observed(cfg.window);
        for (auto& slot : observed)
          slot = uniform_index(spoof_rng, expected.slots_per_frame);
        const AuthDecision d = authenticate_access(expected, observed, cfg.window,
                                                   cfg.max_mismatches);
        ++report.spoof_attempts;
        report.spoof_accepts += d.accepted() ? 1 : 0;
      }
    }
  }
  report.spoof_detection_rate =
      report.spoof_attempts > 0
          ? 1.0 - static_cast<double>(report.spoof_accepts) / report.spoof_attempts
          : 1.0;
  report.incremental_auth_messages = 0;  // schedule checks are passive
  return report;
}

// ---------------------------------------------------------------------------
// Holistic trust scenario
// ---------------------------------------------------------------------------

namespace detail {

inline Trajectory holistic_trajectory(const ScenarioConfig& cfg,
                                      std::size_t sources) {
  Rng rng = fork_rng(cfg.rng_seed, 0x401157 + sources);
  const std::size_t n_features = std::min<std::size_t>(sources, 2);
  std::vector<std::size_t> monitored;
  for (std::size_t i = 0; i < n_features; ++i) monitored.push_back(i);
  FeatureProfile profile(monitored, cfg.warmup_n);

  // The device passed initial authentication, so the gateway holds a profile
  // of the claimed identity's features before any trust step runs.
  for (std::size_t i = 0; i < cfg.warmup_n; ++i)
    profile.observe(probe(cfg.channel, rng).gateway_obs, cfg.k_sigma);

  TrustRecord record = make_trust_record("misdetected-adversary",
                                         "ip_address_check", cfg.policy);
  const bool use_attack_detector = sources >= 3;

  for (std::size_t step = 1; step < cfg.n_steps; ++step) {
    const bool active =
        attack_active_at(step, cfg.attack_duty_cycle, cfg.attack_period);
    FeatureVector obs = probe(cfg.channel, rng).gateway_obs;
    obs.rssi += cfg.feature_offset;  // impersonator's true hardware shows
    obs.cfo += cfg.feature_offset;
    const Verdict verdict = profile.observe(obs, cfg.k_sigma);

    EvidenceBundle evidence;
    evidence.feature_flags = verdict.flags;
    evidence.attack_detected =
        use_attack_detector &&
        detect_injection(active, cfg.p_detect, cfg.p_false, rng);
    evidence.source_count = sources;
    update_trust(record, evidence, cfg.trust_rule, cfg.policy);
  }

  Trajectory traj;
  traj.device_id = record.device_id;
  traj.evidence_sources = sources;
  traj.points.reserve(record.history.size());
  for (const auto& h : record.history)
    traj.points.push_back({h.step, h.trust, h.level});
  for (const auto& p : traj.points) {
    if (p.trust < 0.5) {
      traj.demotion_step = p.step;
      break;
    }
  }
  return traj;
}

}  // namespace detail

inline MetricsReport run_holistic_scenario(const ScenarioConfig& cfg,
                                           bool parallel = false) {
  cfg.validate();
  MetricsReport report;
  report.scenario = "holistic";
  report.rng_seed = cfg.rng_seed;

  if (parallel) {
    std::vector<std::future<Trajectory>> futures;
    futures.reserve(cfg.evidence_source_counts.size());
    for (std::size_t sources : cfg.evidence_source_counts)
      futures.push_back(std::async(std::launch::async, [&cfg, sources] {
        return detail::holistic_trajectory(cfg, sources);
      }));
    for (auto& f : futures) report.trajectories.push_back(f.get());
  } else {
    for (std::size_t sources : cfg.evidence_source_counts)
      report.trajectories.push_back(detail::holistic_trajectory(cfg, sources));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Cost comparison (lightweight scheme vs physical-layer key generation)
// ---------------------------------------------------------------------------

struct SchemeCosts {
  OpCounts establishment;
  OpCounts per_auth;
  bool privacy_leak_free = true;
  std::vector<Transcript> transcripts;
};

struct CostRow {
  std::size_t n_auth;
  std::string scheme;
  std::uint64_t messages;
  std::uint64_t sensor_ops;
  std::uint64_t gateway_ops;
  bool privacy_leak_free;
};

struct CostComparison {
  std::vector<CostRow> rows;
  std::size_t crossover_n0 = 0;  // smallest n with baseline messages strictly above
  SchemeCosts lightweight;
  SchemeCosts baseline;

  std::string to_text() const {
    std::ostringstream out;
    out << "comparison_format: 1\n";
    out << "lightweight_establishment_messages: " << lightweight.establishment.messages << "\n";
    out << "baseline_establishment_messages: " << baseline.establishment.messages << "\n";
    out << "lightweight_per_auth_messages: " << lightweight.per_auth.messages << "\n";
    out << "baseline_per_auth_messages: " << baseline.per_auth.messages << "\n";
    out << "lightweight_per_auth_sensor_ops: " << lightweight.per_auth.sensor_computations << "\n";
    out << "baseline_per_auth_sensor_ops: " << baseline.per_auth.sensor_computations << "\n";
    out << "lightweight_privacy_leak_free: "
        << (lightweight.privacy_leak_free ? "true" : "false") << "\n";
    out << "baseline_privacy_leak_free: "
        << (baseline.privacy_leak_free ? "true" : "false") << "\n";
    out << "crossover_n0: " << crossover_n0 << "\n";
    for (const auto& r : rows) {
      out << "row: n=" << r.n_auth << " scheme=" << r.scheme
          << " messages=" << r.messages << " sensor_ops=" << r.sensor_ops
          << " gateway_ops=" << r.gateway_ops << " privacy_leak_free="
          << (r.privacy_leak_free ? "true" : "false") << "\n";
    }
    return out.str();
  }
};

inline SchemeCosts measure_lightweight_costs(const ScenarioConfig& cfg) {
  SchemeCosts costs;
  Rng train_rng = fork_rng(cfg.rng_seed, 0);
  std::vector<FeatureVector> train_pts;
  for (std::size_t i = 0; i < cfg.training_rounds; ++i)
    train_pts.push_back(probe(cfg.channel, train_rng).gateway_obs);
  const std::vector<int> labels = label_two_partitions(train_pts);
  const TrainResult trained = train_svm(train_pts, labels, cfg.kernel,
                                        cfg.soft_margin_c, cfg.train_options);
  costs.establishment.gateway_computations += cfg.training_rounds + trained.passes;

  Rng rng = fork_rng(cfg.rng_seed, 1);
  detail::SensorRun run = detail::establish_sensor(cfg, trained.boundary, rng);
  if (!run.established)
    throw std::runtime_error(
        "measure_lightweight_costs: establishment failed under retry cap; "
        "raise channel.rho or quantizer.probe_batch");
  costs.establishment += run.costs;
  costs.transcripts = std::move(run.transcripts);
  for (const auto& t : costs.transcripts)
    costs.privacy_leak_free = costs.privacy_leak_free && assert_no_secret_leak(t);

  // Per authentication: both sides clock the LFSR for one window; the gateway
  // compares the observed slots. No traffic.
  costs.per_auth.messages = 0;
  costs.per_auth.sensor_computations = cfg.window * cfg.bits_per_slot;
  costs.per_auth.gateway_computations = cfg.window * cfg.bits_per_slot + cfg.window;
  return costs;
}

inline SchemeCosts measure_baseline_costs(const ScenarioConfig& cfg) {
  SchemeCosts costs;
  Rng rng = fork_rng(cfg.rng_seed, 2);
  KeygenSession session = run_keygen_session(cfg.channel, cfg.keygen, rng);
  costs.establishment = session.op_counts;

  // Measure one challenge-response to price an authentication.
  KeygenSession probe_session = session;
  const OpCounts before = probe_session.op_counts;
  authenticate_with_key(probe_session, 1);
  costs.per_auth.messages = probe_session.op_counts.messages - before.messages;
  costs.per_auth.sensor_computations =
      probe_session.op_counts.sensor_computations - before.sensor_computations;
  costs.per_auth.gateway_computations =
      probe_session.op_counts.gateway_computations - before.gateway_computations;

  costs.transcripts.push_back(session.transcript);
  costs.privacy_leak_free = assert_no_secret_leak(session.transcript);
  return costs;
}

inline CostComparison compare_costs(const ScenarioConfig& cfg,
                                    std::span<const std::size_t> n_grid) {
  cfg.validate();
  if (n_grid.empty())
    throw ConfigError("compare.n_grid", "must not be empty");

  CostComparison cmp;
  cmp.lightweight = measure_lightweight_costs(cfg);
  cmp.baseline = measure_baseline_costs(cfg);

  for (std::size_t n : n_grid) {
    const auto& lw = cmp.lightweight;
    cmp.rows.push_back({n, "lightweight",
                        lw.establishment.messages + n * lw.per_auth.messages,
                        lw.establishment.sensor_computations +
                            n * lw.per_auth.sensor_computations,
                        lw.establishment.gateway_computations +
                            n * lw.per_auth.gateway_computations,
                        lw.privacy_leak_free});
    const auto& bl = cmp.baseline;
    cmp.rows.push_back({n, "baseline",
                        bl.establishment.messages + n * bl.per_auth.messages,
                        bl.establishment.sensor_computations +
                            n * bl.per_auth.sensor_computations,
                        bl.establishment.gateway_computations +
                            n * bl.per_auth.gateway_computations,
                        bl.privacy_leak_free});
  }

  // Baseline gains 2 messages per authentication, the lightweight scheme 0,
  // so the cumulative counts cross exactly once.
  const std::uint64_t el = cmp.lightweight.establishment.messages;
  const std::uint64_t eb = cmp.baseline.establishment.messages;
  const std::uint64_t slope = cmp.baseline.per_auth.messages;
  if (eb > el) {
    cmp.crossover_n0 = 0;
  } else {
    cmp.crossover_n0 = static_cast<std::size_t>((el - eb) / slope + 1);
  }
  return cmp;
}

}  // namespace iotauth
