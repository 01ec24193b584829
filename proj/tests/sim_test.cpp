#include "iotauth/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace iotauth;

namespace {

ScenarioConfig noiseless_config() {
  ScenarioConfig cfg;
  cfg.channel = ReciprocityParams::from_noise(0.0, 3);
  cfg.rng_seed = 11;
  cfg.n_sensors = 2;
  cfg.n_steps = 32;
  return cfg;
}

ScenarioConfig demo_config() {
  ScenarioConfig cfg;
  cfg.channel = ReciprocityParams::from_rho(0.99, 3);
  cfg.guard_epsilon = 1.0;
  cfg.rng_seed = 42;
  cfg.n_sensors = 2;
  cfg.n_steps = 32;
  return cfg;
}

}  // namespace

TEST(LightweightScenarioTest, NoiselessNoAdversaryIsPerfect) {
  ScenarioConfig cfg = noiseless_config();
  cfg.spoofers = 0;
  const MetricsReport r = run_lightweight_scenario(cfg);
  EXPECT_DOUBLE_EQ(r.seed_establishment_success_rate, 1.0);
  EXPECT_DOUBLE_EQ(r.false_reject_rate, 0.0);
  EXPECT_EQ(r.auth_rejects, 0u);
  EXPECT_GT(r.auth_windows, 0u);
  EXPECT_EQ(r.establishment_attempts, cfg.n_sensors);  // one try each
}

TEST(LightweightScenarioTest, ReportIsByteIdenticalAcrossReruns) {
  const ScenarioConfig cfg = demo_config();
  const MetricsReport a = run_lightweight_scenario(cfg);
  const MetricsReport b = run_lightweight_scenario(cfg);
  EXPECT_EQ(a.to_text(), b.to_text());
}

TEST(LightweightScenarioTest, AllTranscriptsLeakFree) {
  const MetricsReport r = run_lightweight_scenario(demo_config());
  ASSERT_FALSE(r.transcripts.empty());
  for (const auto& t : r.transcripts) EXPECT_TRUE(assert_no_secret_leak(t));
}

TEST(LightweightScenarioTest, MessageConservation) {
  const MetricsReport r = run_lightweight_scenario(demo_config());
  std::uint64_t in_transcripts = 0;
  for (const auto& t : r.transcripts) in_transcripts += t.size();
  EXPECT_EQ(r.costs.messages + r.incremental_auth_messages, in_transcripts);
}

// Authentication is passive: growing the authenticated horizon must not grow
// the message count.
TEST(LightweightScenarioTest, ContinuityMessagesConstantInAuthCount) {
  ScenarioConfig short_run = demo_config();
  short_run.n_steps = 16;
  ScenarioConfig long_run = demo_config();
  long_run.n_steps = 128;
  const MetricsReport a = run_lightweight_scenario(short_run);
  const MetricsReport b = run_lightweight_scenario(long_run);
  ASSERT_EQ(a.sensors_established, b.sensors_established);
  EXPECT_EQ(a.costs.messages, b.costs.messages);
  EXPECT_GT(b.auth_windows, a.auth_windows);
}

TEST(LightweightScenarioTest, SpooferAcceptanceNearAnalytic) {
  // S = 4, L = 4 -> acceptance (1/4)^4. Use many windows for a usable sample.
  ScenarioConfig cfg = noiseless_config();
  cfg.n_sensors = 1;
  cfg.n_steps = 4000;
  cfg.spoofers = 25;
  const MetricsReport r = run_lightweight_scenario(cfg);
  ASSERT_GT(r.spoof_attempts, 20000u);
  const double p = std::pow(0.25, 4);
  const double accept_rate =
      static_cast<double>(r.spoof_accepts) / r.spoof_attempts;
  const double sigma = std::sqrt(p * (1 - p) / r.spoof_attempts);
  EXPECT_NEAR(accept_rate, p, 4 * sigma);
  EXPECT_NEAR(r.spoof_detection_rate, 1.0 - p, 4 * sigma);
}

TEST(LightweightScenarioTest, EveAgreementNearHalf) {
  ScenarioConfig cfg = demo_config();
  cfg.n_sensors = 4;
  const MetricsReport r = run_lightweight_scenario(cfg);
  ASSERT_EQ(r.sensors_established, 4u);
  EXPECT_GT(r.eve_bit_agreement, 0.35);
  EXPECT_LT(r.eve_bit_agreement, 0.65);
}

TEST(HolisticScenarioTest, DemotionStepMonotoneInEvidenceSources) {
  ScenarioConfig cfg;
  cfg.rng_seed = 5;
  cfg.n_steps = 50;
  cfg.attack_duty_cycle = 0.5;
  const MetricsReport r = run_holistic_scenario(cfg);
  ASSERT_EQ(r.trajectories.size(), 3u);
  std::size_t prev = SIZE_MAX;
  for (const auto& tr : r.trajectories) {
    ASSERT_EQ(tr.points.size(), cfg.n_steps);
    EXPECT_DOUBLE_EQ(tr.points.front().trust, 0.9);
    ASSERT_TRUE(tr.demotion_step.has_value());
    EXPECT_LE(*tr.demotion_step, prev);
    prev = *tr.demotion_step;
  }
}

TEST(HolisticScenarioTest, ClosedFormAlwaysOnAttack) {
  ScenarioConfig cfg;
  cfg.rng_seed = 9;
  cfg.n_steps = 8;
  cfg.evidence_source_counts = {3};
  cfg.attack_duty_cycle = 1.0;
  cfg.p_detect = 1.0;
  cfg.feature_offset = 10.0;
  const MetricsReport r = run_holistic_scenario(cfg);
  ASSERT_EQ(r.trajectories.size(), 1u);
  const auto& pts = r.trajectories[0].points;
  EXPECT_NEAR(pts[0].trust, 0.90, 1e-12);
  EXPECT_NEAR(pts[1].trust, 0.75, 1e-12);
  EXPECT_NEAR(pts[2].trust, 0.60, 1e-12);
  EXPECT_NEAR(pts[3].trust, 0.45, 1e-12);
  ASSERT_TRUE(r.trajectories[0].demotion_step.has_value());
  EXPECT_EQ(*r.trajectories[0].demotion_step, 3u);
}

TEST(HolisticScenarioTest, BenignDeviceNeverDemoted) {
  ScenarioConfig cfg;
  cfg.rng_seed = 3;
  cfg.n_steps = 60;
  cfg.attack_duty_cycle = 0.0;  // never attacks
  cfg.feature_offset = 0.0;     // features match the claimed profile
  cfg.k_sigma = 8.0;            // no false flags
  const MetricsReport r = run_holistic_scenario(cfg);
  for (const auto& tr : r.trajectories) {
    EXPECT_FALSE(tr.demotion_step.has_value());
    double prev = 0.0;
    for (const auto& p : tr.points) {
      EXPECT_GE(p.trust, prev - 1e-12);  // non-decreasing
      prev = p.trust;
    }
    EXPECT_EQ(tr.points.back().level, 2u);
  }
}

TEST(HolisticScenarioTest, ParallelSweepMatchesSequential) {
  ScenarioConfig cfg;
  cfg.rng_seed = 21;
  cfg.n_steps = 40;
  const MetricsReport seq = run_holistic_scenario(cfg, false);
  const MetricsReport par = run_holistic_scenario(cfg, true);
  EXPECT_EQ(seq.to_text(), par.to_text());
}

TEST(CompareCostsTest, RowArithmeticAndCrossover) {
  ScenarioConfig cfg = demo_config();
  const std::vector<std::size_t> grid = {1, 10, 100};
  const CostComparison cmp = compare_costs(cfg, grid);
  EXPECT_EQ(cmp.rows.size(), 6u);  // 2 schemes x 3 grid points

  EXPECT_EQ(cmp.lightweight.per_auth.messages, 0u);
  EXPECT_EQ(cmp.baseline.per_auth.messages, 2u);
  EXPECT_TRUE(cmp.lightweight.privacy_leak_free);
  EXPECT_FALSE(cmp.baseline.privacy_leak_free);

  // Beyond the crossover the cumulative gap grows strictly.
  std::int64_t prev_gap = INT64_MIN;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& light = cmp.rows[2 * i];
    const auto& base = cmp.rows[2 * i + 1];
    ASSERT_EQ(light.scheme, "lightweight");
    ASSERT_EQ(base.scheme, "baseline");
    const std::int64_t gap =
        static_cast<std::int64_t>(base.messages) - static_cast<std::int64_t>(light.messages);
    if (grid[i] > cmp.crossover_n0) {
      EXPECT_GT(gap, 0);
      EXPECT_GT(gap, prev_gap);
    }
    prev_gap = gap;
  }

  // The crossover is exact: baseline exceeds lightweight at n0, not before.
  const auto msgs_at = [&](std::size_t n, const SchemeCosts& s) {
    return s.establishment.messages + n * s.per_auth.messages;
  };
  EXPECT_GT(msgs_at(cmp.crossover_n0, cmp.baseline),
            msgs_at(cmp.crossover_n0, cmp.lightweight));
  if (cmp.crossover_n0 > 0) {
    EXPECT_LE(msgs_at(cmp.crossover_n0 - 1, cmp.baseline),
              msgs_at(cmp.crossover_n0 - 1, cmp.lightweight));
  }
}

TEST(CompareCostsTest, SensorComputationCellGoesToPrbs) {
  // The lightweight scheme pays LFSR stepping at the sensor per
  // authentication; the baseline pays one hash.
  const CostComparison cmp = compare_costs(demo_config(), std::vector<std::size_t>{1});
  EXPECT_GT(cmp.lightweight.per_auth.sensor_computations,
            cmp.baseline.per_auth.sensor_computations);
}

TEST(CompareCostsTest, EmptyGridRejected) {
  EXPECT_THROW(compare_costs(demo_config(), std::vector<std::size_t>{}),
               ConfigError);
}

TEST(CompareCostsTest, BaselineAuthCountConservedInTranscript) {
  ScenarioConfig cfg = demo_config();
  Rng rng = fork_rng(cfg.rng_seed, 2);
  KeygenSession session = run_keygen_session(cfg.channel, cfg.keygen, rng);
  const std::uint64_t establishment = session.transcript.size();
  authenticate_with_key(session, 25);
  EXPECT_EQ(session.transcript.size(), establishment + 50);
  EXPECT_EQ(session.op_counts.messages, session.transcript.size());
}

TEST(ScenarioConfigTest, ValidationNamesTheField) {
  ScenarioConfig cfg = demo_config();
  cfg.window = 0;
  try {
    cfg.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field, "access.window");
  }
  cfg = demo_config();
  cfg.evidence_source_counts = {4};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = demo_config();
  cfg.probe_batch = 16;  // below target_bits
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(MetricsReportTest, RatesWithinBounds) {
  const MetricsReport r = run_lightweight_scenario(demo_config());
  EXPECT_GE(r.seed_establishment_success_rate, 0.0);
  EXPECT_LE(r.seed_establishment_success_rate, 1.0);
  EXPECT_GE(r.false_reject_rate, 0.0);
  EXPECT_LE(r.false_reject_rate, 1.0);
  EXPECT_GE(r.spoof_detection_rate, 0.0);
  EXPECT_LE(r.spoof_detection_rate, 1.0);
}
