// iotauthsim: scenario runner for the PRBS-gated lightweight authentication
// scheme, the trust-managed holistic scheme, and the key-generation cost
// comparison. Exit codes: 0 success, 1 runtime failure, 2 config error.

#include <CLI11.hpp>

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "iotauth/iotauth.hpp"

namespace fs = std::filesystem;
using namespace iotauth;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t seed_override = -1;
  bool parallel = false;
};

ScenarioConfig load_config(const CommonArgs& args, ConfigFile& cf) {
  cf = ConfigFile::parse_file(args.config_path);
  ScenarioConfig sc = load_scenario_config(cf);
  if (args.seed_override >= 0)
    sc.rng_seed = static_cast<std::uint64_t>(args.seed_override);
  return sc;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory: " + dir);
}

int run_simulate(const std::string& kind, const CommonArgs& args) {
  ConfigFile cf;
  ScenarioConfig sc = load_config(args, cf);
  ensure_out_dir(args.out_dir);
  const RunStamp stamp = RunStamp::make(cf.raw_text(), sc.rng_seed);

  MetricsReport report;
  if (kind == "lightweight") {
    report = run_lightweight_scenario(sc);
  } else {
    report = run_holistic_scenario(sc, args.parallel);
  }

  const fs::path out(args.out_dir);
  write_report((out / "report.txt").string(), stamp, report.to_text());
  write_trajectories_csv((out / "trajectories.csv").string(), stamp, report);
  write_transcripts_csv((out / "transcripts.csv").string(), stamp,
                        report.transcripts);

  std::cout << "wrote " << (out / "report.txt").string() << "\n";
  if (kind == "lightweight") {
    std::cout << "seed_establishment_success_rate="
              << report.seed_establishment_success_rate
              << " false_reject_rate=" << report.false_reject_rate
              << " spoof_detection_rate=" << report.spoof_detection_rate << "\n";
  } else {
    for (const auto& tr : report.trajectories) {
      std::cout << "sources=" << tr.evidence_sources << " demotion_step=";
      if (tr.demotion_step) std::cout << *tr.demotion_step;
      else std::cout << "none";
      std::cout << "\n";
    }
  }
  return 0;
}

int run_compare(const CommonArgs& args, std::vector<std::size_t> n_grid) {
  ConfigFile cf;
  ScenarioConfig sc = load_config(args, cf);
  if (n_grid.empty() && cf.has("compare.n_grid")) {
    for (std::uint64_t n : cf.get_uint_list("compare.n_grid"))
      n_grid.push_back(n);
  }
  if (n_grid.empty())
    throw ConfigError("compare.n_grid", "must not be empty");
  ensure_out_dir(args.out_dir);
  const RunStamp stamp = RunStamp::make(cf.raw_text(), sc.rng_seed);

  const CostComparison cmp = compare_costs(sc, n_grid);
  const fs::path out(args.out_dir);
  write_comparison_csv((out / "comparison.csv").string(), stamp, cmp);
  write_report((out / "comparison_summary.txt").string(), stamp, cmp.to_text());

  std::cout << "wrote " << (out / "comparison.csv").string() << "\n"
            << "crossover_n0=" << cmp.crossover_n0 << "\n"
            << "lightweight privacy_leak_free="
            << (cmp.lightweight.privacy_leak_free ? "true" : "false") << "\n"
            << "baseline privacy_leak_free="
            << (cmp.baseline.privacy_leak_free ? "true" : "false") << "\n";
  return 0;
}

// Walks the full pipeline on one batch of probes and prints every stage, so a
// config can be sanity-checked before longer runs.
int run_quantize_demo(const CommonArgs& args) {
  ConfigFile cf;
  ScenarioConfig sc = load_config(args, cf);

  Rng train_rng = fork_rng(sc.rng_seed, 0);
  std::vector<FeatureVector> train_pts;
  for (std::size_t i = 0; i < sc.training_rounds; ++i)
    train_pts.push_back(probe(sc.channel, train_rng).gateway_obs);
  const std::vector<int> labels = label_two_partitions(train_pts);
  const TrainResult trained = train_svm(train_pts, labels, sc.kernel,
                                        sc.soft_margin_c, sc.train_options);
  std::cout << "boundary: " << boundary_summary(trained.boundary) << "\n";

  Rng rng = fork_rng(sc.rng_seed, 1);
  std::vector<FeatureVector> gw, sn, ev;
  for (std::size_t i = 0; i < sc.probe_batch; ++i) {
    const ProbeRound r = probe(sc.channel, rng);
    gw.push_back(r.gateway_obs);
    sn.push_back(r.sensor_obs);
    ev.push_back(r.eve_obs);
  }

  const QuantizedBits gq = quantize(gw, trained.boundary, sc.quantizer_config());
  std::cout << "rounds=" << sc.probe_batch << " kept=" << gq.kept_indices.size()
            << " dropped=" << sc.probe_batch - gq.kept_indices.size() << "\n";

  std::size_t svm_dis = 0, eve_agree = 0;
  for (std::size_t i = 0; i < gq.kept_indices.size(); ++i) {
    const std::size_t idx = gq.kept_indices[i];
    svm_dis += (decision_value(trained.boundary, sn[idx]) > 0.0) !=
               (gq.bits[i] != 0);
    eve_agree += (decision_value(trained.boundary, ev[idx]) > 0.0) ==
                 (gq.bits[i] != 0);
  }
  const double kept_n = static_cast<double>(gq.kept_indices.size());

  // RSS baseline on the same probes, gateway-median threshold on both sides.
  std::vector<double> rssi;
  for (const auto& g : gw) rssi.push_back(g.rssi);
  std::sort(rssi.begin(), rssi.end());
  const double threshold = rssi.size() % 2 == 1
                               ? rssi[rssi.size() / 2]
                               : 0.5 * (rssi[rssi.size() / 2 - 1] + rssi[rssi.size() / 2]);
  const QuantizedBits gb = rss_baseline_quantize(gw, threshold);
  const QuantizedBits sb = rss_baseline_quantize(sn, threshold);
  const double rss_dis = disagreement_rate(gb.bits, sb.bits);

  std::cout << "svm_guard_disagreement=" << svm_dis / kept_n << "\n";
  std::cout << "rss_baseline_disagreement=" << rss_dis << "\n";
  std::cout << "eve_bit_agreement=" << eve_agree / kept_n << "\n";

  try {
    const HandshakeResult hr = establish_seed(
        gq, [&](std::size_t idx) { return sn[idx]; }, trained.boundary,
        sc.reconcile_config());
    std::cout << "seed_establishment=" << (hr.ok() ? "ack" : "nack")
              << " messages=" << hr.transcript.size() << " leak_free="
              << (assert_no_secret_leak(hr.transcript) ? "true" : "false")
              << "\n";
  } catch (const InsufficientBits& e) {
    std::cout << "seed_establishment=insufficient_bits kept=" << e.kept
              << " target=" << e.target << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AI-assisted IoT authentication simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string sim_kind;
  std::vector<std::size_t> n_grid;

  auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--config", args.config_path, "scenario config file")
        ->required();
    cmd->add_option("--seed", args.seed_override, "override scenario.rng_seed");
    if (needs_out)
      cmd->add_option("--out", args.out_dir, "output directory (default .)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run a scenario");
  simulate->add_option("kind", sim_kind, "lightweight | holistic")
      ->required()
      ->check(CLI::IsMember({"lightweight", "holistic"}));
  add_common(simulate, true);
  simulate->add_flag("--parallel", args.parallel,
                     "fan out independent sweep points across threads");

  CLI::App* compare = app.add_subcommand(
      "compare", "cost comparison against physical-layer key generation");
  add_common(compare, true);
  compare->add_option("--n-grid", n_grid,
                      "authentication counts, comma separated")
      ->delimiter(',');

  CLI::App* demo =
      app.add_subcommand("quantize-demo", "print per-stage pipeline artifacts");
  add_common(demo, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(sim_kind, args);
    if (compare->parsed()) return run_compare(args, n_grid);
    if (demo->parsed()) return run_quantize_demo(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what();
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
