#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "iotauth/feature.hpp"
#include "iotauth/rng.hpp"

namespace iotauth {

// Latent-plus-noise reciprocity model. Each feature component is
//   obs = mu_c + h + n
// with a unit-variance latent h shared by sensor and gateway and independent
// per-side noise n ~ N(0, sigma_n^2), which pins the sensor<->gateway Pearson
// correlation at rho = 1 / (1 + sigma_n^2). The eavesdropper observes a fully
// independent latent through the same noise level.
struct ReciprocityParams {
  double rho = 1.0;
  double sigma_n = 0.0;
  std::size_t dims = 1;      // number of channel-gain components
  double drift_rate = 0.0;   // per-round random-walk std of the latent

  static ReciprocityParams from_rho(double rho, std::size_t dims,
                                    double drift_rate = 0.0) {
    if (!(rho > 0.0) || rho > 1.0)
      throw std::invalid_argument("ReciprocityParams: rho must be in (0,1]");
    ReciprocityParams p;
    p.rho = rho;
    p.sigma_n = std::sqrt((1.0 - rho) / rho);
    p.dims = dims;
    p.drift_rate = drift_rate;
    p.validate();
    return p;
  }

  static ReciprocityParams from_noise(double sigma_n, std::size_t dims,
                                      double drift_rate = 0.0) {
    if (sigma_n < 0.0)
      throw std::invalid_argument("ReciprocityParams: sigma_n must be >= 0");
    ReciprocityParams p;
    p.sigma_n = sigma_n;
    p.rho = 1.0 / (1.0 + sigma_n * sigma_n);
    p.dims = dims;
    p.drift_rate = drift_rate;
    p.validate();
    return p;
  }

  void validate() const {
    if (rho < 0.0 || rho > 1.0)
      throw std::invalid_argument("ReciprocityParams: rho must be in [0,1]");
    if (sigma_n < 0.0)
      throw std::invalid_argument("ReciprocityParams: sigma_n must be >= 0");
    if (drift_rate < 0.0)
      throw std::invalid_argument("ReciprocityParams: drift_rate must be >= 0");
    if (dims < 1)
      throw std::invalid_argument("ReciprocityParams: dims must be >= 1");
    // rho and sigma_n are one knob, not two.
    if (std::abs(rho * (1.0 + sigma_n * sigma_n) - 1.0) > 1e-9)
      throw std::invalid_argument(
          "ReciprocityParams: rho and sigma_n inconsistent, use from_rho/from_noise");
  }

  std::size_t feature_dim() const { return dims + 2; }
};

struct ProbeRound {
  FeatureVector sensor_obs;
  FeatureVector gateway_obs;
  FeatureVector eve_obs;
  std::size_t round_index = 0;
};

namespace detail {

constexpr double kRssiMeanDbm = -60.0;

inline FeatureVector assemble(const std::vector<double>& latent,
                              double sigma_n, Rng& rng) {
  FeatureVector v;
  v.rssi = kRssiMeanDbm + latent[0] + sigma_n * gaussian(rng);
  v.cfo = latent[1] + sigma_n * gaussian(rng);
  v.gains.resize(latent.size() - 2);
  for (std::size_t i = 2; i < latent.size(); ++i)
    v.gains[i - 2] = latent[i] + sigma_n * gaussian(rng);
  return v;
}

inline std::vector<double> fresh_latent(std::size_t n, Rng& rng) {
  std::vector<double> h(n);
  for (auto& x : h) x = gaussian(rng);
  return h;
}

inline void drift(std::vector<double>& h, double rate, Rng& rng) {
  for (auto& x : h) x += rate * gaussian(rng);
}

}  // namespace detail

// One probing round in its own coherence block: fresh latent, so bits
// quantized from successive probe() calls are independent.
inline ProbeRound probe(const ReciprocityParams& params, Rng& rng) {
  params.validate();
  const std::size_t n = params.feature_dim();
  ProbeRound round;
  const auto h = detail::fresh_latent(n, rng);       // shared sensor/gateway
  const auto g = detail::fresh_latent(n, rng);       // eavesdropper's channel
  round.sensor_obs = detail::assemble(h, params.sigma_n, rng);
  round.gateway_obs = detail::assemble(h, params.sigma_n, rng);
  round.eve_obs = detail::assemble(g, params.sigma_n, rng);
  round.round_index = 0;
  return round;
}

// Rounds within one coherence window: the latent evolves as a random walk
// with step std drift_rate. Round 0 reproduces probe() for the same rng state.
inline std::vector<ProbeRound> probe_sequence(const ReciprocityParams& params,
                                              std::size_t n_rounds, Rng& rng) {
  params.validate();
  if (n_rounds < 1)
    throw std::invalid_argument("probe_sequence: n_rounds must be >= 1");
  const std::size_t n = params.feature_dim();
  std::vector<ProbeRound> rounds;
  rounds.reserve(n_rounds);
  auto h = detail::fresh_latent(n, rng);
  auto g = detail::fresh_latent(n, rng);
  for (std::size_t i = 0; i < n_rounds; ++i) {
    if (i > 0 && params.drift_rate > 0.0) {
      detail::drift(h, params.drift_rate, rng);
      detail::drift(g, params.drift_rate, rng);
    }
    ProbeRound round;
    round.sensor_obs = detail::assemble(h, params.sigma_n, rng);
    round.gateway_obs = detail::assemble(h, params.sigma_n, rng);
    round.eve_obs = detail::assemble(g, params.sigma_n, rng);
    round.round_index = i;
    rounds.push_back(std::move(round));
  }
  return rounds;
}

}  // namespace iotauth
