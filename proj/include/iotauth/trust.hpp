#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iotauth/errors.hpp"

namespace iotauth {

// Evidence-escalated update rule: clean step rewards +r, adverse step costs
// penalty_base * c^escalation where c counts adverse indicators.
struct UpdateRule {
  double reward = 0.01;
  double penalty_base = 0.05;
  double escalation = 1.0;

  void validate() const {
    if (!(reward > 0.0)) throw std::invalid_argument("UpdateRule: reward must be > 0");
    if (!(penalty_base > 0.0))
      throw std::invalid_argument("UpdateRule: penalty_base must be > 0");
    if (escalation < 1.0)
      throw std::invalid_argument("UpdateRule: escalation must be >= 1");
  }
};

// M nested service levels. Level m is granted when trust clears m thresholds;
// equality grants the higher level.
struct AuthorizationPolicy {
  std::vector<double> thresholds;                   // ascending, in (0,1)
  std::vector<std::vector<std::string>> service_sets;  // nested, size M

  std::size_t levels() const { return thresholds.size() + 1; }

  void validate() const {
    if (thresholds.empty())
      throw std::invalid_argument("AuthorizationPolicy: need M >= 2 levels");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (!(thresholds[i] > 0.0) || !(thresholds[i] < 1.0))
        throw std::invalid_argument("AuthorizationPolicy: thresholds must be in (0,1)");
      if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
        throw std::invalid_argument("AuthorizationPolicy: thresholds must ascend");
    }
    if (!service_sets.empty()) {
      if (service_sets.size() != levels())
        throw std::invalid_argument("AuthorizationPolicy: need one service set per level");
      if (!service_sets.front().empty())
        throw std::invalid_argument("AuthorizationPolicy: lowest level must be empty");
      for (std::size_t i = 1; i < service_sets.size(); ++i) {
        std::set<std::string> prev(service_sets[i - 1].begin(), service_sets[i - 1].end());
        std::set<std::string> cur(service_sets[i].begin(), service_sets[i].end());
        if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
          throw std::invalid_argument("AuthorizationPolicy: service sets must be nested");
      }
    }
  }

  static AuthorizationPolicy default_policy() {
    AuthorizationPolicy p;
    p.thresholds = {0.2, 0.5};
    p.service_sets = {
        {},
        {"status_report", "telemetry_read"},
        {"status_report", "telemetry_read", "actuator_control", "firmware_update"},
    };
    return p;
  }
};

struct EvidenceBundle {
  std::vector<bool> feature_flags;  // one per monitored feature
  bool attack_detected = false;
  std::size_t source_count = 1;  // evidence sources consulted, 1..F+1

  std::size_t adverse_count() const {
    std::size_t c = attack_detected ? 1 : 0;
    for (bool f : feature_flags) c += f;
    return c;
  }
};

inline std::size_t authorize(double trust, const AuthorizationPolicy& policy) {
  if (trust < 0.0 || trust > 1.0)
    throw std::invalid_argument("authorize: trust must be in [0,1]");
  policy.validate();
  std::size_t level = 0;
  for (double t : policy.thresholds) level += t <= trust;
  return level;
}

struct TrustSample {
  std::size_t step;
  double trust;
  std::size_t level;
};

struct TrustRecord {
  std::string device_id;
  double trust = 0.0;
  std::vector<TrustSample> history;
};

// Initial trust from the identity evidence available at first contact. An IP
// address can be faked, so it earns 0.9, not 1.
inline double init_trust(std::string_view evidence_kind) {
  if (evidence_kind == "ip_address_check") return 0.9;
  throw UnknownEvidenceKind("init_trust: unknown evidence kind: " +
                            std::string(evidence_kind));
}

inline TrustRecord make_trust_record(std::string device_id,
                                     std::string_view evidence_kind,
                                     const AuthorizationPolicy& policy) {
  TrustRecord r;
  r.device_id = std::move(device_id);
  r.trust = init_trust(evidence_kind);
  r.history.push_back({0, r.trust, authorize(r.trust, policy)});
  return r;
}

// One trust step. Clean evidence nudges trust up by `reward`; adverse evidence
// drops it by penalty_base * c^escalation, so the punishment grows with the
// number of independent indicators agreeing.
inline void update_trust(TrustRecord& record, const EvidenceBundle& evidence,
                         const UpdateRule& rule,
                         const AuthorizationPolicy& policy) {
  rule.validate();
  const std::size_t c = evidence.adverse_count();
  double next;
  if (c == 0) {
    next = std::min(1.0, record.trust + rule.reward);
  } else {
    const double penalty =
        rule.penalty_base * std::pow(static_cast<double>(c), rule.escalation);
    next = std::max(0.0, record.trust - penalty);
  }
  record.trust = next;
  const std::size_t step = record.history.empty() ? 0 : record.history.back().step + 1;
  record.history.push_back({step, next, authorize(next, policy)});
}

struct Recommendation {
  std::string recommender_id;
  double value = 0.0;        // recommended trust, in [0,1]
  double credibility = 0.0;  // weight, in [0,1]
};

// Credibility-weighted mean of own opinion and peer recommendations.
inline double aggregate_recommendations(double own,
                                        std::span<const Recommendation> recs,
                                        double own_weight = 1.0) {
  if (own < 0.0 || own > 1.0)
    throw std::invalid_argument("aggregate_recommendations: own must be in [0,1]");
  if (own_weight < 0.0)
    throw std::invalid_argument("aggregate_recommendations: own_weight must be >= 0");
  double num = own_weight * own;
  double den = own_weight;
  for (const auto& r : recs) {
    if (r.value < 0.0 || r.value > 1.0 || r.credibility < 0.0 || r.credibility > 1.0)
      throw std::invalid_argument("aggregate_recommendations: values must be in [0,1]");
    num += r.credibility * r.value;
    den += r.credibility;
  }
  if (den == 0.0) return own;
  return num / den;
}

// Recommender punishment: credibility moves down with the recommendation
// error |recommendation - outcome| and recovers by a small fraction of the
// rate when the recommendation was accurate.
inline double penalize_recommender(double credibility, double recommendation,
                                   double outcome, double rate,
                                   double reward_fraction = 0.1) {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(credibility) || !in01(recommendation) || !in01(outcome))
    throw std::invalid_argument("penalize_recommender: inputs must be in [0,1]");
  if (!(rate > 0.0))
    throw std::invalid_argument("penalize_recommender: rate must be > 0");
  if (reward_fraction < 0.0 || reward_fraction > 1.0)
    throw std::invalid_argument("penalize_recommender: reward_fraction must be in [0,1]");
  const double err = std::abs(recommendation - outcome);
  const double next = credibility - rate * err + rate * (1.0 - err) * reward_fraction;
  return std::clamp(next, 0.0, 1.0);
}

}  // namespace iotauth
