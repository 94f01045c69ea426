// Seeded Monte Carlo for the independent-flip error model.
//
// Every (context, position) slot flips independently with probability r.
// Random numbers come from a counter-based SplitMix64 stream keyed by
// (seed, trial, slot), so results do not depend on thread count or order.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksi/engine.hpp"
#include "ksi/model.hpp"

namespace ksi {

/// Uniform double in [0, 1) for the given stream coordinates.
double stream_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot);

struct Estimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  double rate() const;
  /// Binomial standard error at the estimated rate.
  double sigma() const;
};

/// Two slots of one shared ray, both starting from the same value; success
/// when they still agree after flipping.
Estimate simulate_pair(double r, std::uint64_t trials, std::uint64_t seed);

/// One context with a valid base pattern (a single zero); success when the
/// flipped pattern still has exactly one zero.
Estimate simulate_context(double r, int d, std::uint64_t trials, std::uint64_t seed);

struct TrialModel {
  TrialModel(KsSet set, VectorAssignment base, double flip_rate, std::uint64_t seed);

  KsSet set;
  VectorAssignment base;
  double flip_rate;
  std::uint64_t seed;
};

struct SimSummary {
  std::string set_name;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  double r = 0.0;
  std::vector<std::uint64_t> mismatch_counts;   // per all-pairs connection
  std::vector<std::uint64_t> sum_error_counts;  // per context
  std::uint64_t total_defects = 0;              // sum over trials of per-trial defect
  std::uint64_t min_trial_defect = 0;

  std::vector<double> delta_hat() const;
  std::vector<double> epsilon_hat() const;
  std::vector<double> delta_half_width() const;    // 3 sigma
  std::vector<double> epsilon_half_width() const;  // 3 sigma
  double mean_total_defect() const;

  friend bool operator==(const SimSummary&, const SimSummary&) = default;
};

/// Runs `trials` trials. `threads` only changes wall time, never the result.
SimSummary simulate_model(const TrialModel& model, std::uint64_t trials, unsigned threads = 1);

struct InequalityVerdict {
  bool holds = false;  // mean >= 1 and every trial had defect >= 1
  double mean_total_defect = 0.0;
  std::uint64_t min_trial_defect = 0;
  double delta_hat_max = 0.0;
  double epsilon_hat_max = 0.0;
  /// connections * delta_hat_max + N * epsilon_hat_max
  double implied_bound = 0.0;
};

InequalityVerdict empirical_inequality_check(const SimSummary& summary, const SetStats& stats,
                                             const KsCertificate& certificate);

/// Same, but refuses (std::invalid_argument) when the set was not certified.
InequalityVerdict empirical_inequality_check(const SimSummary& summary, const SetStats& stats,
                                             const std::optional<KsCertificate>& certificate);

nlohmann::ordered_json summary_json(const SimSummary& summary);

}  // namespace ksi
