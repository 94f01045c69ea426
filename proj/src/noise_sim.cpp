#include "ksi/noise_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ksi {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kSlotMul = 0xBF58476D1CE4E5B9ull;

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) { return mix64(seed + kGolden * (trial + 1)); }

double key_uniform(std::uint64_t key, std::uint64_t slot) {
  const std::uint64_t x = mix64(key ^ (kSlotMul * (slot + 1)));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

void check_rate(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("flip rate must lie in [0, 1]");
}

}  // namespace

double stream_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot) {
  return key_uniform(trial_key(seed, trial), slot);
}

double Estimate::rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }

double Estimate::sigma() const {
  if (trials == 0) return 0.0;
  const double p = rate();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

Estimate simulate_pair(double r, std::uint64_t trials, std::uint64_t seed) {
  check_rate(r);
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  Estimate est{0, trials};
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t key = trial_key(seed, t);
    const bool a = key_uniform(key, 0) < r;
    const bool b = key_uniform(key, 1) < r;
    est.successes += a == b;
  }
  return est;
}

Estimate simulate_context(double r, int d, std::uint64_t trials, std::uint64_t seed) {
  check_rate(r);
  if (d < 3) throw std::invalid_argument("context simulation needs d >= 3");
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  Estimate est{0, trials};
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t key = trial_key(seed, t);
    int zeros = 0;
    for (int p = 0; p < d; ++p) {
      const int base = p == 0 ? 0 : 1;
      const int value = base ^ static_cast<int>(key_uniform(key, static_cast<std::uint64_t>(p)) < r);
      zeros += value == 0;
    }
    est.successes += zeros == 1;
  }
  return est;
}

TrialModel::TrialModel(KsSet set_in, VectorAssignment base_in, double flip_rate_in, std::uint64_t seed_in)
    : set(std::move(set_in)), base(std::move(base_in)), flip_rate(flip_rate_in), seed(seed_in) {
  check_rate(flip_rate);
  if (base.size() != set.vectors().size()) {
    throw std::invalid_argument("base assignment must give a value to every vector");
  }
  for (auto v : base) {
    if (v > 1) throw std::invalid_argument("base assignment values must be 0 or 1");
  }
}

namespace {

std::vector<double> rates(const std::vector<std::uint64_t>& counts, std::uint64_t trials) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (auto c : counts) out.push_back(static_cast<double>(c) / static_cast<double>(trials));
  return out;
}

std::vector<double> half_widths(const std::vector<std::uint64_t>& counts, std::uint64_t trials) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (auto c : counts) out.push_back(3.0 * Estimate{c, trials}.sigma());
  return out;
}

struct Tally {
  std::vector<std::uint64_t> mismatch;
  std::vector<std::uint64_t> sum_error;
  std::uint64_t total = 0;
  std::uint64_t min_defect = std::numeric_limits<std::uint64_t>::max();
};

}  // namespace

std::vector<double> SimSummary::delta_hat() const { return rates(mismatch_counts, trials); }
std::vector<double> SimSummary::epsilon_hat() const { return rates(sum_error_counts, trials); }
std::vector<double> SimSummary::delta_half_width() const { return half_widths(mismatch_counts, trials); }
std::vector<double> SimSummary::epsilon_half_width() const { return half_widths(sum_error_counts, trials); }

double SimSummary::mean_total_defect() const {
  return trials == 0 ? 0.0 : static_cast<double>(total_defects) / static_cast<double>(trials);
}

SimSummary simulate_model(const TrialModel& model, std::uint64_t trials, unsigned threads) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  const KsSet& set = model.set;
  const SetStats stats = build_stats(set);
  const auto d = static_cast<std::size_t>(set.dimension());
  const std::size_t N = set.contexts().size();

  // Slot s = c * d + p.
  std::vector<std::uint8_t> base_slots(N * d);
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t p = 0; p < d; ++p) base_slots[c * d + p] = model.base[set.context(c).members[p]];
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(stats.connections.size());
  for (const Connection& conn : stats.connections) {
    const auto& a = set.context(conn.context_a).members;
    const auto& b = set.context(conn.context_b).members;
    const auto pa = static_cast<std::size_t>(std::find(a.begin(), a.end(), conn.vector) - a.begin());
    const auto pb = static_cast<std::size_t>(std::find(b.begin(), b.end(), conn.vector) - b.begin());
    pairs.emplace_back(conn.context_a * d + pa, conn.context_b * d + pb);
  }

  auto run = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
    tally.mismatch.assign(pairs.size(), 0);
    tally.sum_error.assign(N, 0);
    std::vector<std::uint8_t> slots(base_slots.size());
    for (std::uint64_t t = begin; t < end; ++t) {
      const std::uint64_t key = trial_key(model.seed, t);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        slots[s] = base_slots[s] ^ static_cast<std::uint8_t>(key_uniform(key, s) < model.flip_rate);
      }
      std::uint64_t defect = 0;
      for (std::size_t c = 0; c < N; ++c) {
        std::size_t sum = 0;
        for (std::size_t p = 0; p < d; ++p) sum += slots[c * d + p];
        if (sum != d - 1) {
          ++tally.sum_error[c];
          ++defect;
        }
      }
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        if (slots[pairs[j].first] != slots[pairs[j].second]) {
          ++tally.mismatch[j];
          ++defect;
        }
      }
      tally.total += defect;
      tally.min_defect = std::min(tally.min_defect, defect);
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 256))));
  std::vector<Tally> tallies(threads);
  if (threads == 1) {
    run(0, trials, tallies[0]);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t begin = trials * w / threads;
      const std::uint64_t end = trials * (w + 1) / threads;
      workers.emplace_back([&, begin, end, w] { run(begin, end, tallies[w]); });
    }
  }

  SimSummary summary;
  summary.set_name = set.name();
  summary.seed = model.seed;
  summary.trials = trials;
  summary.r = model.flip_rate;
  summary.mismatch_counts.assign(pairs.size(), 0);
  summary.sum_error_counts.assign(N, 0);
  summary.min_trial_defect = std::numeric_limits<std::uint64_t>::max();
  for (const Tally& t : tallies) {
    for (std::size_t j = 0; j < pairs.size(); ++j) summary.mismatch_counts[j] += t.mismatch[j];
    for (std::size_t c = 0; c < N; ++c) summary.sum_error_counts[c] += t.sum_error[c];
    summary.total_defects += t.total;
    summary.min_trial_defect = std::min(summary.min_trial_defect, t.min_defect);
  }
  return summary;
}

InequalityVerdict empirical_inequality_check(const SimSummary& summary, const SetStats& stats,
                                             const KsCertificate& certificate) {
  if (certificate.set_name() != summary.set_name) {
    throw std::invalid_argument("certificate is for set '" + certificate.set_name() + "', summary is for '" +
                                summary.set_name + "'");
  }
  if (summary.mismatch_counts.size() != stats.connections.size() || summary.sum_error_counts.size() != stats.N) {
    throw std::invalid_argument("summary does not match the set statistics");
  }
  InequalityVerdict v;
  v.mean_total_defect = summary.mean_total_defect();
  v.min_trial_defect = summary.min_trial_defect;
  const auto dh = summary.delta_hat();
  const auto eh = summary.epsilon_hat();
  if (!dh.empty()) v.delta_hat_max = *std::max_element(dh.begin(), dh.end());
  if (!eh.empty()) v.epsilon_hat_max = *std::max_element(eh.begin(), eh.end());
  v.implied_bound = static_cast<double>(dh.size()) * v.delta_hat_max + static_cast<double>(eh.size()) * v.epsilon_hat_max;
  // Integer comparison: total_defects >= trials is exactly mean >= 1.
  v.holds = summary.total_defects >= summary.trials && summary.min_trial_defect >= 1;
  return v;
}

InequalityVerdict empirical_inequality_check(const SimSummary& summary, const SetStats& stats,
                                             const std::optional<KsCertificate>& certificate) {
  if (!certificate) throw std::invalid_argument("set is not certified KS-uncolorable; verdict undefined");
  return empirical_inequality_check(summary, stats, *certificate);
}

nlohmann::ordered_json summary_json(const SimSummary& summary) {
  nlohmann::ordered_json j;
  j["seed"] = summary.seed;
  j["trials"] = summary.trials;
  j["r"] = summary.r;
  j["delta_hat"] = summary.delta_hat();
  j["epsilon_hat"] = summary.epsilon_hat();
  j["mean_defect"] = summary.mean_total_defect();
  j["set"] = summary.set_name;
  j["min_trial_defect"] = summary.min_trial_defect;
  return j;
}

}  // namespace ksi
