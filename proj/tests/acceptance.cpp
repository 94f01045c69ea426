// Acceptance suite. Prints one PASS/FAIL line per criterion; detail lines
// are indented. Usage: acceptance [--criterion N]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "ksi/bounds.hpp"
#include "ksi/engine.hpp"
#include "ksi/noise_sim.hpp"
#include "ksi/set_format.hpp"
#include "mutations.hpp"
#include "test_support.hpp"

using namespace ksi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Report {
 public:
  void detail(bool ok, const std::string& text) {
    std::cout << "    " << (ok ? "ok   " : "FAIL ") << text << "\n";
    ok_ = ok_ && ok;
  }
  bool ok() const { return ok_; }

 private:
  bool ok_ = true;
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Tokens of every non-comment line, for comparison up to whitespace.
std::vector<std::string> significant_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string word;
    while (words >> word) out.push_back(word);
  }
  return out;
}

VectorAssignment random_base(const KsSet& set, std::mt19937_64& rng) {
  VectorAssignment base(set.vectors().size());
  for (auto& v : base) v = rng() & 1;
  return base;
}

// Defect recount straight from the context lists.
std::size_t recount_defect(const KsSet& set, const SlotAssignment& slots) {
  const std::size_t d = static_cast<std::size_t>(set.dimension());
  std::size_t defect = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> seen(set.vectors().size());
  for (std::size_t c = 0; c < set.contexts().size(); ++c) {
    std::size_t sum = 0;
    for (std::size_t p = 0; p < d; ++p) {
      sum += slots[c][p];
      const std::size_t v = set.context(c).members[p];
      for (const auto& [c2, p2] : seen[v]) defect += slots[c2][p2] != slots[c][p];
      seen[v].emplace_back(c, p);
    }
    defect += sum != d - 1;
  }
  return defect;
}

// ------------------------------------------------------------------ criteria

bool criterion_1(Report& report) {
  const double published[] = {0.0032, 0.0034, 0.0035, 0.0043, 0.0097, 0.0142};
  const auto start = Clock::now();
  const auto entries = compute_table(published_table_rows());
  const std::string text = format_table(entries);
  const double elapsed = seconds_since(start);
  report.detail(entries.size() == 6, "six rows computed");
  for (std::size_t i = 0; i < entries.size() && i < 6; ++i) {
    const auto& e = entries[i];
    const double gap = std::abs(e.rate.r - published[i]);
    std::ostringstream line;
    line << e.row.name << ": r* = " << fmt("%.7f", e.rate.r) << ", floor " << fmt("%.4f", e.rate.r_floor4)
         << " vs " << fmt("%.4f", published[i]);
    report.detail(std::abs(e.rate.r_floor4 - published[i]) < 1e-12, line.str() + " (4-decimal floor)");
    report.detail(gap <= 5e-5, e.row.name + ": |r* - r_table| = " + fmt("%.2e", gap) + " <= 5e-5");
  }
  report.detail(elapsed < 1.0, "runtime " + fmt("%.4f", elapsed) + " s < 1 s");
  return report.ok();
}

bool criterion_2(Report& report) {
  struct Expected {
    const char* name;
    int d;
    std::size_t n, N;
    std::uint64_t M;
  };
  const auto start = Clock::now();
  std::ostringstream sink;
  for (const Expected& x : {Expected{"cabello18", 4, 18, 9, 18}, Expected{"kernaghan20", 4, 20, 11, 30},
                            Expected{"kernaghan-peres36", 8, 36, 11, 72}}) {
    const KsSet set = load_catalog(x.name);
    const SetStats stats = build_stats(set);
    std::ostringstream shape;
    shape << x.name << ": d=" << set.dimension() << " n=" << stats.n << " N=" << stats.N << " M=" << stats.M;
    report.detail(set.dimension() == x.d && stats.n == x.n && stats.N == x.N && stats.M == x.M, shape.str());
    const int validate = cli::run({"validate", std::string("catalog:") + x.name}, sink, sink);
    report.detail(validate == cli::kExitOk && validate_orthogonality(set).valid(),
                  std::string(x.name) + ": validate passes");
    const int color = cli::run({"color", std::string("catalog:") + x.name}, sink, sink);
    const ColoringResult search = find_coloring(set);
    report.detail(color == cli::kExitContradiction && !search.colorable(),
                  std::string(x.name) + ": color reports KS-uncolorable (" + std::to_string(search.nodes) +
                      " nodes)");
    if (stats.n <= 20) {
      const BruteForceResult brute = brute_force_coloring(set);
      report.detail(!brute.colorable() && brute.enumerated == (std::uint64_t{1} << stats.n),
                    std::string(x.name) + ": 2^" + std::to_string(stats.n) + " brute force agrees");
    }
  }

  std::mt19937_64 rng(20);
  int compared = 0, disagreements = 0, uncolorable = 0;
  for (const auto& name : ksi::testing::ks_catalog()) {
    const KsSet set = load_catalog(name);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t count = 1 + rng() % set.contexts().size();
      const KsSet sub = ksi::testing::subset_of(set, ksi::testing::random_contexts(set.contexts().size(), count, rng));
      if (sub.vectors().size() > 20) continue;
      const bool a = find_coloring(sub).colorable();
      const bool b = brute_force_coloring(sub).colorable();
      disagreements += a != b;
      uncolorable += !a;
      ++compared;
    }
  }
  report.detail(disagreements == 0, "backtracking equals brute force on " + std::to_string(compared) +
                                        " random sub-sets with n <= 20 (" + std::to_string(uncolorable) +
                                        " uncolorable)");
  const double elapsed = seconds_since(start);
  report.detail(elapsed < 30.0, "runtime " + fmt("%.3f", elapsed) + " s < 30 s");
  return report.ok();
}

bool criterion_3(Report& report) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rate(0.0, 0.5);
  double worst_identity = 0.0, worst_oracle = 0.0;
  int sign_mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r = rate(rng);
    const int d = 3 + static_cast<int>(rng() % 14);
    const std::uint64_t N = 1 + rng() % 100, M = 1 + rng() % 300;
    const double g = cor4_lhs(r, N, M, d);
    const double sum = static_cast<double>(M) * delta_analytic(r) + static_cast<double>(N) * epsilon_analytic(r, d);
    worst_identity = std::max(worst_identity, std::abs(g - sum));

    // Binomial expansion in long double as an independent evaluation.
    const long double lr = r;
    auto pow_keep = [&](int e) {
      long double total = 0, binom = 1;
      for (int k = 0; k <= e; ++k) {
        total += binom * std::pow(-lr, static_cast<long double>(k));
        binom = binom * (e - k) / (k + 1);
      }
      return total;
    };
    const long double oracle = static_cast<long double>(M) * (2 * lr - 2 * lr * lr) +
                               static_cast<long double>(N) * (1 - pow_keep(d) - (d - 1) * pow_keep(d - 2) * lr * lr);
    worst_oracle = std::max(worst_oracle, static_cast<double>(std::abs(oracle - g) / std::max(1.0L, oracle)));

    const auto margin = theorem2_margin(M, N, {delta_analytic(r), epsilon_analytic(r, d)});
    sign_mismatches += margin.contradiction != (g < 1.0);
  }
  report.detail(worst_identity <= 1e-12, "max |g - (M delta + N eps)| = " + fmt("%.3e", worst_identity) +
                                             " over 10^4 samples");
  report.detail(worst_oracle <= 1e-12, "max relative gap to long-double expansion = " + fmt("%.3e", worst_oracle));
  report.detail(sign_mismatches == 0, "margin sign matches g < 1 on every sample");
  return report.ok();
}

bool criterion_4(Report& report) {
  for (const auto& name : ksi::testing::ks_catalog()) {
    const KsSet set = load_catalog(name);
    const SetStats stats = build_stats(set);
    const DeltaBound zero = cor3_delta_bound(stats.N, stats.M, 0.0);
    const DeltaBound edge = cor3_delta_bound(stats.N, stats.M, 1.0 / static_cast<double>(stats.N));
    report.detail(zero.delta_min == 1.0 / static_cast<double>(stats.M) && !zero.vacuous,
                  name + ": eps = 0 gives delta_min = 1/" + std::to_string(stats.M));
    report.detail(edge.delta_min == 0.0 && edge.vacuous, name + ": eps = 1/" + std::to_string(stats.N) +
                                                             " gives 0 (vacuous)");
  }
  return report.ok();
}

bool criterion_5(Report& report) {
  constexpr std::uint64_t kTrials = 1000000;
  constexpr std::uint64_t kSeed = 20240501;
  auto check = [&](const Estimate& e, double expected, const std::string& label) {
    const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(e.trials));
    const double gap = std::abs(e.rate() - expected);
    report.detail(gap <= 3 * sigma, label + ": " + fmt("%.6f", e.rate()) + " vs " + fmt("%.3f", expected) +
                                         ", |gap| = " + fmt("%.2e", gap) + " <= 3 sigma = " + fmt("%.2e", 3 * sigma));
  };
  const Estimate pair = simulate_pair(0.1, kTrials, kSeed);
  const Estimate context = simulate_context(0.1, 3, kTrials, kSeed);
  check(pair, 0.82, "pair agreement at r = 0.1");
  check(context, 0.747, "d=3 context success at r = 0.1");

  const Estimate pair_again = simulate_pair(0.1, kTrials, kSeed);
  const Estimate context_again = simulate_context(0.1, 3, kTrials, kSeed);
  report.detail(pair.successes == pair_again.successes && context.successes == context_again.successes,
                "pair and context estimates reproduce exactly");

  const KsSet set = load_catalog("cabello18");
  const TrialModel model(set, min_violation_assignment(set).assignment, 0.1, kSeed);
  const SimSummary first = simulate_model(model, kTrials, 4);
  const SimSummary second = simulate_model(model, kTrials, 4);
  report.detail(first == second && summary_json(first).dump() == summary_json(second).dump(),
                "cabello18 summaries bit-identical on two runs (10^6 trials)");
  return report.ok();
}

bool criterion_6(Report& report) {
  std::mt19937_64 rng(6);
  for (const auto& name : ksi::testing::ks_catalog()) {
    const KsSet set = load_catalog(name);
    std::uint64_t runs = 0, trials = 0, floor_violations = 0, lowest = UINT64_MAX;
    for (double r : {0.0, 0.0142, 0.1}) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (int b = 0; b < 10; ++b) {
          const SimSummary s = simulate_model(TrialModel(set, random_base(set, rng), r, seed), 100);
          floor_violations += s.min_trial_defect < 1;
          lowest = std::min(lowest, s.min_trial_defect);
          trials += s.trials;
          ++runs;
        }
      }
    }
    report.detail(floor_violations == 0, name + ": " + std::to_string(runs) + " runs, " + std::to_string(trials) +
                                             " trials, lowest per-trial defect " + std::to_string(lowest));
    const DefectReport defect = min_defect(set);
    report.detail(defect.d_min >= 1 && recount_defect(set, defect.witness) == defect.d_min,
                  name + ": d_min = " + std::to_string(defect.d_min) + " with matching witness");
  }

  std::vector<KsSet> controls = {parse_set(ksi::testing::kTriadText), parse_set(ksi::testing::kTwoTriadText)};
  const KsSet cabello = load_catalog("cabello18");
  for (std::size_t drop = 0; drop < cabello.contexts().size(); drop += 4) {
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < cabello.contexts().size(); ++c) {
      if (c != drop) keep.push_back(c);
    }
    KsSet sub = ksi::testing::subset_of(cabello, keep);
    if (find_coloring(sub).colorable()) controls.push_back(std::move(sub));
  }
  bool all_zero = true;
  for (const auto& control : controls) {
    const DefectReport defect = min_defect(control);
    all_zero = all_zero && defect.d_min == 0 && recount_defect(control, defect.witness) == 0;
  }
  report.detail(all_zero && controls.size() >= 3,
                "d_min = 0 on " + std::to_string(controls.size()) + " colorable control sets");
  return report.ok();
}

bool criterion_7(Report& report) {
  for (const auto& name : catalog_names()) {
    const std::string original = read_file(catalog_path(name));
    const KsSet set = parse_set(original);
    const std::string text = serialize_set(set);
    const bool identical = parse_set(text) == set && serialize_set(parse_set(text)) == text &&
                           significant_tokens(text) == significant_tokens(original);
    report.detail(identical, name + ": parse . serialize is the identity up to whitespace");
  }

  std::mt19937_64 rng(7);
  const auto names = catalog_names();
  int accepted = 0, wrong_line = 0, total = 0;
  std::map<std::string, int> kinds;
  for (int i = 0; i < 1000; ++i) {
    const std::string& name = names[static_cast<std::size_t>(i) % names.size()];
    ksi::testing::Mutator mutator(read_file(catalog_path(name)));
    const auto m = mutator.random(rng);
    ++kinds[m.kind];
    ++total;
    try {
      parse_set(m.text);
      ++accepted;
    } catch (const ParseError& e) {
      if (e.line() == 0 || (m.diagnostic_on_line && e.line() != m.line)) ++wrong_line;
    }
  }
  report.detail(accepted == 0, std::to_string(total) + " single-token mutations, " + std::to_string(accepted) +
                                   " silently accepted (" + std::to_string(kinds.size()) + " mutation kinds)");
  report.detail(wrong_line == 0, "every diagnostic carries the expected line number (" +
                                     std::to_string(wrong_line) + " misplaced)");
  return report.ok();
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(Report&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "table reproduction", criterion_1},
      {2, "catalog integrity", criterion_2},
      {3, "algebraic identity", criterion_3},
      {4, "delta bound boundaries", criterion_4},
      {5, "Monte Carlo vs analytic", criterion_5},
      {6, "defect floor", criterion_6},
      {7, "format round-trip and mutations", criterion_7},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = std::atoi(argv[2]);
  } else if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }

  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Report report;
    bool ok = false;
    const auto start = Clock::now();
    try {
      ok = c.run(report);
    } catch (const std::exception& e) {
      std::cout << "    FAIL exception: " << e.what() << "\n";
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ("
              << fmt("%.2f", seconds_since(start)) << " s)\n";
    failures += !ok;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
