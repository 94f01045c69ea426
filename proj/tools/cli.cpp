#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ksi/bounds.hpp"
#include "ksi/engine.hpp"
#include "ksi/model.hpp"
#include "ksi/noise_sim.hpp"
#include "ksi/set_format.hpp"

namespace ksi::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kCatalogPrefix = "catalog:";

// Loads a set from `catalog:<name>` or a file path.
SetDocument load_source(const std::string& source, Validation validation) {
  if (source.rfind(kCatalogPrefix, 0) == 0) {
    return read_set_file(catalog_path(source.substr(kCatalogPrefix.size())), validation);
  }
  return read_set_file(source, validation);
}

std::string fmt(double value, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, value);
  return buf;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_validate(const std::string& source, bool as_json, std::ostream& out) {
  const SetDocument doc = load_source(source, Validation::structure_only);
  const ValidationReport report = validate_orthogonality(doc.set);
  std::vector<std::pair<std::size_t, std::string>> issues;
  for (const auto& issue : report.issues) issues.emplace_back(issue_line(doc, issue), issue.message);
  std::stable_sort(issues.begin(), issues.end(), [](auto& a, auto& b) { return a.first < b.first; });

  if (as_json) {
    json j;
    j["set"] = doc.set.name();
    j["valid"] = report.valid();
    j["issues"] = json::array();
    for (const auto& [line, msg] : issues) j["issues"].push_back({{"line", line}, {"message", msg}});
    emit(out, j);
  } else if (report.valid()) {
    out << doc.set.name() << ": valid (" << doc.set.vectors().size() << " vectors, " << doc.set.contexts().size()
        << " contexts, d=" << doc.set.dimension() << ")\n";
  } else {
    for (const auto& [line, msg] : issues) out << doc.source << ":" << line << ": " << msg << "\n";
  }
  return report.valid() ? kExitOk : kExitError;
}

int cmd_stats(const std::string& source, bool as_json, std::ostream& out) {
  const KsSet set = load_source(source, Validation::full).set;
  const SetStats stats = build_stats(set);
  std::map<std::size_t, std::size_t> histogram;
  for (auto k : stats.multiplicities) ++histogram[k];

  if (as_json) {
    json j;
    j["name"] = set.name();
    j["d"] = set.dimension();
    j["n"] = stats.n;
    j["N"] = stats.N;
    j["M"] = stats.M;
    j["M_all_pairs"] = stats.M_all_pairs;
    j["m_overridden"] = stats.m_overridden;
    json h = json::object();
    for (auto [k, count] : histogram) h[std::to_string(k)] = count;
    j["multiplicity_histogram"] = h;
    emit(out, j);
    return kExitOk;
  }
  out << "set  " << set.name() << "\n";
  out << "d    " << set.dimension() << "\n";
  out << "n    " << stats.n << "\n";
  out << "N    " << stats.N << "\n";
  out << "M    " << stats.M;
  if (stats.m_overridden) out << "  (override; all-pairs count " << stats.M_all_pairs << ")";
  out << "\n";
  out << "contexts per vector:\n";
  for (auto [k, count] : histogram) out << "  k=" << k << "  " << count << " vector(s)\n";
  return kExitOk;
}

int cmd_color(const std::string& source, bool as_json, std::ostream& out) {
  const KsSet set = load_source(source, Validation::full).set;
  const ColoringResult result = find_coloring(set);
  if (as_json) {
    json j;
    j["set"] = set.name();
    j["colorable"] = result.colorable();
    j["nodes"] = result.nodes;
    if (result.coloring) {
      json a = json::object();
      for (std::size_t v = 0; v < set.vectors().size(); ++v) a[set.vector(v).id] = (*result.coloring)[v];
      j["assignment"] = a;
    }
    emit(out, j);
  } else if (result.coloring) {
    out << set.name() << ": colorable (" << result.nodes << " search nodes)\n";
    for (std::size_t v = 0; v < set.vectors().size(); ++v) {
      out << "  " << set.vector(v).id << " = " << int((*result.coloring)[v]) << "\n";
    }
  } else {
    out << set.name() << ": no non-contextual assignment exists (KS-uncolorable; " << result.nodes
        << " search nodes)\n";
  }
  return result.colorable() ? kExitOk : kExitContradiction;
}

int cmd_defect(const std::string& source, bool as_json, std::ostream& out) {
  const KsSet set = load_source(source, Validation::full).set;
  const DefectReport report = min_defect(set);
  if (as_json) {
    json j;
    j["set"] = set.name();
    j["d_min"] = report.d_min;
    j["sum_defects"] = report.breakdown.sum_defects;
    j["connection_defects"] = report.breakdown.connection_defects;
    j["nodes"] = report.nodes;
    j["witness"] = report.witness;
    emit(out, j);
    return kExitOk;
  }
  out << set.name() << ": minimum defect " << report.d_min << " (" << report.breakdown.sum_defects
      << " sum, " << report.breakdown.connection_defects << " connection; " << report.nodes
      << " search nodes)\n";
  out << "witness slots:\n";
  for (std::size_t c = 0; c < report.witness.size(); ++c) {
    out << "  ctx " << c << ":";
    const auto& members = set.context(c).members;
    for (std::size_t p = 0; p < members.size(); ++p) {
      out << ' ' << set.vector(members[p]).id << '=' << int(report.witness[c][p]);
    }
    out << "\n";
  }
  return kExitOk;
}

int cmd_bounds(const std::string& source, double delta, double epsilon, bool as_json, std::ostream& out) {
  if (!(delta >= 0 && delta <= 1 && epsilon >= 0 && epsilon <= 1)) {
    throw CLI::ValidationError("--delta and --epsilon must lie in [0, 1]");
  }
  const KsSet set = load_source(source, Validation::full).set;
  const SetStats stats = build_stats(set);
  const MarginResult margin = theorem2_margin(stats.M, stats.N, {delta, epsilon});
  const DeltaBound bound = cor3_delta_bound(stats.N, stats.M, epsilon);
  if (as_json) {
    json j;
    j["name"] = set.name();
    j["d"] = set.dimension();
    j["n"] = stats.n;
    j["N"] = stats.N;
    j["M"] = stats.M;
    j["delta"] = delta;
    j["epsilon"] = epsilon;
    j["margin"] = margin.margin;
    j["contradiction"] = margin.contradiction;
    j["delta_min"] = bound.delta_min;
    j["delta_bound_vacuous"] = bound.vacuous;
    emit(out, j);
  } else {
    out << set.name() << ": N=" << stats.N << " M=" << stats.M << "\n";
    out << "margin 1 - M*delta - N*epsilon = " << fmt(margin.margin) << " -> "
        << (margin.contradiction ? "contradiction with non-contextuality" : "no contradiction") << "\n";
    out << "delta >= (1 - N*epsilon)/M = " << fmt(bound.delta_min) << (bound.vacuous ? " (vacuous)" : "") << "\n";
  }
  return margin.contradiction ? kExitContradiction : kExitOk;
}

int cmd_critical(const std::optional<std::string>& source, std::optional<std::uint64_t> N,
                 std::optional<std::uint64_t> M, std::optional<int> d, bool as_json, std::ostream& out) {
  TableRow row;
  if (source) {
    if (N || M || d) throw CLI::ValidationError("give either a set or --N/--M/--d, not both");
    const KsSet set = load_source(*source, Validation::full).set;
    const SetStats stats = build_stats(set);
    row = {set.name(), set.dimension(), stats.n, std::nullopt, stats.N, stats.M};
  } else {
    if (!N || !M || !d) throw CLI::ValidationError("critical-r needs a set or all of --N, --M, --d");
    row = {"parameters", *d, 0, std::nullopt, *N, *M};
  }
  const CriticalRate rate = critical_rate(row.N, row.M, row.d);
  if (as_json) {
    json j = table_json({{row, rate}}).front();
    j["lo"] = rate.lo;
    j["hi"] = rate.hi;
    j["iterations"] = rate.iterations;
    emit(out, j);
  } else {
    out << row.name << ": N=" << row.N << " M=" << row.M << " d=" << row.d << "\n";
    out << "r* = " << fmt(rate.r, "%.12f") << "  (4-decimal floor " << fmt(rate.r_floor4, "%.4f") << ", "
        << rate.iterations << " bisection steps)\n";
  }
  return kExitOk;
}

int cmd_simulate(const std::string& source, double r, std::uint64_t trials, std::uint64_t seed,
                 unsigned threads, bool as_json, std::ostream& out) {
  if (!(r >= 0 && r <= 1)) throw CLI::ValidationError("--r must lie in [0, 1]");
  if (trials == 0) throw CLI::ValidationError("--trials must be at least 1");
  KsSet set = load_source(source, Validation::full).set;
  const SetStats stats = build_stats(set);
  const ViolationReport base = min_violation_assignment(set);
  const auto certificate = certify_uncolorable(set);
  const SimSummary summary = simulate_model(TrialModel(set, base.assignment, r, seed), trials, threads);

  std::optional<InequalityVerdict> verdict;
  if (certificate) verdict = empirical_inequality_check(summary, stats, *certificate);

  if (as_json) {
    json j = summary_json(summary);
    j["base_violations"] = base.violated;
    if (verdict) {
      j["verdict"] = {{"holds", verdict->holds},
                      {"delta_hat_max", verdict->delta_hat_max},
                      {"epsilon_hat_max", verdict->epsilon_hat_max},
                      {"implied_bound", verdict->implied_bound}};
    } else {
      j["verdict"] = nullptr;
    }
    emit(out, j);
  } else {
    out << set.name() << ": r=" << fmt(r) << " trials=" << trials << " seed=" << seed << "\n";
    out << "base assignment violates " << base.violated << " context(s)\n";
    const auto dh = summary.delta_hat();
    const auto eh = summary.epsilon_hat();
    double sum_d = 0, sum_e = 0;
    for (double x : dh) sum_d += x;
    for (double x : eh) sum_e += x;
    out << "sum of connection mismatch rates  " << fmt(sum_d) << " over " << dh.size() << " connections\n";
    out << "sum of context sum-error rates    " << fmt(sum_e) << " over " << eh.size() << " contexts\n";
    out << "mean total defect per trial       " << fmt(summary.mean_total_defect()) << "\n";
    out << "minimum defect in a single trial  " << summary.min_trial_defect << "\n";
    if (verdict) {
      out << "inequality " << (verdict->holds ? "holds" : "VIOLATED") << ": max delta_hat "
          << fmt(verdict->delta_hat_max) << ", max epsilon_hat " << fmt(verdict->epsilon_hat_max)
          << ", connections*max + N*max = " << fmt(verdict->implied_bound) << "\n";
    } else {
      out << "set is colorable; the inequality check does not apply\n";
    }
  }
  if (verdict && !verdict->holds) return kExitError;
  return kExitOk;
}

int cmd_table(bool from_catalog, bool as_json, std::ostream& out) {
  std::vector<TableRow> rows;
  if (from_catalog) {
    for (const auto& name : catalog_names()) {
      const KsSet set = load_catalog(name);
      const SetStats stats = build_stats(set);
      rows.push_back({set.name(), set.dimension(), stats.n, std::nullopt, stats.N, stats.M});
    }
  } else {
    rows = published_table_rows();
  }
  const auto entries = compute_table(rows);
  if (as_json) {
    emit(out, table_json(entries));
  } else {
    out << format_table(entries);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kochen-Specker set analysis: uncolorability, defects, error bounds and simulation", "ksi"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  bool as_json = false;
  std::string source;
  std::optional<std::string> critical_source;
  double delta = 0, epsilon = 0, rate = 0;
  std::optional<std::uint64_t> opt_N, opt_M;
  std::optional<int> opt_d;
  std::uint64_t trials = 100000, seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool from_catalog = false;

  const char* set_help = "set file path or catalog:<name>";
  auto add_set_command = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("set", source, set_help)->required();
    sub->add_flag("--json", as_json, "emit JSON");
    return sub;
  };
  auto* validate = add_set_command("validate", "structure and orthogonality report (exit 0 iff valid)");
  auto* stats = add_set_command("stats", "n, N, M and the multiplicity histogram");
  auto* color = add_set_command("color", "find a non-contextual assignment (exit 0) or prove none exists (exit 2)");
  auto* defect = add_set_command("defect", "minimum defect over contextual slot assignments");
  auto* bounds = add_set_command("bounds", "inequality margin and delta lower bound (exit 2 on contradiction)");
  bounds->add_option("--delta", delta, "rotation mismatch rate")->required();
  bounds->add_option("--epsilon", epsilon, "sum error rate")->required();

  auto* critical = app.add_subcommand("critical-r", "critical independent flip rate");
  critical->add_option("set", critical_source, set_help);
  critical->add_option("--N", opt_N, "number of contexts");
  critical->add_option("--M", opt_M, "number of connections");
  critical->add_option("--d", opt_d, "dimension")->check(CLI::Range(3, 64));
  critical->add_flag("--json", as_json, "emit JSON");

  auto* simulate = add_set_command("simulate", "Monte Carlo of the independent flip model");
  simulate->add_option("--r", rate, "flip rate per result")->required();
  simulate->add_option("--trials", trials, "number of trials")->capture_default_str();
  simulate->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  simulate->add_option("--threads", threads, "worker threads (does not change results)");

  auto* table = app.add_subcommand("table", "critical rates for the published parameter rows");
  table->add_flag("--catalog", from_catalog, "use the bundled catalog sets instead");
  table->add_flag("--json", as_json, "emit JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (validate->parsed()) return cmd_validate(source, as_json, out);
    if (stats->parsed()) return cmd_stats(source, as_json, out);
    if (color->parsed()) return cmd_color(source, as_json, out);
    if (defect->parsed()) return cmd_defect(source, as_json, out);
    if (bounds->parsed()) return cmd_bounds(source, delta, epsilon, as_json, out);
    if (critical->parsed()) return cmd_critical(critical_source, opt_N, opt_M, opt_d, as_json, out);
    if (simulate->parsed()) return cmd_simulate(source, rate, trials, seed, threads, as_json, out);
    if (table->parsed()) return cmd_table(from_catalog, as_json, out);
  } catch (const ParseError& e) {
    err << (critical_source ? *critical_source : source) << ":" << e.line() << ": " << e.detail() << "\n";
    return kExitError;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace ksi::cli
