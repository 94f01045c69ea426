#include "ksi/bounds.hpp"

#include <cmath>
#include <cstdio>

namespace ksi {

MarginResult theorem2_margin(std::uint64_t M, std::uint64_t N, ErrorRates rates) {
  MarginResult out;
  out.margin = 1.0 - static_cast<double>(M) * rates.delta - static_cast<double>(N) * rates.epsilon;
  out.contradiction = out.margin > 0.0;
  return out;
}

DeltaBound cor3_delta_bound(std::uint64_t N, std::uint64_t M, double epsilon) {
  if (M == 0) throw std::invalid_argument("delta bound undefined for M = 0");
  const double numerator = 1.0 - static_cast<double>(N) * epsilon;
  if (numerator <= 0.0) return {0.0, true};
  return {numerator / static_cast<double>(M), false};
}

double delta_analytic(double r) { return 2.0 * r - 2.0 * r * r; }

double epsilon_analytic(double r, int d) {
  const double keep = 1.0 - r;
  return 1.0 - std::pow(keep, d) - static_cast<double>(d - 1) * std::pow(keep, d - 2) * r * r;
}

double cor4_lhs(double r, std::uint64_t N, std::uint64_t M, int d) {
  return static_cast<double>(M) * delta_analytic(r) + static_cast<double>(N) * epsilon_analytic(r, d);
}

double floor4(double r) {
  return std::floor(r * 1e4) / 1e4;
}

CriticalRate critical_rate(std::uint64_t N, std::uint64_t M, int d) {
  if (N == 0 || M == 0) throw std::invalid_argument("critical rate needs N >= 1 and M >= 1");
  if (d < 3) throw std::invalid_argument("critical rate needs d >= 3");
  double lo = 0.0, hi = 0.5;
  if (cor4_lhs(hi, N, M, d) < 1.0) {
    throw NoCrossing("g(1/2) < 1: no crossing in [0, 1/2] for N=" + std::to_string(N) +
                     " M=" + std::to_string(M) + " d=" + std::to_string(d));
  }
  CriticalRate out;
  while (hi - lo > kCriticalTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (cor4_lhs(mid, N, M, d) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++out.iterations;
  }
  out.lo = lo;
  out.hi = hi;
  out.r = 0.5 * (lo + hi);
  out.r_floor4 = floor4(out.r);
  return out;
}

std::vector<TableRow> published_table_rows() {
  return {
      {"Peres", 3, 57, 33, 40, 96},
      {"Kochen & Conway", 3, 51, 31, 37, 91},
      {"Schutte", 3, 49, 33, 36, 87},
      {"Kernaghan & Peres", 8, 36, std::nullopt, 11, 72},
      {"Kernaghan", 4, 20, std::nullopt, 11, 30},
      {"Cabello et al", 4, 18, std::nullopt, 9, 18},
  };
}

std::vector<TableEntry> compute_table(const std::vector<TableRow>& rows) {
  std::vector<TableEntry> out;
  out.reserve(rows.size());
  for (const TableRow& row : rows) out.push_back({row, critical_rate(row.N, row.M, row.d)});
  return out;
}

std::string format_table(const std::vector<TableEntry>& entries) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-20s %3s %9s %4s %4s %8s %16s\n", "set", "d", "n", "N", "M", "r", "r*");
  out += buf;
  for (const auto& e : entries) {
    std::string n = std::to_string(e.row.n);
    if (e.row.n_original) n += " (" + std::to_string(*e.row.n_original) + ")";
    std::snprintf(buf, sizeof buf, "%-20s %3d %9s %4llu %4llu %8.4f %16.12f\n", e.row.name.c_str(), e.row.d,
                  n.c_str(), static_cast<unsigned long long>(e.row.N),
                  static_cast<unsigned long long>(e.row.M), e.rate.r_floor4, e.rate.r);
    out += buf;
  }
  return out;
}

nlohmann::ordered_json table_json(const std::vector<TableEntry>& entries) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["name"] = e.row.name;
    j["d"] = e.row.d;
    j["n"] = e.row.n;
    j["N"] = e.row.N;
    j["M"] = e.row.M;
    j["r_critical"] = e.rate.r;
    j["r_floor4"] = e.rate.r_floor4;
    rows.push_back(std::move(j));
  }
  return rows;
}

}  // namespace ksi
