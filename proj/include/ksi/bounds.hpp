// Error-rate bounds for KS sets.
//
// For a set of N contexts with M connections, a hidden-variable model whose
// per-connection mismatch rate is at most delta and per-context sum-error
// rate at most epsilon cannot exist when M*delta + N*epsilon < 1.
//
// Under independent per-result flips at rate r:
//   delta(r)   = 2r - 2r^2
//   epsilon(r) = 1 - (1-r)^d - (d-1)(1-r)^(d-2) r^2
// and the non-contextual model requires g(r) = M delta(r) + N epsilon(r) >= 1.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ksi {

struct ErrorRates {
  double delta = 0.0;
  double epsilon = 0.0;
};

struct MarginResult {
  double margin = 0.0;
  bool contradiction = false;  // margin > 0
};

MarginResult theorem2_margin(std::uint64_t M, std::uint64_t N, ErrorRates rates);

struct DeltaBound {
  double delta_min = 0.0;
  bool vacuous = false;  // epsilon >= 1/N
};

/// (1 - N eps) / M clamped at 0. Throws std::invalid_argument for M = 0.
DeltaBound cor3_delta_bound(std::uint64_t N, std::uint64_t M, double epsilon);

double delta_analytic(double r);
double epsilon_analytic(double r, int d);

/// g(r) = M delta(r) + N epsilon(r, d).
double cor4_lhs(double r, std::uint64_t N, std::uint64_t M, int d);

class NoCrossing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CriticalRate {
  double r = 0.0;
  double r_floor4 = 0.0;  // floor(r * 1e4) / 1e4
  double lo = 0.0;        // g(lo) < 1
  double hi = 0.0;        // g(hi) >= 1
  int iterations = 0;
};

inline constexpr double kCriticalTolerance = 1e-12;

/// Bisection for g(r) = 1 on [0, 1/2]. Throws NoCrossing if g(1/2) < 1.
CriticalRate critical_rate(std::uint64_t N, std::uint64_t M, int d);

double floor4(double r);

struct TableRow {
  std::string name;
  int d = 3;
  std::uint64_t n = 0;
  /// Size of the unextended set when n counts an extended one.
  std::optional<std::uint64_t> n_original;
  std::uint64_t N = 0;
  std::uint64_t M = 0;
};

struct TableEntry {
  TableRow row;
  CriticalRate rate;
};

/// Parameter rows of the published comparison table, in its order.
std::vector<TableRow> published_table_rows();

std::vector<TableEntry> compute_table(const std::vector<TableRow>& rows);
std::string format_table(const std::vector<TableEntry>& entries);
nlohmann::ordered_json table_json(const std::vector<TableEntry>& entries);

}  // namespace ksi
