#include "ksi/engine.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <set>

namespace ksi {

// ---------------------------------------------------------------- validation

ValidationReport validate_orthogonality(const KsSet& set) {
  ValidationReport report;
  const auto vectors = set.vectors();
  const auto contexts = set.contexts();

  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].is_zero()) {
      report.issues.push_back({IssueKind::zero_vector, "vector " + vectors[i].id + " is zero", i, std::nullopt});
      continue;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!vectors[j].is_zero() && same_ray(vectors[i], vectors[j])) {
        report.issues.push_back({IssueKind::duplicate_ray,
                                 "vector " + vectors[i].id + " is the same ray as " + vectors[j].id, i,
                                 std::nullopt});
        break;
      }
    }
  }

  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    const auto& members = contexts[c].members;
    std::vector<std::size_t> key = members;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end()) {
      report.issues.push_back({IssueKind::repeated_member,
                               "context " + std::to_string(c) + " lists a vector more than once", std::nullopt, c});
      continue;
    }
    if (auto [it, inserted] = seen.emplace(key, c); !inserted) {
      report.issues.push_back({IssueKind::duplicate_context,
                               "context " + std::to_string(c) + " repeats context " + std::to_string(it->second),
                               std::nullopt, c});
      continue;
    }
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const RayVector& u = vectors[members[a]];
        const RayVector& v = vectors[members[b]];
        ExactScalar dot = inner_product(u, v);
        if (!dot.is_zero()) {
          report.issues.push_back({IssueKind::not_orthogonal,
                                   "context not orthogonal: " + u.id + "." + v.id + " = " + dot.to_string(),
                                   std::nullopt, c});
        }
      }
    }
  }
  return report;
}

// ------------------------------------------------------------------ coloring

bool context_satisfied(const KsSet& set, std::size_t context, const VectorAssignment& values) {
  std::size_t zeros = 0;
  for (std::size_t v : set.context(context).members) zeros += values.at(v) == 0;
  return zeros == 1;
}

namespace {

constexpr std::int8_t kUnset = -1;

// Backtracking over contexts with a budget of contexts allowed to fail.
// With budget 0 this is the plain colorability search.
class ContextSearch {
 public:
  explicit ContextSearch(const KsSet& set) : set_(set), values_(set.vectors().size(), kUnset) {
    skipped_.assign(set.contexts().size(), false);
  }

  std::optional<VectorAssignment> run(std::size_t budget) {
    std::fill(values_.begin(), values_.end(), kUnset);
    std::fill(skipped_.begin(), skipped_.end(), false);
    if (!descend(budget)) return std::nullopt;
    VectorAssignment out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i] == 0 ? 0 : 1;
    return out;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct Status {
    std::size_t zeros = 0;
    std::size_t unset = 0;
  };

  Status status(std::size_t c) const {
    Status s;
    for (std::size_t v : set_.context(c).members) {
      s.zeros += values_[v] == 0;
      s.unset += values_[v] == kUnset;
    }
    return s;
  }

  // Number of ways to complete context c validly; npos when already satisfied.
  static constexpr std::size_t kDone = std::numeric_limits<std::size_t>::max();
  static std::size_t options(const Status& s) {
    if (s.zeros > 1) return 0;
    if (s.zeros == 1) return s.unset == 0 ? kDone : 1;
    return s.unset;
  }

  bool descend(std::size_t budget) {
    ++nodes_;
    std::size_t best = kDone;
    std::size_t best_options = kDone;
    for (std::size_t c = 0; c < set_.contexts().size(); ++c) {
      if (skipped_[c]) continue;
      std::size_t opts = options(status(c));
      if (opts == kDone) continue;
      if (opts < best_options) {
        best = c;
        best_options = opts;
        if (opts == 0) break;
      }
    }
    if (best == kDone) return true;

    const auto& members = set_.context(best).members;
    std::vector<std::size_t> changed;
    changed.reserve(members.size());
    for (std::size_t zero_pos = 0; zero_pos < members.size(); ++zero_pos) {
      const std::size_t z = members[zero_pos];
      if (values_[z] == 1) continue;
      bool ok = true;
      for (std::size_t v : members) {
        const std::int8_t want = v == z ? 0 : 1;
        if (values_[v] == kUnset) {
          values_[v] = want;
          changed.push_back(v);
        } else if (values_[v] != want) {
          ok = false;
          break;
        }
      }
      if (ok && descend(budget)) return true;
      for (std::size_t v : changed) values_[v] = kUnset;
      changed.clear();
    }
    if (budget > 0) {
      skipped_[best] = true;
      if (descend(budget - 1)) return true;
      skipped_[best] = false;
    }
    return false;
  }

  const KsSet& set_;
  std::vector<std::int8_t> values_;
  std::vector<bool> skipped_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ColoringResult find_coloring(const KsSet& set) {
  ContextSearch search(set);
  ColoringResult result;
  result.coloring = search.run(0);
  result.nodes = search.nodes();
  return result;
}

BruteForceResult brute_force_coloring(const KsSet& set) {
  const std::size_t n = set.vectors().size();
  if (n > kBruteForceLimit) {
    throw ModelError("brute force limited to " + std::to_string(kBruteForceLimit) + " vectors, set has " +
                     std::to_string(n));
  }
  std::vector<std::uint32_t> masks;
  for (const Context& ctx : set.contexts()) {
    std::uint32_t m = 0;
    for (std::size_t v : ctx.members) m |= std::uint32_t{1} << v;
    masks.push_back(m);
  }
  BruteForceResult result;
  const std::uint64_t total = std::uint64_t{1} << n;
  // Bit v set means vector v takes value 1.
  for (std::uint64_t x = 0; x < total; ++x) {
    const auto ones = static_cast<std::uint32_t>(x);
    bool ok = true;
    for (std::uint32_t m : masks) {
      if (std::popcount(~ones & m) != 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      if (!result.coloring) {
        VectorAssignment values(n);
        for (std::size_t v = 0; v < n; ++v) values[v] = (ones >> v) & 1u;
        result.coloring = std::move(values);
      }
      ++result.solutions;
    }
  }
  result.enumerated = total;
  return result;
}

std::optional<KsCertificate> certify_uncolorable(const KsSet& set) {
  ColoringResult r = find_coloring(set);
  if (r.colorable()) return std::nullopt;
  return KsCertificate(set.name(), r.nodes);
}

// -------------------------------------------------------------------- defect

SlotAssignment to_slots(const KsSet& set, const VectorAssignment& values) {
  SlotAssignment slots;
  slots.reserve(set.contexts().size());
  for (const Context& ctx : set.contexts()) {
    std::vector<std::uint8_t> row;
    for (std::size_t v : ctx.members) row.push_back(values.at(v));
    slots.push_back(std::move(row));
  }
  return slots;
}

namespace {

std::size_t position_in(const Context& ctx, std::size_t vector) {
  return static_cast<std::size_t>(std::find(ctx.members.begin(), ctx.members.end(), vector) -
                                  ctx.members.begin());
}

}  // namespace

DefectBreakdown slot_defects(const KsSet& set, const SetStats& stats, const SlotAssignment& slots) {
  DefectBreakdown out;
  const auto d = static_cast<std::size_t>(set.dimension());
  for (std::size_t c = 0; c < slots.size(); ++c) {
    std::size_t sum = 0;
    for (auto bit : slots[c]) sum += bit;
    out.sum_defects += sum != d - 1;
  }
  for (const Connection& conn : stats.connections) {
    const std::size_t pa = position_in(set.context(conn.context_a), conn.vector);
    const std::size_t pb = position_in(set.context(conn.context_b), conn.vector);
    out.connection_defects += slots[conn.context_a][pa] != slots[conn.context_b][pb];
  }
  return out;
}

namespace {

// Slot-level branch and bound. Patterns are d-bit masks (bit p = value of
// position p); contexts are visited in a fixed order that keeps the
// already-placed neighbourhood as large as possible.
class DefectSearch {
 public:
  DefectSearch(const KsSet& set, const SetStats& stats) : d_(set.dimension()) {
    const std::size_t N = set.contexts().size();
    order_.reserve(N);
    std::vector<bool> placed(N, false);
    std::vector<std::size_t> links(N, 0);
    std::vector<std::vector<const Connection*>> by_context(N);
    for (const Connection& conn : stats.connections) {
      by_context[conn.context_a].push_back(&conn);
      by_context[conn.context_b].push_back(&conn);
    }
    for (std::size_t step = 0; step < N; ++step) {
      std::size_t pick = N;
      for (std::size_t c = 0; c < N; ++c) {
        if (!placed[c] && (pick == N || links[c] > links[pick])) pick = c;
      }
      placed[pick] = true;
      order_.push_back(pick);
      for (const Connection* conn : by_context[pick]) {
        const std::size_t other = conn->context_a == pick ? conn->context_b : conn->context_a;
        ++links[other];
      }
    }
    std::vector<std::size_t> rank(N);
    for (std::size_t k = 0; k < N; ++k) rank[order_[k]] = k;

    checks_.resize(N);
    for (const Connection& conn : stats.connections) {
      std::size_t later = conn.context_a, earlier = conn.context_b;
      if (rank[later] < rank[earlier]) std::swap(later, earlier);
      checks_[rank[later]].push_back(
          {position_in(set.context(later), conn.vector), earlier, position_in(set.context(earlier), conn.vector)});
    }

    // Valid patterns (one zero) first by zero position, then the rest ascending.
    const unsigned full = (1u << d_) - 1;
    for (int z = 0; z < d_; ++z) patterns_.push_back(full & ~(1u << z));
    for (unsigned p = 0; p <= full; ++p) {
      if (std::popcount(p) != d_ - 1) patterns_.push_back(p);
    }
    chosen_.assign(N, 0);
  }

  bool search(std::size_t budget) {
    budget_ = budget;
    return descend(0, 0);
  }

  SlotAssignment witness() const {
    SlotAssignment slots(chosen_.size());
    for (std::size_t c = 0; c < chosen_.size(); ++c) {
      for (int p = 0; p < d_; ++p) slots[c].push_back((chosen_[c] >> p) & 1u);
    }
    return slots;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct Check {
    std::size_t position;
    std::size_t earlier_context;
    std::size_t earlier_position;
  };

  bool descend(std::size_t depth, std::size_t cost) {
    ++nodes_;
    if (depth == order_.size()) return true;
    const std::size_t c = order_[depth];
    for (unsigned p : patterns_) {
      std::size_t added = std::popcount(p) != d_ - 1;
      for (const Check& chk : checks_[depth]) {
        added += ((p >> chk.position) & 1u) != ((chosen_[chk.earlier_context] >> chk.earlier_position) & 1u);
      }
      if (cost + added > budget_) continue;
      chosen_[c] = p;
      if (descend(depth + 1, cost + added)) return true;
    }
    return false;
  }

  int d_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<Check>> checks_;  // indexed by depth
  std::vector<unsigned> patterns_;
  std::vector<unsigned> chosen_;  // indexed by context
  std::size_t budget_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ViolationReport min_violation_assignment(const KsSet& set) {
  ContextSearch search(set);
  for (std::size_t budget = 0;; ++budget) {
    if (auto found = search.run(budget)) {
      ViolationReport report;
      report.assignment = std::move(*found);
      for (std::size_t c = 0; c < set.contexts().size(); ++c) {
        report.violated += !context_satisfied(set, c, report.assignment);
      }
      return report;
    }
  }
}

DefectReport min_defect(const KsSet& set) {
  if (set.dimension() > 16) throw ModelError("min_defect supports d <= 16");
  const SetStats stats = build_stats(set);

  // Any vector assignment is a slot assignment without connection defects,
  // so the fewest violated contexts is an upper bound.
  const ViolationReport upper = min_violation_assignment(set);

  DefectReport report;
  DefectSearch search(set, stats);
  for (std::size_t budget = 0; budget < upper.violated; ++budget) {
    if (search.search(budget)) {
      report.witness = search.witness();
      break;
    }
  }
  if (report.witness.empty()) report.witness = to_slots(set, upper.assignment);
  report.nodes = search.nodes();
  report.breakdown = slot_defects(set, stats, report.witness);
  report.d_min = report.breakdown.total();
  return report;
}

}  // namespace ksi
