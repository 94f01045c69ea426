// Colorability search and minimum-defect computation.
//
// A vector assignment gives every ray one value in {0,1}; a context is
// satisfied when exactly one of its d members is 0 (so the values sum to
// d-1). A set is a KS set when no vector assignment satisfies every context.
//
// A slot assignment relaxes this: each (context, position) slot carries its
// own value, so a ray may read differently in different contexts. Its defect
// counts contexts whose slots do not sum to d-1 plus connections whose two
// slots disagree. On a KS set every slot assignment has defect >= 1.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksi/model.hpp"

namespace ksi {

using VectorAssignment = std::vector<std::uint8_t>;          // indexed by vector
using SlotAssignment = std::vector<std::vector<std::uint8_t>>;  // [context][position]

// ---------------------------------------------------------------- validation

enum class IssueKind {
  zero_vector,
  duplicate_ray,
  repeated_member,
  duplicate_context,
  not_orthogonal,
};

struct ValidationIssue {
  IssueKind kind;
  std::string message;
  /// Vector index for vector issues (the later of a duplicate pair).
  std::optional<std::size_t> vector;
  /// Context index for context issues (the later of a duplicate pair).
  std::optional<std::size_t> context;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
};

/// Lists every zero vector, duplicate ray, duplicate or degenerate context
/// and every non-orthogonal pair inside a context.
ValidationReport validate_orthogonality(const KsSet& set);

// ------------------------------------------------------------------ coloring

bool context_satisfied(const KsSet& set, std::size_t context, const VectorAssignment& values);

struct ColoringResult {
  std::optional<VectorAssignment> coloring;
  std::uint64_t nodes = 0;

  bool colorable() const { return coloring.has_value(); }
};

/// Backtracking over contexts, most constrained first; ties go to the
/// earliest declared context. Deterministic node counts.
ColoringResult find_coloring(const KsSet& set);

struct BruteForceResult {
  std::optional<VectorAssignment> coloring;  // first in enumeration order
  std::uint64_t solutions = 0;
  std::uint64_t enumerated = 0;

  bool colorable() const { return coloring.has_value(); }
};

inline constexpr std::size_t kBruteForceLimit = 25;

/// Enumerates all 2^n assignments. Throws ModelError when n > kBruteForceLimit.
BruteForceResult brute_force_coloring(const KsSet& set);

/// Proof token that a set admits no vector assignment. Only
/// certify_uncolorable() can make one.
class KsCertificate {
 public:
  const std::string& set_name() const { return set_name_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  friend std::optional<KsCertificate> certify_uncolorable(const KsSet& set);
  KsCertificate(std::string name, std::uint64_t nodes) : set_name_(std::move(name)), nodes_(nodes) {}
  std::string set_name_;
  std::uint64_t nodes_;
};

std::optional<KsCertificate> certify_uncolorable(const KsSet& set);

// -------------------------------------------------------------------- defect

struct DefectBreakdown {
  std::size_t sum_defects = 0;
  std::size_t connection_defects = 0;
  std::size_t total() const { return sum_defects + connection_defects; }
};

DefectBreakdown slot_defects(const KsSet& set, const SetStats& stats, const SlotAssignment& slots);

/// Slots read straight from a vector assignment (no connection defects).
SlotAssignment to_slots(const KsSet& set, const VectorAssignment& values);

struct DefectReport {
  std::size_t d_min = 0;
  SlotAssignment witness;
  DefectBreakdown breakdown;
  std::uint64_t nodes = 0;
};

/// Minimum defect over all slot assignments, using the all-pairs connections
/// (any m-override is ignored). Branch and bound with iterative deepening
/// on the defect budget.
DefectReport min_defect(const KsSet& set);

struct ViolationReport {
  std::size_t violated = 0;
  VectorAssignment assignment;
};

/// Vector assignment violating the fewest contexts.
ViolationReport min_violation_assignment(const KsSet& set);

}  // namespace ksi
