// Rays, contexts and KS sets, plus the (n, N, M) statistics derived from them.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ksi/exact_scalar.hpp"

namespace ksi {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ray in R^d, stored as an unnormalized representative.
struct RayVector {
  std::string id;
  std::vector<ExactScalar> components;

  std::size_t dimension() const { return components.size(); }
  std::int64_t radicand() const;
  bool is_zero() const;
};

/// An ordered d-tuple of vector indices into the owning set. Order matters
/// only for slot addressing; orthogonality and sharing ignore it.
struct Context {
  std::vector<std::size_t> members;

  bool contains(std::size_t vector_index) const;
};

/// Exact real inner product (no conjugation). Throws on dimension or ring mismatch.
ExactScalar inner_product(const RayVector& u, const RayVector& v);

/// True iff u = c*v for some nonzero scalar c, tested through 2x2 minors.
bool same_ray(const RayVector& u, const RayVector& v);

class KsSet {
 public:
  /// Checks shape only: d >= 3, square-free radicand, d components per vector
  /// in the set's ring, unique ids, d in-range members per context.
  /// Orthogonality and duplicate detection live in validate_orthogonality().
  KsSet(std::string name, int dimension, std::int64_t radicand, std::vector<RayVector> vectors,
        std::vector<Context> contexts, std::optional<std::uint64_t> m_override = std::nullopt);

  const std::string& name() const { return name_; }
  int dimension() const { return dimension_; }
  std::int64_t radicand() const { return radicand_; }
  std::span<const RayVector> vectors() const { return vectors_; }
  std::span<const Context> contexts() const { return contexts_; }
  std::optional<std::uint64_t> m_override() const { return m_override_; }

  const RayVector& vector(std::size_t index) const { return vectors_.at(index); }
  const Context& context(std::size_t index) const { return contexts_.at(index); }
  std::optional<std::size_t> find_vector(std::string_view id) const;

  /// Same name, dimension, ring, override, vector ids, exact components and contexts.
  friend bool operator==(const KsSet& lhs, const KsSet& rhs);

 private:
  std::string name_;
  int dimension_;
  std::int64_t radicand_;
  std::vector<RayVector> vectors_;
  std::vector<Context> contexts_;
  std::optional<std::uint64_t> m_override_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One rotation: a vector shared by two contexts (context_a < context_b).
struct Connection {
  std::size_t vector;
  std::size_t context_a;
  std::size_t context_b;

  friend bool operator==(const Connection&, const Connection&) = default;
};

struct SetStats {
  std::size_t n = 0;
  std::size_t N = 0;
  /// Override-aware connection count used by the bounds.
  std::uint64_t M = 0;
  /// Sum over vectors of C(k_v, 2); always equals connections.size().
  std::uint64_t M_all_pairs = 0;
  bool m_overridden = false;
  /// k_v per vector index.
  std::vector<std::size_t> multiplicities;
  /// All-pairs connections, ordered by vector then by context pair.
  std::vector<Connection> connections;
};

SetStats build_stats(const KsSet& set);

}  // namespace ksi
