#include "ksi/model.hpp"

#include <algorithm>

namespace ksi {

std::int64_t RayVector::radicand() const {
  return components.empty() ? 1 : components.front().radicand();
}

bool RayVector::is_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const ExactScalar& c) { return c.is_zero(); });
}

bool Context::contains(std::size_t vector_index) const {
  return std::find(members.begin(), members.end(), vector_index) != members.end();
}

namespace {

void check_compatible(const RayVector& u, const RayVector& v) {
  if (u.dimension() != v.dimension()) {
    throw ModelError("dimension mismatch: " + u.id + " has " + std::to_string(u.dimension()) +
                     " components, " + v.id + " has " + std::to_string(v.dimension()));
  }
  if (u.radicand() != v.radicand()) {
    throw ModelError("ring mismatch between " + u.id + " and " + v.id);
  }
}

}  // namespace

ExactScalar inner_product(const RayVector& u, const RayVector& v) {
  check_compatible(u, v);
  ExactScalar sum = ExactScalar::integer(0, u.radicand());
  for (std::size_t i = 0; i < u.dimension(); ++i) sum += u.components[i] * v.components[i];
  return sum;
}

bool same_ray(const RayVector& u, const RayVector& v) {
  check_compatible(u, v);
  if (u.is_zero() || v.is_zero()) return false;
  // Parallel iff every 2x2 minor u_i v_j - u_j v_i vanishes.
  const std::size_t d = u.dimension();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (!(u.components[i] * v.components[j] - u.components[j] * v.components[i]).is_zero()) {
        return false;
      }
    }
  }
  return true;
}

KsSet::KsSet(std::string name, int dimension, std::int64_t radicand, std::vector<RayVector> vectors,
             std::vector<Context> contexts, std::optional<std::uint64_t> m_override)
    : name_(std::move(name)),
      dimension_(dimension),
      radicand_(radicand),
      vectors_(std::move(vectors)),
      contexts_(std::move(contexts)),
      m_override_(m_override) {
  if (dimension_ < 3) throw ModelError("dimension must be at least 3");
  if (!is_square_free(radicand_)) throw ModelError("field radicand must be square-free and positive");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    const RayVector& v = vectors_[i];
    if (v.dimension() != static_cast<std::size_t>(dimension_)) {
      throw ModelError("vector " + v.id + " has " + std::to_string(v.dimension()) +
                       " components, expected " + std::to_string(dimension_));
    }
    for (const ExactScalar& c : v.components) {
      if (c.radicand() != radicand_) throw ModelError("vector " + v.id + " is not in the set's ring");
    }
    if (!index_.emplace(v.id, i).second) throw ModelError("duplicate vector id " + v.id);
  }
  for (std::size_t c = 0; c < contexts_.size(); ++c) {
    const Context& ctx = contexts_[c];
    if (ctx.members.size() != static_cast<std::size_t>(dimension_)) {
      throw ModelError("context " + std::to_string(c) + " has " + std::to_string(ctx.members.size()) +
                       " members, expected " + std::to_string(dimension_));
    }
    for (std::size_t m : ctx.members) {
      if (m >= vectors_.size()) throw ModelError("context " + std::to_string(c) + " references a missing vector");
    }
  }
}

std::optional<std::size_t> KsSet::find_vector(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const KsSet& lhs, const KsSet& rhs) {
  if (lhs.name_ != rhs.name_ || lhs.dimension_ != rhs.dimension_ || lhs.radicand_ != rhs.radicand_ ||
      lhs.m_override_ != rhs.m_override_ || lhs.vectors_.size() != rhs.vectors_.size() ||
      lhs.contexts_.size() != rhs.contexts_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < lhs.vectors_.size(); ++i) {
    if (lhs.vectors_[i].id != rhs.vectors_[i].id ||
        lhs.vectors_[i].components != rhs.vectors_[i].components) {
      return false;
    }
  }
  for (std::size_t c = 0; c < lhs.contexts_.size(); ++c) {
    if (lhs.contexts_[c].members != rhs.contexts_[c].members) return false;
  }
  return true;
}

SetStats build_stats(const KsSet& set) {
  SetStats stats;
  stats.n = set.vectors().size();
  stats.N = set.contexts().size();
  stats.multiplicities.assign(stats.n, 0);

  std::vector<std::vector<std::size_t>> containing(stats.n);
  for (std::size_t c = 0; c < stats.N; ++c) {
    for (std::size_t v : set.context(c).members) {
      // A context listing a vector twice is a validation error; count it once.
      if (containing[v].empty() || containing[v].back() != c) containing[v].push_back(c);
    }
  }
  for (std::size_t v = 0; v < stats.n; ++v) {
    const auto& ctxs = containing[v];
    stats.multiplicities[v] = ctxs.size();
    for (std::size_t a = 0; a < ctxs.size(); ++a) {
      for (std::size_t b = a + 1; b < ctxs.size(); ++b) stats.connections.push_back({v, ctxs[a], ctxs[b]});
    }
  }
  stats.M_all_pairs = stats.connections.size();
  stats.m_overridden = set.m_override().has_value();
  stats.M = set.m_override().value_or(stats.M_all_pairs);
  return stats;
}

}  // namespace ksi
