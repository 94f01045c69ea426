#include <doctest.h>

#include <random>

#include "ksi/exact_scalar.hpp"
#include "ksi/model.hpp"
#include "ksi/set_format.hpp"
#include "test_support.hpp"

using namespace ksi;
using ksi::testing::ray;

namespace {

ExactScalar random_scalar(std::mt19937_64& rng, std::int64_t k) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6);
  Rational a(num(rng), den(rng));
  Rational b = k == 1 ? Rational(0) : Rational(num(rng), den(rng));
  return ExactScalar(a, b, k);
}

RayVector random_ray(std::mt19937_64& rng, std::size_t d, std::int64_t k) {
  RayVector v{"r", {}};
  do {
    v.components.clear();
    for (std::size_t i = 0; i < d; ++i) v.components.push_back(random_scalar(rng, k));
  } while (v.is_zero());
  return v;
}

}  // namespace

TEST_CASE("exact scalar ring arithmetic") {
  const ExactScalar one_plus(Rational(1), Rational(1), 2);
  const ExactScalar one_minus(Rational(1), Rational(-1), 2);
  CHECK((one_plus * one_minus) == ExactScalar::integer(-1, 2));
  CHECK((one_plus + one_minus) == ExactScalar::integer(2, 2));
  CHECK((one_plus - one_plus).is_zero());

  const ExactScalar half(Rational(1, 2), Rational(3, 4), 5);
  CHECK(half.to_string() == "1/2:3/4");
  CHECK(ExactScalar::integer(-3).to_string() == "-3");
  CHECK(half.to_double() == doctest::Approx(0.5 + 0.75 * 2.2360679775));

  // (a+b√k)(c+e√k) = (ac+bek) + (ae+bc)√k
  const ExactScalar x(Rational(2, 3), Rational(-1, 2), 3);
  const ExactScalar y(Rational(5), Rational(1, 3), 3);
  const ExactScalar product = x * y;
  CHECK(product.rational_part() == Rational(2, 3) * 5 + Rational(-1, 2) * Rational(1, 3) * 3);
  CHECK(product.surd_part() == Rational(2, 3) * Rational(1, 3) + Rational(-1, 2) * 5);
}

TEST_CASE("exact scalar rejects bad rings") {
  CHECK_THROWS_AS(ExactScalar(Rational(1), Rational(1), 1), std::invalid_argument);
  CHECK_THROWS_AS(ExactScalar(Rational(1), Rational(0), 4), std::invalid_argument);
  CHECK_THROWS_AS(ExactScalar(Rational(1), Rational(0), 0), std::invalid_argument);
  CHECK_THROWS_AS(ExactScalar::integer(1, 2) + ExactScalar::integer(1, 3), std::invalid_argument);
  CHECK(is_square_free(1));
  CHECK(is_square_free(30));
  CHECK_FALSE(is_square_free(12));
}

TEST_CASE("inner product examples") {
  CHECK(inner_product(ray("u", {1, 0, 1}), ray("v", {1, 0, -1})).is_zero());
  CHECK(inner_product(ray("u", {1, 0, 0}), ray("v", {1, 0, 0})) == ExactScalar::integer(1));

  // 1-dimensional (1+√2)·(1−√2) = −1
  RayVector a{"a", {ExactScalar(Rational(1), Rational(1), 2)}};
  RayVector b{"b", {ExactScalar(Rational(1), Rational(-1), 2)}};
  CHECK(inner_product(a, b) == ExactScalar::integer(-1, 2));

  CHECK_THROWS_AS(inner_product(ray("u", {1, 0, 0}), ray("v", {1, 0})), ModelError);
  CHECK_THROWS_AS(inner_product(ray("u", {1, 0, 0}), ray("v", {1, 0, 0}, 2)), ModelError);
}

TEST_CASE("inner product is symmetric and bilinear") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t k = trial % 2 == 0 ? 1 : 2;
    const RayVector u = random_ray(rng, 4, k), v = random_ray(rng, 4, k), w = random_ray(rng, 4, k);
    const ExactScalar s = random_scalar(rng, k);
    CHECK(inner_product(u, v) == inner_product(v, u));
    RayVector combo{"c", {}};
    for (std::size_t i = 0; i < 4; ++i) combo.components.push_back(s * u.components[i] + v.components[i]);
    CHECK(inner_product(combo, w) == s * inner_product(u, w) + inner_product(v, w));
  }
}

TEST_CASE("same_ray examples") {
  CHECK(same_ray(ray("a", {1, 1, 0}), ray("b", {2, 2, 0})));
  CHECK_FALSE(same_ray(ray("a", {1, 1, 0}), ray("b", {1, -1, 0})));
  CHECK(same_ray(ray("a", {0, 0, 1}), ray("b", {0, 0, -3})));
  CHECK_FALSE(same_ray(ray("a", {0, 0, 0}), ray("b", {0, 0, 0})));

  // (1, √2) and (√2, 2) differ by the factor √2.
  RayVector p{"p", {ExactScalar::integer(1, 2), ExactScalar(Rational(0), Rational(1), 2)}};
  RayVector q{"q", {ExactScalar(Rational(0), Rational(1), 2), ExactScalar::integer(2, 2)}};
  CHECK(same_ray(p, q));
}

TEST_CASE("same_ray is an equivalence relation on sampled rays") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t k = trial % 3 == 0 ? 2 : 1;
    const RayVector u = random_ray(rng, 3, k);
    ExactScalar s1, s2;
    do s1 = random_scalar(rng, k); while (s1.is_zero());
    do s2 = random_scalar(rng, k); while (s2.is_zero());
    RayVector v{"v", {}}, w{"w", {}};
    for (const auto& c : u.components) {
      v.components.push_back(s1 * c);
      w.components.push_back(s2 * c);
    }
    CHECK(same_ray(u, u));
    CHECK(same_ray(u, v) == same_ray(v, u));
    CHECK(same_ray(u, v));
    CHECK(same_ray(v, w));
    CHECK(same_ray(u, w));
    const RayVector other = random_ray(rng, 3, k);
    if (same_ray(u, other) && same_ray(other, v)) CHECK(same_ray(u, v));
    CHECK(same_ray(u, other) == same_ray(other, u));
  }
}

TEST_CASE("KsSet constructor checks shape") {
  std::vector<RayVector> vs = {ray("a", {1, 0, 0}), ray("b", {0, 1, 0}), ray("c", {0, 0, 1})};
  CHECK_NOTHROW(KsSet("t", 3, 1, vs, {Context{{0, 1, 2}}}));
  CHECK_THROWS_AS(KsSet("t", 2, 1, vs, {}), ModelError);
  CHECK_THROWS_AS(KsSet("t", 3, 1, vs, {Context{{0, 1}}}), ModelError);
  CHECK_THROWS_AS(KsSet("t", 3, 1, vs, {Context{{0, 1, 3}}}), ModelError);
  auto dup = vs;
  dup[2].id = "a";
  CHECK_THROWS_AS(KsSet("t", 3, 1, dup, {}), ModelError);
  CHECK_THROWS_AS(KsSet("t", 3, 1, {ray("a", {1, 0})}, {}), ModelError);
  CHECK_THROWS_AS(KsSet("t", 3, 2, vs, {}), ModelError);  // components in Q, set in Q(√2)
}

TEST_CASE("build_stats examples") {
  const SetStats one = build_stats(parse_set(ksi::testing::kTriadText));
  CHECK(one.n == 3);
  CHECK(one.N == 1);
  CHECK(one.M == 0);

  const SetStats two = build_stats(parse_set(ksi::testing::kTwoTriadText));
  CHECK(two.n == 5);
  CHECK(two.N == 2);
  CHECK(two.M == 1);
  REQUIRE(two.connections.size() == 1);
  CHECK(two.connections[0] == Connection{0, 0, 1});

  const SetStats cabello = build_stats(load_catalog("cabello18"));
  CHECK(cabello.n == 18);
  CHECK(cabello.N == 9);
  CHECK(cabello.M == 18);
}

TEST_CASE("M override leaves the connection list intact") {
  const KsSet set = load_catalog("kernaghan-peres36");
  const SetStats stats = build_stats(set);
  CHECK(stats.m_overridden);
  CHECK(stats.M == 72);
  CHECK(stats.M_all_pairs == 76);
  CHECK(stats.connections.size() == 76);
}

TEST_CASE("stats invariants against a brute-force count") {
  for (const auto& name : ksi::testing::ks_catalog()) {
    CAPTURE(name);
    const KsSet set = load_catalog(name);
    const SetStats stats = build_stats(set);
    std::size_t sum_k = 0;
    for (auto k : stats.multiplicities) sum_k += k;
    CHECK(sum_k == stats.N * static_cast<std::size_t>(set.dimension()));

    std::size_t triples = 0;
    for (std::size_t v = 0; v < stats.n; ++v) {
      for (std::size_t c1 = 0; c1 < stats.N; ++c1) {
        for (std::size_t c2 = c1 + 1; c2 < stats.N; ++c2) {
          triples += set.context(c1).contains(v) && set.context(c2).contains(v);
        }
      }
    }
    CHECK(stats.M_all_pairs == triples);
    CHECK(stats.connections.size() == triples);
  }
}
