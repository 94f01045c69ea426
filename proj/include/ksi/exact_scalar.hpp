// Exact numbers of the form a + b*sqrt(k) with rational a, b.
//
// A scalar belongs to the quadratic ring Q(sqrt k) for a fixed square-free
// radicand k. With k = 1 the surd part is always zero and the ring is Q.
// All comparisons are exact; nothing here touches floating point except
// to_double(), which exists for reporting only.
#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace ksi {

using Rational = boost::rational<std::int64_t>;

bool is_square_free(std::int64_t k);

class ExactScalar {
 public:
  ExactScalar() = default;
  explicit ExactScalar(Rational rational_part, Rational surd_part = 0, std::int64_t radicand = 1);
  static ExactScalar integer(std::int64_t value, std::int64_t radicand = 1);

  const Rational& rational_part() const { return rational_; }
  const Rational& surd_part() const { return surd_; }
  std::int64_t radicand() const { return radicand_; }

  bool is_zero() const { return rational_.numerator() == 0 && surd_.numerator() == 0; }
  double to_double() const;

  /// Canonical text: "p/q" or "p/q:r/s" (integers drop the "/1").
  std::string to_string() const;

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& other);
  ExactScalar& operator-=(const ExactScalar& other);
  ExactScalar& operator*=(const ExactScalar& other);

  friend ExactScalar operator+(ExactScalar lhs, const ExactScalar& rhs) { return lhs += rhs; }
  friend ExactScalar operator-(ExactScalar lhs, const ExactScalar& rhs) { return lhs -= rhs; }
  friend ExactScalar operator*(ExactScalar lhs, const ExactScalar& rhs) { return lhs *= rhs; }
  friend bool operator==(const ExactScalar& lhs, const ExactScalar& rhs);

 private:
  void check_same_ring(const ExactScalar& other) const;

  Rational rational_{0};
  Rational surd_{0};
  std::int64_t radicand_ = 1;
};

std::string to_string(const Rational& value);

}  // namespace ksi
