#include "ksi/exact_scalar.hpp"

#include <cmath>
#include <stdexcept>

namespace ksi {

bool is_square_free(std::int64_t k) {
  if (k < 1) return false;
  for (std::int64_t p = 2; p * p <= k; ++p) {
    if (k % (p * p) == 0) return false;
  }
  return true;
}

ExactScalar::ExactScalar(Rational rational_part, Rational surd_part, std::int64_t radicand)
    : rational_(rational_part), surd_(surd_part), radicand_(radicand) {
  if (!is_square_free(radicand)) {
    throw std::invalid_argument("ring radicand must be a positive square-free integer, got " +
                                std::to_string(radicand));
  }
  if (radicand == 1 && surd_.numerator() != 0) {
    throw std::invalid_argument("surd component is not allowed when the radicand is 1");
  }
}

ExactScalar ExactScalar::integer(std::int64_t value, std::int64_t radicand) {
  return ExactScalar(Rational(value), Rational(0), radicand);
}

double ExactScalar::to_double() const {
  return boost::rational_cast<double>(rational_) +
         boost::rational_cast<double>(surd_) * std::sqrt(static_cast<double>(radicand_));
}

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string ExactScalar::to_string() const {
  if (surd_.numerator() == 0) return ksi::to_string(rational_);
  return ksi::to_string(rational_) + ":" + ksi::to_string(surd_);
}

void ExactScalar::check_same_ring(const ExactScalar& other) const {
  if (radicand_ != other.radicand_) {
    throw std::invalid_argument("ring mismatch: sqrt " + std::to_string(radicand_) + " vs sqrt " +
                                std::to_string(other.radicand_));
  }
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar out = *this;
  out.rational_ = -out.rational_;
  out.surd_ = -out.surd_;
  return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& other) {
  check_same_ring(other);
  rational_ += other.rational_;
  surd_ += other.surd_;
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& other) {
  check_same_ring(other);
  rational_ -= other.rational_;
  surd_ -= other.surd_;
  return *this;
}

// (a + b√k)(c + e√k) = (ac + bek) + (ae + bc)√k
ExactScalar& ExactScalar::operator*=(const ExactScalar& other) {
  check_same_ring(other);
  const Rational a = rational_, b = surd_;
  const Rational& c = other.rational_;
  const Rational& e = other.surd_;
  rational_ = a * c + b * e * Rational(radicand_);
  surd_ = a * e + b * c;
  return *this;
}

bool operator==(const ExactScalar& lhs, const ExactScalar& rhs) {
  lhs.check_same_ring(rhs);
  return lhs.rational_ == rhs.rational_ && lhs.surd_ == rhs.surd_;
}

}  // namespace ksi
