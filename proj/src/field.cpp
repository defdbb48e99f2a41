#include "poolbp/field.hpp"

#include <string>

#include "poolbp/errors.hpp"

namespace poolbp {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldElement::FieldElement(std::uint64_t value, std::uint32_t q) : value_(0), q_(q) {
  if (!is_prime(q)) throw ValidationError("field modulus " + std::to_string(q) + " is not prime");
  value_ = static_cast<std::uint32_t>(value % q);
}

void FieldElement::require_same_field(const FieldElement& other) const {
  if (q_ != other.q_) {
    throw ValidationError("field elements from F_" + std::to_string(q_) + " and F_" +
                          std::to_string(other.q_) + " cannot be combined");
  }
}

FieldElement FieldElement::operator+(const FieldElement& other) const {
  require_same_field(other);
  std::uint64_t s = std::uint64_t{value_} + other.value_;
  return {static_cast<std::uint32_t>(s % q_), q_, Unchecked{}};
}

FieldElement FieldElement::operator-(const FieldElement& other) const {
  require_same_field(other);
  std::uint64_t s = std::uint64_t{value_} + q_ - other.value_;
  return {static_cast<std::uint32_t>(s % q_), q_, Unchecked{}};
}

FieldElement FieldElement::operator*(const FieldElement& other) const {
  require_same_field(other);
  std::uint64_t p = std::uint64_t{value_} * other.value_;
  return {static_cast<std::uint32_t>(p % q_), q_, Unchecked{}};
}

FieldElement FieldElement::operator-() const {
  return {value_ == 0 ? 0 : q_ - value_, q_, Unchecked{}};
}

FieldElement FieldElement::inverse() const {
  if (value_ == 0) throw ValidationError("zero has no multiplicative inverse");
  // Fermat: x^(q-2) = x^-1 in F_q.
  std::uint64_t result = 1;
  std::uint64_t base = value_;
  for (std::uint32_t e = q_ - 2; e > 0; e >>= 1) {
    if (e & 1u) result = result * base % q_;
    base = base * base % q_;
  }
  return {static_cast<std::uint32_t>(result), q_, Unchecked{}};
}

}  // namespace poolbp
