#pragma once

#include <cstdint>

namespace poolbp {

bool is_prime(std::uint32_t n);

/// Element of the prime field F_q, stored as its canonical residue in [0, q).
///
/// Operands of a binary operation must share the modulus; mixing fields
/// throws ValidationError, as does inverting zero.
class FieldElement {
 public:
  /// Reduces `value` mod `q`. Throws ValidationError unless q is prime.
  FieldElement(std::uint64_t value, std::uint32_t q);

  std::uint32_t value() const noexcept { return value_; }
  std::uint32_t modulus() const noexcept { return q_; }

  FieldElement operator+(const FieldElement& other) const;
  FieldElement operator-(const FieldElement& other) const;
  FieldElement operator*(const FieldElement& other) const;
  FieldElement operator-() const;
  FieldElement inverse() const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  struct Unchecked {};
  FieldElement(std::uint32_t value, std::uint32_t q, Unchecked) noexcept : value_(value), q_(q) {}
  void require_same_field(const FieldElement& other) const;

  std::uint32_t value_;
  std::uint32_t q_;
};

}  // namespace poolbp
