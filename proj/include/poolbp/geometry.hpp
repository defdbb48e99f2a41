#pragma once

#include <cstdint>

#include "poolbp/field.hpp"
#include "poolbp/incidence_matrix.hpp"

namespace poolbp {

// Point (y0, y1, y2) of AG(3, q).
struct AffinePoint {
  FieldElement y0;
  FieldElement y1;
  FieldElement y2;

  friend bool operator==(const AffinePoint&, const AffinePoint&) = default;
};

// The line {(t, c + a t, d + b t) : t in F_q}. Every such line crosses each
// plane y0 = const exactly once, and these are all the lines that do.
struct TransversalLine {
  FieldElement a;
  FieldElement b;
  FieldElement c;
  FieldElement d;

  std::uint32_t modulus() const noexcept { return a.modulus(); }

  /// Lexicographic rank of (a, b, c, d) in [0, q^4); this is the item index.
  std::uint32_t index() const noexcept;
  static TransversalLine from_index(std::uint32_t index, std::uint32_t q);
};

/// Intersection of `line` with the plane y0 = f_i, where f_i is the integer i.
AffinePoint line_point_on_plane(const TransversalLine& line, std::uint32_t plane);

/// Row index of a point within its plane matrix: y1 * q + y2.
inline std::uint32_t plane_row_index(const AffinePoint& p) {
  return p.y1.value() * p.y1.modulus() + p.y2.value();
}

/// q^2 x q^4 point-line incidence matrix M_i of plane y0 = f_i. Rows are the
/// points (y1, y2) and columns the lines (a, b, c, d), both in lexicographic
/// order.
IncidenceMatrix plane_incidence(std::uint32_t q, std::uint32_t plane);

}  // namespace poolbp
