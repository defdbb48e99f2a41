#include "poolbp/geometry.hpp"

#include <string>
#include <vector>

#include "poolbp/errors.hpp"

namespace poolbp {

namespace {

void require_plane(std::uint32_t q, std::uint32_t plane) {
  if (plane >= q) {
    throw ValidationError("plane index " + std::to_string(plane) + " outside [0, " +
                          std::to_string(q) + ")");
  }
}

}  // namespace

std::uint32_t TransversalLine::index() const noexcept {
  const std::uint32_t q = modulus();
  return ((a.value() * q + b.value()) * q + c.value()) * q + d.value();
}

TransversalLine TransversalLine::from_index(std::uint32_t index, std::uint32_t q) {
  if (!is_prime(q)) throw ValidationError("q = " + std::to_string(q) + " is not prime");
  if (index >= q * q * q * q) throw ValidationError("line index out of range");
  const std::uint32_t d = index % q;
  index /= q;
  const std::uint32_t c = index % q;
  index /= q;
  const std::uint32_t b = index % q;
  const std::uint32_t a = index / q;
  return {FieldElement(a, q), FieldElement(b, q), FieldElement(c, q), FieldElement(d, q)};
}

AffinePoint line_point_on_plane(const TransversalLine& line, std::uint32_t plane) {
  const std::uint32_t q = line.modulus();
  require_plane(q, plane);
  const FieldElement t(plane, q);
  return {t, line.c + line.a * t, line.d + line.b * t};
}

IncidenceMatrix plane_incidence(std::uint32_t q, std::uint32_t plane) {
  if (!is_prime(q)) throw ValidationError("q = " + std::to_string(q) + " is not prime");
  require_plane(q, plane);
  const std::uint32_t n_lines = q * q * q * q;
  std::vector<std::vector<Index>> rows(q * q);
  for (auto& r : rows) r.reserve(q * q);
  for (std::uint32_t j = 0; j < n_lines; ++j) {
    const auto p = line_point_on_plane(TransversalLine::from_index(j, q), plane);
    rows[plane_row_index(p)].push_back(j);
  }
  const std::size_t n_points = rows.size();
  return IncidenceMatrix(n_points, n_lines, std::move(rows));
}

}  // namespace poolbp
