#include <doctest.h>

#include <set>

#include "poolbp/errors.hpp"
#include "poolbp/field.hpp"
#include "poolbp/geometry.hpp"

using namespace poolbp;

TEST_CASE("prime field arithmetic") {
  CHECK((FieldElement(3, 7) + FieldElement(5, 7)).value() == 1);
  CHECK(FieldElement(3, 7).inverse().value() == 5);
  CHECK((FieldElement(1, 2) + FieldElement(1, 2)).value() == 0);
  CHECK((FieldElement(2, 5) - FieldElement(4, 5)).value() == 3);
  CHECK((-FieldElement(0, 3)).value() == 0);
  CHECK(FieldElement(12, 7).value() == 5);
}

TEST_CASE("field axioms hold exhaustively for small primes") {
  for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
    for (std::uint32_t x = 0; x < q; ++x) {
      const FieldElement fx(x, q);
      CHECK((fx + (-fx)).value() == 0);
      if (x != 0) CHECK((fx * fx.inverse()).value() == 1);
      for (std::uint32_t y = 0; y < q; ++y) {
        const FieldElement fy(y, q);
        CHECK(fx + fy == fy + fx);
        CHECK(fx * fy == fy * fx);
        CHECK((fx - fy) + fy == fx);
        for (std::uint32_t z = 0; z < q; ++z) {
          const FieldElement fz(z, q);
          CHECK(fx * (fy + fz) == fx * fy + fx * fz);
        }
      }
    }
  }
}

TEST_CASE("field errors") {
  CHECK_THROWS_AS(FieldElement(1, 4), ValidationError);
  CHECK_THROWS_AS(FieldElement(1, 1), ValidationError);
  CHECK_THROWS_AS(FieldElement(0, 7).inverse(), ValidationError);
  CHECK_THROWS_AS(FieldElement(1, 7) + FieldElement(1, 5), ValidationError);
  CHECK_THROWS_AS(FieldElement(1, 7) * FieldElement(1, 3), ValidationError);
}

TEST_CASE("is_prime") {
  std::set<std::uint32_t> primes;
  for (std::uint32_t n = 0; n < 60; ++n) {
    if (is_prime(n)) primes.insert(n);
  }
  CHECK(primes == std::set<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59});
}

namespace {
TransversalLine line(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d, std::uint32_t q) {
  return {FieldElement(a, q), FieldElement(b, q), FieldElement(c, q), FieldElement(d, q)};
}
AffinePoint point(std::uint32_t y0, std::uint32_t y1, std::uint32_t y2, std::uint32_t q) {
  return {FieldElement(y0, q), FieldElement(y1, q), FieldElement(y2, q)};
}
}  // namespace

TEST_CASE("line meets plane at the substituted point") {
  CHECK(line_point_on_plane(line(0, 0, 0, 0, 7), 3) == point(3, 0, 0, 7));
  CHECK(line_point_on_plane(line(1, 2, 3, 4, 7), 2) == point(2, 5, 1, 7));
  CHECK(line_point_on_plane(line(2, 1, 1, 0, 3), 2) == point(2, 2, 2, 3));
  CHECK_THROWS_AS(line_point_on_plane(line(0, 0, 0, 0, 3), 3), ValidationError);
}

TEST_CASE("line index is a bijection onto [0, q^4)") {
  for (std::uint32_t q : {2u, 3u}) {
    for (std::uint32_t j = 0; j < q * q * q * q; ++j) {
      CHECK(TransversalLine::from_index(j, q).index() == j);
    }
  }
  CHECK(line(1, 2, 3, 4, 7).index() == ((1 * 7 + 2) * 7 + 3) * 7 + 4);
}

TEST_CASE("plane matrices: row weight q^2, column weight 1") {
  for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
    for (std::uint32_t i = 0; i < q; ++i) {
      const auto m = plane_incidence(q, i);
      REQUIRE(m.n_rows() == q * q);
      REQUIRE(m.n_cols() == q * q * q * q);
      for (std::size_t r = 0; r < m.n_rows(); ++r) CHECK(m.row(r).size() == q * q);
      for (std::size_t c = 0; c < m.n_cols(); ++c) CHECK(m.col(c).size() == 1);
    }
  }
  const auto m = plane_incidence(2, 0);
  CHECK(m.n_rows() == 4);
  CHECK(m.n_cols() == 16);
  // The zero line passes through the origin of plane 0.
  CHECK(m.col(0).size() == 1);
  CHECK(m.col(0)[0] == 0);
  CHECK_THROWS_AS(plane_incidence(4, 0), ValidationError);
  CHECK_THROWS_AS(plane_incidence(3, 5), ValidationError);
}

TEST_CASE("plane matrices agree with line_point_on_plane") {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    for (std::uint32_t i = 0; i < q; ++i) {
      const auto m = plane_incidence(q, i);
      for (std::uint32_t j = 0; j < q * q * q * q; ++j) {
        const auto p = line_point_on_plane(TransversalLine::from_index(j, q), i);
        for (std::uint32_t r = 0; r < q * q; ++r) {
          CHECK(m.at(r, j) == (r == plane_row_index(p)));
        }
      }
    }
  }
}

TEST_CASE("two distinct transversal lines share at most one point") {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const std::uint32_t n = q * q * q * q;
    std::vector<std::vector<AffinePoint>> pts(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      for (std::uint32_t i = 0; i < q; ++i) pts[j].push_back(line_point_on_plane(TransversalLine::from_index(j, q), i));
    }
    bool ok = true;
    for (std::uint32_t u = 0; u < n && ok; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        int common = 0;
        // Both lines have exactly one point per plane, so compare plane by plane.
        for (std::uint32_t i = 0; i < q; ++i) common += pts[u][i] == pts[v][i];
        if (common > 1) {
          ok = false;
          break;
        }
      }
    }
    CHECK_MESSAGE(ok, "q = " << q);
  }
}
