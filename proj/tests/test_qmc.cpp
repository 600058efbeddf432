#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/random/sobol.hpp>

#include "vbsa/qmc.hpp"

using namespace vbsa;

TEST_CASE("first Sobol' rows skip the origin") {
  const auto m = sobol_block(3, 2);
  CHECK(m.rows() == 4);
  for (std::size_t j = 0; j < 3; ++j) CHECK(m(0, j) == 0.5);
  // second point of every Joe-Kuo dimension is 0.25 or 0.75
  for (std::size_t j = 0; j < 3; ++j) CHECK((m(1, j) == 0.25 || m(1, j) == 0.75));
}

TEST_CASE("Sobol' block matches Boost's generator after the origin") {
  constexpr std::size_t d = 40;
  const auto m = sobol_block(d, 9);
  boost::random::sobol gen(d);
  std::vector<double> point(d);
  auto next = [&] {
    for (double& v : point) v = static_cast<double>(gen()) * 0x1p-64;
  };
  next();
  bool origin = std::all_of(point.begin(), point.end(), [](double v) { return v == 0.0; });
  if (!origin) {
    // some Boost versions already skip the origin
    for (std::size_t j = 0; j < d; ++j) REQUIRE(point[j] == m(0, j));
  }
  for (std::size_t i = origin ? 0 : 1; i < m.rows(); ++i) {
    next();
    for (std::size_t j = 0; j < d; ++j) REQUIRE(point[j] == doctest::Approx(m(i, j)).epsilon(1e-9));
  }
}

TEST_CASE("determinism and nesting") {
  CHECK(sobol_block(7, 6) == sobol_block(7, 6));
  for (std::size_t d : {1, 6, 36})
    for (unsigned p : {1u, 5u, 10u}) CHECK(sobol_block(d, p) == sobol_block(d, p + 1).head(std::size_t{1} << p));
}

TEST_CASE("each column of a 36-dimension block is balanced around 1/2") {
  for (unsigned p = 6; p <= 10; ++p) {
    const auto m = sobol_block(36, p);
    for (std::size_t j = 0; j < 36; ++j) {
      std::size_t below = 0;
      for (std::size_t i = 0; i < m.rows(); ++i) below += m(i, j) < 0.5;
      const double frac = static_cast<double>(below) / static_cast<double>(m.rows());
      CHECK(std::abs(frac - 0.5) <= std::ldexp(1.0, 1 - static_cast<int>(p)));
    }
  }
}

TEST_CASE("sobol_block errors") {
  CHECK_THROWS_AS(sobol_block(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(sobol_block(DirectionNumberTable::joe_kuo().max_dimension() + 1, 3), std::out_of_range);
  CHECK_THROWS_AS(sobol_block(2, 40), std::overflow_error);
  CHECK(DirectionNumberTable::joe_kuo().max_dimension() >= 64);
}

// Squared L2-star discrepancy of one 1-D point t is the integral over y of
// (1[t <= y] - y)^2; midpoint rule on a fine grid.
double discrepancy_by_quadrature_1d(double t) {
  constexpr int n = 200000;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    const double y = (i + 0.5) / n;
    const double local = (t <= y ? 1.0 : 0.0) - y;
    s += local * local;
  }
  return std::sqrt(s / n);
}

TEST_CASE("discrepancy of a single point") {
  const SampleMatrix one(1, 1, {0.5});
  const double d = l2_star_discrepancy(one);
  CHECK(d == doctest::Approx(std::sqrt(1.0 / 3 - 0.75 + 0.5)).epsilon(1e-14));
  CHECK(d == doctest::Approx(0.2887).epsilon(1e-3));
  CHECK(d == doctest::Approx(discrepancy_by_quadrature_1d(0.5)).epsilon(1e-4));
  CHECK(l2_star_discrepancy(SampleMatrix(1, 1, {0.2})) ==
        doctest::Approx(discrepancy_by_quadrature_1d(0.2)).epsilon(1e-4));
}

TEST_CASE("discrepancy of a pooled 128-point Sobol' set") {
  // 128 points in 6 dims: printed 0.0065
  CHECK(std::abs(l2_star_discrepancy(sobol_block(6, 7)) - 0.0065) / 0.0065 < 0.25);
}

TEST_CASE("discrepancy decreases with block size and ignores coordinate order") {
  double prev = 1.0;
  for (unsigned p = 3; p <= 10; ++p) {
    const double d = l2_star_discrepancy(sobol_block(6, p));
    CHECK(d < prev);
    prev = d;
  }
  const auto m = sobol_block(6, 6);
  const auto perm = ColumnPermutation::draw(6, 11);
  CHECK(l2_star_discrepancy(permute_columns(m, perm)) == doctest::Approx(l2_star_discrepancy(m)).epsilon(1e-12));
}

TEST_CASE("discrepancy errors") {
  CHECK_THROWS_AS(l2_star_discrepancy(SampleMatrix()), std::invalid_argument);
  CHECK_THROWS_AS(l2_star_discrepancy(SampleMatrix(1, 2, {0.5, 1.5})), std::invalid_argument);
}

TEST_CASE("column permutations") {
  const auto p = ColumnPermutation::draw(36, 42);
  std::vector<std::size_t> sorted(p.image().begin(), p.image().end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(36);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);
  CHECK(p.seed() == 42);
  const auto same = ColumnPermutation::draw(36, 42), other = ColumnPermutation::draw(36, 43);
  CHECK(std::equal(p.image().begin(), p.image().end(), same.image().begin(), same.image().end()));
  CHECK_FALSE(std::equal(p.image().begin(), p.image().end(), other.image().begin(), other.image().end()));

  const auto m = sobol_block(4, 3);
  const ColumnPermutation rev({3, 2, 1, 0});
  const auto r = permute_columns(m, rev);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(r(i, j) == m(i, 3 - j));
  CHECK_THROWS_AS(ColumnPermutation({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(permute_columns(m, ColumnPermutation::identity(3)), std::invalid_argument);
}

TEST_CASE("matrix helpers") {
  const auto m = sobol_block(4, 2);
  const auto s = m.column_slice(1, 2, MatrixRole::base_matrix(1));
  CHECK(s.cols() == 2);
  CHECK(s(3, 0) == m(3, 1));
  CHECK(s.role().label() == "B");
  CHECK_THROWS_AS(m.head(5), std::out_of_range);
  CHECK_THROWS_AS(m.column_slice(3, 2), std::out_of_range);
  const std::vector<SampleMatrix> parts{m, m};
  CHECK(pool_rows(parts).rows() == 8);
  CHECK(matrix_letter(0) == "A");
  CHECK(matrix_letter(2) == "C");
  CHECK(MatrixRole::hybrid(0, 1, 3).label() == "A_B(3)");

  std::ostringstream out;
  write_csv(out, SampleMatrix(1, 2, {0.5, 0.1}));
  CHECK(out.str() == "0.5,0.10000000000000001\n");
}
