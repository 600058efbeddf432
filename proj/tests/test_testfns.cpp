#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vbsa/qmc.hpp"
#include "vbsa/testfns.hpp"

using namespace vbsa;

namespace {

const Family kAll[] = {Family::A1, Family::A2, Family::A3, Family::B1,
                       Family::B2, Family::B3, Family::C1, Family::C2};

double f(const FunctionSpec& fn, std::vector<double> x) { return evaluate(fn, x); }

}  // namespace

TEST_CASE("point evaluations") {
  CHECK(f(FunctionSpec::make(Family::C1, 2), {0.5, 0.5}) == 0.0);
  CHECK(f(FunctionSpec::make(Family::C2, 3), {0.5, 0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(f(FunctionSpec::make(Family::A1, 2), {1, 1}) == 0.0);
  CHECK(f(FunctionSpec::make(Family::B1, 2), {0.5, 0.5}) == doctest::Approx(1.0));
  CHECK(f(FunctionSpec::make(Family::B2, 2), {1, 1}) == doctest::Approx(2.25));
  CHECK_THROWS_AS(f(FunctionSpec::make(Family::C2, 3), {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("C1 is the G function with zero coefficients") {
  const auto c1 = FunctionSpec::make(Family::C1, 4);
  const auto g = FunctionSpec::g_function({0, 0, 0, 0});
  const auto pts = sobol_block(4, 8);
  for (std::size_t i = 0; i < pts.rows(); ++i)
    CHECK(std::abs(evaluate(c1, pts.row(i)) - evaluate(g, pts.row(i))) <= 1e-15);
}

TEST_CASE("closed-form indices") {
  const auto c1 = analytic_indices(FunctionSpec::make(Family::C1, 2));
  CHECK(c1.T[0] == doctest::Approx(4.0 / 7));
  CHECK(c1.T[1] == doctest::Approx(4.0 / 7));
  CHECK(c1.S[0] == doctest::Approx(3.0 / 7));

  const auto b3 = analytic_indices(FunctionSpec::make(Family::B3, 6));
  for (double t : b3.T) CHECK(t == doctest::Approx(0.1692).epsilon(1e-3));

  // f = x1 (x2 - 1)
  const auto a1 = analytic_indices(FunctionSpec::make(Family::A1, 2));
  CHECK(a1.V == doctest::Approx(7.0 / 144));
  CHECK(a1.T[0] == doctest::Approx(4.0 / 7));
  CHECK(a1.T[1] == doctest::Approx(4.0 / 7));
  CHECK(a1.S[0] == doctest::Approx(3.0 / 7));
  CHECK(a1.S[1] == doctest::Approx(3.0 / 7));
}

TEST_CASE("A1 at k = 6 against exact rational values") {
  // obtained by symbolic integration of the alternating sum
  const auto a1 = analytic_indices(FunctionSpec::make(Family::A1, 6));
  CHECK(a1.V == doctest::Approx(164143.0 / 2985984).epsilon(1e-14));
  const double T[] = {17344.0 / 23449, 43648.0 / 164143, 1792.0 / 23449,
                      5632.0 / 164143, 1024.0 / 164143,  1024.0 / 164143};
  const double S[] = {0.6528636615633929, 0.17913039240174725, 0.03701041165325356,
                      0.013323748195171283, 0.0014804164661301425, 0.0014804164661301425};
  for (int j = 0; j < 6; ++j) {
    CHECK(a1.T[j] == doctest::Approx(T[j]).epsilon(1e-13));
    CHECK(a1.S[j] == doctest::Approx(S[j]).epsilon(1e-13));
  }
}

TEST_CASE("index invariants for every family") {
  for (Family fam : kAll)
    for (std::size_t k : {1, 2, 3, 6, 9}) {
      CAPTURE(family_name(fam));
      CAPTURE(k);
      const auto idx = analytic_indices(FunctionSpec::make(fam, k));
      double sum_s = 0;
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(idx.S[j] >= 0.0);
        CHECK(idx.S[j] <= idx.T[j] + 1e-15);
        CHECK(idx.T[j] <= 1.0 + 1e-15);
        sum_s += idx.S[j];
      }
      CHECK(sum_s <= 1.0 + 1e-12);
      if (k == 1) {
        CHECK(idx.S[0] == doctest::Approx(1.0));
        CHECK(idx.T[0] == doctest::Approx(1.0));
      }
    }
}

TEST_CASE("importance structure of the families") {
  for (Family fam : {Family::A1, Family::A2, Family::A3}) {
    const auto t = analytic_indices(FunctionSpec::make(fam, 6)).T;
    CHECK(*std::max_element(t.begin(), t.end()) / *std::min_element(t.begin(), t.end()) > 10);
  }
  for (Family fam : {Family::B1, Family::B2, Family::B3, Family::C1, Family::C2}) {
    const auto t = analytic_indices(FunctionSpec::make(fam, 6)).T;
    for (double v : t) CHECK(std::abs(v - t[0]) <= 1e-12);
  }
  const auto g = analytic_indices(FunctionSpec::g_function({0, 1, 4.5, 9, 99, 99.5}));
  for (std::size_t j = 1; j < 6; ++j) CHECK(g.T[j] < g.T[j - 1]);
}

TEST_CASE("complement identity T_j V = V - V_{~j}") {
  for (Family fam : {Family::A2, Family::B1, Family::B2, Family::B3, Family::C1, Family::C2}) {
    const auto fn = FunctionSpec::make(fam, 4);
    const auto m = factor_moments(fn);
    const auto idx = analytic_indices(fn);
    for (std::size_t j = 0; j < 4; ++j) {
      // closed variance of E[f | X_{~j}] = prod_{l != j}(mu^2 + v) mu_j^2 - prod mu^2
      double with = 1, means = 1;
      for (std::size_t l = 0; l < 4; ++l) {
        means *= m[l].mean * m[l].mean;
        with *= l == j ? m[l].mean * m[l].mean : m[l].mean * m[l].mean + m[l].variance;
      }
      CHECK(idx.T[j] * idx.V == doctest::Approx(idx.V - (with - means)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(factor_moments(FunctionSpec::make(Family::A1, 3)), std::invalid_argument);
}

TEST_CASE("first-order plus expected conditional variance gives V, by conditional QMC at k = 2") {
  constexpr unsigned p = 10;
  const auto outer = sobol_block(2, p);
  const auto& inner = outer;
  const std::size_t n = outer.rows();
  for (Family fam : kAll) {
    const auto fn = FunctionSpec::make(fam, 2);
    const auto idx = analytic_indices(fn);
    for (std::size_t j = 0; j < 2; ++j) {
      // For each x_j on an outer grid, the conditional mean and variance over
      // x_{~j} from the inner sequence's other coordinate.
      double sum_mean = 0, sum_mean_sq = 0, sum_cond_var = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double cm = 0, cm2 = 0;
        for (std::size_t r = 0; r < n; ++r) {
          double x[2];
          x[j] = outer(i, 0);
          x[1 - j] = inner(r, 1);
          const double y = evaluate(fn, std::span<const double>(x, 2));
          cm += y;
          cm2 += y * y;
        }
        cm /= n;
        cm2 /= n;
        sum_mean += cm;
        sum_mean_sq += cm * cm;
        sum_cond_var += cm2 - cm * cm;
      }
      const double first = sum_mean_sq / n - (sum_mean / n) * (sum_mean / n);
      const double expected_cond = sum_cond_var / n;
      CAPTURE(family_name(fam));
      CHECK(std::abs(first + expected_cond - idx.V) / idx.V < 0.01);
      CHECK(std::abs(first / idx.V - idx.S[j]) < 0.01);
    }
  }
}

TEST_CASE("presets, names and validation") {
  CHECK(FunctionSpec::make(Family::A2, 6).a == std::vector<double>{0, 0.5, 3, 9, 99, 999});
  CHECK(FunctionSpec::make(Family::A2, 2).a == std::vector<double>{0, 0.5});
  CHECK(FunctionSpec::make(Family::A2, 7).a.back() == 999);
  CHECK(FunctionSpec::make(Family::A3, 6).a == std::vector<double>{1, 2, 4, 8, 16, 32});
  CHECK(FunctionSpec::make(Family::B3, 3).a == std::vector<double>{6.42, 6.42, 6.42});
  CHECK(parse_family("B2") == Family::B2);
  CHECK(parse_family("G") == Family::GCustom);
  CHECK_FALSE(parse_family("D1").has_value());
  CHECK_THROWS_AS(FunctionSpec::make(Family::GCustom, 3), std::invalid_argument);
  CHECK_THROWS_AS(FunctionSpec::g_function({1, -2}).validate(), std::invalid_argument);
  FunctionSpec bad = FunctionSpec::make(Family::A2, 3);
  bad.a.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(FunctionSpec::make(Family::C2, 0).validate(), std::invalid_argument);
}
