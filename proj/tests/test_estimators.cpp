#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "vbsa/designs.hpp"
#include "vbsa/estimators.hpp"
#include "vbsa/qmc.hpp"
#include "vbsa/testfns.hpp"

using namespace vbsa;

namespace {

using Model = std::function<double(std::span<const double>)>;

struct Case {
  Estimator e;
  std::size_t n;
};

const Case kCases[] = {{Estimator::Saltenis, 2},    {Estimator::GlenIsaacs, 2}, {Estimator::Symmetric, 2},
                       {Estimator::Multimatrix, 3}, {Estimator::Owen, 3},       {Estimator::Lamboni, 2},
                       {Estimator::Lamboni, 4},     {Estimator::Cyclic, 2}};

std::vector<SampleMatrix> scrambled_bases(std::size_t n, std::size_t k, unsigned p, std::uint64_t seed) {
  const std::size_t cols = std::max<std::size_t>(n, 1) * k;
  return base_matrices_from_pool(permute_columns(sobol_block(cols, p), ColumnPermutation::draw(cols, seed)),
                                 std::max<std::size_t>(n, 1), k);
}

EvaluationSet evaluate_plan(const EvaluationPlan& plan, const Model& f) {
  const auto pts = design_points(plan);
  std::vector<double> out(pts.rows());
  for (std::size_t i = 0; i < pts.rows(); ++i) out[i] = f(pts.row(i));
  return EvaluationSet::from_plan(plan, out);
}

TotalIndexEstimate run(const Case& c, std::size_t k, unsigned p, std::uint64_t seed, const Model& f) {
  const auto spec = design_for(c.e, std::size_t{1} << p, k, c.n);
  const auto bases = scrambled_bases(base_matrix_count(spec), k, p, seed);
  return estimate(c.e, evaluate_plan(assemble_plan(spec, bases), f));
}

std::string name(const Case& c) { return std::string(estimator_name(c.e)) + " n=" + std::to_string(c.n); }

}  // namespace

TEST_CASE("sample variance") {
  CHECK(sample_variance(std::vector<double>{3, 3, 3}) == 0.0);
  CHECK(sample_variance(std::vector<double>{0, 1}) == 0.25);
  CHECK(sample_variance(std::vector<double>{1, 2, 3}) == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(sample_variance(std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("Pearson correlation") {
  const std::vector<double> u{1, 2, 3}, v{1, 3, 2}, w{-1, -2, -3};
  CHECK(pearson_rho(u, u) == doctest::Approx(1.0));
  CHECK(pearson_rho(u, w) == doctest::Approx(-1.0));
  // covariance 1/2 over standard deviations sqrt(1) each, sample convention
  CHECK(pearson_rho(u, v) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(pearson_rho(u, std::vector<double>{2, 2, 2}), std::domain_error);
  CHECK_THROWS_AS(pearson_rho(u, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("hand instances") {
  SUBCASE("Saltenis numerator over two rows") {
    const EvaluationSet evals(1, {MatrixRole::base_matrix(0), MatrixRole::hybrid(0, 1, 1)}, {{0, 1}, {1, 0}});
    const auto t = saltenis_estimate(evals);
    CHECK(t.numerator[0] == 0.5);
    CHECK(t.variance == 0.25);
    CHECK(t.T[0] == 2.0);
    CHECK(t.effects_used[0] == 2);
  }
  SUBCASE("Owen correction term with one row") {
    const EvaluationSet evals(1,
                              {MatrixRole::base_matrix(0), MatrixRole::base_matrix(1), MatrixRole::hybrid(1, 0, 1),
                               MatrixRole::hybrid(2, 1, 1)},
                              {{1}, {2}, {3}, {0}});
    const auto t = owen_estimate(evals);
    // pooled variance of (1, 2) is 1/4; correction (2 - 0)(3 - 1) = 4
    CHECK(t.variance == 0.25);
    CHECK(t.numerator[0] == doctest::Approx(0.25 - 4.0));
  }
  SUBCASE("cyclic pairs wrap around") {
    const auto spec = DesignSpec::make(DesignKind::CyclicSingle, 2, 1);
    const std::vector<SampleMatrix> a{SampleMatrix(2, 1, {0.25, 0.75})};
    const auto t = cyclic_single_matrix_estimate(evaluate_plan(assemble_plan(spec, a), [](auto x) { return x[0]; }));
    CHECK(t.numerator[0] == doctest::Approx(0.125));
  }
  SUBCASE("Lamboni with three matrices, one row, one factor") {
    // base values 1, 4, 6; hybrid h_{m-q} values chosen by hand
    const double fb[3] = {1, 4, 6};
    const double fh[3][3] = {{0, 2, 3}, {5, 0, 7}, {8, 9, 0}};
    std::vector<MatrixRole> roles;
    std::vector<std::vector<double>> out;
    for (std::size_t m = 0; m < 3; ++m) {
      roles.push_back(MatrixRole::base_matrix(m));
      out.push_back({fb[m]});
    }
    for (std::size_t m = 0; m < 3; ++m)
      for (std::size_t q = 0; q < 3; ++q)
        if (q != m) {
          roles.push_back(MatrixRole::hybrid(m, q, 1));
          out.push_back({fh[m][q]});
        }
    const auto t = lamboni_estimate(EvaluationSet(1, roles, out));
    // m=0: ((1-2)+(1-3))/2 = -1.5; m=1: ((4-5)+(4-7))/2 = -2; m=2: ((6-8)+(6-9))/2 = -2.5
    const double expect = 2.0 / 9.0 * (1.5 * 1.5 + 2.0 * 2.0 + 2.5 * 2.5);
    CHECK(t.numerator[0] == doctest::Approx(expect).epsilon(1e-15));
    CHECK(t.variance == doctest::Approx(sample_variance(std::vector<double>{1, 4, 6})));
  }
}

TEST_CASE("Glen-Isaacs terms on a tiny instance") {
  const auto spec = DesignSpec::make(DesignKind::Symmetric2, 4, 2);
  const std::vector<SampleMatrix> bases{SampleMatrix(4, 2, {0.1, 0.7, 0.4, 0.2, 0.9, 0.5, 0.6, 0.95}),
                                        SampleMatrix(4, 2, {0.35, 0.2, 0.8, 0.65, 0.05, 0.4, 0.5, 0.85})};
  auto f = [](auto x) { return x[0] * x[1]; };
  const auto evals = evaluate_plan(assemble_plan(spec, bases), f);
  const auto terms = glen_isaacs_terms(evals);
  const auto t = glen_isaacs_d3_estimate(evals);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto& c = terms[j];
    // correction identities
    CHECK(c.c_a_j == doctest::Approx((c.c_d_j - c.p_j * c.c_d_minus_j) / (1 - c.p_j * c.p_j)).epsilon(1e-15));
    CHECK(c.c_a_minus_j == doctest::Approx((c.c_d_minus_j - c.p_j * c.c_d_j) / (1 - c.p_j * c.p_j)).epsilon(1e-15));
    CHECK(t.T[j] == doctest::Approx(1 - c.c_d_minus_j + c.p_j * c.c_a_j / (1 - c.c_a_j * c.c_a_minus_j)).epsilon(1e-15));
    for (double r : {c.c_d_minus_j, c.c_d_j, c.p_j}) CHECK(std::abs(r) <= 1.0);
  }
  // f_A and f_{A_B^(1)} by hand for factor 1
  std::vector<double> fa, fab, fb, fba;
  for (std::size_t i = 0; i < 4; ++i) {
    fa.push_back(bases[0](i, 0) * bases[0](i, 1));
    fb.push_back(bases[1](i, 0) * bases[1](i, 1));
    fab.push_back(bases[1](i, 0) * bases[0](i, 1));
    fba.push_back(bases[0](i, 0) * bases[1](i, 1));
  }
  CHECK(terms[0].c_d_minus_j == doctest::Approx(0.5 * (pearson_rho(fa, fab) + pearson_rho(fb, fba))));
  CHECK(terms[0].p_j == doctest::Approx(0.5 * (pearson_rho(fa, fb) + pearson_rho(fab, fba))));
}

TEST_CASE("null factor") {
  const Model f = [](auto x) { return x[1]; };
  for (const auto& c : kCases) {
    CAPTURE(name(c));
    const double t = run(c, 2, 12, 3, f).T[0];
    if (c.e == Estimator::Owen || c.e == Estimator::GlenIsaacs) CHECK(std::abs(t) < 0.05);
    else CHECK(t == 0.0);
  }
}

TEST_CASE("scale, shift and factor-permutation invariance") {
  const auto fn = FunctionSpec::make(Family::A2, 4);
  const Model f = [&](auto x) { return evaluate(fn, x); };
  const Model scaled = [&](auto x) { return -3.5 * evaluate(fn, x) + 11.0; };
  // factors reversed: g(x) = f(x4, x3, x2, x1)
  const Model reversed = [&](auto x) {
    const double y[4] = {x[3], x[2], x[1], x[0]};
    return evaluate(fn, std::span<const double>(y, 4));
  };
  for (const auto& c : kCases) {
    CAPTURE(name(c));
    const auto spec = design_for(c.e, 64, 4, c.n);
    const auto bases = scrambled_bases(base_matrix_count(spec), 4, 6, 9);
    const auto plan = assemble_plan(spec, bases);
    const auto base = estimate(c.e, evaluate_plan(plan, f));
    const auto other = estimate(c.e, evaluate_plan(plan, scaled));
    for (std::size_t j = 0; j < 4; ++j) CHECK(other.T[j] == doctest::Approx(base.T[j]).epsilon(1e-9));

    // Reverse the columns of every base matrix too, so the same points are evaluated.
    std::vector<SampleMatrix> flipped;
    for (const auto& b : bases) {
      std::vector<double> v;
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t col = 4; col-- > 0;) v.push_back(b(i, col));
      flipped.emplace_back(b.rows(), 4, std::move(v), b.role());
    }
    const auto rev = estimate(c.e, evaluate_plan(assemble_plan(spec, flipped), reversed));
    for (std::size_t j = 0; j < 4; ++j) CHECK(rev.T[j] == doctest::Approx(base.T[3 - j]).epsilon(1e-12));
  }
}

TEST_CASE("sum-of-squares numerators are non-negative") {
  const auto fn = FunctionSpec::make(Family::C1, 3);
  for (const auto& c : kCases) {
    if (c.e != Estimator::Saltenis && c.e != Estimator::Lamboni && c.e != Estimator::Cyclic &&
        c.e != Estimator::Symmetric && c.e != Estimator::Multimatrix)
      continue;
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto t = run(c, 3, 3, seed, [&](auto x) { return evaluate(fn, x); });
      for (double v : t.numerator) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("effects_used matches the pairing table") {
  for (const auto& c : kCases) {
    CAPTURE(name(c));
    const auto spec = design_for(c.e, 8, 3, c.n);
    const auto plan = assemble_plan(spec, scrambled_bases(base_matrix_count(spec), 3, 3, 1));
    const auto t = estimate(c.e, evaluate_plan(plan, [](auto x) { return x[0] + x[1] * x[2]; }));
    for (std::size_t j = 0; j < 3; ++j) {
      if (c.e == Estimator::GlenIsaacs || c.e == Estimator::Symmetric) CHECK(t.effects_used[j] == 16);
      else CHECK(t.effects_used[j] == plan.effect_count(j));
      CHECK(t.T[j] == doctest::Approx(t.numerator[j] / t.variance));
    }
  }
}

TEST_CASE("Lamboni with two matrices equals the symmetric two-matrix estimate") {
  for (Family fam : {Family::A1, Family::B2, Family::C2}) {
    const auto fn = FunctionSpec::make(fam, 5);
    const auto spec = DesignSpec::make(DesignKind::Symmetric2, 256, 5);
    const auto evals = EvaluationSet::from_plan(assemble_plan(spec, scrambled_bases(2, 5, 8, 4)), fn);
    const auto a = lamboni_estimate(evals), b = symmetric_saltenis_estimate(evals);
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(a.T[j] - b.T[j]) <= 1e-12);
  }
}

TEST_CASE("C2 with two factors converges to 4/7") {
  const auto fn = FunctionSpec::make(Family::C2, 2);
  double mean[2] = {0, 0};
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const auto t = run({Estimator::Saltenis, 2}, 2, 13, 100 + rep, [&](auto x) { return evaluate(fn, x); });
    mean[0] += t.T[0] / 50;
    mean[1] += t.T[1] / 50;
  }
  CHECK(std::abs(mean[0] - 4.0 / 7) < 0.01);
  CHECK(std::abs(mean[1] - 4.0 / 7) < 0.01);
}

void check_consistency(bool cyclic) {
  constexpr std::size_t k = 6, reps = 50;
  for (Family fam : {Family::A1, Family::A2, Family::B1, Family::B2, Family::B3, Family::C1, Family::C2}) {
    const auto fn = FunctionSpec::make(fam, k);
    const auto exact = analytic_indices(fn);
    for (const auto& c : kCases) {
      if ((c.e == Estimator::Cyclic) != cyclic) continue;
      CAPTURE(family_name(fam));
      CAPTURE(name(c));
      std::vector<double> dev(k, 0.0);
      for (std::uint64_t rep = 0; rep < reps; ++rep) {
        const auto t = run(c, k, 13, 1000 + rep, [&](auto x) { return evaluate(fn, x); });
        for (std::size_t j = 0; j < k; ++j) dev[j] += std::abs(t.T[j] - exact.T[j]) / reps;
      }
      for (double d : dev) CHECK(d < 0.05);
    }
  }
}

TEST_CASE("every two-matrix and multi-matrix estimator is consistent at 2^13 rows") { check_consistency(false); }

// Consecutive Sobol' rows are strongly dependent (the leading direction bit
// flips between them), so the row-shifted donor is not an independent draw.
// Fails with mean deviations of 0.05 to 0.19.
TEST_CASE("cyclic estimator is consistent at 2^13 Sobol' rows") { check_consistency(true); }

TEST_CASE("cyclic estimator is consistent on independent uniform rows") {
  constexpr std::size_t k = 6, N = std::size_t{1} << 13, reps = 20;
  for (Family fam : {Family::A1, Family::A2, Family::B1, Family::B3, Family::C2}) {
    CAPTURE(family_name(fam));
    const auto fn = FunctionSpec::make(fam, k);
    const auto exact = analytic_indices(fn);
    std::vector<double> dev(k, 0.0);
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      std::mt19937_64 rng(rep);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::vector<double> v(N * k);
      for (double& x : v) x = u(rng);
      const std::vector<SampleMatrix> a{SampleMatrix(N, k, std::move(v), MatrixRole::base_matrix(0))};
      const auto t = estimate(Estimator::Cyclic, design_for(Estimator::Cyclic, N, k), a, fn);
      for (std::size_t j = 0; j < k; ++j) dev[j] += std::abs(t.T[j] - exact.T[j]) / reps;
    }
    for (double d : dev) CHECK(d < 0.05);
  }
}

TEST_CASE("estimator errors") {
  const std::vector<double> flat{1, 1};
  CHECK_THROWS_AS(saltenis_estimate(EvaluationSet(1, {MatrixRole::base_matrix(0), MatrixRole::hybrid(0, 1, 1)},
                                                  {flat, {0, 1}})),
                  std::domain_error);
  CHECK_THROWS_AS(saltenis_estimate(EvaluationSet(2, {MatrixRole::base_matrix(0), MatrixRole::hybrid(0, 1, 1)},
                                                  {{0, 1}, {1, 0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(EvaluationSet(1, {MatrixRole::base_matrix(0), MatrixRole::base_matrix(0)}, {{0, 1}, {1, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(EvaluationSet(1, {MatrixRole::base_matrix(0), MatrixRole::base_matrix(1)}, {{0, 1}, {1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lamboni_estimate(EvaluationSet(1, {MatrixRole::base_matrix(0)}, {{0, 1}})), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_single_matrix_estimate(EvaluationSet(1, {MatrixRole::base_matrix(0), MatrixRole::cyclic(0, 1)},
                                                              {{0.5}, {0.5}})),
                  std::invalid_argument);
  // A with B and A_B with B_A perfectly correlated: the spurious correlation is 1
  const std::vector<MatrixRole> roles{MatrixRole::base_matrix(0), MatrixRole::base_matrix(1),
                                      MatrixRole::hybrid(0, 1, 1), MatrixRole::hybrid(1, 0, 1)};
  CHECK_THROWS_AS(glen_isaacs_d3_estimate(EvaluationSet(1, roles, {{0, 1, 2}, {0, 2, 4}, {1, 0, 2}, {2, 0, 4}})),
                  std::domain_error);
  CHECK(parse_estimator("glen_isaacs") == Estimator::GlenIsaacs);
  CHECK_FALSE(parse_estimator("jansen").has_value());
}
