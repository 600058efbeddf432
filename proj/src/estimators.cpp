#include "vbsa/estimators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace vbsa {

EvaluationSet::EvaluationSet(std::size_t k, std::vector<MatrixRole> roles,
                             std::vector<std::vector<double>> outputs)
    : k_(k), rows_(0), roles_(std::move(roles)), outputs_(std::move(outputs)) {
  if (roles_.size() != outputs_.size())
    throw std::invalid_argument("EvaluationSet: role and output counts differ");
  if (outputs_.empty()) throw std::invalid_argument("EvaluationSet: no outputs");
  rows_ = outputs_.front().size();
  for (std::size_t b = 0; b < outputs_.size(); ++b) {
    if (outputs_[b].size() != rows_)
      throw std::invalid_argument("EvaluationSet: vector " + roles_[b].label() + " has length " +
                                  std::to_string(outputs_[b].size()) + ", expected " +
                                  std::to_string(rows_));
    for (std::size_t c = 0; c < b; ++c)
      if (roles_[c] == roles_[b])
        throw std::invalid_argument("EvaluationSet: duplicate label " + roles_[b].label());
  }
}

EvaluationSet EvaluationSet::from_plan(const EvaluationPlan& plan, const FunctionSpec& fn) {
  if (fn.k != plan.spec().k)
    throw std::invalid_argument("function has " + std::to_string(fn.k) + " factors, plan has " +
                                std::to_string(plan.spec().k));
  std::vector<MatrixRole> roles;
  std::vector<std::vector<double>> outputs;
  for (const SampleMatrix& block : plan.blocks()) {
    roles.push_back(block.role());
    std::vector<double> f(block.rows());
    for (std::size_t i = 0; i < block.rows(); ++i) f[i] = evaluate(fn, block.row(i));
    outputs.push_back(std::move(f));
  }
  return EvaluationSet(plan.spec().k, std::move(roles), std::move(outputs));
}

EvaluationSet EvaluationSet::from_plan(const EvaluationPlan& plan, std::span<const double> outputs) {
  if (outputs.size() != plan.size())
    throw std::invalid_argument("EvaluationSet: " + std::to_string(outputs.size()) +
                                " outputs for a plan of " + std::to_string(plan.size()) + " points");
  const std::size_t N = plan.spec().N;
  std::vector<MatrixRole> roles;
  std::vector<std::vector<double>> per_block;
  for (std::size_t b = 0; b < plan.blocks().size(); ++b) {
    roles.push_back(plan.blocks()[b].role());
    per_block.emplace_back(outputs.begin() + static_cast<std::ptrdiff_t>(b * N),
                           outputs.begin() + static_cast<std::ptrdiff_t>((b + 1) * N));
  }
  return EvaluationSet(plan.spec().k, std::move(roles), std::move(per_block));
}

std::size_t EvaluationSet::base_count() const {
  std::size_t n = 0;
  while (contains(MatrixRole::base_matrix(n))) ++n;
  return n;
}

bool EvaluationSet::contains(const MatrixRole& role) const {
  for (const auto& r : roles_)
    if (r == role) return true;
  return false;
}

std::span<const double> EvaluationSet::at(const MatrixRole& role) const {
  for (std::size_t b = 0; b < roles_.size(); ++b)
    if (roles_[b] == role) return outputs_[b];
  throw std::invalid_argument("EvaluationSet: missing outputs for " + role.label());
}

double sample_variance(std::span<const double> f) {
  if (f.size() < 2) throw std::invalid_argument("sample_variance: need at least two values");
  double mean = 0.0;
  for (double x : f) mean += x;
  mean /= static_cast<double>(f.size());
  double ss = 0.0;
  for (double x : f) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(f.size());
}

double pearson_rho(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("pearson_rho: lengths differ");
  if (u.size() < 2) throw std::invalid_argument("pearson_rho: need at least two values");
  const double n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mu, dv = v[i] - mv;
    suv += du * dv;
    suu += du * du;
    svv += dv * dv;
  }
  if (suu == 0.0 || svv == 0.0) throw std::domain_error("pearson_rho: correlation undefined for a constant vector");
  // 1/(N-1) cancels between covariance and both variances
  const double rho = suv / std::sqrt(suu * svv);
  return std::clamp(rho, -1.0, 1.0);
}

namespace {

double checked_variance(std::span<const double> f, const char* who) {
  const double v = sample_variance(f);
  if (!(v > 0.0)) throw std::domain_error(std::string(who) + ": output variance is zero");
  return v;
}

std::vector<double> concat(std::initializer_list<std::span<const double>> parts) {
  std::vector<double> out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

double half_mean_square_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / (2.0 * static_cast<double>(a.size()));
}

TotalIndexEstimate finish(std::vector<double> numerator, double variance,
                          std::vector<std::size_t> effects) {
  TotalIndexEstimate out;
  out.T.resize(numerator.size());
  for (std::size_t j = 0; j < numerator.size(); ++j) out.T[j] = numerator[j] / variance;
  out.numerator = std::move(numerator);
  out.variance = variance;
  out.effects_used = std::move(effects);
  return out;
}

constexpr MatrixRole kA = MatrixRole{RoleKind::Base, 0, 0, 0};
constexpr MatrixRole kB = MatrixRole{RoleKind::Base, 1, 0, 0};

}  // namespace

TotalIndexEstimate saltenis_estimate(const EvaluationSet& evals) {
  const std::size_t k = evals.k();
  const auto fa = evals.at(kA);
  const double variance = checked_variance(fa, "saltenis");
  std::vector<double> numerator(k);
  for (std::size_t j = 1; j <= k; ++j)
    numerator[j - 1] = half_mean_square_diff(fa, evals.at(MatrixRole::hybrid(0, 1, j)));
  return finish(std::move(numerator), variance, std::vector<std::size_t>(k, evals.rows()));
}

std::vector<CorrelationTerms> glen_isaacs_terms(const EvaluationSet& evals) {
  const auto fa = evals.at(kA);
  const auto fb = evals.at(kB);
  const double rho_ab = pearson_rho(fa, fb);
  std::vector<CorrelationTerms> out;
  for (std::size_t j = 1; j <= evals.k(); ++j) {
    const auto fab = evals.at(MatrixRole::hybrid(0, 1, j));
    const auto fba = evals.at(MatrixRole::hybrid(1, 0, j));
    CorrelationTerms t{};
    t.c_d_minus_j = 0.5 * (pearson_rho(fa, fab) + pearson_rho(fb, fba));
    t.c_d_j = 0.5 * (pearson_rho(fb, fab) + pearson_rho(fa, fba));
    t.p_j = 0.5 * (rho_ab + pearson_rho(fab, fba));
    const double denom = 1.0 - t.p_j * t.p_j;
    if (!(denom > 0.0)) throw std::domain_error("glen_isaacs: spurious correlation |p_j| = 1");
    t.c_a_j = (t.c_d_j - t.p_j * t.c_d_minus_j) / denom;
    t.c_a_minus_j = (t.c_d_minus_j - t.p_j * t.c_d_j) / denom;
    out.push_back(t);
  }
  return out;
}

TotalIndexEstimate glen_isaacs_d3_estimate(const EvaluationSet& evals) {
  const auto terms = glen_isaacs_terms(evals);
  const double variance = checked_variance(concat({evals.at(kA), evals.at(kB)}), "glen_isaacs");
  // T_j comes straight from the correlations; the numerator is T_j V so the
  // estimate keeps the common numerator / variance shape.
  TotalIndexEstimate out;
  out.variance = variance;
  for (const auto& t : terms) {
    const double denom = 1.0 - t.c_a_j * t.c_a_minus_j;
    if (denom == 0.0) throw std::domain_error("glen_isaacs: singular correction 1 - c_aj c_a-j = 0");
    const double T = 1.0 - t.c_d_minus_j + t.p_j * t.c_a_j / denom;
    out.T.push_back(T);
    out.numerator.push_back(T * variance);
  }
  out.effects_used.assign(evals.k(), 2 * evals.rows());
  return out;
}

TotalIndexEstimate owen_estimate(const EvaluationSet& evals) {
  const auto fa = evals.at(kA);
  const auto fb = evals.at(kB);
  const double variance = checked_variance(concat({fa, fb}), "owen");
  const double N = static_cast<double>(evals.rows());
  std::vector<double> numerator(evals.k());
  for (std::size_t j = 1; j <= evals.k(); ++j) {
    const auto fba = evals.at(MatrixRole::hybrid(1, 0, j));
    const auto fcb = evals.at(MatrixRole::hybrid(2, 1, j));
    double s = 0.0;
    for (std::size_t i = 0; i < evals.rows(); ++i) s += (fb[i] - fcb[i]) * (fba[i] - fa[i]);
    numerator[j - 1] = variance - s / N;
  }
  return finish(std::move(numerator), variance, std::vector<std::size_t>(evals.k(), evals.rows()));
}

namespace {

double pooled_base_variance(const EvaluationSet& evals, std::size_t n, const char* who) {
  std::vector<double> pooled;
  for (std::size_t m = 0; m < n; ++m) {
    const auto f = evals.at(MatrixRole::base_matrix(m));
    pooled.insert(pooled.end(), f.begin(), f.end());
  }
  return checked_variance(pooled, who);
}

}  // namespace

TotalIndexEstimate lamboni_estimate(const EvaluationSet& evals) {
  const std::size_t n = evals.base_count();
  if (n < 2) throw std::invalid_argument("lamboni: needs at least two base matrices");
  const double variance = pooled_base_variance(evals, n, "lamboni");
  const std::size_t N = evals.rows();
  const double nd = static_cast<double>(n);
  std::vector<double> numerator(evals.k());
  for (std::size_t j = 1; j <= evals.k(); ++j) {
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const auto fm = evals.at(MatrixRole::base_matrix(m));
      std::vector<std::span<const double>> hybrids;
      for (std::size_t q = 0; q < n; ++q)
        if (q != m) hybrids.push_back(evals.at(MatrixRole::hybrid(m, q, j)));
      for (std::size_t i = 0; i < N; ++i) {
        double avg = 0.0;
        for (const auto& h : hybrids) avg += fm[i] - h[i];
        avg /= nd - 1.0;
        s += avg * avg;
      }
    }
    numerator[j - 1] = (nd - 1.0) / (static_cast<double>(N) * nd * nd) * s;
  }
  return finish(std::move(numerator), variance, std::vector<std::size_t>(evals.k(), N * n * (n - 1)));
}

TotalIndexEstimate multimatrix_saltenis_estimate(const EvaluationSet& evals) {
  const std::size_t n = evals.base_count();
  if (n < 2) throw std::invalid_argument("multimatrix: needs at least two base matrices");
  const double variance = checked_variance(evals.at(kA), "multimatrix");
  const std::size_t N = evals.rows();
  std::vector<double> numerator(evals.k());
  std::vector<std::size_t> effects(evals.k());
  for (std::size_t j = 1; j <= evals.k(); ++j) {
    double sum = 0.0;
    std::size_t couples = 0;
    for (std::size_t m = 0; m < n; ++m) {
      const auto fm = evals.at(MatrixRole::base_matrix(m));
      for (std::size_t q = 0; q < n; ++q) {
        if (q == m) continue;
        sum += half_mean_square_diff(fm, evals.at(MatrixRole::hybrid(m, q, j)));
        ++couples;
      }
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = q + 1; r < n; ++r) {
          if (q == m || r == m) continue;
          sum += half_mean_square_diff(evals.at(MatrixRole::hybrid(m, q, j)),
                                       evals.at(MatrixRole::hybrid(m, r, j)));
          ++couples;
        }
    }
    numerator[j - 1] = sum / static_cast<double>(couples);
    effects[j - 1] = couples * N;
  }
  return finish(std::move(numerator), variance, std::move(effects));
}

TotalIndexEstimate symmetric_saltenis_estimate(const EvaluationSet& evals) {
  if (evals.base_count() != 2) throw std::invalid_argument("symmetric: expects base matrices A and B");
  const auto fa = evals.at(kA);
  const auto fb = evals.at(kB);
  const double variance = checked_variance(concat({fa, fb}), "symmetric");
  std::vector<double> numerator(evals.k());
  for (std::size_t j = 1; j <= evals.k(); ++j)
    numerator[j - 1] = 0.5 * (half_mean_square_diff(fa, evals.at(MatrixRole::hybrid(0, 1, j))) +
                              half_mean_square_diff(fb, evals.at(MatrixRole::hybrid(1, 0, j))));
  return finish(std::move(numerator), variance, std::vector<std::size_t>(evals.k(), 2 * evals.rows()));
}

TotalIndexEstimate cyclic_single_matrix_estimate(const EvaluationSet& evals) {
  if (evals.rows() < 2) throw std::invalid_argument("cyclic: needs at least two rows");
  const auto fa = evals.at(kA);
  const double variance = checked_variance(fa, "cyclic");
  std::vector<double> numerator(evals.k());
  for (std::size_t j = 1; j <= evals.k(); ++j)
    numerator[j - 1] = half_mean_square_diff(fa, evals.at(MatrixRole::cyclic(0, j)));
  return finish(std::move(numerator), variance, std::vector<std::size_t>(evals.k(), evals.rows()));
}

namespace {

constexpr std::array<std::pair<Estimator, std::string_view>, 7> kEstimatorNames{{
    {Estimator::Saltenis, "saltenis"},
    {Estimator::GlenIsaacs, "glen_isaacs"},
    {Estimator::Symmetric, "symmetric"},
    {Estimator::Multimatrix, "multimatrix"},
    {Estimator::Owen, "owen"},
    {Estimator::Lamboni, "lamboni"},
    {Estimator::Cyclic, "cyclic"},
}};

}  // namespace

std::string_view estimator_name(Estimator e) {
  for (const auto& [est, name] : kEstimatorNames)
    if (est == e) return name;
  return "?";
}

std::optional<Estimator> parse_estimator(std::string_view name) {
  for (const auto& [est, n] : kEstimatorNames)
    if (n == name) return est;
  return std::nullopt;
}

DesignSpec design_for(Estimator e, std::size_t N, std::size_t k, std::size_t n) {
  switch (e) {
    case Estimator::Saltenis:
      return DesignSpec::make(DesignKind::Asymmetric, N, k);
    case Estimator::GlenIsaacs:
    case Estimator::Symmetric:
      return DesignSpec::make(DesignKind::Symmetric2, N, k);
    case Estimator::Multimatrix:
      return DesignSpec::make(DesignKind::Multimatrix, N, k, n);
    case Estimator::Owen:
      return DesignSpec::make(DesignKind::Owen, N, k);
    case Estimator::Lamboni:
      return DesignSpec::make(DesignKind::Lamboni, N, k, n);
    case Estimator::Cyclic:
      return DesignSpec::make(DesignKind::CyclicSingle, N, k);
  }
  throw std::invalid_argument("design_for: unknown estimator");
}

TotalIndexEstimate estimate(Estimator e, const EvaluationSet& evals) {
  switch (e) {
    case Estimator::Saltenis:
      return saltenis_estimate(evals);
    case Estimator::GlenIsaacs:
      return glen_isaacs_d3_estimate(evals);
    case Estimator::Symmetric:
      return symmetric_saltenis_estimate(evals);
    case Estimator::Multimatrix:
      return multimatrix_saltenis_estimate(evals);
    case Estimator::Owen:
      return owen_estimate(evals);
    case Estimator::Lamboni:
      return lamboni_estimate(evals);
    case Estimator::Cyclic:
      return cyclic_single_matrix_estimate(evals);
  }
  throw std::invalid_argument("estimate: unknown estimator");
}

TotalIndexEstimate estimate(Estimator e, const DesignSpec& spec, std::span<const SampleMatrix> bases,
                            const FunctionSpec& fn) {
  const EvaluationPlan plan = assemble_plan(spec, bases);
  return estimate(e, EvaluationSet::from_plan(plan, fn));
}

}  // namespace vbsa
