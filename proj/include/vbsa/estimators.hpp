#ifndef VBSA_ESTIMATORS_HPP
#define VBSA_ESTIMATORS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vbsa/designs.hpp"
#include "vbsa/qmc.hpp"
#include "vbsa/testfns.hpp"

namespace vbsa {

/// Model outputs for every block of a plan, addressed by matrix role.
class EvaluationSet {
 public:
  EvaluationSet(std::size_t k, std::vector<MatrixRole> roles, std::vector<std::vector<double>> outputs);

  static EvaluationSet from_plan(const EvaluationPlan& plan, const FunctionSpec& fn);
  /// `outputs` holds one value per plan point, in plan order.
  static EvaluationSet from_plan(const EvaluationPlan& plan, std::span<const double> outputs);

  std::size_t k() const { return k_; }
  std::size_t rows() const { return rows_; }
  std::size_t base_count() const;

  bool contains(const MatrixRole& role) const;
  std::span<const double> at(const MatrixRole& role) const;

  std::span<const MatrixRole> roles() const { return roles_; }
  std::span<const std::vector<double>> outputs() const { return outputs_; }

 private:
  std::size_t k_;
  std::size_t rows_;
  std::vector<MatrixRole> roles_;
  std::vector<std::vector<double>> outputs_;
};

struct TotalIndexEstimate {
  std::vector<double> T;
  std::vector<double> numerator;
  double variance = 0.0;
  std::vector<std::size_t> effects_used;
};

/// Population variance (1/N) about the sample mean.
double sample_variance(std::span<const double> f);

/// Product-moment correlation. Throws std::domain_error when either input
/// is constant.
double pearson_rho(std::span<const double> u, std::span<const double> v);

/// Jansen-form numerator (1/2N) sum [f(a_i) - f(a_b,i^(j))]^2 over an
/// asymmetric plan, normalised by the variance of f(A).
TotalIndexEstimate saltenis_estimate(const EvaluationSet& evals);

/// Symmetrised correlations feeding the D3 estimator for one factor.
/// `c_a_j` and `c_a_minus_j` are the spurious-correlation-corrected values.
struct CorrelationTerms {
  double c_d_minus_j;  // couples differing only in coordinate j
  double c_d_j;        // couples sharing only coordinate j
  double p_j;          // couples sharing no coordinate
  double c_a_j;
  double c_a_minus_j;
};

std::vector<CorrelationTerms> glen_isaacs_terms(const EvaluationSet& evals);

/// T_j = 1 - c_{d-j} + p_j c_{aj} / (1 - c_{aj} c_{a-j}) over a symmetric
/// two-matrix plan.
TotalIndexEstimate glen_isaacs_d3_estimate(const EvaluationSet& evals);

/// Three-matrix estimator over A, B, B_A^(j), C_B^(j); variance pooled
/// over f(A) and f(B).
TotalIndexEstimate owen_estimate(const EvaluationSet& evals);

/// Squared row-averaged differences over n base matrices and all
/// base-to-hybrid couples; variance pooled over the base matrices.
TotalIndexEstimate lamboni_estimate(const EvaluationSet& evals);

/// Jansen form averaged over every couple of the generalised symmetric
/// design, hybrid-to-hybrid couples included. Variance comes from f(A)
/// alone, A being the base sample.
TotalIndexEstimate multimatrix_saltenis_estimate(const EvaluationSet& evals);

/// Mean of the A-based and B-based Jansen numerators over a two-matrix
/// symmetric plan; variance pooled over f(A) and f(B).
TotalIndexEstimate symmetric_saltenis_estimate(const EvaluationSet& evals);

/// Jansen form over A and its cyclically shifted hybrids, wrap pair included.
TotalIndexEstimate cyclic_single_matrix_estimate(const EvaluationSet& evals);

/// Estimator/design pairings available to the harness.
enum class Estimator { Saltenis, GlenIsaacs, Symmetric, Multimatrix, Owen, Lamboni, Cyclic };

std::string_view estimator_name(Estimator e);
std::optional<Estimator> parse_estimator(std::string_view name);

/// Design kind an estimator consumes; `n` only matters for multimatrix and Lamboni.
DesignSpec design_for(Estimator e, std::size_t N, std::size_t k, std::size_t n = 2);

TotalIndexEstimate estimate(Estimator e, const EvaluationSet& evals);

/// Assemble, evaluate and estimate in one call.
TotalIndexEstimate estimate(Estimator e, const DesignSpec& spec, std::span<const SampleMatrix> bases,
                            const FunctionSpec& fn);

}  // namespace vbsa

#endif  // VBSA_ESTIMATORS_HPP
