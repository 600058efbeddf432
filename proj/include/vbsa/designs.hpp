#ifndef VBSA_DESIGNS_HPP
#define VBSA_DESIGNS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vbsa/qmc.hpp"

namespace vbsa {

enum class DesignKind { Asymmetric, Symmetric2, Multimatrix, Owen, Lamboni, CyclicSingle };

std::string_view design_name(DesignKind kind);
std::optional<DesignKind> parse_design(std::string_view name);

struct DesignSpec {
  DesignKind kind = DesignKind::Asymmetric;
  std::size_t n = 2;  // base matrices drawn from the column pool
  std::size_t N = 1;  // rows per matrix
  std::size_t k = 1;

  /// Fills n from the kind for fixed-n designs; `n` is only read for
  /// multimatrix and Lamboni.
  static DesignSpec make(DesignKind kind, std::size_t N, std::size_t k, std::size_t n = 0);
  void validate() const;
};

struct DesignMetrics {
  DesignSpec spec;
  std::size_t total_points = 0;   // N_T
  std::size_t total_effects = 0;  // E_T
  double economy = 0.0;           // E_T / N_T
  double explorativity = 0.0;     // fraction of non-repeated coordinates
  std::optional<double> discrepancy;
};

DesignMetrics design_metrics(const DesignSpec& spec);

/// Metric-only reference arrangements used for the explorativity/economy
/// comparison; no plan is ever assembled for them.
enum class ReferenceDesign { Couples, Stars, WindingStairs };

struct ReferenceMetrics {
  ReferenceDesign design;
  double economy;
  double explorativity;
};

ReferenceMetrics reference_metrics(ReferenceDesign design, std::size_t k, std::size_t total_points);

/// Rows of `base` with column j (1-based) taken from `donor`.
SampleMatrix hybrid_matrix(const SampleMatrix& base, const SampleMatrix& donor, std::size_t j);

/// Row i of `base` with coordinate j replaced by that of row i+1; row N
/// borrows from row 1.
SampleMatrix cyclic_matrix(const SampleMatrix& base, std::size_t j);

/// Two blocks whose rows, taken index by index, form elementary effects
/// for `factor` (0-based).
struct BlockPair {
  std::size_t first;
  std::size_t second;
  std::size_t factor;
};

/// One elementary effect expanded to plan row indices.
struct EffectPair {
  std::size_t first;
  std::size_t second;
  std::size_t factor;
};

class EvaluationPlan {
 public:
  EvaluationPlan(DesignSpec spec, std::vector<SampleMatrix> blocks, std::vector<BlockPair> pairs);

  const DesignSpec& spec() const { return spec_; }
  std::span<const SampleMatrix> blocks() const { return blocks_; }
  std::span<const BlockPair> block_pairs() const { return pairs_; }

  /// Number of points (rows over all blocks).
  std::size_t size() const { return blocks_.size() * spec_.N; }
  std::span<const double> point(std::size_t index) const;
  std::string label(std::size_t index) const;

  /// Index of the block with the given role; throws if absent.
  std::size_t block_index(const MatrixRole& role) const;

  std::vector<EffectPair> effect_pairs() const;
  std::size_t effect_count(std::size_t factor) const;

 private:
  DesignSpec spec_;
  std::vector<SampleMatrix> blocks_;
  std::vector<BlockPair> pairs_;
};

/// Number of base matrices assemble_plan expects for a design.
std::size_t base_matrix_count(const DesignSpec& spec);

/// Splits a column pool left to right: the first k columns become A, the
/// next k become B, and so on.
std::vector<SampleMatrix> base_matrices_from_pool(const SampleMatrix& pool, std::size_t n,
                                                  std::size_t k);

EvaluationPlan assemble_plan(const DesignSpec& spec, std::span<const SampleMatrix> base_matrices);

/// Every point of the plan, one row per model run, in plan order.
SampleMatrix design_points(const EvaluationPlan& plan);

/// Smallest-error power-of-two N for a target cost; ties go to the smaller N.
std::size_t matched_rows(DesignKind kind, std::size_t n, std::size_t k, std::size_t target_points);

/// Designs with N_T close to an affordable budget: the asymmetric design,
/// plus for every N one symmetric multi-matrix design (n in 2..10) whose
/// N_T is nearest the target. Discrepancy is taken over all N_T design
/// points built from the unscrambled sequence.
std::vector<DesignMetrics> budget_table(std::size_t k, std::size_t target_points);

}  // namespace vbsa

#endif  // VBSA_DESIGNS_HPP
