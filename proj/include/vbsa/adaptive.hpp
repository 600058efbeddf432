#ifndef VBSA_ADAPTIVE_HPP
#define VBSA_ADAPTIVE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vbsa/estimators.hpp"
#include "vbsa/qmc.hpp"
#include "vbsa/testfns.hpp"

namespace vbsa {

/// Per-factor standard deviation (1/N convention) of elementary effects.
std::vector<double> std_elementary_effects(std::span<const std::vector<double>> diffs);

/// Factors in decreasing order of std_ee; ties keep ascending factor index.
std::vector<std::size_t> rank_factors(std::span<const double> std_ee, std::span<const std::size_t> active);

/// Decision before block s (1..k-1): with std_ee of the active factors in
/// ranked (decreasing) order and 0-based rank r = k - s, returns r when
/// std[r-1] / sqrt(2) > std[r]. Rank r and everything below it is then
/// dropped. Equal neighbours never fire.
std::optional<std::size_t> drop_position(std::span<const double> ranked_std, std::size_t block, std::size_t k);

struct AdaptiveOptions {
  bool drop_rule = true;
};

/// One sampling block: rows [row_begin, row_end) of A were evaluated for
/// the listed factors.
struct BlockLedger {
  unsigned block = 0;  // 0 is the warm-up
  std::size_t row_begin = 0;
  std::size_t row_end = 0;
  std::vector<std::size_t> active;   // 0-based factors evaluated in this block
  std::vector<std::size_t> dropped;  // removed at the decision before this block
  std::size_t runs = 0;
  std::size_t cumulative_runs = 0;
};

struct AdaptiveResult {
  TotalIndexEstimate estimate;
  std::vector<BlockLedger> ledger;
  std::size_t budget = 0;      // (k + 1) 2^p
  std::size_t runs_spent = 0;
};

/// Adaptive Jansen-form estimation with a run budget of (k + 1) 2^p. A
/// warm-up block of 2^(p+2-k) rows covers every factor; each later block
/// doubles the row count, evaluating only factors that survive the sqrt(2)
/// rule, which before block s examines rank k - s alone. Blocks stop once the next one would exceed the budget or after
/// block k - 1. `bases` are A and B with at least 2^(p+1) rows.
AdaptiveResult adaptive_run(const FunctionSpec& fn, unsigned p, std::span<const SampleMatrix> bases,
                            AdaptiveOptions options = {});

/// Draws A and B from a column permutation of the first 2k Sobol' columns.
AdaptiveResult adaptive_run(const FunctionSpec& fn, unsigned p, std::uint64_t seed,
                            AdaptiveOptions options = {});

}  // namespace vbsa

#endif  // VBSA_ADAPTIVE_HPP
