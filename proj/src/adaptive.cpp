#include "vbsa/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vbsa/designs.hpp"

namespace vbsa {

std::vector<double> std_elementary_effects(std::span<const std::vector<double>> diffs) {
  std::vector<double> out;
  out.reserve(diffs.size());
  for (const auto& d : diffs) {
    if (d.size() < 2) throw std::invalid_argument("std_elementary_effects: need at least two effects per factor");
    out.push_back(std::sqrt(sample_variance(d)));
  }
  return out;
}

std::vector<std::size_t> rank_factors(std::span<const double> std_ee, std::span<const std::size_t> active) {
  std::vector<std::size_t> ranked(active.begin(), active.end());
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    if (std_ee[a] != std_ee[b]) return std_ee[a] > std_ee[b];
    return a < b;
  });
  return ranked;
}

std::optional<std::size_t> drop_position(std::span<const double> ranked_std, std::size_t block, std::size_t k) {
  if (block == 0 || block >= k) return std::nullopt;
  const std::size_t r = k - block;
  if (r >= ranked_std.size()) return std::nullopt;
  if (ranked_std[r - 1] / std::sqrt(2.0) > ranked_std[r]) return r;
  return std::nullopt;
}

AdaptiveResult adaptive_run(const FunctionSpec& fn, unsigned p, std::span<const SampleMatrix> bases,
                            AdaptiveOptions options) {
  fn.validate();
  const std::size_t k = fn.k;
  if (k < 2) throw std::invalid_argument("adaptive_run: needs at least two factors");
  if (p + 2 < k + 1)
    throw std::invalid_argument("adaptive_run: budget 2^" + std::to_string(p) +
                                " too small for a warm-up block with k = " + std::to_string(k) +
                                " (need p >= k - 1)");
  if (bases.size() != 2) throw std::invalid_argument("adaptive_run: expects base matrices A and B");
  const unsigned warmup_exp = p + 2 - static_cast<unsigned>(k);
  const std::size_t max_rows = std::size_t{1} << (p + 1);
  for (const auto& b : bases)
    if (b.cols() != k || b.rows() < max_rows)
      throw std::invalid_argument("adaptive_run: base matrices must be at least " +
                                  std::to_string(max_rows) + "x" + std::to_string(k));

  const SampleMatrix& A = bases[0];
  const SampleMatrix& B = bases[1];

  AdaptiveResult result;
  result.budget = (k + 1) * (std::size_t{1} << p);

  std::vector<double> f_a;
  std::vector<std::vector<double>> diffs(k);
  std::vector<std::size_t> active(k);
  std::iota(active.begin(), active.end(), 0);
  std::vector<double> point(k);

  auto run_block = [&](unsigned block, std::size_t begin, std::size_t end, std::vector<std::size_t> dropped) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto a = A.row(i);
      const double fa = evaluate(fn, a);
      f_a.push_back(fa);
      for (std::size_t j : active) {
        std::copy(a.begin(), a.end(), point.begin());
        point[j] = B(i, j);
        diffs[j].push_back(fa - evaluate(fn, point));
      }
    }
    BlockLedger entry;
    entry.block = block;
    entry.row_begin = begin;
    entry.row_end = end;
    entry.active = active;
    entry.dropped = std::move(dropped);
    entry.runs = (end - begin) * (1 + active.size());
    result.runs_spent += entry.runs;
    entry.cumulative_runs = result.runs_spent;
    result.ledger.push_back(std::move(entry));
  };

  run_block(0, 0, std::size_t{1} << warmup_exp, {});

  for (unsigned s = 1; s < k; ++s) {
    std::vector<std::size_t> dropped;
    if (options.drop_rule && active.size() > 1) {
      std::vector<double> std_ee(k, 0.0);
      for (std::size_t j : active) std_ee[j] = std::sqrt(sample_variance(diffs[j]));
      const auto ranked = rank_factors(std_ee, active);
      std::vector<double> ranked_std;
      for (std::size_t j : ranked) ranked_std.push_back(std_ee[j]);
      if (const auto cut = drop_position(ranked_std, s, k)) {
        dropped.assign(ranked.begin() + static_cast<std::ptrdiff_t>(*cut), ranked.end());
        std::vector<std::size_t> kept(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(*cut));
        std::sort(kept.begin(), kept.end());
        active = std::move(kept);
      }
    }
    const std::size_t begin = std::size_t{1} << (warmup_exp + s - 1);
    const std::size_t end = std::size_t{1} << (warmup_exp + s);
    const std::size_t cost = (end - begin) * (1 + active.size());
    if (result.runs_spent + cost > result.budget) break;
    run_block(s, begin, end, std::move(dropped));
  }

  TotalIndexEstimate& est = result.estimate;
  est.variance = sample_variance(f_a);
  if (!(est.variance > 0.0)) throw std::domain_error("adaptive_run: output variance is zero");
  for (std::size_t j = 0; j < k; ++j) {
    double ss = 0.0;
    for (double d : diffs[j]) ss += d * d;
    const double numerator = ss / (2.0 * static_cast<double>(diffs[j].size()));
    est.numerator.push_back(numerator);
    est.T.push_back(numerator / est.variance);
    est.effects_used.push_back(diffs[j].size());
  }
  return result;
}

AdaptiveResult adaptive_run(const FunctionSpec& fn, unsigned p, std::uint64_t seed, AdaptiveOptions options) {
  const std::size_t k = fn.k;
  const SampleMatrix pool =
      permute_columns(sobol_block(2 * k, p + 1), ColumnPermutation::draw(2 * k, seed));
  const auto bases = base_matrices_from_pool(pool, 2, k);
  return adaptive_run(fn, p, bases, options);
}

}  // namespace vbsa
