#include "vbsa/designs.hpp"

#include <array>
#include <bit>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace vbsa {

namespace {

constexpr std::array<std::pair<DesignKind, std::string_view>, 6> kDesignNames{{
    {DesignKind::Asymmetric, "asymmetric"},
    {DesignKind::Symmetric2, "symmetric2"},
    {DesignKind::Multimatrix, "multimatrix"},
    {DesignKind::Owen, "owen"},
    {DesignKind::Lamboni, "lamboni"},
    {DesignKind::CyclicSingle, "cyclic_single"},
}};

std::size_t points_for(DesignKind kind, std::size_t n, std::size_t k, std::size_t N) {
  switch (kind) {
    case DesignKind::Asymmetric:
    case DesignKind::CyclicSingle:
      return N * (k + 1);
    case DesignKind::Symmetric2:
    case DesignKind::Owen:
      return 2 * N * (k + 1);
    case DesignKind::Multimatrix:
    case DesignKind::Lamboni:
      return n * N * (1 + k * (n - 1));
  }
  return 0;
}

}  // namespace

std::string_view design_name(DesignKind kind) {
  for (const auto& [k, name] : kDesignNames)
    if (k == kind) return name;
  return "?";
}

std::optional<DesignKind> parse_design(std::string_view name) {
  for (const auto& [k, n] : kDesignNames)
    if (n == name) return k;
  return std::nullopt;
}

DesignSpec DesignSpec::make(DesignKind kind, std::size_t N, std::size_t k, std::size_t n) {
  DesignSpec spec{kind, n, N, k};
  switch (kind) {
    case DesignKind::Asymmetric:
    case DesignKind::Symmetric2:
      spec.n = 2;
      break;
    case DesignKind::Owen:
      spec.n = 3;
      break;
    case DesignKind::CyclicSingle:
      spec.n = 1;
      break;
    default:
      break;
  }
  spec.validate();
  return spec;
}

void DesignSpec::validate() const {
  if (N == 0) throw std::invalid_argument("design: N must be at least 1");
  if (k == 0) throw std::invalid_argument("design: k must be at least 1");
  switch (kind) {
    case DesignKind::Asymmetric:
    case DesignKind::Symmetric2:
      if (n != 2) throw std::invalid_argument(std::string(design_name(kind)) + " design uses n = 2");
      break;
    case DesignKind::Owen:
      if (n != 3) throw std::invalid_argument("owen design uses n = 3");
      break;
    case DesignKind::CyclicSingle:
      if (n != 1) throw std::invalid_argument("cyclic_single design uses n = 1");
      break;
    case DesignKind::Multimatrix:
    case DesignKind::Lamboni:
      if (n < 2) throw std::invalid_argument(std::string(design_name(kind)) + " design needs n >= 2");
      break;
  }
}

DesignMetrics design_metrics(const DesignSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n, N = spec.N, k = spec.k;
  const double kd = static_cast<double>(k);
  DesignMetrics m;
  m.spec = spec;
  m.total_points = points_for(spec.kind, n, k, N);
  switch (spec.kind) {
    case DesignKind::Asymmetric:
      m.total_effects = N * k;
      m.explorativity = 2.0 / (kd + 1.0);
      break;
    case DesignKind::CyclicSingle:
      // only the Nk coordinates of A are original
      m.total_effects = N * k;
      m.explorativity = 1.0 / (kd + 1.0);
      break;
    case DesignKind::Symmetric2:
      m.total_effects = 2 * N * k;
      m.explorativity = 1.0 / (kd + 1.0);
      break;
    case DesignKind::Owen:
      m.total_effects = N * k;
      m.explorativity = 3.0 / (2.0 * (kd + 1.0));
      break;
    case DesignKind::Multimatrix:
      m.total_effects = N * k * n * n * (n - 1) / 2;
      m.explorativity = 1.0 / (1.0 + kd * static_cast<double>(n - 1));
      break;
    case DesignKind::Lamboni:
      m.total_effects = N * k * n * (n - 1);
      m.explorativity = 1.0 / (1.0 + kd * static_cast<double>(n - 1));
      break;
  }
  m.economy = static_cast<double>(m.total_effects) / static_cast<double>(m.total_points);
  return m;
}

ReferenceMetrics reference_metrics(ReferenceDesign design, std::size_t k, std::size_t total_points) {
  if (k == 0 || total_points < 2) throw std::invalid_argument("reference_metrics: need k >= 1, N_T >= 2");
  const double kd = static_cast<double>(k);
  const double nt = static_cast<double>(total_points);
  switch (design) {
    case ReferenceDesign::Couples:
      return {design, 0.5, (kd + 1.0) / (2.0 * kd)};
    case ReferenceDesign::Stars:
      return {design, kd / (kd + 1.0), 2.0 / (kd + 1.0)};
    case ReferenceDesign::WindingStairs:
      return {design, (nt - 1.0) / nt, (nt + kd - 1.0) / (nt * kd)};
  }
  throw std::invalid_argument("reference_metrics: unknown design");
}

SampleMatrix hybrid_matrix(const SampleMatrix& base, const SampleMatrix& donor, std::size_t j) {
  if (base.rows() != donor.rows() || base.cols() != donor.cols())
    throw std::invalid_argument("hybrid_matrix: base and donor shapes differ");
  if (j < 1 || j > base.cols())
    throw std::out_of_range("hybrid_matrix: column " + std::to_string(j) + " outside 1.." +
                            std::to_string(base.cols()));
  SampleMatrix out = base;
  for (std::size_t i = 0; i < base.rows(); ++i) out(i, j - 1) = donor(i, j - 1);
  out.set_role(MatrixRole::hybrid(base.role().base, donor.role().base, j));
  return out;
}

SampleMatrix cyclic_matrix(const SampleMatrix& base, std::size_t j) {
  if (j < 1 || j > base.cols())
    throw std::out_of_range("cyclic_matrix: column " + std::to_string(j) + " outside 1.." +
                            std::to_string(base.cols()));
  if (base.rows() < 2) throw std::invalid_argument("cyclic_matrix: needs at least two rows");
  SampleMatrix out = base;
  const std::size_t rows = base.rows();
  for (std::size_t i = 0; i < rows; ++i) out(i, j - 1) = base((i + 1) % rows, j - 1);
  out.set_role(MatrixRole::cyclic(base.role().base, j));
  return out;
}

EvaluationPlan::EvaluationPlan(DesignSpec spec, std::vector<SampleMatrix> blocks,
                               std::vector<BlockPair> pairs)
    : spec_(spec), blocks_(std::move(blocks)), pairs_(std::move(pairs)) {
  for (const auto& b : blocks_)
    if (b.rows() != spec_.N || b.cols() != spec_.k)
      throw std::invalid_argument("EvaluationPlan: block " + b.role().label() + " has wrong shape");
  for (const auto& p : pairs_)
    if (p.first >= blocks_.size() || p.second >= blocks_.size() || p.factor >= spec_.k)
      throw std::invalid_argument("EvaluationPlan: pair refers to a missing block or factor");
}

std::span<const double> EvaluationPlan::point(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("EvaluationPlan::point: index out of range");
  return blocks_[index / spec_.N].row(index % spec_.N);
}

std::string EvaluationPlan::label(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("EvaluationPlan::label: index out of range");
  return blocks_[index / spec_.N].role().label() + "[" + std::to_string(index % spec_.N + 1) + "]";
}

std::size_t EvaluationPlan::block_index(const MatrixRole& role) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (blocks_[b].role() == role) return b;
  throw std::invalid_argument("plan has no block " + role.label());
}

std::vector<EffectPair> EvaluationPlan::effect_pairs() const {
  std::vector<EffectPair> out;
  out.reserve(pairs_.size() * spec_.N);
  for (const auto& p : pairs_)
    for (std::size_t i = 0; i < spec_.N; ++i)
      out.push_back({p.first * spec_.N + i, p.second * spec_.N + i, p.factor});
  return out;
}

std::size_t EvaluationPlan::effect_count(std::size_t factor) const {
  std::size_t count = 0;
  for (const auto& p : pairs_)
    if (p.factor == factor) count += spec_.N;
  return count;
}

std::size_t base_matrix_count(const DesignSpec& spec) { return spec.n; }

std::vector<SampleMatrix> base_matrices_from_pool(const SampleMatrix& pool, std::size_t n,
                                                  std::size_t k) {
  if (pool.cols() < n * k)
    throw std::invalid_argument("base_matrices_from_pool: pool has " + std::to_string(pool.cols()) +
                                " columns, " + std::to_string(n * k) + " needed");
  std::vector<SampleMatrix> out;
  out.reserve(n);
  for (std::size_t m = 0; m < n; ++m) out.push_back(pool.column_slice(m * k, k, MatrixRole::base_matrix(m)));
  return out;
}

EvaluationPlan assemble_plan(const DesignSpec& spec, std::span<const SampleMatrix> base_matrices) {
  spec.validate();
  if (base_matrices.size() != spec.n)
    throw std::invalid_argument(std::string(design_name(spec.kind)) + " design needs " +
                                std::to_string(spec.n) + " base matrices, got " +
                                std::to_string(base_matrices.size()));
  std::vector<SampleMatrix> bases;
  for (std::size_t m = 0; m < spec.n; ++m) {
    const auto& b = base_matrices[m];
    if (b.rows() != spec.N || b.cols() != spec.k)
      throw std::invalid_argument("base matrix " + matrix_letter(m) + " is " + std::to_string(b.rows()) +
                                  "x" + std::to_string(b.cols()) + ", expected " +
                                  std::to_string(spec.N) + "x" + std::to_string(spec.k));
    SampleMatrix copy = b;
    copy.set_role(MatrixRole::base_matrix(m));
    bases.push_back(std::move(copy));
  }

  const std::size_t k = spec.k;
  std::vector<SampleMatrix> blocks;
  std::vector<BlockPair> pairs;

  switch (spec.kind) {
    case DesignKind::Asymmetric: {
      blocks.push_back(bases[0]);
      for (std::size_t j = 1; j <= k; ++j) {
        blocks.push_back(hybrid_matrix(bases[0], bases[1], j));
        pairs.push_back({0, blocks.size() - 1, j - 1});
      }
      break;
    }
    case DesignKind::CyclicSingle: {
      blocks.push_back(bases[0]);
      for (std::size_t j = 1; j <= k; ++j) {
        blocks.push_back(cyclic_matrix(bases[0], j));
        pairs.push_back({0, blocks.size() - 1, j - 1});
      }
      break;
    }
    case DesignKind::Owen: {
      // A, B, B_A^(j), C_B^(j); C itself is never evaluated.
      blocks.push_back(bases[0]);
      blocks.push_back(bases[1]);
      for (std::size_t j = 1; j <= k; ++j) {
        blocks.push_back(hybrid_matrix(bases[1], bases[0], j));
        pairs.push_back({1, blocks.size() - 1, j - 1});
      }
      for (std::size_t j = 1; j <= k; ++j) blocks.push_back(hybrid_matrix(bases[2], bases[1], j));
      break;
    }
    case DesignKind::Symmetric2:
    case DesignKind::Multimatrix:
    case DesignKind::Lamboni: {
      const std::size_t n = spec.n;
      for (const auto& b : bases) blocks.push_back(b);
      // hybrid index: (base m, factor j, donor q) -> block
      std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> hybrid_at;
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t j = 1; j <= k; ++j)
          for (std::size_t q = 0; q < n; ++q) {
            if (q == m) continue;
            blocks.push_back(hybrid_matrix(bases[m], bases[q], j));
            hybrid_at[{m, j, q}] = blocks.size() - 1;
          }
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t j = 1; j <= k; ++j)
          for (std::size_t q = 0; q < n; ++q)
            if (q != m) pairs.push_back({m, hybrid_at.at({m, j, q}), j - 1});
      if (spec.kind == DesignKind::Multimatrix) {
        // hybrids sharing a base differ only in the borrowed coordinate
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t j = 1; j <= k; ++j)
            for (std::size_t q = 0; q < n; ++q)
              for (std::size_t r = q + 1; r < n; ++r) {
                if (q == m || r == m) continue;
                pairs.push_back({hybrid_at.at({m, j, q}), hybrid_at.at({m, j, r}), j - 1});
              }
      }
      break;
    }
  }
  return EvaluationPlan(spec, std::move(blocks), std::move(pairs));
}

SampleMatrix design_points(const EvaluationPlan& plan) {
  const std::size_t k = plan.spec().k;
  std::vector<double> values;
  values.reserve(plan.size() * k);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto x = plan.point(i);
    values.insert(values.end(), x.begin(), x.end());
  }
  return SampleMatrix(plan.size(), k, std::move(values));
}

std::size_t matched_rows(DesignKind kind, std::size_t n, std::size_t k, std::size_t target_points) {
  if (target_points == 0) throw std::invalid_argument("matched_rows: target must be positive");
  std::size_t best = 1;
  std::size_t best_gap = SIZE_MAX;
  for (unsigned e = 0; e <= kMaxBlockExponent; ++e) {
    const std::size_t N = std::size_t{1} << e;
    const std::size_t nt = points_for(kind, n, k, N);
    const std::size_t gap = nt > target_points ? nt - target_points : target_points - nt;
    if (gap < best_gap) {
      best_gap = gap;
      best = N;
    }
    if (nt >= target_points) break;
  }
  return best;
}

std::vector<DesignMetrics> budget_table(std::size_t k, std::size_t target_points) {
  if (k == 0) throw std::invalid_argument("budget_table: k must be positive");
  if (target_points < k + 1)
    throw std::invalid_argument("budget_table: target N_T = " + std::to_string(target_points) +
                                " is below the cheapest design (k + 1 = " + std::to_string(k + 1) + ")");

  auto with_discrepancy = [k](DesignSpec spec) {
    DesignMetrics m = design_metrics(spec);
    const auto p = static_cast<unsigned>(std::countr_zero(spec.N));
    const std::size_t nb = base_matrix_count(spec);
    const auto bases = base_matrices_from_pool(sobol_block(nb * k, p), nb, k);
    m.discrepancy = l2_star_discrepancy(design_points(assemble_plan(spec, bases)));
    return m;
  };

  std::vector<DesignMetrics> rows;
  rows.push_back(with_discrepancy(
      DesignSpec::make(DesignKind::Asymmetric, matched_rows(DesignKind::Asymmetric, 2, k, target_points), k)));

  // One symmetric row per N, keeping the n whose cost is nearest the target.
  std::map<std::size_t, DesignSpec, std::greater<>> by_rows;
  auto gap = [target_points](const DesignSpec& s) {
    const std::size_t nt = points_for(s.kind, s.n, s.k, s.N);
    return nt > target_points ? nt - target_points : target_points - nt;
  };
  for (std::size_t n = 2; n <= 10; ++n) {
    const std::size_t N = matched_rows(DesignKind::Multimatrix, n, k, target_points);
    const DesignSpec spec = DesignSpec::make(DesignKind::Multimatrix, N, k, n);
    auto it = by_rows.find(N);
    if (it == by_rows.end() || gap(spec) < gap(it->second)) by_rows[N] = spec;
  }
  for (const auto& [N, spec] : by_rows) rows.push_back(with_discrepancy(spec));
  return rows;
}

}  // namespace vbsa
