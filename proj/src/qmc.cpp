#include "vbsa/qmc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace vbsa {

DirectionNumberTable::DirectionNumberTable(std::span<const PrimitivePolynomial> polynomials)
    : max_dimension_(polynomials.size() + 1), v_(max_dimension_ * kBits) {
  for (unsigned i = 1; i <= kBits; ++i) v_[i - 1] = 1u << (kBits - i);

  for (std::size_t d = 1; d < max_dimension_; ++d) {
    const PrimitivePolynomial& poly = polynomials[d - 1];
    const unsigned s = poly.degree;
    if (s == 0 || s > poly.initial.size())
      throw std::invalid_argument("direction table: bad polynomial degree in dimension " +
                                  std::to_string(d));
    std::uint32_t* v = v_.data() + d * kBits;
    for (unsigned i = 1; i <= s; ++i) {
      const std::uint32_t m = poly.initial[i - 1];
      if (m % 2 == 0 || m >= (std::uint32_t{1} << i))
        throw std::invalid_argument("direction table: m_" + std::to_string(i) +
                                    " must be odd and below 2^i in dimension " + std::to_string(d));
      v[i - 1] = m << (kBits - i);
    }
    for (unsigned i = s + 1; i <= kBits; ++i) {
      std::uint32_t value = v[i - s - 1] ^ (v[i - s - 1] >> s);
      for (unsigned l = 1; l < s; ++l) {
        if ((poly.coefficients >> (s - 1 - l)) & 1u) value ^= v[i - l - 1];
      }
      v[i - 1] = value;
    }
  }
}

std::span<const std::uint32_t> DirectionNumberTable::directions(std::size_t dimension) const {
  if (dimension >= max_dimension_)
    throw std::out_of_range("dimension " + std::to_string(dimension) +
                            " exceeds the direction-number table (" +
                            std::to_string(max_dimension_) + " dimensions)");
  return {v_.data() + dimension * kBits, kBits};
}

std::string matrix_letter(std::size_t index) {
  if (index < 26) return std::string(1, static_cast<char>('A' + index));
  return "M" + std::to_string(index);
}

std::string MatrixRole::label() const {
  switch (kind) {
    case RoleKind::Base:
      return matrix_letter(base);
    case RoleKind::Hybrid:
      return matrix_letter(base) + "_" + matrix_letter(donor) + "(" + std::to_string(column) + ")";
    case RoleKind::Cyclic:
      return matrix_letter(base) + "_cyc(" + std::to_string(column) + ")";
  }
  return {};
}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, MatrixRole role)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0), role_(role) {}

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                           MatrixRole role)
    : rows_(rows), cols_(cols), values_(std::move(values)), role_(role) {
  if (values_.size() != rows * cols)
    throw std::invalid_argument("SampleMatrix: value count does not match rows x cols");
}

SampleMatrix SampleMatrix::head(std::size_t count) const {
  if (count > rows_) throw std::out_of_range("SampleMatrix::head: not enough rows");
  return SampleMatrix(count, cols_,
                      std::vector<double>(values_.begin(),
                                          values_.begin() + static_cast<std::ptrdiff_t>(count * cols_)),
                      role_);
}

SampleMatrix SampleMatrix::column_slice(std::size_t first, std::size_t count, MatrixRole role) const {
  if (first + count > cols_) throw std::out_of_range("SampleMatrix::column_slice: not enough columns");
  SampleMatrix out(rows_, count, role);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
  return out;
}

ColumnPermutation::ColumnPermutation(std::vector<std::size_t> image, std::uint64_t seed)
    : image_(std::move(image)), seed_(seed) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t target : image_) {
    if (target >= image_.size() || seen[target])
      throw std::invalid_argument("ColumnPermutation: image is not a permutation");
    seen[target] = true;
  }
}

ColumnPermutation ColumnPermutation::identity(std::size_t size) {
  std::vector<std::size_t> image(size);
  for (std::size_t i = 0; i < size; ++i) image[i] = i;
  return ColumnPermutation(std::move(image));
}

namespace {

// Lemire's nearly-divisionless bounded draw on a 64-bit engine.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  using u128 = unsigned __int128;
  u128 m = u128(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = u128(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace

ColumnPermutation ColumnPermutation::draw(std::size_t size, std::uint64_t seed) {
  std::vector<std::size_t> image(size);
  for (std::size_t i = 0; i < size; ++i) image[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = size; i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(image[i - 1], image[j]);
  }
  return ColumnPermutation(std::move(image), seed);
}

SampleMatrix sobol_block(std::size_t dim_count, unsigned p, const DirectionNumberTable& table) {
  if (dim_count == 0) throw std::invalid_argument("sobol_block: dim_count must be positive");
  if (dim_count > table.max_dimension())
    throw std::out_of_range("sobol_block: " + std::to_string(dim_count) +
                            " dimensions requested, table covers " +
                            std::to_string(table.max_dimension()));
  if (p > kMaxBlockExponent)
    throw std::overflow_error("sobol_block: 2^" + std::to_string(p) +
                              " points exceed the 32-bit index range");

  const std::size_t rows = std::size_t{1} << p;
  SampleMatrix out(rows, dim_count);
  constexpr double scale = 1.0 / 4294967296.0;

  std::vector<std::uint32_t> state(dim_count, 0);
  std::vector<std::span<const std::uint32_t>> v(dim_count);
  for (std::size_t d = 0; d < dim_count; ++d) v[d] = table.directions(d);

  // Gray-code step: point n differs from point n-1 by the direction number
  // indexed by the lowest zero bit of n-1.
  for (std::size_t n = 1; n <= rows; ++n) {
    const auto c = static_cast<unsigned>(std::countr_one(n - 1));
    for (std::size_t d = 0; d < dim_count; ++d) {
      state[d] ^= v[d][c];
      out(n - 1, d) = static_cast<double>(state[d]) * scale;
    }
  }
  return out;
}

SampleMatrix permute_columns(const SampleMatrix& pool, const ColumnPermutation& perm) {
  if (perm.size() != pool.cols())
    throw std::invalid_argument("permute_columns: permutation has length " +
                                std::to_string(perm.size()) + " but the pool has " +
                                std::to_string(pool.cols()) + " columns");
  SampleMatrix out(pool.rows(), pool.cols(), pool.role());
  for (std::size_t i = 0; i < pool.rows(); ++i)
    for (std::size_t j = 0; j < pool.cols(); ++j) out(i, j) = pool(i, perm(j));
  return out;
}

double l2_star_discrepancy(const SampleMatrix& points) {
  const std::size_t m = points.rows();
  const std::size_t d = points.cols();
  if (m == 0 || d == 0) throw std::invalid_argument("l2_star_discrepancy: empty point set");
  for (double x : points.values())
    if (!(x >= 0.0 && x <= 1.0))
      throw std::invalid_argument("l2_star_discrepancy: coordinates must lie in [0,1]");

  // D^2 = 3^-d - 2^(1-d)/M sum_i prod_k (1 - x_ik^2)
  //       + 1/M^2 sum_i sum_l prod_k (1 - max(x_ik, x_lk))
  double single = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double prod = 1.0;
    for (double x : points.row(i)) prod *= 1.0 - x * x;
    single += prod;
  }
  double pair = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto xi = points.row(i);
    double prod = 1.0;
    for (std::size_t k = 0; k < d; ++k) prod *= 1.0 - xi[k];
    pair += prod;  // diagonal term
    for (std::size_t l = i + 1; l < m; ++l) {
      const auto xl = points.row(l);
      prod = 1.0;
      for (std::size_t k = 0; k < d; ++k) prod *= 1.0 - std::max(xi[k], xl[k]);
      pair += 2.0 * prod;
    }
  }
  const double dd = static_cast<double>(d);
  const double mm = static_cast<double>(m);
  const double squared = std::pow(3.0, -dd) - std::pow(2.0, 1.0 - dd) / mm * single + pair / (mm * mm);
  return std::sqrt(std::max(squared, 0.0));
}

SampleMatrix pool_rows(std::span<const SampleMatrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("pool_rows: no blocks");
  const std::size_t cols = blocks.front().cols();
  std::vector<double> values;
  std::size_t rows = 0;
  for (const SampleMatrix& b : blocks) {
    if (b.cols() != cols) throw std::invalid_argument("pool_rows: column counts differ");
    values.insert(values.end(), b.values().begin(), b.values().end());
    rows += b.rows();
  }
  return SampleMatrix(rows, cols, std::move(values));
}

void write_csv(std::ostream& out, const SampleMatrix& m) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace vbsa
