#ifndef VBSA_QMC_HPP
#define VBSA_QMC_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vbsa {

/// One row of a direction-number table in the Joe-Kuo layout.
struct PrimitivePolynomial {
  unsigned degree;
  std::uint32_t coefficients;  // interior bits a_1 .. a_{s-1}
  std::array<std::uint32_t, 11> initial;
};

/// Direction integers for a Sobol' LP-tau generator. Dimension 0 is the
/// van der Corput dimension; dimension d > 0 uses polynomial d - 1.
class DirectionNumberTable {
 public:
  static constexpr unsigned kBits = 32;

  explicit DirectionNumberTable(std::span<const PrimitivePolynomial> polynomials);

  /// Built-in table covering 256 dimensions.
  static const DirectionNumberTable& joe_kuo();

  std::size_t max_dimension() const { return max_dimension_; }

  /// v_1 .. v_32 for one dimension, left-aligned in 32-bit words.
  std::span<const std::uint32_t> directions(std::size_t dimension) const;

 private:
  std::size_t max_dimension_;
  std::vector<std::uint32_t> v_;
};

enum class RoleKind { Base, Hybrid, Cyclic };

/// Provenance of a sample matrix: a base matrix (A, B, ...), a hybrid
/// A_B^(j) taking column j from a donor, or the cyclic single-matrix
/// variant of A whose column j is shifted by one row.
struct MatrixRole {
  RoleKind kind = RoleKind::Base;
  std::size_t base = 0;   // 0 -> A, 1 -> B, ...
  std::size_t donor = 0;  // hybrids only
  std::size_t column = 0; // 1-based factor index, hybrids and cyclic only

  static MatrixRole base_matrix(std::size_t index) { return {RoleKind::Base, index, 0, 0}; }
  static MatrixRole hybrid(std::size_t base, std::size_t donor, std::size_t column) {
    return {RoleKind::Hybrid, base, donor, column};
  }
  static MatrixRole cyclic(std::size_t base, std::size_t column) {
    return {RoleKind::Cyclic, base, 0, column};
  }

  std::string label() const;
  friend bool operator==(const MatrixRole&, const MatrixRole&) = default;
};

/// Letter used for the i-th base matrix (A, B, ..., Z, then M26, M27, ...).
std::string matrix_letter(std::size_t index);

/// Row-major block of points in the unit hypercube.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols, MatrixRole role = {});
  SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values, MatrixRole role = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const MatrixRole& role() const { return role_; }
  void set_role(MatrixRole role) { role_ = role; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> values() const { return values_; }

  /// First `count` rows.
  SampleMatrix head(std::size_t count) const;
  /// Columns [first, first + count) as a new matrix.
  SampleMatrix column_slice(std::size_t first, std::size_t count, MatrixRole role = {}) const;

  friend bool operator==(const SampleMatrix& a, const SampleMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  MatrixRole role_;
};

/// A bijection on column indices together with the seed that produced it.
class ColumnPermutation {
 public:
  explicit ColumnPermutation(std::vector<std::size_t> image, std::uint64_t seed = 0);

  static ColumnPermutation identity(std::size_t size);
  /// Fisher-Yates shuffle driven by a seeded mt19937_64. The bounded draw
  /// is done here rather than with std::uniform_int_distribution so the
  /// result is identical across standard library implementations.
  static ColumnPermutation draw(std::size_t size, std::uint64_t seed);

  std::size_t size() const { return image_.size(); }
  std::size_t operator()(std::size_t i) const { return image_[i]; }
  std::span<const std::size_t> image() const { return image_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<std::size_t> image_;
  std::uint64_t seed_;
};

/// Largest supported block exponent: indices 1..2^p must fit the 32-bit
/// direction integers.
inline constexpr unsigned kMaxBlockExponent = 31;

/// Sobol' points at sequence indices 1..2^p in Gray-code order. The origin
/// (index 0) is skipped so every coordinate is strictly positive.
SampleMatrix sobol_block(std::size_t dim_count, unsigned p,
                         const DirectionNumberTable& table = DirectionNumberTable::joe_kuo());

/// Output column i is input column perm(i).
SampleMatrix permute_columns(const SampleMatrix& pool, const ColumnPermutation& perm);

/// L2-star discrepancy via Warnock's closed form.
double l2_star_discrepancy(const SampleMatrix& points);

/// Stacks matrices with equal column count into one point set.
SampleMatrix pool_rows(std::span<const SampleMatrix> blocks);

/// One row per point, comma separated, 17 significant digits.
void write_csv(std::ostream& out, const SampleMatrix& m);

}  // namespace vbsa

#endif  // VBSA_QMC_HPP
