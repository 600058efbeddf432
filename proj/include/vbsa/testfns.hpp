#ifndef VBSA_TESTFNS_HPP
#define VBSA_TESTFNS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbsa {

/// Test-function families. A1..C2 follow the Kucherenko taxonomy; A3 and
/// GCustom are G functions with preset or user coefficients.
enum class Family { A1, A2, A3, B1, B2, B3, C1, C2, GCustom };

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);

struct FunctionSpec {
  Family family = Family::C2;
  std::size_t k = 0;
  std::vector<double> a;  // used by A2, A3, B3, C1 (all zero), GCustom

  /// Preset coefficients: A2 {0, 0.5, 3, 9, 99, 999} (truncated for k < 6,
  /// padded with 999 beyond six factors), A3 {1, 2, 4, ...}, B3 all 6.42,
  /// C1 all 0. GCustom needs explicit coefficients.
  static FunctionSpec make(Family family, std::size_t k);
  static FunctionSpec g_function(std::vector<double> a);

  bool uses_coefficients() const;
  std::string name() const { return std::string(family_name(family)); }
  void validate() const;
};

/// Model output at one point of the unit hypercube.
double evaluate(const FunctionSpec& fn, std::span<const double> x);

struct AnalyticIndices {
  double V = 0.0;
  std::vector<double> S;
  std::vector<double> T;
};

/// Exact variance, first-order and total-effect indices.
AnalyticIndices analytic_indices(const FunctionSpec& fn);

/// Mean and variance of one multiplicative factor g_j under U(0,1).
/// Throws for A1, which is not a product of one-dimensional factors.
struct FactorMoments {
  double mean;
  double variance;
};
std::vector<FactorMoments> factor_moments(const FunctionSpec& fn);

}  // namespace vbsa

#endif  // VBSA_TESTFNS_HPP
