#include "vbsa/testfns.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace vbsa {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 9> kNames{{
    {Family::A1, "A1"},
    {Family::A2, "A2"},
    {Family::A3, "A3"},
    {Family::B1, "B1"},
    {Family::B2, "B2"},
    {Family::B3, "B3"},
    {Family::C1, "C1"},
    {Family::C2, "C2"},
    {Family::GCustom, "G"},
}};

bool is_g_family(Family f) {
  return f == Family::A2 || f == Family::A3 || f == Family::B3 || f == Family::C1 ||
         f == Family::GCustom;
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& [family, name] : kNames)
    if (family == f) return name;
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [family, n] : kNames)
    if (n == name) return family;
  return std::nullopt;
}

FunctionSpec FunctionSpec::make(Family family, std::size_t k) {
  FunctionSpec fn{family, k, {}};
  switch (family) {
    case Family::A2: {
      constexpr std::array<double, 6> preset{0.0, 0.5, 3.0, 9.0, 99.0, 999.0};
      for (std::size_t j = 0; j < k; ++j) fn.a.push_back(j < preset.size() ? preset[j] : 999.0);
      break;
    }
    case Family::A3:
      for (std::size_t j = 0; j < k; ++j) fn.a.push_back(std::ldexp(1.0, static_cast<int>(j)));
      break;
    case Family::B3:
      fn.a.assign(k, 6.42);
      break;
    case Family::C1:
      fn.a.assign(k, 0.0);
      break;
    case Family::GCustom:
      throw std::invalid_argument("G function needs explicit coefficients");
    default:
      break;
  }
  fn.validate();
  return fn;
}

FunctionSpec FunctionSpec::g_function(std::vector<double> a) {
  FunctionSpec fn{Family::GCustom, a.size(), std::move(a)};
  fn.validate();
  return fn;
}

bool FunctionSpec::uses_coefficients() const { return is_g_family(family); }

void FunctionSpec::validate() const {
  if (k == 0) throw std::invalid_argument(name() + ": factor count must be positive");
  if (!uses_coefficients()) return;
  if (a.size() != k)
    throw std::invalid_argument(name() + ": expected " + std::to_string(k) + " coefficients, got " +
                                std::to_string(a.size()));
  for (double aj : a)
    if (!(aj >= 0.0)) throw std::invalid_argument(name() + ": coefficients must be non-negative");
}

double evaluate(const FunctionSpec& fn, std::span<const double> x) {
  if (x.size() != fn.k)
    throw std::invalid_argument("evaluate: point has " + std::to_string(x.size()) +
                                " coordinates, function expects " + std::to_string(fn.k));
  const double k = static_cast<double>(fn.k);
  switch (fn.family) {
    case Family::A1: {
      double sum = 0.0;
      double prod = 1.0;
      double sign = -1.0;
      for (double xl : x) {
        prod *= xl;
        sum += sign * prod;
        sign = -sign;
      }
      return sum;
    }
    case Family::B1: {
      double prod = 1.0;
      for (double xj : x) prod *= (k - xj) / (k - 0.5);
      return prod;
    }
    case Family::B2: {
      double prod = std::pow(1.0 + 1.0 / k, k);
      for (double xj : x) prod *= std::pow(xj, 1.0 / k);
      return prod;
    }
    case Family::C2: {
      double prod = std::ldexp(1.0, static_cast<int>(fn.k));
      for (double xj : x) prod *= xj;
      return prod;
    }
    case Family::C1: {
      double prod = 1.0;
      for (double xj : x) prod *= std::abs(4.0 * xj - 2.0);
      return prod;
    }
    case Family::A2:
    case Family::A3:
    case Family::B3:
    case Family::GCustom: {
      double prod = 1.0;
      for (std::size_t j = 0; j < fn.k; ++j)
        prod *= (std::abs(4.0 * x[j] - 2.0) + fn.a[j]) / (1.0 + fn.a[j]);
      return prod;
    }
  }
  throw std::invalid_argument("evaluate: unsupported family");
}

std::vector<FactorMoments> factor_moments(const FunctionSpec& fn) {
  fn.validate();
  const double k = static_cast<double>(fn.k);
  std::vector<FactorMoments> out(fn.k);
  for (std::size_t j = 0; j < fn.k; ++j) {
    switch (fn.family) {
      case Family::A1:
        throw std::invalid_argument("factor_moments: A1 is not multiplicative");
      case Family::B1:
        // (k - x)/(k - 1/2): Var[x] / (k - 1/2)^2
        out[j] = {1.0, 1.0 / (12.0 * (k - 0.5) * (k - 0.5))};
        break;
      case Family::B2:
        // (1 + 1/k) x^(1/k): E[g^2] = (1 + 1/k)^2 / (1 + 2/k)
        out[j] = {1.0, 1.0 / (k * (k + 2.0))};
        break;
      case Family::C2:
        out[j] = {1.0, 1.0 / 3.0};
        break;
      default: {
        // E|4x - 2| = 1, E(4x - 2)^2 = 4/3
        const double a = fn.a[j];
        out[j] = {1.0, 1.0 / (3.0 * (1.0 + a) * (1.0 + a))};
      }
    }
  }
  return out;
}

namespace {

// A1 is multilinear. With x_l = 1/2 + u_l it expands as sum_S c_S prod_{l in S} u_l,
// and orthogonality of the u-monomials gives the ANOVA component
// V_S = c_S^2 12^-|S|. c_S depends only on m = max S and s = |S|:
//   c(m, s) = sum_{i=m}^{k} (-1)^i 2^(s-i).
AnalyticIndices a1_indices(std::size_t k) {
  auto coeff = [k](std::size_t m, std::size_t s) {
    double c = 0.0;
    for (std::size_t i = m; i <= k; ++i)
      c += (i % 2 ? -1.0 : 1.0) * std::ldexp(1.0, static_cast<int>(s) - static_cast<int>(i));
    return c;
  };
  auto binom = [](std::size_t n, std::size_t r) {
    if (r > n) return 0.0;
    double b = 1.0;
    for (std::size_t i = 1; i <= r; ++i) b = b * static_cast<double>(n - r + i) / static_cast<double>(i);
    return b;
  };
  auto component = [&](std::size_t m, std::size_t s) {
    const double c = coeff(m, s);
    return c * c * std::pow(12.0, -static_cast<double>(s));
  };

  AnalyticIndices out;
  out.S.resize(k);
  out.T.resize(k);
  for (std::size_t m = 1; m <= k; ++m)
    for (std::size_t s = 1; s <= m; ++s) out.V += binom(m - 1, s - 1) * component(m, s);

  for (std::size_t j = 1; j <= k; ++j) {
    out.S[j - 1] = component(j, 1) / out.V;
    double total = 0.0;
    // subsets whose maximum is j itself
    for (std::size_t s = 1; s <= j; ++s) total += binom(j - 1, s - 1) * component(j, s);
    // subsets containing j with a larger maximum m
    for (std::size_t m = j + 1; m <= k; ++m)
      for (std::size_t s = 2; s <= m; ++s) total += binom(m - 2, s - 2) * component(m, s);
    out.T[j - 1] = total / out.V;
  }
  return out;
}

}  // namespace

AnalyticIndices analytic_indices(const FunctionSpec& fn) {
  fn.validate();
  if (fn.family == Family::A1) return a1_indices(fn.k);

  const auto moments = factor_moments(fn);
  double second = 1.0;  // prod (mu^2 + v)
  double mean_sq = 1.0; // prod mu^2
  for (const auto& m : moments) {
    second *= m.mean * m.mean + m.variance;
    mean_sq *= m.mean * m.mean;
  }
  AnalyticIndices out;
  out.V = second - mean_sq;
  if (!(out.V > 0.0)) throw std::invalid_argument("analytic_indices: function has zero variance");
  out.S.resize(fn.k);
  out.T.resize(fn.k);
  for (std::size_t j = 0; j < fn.k; ++j) {
    const auto& m = moments[j];
    const double mu_sq = m.mean * m.mean;
    out.S[j] = m.variance * (mean_sq / mu_sq) / out.V;
    out.T[j] = m.variance * (second / (mu_sq + m.variance)) / out.V;
  }
  return out;
}

}  // namespace vbsa
