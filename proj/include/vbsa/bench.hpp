#ifndef VBSA_BENCH_HPP
#define VBSA_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vbsa/adaptive.hpp"
#include "vbsa/estimators.hpp"
#include "vbsa/testfns.hpp"

namespace vbsa {

/// An estimator plus its base-matrix count (multimatrix and Lamboni only).
struct EstimatorChoice {
  Estimator estimator = Estimator::Saltenis;
  std::size_t n = 2;

  std::string label() const;
  /// Base matrices taken from the column pool.
  std::size_t matrices() const;
};

/// The scrambled pool always spans at least this many k-column matrices, so
/// an estimator's results do not depend on which others share the sweep.
inline constexpr std::size_t kMinPoolMatrices = 6;

struct ExperimentConfig {
  FunctionSpec function;
  std::vector<EstimatorChoice> estimators{{Estimator::Saltenis, 2}};
  unsigned p_min = 2;
  unsigned p_max = 14;
  std::size_t repetitions = 50;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  void validate() const;
  /// Columns scrambled per repetition: k times max(6, largest matrix count).
  std::size_t pool_columns() const;
};

/// One row of a convergence sweep. Per-repetition records carry T_hat and
/// that repetition's mean absolute deviation; aggregate records (no rep)
/// carry the MAE over repetitions.
struct ConvergenceRecord {
  std::string function;
  std::string estimator;
  std::size_t n = 0;
  unsigned p = 0;  // log2 N
  std::size_t N = 0;
  std::size_t N_T = 0;
  std::optional<std::size_t> rep;
  std::vector<double> T_hat;
  double mae = 0.0;
};

struct CellError {
  std::string estimator;
  unsigned p;
  std::size_t rep;
  std::string message;
};

struct ExperimentResult {
  std::vector<ConvergenceRecord> records;
  std::vector<CellError> errors;
};

/// Mean over k of |T_hat_j - T_j|.
double mean_absolute_deviation(std::span<const double> estimate, std::span<const double> analytic);

/// Mean over repetitions of the per-repetition mean absolute deviation.
double mae(std::span<const std::vector<double>> estimates, std::span<const double> analytic);

/// Seed used for repetition `rep` under a master seed.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep);

/// Runs every (estimator, p, repetition) cell. For each repetition one
/// column permutation of the pool is shared by all estimators; each
/// estimator's N is the power of two whose N_T is nearest the asymmetric
/// design's (k + 1) 2^p. Cells matching N < 2 or an N already used are
/// skipped. Failing cells are reported, not thrown.
ExperimentResult convergence_experiment(const ExperimentConfig& cfg);

struct AdaptiveExperimentConfig {
  FunctionSpec function;
  unsigned p_min = 6;
  unsigned p_max = 12;
  std::size_t repetitions = 50;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct AdaptiveLedgerRecord {
  unsigned p;
  std::size_t rep;
  BlockLedger block;
  std::size_t budget;
};

struct AdaptiveExperimentResult {
  std::vector<ConvergenceRecord> records;  // estimators "saltenis" and "adaptive", N_T = (k+1) 2^p
  std::vector<AdaptiveLedgerRecord> ledgers;
  std::vector<CellError> errors;
};

/// Plain asymmetric estimation against the adaptive strategy on shared
/// scrambled A and B; both are reported at full cost (k + 1) 2^p.
AdaptiveExperimentResult adaptive_experiment(const AdaptiveExperimentConfig& cfg);

/// Columns: function,estimator,n,p,N,N_T,rep,factor,T_hat,mae. Aggregate
/// records take one line (rep and factor "all"); per-repetition records
/// take one line per factor.
void write_records_csv(std::ostream& out, std::span<const ConvergenceRecord> records);

/// Log-log MAE versus N_T, one polyline per estimator, from aggregate records.
void write_mae_svg(std::ostream& out, std::span<const ConvergenceRecord> records, const std::string& title);

struct ScatterPoint {
  std::string label;
  double x;
  double y;
};

/// Labelled points on linear axes spanning [0, max] in each direction.
void write_scatter_svg(std::ostream& out, std::span<const ScatterPoint> points, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

void write_errors_csv(std::ostream& out, std::span<const CellError> errors);
void write_ledger_csv(std::ostream& out, std::span<const AdaptiveLedgerRecord> ledgers);

enum class ExportFormat { Csv, Svg, Both };

/// Writes <stem>.csv and/or <stem>.svg under `dir`, creating it if needed.
/// Returns the written paths.
std::vector<std::filesystem::path> export_records(std::span<const ConvergenceRecord> records,
                                                  const std::filesystem::path& dir,
                                                  const std::string& stem, ExportFormat format);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace vbsa

#endif  // VBSA_BENCH_HPP
