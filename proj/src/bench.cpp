#include "vbsa/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "vbsa/designs.hpp"

namespace vbsa {

std::string EstimatorChoice::label() const {
  std::string name(estimator_name(estimator));
  if (estimator == Estimator::Multimatrix || estimator == Estimator::Lamboni) name += "_n" + std::to_string(n);
  return name;
}

std::size_t EstimatorChoice::matrices() const {
  switch (estimator) {
    case Estimator::Saltenis:
    case Estimator::GlenIsaacs:
    case Estimator::Symmetric:
      return 2;
    case Estimator::Owen:
      return 3;
    case Estimator::Cyclic:
      return 1;
    case Estimator::Multimatrix:
    case Estimator::Lamboni:
      return n;
  }
  return 2;
}

void ExperimentConfig::validate() const {
  function.validate();
  if (estimators.empty()) throw std::invalid_argument("experiment: no estimators");
  if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be at least 1");
  if (p_min > p_max) throw std::invalid_argument("experiment: empty p range");
  if (p_max > 24) throw std::invalid_argument("experiment: p_max above 24 is not supported");
  for (const auto& e : estimators) {
    if ((e.estimator == Estimator::Multimatrix || e.estimator == Estimator::Lamboni) && e.n < 2)
      throw std::invalid_argument("experiment: " + e.label() + " needs n >= 2");
  }
  if (pool_columns() > DirectionNumberTable::joe_kuo().max_dimension())
    throw std::invalid_argument("experiment: " + std::to_string(pool_columns()) +
                                " columns exceed the direction-number table");
}

std::size_t ExperimentConfig::pool_columns() const {
  std::size_t n_max = kMinPoolMatrices;
  for (const auto& e : estimators) n_max = std::max(n_max, e.matrices());
  return n_max * function.k;
}

double mean_absolute_deviation(std::span<const double> estimate, std::span<const double> analytic) {
  if (estimate.size() != analytic.size() || analytic.empty())
    throw std::invalid_argument("mean_absolute_deviation: shape mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < analytic.size(); ++j) s += std::abs(estimate[j] - analytic[j]);
  return s / static_cast<double>(analytic.size());
}

double mae(std::span<const std::vector<double>> estimates, std::span<const double> analytic) {
  if (estimates.empty()) throw std::invalid_argument("mae: no repetitions");
  double s = 0.0;
  for (const auto& row : estimates) s += mean_absolute_deviation(row, analytic);
  return s / static_cast<double>(estimates.size());
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep) {
  // splitmix64 finaliser over (master, rep)
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(rep) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

std::size_t resolve_threads(std::size_t requested, std::size_t work) {
  std::size_t t = requested ? requested : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(t, work));
}

/// Runs body(rep) for rep in [0, count) on `threads` workers.
template <typename Body>
void for_each_repetition(std::size_t count, std::size_t threads, Body body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < count; r = next++) body(r);
  };
  const std::size_t t = resolve_threads(threads, count);
  if (t == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t i = 0; i < t; ++i) pool.emplace_back(worker);
}

unsigned log2_exact(std::size_t N) { return static_cast<unsigned>(std::countr_zero(N)); }

struct Cell {
  std::size_t N;
  std::size_t N_T;
  unsigned sweep_p;
};

}  // namespace

ExperimentResult convergence_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const FunctionSpec& fn = cfg.function;
  const std::size_t k = fn.k;
  const AnalyticIndices analytic = analytic_indices(fn);

  // Cost-matched row counts per estimator; repeated N values and single-row
  // matrices (no variance) are dropped.
  std::vector<std::vector<Cell>> cells(cfg.estimators.size());
  std::size_t max_rows = 1;
  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    const auto& choice = cfg.estimators[e];
    const DesignKind kind = design_for(choice.estimator, 1, k, std::max<std::size_t>(choice.n, 2)).kind;
    for (unsigned p = cfg.p_min; p <= cfg.p_max; ++p) {
      const std::size_t target = (k + 1) << p;
      const std::size_t N = matched_rows(kind, choice.n, k, target);
      if (N < 2 || (!cells[e].empty() && cells[e].back().N == N)) continue;
      const std::size_t nt = design_metrics(design_for(choice.estimator, N, k, std::max<std::size_t>(choice.n, 2))).total_points;
      cells[e].push_back({N, nt, p});
      max_rows = std::max(max_rows, N);
    }
  }

  const std::size_t columns = cfg.pool_columns();
  const SampleMatrix pool = sobol_block(columns, log2_exact(max_rows));

  // estimates[e][cell][rep]
  using Slot = std::optional<std::vector<double>>;
  std::vector<std::vector<std::vector<Slot>>> estimates(cfg.estimators.size());
  std::vector<std::vector<std::vector<std::string>>> failures(cfg.estimators.size());
  for (std::size_t e = 0; e < cells.size(); ++e) {
    estimates[e].assign(cells[e].size(), std::vector<Slot>(cfg.repetitions));
    failures[e].assign(cells[e].size(), std::vector<std::string>(cfg.repetitions));
  }

  for_each_repetition(cfg.repetitions, cfg.threads, [&](std::size_t rep) {
    const auto perm = ColumnPermutation::draw(columns, repetition_seed(cfg.seed, rep));
    const SampleMatrix scrambled = permute_columns(pool, perm);
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
      const auto& choice = cfg.estimators[e];
      for (std::size_t c = 0; c < cells[e].size(); ++c) {
        try {
          const std::size_t N = cells[e][c].N;
          const auto bases = base_matrices_from_pool(scrambled.head(N), choice.matrices(), k);
          const DesignSpec spec = design_for(choice.estimator, N, k, std::max<std::size_t>(choice.n, 2));
          estimates[e][c][rep] = estimate(choice.estimator, spec, bases, fn).T;
        } catch (const std::exception& ex) {
          failures[e][c][rep] = ex.what();
        }
      }
    }
  });

  ExperimentResult result;
  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    const auto& choice = cfg.estimators[e];
    const std::size_t n = choice.matrices();
    for (std::size_t c = 0; c < cells[e].size(); ++c) {
      const Cell& cell = cells[e][c];
      ConvergenceRecord base{fn.name(), choice.label(), n, log2_exact(cell.N), cell.N, cell.N_T, std::nullopt, {}, 0.0};
      std::vector<std::vector<double>> ok;
      for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const Slot& slot = estimates[e][c][rep];
        if (!slot) {
          result.errors.push_back({choice.label(), base.p, rep, failures[e][c][rep]});
          continue;
        }
        ConvergenceRecord r = base;
        r.rep = rep;
        r.T_hat = *slot;
        r.mae = mean_absolute_deviation(*slot, analytic.T);
        result.records.push_back(std::move(r));
        ok.push_back(*slot);
      }
      if (!ok.empty()) {
        ConvergenceRecord agg = base;
        agg.mae = mae(ok, analytic.T);
        result.records.push_back(std::move(agg));
      }
    }
  }
  return result;
}

AdaptiveExperimentResult adaptive_experiment(const AdaptiveExperimentConfig& cfg) {
  const FunctionSpec& fn = cfg.function;
  fn.validate();
  if (cfg.repetitions < 1) throw std::invalid_argument("adaptive experiment: repetitions must be at least 1");
  if (cfg.p_min > cfg.p_max) throw std::invalid_argument("adaptive experiment: empty p range");
  if (cfg.p_max > 22) throw std::invalid_argument("adaptive experiment: p_max above 22 is not supported");
  const std::size_t k = fn.k;
  const AnalyticIndices analytic = analytic_indices(fn);
  const std::size_t columns = 2 * k;
  const SampleMatrix pool = sobol_block(columns, cfg.p_max + 1);
  const std::size_t cells = cfg.p_max - cfg.p_min + 1;

  struct RepOutput {
    std::vector<std::optional<std::vector<double>>> plain, adaptive;
    std::vector<std::vector<BlockLedger>> ledgers;
    std::vector<std::size_t> budgets;
    std::vector<std::string> errors;
  };
  std::vector<RepOutput> outputs(cfg.repetitions);

  for_each_repetition(cfg.repetitions, cfg.threads, [&](std::size_t rep) {
    RepOutput& out = outputs[rep];
    out.plain.resize(cells);
    out.adaptive.resize(cells);
    out.ledgers.resize(cells);
    out.budgets.resize(cells);
    out.errors.resize(cells);
    const auto perm = ColumnPermutation::draw(columns, repetition_seed(cfg.seed, rep));
    const SampleMatrix scrambled = permute_columns(pool, perm);
    for (std::size_t c = 0; c < cells; ++c) {
      const unsigned p = cfg.p_min + static_cast<unsigned>(c);
      try {
        const auto wide = base_matrices_from_pool(scrambled.head(std::size_t{1} << (p + 1)), 2, k);
        const auto narrow = base_matrices_from_pool(scrambled.head(std::size_t{1} << p), 2, k);
        out.plain[c] = estimate(Estimator::Saltenis, DesignSpec::make(DesignKind::Asymmetric, std::size_t{1} << p, k),
                                narrow, fn)
                           .T;
        AdaptiveResult ar = adaptive_run(fn, p, wide);
        out.adaptive[c] = ar.estimate.T;
        out.ledgers[c] = std::move(ar.ledger);
        out.budgets[c] = ar.budget;
      } catch (const std::exception& ex) {
        out.errors[c] = ex.what();
      }
    }
  });

  AdaptiveExperimentResult result;
  for (const char* name : {"saltenis", "adaptive"}) {
    const bool is_adaptive = std::string(name) == "adaptive";
    for (std::size_t c = 0; c < cells; ++c) {
      const unsigned p = cfg.p_min + static_cast<unsigned>(c);
      const std::size_t N = std::size_t{1} << p;
      ConvergenceRecord base{fn.name(), name, 2, p, N, (k + 1) * N, std::nullopt, {}, 0.0};
      std::vector<std::vector<double>> ok;
      for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const auto& slot = is_adaptive ? outputs[rep].adaptive[c] : outputs[rep].plain[c];
        if (!slot) {
          result.errors.push_back({name, p, rep, outputs[rep].errors[c]});
          continue;
        }
        ConvergenceRecord r = base;
        r.rep = rep;
        r.T_hat = *slot;
        r.mae = mean_absolute_deviation(*slot, analytic.T);
        result.records.push_back(std::move(r));
        ok.push_back(*slot);
      }
      if (!ok.empty()) {
        base.mae = mae(ok, analytic.T);
        result.records.push_back(std::move(base));
      }
    }
  }
  for (std::size_t c = 0; c < cells; ++c)
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
      for (const auto& block : outputs[rep].ledgers[c])
        result.ledgers.push_back({cfg.p_min + static_cast<unsigned>(c), rep, block, outputs[rep].budgets[c]});
  return result;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_records_csv(std::ostream& out, std::span<const ConvergenceRecord> records) {
  out << "function,estimator,n,p,N,N_T,rep,factor,T_hat,mae\n";
  for (const auto& r : records) {
    const std::string prefix = r.function + "," + r.estimator + "," + std::to_string(r.n) + "," +
                               std::to_string(r.p) + "," + std::to_string(r.N) + "," + std::to_string(r.N_T) + ",";
    if (!r.rep) {
      out << prefix << "all,all,," << format_double(r.mae) << '\n';
      continue;
    }
    for (std::size_t j = 0; j < r.T_hat.size(); ++j)
      out << prefix << *r.rep << ',' << (j + 1) << ',' << format_double(r.T_hat[j]) << ','
          << format_double(r.mae) << '\n';
  }
}

void write_errors_csv(std::ostream& out, std::span<const CellError> errors) {
  out << "estimator,p,rep,message\n";
  for (const auto& e : errors) {
    std::string msg = e.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out << e.estimator << ',' << e.p << ',' << e.rep << ',' << msg << '\n';
  }
}

void write_ledger_csv(std::ostream& out, std::span<const AdaptiveLedgerRecord> ledgers) {
  out << "p,rep,block,row_begin,row_end,active,dropped,runs,cumulative_runs,budget\n";
  auto join = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i] + 1);
    return s;
  };
  for (const auto& l : ledgers)
    out << l.p << ',' << l.rep << ',' << l.block.block << ',' << l.block.row_begin << ',' << l.block.row_end << ','
        << join(l.block.active) << ',' << join(l.block.dropped) << ',' << l.block.runs << ','
        << l.block.cumulative_runs << ',' << l.budget << '\n';
}

namespace {

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_mae_svg(std::ostream& out, std::span<const ConvergenceRecord> records, const std::string& title) {
  // series in first-seen order
  std::vector<std::string> names;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& r : records) {
    if (r.rep || !(r.mae > 0.0)) continue;
    if (!series.count(r.estimator)) names.push_back(r.estimator);
    series[r.estimator].emplace_back(std::log10(static_cast<double>(r.N_T)), std::log10(r.mae));
  }
  if (names.empty()) throw std::invalid_argument("write_mae_svg: no aggregate records with positive MAE");

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& [name, pts] : series)
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);

  const double W = 640, H = 480, left = 70, right = 170, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\"" << fixed(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double x = x0; x <= x1 + 1e-9; x += 1.0) {
    out << "<line x1=\"" << fixed(sx(x)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(sx(x)) << "\" y2=\""
        << fixed(top + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(sx(x)) << "\" y=\"" << fixed(top + ph + 20) << "\" text-anchor=\"middle\">1e"
        << static_cast<int>(x) << "</text>\n";
  }
  for (double y = y0; y <= y1 + 1e-9; y += 1.0) {
    out << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(sy(y)) << "\" x2=\"" << fixed(left) << "\" y2=\""
        << fixed(sy(y)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(y) + 4) << "\" text-anchor=\"end\">1e"
        << static_cast<int>(y) << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(H - 15) << "\" text-anchor=\"middle\">N_T (total model runs)</text>\n";
  out << "<text x=\"18\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(top + ph / 2) << ")\">MAE</text>\n";

  for (std::size_t s = 0; s < names.size(); ++s) {
    const char* colour = kPalette[s % kPalette.size()];
    out << "<polyline class=\"series\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    const auto& pts = series[names[s]];
    for (std::size_t i = 0; i < pts.size(); ++i)
      out << (i ? " " : "") << fixed(sx(pts[i].first)) << ',' << fixed(sy(pts[i].second));
    out << "\"/>\n";
    for (const auto& [x, y] : pts)
      out << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
  }
  out << "<g class=\"legend\">\n";
  for (std::size_t s = 0; s < names.size(); ++s) {
    const double ly = top + 10 + 18.0 * static_cast<double>(s);
    const char* colour = kPalette[s % kPalette.size()];
    out << "<line x1=\"" << fixed(W - right + 15) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(W - right + 35)
        << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fixed(W - right + 40) << "\" y=\"" << fixed(ly + 4) << "\">" << names[s] << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_scatter_svg(std::ostream& out, std::span<const ScatterPoint> points, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  if (points.empty()) throw std::invalid_argument("write_scatter_svg: no points");
  double x1 = 0.0, y1 = 0.0;
  for (const auto& pt : points) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) throw std::invalid_argument("write_scatter_svg: non-finite point");
    x1 = std::max(x1, pt.x), y1 = std::max(y1, pt.y);
  }
  x1 = x1 > 0.0 ? x1 * 1.1 : 1.0;
  y1 = y1 > 0.0 ? y1 * 1.1 : 1.0;

  const double W = 640, H = 480, left = 70, right = 40, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + x / x1 * pw; };
  auto sy = [&](double y) { return top + (1.0 - y / y1) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\"" << fixed(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x1 * t / 4.0, yv = y1 * t / 4.0;
    out << "<text x=\"" << fixed(sx(xv)) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">" << fixed(xv)
        << "</text>\n";
    out << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(yv) + 4) << "\" text-anchor=\"end\">" << fixed(yv)
        << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(H - 15) << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(top + ph / 2) << ")\">" << y_label << "</text>\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const char* colour = kPalette[i % kPalette.size()];
    out << "<circle class=\"point\" cx=\"" << fixed(sx(pt.x)) << "\" cy=\"" << fixed(sy(pt.y)) << "\" r=\"4\" fill=\"" << colour
        << "\"/>\n";
    out << "<text x=\"" << fixed(sx(pt.x) + 6) << "\" y=\"" << fixed(sy(pt.y) - 6) << "\">" << pt.label << "</text>\n";
  }
  out << "</svg>\n";
}

std::vector<std::filesystem::path> export_records(std::span<const ConvergenceRecord> records,
                                                  const std::filesystem::path& dir, const std::string& stem,
                                                  ExportFormat format) {
  if (records.empty()) throw std::invalid_argument("export: no records");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("export: cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto open = [](const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("export: cannot write " + path.string());
    return f;
  };
  if (format != ExportFormat::Svg) {
    const auto path = dir / (stem + ".csv");
    auto f = open(path);
    write_records_csv(f, records);
    if (!f) throw std::runtime_error("export: write failed for " + path.string());
    written.push_back(path);
  }
  if (format != ExportFormat::Csv) {
    const auto path = dir / (stem + ".svg");
    auto f = open(path);
    write_mae_svg(f, records, stem);
    if (!f) throw std::runtime_error("export: write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace vbsa
