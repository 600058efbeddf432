// vbsa: total-effect sensitivity designs, estimators and convergence benchmarks.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vbsa/adaptive.hpp"
#include "vbsa/bench.hpp"
#include "vbsa/designs.hpp"
#include "vbsa/estimators.hpp"
#include "vbsa/qmc.hpp"
#include "vbsa/testfns.hpp"
#include "vbsa/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FunctionArgs {
  std::string name;
  std::size_t k = 6;
  std::vector<double> a;
};

void add_function_options(CLI::App* cmd, FunctionArgs& f, bool required = true) {
  auto* opt = cmd->add_option("--function", f.name, "Test function: A1 A2 A3 B1 B2 B3 C1 C2 G");
  if (required) opt->required();
  cmd->add_option("--k", f.k, "Number of input factors")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--a", f.a, "Comma-separated G-function coefficients (required for G)")->delimiter(',');
}

vbsa::FunctionSpec resolve_function(const FunctionArgs& f, const CLI::App* cmd) {
  const auto family = vbsa::parse_family(f.name);
  if (!family) throw UsageError("unknown function '" + f.name + "'; choose one of A1 A2 A3 B1 B2 B3 C1 C2 G");
  const bool k_given = cmd->count("--k") > 0;
  if (*family == vbsa::Family::GCustom) {
    if (f.a.empty()) throw UsageError("function G needs coefficients: pass --a a1,a2,...,ak");
    if (k_given && f.k != f.a.size())
      throw UsageError("--k " + std::to_string(f.k) + " does not match the " + std::to_string(f.a.size()) +
                       " coefficients given with --a");
    auto spec = vbsa::FunctionSpec::g_function(f.a);
    spec.validate();
    return spec;
  }
  if (!f.a.empty()) throw UsageError("--a only applies to function G; " + f.name + " has fixed coefficients");
  auto spec = vbsa::FunctionSpec::make(*family, f.k);
  spec.validate();
  return spec;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("VBSA_OUT_DIR"); env && *env) return env;
  return "out";
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

vbsa::ExportFormat parse_format(const std::string& s) {
  if (s == "csv") return vbsa::ExportFormat::Csv;
  if (s == "svg") return vbsa::ExportFormat::Svg;
  return vbsa::ExportFormat::Both;
}

std::vector<vbsa::EstimatorChoice> resolve_estimators(const std::vector<std::string>& names,
                                                      const std::vector<std::size_t>& ns) {
  std::vector<vbsa::EstimatorChoice> out;
  for (const auto& raw : names) {
    std::string name = raw;
    std::optional<std::size_t> explicit_n;
    if (const auto pos = name.rfind("_n"); pos != std::string::npos && pos + 2 < name.size() &&
                                           std::all_of(name.begin() + pos + 2, name.end(), ::isdigit)) {
      explicit_n = std::stoul(name.substr(pos + 2));
      name.resize(pos);
    }
    const auto e = vbsa::parse_estimator(name);
    if (!e)
      throw UsageError("unknown estimator '" + raw +
                       "'; choose from saltenis glen_isaacs symmetric multimatrix owen lamboni cyclic");
    const bool takes_n = *e == vbsa::Estimator::Multimatrix || *e == vbsa::Estimator::Lamboni;
    if (explicit_n && !takes_n) throw UsageError("estimator '" + name + "' does not take a matrix count");
    if (!takes_n) {
      out.push_back({*e, 2});
    } else if (explicit_n) {
      out.push_back({*e, *explicit_n});
    } else {
      for (std::size_t n : ns) out.push_back({*e, n});
    }
  }
  for (const auto& c : out)
    if ((c.estimator == vbsa::Estimator::Multimatrix || c.estimator == vbsa::Estimator::Lamboni) && c.n < 2)
      throw UsageError(c.label() + ": --n must be at least 2");
  return out;
}

void print_aggregates(std::span<const vbsa::ConvergenceRecord> records) {
  std::cout << std::left << std::setw(18) << "estimator" << std::right << std::setw(4) << "p" << std::setw(8) << "N"
            << std::setw(10) << "N_T" << std::setw(14) << "MAE" << '\n';
  for (const auto& r : records) {
    if (r.rep) continue;
    std::cout << std::left << std::setw(18) << r.estimator << std::right << std::setw(4) << r.p << std::setw(8) << r.N
              << std::setw(10) << r.N_T << std::setw(14) << std::setprecision(6) << r.mae << '\n';
  }
}

int report_errors(std::span<const vbsa::CellError> errors, const fs::path& dir, const std::string& stem) {
  if (errors.empty()) return 0;
  const fs::path path = dir / (stem + "_errors.csv");
  auto out = open_output(path);
  vbsa::write_errors_csv(out, errors);
  std::cerr << "warning: " << errors.size() << " cell(s) failed; details in " << path.string() << '\n';
  return kExitPartial;
}

/// Reads flat `key = value` lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path.string() + ":" + std::to_string(lineno) + ": missing key");
    std::replace(key.begin(), key.end(), '_', '-');
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total-effect sensitivity designs, estimators and convergence benchmarks", "vbsa"};
  app.set_version_flag("--version", "vbsa " + std::string(vbsa::kVersion));
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value file; command-line flags override it");

  // bench
  FunctionArgs bench_fn;
  std::vector<std::string> bench_estimators{"saltenis"};
  std::vector<std::size_t> bench_n{3};
  vbsa::ExperimentConfig bench_cfg;
  std::string bench_format = "both";
  fs::path bench_out = default_out_dir();
  auto* bench = app.add_subcommand("bench", "MAE convergence sweep over matched costs");
  add_function_options(bench, bench_fn);
  bench->add_option("--estimators", bench_estimators, "Comma-separated estimators; multimatrix_n4 style fixes n")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--n", bench_n, "Matrix counts for multimatrix/lamboni")->delimiter(',')->capture_default_str();
  bench->add_option("--p-min", bench_cfg.p_min, "Smallest reference exponent")->capture_default_str();
  bench->add_option("--p-max", bench_cfg.p_max, "Largest reference exponent")->capture_default_str();
  bench->add_option("--reps", bench_cfg.repetitions, "Repetitions per cell")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_cfg.seed, "Master seed")->capture_default_str();
  bench->add_option("--threads", bench_cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  bench->add_option("--out-dir", bench_out, "Output directory")->capture_default_str();
  bench->add_option("--format", bench_format, "csv, svg or both")->capture_default_str()->check(
      CLI::IsMember({"csv", "svg", "both"}));

  // estimate
  FunctionArgs est_fn;
  std::string est_name = "saltenis";
  std::size_t est_n = 3;
  unsigned est_p = 10;
  std::uint64_t est_seed = 1;
  bool est_unscrambled = false;
  fs::path est_out = default_out_dir();
  auto* est = app.add_subcommand("estimate", "One total-index estimate with its analytic reference");
  add_function_options(est, est_fn);
  est->add_option("--estimator", est_name, "saltenis glen_isaacs symmetric multimatrix owen lamboni cyclic")
      ->capture_default_str();
  est->add_option("--n", est_n, "Matrix count for multimatrix/lamboni")->capture_default_str();
  est->add_option("--p", est_p, "Rows per matrix N = 2^p")->capture_default_str();
  est->add_option("--seed", est_seed, "Column permutation seed")->capture_default_str();
  est->add_flag("--unscrambled", est_unscrambled, "Use the sequence columns in order");
  est->add_option("--out-dir", est_out, "Output directory")->capture_default_str();

  // metrics
  std::size_t met_k = 6;
  std::size_t met_budget = 500;
  fs::path met_out = default_out_dir();
  auto* met = app.add_subcommand("metrics", "Designs near an affordable cost: N, n, N_T, E_T, D, chi");
  met->add_option("--k", met_k, "Number of input factors")->capture_default_str()->check(CLI::PositiveNumber);
  met->add_option("--budget", met_budget, "Affordable number of model runs")->capture_default_str();
  met->add_option("--out-dir", met_out, "Output directory")->capture_default_str();

  // discrepancy
  std::size_t disc_dims = 6;
  unsigned disc_p = 7;
  std::size_t disc_rows = 0;
  std::string disc_points;
  auto* disc = app.add_subcommand("discrepancy", "L2-star discrepancy of a Sobol' block or a CSV point set");
  disc->add_option("--dims", disc_dims, "Dimensions of the Sobol' block")->capture_default_str();
  disc->add_option("--p", disc_p, "Block exponent (2^p rows)")->capture_default_str();
  disc->add_option("--rows", disc_rows, "Use only the first rows of the block (0 = all)")->capture_default_str();
  disc->add_option("--points", disc_points, "CSV file of points in [0,1] (header optional)");

  // analytic
  FunctionArgs an_fn;
  fs::path an_out = default_out_dir();
  auto* an = app.add_subcommand("analytic", "Exact first-order and total-effect indices");
  add_function_options(an, an_fn);
  an->add_option("--out-dir", an_out, "Output directory")->capture_default_str();

  // adaptive
  FunctionArgs ad_fn;
  vbsa::AdaptiveExperimentConfig ad_cfg;
  std::string ad_format = "both";
  fs::path ad_out = default_out_dir();
  auto* ad = app.add_subcommand("adaptive", "Adaptive allocation against plain Saltenis at full cost");
  add_function_options(ad, ad_fn);
  ad->add_option("--p-min", ad_cfg.p_min, "Smallest budget exponent")->capture_default_str();
  ad->add_option("--p-max", ad_cfg.p_max, "Largest budget exponent")->capture_default_str();
  ad->add_option("--reps", ad_cfg.repetitions, "Repetitions per budget")->capture_default_str()->check(CLI::PositiveNumber);
  ad->add_option("--seed", ad_cfg.seed, "Master seed")->capture_default_str();
  ad->add_option("--threads", ad_cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  ad->add_option("--out-dir", ad_out, "Output directory")->capture_default_str();
  ad->add_option("--format", ad_format, "csv, svg or both")->capture_default_str()->check(
      CLI::IsMember({"csv", "svg", "both"}));

  // Config values go in front of the user's flags for any key the user did
  // not set, so explicit flags always win.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::optional<fs::path> config;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        config = args[i + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        config = args[i].substr(9);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
    }
    if (config) {
      const auto sub_it = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
        return app.get_subcommand_no_throw(a) != nullptr;
      });
      if (sub_it == args.end()) throw UsageError("--config needs a subcommand");
      CLI::App* sub = app.get_subcommand(*sub_it);
      std::vector<std::string> injected;
      for (const auto& [key, value] : read_config(*config)) {
        const std::string flag = "--" + key;
        if (sub->get_option_no_throw(flag) == nullptr)
          throw UsageError("unknown config key '" + key + "' for subcommand '" + sub->get_name() + "'");
        const bool on_command_line = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
          return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (on_command_line) continue;
        if (sub->get_option(flag)->get_expected_max() == 0) {
          if (value == "true" || value == "1" || value == "yes") injected.push_back(flag);
          else if (!(value == "false" || value == "0" || value == "no"))
            throw UsageError("config key '" + key + "' is a switch; use true or false");
        } else {
          injected.push_back(flag);
          injected.push_back(value);
        }
      }
      args.insert(sub_it + 1, injected.begin(), injected.end());
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bench) {
      bench_cfg.function = resolve_function(bench_fn, bench);
      bench_cfg.estimators = resolve_estimators(bench_estimators, bench_n);
      bench_cfg.validate();
      const auto result = vbsa::convergence_experiment(bench_cfg);
      const std::string stem = "bench_" + bench_cfg.function.name();
      print_aggregates(result.records);
      if (!result.records.empty())
        for (const auto& path : vbsa::export_records(result.records, bench_out, stem, parse_format(bench_format)))
          std::cout << "wrote " << path.string() << '\n';
      return report_errors(result.errors, bench_out, stem);
    }

    if (*est) {
      const auto fn = resolve_function(est_fn, est);
      const auto e = vbsa::parse_estimator(est_name);
      if (!e) throw UsageError("unknown estimator '" + est_name + "'");
      if (est_p > 20) throw UsageError("--p above 20 is not supported by estimate");
      const std::size_t N = std::size_t{1} << est_p;
      const vbsa::DesignSpec spec = vbsa::design_for(*e, N, fn.k, est_n);
      const std::size_t matrices = vbsa::base_matrix_count(spec);
      auto pool = vbsa::sobol_block(matrices * fn.k, est_p);
      if (!est_unscrambled) pool = vbsa::permute_columns(pool, vbsa::ColumnPermutation::draw(pool.cols(), est_seed));
      const auto bases = vbsa::base_matrices_from_pool(pool, matrices, fn.k);
      const auto result = vbsa::estimate(*e, spec, bases, fn);
      const auto analytic = vbsa::analytic_indices(fn);
      std::ostringstream csv;
      csv << "factor,T_hat,T_analytic,numerator,effects_used\n";
      for (std::size_t j = 0; j < fn.k; ++j)
        csv << (j + 1) << ',' << vbsa::format_double(result.T[j]) << ',' << vbsa::format_double(analytic.T[j]) << ','
            << vbsa::format_double(result.numerator[j]) << ',' << result.effects_used[j] << '\n';
      std::cout << "function " << fn.name() << ", estimator " << est_name << ", design "
                << vbsa::design_name(spec.kind) << ", N = " << N << ", N_T = "
                << vbsa::design_metrics(spec).total_points << ", V = " << result.variance << '\n'
                << csv.str();
      const fs::path path = est_out / ("estimate_" + fn.name() + "_" + est_name + ".csv");
      auto out = open_output(path);
      out << csv.str();
      std::cout << "wrote " << path.string() << '\n';
      return 0;
    }

    if (*met) {
      const auto rows = vbsa::budget_table(met_k, met_budget);
      std::ostringstream csv;
      csv << "design,N,n,N_T,E_T,nN,D,chi,e\n";
      std::cout << std::setw(6) << "N" << std::setw(17) << "n" << std::setw(7) << "N_T" << std::setw(7) << "E_T"
                << std::setw(6) << "nN" << std::setw(10) << "D" << std::setw(8) << "chi" << '\n';
      std::vector<vbsa::ScatterPoint> points;
      for (const auto& m : rows) {
        const bool asym = m.spec.kind == vbsa::DesignKind::Asymmetric;
        const std::string label = std::to_string(m.spec.n) + (asym ? " (asymmetric)" : " (symmetric)");
        std::cout << std::setw(6) << m.spec.N << std::setw(17) << label << std::setw(7) << m.total_points
                  << std::setw(7) << m.total_effects << std::setw(6) << m.spec.n * m.spec.N << std::setw(10)
                  << std::setprecision(2) << *m.discrepancy << std::setw(8) << std::setprecision(2)
                  << m.explorativity << '\n';
        csv << (asym ? "asymmetric" : "symmetric") << ',' << m.spec.N << ',' << m.spec.n << ',' << m.total_points << ','
            << m.total_effects << ',' << m.spec.n * m.spec.N << ',' << vbsa::format_double(*m.discrepancy) << ','
            << vbsa::format_double(m.explorativity) << ',' << vbsa::format_double(m.economy) << '\n';
      }
      // Economy versus explorativity for every design family at this k.
      const std::size_t k = met_k;
      const std::size_t nt = rows.front().total_points;
      auto add = [&](std::string label, double e, double chi) { points.push_back({std::move(label), e, chi}); };
      for (auto ref : {vbsa::ReferenceDesign::Couples, vbsa::ReferenceDesign::Stars, vbsa::ReferenceDesign::WindingStairs}) {
        const auto r = vbsa::reference_metrics(ref, k, nt);
        const char* name = ref == vbsa::ReferenceDesign::Couples ? "couples"
                           : ref == vbsa::ReferenceDesign::Stars ? "stars"
                                                                 : "winding stairs";
        add(name, r.economy, r.explorativity);
      }
      for (auto kind : {vbsa::DesignKind::Asymmetric, vbsa::DesignKind::Symmetric2, vbsa::DesignKind::Owen}) {
        const auto m = vbsa::design_metrics(vbsa::DesignSpec::make(kind, 1, k));
        add(std::string(vbsa::design_name(kind)), m.economy, m.explorativity);
      }
      for (std::size_t n : {3, 4, 6}) {
        const auto mm = vbsa::design_metrics(vbsa::DesignSpec::make(vbsa::DesignKind::Multimatrix, 1, k, n));
        add("multimatrix n=" + std::to_string(n), mm.economy, mm.explorativity);
        const auto lb = vbsa::design_metrics(vbsa::DesignSpec::make(vbsa::DesignKind::Lamboni, 1, k, n));
        add("lamboni n=" + std::to_string(n), lb.economy, lb.explorativity);
      }
      const std::string stem = "metrics_k" + std::to_string(met_k) + "_budget" + std::to_string(met_budget);
      const fs::path csv_path = met_out / (stem + ".csv");
      const fs::path svg_path = met_out / ("explorativity_economy_k" + std::to_string(met_k) + ".svg");
      {
        auto out = open_output(csv_path);
        out << csv.str();
      }
      {
        auto out = open_output(svg_path);
        vbsa::write_scatter_svg(out, points, "Explorativity vs economy, k = " + std::to_string(k), "economy e",
                                "explorativity chi");
      }
      std::cout << "wrote " << csv_path.string() << "\nwrote " << svg_path.string() << '\n';
      return 0;
    }

    if (*disc) {
      if (!disc_points.empty()) {
        if (disc->count("--dims") || disc->count("--p") || disc->count("--rows"))
          throw UsageError("--points cannot be combined with --dims, --p or --rows");
        std::ifstream in(disc_points);
        if (!in) throw std::runtime_error("cannot read " + disc_points);
        std::vector<double> values;
        std::size_t cols = 0, rows = 0;
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty() || line == "\r") continue;
          std::vector<double> row;
          std::stringstream ss(line);
          std::string cell;
          bool numeric = true;
          while (std::getline(ss, cell, ',')) {
            try {
              std::size_t used = 0;
              row.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
              numeric = false;
              break;
            }
          }
          if (!numeric) {
            if (rows == 0 && values.empty()) continue;  // header
            throw std::runtime_error(disc_points + ": non-numeric value in row " + std::to_string(rows + 1));
          }
          if (cols == 0) cols = row.size();
          if (row.size() != cols) throw std::runtime_error(disc_points + ": ragged row " + std::to_string(rows + 1));
          values.insert(values.end(), row.begin(), row.end());
          ++rows;
        }
        if (rows == 0) throw std::runtime_error(disc_points + ": no points");
        const vbsa::SampleMatrix pts(rows, cols, std::move(values));
        std::cout << "points " << rows << ", dims " << cols << ", D = " << vbsa::format_double(vbsa::l2_star_discrepancy(pts))
                  << '\n';
        return 0;
      }
      const auto block = vbsa::sobol_block(disc_dims, disc_p);
      const std::size_t rows = disc_rows ? disc_rows : block.rows();
      if (rows > block.rows()) throw UsageError("--rows exceeds 2^p = " + std::to_string(block.rows()));
      std::cout << "points " << rows << ", dims " << disc_dims << ", D = "
                << vbsa::format_double(vbsa::l2_star_discrepancy(block.head(rows))) << '\n';
      return 0;
    }

    if (*an) {
      const auto fn = resolve_function(an_fn, an);
      const auto idx = vbsa::analytic_indices(fn);
      std::ostringstream csv;
      csv << "factor,S,T\n";
      for (std::size_t j = 0; j < fn.k; ++j)
        csv << (j + 1) << ',' << vbsa::format_double(idx.S[j]) << ',' << vbsa::format_double(idx.T[j]) << '\n';
      std::cout << "function " << fn.name() << ", k = " << fn.k << ", V = " << vbsa::format_double(idx.V) << '\n'
                << csv.str();
      const fs::path path = an_out / ("analytic_" + fn.name() + "_k" + std::to_string(fn.k) + ".csv");
      auto out = open_output(path);
      out << csv.str();
      std::cout << "wrote " << path.string() << '\n';
      return 0;
    }

    if (*ad) {
      ad_cfg.function = resolve_function(ad_fn, ad);
      const auto result = vbsa::adaptive_experiment(ad_cfg);
      const std::string stem = "adaptive_" + ad_cfg.function.name();
      print_aggregates(result.records);
      if (!result.records.empty())
        for (const auto& path : vbsa::export_records(result.records, ad_out, stem, parse_format(ad_format)))
          std::cout << "wrote " << path.string() << '\n';
      const fs::path ledger_path = ad_out / (stem + "_ledger.csv");
      {
        auto out = open_output(ledger_path);
        vbsa::write_ledger_csv(out, result.ledgers);
      }
      std::cout << "wrote " << ledger_path.string() << '\n';
      return report_errors(result.errors, ad_out, stem);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
