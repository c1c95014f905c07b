// Command-line surface: simulate | fit | path | screen | eval | prox-curve.
// JSON configs and reports, CSV matrices, TSV curves; every command is
// deterministic given its flags and seed.
#pragma once

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "logshift/datagen.hpp"
#include "logshift/dataio.hpp"
#include "logshift/metrics.hpp"
#include "logshift/solver.hpp"

namespace logshift {

namespace cli {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

// "inf" (any case) or a decimal number; used for beta and the spectral caps.
inline double parse_extended_real(const std::string& text, const char* what) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
  try {
    size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos == t.size()) return v;
  } catch (...) {
  }
  throw CLI::ValidationError(std::string(what) +
                             ": expected a number or 'inf', got '" + text + "'");
}

inline json json_real(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

inline double real_from_json(const json& j, const char* what) {
  if (j.is_string()) return parse_extended_real(j.get<std::string>(), what);
  if (j.is_number()) return j.get<double>();
  throw std::runtime_error(std::string(what) + ": expected number or 'inf'");
}

inline void write_json_atomic(const std::string& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

// Tracks files written by one command so a failure can remove partial output.
class OutputTracker {
 public:
  void record(const std::string& path) { written_.push_back(path); }
  void discard_all() {
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

 private:
  std::vector<std::string> written_;
};

struct DataOptions {
  std::vector<std::string> paths;
  bool has_header = false;
  bool from_covariance = false;
  std::vector<double> n;  // sample sizes, required with --from-covariance
};

inline void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("data", d.paths, "per-group CSV files (observations, or covariances with --from-covariance)")
      ->required()
      ->expected(-1);
  cmd->add_flag("--header", d.has_header, "input CSVs carry a header row");
  cmd->add_flag("--from-covariance", d.from_covariance,
                "inputs are covariance matrices instead of observations");
  cmd->add_option("--n", d.n,
                  "per-group sample sizes (required with --from-covariance)");
}

struct LoadedData {
  CovarianceSet cov;
  std::vector<std::string> names;
};

inline LoadedData load_data(const DataOptions& d) {
  if (d.from_covariance) {
    if (d.n.size() != d.paths.size())
      throw std::runtime_error(
          "--from-covariance requires --n with one sample size per file");
    std::vector<SymMatrix> S;
    std::vector<std::string> names;
    for (const auto& path : d.paths) {
      const auto obs = load_csv({path}, d.has_header);
      const Matrix& m = obs.groups[0];
      if (m.rows() != m.cols())
        throw std::runtime_error(path + ": covariance matrix must be square");
      if (names.empty())
        names = obs.names;
      else if (names != obs.names)
        throw std::runtime_error(path + ": variable names disagree");
      S.push_back(SymMatrix::from_lower(
          Matrix(0.5 * (m + m.transpose()))));
    }
    return {CovarianceSet::make(std::move(S), d.n), std::move(names)};
  }
  const auto obs = load_csv(d.paths, d.has_header);
  return {sample_covariance(obs), obs.names};
}

struct HyperOptions {
  double gamma = 0.0;
  std::string beta = "inf";
  double nu = 1.0;
  std::vector<std::string> b;
  double rho = 1.0;
  double tol = 1e-6;
  int max_iter = 2000;
  double mm_tol = 1e-6;
  int mm_max_iter = 50;
};

inline void add_hyper_options(CLI::App* cmd, HyperOptions& h) {
  cmd->add_option("--gamma", h.gamma, "penalty level (>= 0)")->required();
  cmd->add_option("--beta", h.beta, "nonconvexity shift (> 0, accepts 'inf')");
  cmd->add_option("--nu", h.nu, "l1/l2 mix in [0,1]");
  cmd->add_option("--b", h.b,
                  "spectral caps: one value or one per group (accepts 'inf')");
  cmd->add_option("--rho", h.rho, "ADMM penalty parameter");
  cmd->add_option("--tol", h.tol, "ADMM stopping tolerance (abs and rel)");
  cmd->add_option("--max-iter", h.max_iter, "ADMM iteration cap");
  cmd->add_option("--mm-tol", h.mm_tol, "relative objective tolerance of the outer loop");
  cmd->add_option("--mm-max-iter", h.mm_max_iter, "outer loop iteration cap");
}

inline Hyperparams to_hyperparams(const HyperOptions& h, int K) {
  Hyperparams hp;
  hp.gamma = h.gamma;
  hp.beta = parse_extended_real(h.beta, "--beta");
  hp.nu = h.nu;
  if (h.b.size() == 1) {
    hp.b.assign(K, parse_extended_real(h.b[0], "--b"));
  } else if (!h.b.empty()) {
    for (const auto& s : h.b) hp.b.push_back(parse_extended_real(s, "--b"));
  }
  hp.validate(K);
  return hp;
}

inline AdmmConfig to_admm_config(const HyperOptions& h) {
  AdmmConfig cfg;
  cfg.rho = h.rho;
  cfg.max_iter = h.max_iter;
  cfg.eps_abs = h.tol;
  cfg.eps_rel = h.tol;
  cfg.validate();
  return cfg;
}

inline json hyperparams_json(const Hyperparams& hp, int K) {
  json b = json::array();
  for (int k = 0; k < K; ++k) b.push_back(json_real(hp.cap(k)));
  return {{"gamma", hp.gamma},
          {"beta", json_real(hp.beta)},
          {"nu", hp.nu},
          {"b", b}};
}

// wall_time is deliberately omitted: reruns must be byte-identical.
inline json report_json(const SolveReport& rep) {
  json j;
  j["objective_trace"] = rep.objective_trace;
  j["mm_iterations"] = rep.mm_iterations;
  j["admm_iterations"] = rep.admm_iterations;
  j["converged"] = rep.converged;
  j["convexity_certified"] = rep.convexity_certified;
  j["beta_required"] = json_real(rep.beta_required);
  j["blocks"] = rep.blocks;
  j["edge_count"] = rep.edge_count;
  j["theta_substituted"] = rep.theta_substituted;
  return j;
}

inline void write_precision_csvs(const std::string& out_dir,
                                 const PrecisionSet& om,
                                 const std::vector<std::string>& names,
                                 OutputTracker& tracker) {
  for (int k = 0; k < om.K; ++k) {
    const std::string path =
        (fs::path(out_dir) / ("precision_" + std::to_string(k + 1) + ".csv"))
            .string();
    write_matrix_csv(path, om.omega[k].mat(), names);
    tracker.record(path);
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::string seed_override;  // empty: use the config file's seed
};

inline SimConfig sim_config_from_json(const json& j) {
  SimConfig cfg;
  cfg.p = j.at("p").get<int>();
  cfg.K = j.at("K").get<int>();
  if (j.at("n").is_array())
    cfg.n = j.at("n").get<std::vector<int>>();
  else
    cfg.n.assign(cfg.K, j.at("n").get<int>());
  cfg.seed = j.value("seed", 0ULL);
  cfg.diag_value = j.value("diag_value", 1.0);
  if (j.contains("offdiag_range")) {
    cfg.offdiag_lo = j.at("offdiag_range").at(0).get<double>();
    cfg.offdiag_hi = j.at("offdiag_range").at(1).get<double>();
  }
  cfg.pd_margin = j.value("pd_margin", 0.1);
  cfg.validate();
  return cfg;
}

inline int cmd_simulate(const SimulateArgs& args) {
  json config = load_json(args.config_path);
  if (!args.seed_override.empty())
    config["seed"] = std::stoull(args.seed_override);  // flags override file values
  const SimConfig cfg = sim_config_from_json(config);
  fs::create_directories(args.out_dir);

  const auto omegas = gen_tridiag_precisions(cfg);
  std::vector<std::string> names;
  for (int j = 1; j <= cfg.p; ++j) names.push_back("V" + std::to_string(j));

  OutputTracker tracker;
  try {
    for (int k = 0; k < cfg.K; ++k) {
      const Matrix x = sample_mvn(omegas[k], cfg.n[k],
                                  splitmix64(cfg.seed) + static_cast<std::uint64_t>(k));
      const std::string path =
          (fs::path(args.out_dir) / ("group_" + std::to_string(k + 1) + ".csv"))
              .string();
      write_matrix_csv(path, x, names);
      tracker.record(path);
    }

    json truth;
    truth["schema_version"] = kSchemaVersion;
    truth["p"] = cfg.p;
    truth["K"] = cfg.K;
    truth["n"] = cfg.n;
    truth["seed"] = cfg.seed;
    json support = json::array();
    for (int i = 0; i + 1 < cfg.p; ++i) support.push_back({i, i + 1});
    truth["support"] = support;
    json mats = json::array();
    for (const auto& om : omegas) {
      json rows = json::array();
      for (Index i = 0; i < cfg.p; ++i) {
        json row = json::array();
        for (Index j = 0; j < cfg.p; ++j) row.push_back(om(i, j));
        rows.push_back(row);
      }
      mats.push_back(rows);
    }
    truth["omega"] = mats;
    truth["config"] = config;
    const std::string truth_path = (fs::path(args.out_dir) / "truth.json").string();
    write_json_atomic(truth_path, truth);
    tracker.record(truth_path);
  } catch (...) {
    tracker.discard_all();
    throw;
  }

  std::printf("simulate: p=%d K=%d edges=%d -> %s\n", cfg.p, cfg.K, cfg.p - 1,
              args.out_dir.c_str());
  return 0;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  DataOptions data;
  HyperOptions hyper;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
};

inline json fit_config_json(const FitArgs& args, const Hyperparams& hp, int K) {
  json c = hyperparams_json(hp, K);
  c["rho"] = args.hyper.rho;
  c["tol"] = args.hyper.tol;
  c["max_iter"] = args.hyper.max_iter;
  c["mm_tol"] = args.hyper.mm_tol;
  c["mm_max_iter"] = args.hyper.mm_max_iter;
  c["seed"] = args.seed;
  c["data"] = args.data.paths;
  c["from_covariance"] = args.data.from_covariance;
  c["has_header"] = args.data.has_header;
  return c;
}

inline int cmd_fit(const FitArgs& args) {
  const LoadedData data = load_data(args.data);
  const Hyperparams hp = to_hyperparams(args.hyper, data.cov.K);
  const PenaltySpec spec = PenaltySpec::make(hp.nu, data.cov.K);
  const AdmmConfig cfg = to_admm_config(args.hyper);
  MmConfig mm;
  mm.tol = args.hyper.mm_tol;
  mm.max_iter = args.hyper.mm_max_iter;
  mm.threads = args.threads;

  if (hp.gamma == 0.0 && hp.b.empty()) {
    for (int k = 0; k < data.cov.K; ++k)
      if (data.cov.n[k] < static_cast<double>(data.cov.p))
        std::fprintf(stderr,
                     "warning: gamma=0 with n_%d=%g < p=%lld and no spectral "
                     "cap; the saturated likelihood has no maximizer\n",
                     k + 1, data.cov.n[k],
                     static_cast<long long>(data.cov.p));
  }

  fs::create_directories(args.out_dir);
  OutputTracker tracker;
  try {
    auto [omega, report] = fit(data.cov, hp, spec, cfg, {}, mm);
    write_precision_csvs(args.out_dir, omega, data.names, tracker);
    json j = report_json(report);
    j["schema_version"] = kSchemaVersion;
    j["config"] = fit_config_json(args, hp, data.cov.K);
    const std::string report_path = (fs::path(args.out_dir) / "report.json").string();
    write_json_atomic(report_path, j);
    tracker.record(report_path);
    std::printf("fit: edges=%d mm_iterations=%d certified=%s -> %s\n",
                report.edge_count, report.mm_iterations,
                report.convexity_certified ? "yes" : "no",
                args.out_dir.c_str());
  } catch (...) {
    tracker.discard_all();
    throw;
  }
  return 0;
}

// -------------------------------------------------------------------- path

struct PathArgs {
  DataOptions data;
  HyperOptions hyper;  // defaults for grid points and the ADMM settings
  std::string grid_path;
  std::vector<std::string> validation;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
};

inline int cmd_path(const PathArgs& args) {
  const LoadedData data = load_data(args.data);
  const json grid_json = load_json(args.grid_path);
  const json points =
      grid_json.is_array() ? grid_json : grid_json.at("points");
  if (!points.is_array() || points.empty())
    throw std::runtime_error("grid file must contain a nonempty points array");

  std::vector<Hyperparams> grid;
  double shared_nu = -1.0;
  for (const auto& pt : points) {
    HyperOptions h = args.hyper;
    h.gamma = pt.at("gamma").get<double>();
    if (pt.contains("beta")) h.beta = pt.at("beta").is_string()
                                          ? pt.at("beta").get<std::string>()
                                          : std::to_string(pt.at("beta").get<double>());
    if (pt.contains("nu")) h.nu = pt.at("nu").get<double>();
    if (pt.contains("b")) {
      h.b.clear();
      for (const auto& bv : pt.at("b"))
        h.b.push_back(bv.is_string() ? bv.get<std::string>()
                                     : std::to_string(bv.get<double>()));
    }
    Hyperparams hp = to_hyperparams(h, data.cov.K);
    if (shared_nu < 0.0) shared_nu = hp.nu;
    if (hp.nu != shared_nu)
      throw std::runtime_error("all grid points must share one nu");
    grid.push_back(std::move(hp));
  }

  const PenaltySpec spec = PenaltySpec::make(shared_nu, data.cov.K);
  const AdmmConfig cfg = to_admm_config(args.hyper);
  MmConfig mm;
  mm.tol = args.hyper.mm_tol;
  mm.max_iter = args.hyper.mm_max_iter;
  mm.threads = args.threads;

  std::optional<CovarianceSet> val_cov;
  if (!args.validation.empty()) {
    DataOptions vopts = args.data;
    vopts.paths = args.validation;
    LoadedData val = load_data(vopts);
    if (val.cov.p != data.cov.p || val.cov.K != data.cov.K)
      throw std::runtime_error("validation data shape disagrees with training data");
    val_cov = std::move(val.cov);
  }

  fs::create_directories(args.out_dir);
  const auto entries = fit_path(data.cov, grid, spec, cfg, mm);

  int chosen = -1;
  if (val_cov) {
    std::vector<std::pair<PrecisionSet, SolveReport>> ok;
    std::vector<int> ok_index;
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].error.empty()) {
        ok.emplace_back(*entries[i].omega, entries[i].report);
        ok_index.push_back(static_cast<int>(i));
      }
    if (!ok.empty()) chosen = ok_index[select_by_validation(ok, *val_cov)];
  }

  OutputTracker tracker;
  try {
    std::string tsv =
        "index\tgamma\tbeta\tnu\tedges\ttrain_objective\tvalidation_negloglik"
        "\tselected\tstatus\n";
    for (size_t i = 0; i < entries.size(); ++i) {
      const auto& entry = entries[i];
      char dirname[32];
      std::snprintf(dirname, sizeof(dirname), "point_%03zu", i);
      const std::string dir = (fs::path(args.out_dir) / dirname).string();
      fs::create_directories(dir);

      tsv += std::to_string(i) + '\t' + format_double(grid[i].gamma) + '\t' +
             (std::isinf(grid[i].beta) ? "inf" : format_double(grid[i].beta)) +
             '\t' + format_double(grid[i].nu) + '\t';
      if (entry.error.empty()) {
        write_precision_csvs(dir, *entry.omega, data.names, tracker);
        json j = report_json(entry.report);
        j["schema_version"] = kSchemaVersion;
        j["config"] = hyperparams_json(grid[i], data.cov.K);
        const std::string rp = (fs::path(dir) / "report.json").string();
        write_json_atomic(rp, j);
        tracker.record(rp);

        tsv += std::to_string(entry.report.edge_count) + '\t' +
               format_double(entry.report.objective_trace.back()) + '\t';
        if (val_cov) {
          double score;
          try {
            score = heldout_negloglik(*val_cov, *entry.omega);
            tsv += format_double(score);
          } catch (const NotPositiveDefinite&) {
            tsv += "nan";
          }
        } else {
          tsv += "nan";
        }
        tsv += '\t';
        tsv += (static_cast<int>(i) == chosen) ? "1" : "0";
        tsv += "\tok\n";
      } else {
        const std::string ep = (fs::path(dir) / "error.txt").string();
        write_text_atomic(ep, entry.error + "\n");
        tracker.record(ep);
        tsv += "nan\tnan\tnan\t0\terror\n";
      }
    }
    const std::string tsv_path = (fs::path(args.out_dir) / "frontier.tsv").string();
    write_text_atomic(tsv_path, tsv);
    tracker.record(tsv_path);
  } catch (...) {
    tracker.discard_all();
    throw;
  }

  std::printf("path: %zu points -> %s\n", entries.size(), args.out_dir.c_str());
  if (chosen >= 0) std::printf("path: validation selected point %d\n", chosen);
  return 0;
}

// ------------------------------------------------------------------ screen

struct ScreenArgs {
  DataOptions data;
  double gamma = 0.0;
  double nu = 1.0;
  std::string out_path;  // empty: stdout
};

inline int cmd_screen(const ScreenArgs& args) {
  const LoadedData data = load_data(args.data);
  Hyperparams hp;
  hp.gamma = args.gamma;
  hp.nu = args.nu;
  hp.validate(data.cov.K);
  const auto part = connected_components(build_adjacency(data.cov, hp));

  json j;
  j["schema_version"] = kSchemaVersion;
  j["blocks"] = part.blocks;
  const Index pairs = data.cov.p * (data.cov.p - 1) / 2;
  j["edges_screened_out"] =
      static_cast<long long>(pairs - part.adjacency.count_true());
  if (args.out_path.empty())
    std::printf("%s\n", j.dump(2).c_str());
  else
    write_json_atomic(args.out_path, j);
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::vector<std::string> precision_paths;
  DataOptions data;
  std::string truth_path;
  std::string out_path;  // empty: stdout
};

inline int cmd_eval(const EvalArgs& args) {
  const LoadedData data = load_data(args.data);
  std::vector<SymMatrix> om;
  for (const auto& path : args.precision_paths) {
    const auto m = load_csv({path}, true);
    if (m.groups[0].rows() != m.groups[0].cols())
      throw std::runtime_error(path + ": precision matrix must be square");
    om.push_back(SymMatrix::from_lower(
        Matrix(0.5 * (m.groups[0] + m.groups[0].transpose()))));
  }
  const auto est = PrecisionSet::make(std::move(om));
  if (est.K != data.cov.K || est.p != data.cov.p)
    throw std::runtime_error("estimate shape disagrees with the data");

  json j;
  j["schema_version"] = kSchemaVersion;
  j["negloglik"] = heldout_negloglik(data.cov, est);

  std::optional<BoolSymMatrix> mask;
  if (!args.truth_path.empty()) {
    const json truth = load_json(args.truth_path);
    BoolSymMatrix m(est.p);
    for (const auto& pair : truth.at("support"))
      m.set(pair.at(0).get<int>(), pair.at(1).get<int>(), true);
    mask = m;

    std::vector<SymMatrix> tm;
    for (const auto& mat : truth.at("omega")) {
      SymMatrix t(est.p);
      for (Index i = 0; i < est.p; ++i)
        for (Index jx = i; jx < est.p; ++jx)
          t.set(i, jx, mat.at(i).at(jx).get<double>());
      tm.push_back(std::move(t));
    }
    j["relative_error"] = relative_error(PrecisionSet::make(std::move(tm)), est);
  }

  const auto stats = edge_stats(est, mask);
  j["edges"] = stats.edges;
  j["per_graph_edges"] = stats.per_graph_edges;
  if (stats.tp) {
    j["tp"] = *stats.tp;
    j["fp"] = *stats.fp;
    j["fn"] = *stats.fn;
  }

  if (args.out_path.empty())
    std::printf("%s\n", j.dump(2).c_str());
  else
    write_json_atomic(args.out_path, j);
  return 0;
}

// -------------------------------------------------------------- prox-curve

struct ProxCurveArgs {
  double gamma = 1.0;
  std::string beta = "inf";
  double y_max = 5.0;
  double resolution = 0.01;
  std::string out_path;  // empty: stdout
};

inline int cmd_prox_curve(const ProxCurveArgs& args) {
  const double beta = parse_extended_real(args.beta, "--beta");
  if (!(beta > 0.0)) throw std::runtime_error("--beta must be > 0");
  if (!(args.resolution > 0.0)) throw std::runtime_error("--resolution must be > 0");
  if (!(args.y_max > 0.0)) throw std::runtime_error("--y-max must be > 0");

  std::string tsv = "y\txhat\n";
  const long long steps = std::llround(args.y_max / args.resolution);
  for (long long i = -steps; i <= steps; ++i) {
    const double y = static_cast<double>(i) * args.resolution;
    tsv += format_double(y) + '\t' +
           format_double(scalar_logshift_prox(y, args.gamma, beta)) + '\n';
  }
  if (args.out_path.empty())
    std::fputs(tsv.c_str(), stdout);
  else
    write_text_atomic(args.out_path, tsv);
  return 0;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "logshift: joint estimation of multiple sparse Gaussian graphical "
      "models with a log-shift penalty"};
  app.require_subcommand(1);

  cli::SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "generate synthetic observations from tridiagonal models");
  simulate->add_option("--config", sim.config_path, "SimConfig JSON file")
      ->required();
  simulate->add_option("--seed", sim.seed_override,
                       "override the config file's seed");
  simulate->add_option("--out", sim.out_dir, "output directory")->required();

  cli::FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit precision matrices");
  cli::add_data_options(fit_cmd, fit_args.data);
  cli::add_hyper_options(fit_cmd, fit_args.hyper);
  fit_cmd->add_option("--seed", fit_args.seed, "seed echoed into the report");
  fit_cmd->add_option("--threads", fit_args.threads,
                      "worker bound for block solves (0 = all cores)");
  fit_cmd->add_option("--out", fit_args.out_dir, "output directory")->required();

  cli::PathArgs path_args;
  auto* path_cmd =
      app.add_subcommand("path", "sweep a hyperparameter grid with warm starts");
  cli::add_data_options(path_cmd, path_args.data);
  cli::add_hyper_options(path_cmd, path_args.hyper);
  path_cmd->add_option("--grid", path_args.grid_path, "grid JSON file")
      ->required();
  path_cmd->add_option("--validation", path_args.validation,
                       "per-group validation CSVs for tuning selection");
  path_cmd->add_option("--seed", path_args.seed, "seed echoed into reports");
  path_cmd->add_option("--threads", path_args.threads,
                       "worker bound for block solves (0 = all cores)");
  path_cmd->add_option("--out", path_args.out_dir, "output directory")
      ->required();

  cli::ScreenArgs screen_args;
  auto* screen_cmd =
      app.add_subcommand("screen", "emit the connected-component partition");
  cli::add_data_options(screen_cmd, screen_args.data);
  screen_cmd->add_option("--gamma", screen_args.gamma, "penalty level")
      ->required();
  screen_cmd->add_option("--nu", screen_args.nu, "l1/l2 mix in [0,1]");
  screen_cmd->add_option("--out", screen_args.out_path,
                         "output JSON file (default stdout)");

  cli::EvalArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("eval", "score an estimate on held-out data");
  eval_cmd
      ->add_option("--precision", eval_args.precision_paths,
                   "per-group precision CSVs")
      ->required()
      ->expected(-1);
  cli::add_data_options(eval_cmd, eval_args.data);
  eval_cmd->add_option("--truth", eval_args.truth_path,
                       "truth JSON from simulate (enables support metrics)");
  eval_cmd->add_option("--out", eval_args.out_path,
                       "output JSON file (default stdout)");

  cli::ProxCurveArgs prox_args;
  auto* prox_cmd = app.add_subcommand(
      "prox-curve", "emit the scalar shrinkage curve as TSV");
  prox_cmd->add_option("--gamma", prox_args.gamma, "penalty level")->required();
  prox_cmd->add_option("--beta", prox_args.beta,
                       "nonconvexity shift (accepts 'inf')");
  prox_cmd->add_option("--y-max", prox_args.y_max, "curve range [-y-max, y-max]");
  prox_cmd->add_option("--resolution", prox_args.resolution, "grid step");
  prox_cmd->add_option("--out", prox_args.out_path,
                       "output TSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return cli::cmd_simulate(sim);
    if (fit_cmd->parsed()) return cli::cmd_fit(fit_args);
    if (path_cmd->parsed()) return cli::cmd_path(path_args);
    if (screen_cmd->parsed()) return cli::cmd_screen(screen_args);
    if (eval_cmd->parsed()) return cli::cmd_eval(eval_args);
    if (prox_cmd->parsed()) return cli::cmd_prox_curve(prox_args);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}

inline int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full = args;
  full.insert(full.begin(), "logshift");
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& a : full) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace logshift
