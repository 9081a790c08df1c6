/// @file bench.hpp
/// @brief Experiment drivers: flat key-value configuration, workspace
///        construction for both model problems, wall-clock timing with
///        median-of-repetitions batching, and the CSV-producing runners
///        behind the command line tool.

#pragma once

#include "himod/greedy.hpp"
#include "himod/pod.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace himod::bench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration with dotted keys for nesting
/// (e.g. `map.kind`, `adr.forcing.1.weight`). `#` starts a comment.
class ExperimentConfig {
 public:
  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig parse(const std::string& text, const std::string& origin = "<memory>");

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  /// Comma-separated integer list.
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  /// `lo:hi` interval.
  std::pair<double, double> get_interval(const std::string& key) const;
  /// Comma-separated reals.
  Eigen::VectorXd get_vector(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_ = "<memory>";
};

/// Everything derived from an ADR configuration.
struct AdrWorkspace {
  DomainMap map;
  QuadratureGrid quad;
  HiModSpaceScalar space;
  AdrProblemSpec problem;
  AffineSystem system;
  InnerProduct h1;
  InnerProduct l2;
  ParameterDomain domain;
};

AdrWorkspace build_adr_workspace(const ExperimentConfig& config, int modes_override = 0);

/// Everything derived from a Stokes configuration.
struct StokesWorkspace {
  DomainMap map;
  QuadratureGrid quad;
  HiModSpaceStokes space;
  StokesProblemSpec problem;
  SaddleAffineSystem system;
  InnerProduct velocity_h1;
  InnerProduct pressure_l2;
  ParameterDomain domain;
};

StokesWorkspace build_stokes_workspace(const ExperimentConfig& config);

/// Wall-clock timing: one discarded warm-up call, then `repetitions`
/// samples; fast operations are batched so each sample spans at least a few
/// hundred microseconds. Returns the median per-call time in seconds.
double time_median(const std::function<void()>& op, int repetitions = 5);

/// Minimal CSV writer: `# himod-bench <name> v1` schema comment, one header
/// row, then data rows. Numeric cells are rendered with %.17g so reruns with
/// identical inputs produce identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema_name,
            const std::vector<std::string>& columns);
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  ~CsvWriter();

  void row(const std::vector<std::string>& cells);

  static std::string real(double value);
  static std::string integer(long long value);

 private:
  struct Impl;
  Impl* impl_;
};

struct SpectrumRow {
  std::string role;
  int index = 0;  ///< 1-based eigenvalue index
  double lambda = 0.0;
  double ratio = 0.0;   ///< lambda_k / lambda_1
  double energy = 0.0;  ///< retained energy E(k)
};

struct ErrorRow {
  std::string method;
  std::string field;
  int size = 0;  ///< reduced-basis size N
  double mean_error = 0.0;
  double median_error = 0.0;
  double max_error = 0.0;
  double mean_estimator = 0.0;  ///< NaN where no estimator exists (POD path)
};

struct SpeedupRow {
  std::string method;
  std::string field;  ///< "state" or "velocity+pressure"
  int size = 0;
  double full_assembly_seconds = 0.0;
  double full_solve_seconds = 0.0;
  double reduced_assembly_seconds = 0.0;
  double reduced_solve_seconds = 0.0;
  double speedup = 0.0;  ///< full_solve / reduced_solve
};

struct OfflineRow {
  int train_count = 0;
  double pod_seconds = 0.0;
  double greedy_seconds = 0.0;
  int pod_solves = 0;
  int greedy_solves = 0;
};

struct InfsupRow {
  int supremizer_size = 0;
  double beta_reduced = 0.0;
  double beta_himod = 0.0;
};

/// Runners. Each writes its CSV artifacts under `out_dir` (created on
/// demand) unless `out_dir` is empty, and returns the computed rows.
std::vector<SpectrumRow> run_eig_decay(const ExperimentConfig& config, const std::string& out_dir);
std::vector<ErrorRow> run_error_vs_n(const ExperimentConfig& config, const std::string& method,
                                     const std::string& out_dir);
std::vector<SpeedupRow> run_speedup(const ExperimentConfig& config, const std::string& method,
                                    const std::string& out_dir);
std::vector<OfflineRow> run_offline_cost(const ExperimentConfig& config, const std::string& out_dir);
std::vector<InfsupRow> run_infsup_sweep(const ExperimentConfig& config, const std::string& out_dir);
void run_field_export(const ExperimentConfig& config, const std::string& out_dir);

/// Full campaign for one config: spectra, error-vs-N (with greedy log),
/// and speedups for the requested method(s).
void run_experiment(const ExperimentConfig& config, const std::string& method,
                    const std::string& out_dir);

void write_greedy_log_csv(const std::string& path, const GreedyLog& log, const TrainingSet& train);

}  // namespace himod::bench
