/// @file bench.cpp
/// @brief Experiment-driver implementation: config parsing, workspace
///        construction, timing, CSV emission, and the study runners.

#include "himod/bench.hpp"

#include "himod/adr.hpp"
#include "himod/stokes.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace himod::bench {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(trim(text.substr(start)));
      return parts;
    }
    parts.push_back(trim(text.substr(start, pos - start)));
    start = pos + 1;
  }
}

double to_real(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  errno = 0;
  char* end = nullptr;
  const double parsed = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("config key `" + key + "`: expected a real number, got `" + raw + "`");
  }
  return parsed;
}

long long to_integer(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  errno = 0;
  char* end = nullptr;
  const long long parsed = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("config key `" + key + "`: expected an integer, got `" + raw + "`");
  }
  return parsed;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& origin) {
  ExperimentConfig config;
  config.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected `key = value`, got `" +
                        line + "`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    config.values_[key] = value;
  }
  return config;
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("missing required config key `" + key + "` (" + origin_ + ")");
  }
  return it->second;
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_real(const std::string& key) const {
  return to_real(key, get_string(key));
}

double ExperimentConfig::get_real(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

int ExperimentConfig::get_int(const std::string& key) const {
  const long long value = to_integer(key, get_string(key));
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    throw ConfigError("config key `" + key + "`: integer out of range");
  }
  return static_cast<int>(value);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t ExperimentConfig::get_seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) {
    return fallback;
  }
  const std::string value = trim(get_string(key));
  errno = 0;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || value[0] == '-' || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("config key `" + key + "`: expected an unsigned integer, got `" + value + "`");
  }
  return parsed;
}

std::vector<int> ExperimentConfig::get_int_list(const std::string& key,
                                                const std::vector<int>& fallback) const {
  if (!has(key)) {
    return fallback;
  }
  std::vector<int> values;
  for (const std::string& part : split(get_string(key), ',')) {
    values.push_back(static_cast<int>(to_integer(key, part)));
  }
  return values;
}

std::pair<double, double> ExperimentConfig::get_interval(const std::string& key) const {
  const std::vector<std::string> parts = split(get_string(key), ':');
  if (parts.size() != 2) {
    throw ConfigError("config key `" + key + "`: expected `lo:hi`, got `" + get_string(key) + "`");
  }
  const double lo = to_real(key, parts[0]);
  const double hi = to_real(key, parts[1]);
  if (!(lo <= hi)) {
    throw ConfigError("config key `" + key + "`: interval bounds out of order");
  }
  return {lo, hi};
}

Eigen::VectorXd ExperimentConfig::get_vector(const std::string& key) const {
  const std::vector<std::string> parts = split(get_string(key), ',');
  Eigen::VectorXd values(static_cast<Eigen::Index>(parts.size()));
  for (size_t i = 0; i < parts.size(); ++i) {
    values[static_cast<Eigen::Index>(i)] = to_real(key, parts[i]);
  }
  return values;
}

namespace {

DomainMap map_from_config(const ExperimentConfig& config) {
  DomainMap map;
  const std::string kind = config.get_string("map.kind", "identity");
  if (kind == "identity") {
    map.kind = MapKind::identity;
  } else if (kind == "sinusoidal_additive") {
    map.kind = MapKind::sinusoidal_additive;
  } else if (kind == "sinusoidal_multiplicative") {
    map.kind = MapKind::sinusoidal_multiplicative;
  } else {
    throw ConfigError("config key `map.kind`: unknown map `" + kind + "`");
  }
  map.length = config.get_real("map.length");
  map.amplitude = config.get_real("map.amplitude", 0.0);
  map.frequency = config.get_real("map.frequency", 0.0);
  map.phase = config.get_real("map.phase", 0.0);
  map.width = config.get_real("map.width", 1.0);
  return map;
}

QuadratureGrid quad_from_config(const ExperimentConfig& config, const DomainMap& map) {
  return build_quadrature(config.get_int("mesh.elements"), map.length,
                          config.get_int("quad.axial", 4), config.get_int("quad.transverse", 8),
                          config.get_int("quad.panels", 8));
}

ParameterDomain domain_from_config(const ExperimentConfig& config, int dim) {
  ParameterDomain domain;
  domain.intervals.reserve(static_cast<size_t>(dim));
  for (int j = 1; j <= dim; ++j) {
    domain.intervals.push_back(config.get_interval("domain.mu" + std::to_string(j)));
  }
  return domain;
}

int required_train_count(const ExperimentConfig& config) {
  const int count = config.get_int("train.count");
  if (count < 1) {
    throw ConfigError("config key `train.count`: need at least one training sample, got " +
                      std::to_string(count));
  }
  return count;
}

std::string path_join(const std::string& dir, const std::string& name) {
  return dir + "/" + name;
}

void append_summary(const std::string& out_dir, const std::vector<std::string>& lines) {
  if (out_dir.empty()) {
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream out(path_join(out_dir, "summary.txt"), std::ios::app);
  for (const std::string& line : lines) {
    out << line << '\n';
  }
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double max_of(const std::vector<double>& values) {
  double best = 0.0;
  for (double v : values) {
    best = std::max(best, v);
  }
  return best;
}

std::string format_mu(const Eigen::VectorXd& mu) {
  std::string text = "(";
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    text += CsvWriter::real(mu[i]);
    if (i + 1 < mu.size()) {
      text += ", ";
    }
  }
  return text + ")";
}

void append_spectrum_rows(std::vector<SpectrumRow>& rows, const std::string& role,
                          const PodSpectrum& spectrum) {
  const Eigen::Index count = spectrum.eigenvalues.size();
  const double lead = count > 0 ? spectrum.eigenvalues[0] : 0.0;
  for (Eigen::Index k = 0; k < count; ++k) {
    SpectrumRow row;
    row.role = role;
    row.index = static_cast<int>(k) + 1;
    row.lambda = spectrum.eigenvalues[k];
    row.ratio = lead > 0.0 ? spectrum.eigenvalues[k] / lead : 0.0;
    row.energy = spectrum.energy(static_cast<int>(k) + 1);
    rows.push_back(row);
  }
}

void write_spectrum_csv(const std::string& out_dir, const std::vector<SpectrumRow>& rows) {
  if (out_dir.empty()) {
    return;
  }
  CsvWriter csv(path_join(out_dir, "spectra.csv"), "spectra",
                {"role", "k", "lambda", "ratio", "energy"});
  for (const SpectrumRow& row : rows) {
    csv.row({row.role, CsvWriter::integer(row.index), CsvWriter::real(row.lambda),
             CsvWriter::real(row.ratio), CsvWriter::real(row.energy)});
  }
}

void write_error_csv(const std::string& out_dir, const std::string& method,
                     const std::vector<ErrorRow>& rows) {
  if (out_dir.empty()) {
    return;
  }
  CsvWriter csv(path_join(out_dir, "errors_" + method + ".csv"), "errors",
                {"method", "field", "n", "mean_error", "median_error", "max_error",
                 "mean_estimator"});
  for (const ErrorRow& row : rows) {
    csv.row({row.method, row.field, CsvWriter::integer(row.size), CsvWriter::real(row.mean_error),
             CsvWriter::real(row.median_error), CsvWriter::real(row.max_error),
             CsvWriter::real(row.mean_estimator)});
  }
}

void write_speedup_csv(const std::string& out_dir, const std::string& method,
                       const std::vector<SpeedupRow>& rows) {
  if (out_dir.empty()) {
    return;
  }
  CsvWriter csv(path_join(out_dir, "speedup_" + method + ".csv"), "speedup",
                {"method", "field", "n", "full_assembly_seconds", "full_solve_seconds",
                 "reduced_assembly_seconds", "reduced_solve_seconds", "speedup"});
  for (const SpeedupRow& row : rows) {
    csv.row({row.method, row.field, CsvWriter::integer(row.size),
             CsvWriter::real(row.full_assembly_seconds), CsvWriter::real(row.full_solve_seconds),
             CsvWriter::real(row.reduced_assembly_seconds),
             CsvWriter::real(row.reduced_solve_seconds), CsvWriter::real(row.speedup)});
  }
}

std::vector<std::string> methods_from(const std::string& method) {
  if (method == "hipod" || method == "hirb") {
    return {method};
  }
  if (method == "both") {
    return {"hipod", "hirb"};
  }
  throw ConfigError("method: expected hipod, hirb or both, got `" + method + "`");
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

/// Guards relative errors against a vanishing truth norm.
double safe_norm(double value) {
  return std::max(value, std::numeric_limits<double>::min());
}

}  // namespace

AdrWorkspace build_adr_workspace(const ExperimentConfig& config, int modes_override) {
  const std::string problem = config.get_string("problem");
  if (problem != "adr") {
    throw ConfigError("config key `problem`: expected `adr`, got `" + problem + "`");
  }
  AdrWorkspace w;
  w.map = map_from_config(config);
  w.quad = quad_from_config(config, w.map);

  const std::string bc_name = config.get_string("adr.bc", "dirichlet");
  TransverseBc bc = TransverseBc::dirichlet;
  if (bc_name == "robin") {
    bc = TransverseBc::robin;
  } else if (bc_name != "dirichlet") {
    throw ConfigError("config key `adr.bc`: expected dirichlet or robin, got `" + bc_name + "`");
  }
  const double rho = config.get_real("adr.rho", 0.0);
  const double nu_ref = config.get_real("adr.nu_ref", 1.0);
  const int modes = modes_override > 0 ? modes_override : config.get_int("adr.modes");
  w.space = build_scalar_space(w.map, w.quad, config.get_int("adr.degree", 1), bc, modes, nu_ref,
                               rho);

  AdrProblemSpec spec;
  spec.rho = rho;
  spec.forcing_constant = config.get_real("adr.forcing.constant", 0.0);
  spec.neumann_outflow = config.get_real("adr.neumann_outflow", 0.0);
  spec.robin_data = config.get_real("adr.robin_data", 0.0);
  const int forcing_count = config.get_int("adr.forcing.count", 0);
  for (int k = 1; k <= forcing_count; ++k) {
    const std::string prefix = "adr.forcing." + std::to_string(k) + ".";
    EllipseForcing ellipse;
    ellipse.weight = config.get_real(prefix + "weight");
    ellipse.center_x = config.get_real(prefix + "center_x");
    ellipse.center_y = config.get_real(prefix + "center_y", 0.0);
    ellipse.coef_x = config.get_real(prefix + "coef_x");
    ellipse.coef_y = config.get_real(prefix + "coef_y");
    ellipse.threshold = config.get_real(prefix + "threshold");
    spec.forcing.push_back(ellipse);
  }
  w.problem = spec;
  w.system = assemble_adr(w.space, spec);
  w.h1 = inner_product(w.space, InnerProduct::Norm::h1, w.system.constrained_dofs);
  w.l2 = inner_product(w.space, InnerProduct::Norm::l2, w.system.constrained_dofs);
  w.domain = domain_from_config(config, spec.parameter_dim);
  return w;
}

StokesWorkspace build_stokes_workspace(const ExperimentConfig& config) {
  const std::string problem = config.get_string("problem");
  if (problem != "stokes") {
    throw ConfigError("config key `problem`: expected `stokes`, got `" + problem + "`");
  }
  StokesWorkspace w;
  w.map = map_from_config(config);
  w.quad = quad_from_config(config, w.map);
  w.space = build_stokes_space(w.map, w.quad, config.get_int("stokes.pressure_modes"));
  w.problem = StokesProblemSpec{};
  w.system = assemble_stokes(w.space, w.problem);
  w.velocity_h1 = stokes_velocity_inner(w.space);
  w.pressure_l2 = stokes_pressure_inner(w.space);
  w.domain = domain_from_config(config, w.problem.parameter_dim);
  return w;
}

double time_median(const std::function<void()>& op, int repetitions) {
  if (repetitions < 1) {
    throw std::invalid_argument("time_median: need at least one repetition");
  }
  using clock = std::chrono::steady_clock;
  const auto seconds_for = [&op](int batch) {
    const auto start = clock::now();
    for (int i = 0; i < batch; ++i) {
      op();
    }
    return std::chrono::duration<double>(clock::now() - start).count();
  };
  op();  // warm-up, discarded
  int batch = 1;
  double probe = seconds_for(batch);
  while (probe < 2e-4 && batch < (1 << 16)) {
    batch *= 4;
    probe = seconds_for(batch);
  }
  std::vector<double> samples(static_cast<size_t>(repetitions));
  for (double& sample : samples) {
    sample = seconds_for(batch) / batch;
  }
  return median_of(samples);
}

struct CsvWriter::Impl {
  std::ofstream out;
  size_t columns = 0;
  std::string path;
};

CsvWriter::CsvWriter(const std::string& path, const std::string& schema_name,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open CSV output file: " + path);
  }
  impl_->columns = columns.size();
  impl_->path = path;
  impl_->out << "# himod-bench " << schema_name << " v1\n";
  row(columns);
}

CsvWriter::~CsvWriter() {
  delete impl_;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != impl_->columns) {
    throw std::logic_error("CsvWriter: row width mismatch in " + impl_->path);
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    impl_->out << cells[i];
    if (i + 1 < cells.size()) {
      impl_->out << ',';
    }
  }
  impl_->out << '\n';
}

std::string CsvWriter::real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string CsvWriter::integer(long long value) {
  char buffer[24];
  std::snprintf(buffer, sizeof buffer, "%lld", value);
  return buffer;
}

std::vector<SpectrumRow> run_eig_decay(const ExperimentConfig& config, const std::string& out_dir) {
  const std::string problem = config.get_string("problem");
  const int train_count = required_train_count(config);
  const std::uint64_t seed = config.get_seed("train.seed", 0);
  std::vector<SpectrumRow> rows;
  std::vector<std::string> summary;

  if (problem == "adr") {
    const AdrWorkspace w = build_adr_workspace(config);
    const TrainingSet train = sample_training_set(w.domain, train_count, seed);
    const Eigen::MatrixXd snapshots = collect_snapshots(w.system, train);
    const auto [basis, spectrum] = pod_extract(snapshots, FieldRole::state, w.h1,
                                               PodCutoff::fixed(1));
    append_spectrum_rows(rows, field_role_name(FieldRole::state), spectrum);
  } else if (problem == "stokes") {
    const StokesWorkspace w = build_stokes_workspace(config);
    const TrainingSet train = sample_training_set(w.domain, train_count, seed);
    const StokesSnapshots snapshots = collect_snapshots_stokes(w.system, w.velocity_h1, train);
    const auto [vb, vs] = pod_extract(snapshots.velocity, FieldRole::velocity, w.velocity_h1,
                                      PodCutoff::fixed(1));
    const auto [pb, ps] = pod_extract(snapshots.pressure, FieldRole::pressure, w.pressure_l2,
                                      PodCutoff::fixed(1));
    const auto [sb, ss] = pod_extract(snapshots.supremizer, FieldRole::supremizer, w.velocity_h1,
                                      PodCutoff::fixed(1));
    append_spectrum_rows(rows, field_role_name(FieldRole::velocity), vs);
    append_spectrum_rows(rows, field_role_name(FieldRole::pressure), ps);
    append_spectrum_rows(rows, field_role_name(FieldRole::supremizer), ss);
  } else {
    throw ConfigError("config key `problem`: expected adr or stokes, got `" + problem + "`");
  }

  write_spectrum_csv(out_dir, rows);
  std::string role;
  for (const SpectrumRow& row : rows) {
    if (row.role != role) {
      role = row.role;
      summary.push_back("eig-decay " + role + ": lambda_1 = " + CsvWriter::real(row.lambda));
    }
  }
  append_summary(out_dir, summary);
  return rows;
}

namespace {

std::vector<ErrorRow> error_sweep_adr(const ExperimentConfig& config, const std::string& method,
                                      const std::string& out_dir) {
  const AdrWorkspace w = build_adr_workspace(config);
  const int train_count = required_train_count(config);
  const std::uint64_t train_seed = config.get_seed("train.seed", 0);
  const TrainingSet train = sample_training_set(w.domain, train_count, train_seed);
  const int test_count = config.get_int("test.count", 100);
  const TrainingSet test =
      sample_training_set(w.domain, test_count, config.get_seed("test.seed", train_seed + 1));
  const int n_max = config.get_int("rom.max_size");

  // Testing-set truths, solved once.
  std::vector<Eigen::VectorXd> truth(static_cast<size_t>(test_count));
  std::vector<double> truth_norm(static_cast<size_t>(test_count));
  for (int j = 0; j < test_count; ++j) {
    truth[j] = solve_himod(w.system, test.point(j));
    truth_norm[j] = safe_norm(w.h1.norm(truth[j]));
  }

  ReducedSystem rom;
  ResidualEstimator estimator;
  bool with_estimator = false;
  if (method == "hipod") {
    const Eigen::MatrixXd snapshots = collect_snapshots(w.system, train);
    const auto [basis, spectrum] = pod_extract(snapshots, FieldRole::state, w.h1,
                                               PodCutoff::fixed(n_max));
    rom = project_system(w.system, basis);
  } else {
    GreedyOptions options;
    options.max_size = n_max;
    options.tolerance = config.get_real("rom.tolerance", 0.0);
    options.seed = config.get_seed("rom.seed", train_seed);
    GreedyResult greedy = greedy_offline(w.system, w.h1, train, options);
    if (!out_dir.empty()) {
      write_greedy_log_csv(path_join(out_dir, "greedy_log.csv"), greedy.log, train);
    }
    rom = std::move(greedy.rom);
    estimator = std::move(greedy.estimator);
    with_estimator = true;
  }

  std::vector<ErrorRow> rows;
  for (int n = 1; n <= rom.size(); ++n) {
    const ReducedSystem romn = rom.truncated(n);
    std::vector<double> errors(static_cast<size_t>(test_count));
    std::vector<double> estimates(static_cast<size_t>(test_count), kNan);
    for (int j = 0; j < test_count; ++j) {
      const RomSolution sol = rom_query(romn, test.point(j));
      errors[j] = w.h1.norm(truth[j] - sol.full) / truth_norm[j];
      if (with_estimator) {
        estimates[j] = estimator(test.point(j), sol.reduced) / truth_norm[j];
      }
    }
    ErrorRow row;
    row.method = method;
    row.field = field_role_name(FieldRole::state);
    row.size = n;
    row.mean_error = mean_of(errors);
    row.median_error = median_of(errors);
    row.max_error = max_of(errors);
    row.mean_estimator = with_estimator ? mean_of(estimates) : kNan;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ErrorRow> error_sweep_stokes(const ExperimentConfig& config, const std::string& method,
                                         const std::string& out_dir) {
  const StokesWorkspace w = build_stokes_workspace(config);
  const int train_count = required_train_count(config);
  const std::uint64_t train_seed = config.get_seed("train.seed", 0);
  const TrainingSet train = sample_training_set(w.domain, train_count, train_seed);
  const int test_count = config.get_int("test.count", 100);
  const TrainingSet test =
      sample_training_set(w.domain, test_count, config.get_seed("test.seed", train_seed + 1));
  const int n_max = config.get_int("rom.max_size");

  std::vector<StokesSolution> truth(static_cast<size_t>(test_count));
  std::vector<double> velocity_norm(static_cast<size_t>(test_count));
  std::vector<double> pressure_norm(static_cast<size_t>(test_count));
  for (int j = 0; j < test_count; ++j) {
    truth[j] = solve_stokes(w.system, test.point(j));
    velocity_norm[j] = safe_norm(w.velocity_h1.norm(truth[j].velocity));
    pressure_norm[j] = safe_norm(w.pressure_l2.norm(truth[j].pressure));
  }

  ReducedBasis velocity, supremizer, pressure;
  StokesResidualEstimator estimator;
  bool with_estimator = false;
  if (method == "hipod") {
    const StokesSnapshots snapshots = collect_snapshots_stokes(w.system, w.velocity_h1, train);
    velocity = pod_extract(snapshots.velocity, FieldRole::velocity, w.velocity_h1,
                           PodCutoff::fixed(n_max))
                   .first;
    pressure = pod_extract(snapshots.pressure, FieldRole::pressure, w.pressure_l2,
                           PodCutoff::fixed(n_max))
                   .first;
    supremizer = pod_extract(snapshots.supremizer, FieldRole::supremizer, w.velocity_h1,
                             PodCutoff::fixed(n_max))
                     .first;
  } else {
    GreedyOptions options;
    options.max_size = n_max;
    options.tolerance = config.get_real("rom.tolerance", 0.0);
    options.seed = config.get_seed("rom.seed", train_seed);
    StokesGreedyResult greedy =
        greedy_offline_stokes(w.system, w.velocity_h1, w.pressure_l2, train, options);
    if (!out_dir.empty()) {
      write_greedy_log_csv(path_join(out_dir, "greedy_log.csv"), greedy.log, train);
    }
    velocity = std::move(greedy.velocity);
    supremizer = std::move(greedy.supremizer);
    pressure = std::move(greedy.pressure);
    estimator = std::move(greedy.estimator);
    with_estimator = true;
  }

  const int sweep = std::max({velocity.size(), supremizer.size(), pressure.size()});
  std::vector<ErrorRow> rows;
  for (int n = 1; n <= sweep; ++n) {
    const ReducedBasis vn = velocity.truncated(n);
    const ReducedBasis sn = supremizer.truncated(n);
    const ReducedBasis pn = pressure.truncated(n);
    const ReducedStokes romn =
        project_system_stokes(w.system, vn, sn, pn, w.velocity_h1, w.pressure_l2);
    std::vector<double> verr(static_cast<size_t>(test_count));
    std::vector<double> perr(static_cast<size_t>(test_count));
    std::vector<double> estimates(static_cast<size_t>(test_count), kNan);
    for (int j = 0; j < test_count; ++j) {
      const StokesRomSolution sol = rom_query_stokes(romn, test.point(j));
      verr[j] = w.velocity_h1.norm(truth[j].velocity - sol.velocity) / velocity_norm[j];
      perr[j] = w.pressure_l2.norm(truth[j].pressure - sol.pressure) / pressure_norm[j];
      if (with_estimator) {
        estimates[j] = estimator.truncated(test.point(j), vn.size(), sn.size(),
                                           sol.velocity_reduced, sol.pressure_reduced) /
                       velocity_norm[j];
      }
    }
    ErrorRow vrow;
    vrow.method = method;
    vrow.field = field_role_name(FieldRole::velocity);
    vrow.size = n;
    vrow.mean_error = mean_of(verr);
    vrow.median_error = median_of(verr);
    vrow.max_error = max_of(verr);
    vrow.mean_estimator = with_estimator ? mean_of(estimates) : kNan;
    rows.push_back(vrow);

    ErrorRow prow;
    prow.method = method;
    prow.field = field_role_name(FieldRole::pressure);
    prow.size = n;
    prow.mean_error = mean_of(perr);
    prow.median_error = median_of(perr);
    prow.max_error = max_of(perr);
    prow.mean_estimator = kNan;  // the momentum estimator lives in the velocity norm
    rows.push_back(prow);
  }
  return rows;
}

}  // namespace

std::vector<ErrorRow> run_error_vs_n(const ExperimentConfig& config, const std::string& method,
                                     const std::string& out_dir) {
  const std::string problem = config.get_string("problem");
  std::vector<ErrorRow> rows;
  for (const std::string& one : methods_from(method)) {
    std::vector<ErrorRow> part;
    if (problem == "adr") {
      part = error_sweep_adr(config, one, out_dir);
    } else if (problem == "stokes") {
      part = error_sweep_stokes(config, one, out_dir);
    } else {
      throw ConfigError("config key `problem`: expected adr or stokes, got `" + problem + "`");
    }
    write_error_csv(out_dir, one, part);
    std::vector<std::string> summary;
    if (!part.empty()) {
      const ErrorRow& last = part.back();
      summary.push_back("error-vs-n " + one + " " + problem + ": N = " +
                        CsvWriter::integer(last.size) + ", mean relative error (" + last.field +
                        ") = " + CsvWriter::real(last.mean_error));
    }
    append_summary(out_dir, summary);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

namespace {

SpeedupRow speedup_adr(const ExperimentConfig& config, const std::string& method) {
  const AdrWorkspace w = build_adr_workspace(config);
  const int train_count = required_train_count(config);
  const std::uint64_t train_seed = config.get_seed("train.seed", 0);
  const TrainingSet train = sample_training_set(w.domain, train_count, train_seed);
  const int n_max = config.get_int("rom.max_size");
  const Eigen::VectorXd mu = config.get_vector("query.mu");
  if (mu.size() != w.system.parameter_dim) {
    throw ConfigError("config key `query.mu`: expected " +
                      std::to_string(w.system.parameter_dim) + " components");
  }
  const int reps = config.get_int("bench.repetitions", 5);

  ReducedSystem rom;
  ResidualEstimator estimator;
  bool with_estimator = false;
  if (method == "hipod") {
    const Eigen::MatrixXd snapshots = collect_snapshots(w.system, train);
    rom = project_system(
        w.system,
        pod_extract(snapshots, FieldRole::state, w.h1, PodCutoff::fixed(n_max)).first);
  } else {
    GreedyOptions options;
    options.max_size = n_max;
    options.tolerance = config.get_real("rom.tolerance", 0.0);
    options.seed = config.get_seed("rom.seed", train_seed);
    GreedyResult greedy = greedy_offline(w.system, w.h1, train, options);
    rom = std::move(greedy.rom);
    estimator = std::move(greedy.estimator);
    with_estimator = true;
  }

  SpeedupRow row;
  row.method = method;
  row.field = field_role_name(FieldRole::state);
  row.size = rom.size();

  linalg::SparseMatrix full_matrix;
  Eigen::VectorXd full_load;
  row.full_assembly_seconds = time_median(
      [&] {
        full_matrix = w.system.matrix_at(mu);
        full_load = w.system.load_at(mu);
      },
      reps);
  Eigen::VectorXd full_solution;
  row.full_solve_seconds = time_median(
      [&] {
        const linalg::SparseOperator op(full_matrix);
        full_solution = op.solve(full_load);
      },
      reps);

  Eigen::MatrixXd reduced_matrix;
  Eigen::VectorXd reduced_load;
  row.reduced_assembly_seconds = time_median(
      [&] {
        reduced_matrix = rom.matrix_at(mu);
        reduced_load = rom.load_at(mu);
      },
      reps);
  Eigen::VectorXd reduced_solution;
  double estimate = 0.0;
  row.reduced_solve_seconds = time_median(
      [&] {
        reduced_solution = linalg::dense_solve(reduced_matrix, reduced_load);
        if (with_estimator) {
          estimate = estimator(mu, reduced_solution);
        }
      },
      reps);
  (void)estimate;
  row.speedup = row.full_solve_seconds / row.reduced_solve_seconds;
  return row;
}

SpeedupRow speedup_stokes(const ExperimentConfig& config, const std::string& method) {
  const StokesWorkspace w = build_stokes_workspace(config);
  const int train_count = required_train_count(config);
  const std::uint64_t train_seed = config.get_seed("train.seed", 0);
  const TrainingSet train = sample_training_set(w.domain, train_count, train_seed);
  const int n_max = config.get_int("rom.max_size");
  const Eigen::VectorXd mu = config.get_vector("query.mu");
  if (mu.size() != w.system.parameter_dim) {
    throw ConfigError("config key `query.mu`: expected " +
                      std::to_string(w.system.parameter_dim) + " components");
  }
  const int reps = config.get_int("bench.repetitions", 5);

  ReducedStokes rom;
  StokesResidualEstimator estimator;
  bool with_estimator = false;
  if (method == "hipod") {
    const StokesSnapshots snapshots = collect_snapshots_stokes(w.system, w.velocity_h1, train);
    const ReducedBasis velocity = pod_extract(snapshots.velocity, FieldRole::velocity,
                                              w.velocity_h1, PodCutoff::fixed(n_max))
                                      .first;
    const ReducedBasis pressure = pod_extract(snapshots.pressure, FieldRole::pressure,
                                              w.pressure_l2, PodCutoff::fixed(n_max))
                                      .first;
    const ReducedBasis supremizer = pod_extract(snapshots.supremizer, FieldRole::supremizer,
                                                w.velocity_h1, PodCutoff::fixed(n_max))
                                        .first;
    rom = project_system_stokes(w.system, velocity, supremizer, pressure, w.velocity_h1,
                                w.pressure_l2);
  } else {
    GreedyOptions options;
    options.max_size = n_max;
    options.tolerance = config.get_real("rom.tolerance", 0.0);
    options.seed = config.get_seed("rom.seed", train_seed);
    StokesGreedyResult greedy =
        greedy_offline_stokes(w.system, w.velocity_h1, w.pressure_l2, train, options);
    rom = std::move(greedy.rom);
    estimator = std::move(greedy.estimator);
    with_estimator = true;
  }

  SpeedupRow row;
  row.method = method;
  row.field = "velocity+pressure";
  row.size = rom.pressure.size();

  linalg::SparseMatrix full_matrix;
  Eigen::VectorXd full_load;
  row.full_assembly_seconds = time_median(
      [&] {
        full_matrix = w.system.saddle_at(mu);
        full_load = Eigen::VectorXd::Zero(w.system.dim_u + w.system.dim_p);
        full_load.head(w.system.dim_u) = w.system.load_at(mu);
      },
      reps);
  Eigen::VectorXd full_solution;
  row.full_solve_seconds = time_median(
      [&] {
        const linalg::SparseOperator op(full_matrix);
        full_solution = op.solve(full_load);
      },
      reps);

  Eigen::MatrixXd reduced_matrix;
  Eigen::VectorXd reduced_load;
  row.reduced_assembly_seconds = time_median(
      [&] {
        reduced_matrix = rom.matrix_at(mu);
        reduced_load = rom.load_at(mu);
      },
      reps);
  std::pair<Eigen::VectorXd, Eigen::VectorXd> reduced_solution;
  double estimate = 0.0;
  row.reduced_solve_seconds = time_median(
      [&] {
        reduced_solution = solve_reduced_saddle(rom, mu);
        if (with_estimator) {
          estimate = estimator(mu, reduced_solution.first, reduced_solution.second);
        }
      },
      reps);
  (void)estimate;
  row.speedup = row.full_solve_seconds / row.reduced_solve_seconds;
  return row;
}

}  // namespace

std::vector<SpeedupRow> run_speedup(const ExperimentConfig& config, const std::string& method,
                                    const std::string& out_dir) {
  const std::string problem = config.get_string("problem");
  std::vector<SpeedupRow> rows;
  for (const std::string& one : methods_from(method)) {
    SpeedupRow row;
    if (problem == "adr") {
      row = speedup_adr(config, one);
    } else if (problem == "stokes") {
      row = speedup_stokes(config, one);
    } else {
      throw ConfigError("config key `problem`: expected adr or stokes, got `" + problem + "`");
    }
    write_speedup_csv(out_dir, one, {row});
    append_summary(out_dir,
                   {"speedup " + one + " " + problem + ": N = " + CsvWriter::integer(row.size) +
                    ", full solve = " + CsvWriter::real(row.full_solve_seconds) +
                    " s, reduced solve = " + CsvWriter::real(row.reduced_solve_seconds) +
                    " s, speedup = " + CsvWriter::real(row.speedup)});
    rows.push_back(row);
  }
  return rows;
}

std::vector<OfflineRow> run_offline_cost(const ExperimentConfig& config,
                                         const std::string& out_dir) {
  const std::string problem = config.get_string("problem");
  required_train_count(config);
  const std::vector<int> m_list = config.get_int_list("offline.train_counts", {25, 50, 100, 200});
  if (m_list.empty()) {
    throw ConfigError("config key `offline.train_counts`: need a non-empty list");
  }
  for (size_t i = 0; i + 1 < m_list.size(); ++i) {
    if (m_list[i] >= m_list[i + 1]) {
      throw ConfigError("config key `offline.train_counts`: list must be strictly increasing");
    }
  }
  if (m_list.front() < 1) {
    throw ConfigError("config key `offline.train_counts`: counts must be >= 1");
  }
  const int n_max = config.get_int("rom.max_size");
  const std::uint64_t train_seed = config.get_seed("train.seed", 0);
  using clock = std::chrono::steady_clock;

  std::vector<OfflineRow> rows;
  if (problem == "adr") {
    const AdrWorkspace w = build_adr_workspace(config);
    for (const int m : m_list) {
      OfflineRow row;
      row.train_count = m;
      const TrainingSet train = sample_training_set(w.domain, m, train_seed);
      {
        const auto start = clock::now();
        const Eigen::MatrixXd snapshots = collect_snapshots(w.system, train);
        const auto [basis, spectrum] =
            pod_extract(snapshots, FieldRole::state, w.h1, PodCutoff::fixed(std::min(n_max, m)));
        const ReducedSystem rom = project_system(w.system, basis);
        row.pod_seconds = std::chrono::duration<double>(clock::now() - start).count();
        row.pod_solves = m;
      }
      {
        GreedyOptions options;
        options.max_size = std::min(n_max, m);
        options.tolerance = config.get_real("rom.tolerance", 0.0);
        options.seed = config.get_seed("rom.seed", train_seed);
        const auto start = clock::now();
        const GreedyResult greedy = greedy_offline(w.system, w.h1, train, options);
        row.greedy_seconds = std::chrono::duration<double>(clock::now() - start).count();
        row.greedy_solves = greedy.log.solve_count;
      }
      rows.push_back(row);
    }
  } else if (problem == "stokes") {
    const StokesWorkspace w = build_stokes_workspace(config);
    for (const int m : m_list) {
      OfflineRow row;
      row.train_count = m;
      const TrainingSet train = sample_training_set(w.domain, m, train_seed);
      {
        const auto start = clock::now();
        const StokesSnapshots snapshots = collect_snapshots_stokes(w.system, w.velocity_h1, train);
        const PodCutoff cutoff = PodCutoff::fixed(std::min(n_max, m));
        const ReducedBasis velocity =
            pod_extract(snapshots.velocity, FieldRole::velocity, w.velocity_h1, cutoff).first;
        const ReducedBasis pressure =
            pod_extract(snapshots.pressure, FieldRole::pressure, w.pressure_l2, cutoff).first;
        const ReducedBasis supremizer =
            pod_extract(snapshots.supremizer, FieldRole::supremizer, w.velocity_h1, cutoff).first;
        const ReducedStokes rom = project_system_stokes(w.system, velocity, supremizer, pressure,
                                                        w.velocity_h1, w.pressure_l2);
        row.pod_seconds = std::chrono::duration<double>(clock::now() - start).count();
        row.pod_solves = m;
      }
      {
        GreedyOptions options;
        options.max_size = std::min(n_max, m);
        options.tolerance = config.get_real("rom.tolerance", 0.0);
        options.seed = config.get_seed("rom.seed", train_seed);
        const auto start = clock::now();
        const StokesGreedyResult greedy =
            greedy_offline_stokes(w.system, w.velocity_h1, w.pressure_l2, train, options);
        row.greedy_seconds = std::chrono::duration<double>(clock::now() - start).count();
        row.greedy_solves = greedy.log.solve_count;
      }
      rows.push_back(row);
    }
  } else {
    throw ConfigError("config key `problem`: expected adr or stokes, got `" + problem + "`");
  }

  if (!out_dir.empty()) {
    CsvWriter csv(path_join(out_dir, "offline_cost.csv"), "offline-cost",
                  {"train_count", "pod_seconds", "greedy_seconds", "pod_solves", "greedy_solves"});
    for (const OfflineRow& row : rows) {
      csv.row({CsvWriter::integer(row.train_count), CsvWriter::real(row.pod_seconds),
               CsvWriter::real(row.greedy_seconds), CsvWriter::integer(row.pod_solves),
               CsvWriter::integer(row.greedy_solves)});
    }
  }
  std::vector<std::string> summary;
  for (const OfflineRow& row : rows) {
    summary.push_back("offline-cost M = " + CsvWriter::integer(row.train_count) +
                      ": snapshot-projection offline = " + CsvWriter::real(row.pod_seconds) +
                      " s (" + CsvWriter::integer(row.pod_solves) + " solves), greedy offline = " +
                      CsvWriter::real(row.greedy_seconds) + " s (" +
                      CsvWriter::integer(row.greedy_solves) + " solves)");
  }
  append_summary(out_dir, summary);
  return rows;
}

std::vector<InfsupRow> run_infsup_sweep(const ExperimentConfig& config,
                                        const std::string& out_dir) {
  const std::string problem = config.get_string("problem");
  if (problem != "stokes") {
    throw ConfigError("infsup-sweep requires `problem = stokes`, got `" + problem + "`");
  }
  const int train_count = required_train_count(config);
  const std::uint64_t train_seed = config.get_seed("train.seed", 0);
  std::vector<int> ns_list = config.get_int_list("infsup.supremizer_sizes", {0, 1, 2, 3, 4});
  const int base_size = config.get_int("infsup.base_size", 4);

  const StokesWorkspace w = build_stokes_workspace(config);
  const TrainingSet train = sample_training_set(w.domain, train_count, train_seed);
  const StokesSnapshots snapshots = collect_snapshots_stokes(w.system, w.velocity_h1, train);
  const ReducedBasis velocity = pod_extract(snapshots.velocity, FieldRole::velocity,
                                            w.velocity_h1, PodCutoff::fixed(base_size))
                                    .first;
  const ReducedBasis pressure = pod_extract(snapshots.pressure, FieldRole::pressure,
                                            w.pressure_l2, PodCutoff::fixed(base_size))
                                    .first;
  int ns_max = 0;
  for (const int ns : ns_list) {
    if (ns < 0) {
      throw ConfigError("config key `infsup.supremizer_sizes`: sizes must be >= 0");
    }
    ns_max = std::max(ns_max, ns);
  }
  const ReducedBasis supremizer =
      pod_extract(snapshots.supremizer, FieldRole::supremizer, w.velocity_h1,
                  PodCutoff::fixed(std::max(ns_max, 1)))
          .first;

  const double beta_himod = infsup_himod(w.system, w.velocity_h1, w.pressure_l2);
  std::vector<InfsupRow> rows;
  for (const int ns : ns_list) {
    const ReducedStokes rom = project_system_stokes(
        w.system, velocity, supremizer.truncated(ns), pressure, w.velocity_h1, w.pressure_l2);
    InfsupRow row;
    row.supremizer_size = ns;
    row.beta_reduced = infsup_reduced(rom);
    row.beta_himod = beta_himod;
    rows.push_back(row);
  }

  if (!out_dir.empty()) {
    CsvWriter csv(path_join(out_dir, "infsup.csv"), "infsup",
                  {"supremizer_size", "beta_reduced", "beta_himod"});
    for (const InfsupRow& row : rows) {
      csv.row({CsvWriter::integer(row.supremizer_size), CsvWriter::real(row.beta_reduced),
               CsvWriter::real(row.beta_himod)});
    }
  }
  std::vector<std::string> summary;
  for (const InfsupRow& row : rows) {
    summary.push_back("infsup N_s = " + CsvWriter::integer(row.supremizer_size) +
                      ": beta_reduced = " + CsvWriter::real(row.beta_reduced) +
                      ", beta_himod = " + CsvWriter::real(row.beta_himod));
  }
  append_summary(out_dir, summary);
  return rows;
}

namespace {

/// Physical plotting grid: tensor product of uniform axial stations with the
/// per-station physical images of uniform reference transverse coordinates.
std::vector<std::pair<double, double>> sample_grid(const DomainMap& map, int samples_x,
                                                   int samples_y) {
  if (samples_x < 2 || samples_y < 2) {
    throw ConfigError("field.samples_x and field.samples_y must be >= 2");
  }
  std::vector<std::pair<double, double>> points;
  points.reserve(static_cast<size_t>(samples_x) * static_cast<size_t>(samples_y));
  for (int i = 0; i < samples_x; ++i) {
    const double x = map.length * static_cast<double>(i) / (samples_x - 1);
    for (int j = 0; j < samples_y; ++j) {
      const double y_hat = -0.5 + static_cast<double>(j) / (samples_y - 1);
      points.emplace_back(x, map_eval(map, x, y_hat).y_phys);
    }
  }
  return points;
}

void write_coefficients(CsvWriter& csv, const std::string& field, const HiModSpaceScalar& space,
                        const Eigen::VectorXd& coefficients) {
  for (int k = 0; k < space.modal.count; ++k) {
    for (int i = 0; i < space.fem.dof_count; ++i) {
      const int index = space.dof(k, i);
      csv.row({field, CsvWriter::integer(index), CsvWriter::integer(k), CsvWriter::integer(i),
               CsvWriter::real(coefficients[index])});
    }
  }
}

}  // namespace

void run_field_export(const ExperimentConfig& config, const std::string& out_dir) {
  if (out_dir.empty()) {
    throw ConfigError("field-export needs an output directory");
  }
  const std::string problem = config.get_string("problem");
  const Eigen::VectorXd mu = config.get_vector("query.mu");
  const int samples_x = config.get_int("field.samples_x", 81);
  const int samples_y = config.get_int("field.samples_y", 41);

  if (problem == "adr") {
    const AdrWorkspace w = build_adr_workspace(config);
    if (mu.size() != w.system.parameter_dim) {
      throw ConfigError("config key `query.mu`: expected " +
                        std::to_string(w.system.parameter_dim) + " components");
    }
    const Eigen::VectorXd u = solve_himod(w.system, mu);
    const auto points = sample_grid(w.map, samples_x, samples_y);
    const Eigen::VectorXd values = evaluate_field(w.space, u, points);
    CsvWriter field(path_join(out_dir, "field.csv"), "field-scalar", {"x", "y", "u"});
    for (size_t i = 0; i < points.size(); ++i) {
      field.row({CsvWriter::real(points[i].first), CsvWriter::real(points[i].second),
                 CsvWriter::real(values[static_cast<Eigen::Index>(i)])});
    }
    CsvWriter coeffs(path_join(out_dir, "coeffs.csv"), "coefficients",
                     {"field", "index", "mode", "axial", "value"});
    write_coefficients(coeffs, field_role_name(FieldRole::state), w.space, u);
  } else if (problem == "stokes") {
    const StokesWorkspace w = build_stokes_workspace(config);
    if (mu.size() != w.system.parameter_dim) {
      throw ConfigError("config key `query.mu`: expected " +
                        std::to_string(w.system.parameter_dim) + " components");
    }
    const StokesSolution sol = solve_stokes(w.system, mu);
    const Eigen::Index scalar_dim = w.space.velocity.dim();
    const Eigen::VectorXd ux_coeff = sol.velocity.head(scalar_dim);
    const Eigen::VectorXd uy_coeff = sol.velocity.segment(scalar_dim, scalar_dim);
    const auto points = sample_grid(w.map, samples_x, samples_y);
    const Eigen::VectorXd ux = evaluate_field(w.space.velocity, ux_coeff, points);
    const Eigen::VectorXd uy = evaluate_field(w.space.velocity, uy_coeff, points);
    const Eigen::VectorXd p = evaluate_field(w.space.pressure, sol.pressure, points);
    CsvWriter field(path_join(out_dir, "field.csv"), "field-stokes",
                    {"x", "y", "ux", "uy", "p"});
    for (size_t i = 0; i < points.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      field.row({CsvWriter::real(points[i].first), CsvWriter::real(points[i].second),
                 CsvWriter::real(ux[idx]), CsvWriter::real(uy[idx]), CsvWriter::real(p[idx])});
    }
    CsvWriter coeffs(path_join(out_dir, "coeffs.csv"), "coefficients",
                     {"field", "index", "mode", "axial", "value"});
    write_coefficients(coeffs, "velocity_x", w.space.velocity, ux_coeff);
    write_coefficients(coeffs, "velocity_y", w.space.velocity, uy_coeff);
    write_coefficients(coeffs, field_role_name(FieldRole::pressure), w.space.pressure,
                       sol.pressure);
  } else {
    throw ConfigError("config key `problem`: expected adr or stokes, got `" + problem + "`");
  }
  append_summary(out_dir, {"field-export " + problem + " at mu = " + format_mu(mu)});
}

void run_experiment(const ExperimentConfig& config, const std::string& method,
                    const std::string& out_dir) {
  methods_from(method);  // validate up front, before any stage writes output
  run_eig_decay(config, out_dir);
  run_error_vs_n(config, method, out_dir);
  run_speedup(config, method, out_dir);
}

void write_greedy_log_csv(const std::string& path, const GreedyLog& log, const TrainingSet& train) {
  const int dim = train.domain.dim();
  std::vector<std::string> columns = {"iteration", "selected"};
  for (int j = 1; j <= dim; ++j) {
    columns.push_back("mu" + std::to_string(j));
  }
  columns.insert(columns.end(), {"max_estimator", "orthogonality_defect", "wall_seconds"});
  CsvWriter csv(path, "greedy-log", columns);
  for (const GreedyIteration& it : log.iterations) {
    std::vector<std::string> cells = {CsvWriter::integer(it.iteration),
                                      CsvWriter::integer(it.selected)};
    const Eigen::VectorXd mu = train.point(it.selected);
    for (int j = 0; j < dim; ++j) {
      cells.push_back(CsvWriter::real(mu[j]));
    }
    cells.push_back(CsvWriter::real(it.max_estimator));
    cells.push_back(CsvWriter::real(it.orthogonality_defect));
    cells.push_back(CsvWriter::real(it.wall_seconds));
    csv.row(cells);
  }
}

}  // namespace himod::bench
