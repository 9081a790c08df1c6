/// @file test_bench.cpp
/// @brief Experiment-driver coverage: configuration parsing and validation,
///        workspace construction, timing and CSV plumbing, and the study
///        runners on deliberately tiny problems.

#include "himod/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using himod::bench::build_adr_workspace;
using himod::bench::build_stokes_workspace;
using himod::bench::ConfigError;
using himod::bench::CsvWriter;
using himod::bench::ErrorRow;
using himod::bench::ExperimentConfig;
using himod::bench::InfsupRow;
using himod::bench::OfflineRow;
using himod::bench::SpectrumRow;
using himod::bench::SpeedupRow;
using himod::bench::time_median;

namespace {

const char* const kTinyAdrConfig = R"(# tiny deformed-channel scalar problem
problem = adr

map.kind = sinusoidal_additive
map.length = 4
map.amplitude = 0.2
map.frequency = 1.1780972450961724
map.phase = 0

mesh.elements = 10
quad.axial = 4
quad.transverse = 6
quad.panels = 6

adr.modes = 3
adr.degree = 1
adr.bc = robin
adr.rho = 1
adr.nu_ref = 5

adr.forcing.count = 2
adr.forcing.1.weight = 1.8
adr.forcing.1.center_x = 0.75
adr.forcing.1.center_y = 0
adr.forcing.1.coef_x = 0.5
adr.forcing.1.coef_y = 0.4
adr.forcing.1.threshold = 0.02
adr.forcing.2.weight = -1.8
adr.forcing.2.center_x = 1.5
adr.forcing.2.center_y = 0
adr.forcing.2.coef_x = 0.5
adr.forcing.2.coef_y = 0.4
adr.forcing.2.threshold = 0.02

domain.mu1 = 1:10
domain.mu2 = 15:25
domain.mu3 = 70:80
domain.mu4 = 20:30

train.count = 8
train.seed = 7
test.count = 5
test.seed = 11

rom.max_size = 4
rom.tolerance = 0

query.mu = 5, 20, 75, 25
bench.repetitions = 1
offline.train_counts = 3, 6

field.samples_x = 9
field.samples_y = 7
)";

const char* const kTinyStokesConfig = R"(# tiny deformed-channel saddle problem
problem = stokes

map.kind = sinusoidal_multiplicative
map.length = 6
map.amplitude = 0.4
map.frequency = 3.141592653589793
map.phase = 1.5707963267948966
map.width = 1

mesh.elements = 8
quad.axial = 4
quad.transverse = 6
quad.panels = 6

stokes.pressure_modes = 2

domain.mu1 = 1:10
domain.mu2 = 5:15
domain.mu3 = 0:10
domain.mu4 = 1:10
domain.mu5 = 0:10

train.count = 6
train.seed = 3
test.count = 4
test.seed = 5

rom.max_size = 3
rom.tolerance = 0

query.mu = 5, 10, 0, 3, 0
bench.repetitions = 1
offline.train_counts = 2, 4

infsup.supremizer_sizes = 0, 1, 2, 3
infsup.base_size = 3

field.samples_x = 7
field.samples_y = 5
)";

ExperimentConfig tiny_adr() {
  return ExperimentConfig::parse(kTinyAdrConfig, "tiny-adr");
}

ExperimentConfig tiny_stokes() {
  return ExperimentConfig::parse(kTinyStokesConfig, "tiny-stokes");
}

std::string fresh_dir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "himod_bench" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in.good()) << "cannot open " << path;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST(ConfigParseTest, StripsCommentsAndWhitespaceAndKeepsTheLastValue) {
  const ExperimentConfig config = ExperimentConfig::parse(
      "# full-line comment\n"
      "\n"
      "  alpha.beta =  3   # trailing comment\n"
      "name = hello world\n"
      "repeated = 1\n"
      "repeated = 2\n");
  EXPECT_TRUE(config.has("alpha.beta"));
  EXPECT_FALSE(config.has("missing"));
  EXPECT_EQ(config.get_int("alpha.beta"), 3);
  EXPECT_EQ(config.get_string("name"), "hello world");
  EXPECT_EQ(config.get_int("repeated"), 2);
}

TEST(ConfigParseTest, MalformedLinesReportTheirLocation) {
  try {
    ExperimentConfig::parse("good = 1\nbad line without equals\n", "unit.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& error) {
    EXPECT_NE(std::string(error.what()).find("unit.cfg:2"), std::string::npos) << error.what();
  }
  EXPECT_THROW(ExperimentConfig::parse(" = 3\n"), ConfigError);
}

TEST(ConfigParseTest, TypedGettersValidateTheirFormats) {
  const ExperimentConfig config = ExperimentConfig::parse(
      "range = 2:5\n"
      "inverted = 5:2\n"
      "scalar = 7\n"
      "word = x\n"
      "list = 25, 50, 100\n"
      "vec = 5, 20, 75, 25\n"
      "seed = 42\n"
      "negseed = -3\n"
      "fractional = 2.5\n");
  const auto [lo, hi] = config.get_interval("range");
  EXPECT_DOUBLE_EQ(lo, 2.0);
  EXPECT_DOUBLE_EQ(hi, 5.0);
  EXPECT_THROW(config.get_interval("inverted"), ConfigError);
  EXPECT_THROW(config.get_interval("scalar"), ConfigError);
  EXPECT_THROW(config.get_interval("word"), ConfigError);

  const std::vector<int> list = config.get_int_list("list", {});
  EXPECT_EQ(list, (std::vector<int>{25, 50, 100}));
  EXPECT_EQ(config.get_int_list("missing", {7, 9}), (std::vector<int>{7, 9}));

  const Eigen::VectorXd vec = config.get_vector("vec");
  ASSERT_EQ(vec.size(), 4);
  EXPECT_DOUBLE_EQ(vec[2], 75.0);

  EXPECT_EQ(config.get_seed("seed", 0), 42u);
  EXPECT_EQ(config.get_seed("missing", 9u), 9u);
  EXPECT_THROW(config.get_seed("negseed", 0), ConfigError);

  EXPECT_THROW(config.get_real("word"), ConfigError);
  EXPECT_THROW(config.get_int("fractional"), ConfigError);
  EXPECT_DOUBLE_EQ(config.get_real("missing", 1.5), 1.5);
  EXPECT_EQ(config.get_int("missing", 12), 12);
  EXPECT_THROW(config.get_string("missing"), ConfigError);
  EXPECT_EQ(config.get_string("missing", "fb"), "fb");
}

TEST(ConfigLoadTest, ReadsFilesAndRejectsMissingOnes) {
  const std::string dir = fresh_dir("config_load");
  const std::string path = dir + "/unit.cfg";
  {
    std::ofstream out(path);
    out << "problem = adr\nmesh.elements = 12\n";
  }
  const ExperimentConfig config = ExperimentConfig::load(path);
  EXPECT_EQ(config.get_string("problem"), "adr");
  EXPECT_EQ(config.get_int("mesh.elements"), 12);
  EXPECT_THROW(ExperimentConfig::load(dir + "/absent.cfg"), ConfigError);
}

TEST(WorkspaceTest, AdrWorkspaceFollowsTheConfiguration) {
  const auto w = build_adr_workspace(tiny_adr());
  EXPECT_EQ(w.map.kind, himod::MapKind::sinusoidal_additive);
  EXPECT_DOUBLE_EQ(w.map.length, 4.0);
  EXPECT_EQ(w.space.modal.count, 3);
  EXPECT_EQ(w.space.fem.dof_count, 11);
  EXPECT_EQ(w.space.dim(), 33);
  EXPECT_EQ(w.system.parameter_dim, 4);
  ASSERT_EQ(w.domain.dim(), 4);
  EXPECT_DOUBLE_EQ(w.domain.intervals[2].first, 70.0);
  EXPECT_DOUBLE_EQ(w.domain.intervals[2].second, 80.0);
  EXPECT_EQ(w.problem.forcing.size(), 2u);

  const auto wide = build_adr_workspace(tiny_adr(), 5);
  EXPECT_EQ(wide.space.modal.count, 5);
  EXPECT_EQ(wide.space.dim(), 55);
}

TEST(WorkspaceTest, StokesWorkspaceFollowsTheConfiguration) {
  const auto w = build_stokes_workspace(tiny_stokes());
  EXPECT_EQ(w.space.pressure.modal.count, 2);
  EXPECT_EQ(w.space.velocity.modal.count, 4);
  EXPECT_EQ(w.space.velocity.fem.dof_count, 17);
  EXPECT_EQ(w.space.pressure.fem.dof_count, 9);
  EXPECT_EQ(w.system.dim_u, 2 * 4 * 17);
  EXPECT_EQ(w.system.dim_p, 2 * 9);
  ASSERT_EQ(w.domain.dim(), 5);
}

TEST(WorkspaceTest, MissingOrMismatchedKeysThrow) {
  ExperimentConfig no_mesh = tiny_adr();
  ExperimentConfig rebuilt;  // rebuild without the mesh key (no erase API)
  for (const auto& [key, value] : no_mesh.entries()) {
    if (key != "mesh.elements") {
      rebuilt.set(key, value);
    }
  }
  try {
    build_adr_workspace(rebuilt);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& error) {
    EXPECT_NE(std::string(error.what()).find("mesh.elements"), std::string::npos);
  }
  EXPECT_THROW(build_adr_workspace(tiny_stokes()), ConfigError);
  EXPECT_THROW(build_stokes_workspace(tiny_adr()), ConfigError);
}

TEST(TimingTest, MedianIsPositiveAndRepetitionsAreValidated) {
  volatile double sink = 0.0;
  const double seconds = time_median(
      [&] {
        double acc = 0.0;
        for (int i = 1; i <= 64; ++i) {
          acc += 1.0 / i;
        }
        sink = acc;
      },
      3);
  EXPECT_GT(seconds, 0.0);
  EXPECT_LT(seconds, 1.0);
  EXPECT_THROW(time_median([] {}, 0), std::invalid_argument);
}

TEST(CsvTest, WriterEmitsTheSchemaCommentHeaderAndRows) {
  const std::string dir = fresh_dir("csv_basic");
  const std::string path = dir + "/nested/deeper/demo.csv";
  {
    CsvWriter csv(path, "demo", {"a", "b"});
    csv.row({CsvWriter::integer(1), CsvWriter::real(0.5)});
    csv.row({"x", "y"});
    EXPECT_THROW(csv.row({"only-one"}), std::logic_error);
  }
  const std::vector<std::string> lines = read_lines(path);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "# himod-bench demo v1");
  EXPECT_EQ(lines[1], "a,b");
  EXPECT_EQ(lines[2], "1,0.5");
  EXPECT_EQ(lines[3], "x,y");
}

TEST(CsvTest, NumericRenderingIsRoundTripExact) {
  EXPECT_EQ(CsvWriter::real(0.1), "0.10000000000000001");
  EXPECT_EQ(CsvWriter::real(1.0), "1");
  EXPECT_EQ(CsvWriter::integer(-3), "-3");
  const double value = 3.14159265358979312e-7;
  EXPECT_DOUBLE_EQ(std::stod(CsvWriter::real(value)), value);
}

TEST(EigDecayTest, SpectraDescendAndLandInTheCsv) {
  const std::string dir = fresh_dir("eig_adr");
  const std::vector<SpectrumRow> rows = himod::bench::run_eig_decay(tiny_adr(), dir);
  ASSERT_EQ(rows.size(), 8u);  // one eigenvalue per training snapshot
  EXPECT_DOUBLE_EQ(rows[0].ratio, 1.0);
  for (size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].role, "state");
    EXPECT_EQ(rows[k].index, static_cast<int>(k) + 1);
    if (k > 0) {
      EXPECT_LE(rows[k].ratio, rows[k - 1].ratio * (1.0 + 1e-12));
      EXPECT_GE(rows[k].energy, rows[k - 1].energy - 1e-12);
    }
  }
  EXPECT_NEAR(rows.back().energy, 1.0, 1e-12);
  EXPECT_TRUE(std::filesystem::exists(dir + "/spectra.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/summary.txt"));
  const std::vector<std::string> lines = read_lines(dir + "/spectra.csv");
  ASSERT_EQ(lines.size(), 2u + rows.size());
  EXPECT_EQ(lines[0], "# himod-bench spectra v1");
  EXPECT_EQ(lines[1], "role,k,lambda,ratio,energy");

  // An empty output directory suppresses the artifacts but not the rows.
  const std::vector<SpectrumRow> quiet = himod::bench::run_eig_decay(tiny_adr(), "");
  ASSERT_EQ(quiet.size(), rows.size());
  EXPECT_DOUBLE_EQ(quiet[3].lambda, rows[3].lambda);
}

TEST(EigDecayTest, SaddleProblemReportsAllThreeFieldRoles) {
  const std::vector<SpectrumRow> rows = himod::bench::run_eig_decay(tiny_stokes(), "");
  ASSERT_EQ(rows.size(), 18u);  // three roles, one eigenvalue per snapshot
  EXPECT_EQ(rows[0].role, "velocity");
  EXPECT_EQ(rows[6].role, "pressure");
  EXPECT_EQ(rows[12].role, "supremizer");
  for (size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].index > 1) {
      EXPECT_LE(rows[k].ratio, rows[k - 1].ratio * (1.0 + 1e-12));
    } else {
      EXPECT_DOUBLE_EQ(rows[k].ratio, 1.0);
    }
  }
}

TEST(ErrorSweepTest, SnapshotProjectionErrorsFallAndCarryNoEstimator) {
  const std::string dir = fresh_dir("errors_hipod");
  const std::vector<ErrorRow> rows = himod::bench::run_error_vs_n(tiny_adr(), "hipod", dir);
  ASSERT_EQ(rows.size(), 4u);
  for (const ErrorRow& row : rows) {
    EXPECT_EQ(row.method, "hipod");
    EXPECT_EQ(row.field, "state");
    EXPECT_GT(row.mean_error, 0.0);
    EXPECT_GE(row.max_error, row.mean_error * (1.0 - 1e-12));
    EXPECT_TRUE(std::isnan(row.mean_estimator));
  }
  EXPECT_GT(rows.front().mean_error, rows.back().mean_error);
  EXPECT_TRUE(std::filesystem::exists(dir + "/errors_hipod.csv"));
  EXPECT_FALSE(std::filesystem::exists(dir + "/greedy_log.csv"));
}

TEST(ErrorSweepTest, GreedySweepEmitsFiniteEstimatorsAndALog) {
  const std::string dir = fresh_dir("errors_hirb");
  const std::vector<ErrorRow> rows = himod::bench::run_error_vs_n(tiny_adr(), "hirb", dir);
  ASSERT_EQ(rows.size(), 4u);
  for (const ErrorRow& row : rows) {
    EXPECT_EQ(row.method, "hirb");
    EXPECT_TRUE(std::isfinite(row.mean_estimator));
    EXPECT_GT(row.mean_estimator, 0.0);
  }
  EXPECT_TRUE(std::filesystem::exists(dir + "/errors_hirb.csv"));
  ASSERT_TRUE(std::filesystem::exists(dir + "/greedy_log.csv"));
  const std::vector<std::string> log_lines = read_lines(dir + "/greedy_log.csv");
  ASSERT_EQ(log_lines.size(), 2u + 4u);  // schema + header + one row per iteration
  EXPECT_EQ(log_lines[0], "# himod-bench greedy-log v1");
  EXPECT_EQ(log_lines[1],
            "iteration,selected,mu1,mu2,mu3,mu4,max_estimator,orthogonality_defect,wall_seconds");
}

TEST(ErrorSweepTest, BothMethodsConcatenateAndRerunsAreByteIdentical) {
  const std::string dir_a = fresh_dir("errors_both_a");
  const std::string dir_b = fresh_dir("errors_both_b");
  const std::vector<ErrorRow> rows = himod::bench::run_error_vs_n(tiny_adr(), "both", dir_a);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].method, "hipod");
  EXPECT_EQ(rows[4].method, "hirb");
  himod::bench::run_error_vs_n(tiny_adr(), "both", dir_b);
  EXPECT_EQ(read_file(dir_a + "/errors_hipod.csv"), read_file(dir_b + "/errors_hipod.csv"));
  EXPECT_EQ(read_file(dir_a + "/errors_hirb.csv"), read_file(dir_b + "/errors_hirb.csv"));
  EXPECT_THROW(himod::bench::run_error_vs_n(tiny_adr(), "fast", ""), ConfigError);
}

TEST(ErrorSweepTest, SaddleSweepReportsVelocityAndPressurePerSize) {
  const std::vector<ErrorRow> rows = himod::bench::run_error_vs_n(tiny_stokes(), "hirb", "");
  ASSERT_GE(rows.size(), 2u);
  ASSERT_EQ(rows.size() % 2, 0u);
  for (size_t i = 0; i < rows.size(); i += 2) {
    EXPECT_EQ(rows[i].field, "velocity");
    EXPECT_EQ(rows[i + 1].field, "pressure");
    EXPECT_EQ(rows[i].size, rows[i + 1].size);
    EXPECT_TRUE(std::isfinite(rows[i].mean_estimator));
    EXPECT_TRUE(std::isnan(rows[i + 1].mean_estimator));
  }
}

TEST(SpeedupTest, RatiosAreConsistentWithTheTimedPhases) {
  const std::string dir = fresh_dir("speedup_adr");
  const std::vector<SpeedupRow> rows = himod::bench::run_speedup(tiny_adr(), "both", dir);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].method, "hipod");
  EXPECT_EQ(rows[1].method, "hirb");
  for (const SpeedupRow& row : rows) {
    EXPECT_EQ(row.field, "state");
    EXPECT_EQ(row.size, 4);
    EXPECT_GT(row.full_assembly_seconds, 0.0);
    EXPECT_GT(row.full_solve_seconds, 0.0);
    EXPECT_GT(row.reduced_assembly_seconds, 0.0);
    EXPECT_GT(row.reduced_solve_seconds, 0.0);
    EXPECT_DOUBLE_EQ(row.speedup, row.full_solve_seconds / row.reduced_solve_seconds);
  }
  EXPECT_TRUE(std::filesystem::exists(dir + "/speedup_hipod.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/speedup_hirb.csv"));
}

TEST(SpeedupTest, SaddleProblemTimesTheCoupledSolve) {
  const std::vector<SpeedupRow> rows = himod::bench::run_speedup(tiny_stokes(), "hipod", "");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].field, "velocity+pressure");
  EXPECT_EQ(rows[0].size, 3);
  EXPECT_GT(rows[0].speedup, 0.0);
}

TEST(OfflineCostTest, CountsFullOrderSolvesPerPipeline) {
  const std::string dir = fresh_dir("offline_adr");
  const std::vector<OfflineRow> rows = himod::bench::run_offline_cost(tiny_adr(), dir);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].train_count, 3);
  EXPECT_EQ(rows[0].pod_solves, 3);
  EXPECT_EQ(rows[0].greedy_solves, 3);  // basis size capped at min(rom.max_size, M)
  EXPECT_EQ(rows[1].train_count, 6);
  EXPECT_EQ(rows[1].pod_solves, 6);
  EXPECT_EQ(rows[1].greedy_solves, 4);
  for (const OfflineRow& row : rows) {
    EXPECT_GT(row.pod_seconds, 0.0);
    EXPECT_GT(row.greedy_seconds, 0.0);
  }
  EXPECT_TRUE(std::filesystem::exists(dir + "/offline_cost.csv"));

  ExperimentConfig bad = tiny_adr();
  bad.set("offline.train_counts", "6, 6");
  EXPECT_THROW(himod::bench::run_offline_cost(bad, ""), ConfigError);
  bad.set("offline.train_counts", "0, 4");
  EXPECT_THROW(himod::bench::run_offline_cost(bad, ""), ConfigError);
}

TEST(InfsupSweepTest, SupremizerEnrichmentRestoresTheConstant) {
  const std::string dir = fresh_dir("infsup");
  const std::vector<InfsupRow> rows = himod::bench::run_infsup_sweep(tiny_stokes(), dir);
  ASSERT_EQ(rows.size(), 4u);
  const double beta_full = rows[0].beta_himod;
  EXPECT_GT(beta_full, 1e-4);
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].supremizer_size, static_cast<int>(i));
    EXPECT_DOUBLE_EQ(rows[i].beta_himod, beta_full);
    if (i > 0) {
      EXPECT_GE(rows[i].beta_reduced, rows[i - 1].beta_reduced - 1e-10);
    }
  }
  // Velocity snapshots are discretely divergence-free, so without supremizers
  // the reduced pairing is numerically degenerate.
  EXPECT_LT(rows.front().beta_reduced, 1e-6);
  EXPECT_GT(rows.back().beta_reduced, 0.1 * beta_full);
  EXPECT_TRUE(std::filesystem::exists(dir + "/infsup.csv"));

  EXPECT_THROW(himod::bench::run_infsup_sweep(tiny_adr(), ""), ConfigError);
}

TEST(FieldExportTest, WritesTheSampledGridAndCoefficients) {
  const std::string dir = fresh_dir("field_adr");
  himod::bench::run_field_export(tiny_adr(), dir);
  const std::vector<std::string> lines = read_lines(dir + "/field.csv");
  ASSERT_EQ(lines.size(), 2u + 9u * 7u);
  EXPECT_EQ(lines[0], "# himod-bench field-scalar v1");
  EXPECT_EQ(lines[1], "x,y,u");
  EXPECT_TRUE(std::filesystem::exists(dir + "/coeffs.csv"));

  const std::string sdir = fresh_dir("field_stokes");
  himod::bench::run_field_export(tiny_stokes(), sdir);
  const std::vector<std::string> slines = read_lines(sdir + "/field.csv");
  ASSERT_EQ(slines.size(), 2u + 7u * 5u);
  EXPECT_EQ(slines[0], "# himod-bench field-stokes v1");
  EXPECT_EQ(slines[1], "x,y,ux,uy,p");

  EXPECT_THROW(himod::bench::run_field_export(tiny_adr(), ""), ConfigError);
}

TEST(ExperimentTest, FullCampaignWritesEveryStageArtifact) {
  const std::string dir = fresh_dir("experiment");
  himod::bench::run_experiment(tiny_adr(), "hipod", dir);
  EXPECT_TRUE(std::filesystem::exists(dir + "/spectra.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/errors_hipod.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/speedup_hipod.csv"));
  ASSERT_TRUE(std::filesystem::exists(dir + "/summary.txt"));
  const std::string summary = read_file(dir + "/summary.txt");
  EXPECT_NE(summary.find("eig-decay"), std::string::npos);
  EXPECT_NE(summary.find("error-vs-n"), std::string::npos);
  EXPECT_NE(summary.find("speedup"), std::string::npos);
  EXPECT_THROW(himod::bench::run_experiment(tiny_adr(), "quick", ""), ConfigError);
}
