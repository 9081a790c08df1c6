/// @file himod_microbench.cpp
/// @brief Microbenchmarks of the hot paths: tensor-product assembly, sparse
///        full-order solves, dense reduced queries, and residual-estimator
///        evaluation, on the canonical channel configurations.

#include "himod/bench.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

namespace {

using himod::bench::ExperimentConfig;

constexpr const char* kAdrConfig = R"(
problem = adr
map.kind = sinusoidal_additive
map.length = 4
map.amplitude = 0.2
map.frequency = 1.1780972450961724
mesh.elements = 80
adr.modes = 8
adr.bc = robin
adr.rho = 1
adr.nu_ref = 5
adr.forcing.count = 2
adr.forcing.1.weight = 1.8
adr.forcing.1.center_x = 0.75
adr.forcing.1.coef_x = 0.5
adr.forcing.1.coef_y = 0.4
adr.forcing.1.threshold = 0.02
adr.forcing.2.weight = -1.8
adr.forcing.2.center_x = 1.5
adr.forcing.2.coef_x = 0.5
adr.forcing.2.coef_y = 0.4
adr.forcing.2.threshold = 0.02
domain.mu1 = 1:100
domain.mu2 = 1:100
domain.mu3 = 1:100
domain.mu4 = 1:100
train.count = 30
rom.max_size = 20
query.mu = 5, 20, 75, 25
)";

constexpr const char* kStokesConfig = R"(
problem = stokes
map.kind = sinusoidal_multiplicative
map.length = 6
map.amplitude = 0.4
map.frequency = 3.141592653589793
map.phase = 1.5707963267948966
map.width = 1
mesh.elements = 80
stokes.pressure_modes = 5
domain.mu1 = 1:10
domain.mu2 = 5:15
domain.mu3 = 0:10
domain.mu4 = 1:10
domain.mu5 = 0:10
train.count = 20
rom.max_size = 4
query.mu = 5, 10, 0, 3, 0
)";

struct AdrFixture {
  himod::bench::AdrWorkspace workspace;
  Eigen::VectorXd mu;
  himod::ReducedSystem rom;
  himod::ResidualEstimator estimator;
  Eigen::VectorXd reduced_solution;

  static const AdrFixture& instance() {
    static const AdrFixture fixture;
    return fixture;
  }

 private:
  AdrFixture() {
    const ExperimentConfig config = ExperimentConfig::parse(kAdrConfig);
    workspace = himod::bench::build_adr_workspace(config);
    mu = config.get_vector("query.mu");
    const himod::TrainingSet train =
        himod::sample_training_set(workspace.domain, config.get_int("train.count"), 42);
    himod::GreedyOptions options;
    options.max_size = config.get_int("rom.max_size");
    himod::GreedyResult greedy =
        himod::greedy_offline(workspace.system, workspace.h1, train, options);
    rom = std::move(greedy.rom);
    estimator = std::move(greedy.estimator);
    reduced_solution = himod::rom_query(rom, mu).reduced;
  }
};

struct StokesFixture {
  himod::bench::StokesWorkspace workspace;
  Eigen::VectorXd mu;
  himod::ReducedStokes rom;

  static const StokesFixture& instance() {
    static const StokesFixture fixture;
    return fixture;
  }

 private:
  StokesFixture() {
    const ExperimentConfig config = ExperimentConfig::parse(kStokesConfig);
    workspace = himod::bench::build_stokes_workspace(config);
    mu = config.get_vector("query.mu");
    const himod::TrainingSet train =
        himod::sample_training_set(workspace.domain, config.get_int("train.count"), 42);
    const himod::StokesSnapshots snapshots =
        himod::collect_snapshots_stokes(workspace.system, workspace.velocity_h1, train);
    const himod::PodCutoff cutoff = himod::PodCutoff::fixed(config.get_int("rom.max_size"));
    const himod::ReducedBasis velocity =
        himod::pod_extract(snapshots.velocity, himod::FieldRole::velocity, workspace.velocity_h1,
                           cutoff)
            .first;
    const himod::ReducedBasis pressure =
        himod::pod_extract(snapshots.pressure, himod::FieldRole::pressure, workspace.pressure_l2,
                           cutoff)
            .first;
    const himod::ReducedBasis supremizer =
        himod::pod_extract(snapshots.supremizer, himod::FieldRole::supremizer,
                           workspace.velocity_h1, cutoff)
            .first;
    rom = himod::project_system_stokes(workspace.system, velocity, supremizer, pressure,
                                       workspace.velocity_h1, workspace.pressure_l2);
  }
};

void BM_AdrTensorAssembly(benchmark::State& state) {
  const AdrFixture& f = AdrFixture::instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(himod::assemble_adr(f.workspace.space, f.workspace.problem));
  }
}
BENCHMARK(BM_AdrTensorAssembly)->Unit(benchmark::kMillisecond);

void BM_AdrOnlineMatrix(benchmark::State& state) {
  const AdrFixture& f = AdrFixture::instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.workspace.system.matrix_at(f.mu));
  }
}
BENCHMARK(BM_AdrOnlineMatrix)->Unit(benchmark::kMicrosecond);

void BM_AdrFullSolve(benchmark::State& state) {
  const AdrFixture& f = AdrFixture::instance();
  const himod::linalg::SparseMatrix a = f.workspace.system.matrix_at(f.mu);
  const Eigen::VectorXd load = f.workspace.system.load_at(f.mu);
  for (auto _ : state) {
    const himod::linalg::SparseOperator op(a);
    benchmark::DoNotOptimize(op.solve(load));
  }
}
BENCHMARK(BM_AdrFullSolve)->Unit(benchmark::kMillisecond);

void BM_AdrReducedQuery(benchmark::State& state) {
  const AdrFixture& f = AdrFixture::instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        himod::linalg::dense_solve(f.rom.matrix_at(f.mu), f.rom.load_at(f.mu)));
  }
}
BENCHMARK(BM_AdrReducedQuery)->Unit(benchmark::kMicrosecond);

void BM_AdrEstimator(benchmark::State& state) {
  const AdrFixture& f = AdrFixture::instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.estimator(f.mu, f.reduced_solution));
  }
}
BENCHMARK(BM_AdrEstimator)->Unit(benchmark::kMicrosecond);

void BM_StokesTensorAssembly(benchmark::State& state) {
  const StokesFixture& f = StokesFixture::instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(himod::assemble_stokes(f.workspace.space, f.workspace.problem));
  }
}
BENCHMARK(BM_StokesTensorAssembly)->Unit(benchmark::kMillisecond);

void BM_StokesFullSolve(benchmark::State& state) {
  const StokesFixture& f = StokesFixture::instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(himod::solve_stokes(f.workspace.system, f.mu));
  }
}
BENCHMARK(BM_StokesFullSolve)->Unit(benchmark::kMillisecond);

void BM_StokesReducedQuery(benchmark::State& state) {
  const StokesFixture& f = StokesFixture::instance();
  for (auto _ : state) {
    benchmark::DoNotOptimize(himod::solve_reduced_saddle(f.rom, f.mu));
  }
}
BENCHMARK(BM_StokesReducedQuery)->Unit(benchmark::kMicrosecond);

void BM_StokesSupremizer(benchmark::State& state) {
  const StokesFixture& f = StokesFixture::instance();
  const Eigen::VectorXd pressure = himod::solve_stokes(f.workspace.system, f.mu).pressure;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        himod::solve_supremizer(f.workspace.velocity_h1, f.workspace.system.divergence, pressure));
  }
}
BENCHMARK(BM_StokesSupremizer)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
