/// @file pod.cpp

#include "himod/pod.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace himod {

namespace {

/// Portable uniform double in [0, 1): the top 53 bits of the generator
/// output. Avoids std::uniform_real_distribution, whose mapping is
/// implementation-defined.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr char kBasisMagic[4] = {'H', 'M', 'R', 'B'};
constexpr std::uint32_t kBasisVersion = 1;

}  // namespace

bool ParameterDomain::contains(const Eigen::VectorXd& mu, double tol) const {
  if (mu.size() != dim()) {
    return false;
  }
  for (int d = 0; d < dim(); ++d) {
    const auto& [lo, hi] = intervals[d];
    if (mu[d] < lo - tol || mu[d] > hi + tol) {
      return false;
    }
  }
  return true;
}

TrainingSet sample_training_set(const ParameterDomain& domain, int count, std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("sample_training_set: need count >= 1");
  }
  if (domain.dim() < 1) {
    throw std::invalid_argument("sample_training_set: empty parameter domain");
  }
  for (const auto& [lo, hi] : domain.intervals) {
    if (!(lo <= hi)) {
      throw std::invalid_argument("sample_training_set: interval with lo > hi");
    }
  }
  TrainingSet set;
  set.domain = domain;
  set.seed = seed;
  set.points.resize(domain.dim(), count);
  std::mt19937_64 rng(seed);
  for (int j = 0; j < count; ++j) {
    for (int d = 0; d < domain.dim(); ++d) {
      const auto& [lo, hi] = domain.intervals[d];
      set.points(d, j) = lo + (hi - lo) * uniform01(rng);
    }
  }
  return set;
}

std::string field_role_name(FieldRole role) {
  switch (role) {
    case FieldRole::state:
      return "state";
    case FieldRole::velocity:
      return "velocity";
    case FieldRole::pressure:
      return "pressure";
    case FieldRole::supremizer:
      return "supremizer";
  }
  return "unknown";
}

Eigen::MatrixXd collect_snapshots(const AffineSystem& affine, const TrainingSet& train) {
  Eigen::MatrixXd snapshots(affine.dim, train.size());
  for (int j = 0; j < train.size(); ++j) {
    snapshots.col(j) = solve_himod(affine, train.point(j));
  }
  return snapshots;
}

StokesSnapshots collect_snapshots_stokes(const SaddleAffineSystem& affine,
                                         const InnerProduct& velocity_inner,
                                         const TrainingSet& train) {
  StokesSnapshots snaps;
  snaps.velocity.resize(affine.dim_u, train.size());
  snaps.pressure.resize(affine.dim_p, train.size());
  snaps.supremizer.resize(affine.dim_u, train.size());
  for (int j = 0; j < train.size(); ++j) {
    const StokesSolution sol = solve_stokes(affine, train.point(j));
    snaps.velocity.col(j) = sol.velocity;
    snaps.pressure.col(j) = sol.pressure;
    snaps.supremizer.col(j) = solve_supremizer(velocity_inner, affine.divergence, sol.pressure);
  }
  return snaps;
}

double PodSpectrum::energy(int n) const {
  double total = 0.0;
  double kept = 0.0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const double lambda = std::max(eigenvalues[k], 0.0);
    total += lambda;
    if (k < n) {
      kept += lambda;
    }
  }
  return total > 0.0 ? kept / total : 0.0;
}

ReducedBasis ReducedBasis::truncated(int n) const {
  ReducedBasis out;
  out.role = role;
  out.norm_tag = norm_tag;
  out.columns = columns.leftCols(std::clamp(n, 0, size()));
  return out;
}

std::pair<ReducedBasis, PodSpectrum> pod_extract(const Eigen::MatrixXd& snapshots, FieldRole role,
                                                 const InnerProduct& inner, PodCutoff cutoff) {
  const int count = static_cast<int>(snapshots.cols());
  if (count < 1) {
    throw std::invalid_argument("pod_extract: empty snapshot set");
  }
  if (cutoff.fixed_n > 0 && cutoff.fixed_n > count) {
    throw std::invalid_argument("pod_extract: requested size " + std::to_string(cutoff.fixed_n) +
                                " exceeds snapshot count " + std::to_string(count));
  }
  if (cutoff.fixed_n <= 0 && !(cutoff.energy_eps > 0.0 && cutoff.energy_eps < 1.0)) {
    throw std::invalid_argument("pod_extract: energy cutoff must lie in (0, 1)");
  }

  // Correlation eigenproblem; ascending spectrum flipped to descending.
  const Eigen::MatrixXd correlation = inner.gram(snapshots);
  const linalg::SymEigResult eig = linalg::sym_eig(correlation);
  PodSpectrum spectrum;
  spectrum.eigenvalues = eig.eigenvalues.reverse();

  const double lambda_1 = std::max(spectrum.eigenvalues[0], 0.0);
  int rank = 0;
  while (rank < count && spectrum.eigenvalues[rank] > 1e-13 * lambda_1) {
    ++rank;
  }

  int requested;
  if (cutoff.fixed_n > 0) {
    requested = cutoff.fixed_n;
  } else {
    requested = count;
    for (int n = 1; n <= count; ++n) {
      if (spectrum.energy(n) > 1.0 - cutoff.energy_eps) {
        requested = n;
        break;
      }
    }
  }
  // Eigenvalues below the round-off cutoff never enter the basis, even under
  // a fixed-size request: the basis shrinks instead.
  const int size = std::min(requested, rank);

  ReducedBasis basis;
  basis.role = role;
  basis.norm_tag = inner.tag();
  basis.columns.resize(snapshots.rows(), size);
  for (int k = 0; k < size; ++k) {
    const Eigen::VectorXd column = snapshots * eig.eigenvectors.col(count - 1 - k);
    const double scale = inner.norm(column);
    basis.columns.col(k) = column / scale;
  }
  return {std::move(basis), std::move(spectrum)};
}

void save_basis(const std::string& path, const ReducedBasis& basis) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_basis: cannot open " + path);
  }
  const std::uint32_t rows = static_cast<std::uint32_t>(basis.columns.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(basis.columns.cols());
  const std::uint8_t role = static_cast<std::uint8_t>(basis.role);
  const std::uint8_t norm = static_cast<std::uint8_t>(basis.norm_tag);
  out.write(kBasisMagic, sizeof(kBasisMagic));
  out.write(reinterpret_cast<const char*>(&kBasisVersion), sizeof(kBasisVersion));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  out.write(reinterpret_cast<const char*>(&role), sizeof(role));
  out.write(reinterpret_cast<const char*>(&norm), sizeof(norm));
  out.write(reinterpret_cast<const char*>(basis.columns.data()),
            static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!out) {
    throw std::runtime_error("save_basis: write failed for " + path);
  }
}

ReducedBasis load_basis(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_basis: cannot open " + path);
  }
  char magic[4];
  std::uint32_t version = 0, rows = 0, cols = 0;
  std::uint8_t role = 0, norm = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  in.read(reinterpret_cast<char*>(&role), sizeof(role));
  in.read(reinterpret_cast<char*>(&norm), sizeof(norm));
  if (!in || std::memcmp(magic, kBasisMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("load_basis: " + path + " is not a reduced-basis file");
  }
  if (version != kBasisVersion) {
    throw std::runtime_error("load_basis: unsupported version " + std::to_string(version));
  }
  ReducedBasis basis;
  basis.role = static_cast<FieldRole>(role);
  basis.norm_tag = static_cast<InnerProduct::Norm>(norm);
  basis.columns.resize(rows, cols);
  in.read(reinterpret_cast<char*>(basis.columns.data()),
          static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!in) {
    throw std::runtime_error("load_basis: truncated payload in " + path);
  }
  return basis;
}

Eigen::MatrixXd ReducedSystem::matrix_at(const Eigen::VectorXd& mu) const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size(), size());
  for (size_t q = 0; q < matrices.size(); ++q) {
    a += matrix_theta[q](mu) * matrices[q];
  }
  return a;
}

Eigen::VectorXd ReducedSystem::load_at(const Eigen::VectorXd& mu) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(size());
  for (size_t q = 0; q < loads.size(); ++q) {
    f += load_theta[q](mu) * loads[q];
  }
  return f;
}

ReducedSystem ReducedSystem::truncated(int n) const {
  const int keep = std::min(n, size());
  ReducedSystem out;
  out.basis = basis.truncated(keep);
  out.parameter_dim = parameter_dim;
  out.matrix_theta = matrix_theta;
  out.load_theta = load_theta;
  out.matrices.reserve(matrices.size());
  for (const Eigen::MatrixXd& a : matrices) {
    out.matrices.emplace_back(a.topLeftCorner(keep, keep));
  }
  out.loads.reserve(loads.size());
  for (const Eigen::VectorXd& f : loads) {
    out.loads.emplace_back(f.head(keep));
  }
  return out;
}

ReducedSystem project_system(const AffineSystem& affine, const ReducedBasis& basis) {
  if (basis.columns.rows() != affine.dim) {
    throw std::invalid_argument("project_system: basis/system dimension mismatch");
  }
  ReducedSystem rom;
  rom.basis = basis;
  rom.parameter_dim = affine.parameter_dim;
  rom.matrix_theta = affine.matrix_theta;
  rom.load_theta = affine.load_theta;
  rom.matrices.reserve(affine.matrices.size());
  for (const linalg::SparseMatrix& a : affine.matrices) {
    rom.matrices.emplace_back(basis.columns.transpose() * (a * basis.columns));
  }
  rom.loads.reserve(affine.loads.size());
  for (const Eigen::VectorXd& f : affine.loads) {
    rom.loads.emplace_back(basis.columns.transpose() * f);
  }
  return rom;
}

RomSolution rom_query(const ReducedSystem& rom, const Eigen::VectorXd& mu) {
  RomSolution sol;
  sol.reduced = linalg::dense_solve(rom.matrix_at(mu), rom.load_at(mu));
  sol.full = rom.basis.columns * sol.reduced;
  return sol;
}

Eigen::MatrixXd ReducedStokes::matrix_at(const Eigen::VectorXd& mu) const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(trial_size(), trial_size());
  for (size_t q = 0; q < matrices.size(); ++q) {
    a += matrix_theta[q](mu) * matrices[q];
  }
  return a;
}

Eigen::VectorXd ReducedStokes::load_at(const Eigen::VectorXd& mu) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(trial_size());
  for (size_t q = 0; q < loads.size(); ++q) {
    f += load_theta[q](mu) * loads[q];
  }
  return f;
}

ReducedStokes project_system_stokes(const SaddleAffineSystem& affine, const ReducedBasis& velocity,
                                    const ReducedBasis& supremizer, const ReducedBasis& pressure,
                                    const InnerProduct& velocity_inner,
                                    const InnerProduct& pressure_inner) {
  if (velocity.columns.rows() != affine.dim_u ||
      (supremizer.size() > 0 && supremizer.columns.rows() != affine.dim_u) ||
      pressure.columns.rows() != affine.dim_p) {
    throw std::invalid_argument("project_system_stokes: basis/system dimension mismatch");
  }
  ReducedStokes rom;
  rom.velocity = velocity;
  rom.supremizer = supremizer;
  rom.pressure = pressure;
  rom.parameter_dim = affine.parameter_dim;
  rom.trial.resize(affine.dim_u, velocity.size() + supremizer.size());
  rom.trial.leftCols(velocity.size()) = velocity.columns;
  if (supremizer.size() > 0) {
    rom.trial.rightCols(supremizer.size()) = supremizer.columns;
  }
  rom.matrix_theta = affine.matrix_theta;
  rom.load_theta = affine.load_theta;
  for (const linalg::SparseMatrix& a : affine.matrices) {
    rom.matrices.emplace_back(rom.trial.transpose() * (a * rom.trial));
  }
  for (const Eigen::VectorXd& f : affine.loads) {
    rom.loads.emplace_back(rom.trial.transpose() * f);
  }
  rom.divergence = pressure.columns.transpose() * (affine.divergence * rom.trial);
  rom.velocity_gram = velocity_inner.gram(rom.trial);
  rom.pressure_gram = pressure_inner.gram(pressure.columns);
  return rom;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_reduced_saddle(const ReducedStokes& rom,
                                                                 const Eigen::VectorXd& mu) {
  const int nu = rom.trial_size();
  const int np = rom.pressure.size();
  Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(nu + np, nu + np);
  saddle.topLeftCorner(nu, nu) = rom.matrix_at(mu);
  saddle.topRightCorner(nu, np) = -rom.divergence.transpose();
  saddle.bottomLeftCorner(np, nu) = -rom.divergence;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + np);
  rhs.head(nu) = rom.load_at(mu);

  Eigen::VectorXd packed;
  try {
    packed = linalg::dense_solve(saddle, rhs);
  } catch (const linalg::SolverError& err) {
    throw linalg::SolverError(std::string(err.what()) +
                              " (reduced saddle system unstable; supremizer enrichment missing?)");
  }
  return {packed.head(nu), packed.tail(np)};
}

StokesRomSolution rom_query_stokes(const ReducedStokes& rom, const Eigen::VectorXd& mu) {
  StokesRomSolution sol;
  std::tie(sol.velocity_reduced, sol.pressure_reduced) = solve_reduced_saddle(rom, mu);
  sol.velocity = rom.trial * sol.velocity_reduced;
  sol.pressure = rom.pressure.columns * sol.pressure_reduced;
  return sol;
}

double infsup_reduced(const ReducedStokes& rom) {
  return infsup_constant_dense(rom.divergence, rom.velocity_gram, rom.pressure_gram);
}

}  // namespace himod
