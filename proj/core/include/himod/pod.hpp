/// @file pod.hpp
/// @brief Snapshot-based model reduction: deterministic training sets,
///        snapshot collection, proper orthogonal decomposition through the
///        snapshot correlation eigenproblem, Galerkin projection onto the
///        reduced basis, and reduced queries with full-order lifting.

#pragma once

#include "himod/affine.hpp"
#include "himod/stokes.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace himod {

/// Axis-aligned box of admissible parameters.
struct ParameterDomain {
  std::vector<std::pair<double, double>> intervals;

  int dim() const { return static_cast<int>(intervals.size()); }
  bool contains(const Eigen::VectorXd& mu, double tol = 0.0) const;
};

/// Deterministic uniform sample of the domain: column j holds the j-th
/// parameter vector. The generator mapping is fixed (64-bit Mersenne twister
/// with an explicit bits-to-double conversion), so a given (domain, count,
/// seed) triple reproduces bit-identical points on any platform.
struct TrainingSet {
  ParameterDomain domain;
  std::uint64_t seed = 0;
  Eigen::MatrixXd points;

  int size() const { return static_cast<int>(points.cols()); }
  Eigen::VectorXd point(int j) const { return points.col(j); }
};

TrainingSet sample_training_set(const ParameterDomain& domain, int count, std::uint64_t seed);

enum class FieldRole : std::uint8_t { state = 0, velocity = 1, pressure = 2, supremizer = 3 };

std::string field_role_name(FieldRole role);

/// Full-order solutions, one column per training point.
Eigen::MatrixXd collect_snapshots(const AffineSystem& affine, const TrainingSet& train);

struct StokesSnapshots {
  Eigen::MatrixXd velocity;
  Eigen::MatrixXd pressure;
  Eigen::MatrixXd supremizer;
};

/// Saddle solves plus the supremizer of each pressure snapshot.
StokesSnapshots collect_snapshots_stokes(const SaddleAffineSystem& affine,
                                         const InnerProduct& velocity_inner,
                                         const TrainingSet& train);

/// Basis size selection: a fixed size (fixed_n > 0) or the smallest N whose
/// retained energy exceeds 1 - energy_eps. Either way, eigenvalues below
/// 1e-13 * lambda_1 are treated as numerical rank loss and excluded.
struct PodCutoff {
  int fixed_n = 0;
  double energy_eps = 0.0;

  static PodCutoff fixed(int n) { return {n, 0.0}; }
  static PodCutoff energy(double eps) { return {0, eps}; }
};

/// Correlation spectrum (descending) with the retained-energy profile.
struct PodSpectrum {
  Eigen::VectorXd eigenvalues;

  /// Fraction of sum_k lambda_k captured by the leading n values
  /// (negative round-off values count as zero).
  double energy(int n) const;
};

/// X-orthonormal reduced basis with its provenance tags.
struct ReducedBasis {
  FieldRole role = FieldRole::state;
  InnerProduct::Norm norm_tag = InnerProduct::Norm::identity;
  Eigen::MatrixXd columns;

  int size() const { return static_cast<int>(columns.cols()); }

  /// Leading n columns (n clipped to the available size).
  ReducedBasis truncated(int n) const;
};

/// POD via the M x M correlation eigenproblem C = U^T X U. Requires
/// count >= requested fixed size. Returns the X-normalized basis and the
/// full descending spectrum.
std::pair<ReducedBasis, PodSpectrum> pod_extract(const Eigen::MatrixXd& snapshots, FieldRole role,
                                                 const InnerProduct& inner, PodCutoff cutoff);

/// Binary persistence (little-endian, column-major payload).
void save_basis(const std::string& path, const ReducedBasis& basis);
ReducedBasis load_basis(const std::string& path);

/// Dense Galerkin projection of an affine system onto a reduced basis.
struct ReducedSystem {
  ReducedBasis basis;
  int parameter_dim = 0;
  std::vector<Eigen::MatrixXd> matrices;
  std::vector<Theta> matrix_theta;
  std::vector<Eigen::VectorXd> loads;
  std::vector<Theta> load_theta;

  int size() const { return basis.size(); }
  Eigen::MatrixXd matrix_at(const Eigen::VectorXd& mu) const;
  Eigen::VectorXd load_at(const Eigen::VectorXd& mu) const;

  /// Galerkin projections nest: the leading n x n blocks are exactly the
  /// projection onto the leading n basis columns.
  ReducedSystem truncated(int n) const;
};

ReducedSystem project_system(const AffineSystem& affine, const ReducedBasis& basis);

struct RomSolution {
  Eigen::VectorXd reduced;
  Eigen::VectorXd full;  ///< lifted representation Phi * reduced
};

/// Dense reduced solve + lift. Throws SolverError when the reduced system is
/// singular (e.g. a saddle projection without supremizer enrichment).
RomSolution rom_query(const ReducedSystem& rom, const Eigen::VectorXd& mu);

/// Reduced saddle system over the enriched velocity trial space
/// Phi = [velocity | supremizer] and the pressure basis.
struct ReducedStokes {
  ReducedBasis velocity;
  ReducedBasis supremizer;
  ReducedBasis pressure;
  Eigen::MatrixXd trial;  ///< cached [velocity | supremizer] columns
  int parameter_dim = 0;
  std::vector<Eigen::MatrixXd> matrices;
  std::vector<Theta> matrix_theta;
  Eigen::MatrixXd divergence;  ///< pressure x trial pairing
  std::vector<Eigen::VectorXd> loads;
  std::vector<Theta> load_theta;
  Eigen::MatrixXd velocity_gram;  ///< trial^T X_u trial
  Eigen::MatrixXd pressure_gram;  ///< pressure^T X_p pressure

  int trial_size() const { return static_cast<int>(trial.cols()); }
  Eigen::MatrixXd matrix_at(const Eigen::VectorXd& mu) const;
  Eigen::VectorXd load_at(const Eigen::VectorXd& mu) const;
};

ReducedStokes project_system_stokes(const SaddleAffineSystem& affine, const ReducedBasis& velocity,
                                    const ReducedBasis& supremizer, const ReducedBasis& pressure,
                                    const InnerProduct& velocity_inner,
                                    const InnerProduct& pressure_inner);

struct StokesRomSolution {
  Eigen::VectorXd velocity_reduced;
  Eigen::VectorXd pressure_reduced;
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
};

/// Dense reduced saddle solve without the full-order lift (the per-query
/// online cost): returns (velocity_reduced, pressure_reduced).
std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_reduced_saddle(const ReducedStokes& rom,
                                                                 const Eigen::VectorXd& mu);

StokesRomSolution rom_query_stokes(const ReducedStokes& rom, const Eigen::VectorXd& mu);

/// Inf-sup constant of the reduced pairing in the reduced norms.
double infsup_reduced(const ReducedStokes& rom);

}  // namespace himod
