/// @file greedy.hpp
/// @brief Greedy reduced-basis construction driven by an affine residual
///        estimator: offline loops that select the worst-approximated
///        training parameter, enrich an orthonormal basis with its snapshot,
///        and keep the reduced projections and Riesz machinery incremental.

#pragma once

#include "himod/pod.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace himod {

/// Dual-norm residual estimator eta(mu) = ||f(mu) - A(mu) Phi u_N||_{X^-1},
/// evaluated through precomputed Riesz representers so each query costs
/// O((Q_f + N Q_a)^2) independently of the full dimension.
class ResidualEstimator {
 public:
  ResidualEstimator() = default;  ///< empty shell; usable only after assignment
  ResidualEstimator(const AffineSystem& affine, const InnerProduct& inner);

  /// Registers a new basis column (appends A_q * column representers).
  void extend(const Eigen::VectorXd& column);

  int basis_size() const { return basis_size_; }

  /// Estimator at mu for reduced coefficients u_N (size basis_size()).
  /// The quadratic form is a Gram form and thus nonnegative up to round-off;
  /// a significantly negative value triggers an exact full-order residual
  /// recomputation and a warning on stderr.
  double operator()(const Eigen::VectorXd& mu, const Eigen::VectorXd& reduced) const;

 private:
  const AffineSystem* affine_ = nullptr;
  const InnerProduct* inner_ = nullptr;
  int basis_size_ = 0;
  Eigen::MatrixXd terms_;  ///< raw residual terms [f_q | A_q phi_n ...]
  Eigen::MatrixXd reps_;   ///< Riesz representers X^{-1} terms
  Eigen::MatrixXd gram_;   ///< reps^T X reps

  Eigen::VectorXd coefficients(const Eigen::VectorXd& mu, const Eigen::VectorXd& reduced) const;
};

struct GreedyOptions {
  int max_size = 1;
  double tolerance = 0.0;  ///< stop once max estimator over the training set falls below
  std::uint64_t seed = 0;  ///< seeds the uniformly random first selection
};

struct GreedyIteration {
  int iteration = 0;       ///< 1-based basis size after this step
  int selected = -1;       ///< index into the training set
  double max_estimator = 0.0;
  double orthogonality_defect = 0.0;  ///< post-MGS norm ratio of the snapshot
  double wall_seconds = 0.0;
};

struct GreedyLog {
  std::vector<GreedyIteration> iterations;
  int solve_count = 0;
  bool tolerance_reached = false;
  bool exhausted = false;  ///< snapshot numerically dependent on the basis
};

struct GreedyResult {
  ReducedBasis basis;
  ReducedSystem rom;
  ResidualEstimator estimator;
  GreedyLog log;
};

/// Greedy loop over the training set: the first parameter is chosen
/// uniformly at random (seeded); afterwards the unselected parameter with
/// the largest estimator wins (ties to the lowest index). Snapshots are
/// orthonormalized by modified Gram-Schmidt with one re-orthogonalization
/// pass; a post-orthogonalization norm below 1e-10 of the original rejects
/// the snapshot and stops the loop.
GreedyResult greedy_offline(const AffineSystem& affine, const InnerProduct& inner,
                            const TrainingSet& train, const GreedyOptions& options);

/// Momentum-residual estimator for the reduced saddle problem, measured in
/// the velocity norm: ||f(mu) - A(mu) Phi u_N + B^T Pi p_N||_{X_u^-1}.
/// Basis columns may be registered in any interleaving; reduced velocity
/// coefficients are always interpreted against the [velocity | supremizer]
/// trial ordering used by ReducedStokes.
class StokesResidualEstimator {
 public:
  StokesResidualEstimator() = default;  ///< empty shell; usable only after assignment
  StokesResidualEstimator(const SaddleAffineSystem& affine, const InnerProduct& velocity_inner);

  void extend_velocity(const Eigen::VectorXd& column);
  void extend_supremizer(const Eigen::VectorXd& column);
  void extend_pressure(const Eigen::VectorXd& column);

  int velocity_size() const { return velocity_size_; }
  int supremizer_size() const { return supremizer_size_; }
  int pressure_size() const { return pressure_size_; }

  double operator()(const Eigen::VectorXd& mu, const Eigen::VectorXd& velocity_reduced,
                    const Eigen::VectorXd& pressure_reduced) const;

  /// Estimator of a truncated ROM: the reduced vectors follow the truncated
  /// [velocity(nv) | supremizer(ns)] / pressure layouts, and terms of
  /// columns beyond the truncation get weight zero.
  double truncated(const Eigen::VectorXd& mu, int nv, int ns,
                   const Eigen::VectorXd& velocity_reduced,
                   const Eigen::VectorXd& pressure_reduced) const;

 private:
  enum class TermKind : char { velocity, supremizer, pressure };

  const SaddleAffineSystem* affine_ = nullptr;
  const InnerProduct* inner_ = nullptr;
  int velocity_size_ = 0;
  int supremizer_size_ = 0;
  int pressure_size_ = 0;
  std::vector<std::pair<TermKind, int>> term_tags_;  ///< (kind, within-role index) per column
  Eigen::MatrixXd terms_;
  Eigen::MatrixXd reps_;
  Eigen::MatrixXd gram_;

  void append_term(const Eigen::VectorXd& term, TermKind kind, int role_index);
  Eigen::VectorXd coefficients(const Eigen::VectorXd& mu, int nv, int ns,
                               const Eigen::VectorXd& velocity_reduced,
                               const Eigen::VectorXd& pressure_reduced) const;
  double evaluate(const Eigen::VectorXd& c) const;
};

struct StokesGreedyResult {
  ReducedBasis velocity;
  ReducedBasis supremizer;
  ReducedBasis pressure;
  ReducedStokes rom;
  StokesResidualEstimator estimator;
  GreedyLog log;
};

/// Saddle-point greedy: each iteration solves the full problem at the
/// selected parameter, enriches the velocity basis with the velocity
/// snapshot, the pressure basis with the pressure snapshot, and the
/// supremizer basis with the supremizer of that pressure, each
/// orthonormalized in its own norm. A rejected velocity snapshot stops the
/// loop; rejected pressure or supremizer columns are skipped individually.
StokesGreedyResult greedy_offline_stokes(const SaddleAffineSystem& affine,
                                         const InnerProduct& velocity_inner,
                                         const InnerProduct& pressure_inner,
                                         const TrainingSet& train, const GreedyOptions& options);

}  // namespace himod
