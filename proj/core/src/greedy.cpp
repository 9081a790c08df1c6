/// @file greedy.cpp

#include "himod/greedy.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace himod {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int random_index(std::mt19937_64& rng, int count) {
  return std::min(static_cast<int>(uniform01(rng) * count), count - 1);
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Returns the
/// ratio ||v_perp|| / ||v|| and normalizes in place when accepted.
struct MgsOutcome {
  Eigen::VectorXd column;
  double ratio = 0.0;
  bool accepted = false;
};

MgsOutcome orthonormalize(const Eigen::MatrixXd& basis, const InnerProduct& inner,
                          const Eigen::VectorXd& snapshot) {
  MgsOutcome out;
  const double original = inner.norm(snapshot);
  Eigen::VectorXd v = snapshot;
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      v -= inner.inner(basis.col(c), v) * basis.col(c);
    }
  }
  const double remaining = inner.norm(v);
  if (!(remaining > 1e-10 * original)) {
    out.ratio = original > 0.0 ? remaining / original : 0.0;
    out.accepted = false;
    return out;
  }
  out.column = v / remaining;
  out.ratio = remaining / original;
  out.accepted = true;
  return out;
}

Eigen::MatrixXd append_column(const Eigen::MatrixXd& m, const Eigen::VectorXd& col) {
  Eigen::MatrixXd out(col.size(), m.cols() + 1);
  out.leftCols(m.cols()) = m;
  out.col(m.cols()) = col;
  return out;
}

double quadratic_form_scale(const Eigen::MatrixXd& gram, const Eigen::VectorXd& c) {
  return c.cwiseAbs().transpose() * gram.cwiseAbs() * c.cwiseAbs();
}

}  // namespace

ResidualEstimator::ResidualEstimator(const AffineSystem& affine, const InnerProduct& inner)
    : affine_(&affine), inner_(&inner) {
  const int qf = affine.load_terms();
  terms_.resize(affine.dim, qf);
  for (int q = 0; q < qf; ++q) {
    terms_.col(q) = affine.loads[q];
  }
  reps_ = inner.solve(terms_);
  gram_ = reps_.transpose() * terms_;
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
}

void ResidualEstimator::extend(const Eigen::VectorXd& column) {
  const int qa = affine_->matrix_terms();
  const Eigen::Index old_cols = terms_.cols();
  terms_.conservativeResize(Eigen::NoChange, old_cols + qa);
  reps_.conservativeResize(Eigen::NoChange, old_cols + qa);
  for (int q = 0; q < qa; ++q) {
    terms_.col(old_cols + q) = affine_->matrices[q] * column;
    reps_.col(old_cols + q) = inner_->solve(Eigen::VectorXd(terms_.col(old_cols + q)));
  }
  gram_.conservativeResize(old_cols + qa, old_cols + qa);
  gram_.block(0, old_cols, old_cols + qa, qa) =
      reps_.transpose() * terms_.rightCols(qa);
  gram_.block(old_cols, 0, qa, old_cols) =
      gram_.block(0, old_cols, old_cols, qa).transpose();
  ++basis_size_;
}

Eigen::VectorXd ResidualEstimator::coefficients(const Eigen::VectorXd& mu,
                                                const Eigen::VectorXd& reduced) const {
  const int qf = affine_->load_terms();
  const int qa = affine_->matrix_terms();
  if (reduced.size() > basis_size_) {
    throw std::invalid_argument("ResidualEstimator: reduced coefficient size mismatch");
  }
  // Shorter coefficient vectors evaluate the estimator of a truncated basis:
  // the residual terms of the unused trailing columns get weight zero.
  Eigen::VectorXd c(qf + basis_size_ * qa);
  for (int q = 0; q < qf; ++q) {
    c[q] = affine_->load_theta[q](mu);
  }
  for (int n = 0; n < basis_size_; ++n) {
    const double coeff = n < reduced.size() ? reduced[n] : 0.0;
    for (int q = 0; q < qa; ++q) {
      c[qf + n * qa + q] = -affine_->matrix_theta[q](mu) * coeff;
    }
  }
  return c;
}

double ResidualEstimator::operator()(const Eigen::VectorXd& mu,
                                     const Eigen::VectorXd& reduced) const {
  const Eigen::VectorXd c = coefficients(mu, reduced);
  double eta_sq = c.dot(gram_ * c);
  const double scale = quadratic_form_scale(gram_, c);
  if (eta_sq < -1e-12 * scale) {
    // Round-off swamped the Gram form; recompute the residual exactly.
    std::fprintf(stderr,
                 "[himod] residual estimator: negative quadratic form %.3e (scale %.3e), "
                 "recomputing full-order residual\n",
                 eta_sq, scale);
    const Eigen::VectorXd residual = terms_ * c;
    eta_sq = residual.dot(inner_->solve(residual));
  }
  return std::sqrt(std::max(eta_sq, 0.0));
}

GreedyResult greedy_offline(const AffineSystem& affine, const InnerProduct& inner,
                            const TrainingSet& train, const GreedyOptions& options) {
  if (options.max_size < 1) {
    throw std::invalid_argument("greedy_offline: need max_size >= 1");
  }
  const int count = train.size();
  const int qa = affine.matrix_terms();
  const int qf = affine.load_terms();

  GreedyResult result;
  result.estimator = ResidualEstimator(affine, inner);
  Eigen::MatrixXd basis(affine.dim, 0);
  std::vector<Eigen::MatrixXd> reduced_mats(qa, Eigen::MatrixXd(0, 0));
  std::vector<Eigen::MatrixXd> op_basis(qa, Eigen::MatrixXd(affine.dim, 0));  // A_q * Phi
  std::vector<Eigen::VectorXd> reduced_loads(qf, Eigen::VectorXd(0));
  std::vector<char> selected(count, 0);
  std::mt19937_64 rng(options.seed);

  const auto reduced_solve = [&](const Eigen::VectorXd& mu) {
    const int n = static_cast<int>(basis.cols());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int q = 0; q < qa; ++q) {
      a += affine.matrix_theta[q](mu) * reduced_mats[q];
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    for (int q = 0; q < qf; ++q) {
      f += affine.load_theta[q](mu) * reduced_loads[q];
    }
    return linalg::dense_solve(a, f);
  };

  for (int iter = 1; iter <= options.max_size; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    double max_eta = -1.0;
    int pick = -1;
    for (int j = 0; j < count; ++j) {
      if (selected[j]) {
        continue;
      }
      const Eigen::VectorXd mu = train.point(j);
      const double eta = result.estimator(mu, reduced_solve(mu));
      if (eta > max_eta) {
        max_eta = eta;
        pick = j;
      }
    }
    if (pick < 0) {
      result.log.exhausted = true;  // training set smaller than max_size
      break;
    }
    if (iter > 1 && max_eta < options.tolerance) {
      result.log.tolerance_reached = true;
      break;
    }
    if (iter == 1) {
      // The sweep above only logs the initial estimator level; the first
      // parameter is drawn uniformly at random.
      pick = random_index(rng, count);
    }

    const Eigen::VectorXd snapshot = solve_himod(affine, train.point(pick));
    ++result.log.solve_count;
    selected[pick] = 1;

    const MgsOutcome mgs = orthonormalize(basis, inner, snapshot);
    if (!mgs.accepted) {
      result.log.exhausted = true;
      const auto t1 = std::chrono::steady_clock::now();
      result.log.iterations.push_back({iter, pick, max_eta, mgs.ratio,
                                       std::chrono::duration<double>(t1 - t0).count()});
      break;
    }

    basis = append_column(basis, mgs.column);
    result.estimator.extend(mgs.column);
    const int n = static_cast<int>(basis.cols());
    for (int q = 0; q < qa; ++q) {
      const Eigen::VectorXd w = affine.matrices[q] * mgs.column;
      Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(n, n);
      grown.topLeftCorner(n - 1, n - 1) = reduced_mats[q];
      grown.block(0, n - 1, n - 1, 1) = basis.leftCols(n - 1).transpose() * w;
      grown.block(n - 1, 0, 1, n - 1) =
          (op_basis[q].transpose() * mgs.column).transpose();
      grown(n - 1, n - 1) = mgs.column.dot(w);
      reduced_mats[q] = std::move(grown);
      op_basis[q] = append_column(op_basis[q], w);
    }
    for (int q = 0; q < qf; ++q) {
      Eigen::VectorXd grown(n);
      grown.head(n - 1) = reduced_loads[q];
      grown[n - 1] = mgs.column.dot(affine.loads[q]);
      reduced_loads[q] = std::move(grown);
    }

    const auto t1 = std::chrono::steady_clock::now();
    result.log.iterations.push_back(
        {iter, pick, max_eta, mgs.ratio, std::chrono::duration<double>(t1 - t0).count()});
  }

  result.basis.role = FieldRole::state;
  result.basis.norm_tag = inner.tag();
  result.basis.columns = basis;
  result.rom.basis = result.basis;
  result.rom.parameter_dim = affine.parameter_dim;
  result.rom.matrices = reduced_mats;
  result.rom.matrix_theta = affine.matrix_theta;
  result.rom.loads = reduced_loads;
  result.rom.load_theta = affine.load_theta;
  return result;
}

StokesResidualEstimator::StokesResidualEstimator(const SaddleAffineSystem& affine,
                                                 const InnerProduct& velocity_inner)
    : affine_(&affine), inner_(&velocity_inner) {
  const int qf = static_cast<int>(affine.loads.size());
  terms_.resize(affine.dim_u, qf);
  for (int q = 0; q < qf; ++q) {
    terms_.col(q) = affine.loads[q];
  }
  reps_ = velocity_inner.solve(terms_);
  gram_ = reps_.transpose() * terms_;
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
}

void StokesResidualEstimator::append_term(const Eigen::VectorXd& term, TermKind kind,
                                          int role_index) {
  const Eigen::Index old_cols = terms_.cols();
  terms_.conservativeResize(Eigen::NoChange, old_cols + 1);
  reps_.conservativeResize(Eigen::NoChange, old_cols + 1);
  terms_.col(old_cols) = term;
  reps_.col(old_cols) = inner_->solve(term);
  gram_.conservativeResize(old_cols + 1, old_cols + 1);
  gram_.block(0, old_cols, old_cols + 1, 1) = reps_.transpose() * term;
  gram_.block(old_cols, 0, 1, old_cols) =
      gram_.block(0, old_cols, old_cols, 1).transpose();
  term_tags_.emplace_back(kind, role_index);
}

void StokesResidualEstimator::extend_velocity(const Eigen::VectorXd& column) {
  // Q_a = 1 for the saddle problem (the viscosity block).
  append_term(affine_->matrices[0] * column, TermKind::velocity, velocity_size_);
  ++velocity_size_;
}

void StokesResidualEstimator::extend_supremizer(const Eigen::VectorXd& column) {
  append_term(affine_->matrices[0] * column, TermKind::supremizer, supremizer_size_);
  ++supremizer_size_;
}

void StokesResidualEstimator::extend_pressure(const Eigen::VectorXd& column) {
  append_term(affine_->divergence.transpose() * column, TermKind::pressure, pressure_size_);
  ++pressure_size_;
}

Eigen::VectorXd StokesResidualEstimator::coefficients(
    const Eigen::VectorXd& mu, int nv, int ns, const Eigen::VectorXd& velocity_reduced,
    const Eigen::VectorXd& pressure_reduced) const {
  const int qf = static_cast<int>(affine_->loads.size());
  if (nv < 0 || nv > velocity_size_ || ns < 0 || ns > supremizer_size_ ||
      velocity_reduced.size() != nv + ns || pressure_reduced.size() > pressure_size_) {
    throw std::invalid_argument("StokesResidualEstimator: reduced coefficient size mismatch");
  }
  // Momentum residual r = f(mu) - nu A0 (Phi u_N) + B^T (Pi p_N). Columns
  // were appended in registration order; map each back to its slot in the
  // [velocity | supremizer] trial vector or the pressure vector. Columns
  // beyond the truncation sizes get weight zero.
  Eigen::VectorXd c(qf + static_cast<Eigen::Index>(term_tags_.size()));
  const double nu = affine_->matrix_theta[0](mu);
  for (int q = 0; q < qf; ++q) {
    c[q] = affine_->load_theta[q](mu);
  }
  for (size_t t = 0; t < term_tags_.size(); ++t) {
    const auto& [kind, role_index] = term_tags_[t];
    double value = 0.0;
    switch (kind) {
      case TermKind::velocity:
        value = role_index < nv ? -nu * velocity_reduced[role_index] : 0.0;
        break;
      case TermKind::supremizer:
        value = role_index < ns ? -nu * velocity_reduced[nv + role_index] : 0.0;
        break;
      case TermKind::pressure:
        value = role_index < pressure_reduced.size() ? pressure_reduced[role_index] : 0.0;
        break;
    }
    c[qf + static_cast<Eigen::Index>(t)] = value;
  }
  return c;
}

double StokesResidualEstimator::evaluate(const Eigen::VectorXd& c) const {
  double eta_sq = c.dot(gram_ * c);
  const double scale = quadratic_form_scale(gram_, c);
  if (eta_sq < -1e-12 * scale) {
    std::fprintf(stderr,
                 "[himod] stokes residual estimator: negative quadratic form %.3e (scale %.3e), "
                 "recomputing full-order residual\n",
                 eta_sq, scale);
    const Eigen::VectorXd residual = terms_ * c;
    eta_sq = residual.dot(inner_->solve(residual));
  }
  return std::sqrt(std::max(eta_sq, 0.0));
}

double StokesResidualEstimator::operator()(const Eigen::VectorXd& mu,
                                           const Eigen::VectorXd& velocity_reduced,
                                           const Eigen::VectorXd& pressure_reduced) const {
  return evaluate(coefficients(mu, velocity_size_, supremizer_size_, velocity_reduced,
                               pressure_reduced));
}

double StokesResidualEstimator::truncated(const Eigen::VectorXd& mu, int nv, int ns,
                                          const Eigen::VectorXd& velocity_reduced,
                                          const Eigen::VectorXd& pressure_reduced) const {
  return evaluate(coefficients(mu, nv, ns, velocity_reduced, pressure_reduced));
}

StokesGreedyResult greedy_offline_stokes(const SaddleAffineSystem& affine,
                                         const InnerProduct& velocity_inner,
                                         const InnerProduct& pressure_inner,
                                         const TrainingSet& train, const GreedyOptions& options) {
  if (options.max_size < 1) {
    throw std::invalid_argument("greedy_offline_stokes: need max_size >= 1");
  }
  const int count = train.size();

  StokesGreedyResult result;
  result.estimator = StokesResidualEstimator(affine, velocity_inner);
  result.velocity = {FieldRole::velocity, velocity_inner.tag(), Eigen::MatrixXd(affine.dim_u, 0)};
  result.supremizer = {FieldRole::supremizer, velocity_inner.tag(),
                       Eigen::MatrixXd(affine.dim_u, 0)};
  result.pressure = {FieldRole::pressure, pressure_inner.tag(), Eigen::MatrixXd(affine.dim_p, 0)};
  std::vector<char> selected(count, 0);
  std::mt19937_64 rng(options.seed);

  // The reduced projections are rebuilt per iteration; at saddle reduced
  // sizes (a handful of columns) the rebuild cost is negligible next to the
  // full-order solve.
  ReducedStokes rom;

  for (int iter = 1; iter <= options.max_size; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    double max_eta = -1.0;
    int pick = -1;
    const bool have_rom = result.velocity.size() > 0;
    if (have_rom) {
      rom = project_system_stokes(affine, result.velocity, result.supremizer, result.pressure,
                                  velocity_inner, pressure_inner);
    }
    for (int j = 0; j < count; ++j) {
      if (selected[j]) {
        continue;
      }
      const Eigen::VectorXd mu = train.point(j);
      double eta;
      if (have_rom) {
        const StokesRomSolution sol = rom_query_stokes(rom, mu);
        eta = result.estimator(mu, sol.velocity_reduced, sol.pressure_reduced);
      } else {
        eta = result.estimator(mu, Eigen::VectorXd(), Eigen::VectorXd());
      }
      if (eta > max_eta) {
        max_eta = eta;
        pick = j;
      }
    }
    if (pick < 0) {
      result.log.exhausted = true;
      break;
    }
    if (iter > 1 && max_eta < options.tolerance) {
      result.log.tolerance_reached = true;
      break;
    }
    if (iter == 1) {
      pick = random_index(rng, count);
    }

    const Eigen::VectorXd mu = train.point(pick);
    const StokesSolution snapshot = solve_stokes(affine, mu);
    const Eigen::VectorXd supremizer =
        solve_supremizer(velocity_inner, affine.divergence, snapshot.pressure);
    ++result.log.solve_count;
    selected[pick] = 1;

    const MgsOutcome vel = orthonormalize(result.velocity.columns, velocity_inner, snapshot.velocity);
    if (!vel.accepted) {
      result.log.exhausted = true;
      const auto t1 = std::chrono::steady_clock::now();
      result.log.iterations.push_back({iter, pick, max_eta, vel.ratio,
                                       std::chrono::duration<double>(t1 - t0).count()});
      break;
    }
    result.velocity.columns = append_column(result.velocity.columns, vel.column);
    result.estimator.extend_velocity(vel.column);

    const MgsOutcome sup = orthonormalize(result.supremizer.columns, velocity_inner, supremizer);
    if (sup.accepted) {
      result.supremizer.columns = append_column(result.supremizer.columns, sup.column);
      result.estimator.extend_supremizer(sup.column);
    }
    const MgsOutcome pre = orthonormalize(result.pressure.columns, pressure_inner, snapshot.pressure);
    if (pre.accepted) {
      result.pressure.columns = append_column(result.pressure.columns, pre.column);
      result.estimator.extend_pressure(pre.column);
    }

    const auto t1 = std::chrono::steady_clock::now();
    result.log.iterations.push_back(
        {iter, pick, max_eta, vel.ratio, std::chrono::duration<double>(t1 - t0).count()});
  }

  result.rom = project_system_stokes(affine, result.velocity, result.supremizer, result.pressure,
                                     velocity_inner, pressure_inner);
  return result;
}

}  // namespace himod
