#include "r1mp/solvers.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "r1mp/detail/rng.hpp"
#include "r1mp/omega_kernels.hpp"

namespace r1mp {

namespace {

constexpr double kZeroResidualFactor = 1e-13;
constexpr double kSchurThreshold = 1e-12;
constexpr double kRidge = 1e-12;

void check_config(const SolverConfig& cfg) {
  if (cfg.rank_budget < 0 || cfg.eps < 0.0)
    throw std::invalid_argument("SolverConfig: negative rank budget or eps");
  if (cfg.rank_budget == 0 && cfg.eps == 0.0)
    throw std::invalid_argument("SolverConfig: no stopping rule active");
}

std::vector<double> column_on_mask(const ObservedMatrix& obs,
                                   const RankOneFactor& factor) {
  const auto rows = obs.rows();
  const auto cols = obs.cols();
  std::vector<double> m(obs.n_observed());
  for (std::size_t t = 0; t < m.size(); ++t)
    m[t] = factor.u[rows[t]] * factor.v[cols[t]];
  return m;
}

SingularPair next_pair(const ObservedMatrix& obs,
                       std::span<const double> residual,
                       const SolverConfig& cfg, const SolverHooks& hooks,
                       int k) {
  // Fresh seeded start per outer iteration, derived from the base seed.
  PowerConfig pcfg = cfg.power;
  pcfg.seed = detail::mix_seed(cfg.power.seed, static_cast<std::uint64_t>(k));
  if (hooks.pair_solver) return hooks.pair_solver(obs, residual, pcfg, k);
  return top_singular_pair(obs, residual, pcfg);
}

// Shared pursuit scaffolding: stop checks, trace records, observer calls.
// The Refit callable consumes (k, pair, column, residual) and updates the
// model plus the mask estimate; it throws degenerate_basis_error to stop.
template <class Refit>
PursuitResult run_pursuit(const ObservedMatrix& obs, const SolverConfig& cfg,
                          const SolverHooks& hooks, FactorModel& model,
                          std::vector<double>& x, Refit refit) {
  check_config(cfg);
  const auto y = obs.values();
  const double norm_y = kernels::norm_omega(y);

  PursuitTrace trace;
  trace.observed_norm = norm_y;
  std::vector<double> r(y.begin(), y.end());
  double rn = norm_y;

  for (int k = 1;; ++k) {
    if (rn <= kZeroResidualFactor * norm_y) {
      trace.stop_reason = StopReason::zero_residual;
      break;
    }
    if (cfg.eps > 0.0 && rn <= cfg.eps * norm_y) {
      trace.stop_reason = StopReason::eps_tolerance;
      break;
    }
    if (cfg.rank_budget > 0 && model.rank() >= cfg.rank_budget) {
      trace.stop_reason = StopReason::rank_budget;
      break;
    }

    const auto t0 = std::chrono::steady_clock::now();
    SingularPair pair;
    try {
      pair = next_pair(obs, r, cfg, hooks, k);
    } catch (const zero_residual_error&) {
      trace.stop_reason = StopReason::zero_residual;
      break;
    }
    std::vector<double> column =
        column_on_mask(obs, RankOneFactor{pair.u, pair.v});

    try {
      refit(k, pair, column, std::span<const double>(r));
    } catch (const degenerate_basis_error&) {
      trace.stop_reason = StopReason::degenerate_basis;
      break;
    }

    std::vector<double> r_next(y.size());
    for (std::size_t t = 0; t < r_next.size(); ++t) r_next[t] = y[t] - x[t];

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (cfg.trace)
      trace.records.push_back({k, rn, pair.sigma, pair.iterations,
                               rn * rn / (pair.sigma * pair.sigma), seconds});

    if (hooks.on_iteration) {
      RankOneFactor factor{pair.u, pair.v};
      hooks.on_iteration(PursuitStepInfo{k, r, r_next, column, &factor,
                                         pair.sigma, model.weights()});
    }

    r.swap(r_next);
    rn = kernels::norm_omega(r);
  }

  trace.final_residual_norm = rn;
  return PursuitResult{std::move(model), std::move(trace)};
}

void check_obs(const ObservedMatrix& obs) {
  if (obs.n_observed() == 0)
    throw std::invalid_argument("pursuit: empty observation set");
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::rank_budget:
      return "rank_budget";
    case StopReason::eps_tolerance:
      return "eps_tolerance";
    case StopReason::zero_residual:
      return "zero_residual";
    case StopReason::degenerate_basis:
      return "degenerate_basis";
  }
  return "unknown";
}

Eigen::MatrixXd GramState::explicit_gram() const {
  const int k = rank();
  Eigen::MatrixXd g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      g(i, j) = kernels::inner_omega(columns_[i], columns_[j]);
      g(j, i) = g(i, j);
    }
  return g;
}

Eigen::VectorXd GramState::solve_weights_full(std::span<const double> new_column,
                                              std::span<const double> y) {
  if (new_column.size() != y.size())
    throw std::invalid_argument("solve_weights_full: length mismatch");
  if (!columns_.empty() && new_column.size() != columns_[0].size())
    throw std::invalid_argument("solve_weights_full: column length mismatch");

  const double mtm = kernels::inner_omega(new_column, new_column);
  const double mty_new = kernels::inner_omega(new_column, y);
  const int k = rank();

  if (k == 0) {
    double denom = mtm;
    if (denom <= kSchurThreshold) denom += kRidge;
    if (denom <= 0.0) throw degenerate_basis_error();
    inv_gram_ = Eigen::MatrixXd::Constant(1, 1, 1.0 / denom);
    mty_ = Eigen::VectorXd::Constant(1, mty_new);
    columns_.emplace_back(new_column.begin(), new_column.end());
    return Eigen::VectorXd::Constant(1, mty_new / denom);
  }

  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i)
    b(i) = kernels::inner_omega(columns_[i], new_column);
  const Eigen::VectorXd ab = inv_gram_ * b;
  const double schur = mtm - b.dot(ab);

  columns_.emplace_back(new_column.begin(), new_column.end());
  mty_.conservativeResize(k + 1);
  mty_(k) = mty_new;

  if (schur > kSchurThreshold) {
    // Blockwise inversion of the extended Gram matrix. Note the Schur
    // complement is m^T m - b^T A b, not b^T b - b^T A b.
    const double d = 1.0 / schur;
    Eigen::MatrixXd next(k + 1, k + 1);
    next.topLeftCorner(k, k) = inv_gram_ + d * ab * ab.transpose();
    next.topRightCorner(k, 1) = -d * ab;
    next.bottomLeftCorner(1, k) = -d * ab.transpose();
    next(k, k) = d;
    inv_gram_ = std::move(next);
  } else {
    // Numerically dependent column: rebuild from the full normal
    // equations with a ridge.
    Eigen::MatrixXd g = explicit_gram();
    g.diagonal().array() += kRidge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    Eigen::MatrixXd inv;
    if (ldlt.info() == Eigen::Success)
      inv = ldlt.solve(Eigen::MatrixXd::Identity(k + 1, k + 1));
    if (ldlt.info() != Eigen::Success || !inv.allFinite()) {
      columns_.pop_back();
      mty_.conservativeResize(k);
      throw degenerate_basis_error();
    }
    inv_gram_ = std::move(inv);
  }

  Eigen::VectorXd theta = inv_gram_ * mty_;
  if (!theta.allFinite()) {
    columns_.pop_back();
    mty_.conservativeResize(k);
    throw degenerate_basis_error();
  }
  return theta;
}

std::pair<double, double> solve_weights_economic(std::span<const double> x,
                                                 std::span<const double> m,
                                                 std::span<const double> y) {
  if (x.size() != m.size() || x.size() != y.size())
    throw std::invalid_argument("solve_weights_economic: length mismatch");
  double a11 = kernels::inner_omega(x, x);
  double a12 = kernels::inner_omega(x, m);
  double a22 = kernels::inner_omega(m, m);
  const double b1 = kernels::inner_omega(x, y);
  const double b2 = kernels::inner_omega(m, y);

  double det = a11 * a22 - a12 * a12;
  if (det <= kSchurThreshold * a11 * a22) {
    a11 += kRidge;
    a22 += kRidge;
    det = a11 * a22 - a12 * a12;
    if (det <= 0.0) throw degenerate_basis_error();
  }
  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

PursuitResult or1mp(const ObservedMatrix& obs, const SolverConfig& cfg,
                    const SolverHooks& hooks) {
  check_obs(obs);
  FactorModel model(obs.n_rows(), obs.n_cols());
  std::vector<double> x(obs.n_observed(), 0.0);
  GramState state;
  const auto y = obs.values();

  auto refit = [&](int, const SingularPair& pair,
                   const std::vector<double>& column,
                   std::span<const double>) {
    const Eigen::VectorXd theta = state.solve_weights_full(column, y);
    model.append(RankOneFactor{pair.u, pair.v}, theta(theta.size() - 1));
    model.set_weights(std::span<const double>(theta.data(),
                                              static_cast<std::size_t>(theta.size())));
    x = kernels::evaluate_on_omega(model, obs);
  };
  return run_pursuit(obs, cfg, hooks, model, x, refit);
}

PursuitResult eor1mp(const ObservedMatrix& obs, const SolverConfig& cfg,
                     const SolverHooks& hooks) {
  check_obs(obs);
  FactorModel model(obs.n_rows(), obs.n_cols());
  std::vector<double> x(obs.n_observed(), 0.0);
  const auto y = obs.values();

  auto refit = [&](int k, const SingularPair& pair,
                   const std::vector<double>& column,
                   std::span<const double>) {
    if (k == 1) {
      // X_0 = 0: one-variable least squares in the new weight only.
      const double denom = kernels::inner_omega(column, column);
      if (denom <= 0.0) throw degenerate_basis_error();
      const double alpha2 = kernels::inner_omega(column, y) / denom;
      model.append(RankOneFactor{pair.u, pair.v}, alpha2);
      for (std::size_t t = 0; t < x.size(); ++t) x[t] = alpha2 * column[t];
      return;
    }
    const auto [alpha1, alpha2] = solve_weights_economic(x, column, y);
    model.scale_weights(alpha1);
    model.append(RankOneFactor{pair.u, pair.v}, alpha2);
    for (std::size_t t = 0; t < x.size(); ++t)
      x[t] = alpha1 * x[t] + alpha2 * column[t];
  };
  return run_pursuit(obs, cfg, hooks, model, x, refit);
}

PursuitResult fr1mp(const ObservedMatrix& obs, const SolverConfig& cfg,
                    const SolverHooks& hooks) {
  check_obs(obs);
  FactorModel model(obs.n_rows(), obs.n_cols());
  std::vector<double> x(obs.n_observed(), 0.0);

  auto refit = [&](int, const SingularPair& pair,
                   const std::vector<double>& column,
                   std::span<const double> r) {
    // Least-squares optimum of min_theta |R_k - theta M_k|^2 on the mask:
    // <R_k, M_k> / |M_k|^2. The weight divides by the squared norm.
    const double denom = kernels::inner_omega(column, column);
    if (denom <= 0.0) throw degenerate_basis_error();
    const double theta = kernels::inner_omega(r, column) / denom;
    model.append(RankOneFactor{pair.u, pair.v}, theta);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] += theta * column[t];
  };
  return run_pursuit(obs, cfg, hooks, model, x, refit);
}

}  // namespace r1mp
