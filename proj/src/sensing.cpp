#include "r1mp/sensing.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "r1mp/detail/rng.hpp"
#include "r1mp/omega_kernels.hpp"

namespace r1mp {

SensingOperator::SensingOperator(int n_rows, int n_cols, Eigen::MatrixXd a,
                                 const SensingLimits& limits)
    : n_rows_(n_rows), n_cols_(n_cols), a_(std::move(a)) {
  if (n_rows < 1 || n_cols < 1)
    throw std::invalid_argument("SensingOperator: dims must be positive");
  const long mn = static_cast<long>(n_rows) * n_cols;
  if (a_.cols() != mn)
    throw std::invalid_argument("SensingOperator: A must have n_rows*n_cols columns");
  const int d = static_cast<int>(a_.rows());
  if (d < 1 || d > mn)
    throw numeric_error("SensingOperator: need 1 <= d <= n_rows*n_cols");
  if (mn > limits.max_matrix_elements)
    throw numeric_error("SensingOperator: matrix size exceeds the cap");
  if (d > limits.max_measurements)
    throw numeric_error("SensingOperator: measurement count exceeds the cap");

  // A^T (A A^T)^{-1} via an SPD factorization; failure means A is not of
  // full row rank.
  const Eigen::MatrixXd gram = a_ * a_.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw numeric_error("SensingOperator: A A^T singular (A not full row rank)");
  pinv_ = llt.solve(a_).transpose();
  if (!pinv_.allFinite())
    throw numeric_error("SensingOperator: pseudo-inverse not finite");
}

Eigen::VectorXd SensingOperator::apply(const Eigen::MatrixXd& x) const {
  if (x.rows() != n_rows_ || x.cols() != n_cols_)
    throw std::invalid_argument("SensingOperator::apply: dimension mismatch");
  return a_ * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
}

Eigen::MatrixXd SensingOperator::lift(const Eigen::VectorXd& b) const {
  if (b.size() != a_.rows())
    throw std::invalid_argument("SensingOperator::lift: length mismatch");
  const Eigen::VectorXd lifted = pinv_ * b;
  return Eigen::Map<const Eigen::MatrixXd>(lifted.data(), n_rows_, n_cols_);
}

void save_operator(const SensingOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write operator file: " + path);
  out << "R1MP-SENSEOP 1\n";
  out << op.n_rows() << " " << op.n_cols() << " " << op.measurements() << "\n";
  const Eigen::MatrixXd& a = op.matrix();
  char buf[32];
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
      out << buf << (j + 1 == a.cols() ? "" : " ");
    }
    out << "\n";
  }
  if (!out) throw data_error("write failed: " + path);
}

SensingOperator load_operator(const std::string& path,
                              const SensingLimits& limits) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open operator file: " + path);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "R1MP-SENSEOP" || version != 1)
    throw data_error("bad operator file header: " + path);
  int n_rows = 0, n_cols = 0, d = 0;
  if (!(in >> n_rows >> n_cols >> d) || n_rows < 1 || n_cols < 1 || d < 1)
    throw data_error("bad operator dims: " + path);
  Eigen::MatrixXd a(d, static_cast<long>(n_rows) * n_cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!(in >> a(i, j))) throw data_error("truncated operator file: " + path);
  return SensingOperator(n_rows, n_cols, std::move(a), limits);
}

PursuitResult r1mp4ms(const SensingOperator& op, const Eigen::VectorXd& b,
                      const SolverConfig& cfg, const SensingHooks& hooks) {
  if (cfg.rank_budget < 0 || cfg.eps < 0.0)
    throw std::invalid_argument("SolverConfig: negative rank budget or eps");
  if (cfg.rank_budget == 0 && cfg.eps == 0.0)
    throw std::invalid_argument("SolverConfig: no stopping rule active");
  if (b.size() != op.measurements())
    throw std::invalid_argument("r1mp4ms: measurement length mismatch");

  const Eigen::MatrixXd r0 = op.lift(b);
  const Eigen::Map<const Eigen::VectorXd> r0_vec(r0.data(), r0.size());
  const double norm_r0 = r0.norm();

  FactorModel model(op.n_rows(), op.n_cols());
  GramState state;
  PursuitTrace trace;
  trace.observed_norm = norm_r0;

  Eigen::MatrixXd r = r0;
  double rn = norm_r0;

  for (int k = 1;; ++k) {
    if (rn <= 1e-13 * norm_r0) {
      trace.stop_reason = StopReason::zero_residual;
      break;
    }
    if (cfg.eps > 0.0 && rn <= cfg.eps * norm_r0) {
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
      PowerConfig pcfg = cfg.power;
      pcfg.seed = detail::mix_seed(cfg.power.seed, static_cast<std::uint64_t>(k));
      pair = hooks.pair_solver ? hooks.pair_solver(r, pcfg, k)
                               : top_singular_pair(r, pcfg);
    } catch (const zero_residual_error&) {
      trace.stop_reason = StopReason::zero_residual;
      break;
    }

    RankOneFactor factor{pair.u, pair.v};
    const Eigen::Map<const Eigen::VectorXd> u(factor.u.data(), op.n_rows());
    const Eigen::Map<const Eigen::VectorXd> v(factor.v.data(), op.n_cols());
    const Eigen::MatrixXd basis = op.lift(op.apply(u * v.transpose()));

    Eigen::VectorXd theta;
    try {
      theta = state.solve_weights_full(
          std::span<const double>(basis.data(),
                                  static_cast<std::size_t>(basis.size())),
          std::span<const double>(r0.data(),
                                  static_cast<std::size_t>(r0.size())));
    } catch (const degenerate_basis_error&) {
      trace.stop_reason = StopReason::degenerate_basis;
      break;
    }
    model.append(std::move(factor), theta(theta.size() - 1));
    model.set_weights(std::span<const double>(
        theta.data(), static_cast<std::size_t>(theta.size())));

    Eigen::MatrixXd r_next = r0;
    for (int i = 0; i < state.rank(); ++i) {
      const auto col = state.basis_column(i);
      Eigen::Map<Eigen::VectorXd>(r_next.data(), r_next.size()) -=
          theta(i) * Eigen::Map<const Eigen::VectorXd>(col.data(), col.size());
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (cfg.trace)
      trace.records.push_back({k, rn, pair.sigma, pair.iterations,
                               rn * rn / (pair.sigma * pair.sigma), seconds});

    if (hooks.on_iteration) {
      RankOneFactor cb_factor{pair.u, pair.v};
      hooks.on_iteration(SensingStepInfo{k, r, r_next, cb_factor, pair.sigma,
                                         model.weights()});
    }

    r = std::move(r_next);
    rn = r.norm();
  }

  trace.final_residual_norm = rn;
  return PursuitResult{std::move(model), std::move(trace)};
}

}  // namespace r1mp
