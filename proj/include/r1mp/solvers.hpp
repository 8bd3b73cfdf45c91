#ifndef R1MP_SOLVERS_HPP
#define R1MP_SOLVERS_HPP

#include <Eigen/Core>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "r1mp/power_method.hpp"
#include "r1mp/types.hpp"

namespace r1mp {

struct SolverConfig {
  // Stop after this many pursued factors; 0 disables the rank rule.
  int rank_budget = 10;
  // Stop once |R_k| <= eps * |Y|_omega; 0 disables the tolerance rule.
  // At least one of the two rules must be active.
  double eps = 0.0;
  PowerConfig power{};
  bool trace = true;
};

enum class StopReason {
  rank_budget,
  eps_tolerance,
  zero_residual,
  degenerate_basis,
};

const char* to_string(StopReason reason);

struct IterationRecord {
  int k = 0;                  // 1-based pursuit iteration
  double residual_norm = 0;   // |R_k| before this iteration's update
  double sigma = 0;           // estimated top singular value of R_k
  int power_iters = 0;        // sweeps used by the pair computation
  double diag_ratio_sq = 0;   // |R_k|^2 / sigma^2 convergence diagnostic
  double seconds = 0;         // wall clock; excluded from trace files
};

struct PursuitTrace {
  std::vector<IterationRecord> records;
  double observed_norm = 0;        // |Y|_omega
  double final_residual_norm = 0;  // |R_{K+1}| after the last update
  StopReason stop_reason = StopReason::rank_budget;
};

struct PursuitResult {
  FactorModel model;
  PursuitTrace trace;
};

// Incremental normal-equations state for the full orthogonal refit:
// keeps the pursued mask-aligned basis columns, the maintained inverse
// Gram matrix and the right-hand side, updated per appended column by
// Schur-complement blockwise inversion.
class GramState {
 public:
  int rank() const { return static_cast<int>(columns_.size()); }

  // Appends `new_column` and returns the weights minimizing
  // |[columns, new_column] * theta - y|_2. A Schur complement below
  // 1e-12 triggers a from-scratch ridge solve; if that is still singular
  // a degenerate_basis_error is thrown.
  Eigen::VectorXd solve_weights_full(std::span<const double> new_column,
                                     std::span<const double> y);

  const Eigen::MatrixXd& inverse_gram() const { return inv_gram_; }
  std::span<const double> basis_column(int i) const { return columns_[i]; }

  // Forms the Gram matrix directly from the stored columns (test support).
  Eigen::MatrixXd explicit_gram() const;

 private:
  Eigen::MatrixXd inv_gram_;
  Eigen::VectorXd mty_;
  std::vector<std::vector<double>> columns_;
};

// Two-variable refit min |a1*x + a2*m - y|_2 solved by its 2x2 normal
// equations, with the 1e-12 ridge fallback on a singular system.
std::pair<double, double> solve_weights_economic(std::span<const double> x,
                                                 std::span<const double> m,
                                                 std::span<const double> y);

// Instrumentation for invariant tests and diagnostics. Spans are only
// valid during the callback.
struct PursuitStepInfo {
  int k = 0;
  std::span<const double> residual_before;  // R_k
  std::span<const double> residual_after;   // R_{k+1}
  std::span<const double> new_column;       // m_k on the mask
  const RankOneFactor* factor = nullptr;    // M_k
  double sigma = 0;                         // estimate used for M_k
  std::span<const double> weights;          // theta after the refit
};

using PursuitObserver = std::function<void(const PursuitStepInfo&)>;
// Replaces the power method when set (e.g. an exact dense-SVD pair in
// tests). Receives the residual values on the mask and the 1-based
// iteration index.
using PairSolver = std::function<SingularPair(
    const ObservedMatrix&, std::span<const double>, const PowerConfig&, int)>;

struct SolverHooks {
  PairSolver pair_solver;
  PursuitObserver on_iteration;
};

// Orthogonal pursuit: every iteration refits all weights by least squares
// over the pursued basis (incremental GramState). Storage O(k * n_observed).
PursuitResult or1mp(const ObservedMatrix& obs, const SolverConfig& cfg,
                    const SolverHooks& hooks = {});

// Economic pursuit: two-variable refit over (current estimate, new factor);
// history weights rescale by one scalar. Storage O(n_observed).
PursuitResult eor1mp(const ObservedMatrix& obs, const SolverConfig& cfg,
                     const SolverHooks& hooks = {});

// Forward pursuit: each factor enters with its individually optimal weight
// and is never revisited.
PursuitResult fr1mp(const ObservedMatrix& obs, const SolverConfig& cfg,
                    const SolverHooks& hooks = {});

}  // namespace r1mp

#endif  // R1MP_SOLVERS_HPP
