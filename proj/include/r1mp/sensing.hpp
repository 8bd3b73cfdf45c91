#ifndef R1MP_SENSING_HPP
#define R1MP_SENSING_HPP

#include <Eigen/Core>
#include <functional>
#include <string>

#include "r1mp/solvers.hpp"
#include "r1mp/types.hpp"

namespace r1mp {

// Desk-scale caps on the dense measurement operator.
struct SensingLimits {
  int max_matrix_elements = 20000;  // n_rows * n_cols
  int max_measurements = 10000;     // d
};

// General linear measurement operator: a dense d x (n_rows*n_cols) matrix
// acting on column-major vectorized matrices, with the pseudo-inverse
// A^T (A A^T)^{-1} cached at construction. Requires full row rank and
// d <= n_rows*n_cols; construction throws numeric_error otherwise.
class SensingOperator {
 public:
  SensingOperator(int n_rows, int n_cols, Eigen::MatrixXd a,
                  const SensingLimits& limits = {});

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  int measurements() const { return static_cast<int>(a_.rows()); }

  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::MatrixXd& pseudo_inverse() const { return pinv_; }

  // b = A vec(X).
  Eigen::VectorXd apply(const Eigen::MatrixXd& x) const;

  // mat(A^dagger b); apply(lift(b)) == b for consistent b.
  Eigen::MatrixXd lift(const Eigen::VectorXd& b) const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  Eigen::MatrixXd a_;
  Eigen::MatrixXd pinv_;
};

void save_operator(const SensingOperator& op, const std::string& path);
SensingOperator load_operator(const std::string& path,
                              const SensingLimits& limits = {});

struct SensingStepInfo {
  int k = 0;
  const Eigen::MatrixXd& residual_before;
  const Eigen::MatrixXd& residual_after;
  const RankOneFactor& factor;
  double sigma = 0;
  std::span<const double> weights;
};

using DensePairSolver =
    std::function<SingularPair(const Eigen::MatrixXd&, const PowerConfig&, int)>;

struct SensingHooks {
  DensePairSolver pair_solver;
  std::function<void(const SensingStepInfo&)> on_iteration;
};

// Rank-one pursuit on the lifted residual R_0 = lift(b): per iteration the
// top singular pair of the dense residual is pursued and all weights refit
// by least squares over the lifted basis matrices lift(apply(M_i)).
PursuitResult r1mp4ms(const SensingOperator& op, const Eigen::VectorXd& b,
                      const SolverConfig& cfg, const SensingHooks& hooks = {});

}  // namespace r1mp

#endif  // R1MP_SENSING_HPP
