#ifndef R1MP_POWER_METHOD_HPP
#define R1MP_POWER_METHOD_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "r1mp/types.hpp"

namespace r1mp {

struct PowerConfig {
  int max_iters = 30;
  double rel_tol = 1e-8;
  std::uint64_t seed = 0;
  // When set, SingularPair.sigma_history records the estimate per sweep.
  bool keep_history = false;
};

struct SingularPair {
  std::vector<double> u;
  std::vector<double> v;
  double sigma = 0.0;
  int iterations = 0;
  // False when max_iters was hit before the relative-change test fired;
  // the best iterate is still returned.
  bool converged = false;
  std::vector<double> sigma_history;
};

// Top singular pair of the sparse matrix holding `values` on the mask of
// `obs`, by alternating power iteration seeded from cfg.seed:
//   u <- Rv/|Rv|, v <- R^T u/|R^T u|, sigma <- u^T R v,
// stopping when |sigma_t - sigma_{t-1}| <= rel_tol * sigma_t or at
// max_iters. Sign convention: the first nonzero component of u is
// non-negative (u and v flip jointly). Throws zero_residual_error when all
// values are zero.
SingularPair top_singular_pair(const ObservedMatrix& obs,
                               std::span<const double> values,
                               const PowerConfig& cfg);

// Same iteration on a dense matrix (matrix-sensing residuals).
SingularPair top_singular_pair(const Eigen::MatrixXd& matrix,
                               const PowerConfig& cfg);

}  // namespace r1mp

#endif  // R1MP_POWER_METHOD_HPP
