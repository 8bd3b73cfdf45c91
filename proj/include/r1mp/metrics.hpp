#ifndef R1MP_METRICS_HPP
#define R1MP_METRICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "r1mp/dataio.hpp"
#include "r1mp/solvers.hpp"

namespace r1mp {

// sqrt(mean((p - t)^2)); throws std::invalid_argument on empty or
// mismatched inputs.
double rmse(std::span<const double> predictions, std::span<const double> truth);

// 10*log10(255^2 / MSE) over all pixels of the reference; returns
// +infinity when MSE is zero.
double psnr(std::span<const double> reconstruction, const GrayImage& reference);

struct ContractionSummary {
  std::vector<double> ratios;  // |R_{k+1}| / |R_k|
  double max_ratio = 0;
};

// Per-step residual ratios of a pursuit trace; the final residual counts
// as the last sample. Requires at least two residual samples.
ContractionSummary contraction_ratios(const PursuitTrace& trace);

// sqrt(1 - q^2 / min(m, n)), the per-step bound with pair accuracy q.
double contraction_bound(int n_rows, int n_cols, double q = 1.0);

struct EvalReport {
  double rmse = 0;
  std::optional<double> rmse_clipped;
  std::optional<double> psnr;  // +infinity encoded as "inf" when serialized
  std::vector<double> contraction;
  double max_contraction = 0;
  double bound = 0;  // sqrt(1 - 1/min(m, n))
};

}  // namespace r1mp

#endif  // R1MP_METRICS_HPP
