#include "r1mp/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace r1mp {

double rmse(std::span<const double> predictions,
            std::span<const double> truth) {
  if (predictions.empty())
    throw std::invalid_argument("rmse: empty input");
  if (predictions.size() != truth.size())
    throw std::invalid_argument("rmse: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - truth[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(predictions.size()));
}

double psnr(std::span<const double> reconstruction,
            const GrayImage& reference) {
  const std::size_t n = static_cast<std::size_t>(reference.width) *
                        static_cast<std::size_t>(reference.height);
  if (n == 0 || reconstruction.size() != n ||
      reference.pixels.size() != n)
    throw std::invalid_argument("psnr: dimension mismatch");
  double mse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = reconstruction[i] - reference.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(n);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

ContractionSummary contraction_ratios(const PursuitTrace& trace) {
  // Residual norm samples: |R_1| .. |R_K| from the records, then the
  // final |R_{K+1}|.
  std::vector<double> norms;
  norms.reserve(trace.records.size() + 1);
  for (const IterationRecord& rec : trace.records)
    norms.push_back(rec.residual_norm);
  norms.push_back(trace.final_residual_norm);
  if (norms.size() < 2)
    throw std::invalid_argument("contraction_ratios: need at least 2 samples");

  ContractionSummary out;
  out.ratios.reserve(norms.size() - 1);
  for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
    const double r = norms[i] > 0.0 ? norms[i + 1] / norms[i] : 0.0;
    out.ratios.push_back(r);
    out.max_ratio = std::max(out.max_ratio, r);
  }
  return out;
}

double contraction_bound(int n_rows, int n_cols, double q) {
  if (n_rows < 1 || n_cols < 1)
    throw std::invalid_argument("contraction_bound: dims must be positive");
  if (q <= 0.0 || q > 1.0)
    throw std::invalid_argument("contraction_bound: q must be in (0, 1]");
  const double mn = static_cast<double>(std::min(n_rows, n_cols));
  return std::sqrt(1.0 - q * q / mn);
}

}  // namespace r1mp
