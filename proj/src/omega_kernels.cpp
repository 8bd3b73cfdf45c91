#include "r1mp/omega_kernels.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace r1mp::kernels {

namespace {

// Fixed chunking keeps reductions independent of the thread count: chunk
// sums are computed in parallel but combined in index order.
constexpr std::size_t kChunk = 4096;
constexpr std::ptrdiff_t kParallelThreshold = 8192;

double chunked_dot(const double* a, const double* b, std::size_t n) {
  if (n <= kChunk) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += a[t] * b[t];
    return s;
  }
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(n_chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    double s = 0.0;
    for (std::size_t t = lo; t < hi; ++t) s += a[t] * b[t];
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void check_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("omega kernels: length mismatch");
}

}  // namespace

double inner_omega(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  return chunked_dot(a.data(), b.data(), a.size());
}

double norm_omega(std::span<const double> a) {
  return std::sqrt(chunked_dot(a.data(), a.data(), a.size()));
}

std::vector<double> evaluate_on_omega(const FactorModel& model,
                                      const ObservedMatrix& obs) {
  if (model.n_rows() != obs.n_rows() || model.n_cols() != obs.n_cols())
    throw std::invalid_argument("evaluate_on_omega: dimension mismatch");
  const std::ptrdiff_t nnz = static_cast<std::ptrdiff_t>(obs.n_observed());
  const auto rows = obs.rows();
  const auto cols = obs.cols();
  const auto& factors = model.factors();
  const auto weights = model.weights();
  const std::size_t k = factors.size();

  std::vector<double> out(nnz, 0.0);
#pragma omp parallel for schedule(static) if (nnz >= kParallelThreshold)
  for (std::ptrdiff_t t = 0; t < nnz; ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      s += weights[i] * factors[i].u[rows[t]] * factors[i].v[cols[t]];
    out[t] = s;
  }
  return out;
}

std::vector<double> residual(const ObservedMatrix& obs,
                             const FactorModel& model) {
  std::vector<double> r = evaluate_on_omega(model, obs);
  const auto y = obs.values();
  const std::ptrdiff_t nnz = static_cast<std::ptrdiff_t>(r.size());
#pragma omp parallel for schedule(static) if (nnz >= kParallelThreshold)
  for (std::ptrdiff_t t = 0; t < nnz; ++t) r[t] = y[t] - r[t];
  return r;
}

std::vector<double> predict(const FactorModel& model,
                            std::span<const std::pair<int, int>> queries) {
  for (const auto& [row, col] : queries)
    if (row < 0 || row >= model.n_rows() || col < 0 || col >= model.n_cols())
      throw std::out_of_range("predict: query out of bounds");
  std::vector<double> out(queries.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t t = 0; t < n; ++t)
    out[t] = model.predict_one(queries[t].first, queries[t].second);
  return out;
}

void right_multiply(const ObservedMatrix& obs, std::span<const double> values,
                    std::span<const double> v, std::span<double> u_out) {
  if (values.size() != obs.n_observed() ||
      v.size() != static_cast<std::size_t>(obs.n_cols()) ||
      u_out.size() != static_cast<std::size_t>(obs.n_rows()))
    throw std::invalid_argument("right_multiply: length mismatch");
  const auto row_ptr = obs.row_ptr();
  const auto cols = obs.cols();
  const int n_rows = obs.n_rows();
#pragma omp parallel for schedule(static) \
    if (static_cast<std::ptrdiff_t>(obs.n_observed()) >= kParallelThreshold)
  for (int i = 0; i < n_rows; ++i) {
    double s = 0.0;
    for (std::size_t t = row_ptr[i]; t < row_ptr[i + 1]; ++t)
      s += values[t] * v[cols[t]];
    u_out[i] = s;
  }
}

void left_multiply(const ObservedMatrix& obs, std::span<const double> values,
                   std::span<const double> u, std::span<double> v_out) {
  if (values.size() != obs.n_observed() ||
      u.size() != static_cast<std::size_t>(obs.n_rows()) ||
      v_out.size() != static_cast<std::size_t>(obs.n_cols()))
    throw std::invalid_argument("left_multiply: length mismatch");
  const auto col_ptr = obs.col_ptr();
  const auto perm = obs.csc_perm();
  const auto rows = obs.rows();
  const int n_cols = obs.n_cols();
#pragma omp parallel for schedule(static) \
    if (static_cast<std::ptrdiff_t>(obs.n_observed()) >= kParallelThreshold)
  for (int j = 0; j < n_cols; ++j) {
    double s = 0.0;
    for (std::size_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
      const std::uint32_t e = perm[t];
      s += values[e] * u[rows[e]];
    }
    v_out[j] = s;
  }
}

namespace serial {

double inner_omega(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

double norm_omega(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

std::vector<double> evaluate_on_omega(const FactorModel& model,
                                      const ObservedMatrix& obs) {
  if (model.n_rows() != obs.n_rows() || model.n_cols() != obs.n_cols())
    throw std::invalid_argument("evaluate_on_omega: dimension mismatch");
  const std::size_t nnz = obs.n_observed();
  const auto rows = obs.rows();
  const auto cols = obs.cols();
  const auto& factors = model.factors();
  const auto weights = model.weights();

  std::vector<double> out(nnz, 0.0);
  for (std::size_t t = 0; t < nnz; ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i)
      s += weights[i] * factors[i].u[rows[t]] * factors[i].v[cols[t]];
    out[t] = s;
  }
  return out;
}

void right_multiply(const ObservedMatrix& obs, std::span<const double> values,
                    std::span<const double> v, std::span<double> u_out) {
  const auto row_ptr = obs.row_ptr();
  const auto cols = obs.cols();
  for (int i = 0; i < obs.n_rows(); ++i) {
    double s = 0.0;
    for (std::size_t t = row_ptr[i]; t < row_ptr[i + 1]; ++t)
      s += values[t] * v[cols[t]];
    u_out[i] = s;
  }
}

void left_multiply(const ObservedMatrix& obs, std::span<const double> values,
                   std::span<const double> u, std::span<double> v_out) {
  const auto col_ptr = obs.col_ptr();
  const auto perm = obs.csc_perm();
  const auto rows = obs.rows();
  for (int j = 0; j < obs.n_cols(); ++j) {
    double s = 0.0;
    for (std::size_t t = col_ptr[j]; t < col_ptr[j + 1]; ++t) {
      const std::uint32_t e = perm[t];
      s += values[e] * u[rows[e]];
    }
    v_out[j] = s;
  }
}

}  // namespace serial

}  // namespace r1mp::kernels
