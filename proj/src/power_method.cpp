#include "r1mp/power_method.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "r1mp/detail/rng.hpp"
#include "r1mp/omega_kernels.hpp"

namespace r1mp {

namespace {

void check_config(const PowerConfig& cfg) {
  if (cfg.max_iters < 1)
    throw std::invalid_argument("PowerConfig: max_iters must be >= 1");
  if (cfg.rel_tol < 0.0 || cfg.rel_tol >= 1.0)
    throw std::invalid_argument("PowerConfig: rel_tol must be in [0, 1)");
}

struct SparseOp {
  const ObservedMatrix& obs;
  std::span<const double> values;
  int n_rows() const { return obs.n_rows(); }
  int n_cols() const { return obs.n_cols(); }
  void multiply(std::span<const double> v, std::span<double> u) const {
    kernels::right_multiply(obs, values, v, u);
  }
  void multiply_transpose(std::span<const double> u,
                          std::span<double> v) const {
    kernels::left_multiply(obs, values, u, v);
  }
};

struct DenseOp {
  const Eigen::MatrixXd& m;
  int n_rows() const { return static_cast<int>(m.rows()); }
  int n_cols() const { return static_cast<int>(m.cols()); }
  void multiply(std::span<const double> v, std::span<double> u) const {
    Eigen::Map<Eigen::VectorXd>(u.data(), m.rows()) =
        m * Eigen::Map<const Eigen::VectorXd>(v.data(), m.cols());
  }
  void multiply_transpose(std::span<const double> u,
                          std::span<double> v) const {
    Eigen::Map<Eigen::VectorXd>(v.data(), m.cols()) =
        m.transpose() * Eigen::Map<const Eigen::VectorXd>(u.data(), m.rows());
  }
};

void draw_unit_vector(std::mt19937_64& gen, std::vector<double>& v) {
  double norm = 0.0;
  do {
    for (double& x : v) x = detail::uniform_symmetric(gen);
    norm = kernels::norm_omega(v);
  } while (norm == 0.0);
  for (double& x : v) x /= norm;
}

void apply_sign_convention(std::vector<double>& u, std::vector<double>& v) {
  for (double x : u) {
    if (x != 0.0) {
      if (x < 0.0) {
        for (double& ui : u) ui = -ui;
        for (double& vi : v) vi = -vi;
      }
      return;
    }
  }
}

template <class Op>
SingularPair power_iterate(const Op& op, const PowerConfig& cfg) {
  check_config(cfg);
  if (op.n_rows() < 1 || op.n_cols() < 1)
    throw std::invalid_argument("top_singular_pair: dims must be >= 1");

  std::mt19937_64 gen(cfg.seed);
  std::vector<double> v(op.n_cols());
  std::vector<double> u(op.n_rows());
  std::vector<double> z(op.n_cols());
  draw_unit_vector(gen, v);

  SingularPair out;
  double sigma_prev = -1.0;
  int restarts = 0;
  int t = 0;
  while (t < cfg.max_iters) {
    ++t;
    op.multiply(v, u);
    const double nu = kernels::norm_omega(u);
    if (nu == 0.0) {
      // The start vector landed in the null space; redraw.
      if (++restarts > 4) throw numeric_error("power method: Rv vanished");
      draw_unit_vector(gen, v);
      --t;
      continue;
    }
    for (double& x : u) x /= nu;

    op.multiply_transpose(u, z);
    const double nv = kernels::norm_omega(z);
    if (nv == 0.0) {
      if (++restarts > 4) throw numeric_error("power method: R^T u vanished");
      draw_unit_vector(gen, v);
      --t;
      continue;
    }
    for (std::size_t j = 0; j < z.size(); ++j) v[j] = z[j] / nv;

    const double sigma = nv;  // equals u^T R v for the updated v
    if (cfg.keep_history) out.sigma_history.push_back(sigma);
    if (sigma_prev >= 0.0 &&
        std::abs(sigma - sigma_prev) <= cfg.rel_tol * sigma) {
      out.converged = true;
      sigma_prev = sigma;
      break;
    }
    sigma_prev = sigma;
  }

  out.u = std::move(u);
  out.v = std::move(v);
  out.sigma = sigma_prev;
  out.iterations = t;
  apply_sign_convention(out.u, out.v);
  return out;
}

}  // namespace

SingularPair top_singular_pair(const ObservedMatrix& obs,
                               std::span<const double> values,
                               const PowerConfig& cfg) {
  if (values.size() != obs.n_observed())
    throw std::invalid_argument("top_singular_pair: length mismatch");
  if (std::all_of(values.begin(), values.end(),
                  [](double x) { return x == 0.0; }))
    throw zero_residual_error();
  return power_iterate(SparseOp{obs, values}, cfg);
}

SingularPair top_singular_pair(const Eigen::MatrixXd& matrix,
                               const PowerConfig& cfg) {
  if (matrix.size() == 0 || matrix.isZero(0.0)) throw zero_residual_error();
  return power_iterate(DenseOp{matrix}, cfg);
}

}  // namespace r1mp
