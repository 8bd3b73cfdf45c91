// Test-only dense oracles. Everything here recomputes quantities by the
// most direct dense route available, independently of the library's sparse
// code paths.
#ifndef R1MP_TESTS_ORACLES_HPP
#define R1MP_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <random>
#include <set>
#include <vector>

#include "r1mp/detail/rng.hpp"
#include "r1mp/power_method.hpp"
#include "r1mp/types.hpp"

namespace oracles {

// Dense matrix with the mask-aligned `values` placed on the observed cells.
inline Eigen::MatrixXd dense_from_mask(const r1mp::ObservedMatrix& obs,
                                       std::span<const double> values) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(obs.n_rows(), obs.n_cols());
  for (std::size_t t = 0; t < obs.n_observed(); ++t)
    m(obs.rows()[t], obs.cols()[t]) = values[t];
  return m;
}

inline Eigen::MatrixXd dense_from_mask(const r1mp::ObservedMatrix& obs) {
  return dense_from_mask(obs, obs.values());
}

// Dense reconstruction sum_i theta_i u_i v_i^T.
inline Eigen::MatrixXd dense_from_model(const r1mp::FactorModel& model) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(model.n_rows(), model.n_cols());
  for (int i = 0; i < model.rank(); ++i) {
    const auto& f = model.factors()[i];
    const Eigen::Map<const Eigen::VectorXd> u(f.u.data(), model.n_rows());
    const Eigen::Map<const Eigen::VectorXd> v(f.v.data(), model.n_cols());
    m += model.weights()[i] * u * v.transpose();
  }
  return m;
}

// Masked Frobenius inner product trace(A^T B) over the observed cells.
inline double dense_masked_inner(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const r1mp::ObservedMatrix& obs) {
  double s = 0.0;
  for (std::size_t t = 0; t < obs.n_observed(); ++t)
    s += a(obs.rows()[t], obs.cols()[t]) * b(obs.rows()[t], obs.cols()[t]);
  return s;
}

inline double dense_sigma1(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

inline std::vector<double> dense_singular_values(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  return {s.data(), s.data() + s.size()};
}

// Exact top pair with the library's sign convention, ready to plug into
// SolverHooks::pair_solver.
inline r1mp::SingularPair dense_top_pair(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd u = svd.matrixU().col(0);
  Eigen::VectorXd v = svd.matrixV().col(0);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) != 0.0) {
      if (u(i) < 0.0) {
        u = -u;
        v = -v;
      }
      break;
    }
  }
  r1mp::SingularPair pair;
  pair.u.assign(u.data(), u.data() + u.size());
  pair.v.assign(v.data(), v.data() + v.size());
  pair.sigma = svd.singularValues()(0);
  pair.iterations = 0;
  pair.converged = true;
  return pair;
}

// Least squares min |[cols] theta - y| by column-pivoted QR.
inline Eigen::VectorXd dense_least_squares(
    const std::vector<std::vector<double>>& columns,
    std::span<const double> y) {
  const Eigen::Index n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd a(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    a.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(columns[j].data(), n);
  const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), n);
  return a.colPivHouseholderQr().solve(rhs);
}

// --- seeded generators -----------------------------------------------

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols,
                                       std::mt19937_64& gen) {
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = r1mp::detail::normal(gen);
  return m;
}

// Low-rank product of two Gaussian factors.
inline Eigen::MatrixXd gaussian_product(int rows, int cols, int rank,
                                        std::mt19937_64& gen) {
  return gaussian_matrix(rows, rank, gen) *
         gaussian_matrix(cols, rank, gen).transpose();
}

// Random mask of `count` distinct cells over a dense matrix.
inline r1mp::ObservedMatrix masked_observations(const Eigen::MatrixXd& dense,
                                                std::size_t count,
                                                std::mt19937_64& gen) {
  const std::size_t n =
      static_cast<std::size_t>(dense.rows()) * static_cast<std::size_t>(dense.cols());
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count && i + 1 < n; ++i)
    std::swap(idx[i], idx[i + r1mp::detail::uniform_index(gen, n - i)]);
  std::vector<r1mp::Triplet> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int row = static_cast<int>(idx[i] % dense.rows());
    const int col = static_cast<int>(idx[i] / dense.rows());
    entries.push_back({row, col, dense(row, col)});
  }
  return r1mp::ObservedMatrix(static_cast<int>(dense.rows()),
                              static_cast<int>(dense.cols()),
                              std::move(entries));
}

// Fully observed view of a dense matrix.
inline r1mp::ObservedMatrix full_observations(const Eigen::MatrixXd& dense) {
  std::vector<r1mp::Triplet> entries;
  entries.reserve(static_cast<std::size_t>(dense.size()));
  for (int i = 0; i < dense.rows(); ++i)
    for (int j = 0; j < dense.cols(); ++j)
      entries.push_back({i, j, dense(i, j)});
  return r1mp::ObservedMatrix(static_cast<int>(dense.rows()),
                              static_cast<int>(dense.cols()),
                              std::move(entries));
}

inline std::vector<double> unit_vector(int n, std::mt19937_64& gen) {
  std::vector<double> v(n);
  double norm = 0.0;
  for (double& x : v) {
    x = r1mp::detail::normal(gen);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace oracles

#endif  // R1MP_TESTS_ORACLES_HPP
