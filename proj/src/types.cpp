#include "r1mp/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace r1mp {

namespace {

double euclidean_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

}  // namespace

ObservedMatrix::ObservedMatrix(int n_rows, int n_cols,
                               std::vector<Triplet> entries)
    : n_rows_(n_rows), n_cols_(n_cols) {
  if (n_rows < 1 || n_cols < 1)
    throw std::invalid_argument("ObservedMatrix: dims must be positive");
  if (entries.empty())
    throw std::invalid_argument("ObservedMatrix: at least one observation");

  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
      throw data_error("ObservedMatrix: index (" + std::to_string(t.row) +
                       ", " + std::to_string(t.col) + ") out of bounds for " +
                       std::to_string(n_rows) + "x" + std::to_string(n_cols));
  }

  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t t = 1; t < entries.size(); ++t) {
    if (entries[t].row == entries[t - 1].row &&
        entries[t].col == entries[t - 1].col)
      throw data_error("ObservedMatrix: duplicate cell (" +
                       std::to_string(entries[t].row) + ", " +
                       std::to_string(entries[t].col) + ")");
  }

  const std::size_t nnz = entries.size();
  rows_.resize(nnz);
  cols_.resize(nnz);
  values_.resize(nnz);
  for (std::size_t t = 0; t < nnz; ++t) {
    rows_[t] = entries[t].row;
    cols_[t] = entries[t].col;
    values_[t] = entries[t].value;
  }

  row_ptr_.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  for (std::size_t t = 0; t < nnz; ++t) ++row_ptr_[rows_[t] + 1];
  for (int i = 0; i < n_rows; ++i) row_ptr_[i + 1] += row_ptr_[i];

  // Column-ordered permutation of entry indices for transpose products.
  col_ptr_.assign(static_cast<std::size_t>(n_cols) + 1, 0);
  for (std::size_t t = 0; t < nnz; ++t) ++col_ptr_[cols_[t] + 1];
  for (int j = 0; j < n_cols; ++j) col_ptr_[j + 1] += col_ptr_[j];
  csc_perm_.resize(nnz);
  std::vector<std::size_t> next(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t t = 0; t < nnz; ++t)
    csc_perm_[next[cols_[t]]++] = static_cast<std::uint32_t>(t);
}

RankOneFactor::RankOneFactor(std::vector<double> u_in, std::vector<double> v_in)
    : u(std::move(u_in)), v(std::move(v_in)) {
  if (u.empty() || v.empty())
    throw std::invalid_argument("RankOneFactor: empty vector");
  if (std::abs(euclidean_norm(u) - 1.0) > 1e-12 ||
      std::abs(euclidean_norm(v) - 1.0) > 1e-12)
    throw std::invalid_argument("RankOneFactor: vectors must be unit norm");
}

void FactorModel::append(RankOneFactor factor, double weight) {
  if (static_cast<int>(factor.u.size()) != n_rows_ ||
      static_cast<int>(factor.v.size()) != n_cols_)
    throw std::invalid_argument("FactorModel: factor dims mismatch");
  factors_.push_back(std::move(factor));
  weights_.push_back(weight);
}

void FactorModel::set_weights(std::span<const double> weights) {
  if (weights.size() != weights_.size())
    throw std::invalid_argument("FactorModel: weight count mismatch");
  std::copy(weights.begin(), weights.end(), weights_.begin());
}

void FactorModel::scale_weights(double alpha) {
  for (double& w : weights_) w *= alpha;
}

double FactorModel::predict_one(int row, int col) const {
  if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_)
    throw std::out_of_range("FactorModel: query out of bounds");
  double s = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    s += weights_[i] * factors_[i].u[row] * factors_[i].v[col];
  return s;
}

}  // namespace r1mp
