#ifndef R1MP_TYPES_HPP
#define R1MP_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace r1mp {

// Malformed or inconsistent input data (files, triplets, images).
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular systems, rank deficiency, cap violations.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an operation that needs a nonzero residual sees an all-zero
// one. Pursuit loops treat this as a successful stop, not a failure.
class zero_residual_error : public numeric_error {
 public:
  zero_residual_error() : numeric_error("zero residual") {}
};

// Basis became numerically dependent and the ridge fallback could not
// recover. Pursuit loops stop and keep the model built so far.
class degenerate_basis_error : public numeric_error {
 public:
  degenerate_basis_error() : numeric_error("degenerate basis") {}
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Coordinate-format view of the observed entries of a partially known
// matrix. Entries are unique and stored sorted row-major; that fixed order
// defines the vectorization shared by every mask-aligned value vector in
// the library. Immutable after construction and safe for concurrent reads.
class ObservedMatrix {
 public:
  ObservedMatrix(int n_rows, int n_cols, std::vector<Triplet> entries);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  std::size_t n_observed() const { return values_.size(); }

  std::span<const int> rows() const { return rows_; }
  std::span<const int> cols() const { return cols_; }
  std::span<const double> values() const { return values_; }

  // CSR-style offsets into the entry arrays, size n_rows()+1.
  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  // Column-major traversal: col_ptr()[j]..col_ptr()[j+1] index into
  // csc_perm(), which permutes entry indices into (col, row) order.
  std::span<const std::size_t> col_ptr() const { return col_ptr_; }
  std::span<const std::uint32_t> csc_perm() const { return csc_perm_; }

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<int> rows_;
  std::vector<int> cols_;
  std::vector<double> values_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::uint32_t> csc_perm_;
};

// One unit-Frobenius-norm rank-one matrix u v^T held as its two unit
// vectors. Construction enforces unit Euclidean norm to 1e-12.
struct RankOneFactor {
  std::vector<double> u;
  std::vector<double> v;

  RankOneFactor() = default;
  RankOneFactor(std::vector<double> u_in, std::vector<double> v_in);
};

// Ordered list of rank-one factors with their weight vector; the low-rank
// estimate X = sum_i weights[i] * u_i v_i^T.
class FactorModel {
 public:
  FactorModel(int n_rows, int n_cols) : n_rows_(n_rows), n_cols_(n_cols) {}

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  int rank() const { return static_cast<int>(factors_.size()); }

  const std::vector<RankOneFactor>& factors() const { return factors_; }
  std::span<const double> weights() const { return weights_; }

  void append(RankOneFactor factor, double weight);
  void set_weights(std::span<const double> weights);
  void scale_weights(double alpha);

  double predict_one(int row, int col) const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<RankOneFactor> factors_;
  std::vector<double> weights_;
};

}  // namespace r1mp

#endif  // R1MP_TYPES_HPP
