#ifndef R1MP_OMEGA_KERNELS_HPP
#define R1MP_OMEGA_KERNELS_HPP

#include <span>
#include <utility>
#include <vector>

#include "r1mp/types.hpp"

// Mask-restricted kernels. The parallel versions in r1mp::kernels are the
// production path (OpenMP inner loops); r1mp::kernels::serial holds the
// plain reference implementations used by the equivalence tests and the
// kernel benchmark.
//
// Determinism: evaluate_on_omega, residual, right_multiply and
// left_multiply are bit-identical for any thread count (no cross-thread
// reductions). inner_omega/norm_omega accumulate fixed-size chunks and sum
// the chunk totals in order, so they are also thread-count invariant.

namespace r1mp::kernels {

// Dot product of two mask-aligned vectors.
double inner_omega(std::span<const double> a, std::span<const double> b);

// Euclidean norm of a mask-aligned vector.
double norm_omega(std::span<const double> a);

// Values of the model on the observed cells, aligned with obs entries.
// Cost O(rank * n_observed).
std::vector<double> evaluate_on_omega(const FactorModel& model,
                                      const ObservedMatrix& obs);

// obs.values() - evaluate_on_omega(model, obs).
std::vector<double> residual(const ObservedMatrix& obs,
                             const FactorModel& model);

// Model values at arbitrary (row, col) queries.
std::vector<double> predict(const FactorModel& model,
                            std::span<const std::pair<int, int>> queries);

// u = R v where R is the sparse matrix holding `values` on the mask.
void right_multiply(const ObservedMatrix& obs, std::span<const double> values,
                    std::span<const double> v, std::span<double> u_out);

// v = R^T u.
void left_multiply(const ObservedMatrix& obs, std::span<const double> values,
                   std::span<const double> u, std::span<double> v_out);

namespace serial {

double inner_omega(std::span<const double> a, std::span<const double> b);
double norm_omega(std::span<const double> a);
std::vector<double> evaluate_on_omega(const FactorModel& model,
                                      const ObservedMatrix& obs);
void right_multiply(const ObservedMatrix& obs, std::span<const double> values,
                    std::span<const double> v, std::span<double> u_out);
void left_multiply(const ObservedMatrix& obs, std::span<const double> values,
                   std::span<const double> u, std::span<double> v_out);

}  // namespace serial

}  // namespace r1mp::kernels

#endif  // R1MP_OMEGA_KERNELS_HPP
