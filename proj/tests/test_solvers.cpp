#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "r1mp/omega_kernels.hpp"
#include "r1mp/solvers.hpp"

using namespace r1mp;

namespace {

std::vector<double> random_values(std::size_t n, std::mt19937_64& gen) {
  std::vector<double> v(n);
  for (double& x : v) x = detail::normal(gen);
  return v;
}

SolverConfig tight_config(int rank) {
  SolverConfig cfg;
  cfg.rank_budget = rank;
  cfg.power.max_iters = 5000;
  cfg.power.rel_tol = 1e-12;
  return cfg;
}

// Hook substituting the exact dense-SVD pair for the power method.
SolverHooks oracle_hooks() {
  SolverHooks hooks;
  hooks.pair_solver = [](const ObservedMatrix& obs,
                         std::span<const double> residual, const PowerConfig&,
                         int) {
    return oracles::dense_top_pair(oracles::dense_from_mask(obs, residual));
  };
  return hooks;
}

}  // namespace

TEST_CASE("solve_weights_full k=1 is the 1-D least squares") {
  std::mt19937_64 gen(31);
  std::vector<double> m = random_values(10, gen);
  std::vector<double> y = random_values(10, gen);
  GramState state;
  Eigen::VectorXd theta = state.solve_weights_full(m, y);
  const double expected =
      kernels::inner_omega(m, y) / kernels::inner_omega(m, m);
  REQUIRE(theta.size() == 1);
  CHECK(theta(0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("solve_weights_full with orthogonal columns") {
  std::vector<double> m1{1.0, 0.0, 0.0, 0.0};
  std::vector<double> m2{0.0, 2.0, 0.0, 0.0};
  std::vector<double> m3{0.0, 0.0, 0.0, 3.0};
  std::vector<double> y{4.0, 6.0, 9.0, 12.0};
  GramState state;
  state.solve_weights_full(m1, y);
  state.solve_weights_full(m2, y);
  Eigen::VectorXd theta = state.solve_weights_full(m3, y);
  CHECK(theta(0) == doctest::Approx(4.0));
  CHECK(theta(1) == doctest::Approx(3.0));
  CHECK(theta(2) == doctest::Approx(4.0));
}

TEST_CASE("solve_weights_full matches the dense normal-equations oracle") {
  std::mt19937_64 gen(32);
  std::vector<std::vector<double>> columns;
  std::vector<double> y = random_values(10, gen);
  GramState state;
  Eigen::VectorXd theta;
  for (int k = 0; k < 3; ++k) {
    columns.push_back(random_values(10, gen));
    theta = state.solve_weights_full(columns.back(), y);
  }
  Eigen::VectorXd expected = oracles::dense_least_squares(columns, y);
  for (int i = 0; i < 3; ++i)
    CHECK(theta(i) == doctest::Approx(expected(i)).epsilon(1e-9));
}

TEST_CASE("incremental inverse stays consistent up to k=25") {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 3; ++trial) {
    GramState state;
    std::vector<double> y = random_values(400, gen);
    for (int k = 1; k <= 25; ++k) {
      // Columns drawn like mask values of unit rank-one factors: bounded
      // entries, no special structure.
      std::vector<double> col = random_values(400, gen);
      for (double& x : col) x *= 0.05;
      state.solve_weights_full(col, y);

      Eigen::MatrixXd gram = state.explicit_gram();
      Eigen::MatrixXd prod = state.inverse_gram() * gram;
      const double err =
          (prod - Eigen::MatrixXd::Identity(k, k)).norm() / std::sqrt(k);
      CHECK(err <= 1e-6);
      CHECK((state.inverse_gram() - state.inverse_gram().transpose()).norm() <=
            1e-10 * state.inverse_gram().norm());
    }
  }
}

TEST_CASE("numerically dependent column falls back to the ridge solve") {
  std::mt19937_64 gen(34);
  std::vector<double> m1 = random_values(20, gen);
  std::vector<double> y = random_values(20, gen);
  GramState state;
  state.solve_weights_full(m1, y);
  // Same column again: Schur complement is zero, ridge path engages.
  Eigen::VectorXd theta = state.solve_weights_full(m1, y);
  REQUIRE(theta.size() == 2);
  CHECK(std::isfinite(theta(0)));
  CHECK(std::isfinite(theta(1)));
  // The ridge solution still fits y on the shared direction.
  const double fit = theta(0) + theta(1);
  const double expected =
      kernels::inner_omega(m1, y) / kernels::inner_omega(m1, m1);
  CHECK(fit == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("solve_weights_economic matches a dense 2-column solve") {
  std::mt19937_64 gen(35);
  std::vector<double> x = random_values(6, gen);
  std::vector<double> m = random_values(6, gen);
  std::vector<double> y = random_values(6, gen);
  const auto [a1, a2] = solve_weights_economic(x, m, y);
  Eigen::VectorXd expected = oracles::dense_least_squares({x, m}, y);
  CHECK(a1 == doctest::Approx(expected(0)).epsilon(1e-10));
  CHECK(a2 == doctest::Approx(expected(1)).epsilon(1e-10));
}

TEST_CASE("or1mp fits an exact rank-1 matrix in one iteration") {
  std::mt19937_64 gen(36);
  auto u = oracles::unit_vector(8, gen);
  auto v = oracles::unit_vector(6, gen);
  Eigen::MatrixXd dense = 2.0 *
                          Eigen::Map<const Eigen::VectorXd>(u.data(), 8) *
                          Eigen::Map<const Eigen::VectorXd>(v.data(), 6).transpose();
  ObservedMatrix obs = oracles::full_observations(dense);

  auto [model, trace] = or1mp(obs, tight_config(5));
  CHECK(model.rank() == 1);
  CHECK(model.weights()[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(trace.final_residual_norm <= 1e-10 * trace.observed_norm);
  CHECK(trace.stop_reason == StopReason::zero_residual);
}

TEST_CASE("eor1mp fits an exact rank-1 matrix in one iteration") {
  std::mt19937_64 gen(37);
  auto u = oracles::unit_vector(7, gen);
  auto v = oracles::unit_vector(9, gen);
  Eigen::MatrixXd dense = 2.0 *
                          Eigen::Map<const Eigen::VectorXd>(u.data(), 7) *
                          Eigen::Map<const Eigen::VectorXd>(v.data(), 9).transpose();
  ObservedMatrix obs = oracles::full_observations(dense);

  auto [model, trace] = eor1mp(obs, tight_config(5));
  CHECK(model.rank() == 1);
  CHECK(model.weights()[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(trace.final_residual_norm <= 1e-10 * trace.observed_norm);
}

TEST_CASE("fr1mp trivial cases") {
  std::mt19937_64 gen(38);
  auto u = oracles::unit_vector(5, gen);
  auto v = oracles::unit_vector(5, gen);
  Eigen::MatrixXd dense = 2.0 *
                          Eigen::Map<const Eigen::VectorXd>(u.data(), 5) *
                          Eigen::Map<const Eigen::VectorXd>(v.data(), 5).transpose();
  auto [model, trace] = fr1mp(oracles::full_observations(dense), tight_config(5));
  CHECK(model.rank() == 1);
  CHECK(model.weights()[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(trace.final_residual_norm <= 1e-10 * trace.observed_norm);

  // Single observed cell.
  ObservedMatrix one(1, 1, {{0, 0, 4.0}});
  auto [m2, t2] = fr1mp(one, tight_config(3));
  CHECK(m2.rank() == 1);
  CHECK(t2.final_residual_norm <= 1e-12);
}

TEST_CASE("residuals are monotone for all three solvers") {
  std::mt19937_64 gen(39);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd dense = oracles::gaussian_matrix(15, 12, gen);
    ObservedMatrix obs = oracles::masked_observations(dense, 110, gen);
    SolverConfig cfg;
    cfg.rank_budget = 8;
    cfg.power.seed = trial;
    for (auto solver : {or1mp, eor1mp, fr1mp}) {
      auto [model, trace] = solver(obs, cfg, {});
      std::vector<double> norms;
      for (const auto& rec : trace.records) norms.push_back(rec.residual_norm);
      norms.push_back(trace.final_residual_norm);
      for (std::size_t i = 1; i < norms.size(); ++i)
        CHECK(norms[i] <= norms[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("or1mp keeps the residual orthogonal to every pursued basis") {
  std::mt19937_64 gen(40);
  Eigen::MatrixXd dense = oracles::gaussian_matrix(12, 10, gen);
  ObservedMatrix obs = oracles::masked_observations(dense, 80, gen);
  const double norm_y = kernels::norm_omega(obs.values());

  std::vector<std::vector<double>> columns;
  SolverHooks hooks;
  hooks.on_iteration = [&](const PursuitStepInfo& step) {
    columns.emplace_back(step.new_column.begin(), step.new_column.end());
    for (const auto& col : columns)
      CHECK(std::abs(kernels::inner_omega(step.residual_after, col)) <=
            1e-8 * norm_y);
  };
  SolverConfig cfg;
  cfg.rank_budget = 8;
  or1mp(obs, cfg, hooks);
  CHECK(columns.size() == 8);
}

TEST_CASE("eor1mp orthogonality and energy identity per iteration") {
  std::mt19937_64 gen(41);
  Eigen::MatrixXd dense = oracles::gaussian_matrix(14, 11, gen);
  ObservedMatrix obs = oracles::masked_observations(dense, 90, gen);
  const auto y = obs.values();
  const double norm_y = kernels::norm_omega(y);
  const double norm_y_sq = norm_y * norm_y;

  SolverHooks hooks;
  hooks.on_iteration = [&](const PursuitStepInfo& step) {
    const std::size_t n = y.size();
    std::vector<double> x_prev(n), x_now(n);
    for (std::size_t t = 0; t < n; ++t) {
      x_prev[t] = y[t] - step.residual_before[t];
      x_now[t] = y[t] - step.residual_after[t];
    }
    const double norm_x_prev = kernels::norm_omega(x_prev);
    const double bound = 1e-8 * norm_y * std::max(1.0, norm_x_prev);
    CHECK(std::abs(kernels::inner_omega(step.residual_after, x_prev)) <= bound);
    CHECK(std::abs(kernels::inner_omega(step.residual_after, step.new_column)) <=
          bound);

    // |R_{k+1}|^2 = |Y|^2 - |X_k|^2
    const double lhs = std::pow(kernels::norm_omega(step.residual_after), 2);
    const double rhs = norm_y_sq - std::pow(kernels::norm_omega(x_now), 2);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  };
  SolverConfig cfg;
  cfg.rank_budget = 10;
  eor1mp(obs, cfg, hooks);
}

TEST_CASE("per-step contraction holds with the exact pair") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::MatrixXd dense = oracles::gaussian_matrix(20, 15, gen);
    ObservedMatrix obs = oracles::masked_observations(dense, 180, gen);
    const double factor = 1.0 - 1.0 / 15.0;
    SolverHooks hooks = oracle_hooks();
    SolverConfig cfg;
    cfg.rank_budget = 6;
    for (auto solver : {or1mp, eor1mp}) {
      auto [model, trace] = solver(obs, cfg, hooks);
      std::vector<double> norms;
      for (const auto& rec : trace.records) norms.push_back(rec.residual_norm);
      norms.push_back(trace.final_residual_norm);
      for (std::size_t i = 1; i < norms.size(); ++i)
        CHECK(norms[i] * norms[i] <=
              factor * norms[i - 1] * norms[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("stopping rules") {
  std::mt19937_64 gen(43);
  Eigen::MatrixXd dense = oracles::gaussian_matrix(10, 10, gen);
  ObservedMatrix obs = oracles::masked_observations(dense, 60, gen);

  SolverConfig by_rank;
  by_rank.rank_budget = 3;
  auto r1 = or1mp(obs, by_rank);
  CHECK(r1.model.rank() == 3);
  CHECK(r1.trace.stop_reason == StopReason::rank_budget);
  CHECK(r1.trace.records.size() == 3);

  SolverConfig by_eps;
  by_eps.rank_budget = 0;
  by_eps.eps = 0.5;
  auto r2 = or1mp(obs, by_eps);
  CHECK(r2.trace.stop_reason == StopReason::eps_tolerance);
  CHECK(r2.trace.final_residual_norm <= 0.5 * r2.trace.observed_norm);

  SolverConfig invalid;
  invalid.rank_budget = 0;
  invalid.eps = 0.0;
  CHECK_THROWS_AS(or1mp(obs, invalid), std::invalid_argument);
}

TEST_CASE("same seed reproduces the identical model and trace") {
  std::mt19937_64 gen(44);
  Eigen::MatrixXd dense = oracles::gaussian_matrix(12, 12, gen);
  ObservedMatrix obs = oracles::masked_observations(dense, 70, gen);
  SolverConfig cfg;
  cfg.rank_budget = 5;
  cfg.power.seed = 777;

  auto a = eor1mp(obs, cfg);
  auto b = eor1mp(obs, cfg);
  REQUIRE(a.model.rank() == b.model.rank());
  for (int i = 0; i < a.model.rank(); ++i) {
    CHECK(a.model.weights()[i] == b.model.weights()[i]);
    CHECK(a.model.factors()[i].u == b.model.factors()[i].u);
    CHECK(a.model.factors()[i].v == b.model.factors()[i].v);
  }
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].residual_norm == b.trace.records[i].residual_norm);
    CHECK(a.trace.records[i].sigma == b.trace.records[i].sigma);
  }
}

TEST_CASE("trace diagnostic stays under the rank bound") {
  std::mt19937_64 gen(45);
  Eigen::MatrixXd dense = oracles::gaussian_matrix(18, 14, gen);
  ObservedMatrix obs = oracles::masked_observations(dense, 150, gen);
  SolverConfig cfg;
  cfg.rank_budget = 8;
  for (auto solver : {or1mp, eor1mp, fr1mp}) {
    auto [model, trace] = solver(obs, cfg, {});
    for (const auto& rec : trace.records)
      CHECK(rec.diag_ratio_sq <= 14.0 * (1.0 + 1e-6));
  }
}
