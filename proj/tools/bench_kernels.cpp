// Benchmark of the OpenMP mask kernels against their serial reference.
//
//   bench_kernels [--rows N] [--cols M] [--entries E] [--factors K]
//                 [--reps R] [--seed S]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "CLI11.hpp"
#include "r1mp/detail/rng.hpp"
#include "r1mp/omega_kernels.hpp"
#include "r1mp/types.hpp"

using namespace r1mp;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(
        best, std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count());
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s,
            double max_rel_diff) {
  std::printf("%-22s %10.3f %10.3f %8.2fx %12.3g\n", name, serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s, max_rel_diff);
}

}  // namespace

int main(int argc, char** argv) {
  int n_rows = 4000, n_cols = 3000, factors = 10, reps = 5;
  long entries = 1000000;
  std::uint64_t seed = 1;

  CLI::App app{"Serial vs OpenMP kernel benchmark"};
  app.add_option("--rows", n_rows);
  app.add_option("--cols", n_cols);
  app.add_option("--entries", entries);
  app.add_option("--factors", factors);
  app.add_option("--reps", reps);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  std::mt19937_64 gen(seed);
  std::vector<Triplet> triplets;
  triplets.reserve(entries);
  {
    // Distinct cells via row-major strides over a shuffled diagonal walk;
    // collisions are discarded by sorting unique below.
    std::vector<std::pair<int, int>> cells;
    cells.reserve(entries);
    while (static_cast<long>(cells.size()) < entries) {
      cells.emplace_back(
          static_cast<int>(detail::uniform_index(gen, n_rows)),
          static_cast<int>(detail::uniform_index(gen, n_cols)));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (const auto& [r, c] : cells)
      triplets.push_back({r, c, detail::normal(gen)});
  }
  ObservedMatrix obs(n_rows, n_cols, triplets);
  const std::size_t nnz = obs.n_observed();

  FactorModel model(n_rows, n_cols);
  for (int i = 0; i < factors; ++i) {
    std::vector<double> u(n_rows), v(n_cols);
    double nu = 0.0, nv = 0.0;
    for (double& x : u) {
      x = detail::normal(gen);
      nu += x * x;
    }
    for (double& x : v) {
      x = detail::normal(gen);
      nv += x * x;
    }
    nu = std::sqrt(nu);
    nv = std::sqrt(nv);
    for (double& x : u) x /= nu;
    for (double& x : v) x /= nv;
    model.append(RankOneFactor(u, v), detail::uniform_symmetric(gen));
  }

  std::vector<double> a(nnz), b(nnz), u(n_rows), vv(n_cols);
  for (double& x : a) x = detail::normal(gen);
  for (double& x : b) x = detail::normal(gen);
  for (double& x : u) x = detail::normal(gen);
  for (double& x : vv) x = detail::normal(gen);

  std::printf("entries=%zu rows=%d cols=%d factors=%d threads=%d reps=%d\n",
              nnz, n_rows, n_cols, factors, omp_get_max_threads(), reps);
  std::printf("%-22s %10s %10s %9s %12s\n", "kernel", "serial_ms", "omp_ms",
              "speedup", "max_rel_diff");

  // inner_omega
  {
    double s_val = 0.0, p_val = 0.0;
    const double ts =
        time_best_of(reps, [&] { s_val = kernels::serial::inner_omega(a, b); });
    const double tp =
        time_best_of(reps, [&] { p_val = kernels::inner_omega(a, b); });
    report("inner_omega", ts, tp, std::abs(s_val - p_val) / std::abs(s_val));
  }

  // evaluate_on_omega
  {
    std::vector<double> s_out, p_out;
    const double ts = time_best_of(
        reps, [&] { s_out = kernels::serial::evaluate_on_omega(model, obs); });
    const double tp = time_best_of(
        reps, [&] { p_out = kernels::evaluate_on_omega(model, obs); });
    double diff = 0.0;
    for (std::size_t t = 0; t < s_out.size(); ++t)
      diff = std::max(diff, std::abs(s_out[t] - p_out[t]) /
                                std::max(1e-300, std::abs(s_out[t])));
    report("evaluate_on_omega", ts, tp, diff);
  }

  // right_multiply
  {
    std::vector<double> s_out(n_rows), p_out(n_rows);
    const double ts = time_best_of(
        reps, [&] { kernels::serial::right_multiply(obs, a, vv, s_out); });
    const double tp =
        time_best_of(reps, [&] { kernels::right_multiply(obs, a, vv, p_out); });
    double diff = 0.0;
    for (int i = 0; i < n_rows; ++i)
      diff = std::max(diff, std::abs(s_out[i] - p_out[i]) /
                                std::max(1e-300, std::abs(s_out[i])));
    report("right_multiply", ts, tp, diff);
  }

  // left_multiply
  {
    std::vector<double> s_out(n_cols), p_out(n_cols);
    const double ts = time_best_of(
        reps, [&] { kernels::serial::left_multiply(obs, a, u, s_out); });
    const double tp =
        time_best_of(reps, [&] { kernels::left_multiply(obs, a, u, p_out); });
    double diff = 0.0;
    for (int j = 0; j < n_cols; ++j)
      diff = std::max(diff, std::abs(s_out[j] - p_out[j]) /
                                std::max(1e-300, std::abs(s_out[j])));
    report("left_multiply", ts, tp, diff);
  }

  // One full power sweep u <- Rv, v <- R^T u plus the norms.
  {
    std::vector<double> tu(n_rows), tv(n_cols);
    const double ts = time_best_of(reps, [&] {
      kernels::serial::right_multiply(obs, a, vv, tu);
      const double nu = kernels::serial::norm_omega(tu);
      for (double& x : tu) x /= nu;
      kernels::serial::left_multiply(obs, a, tu, tv);
      kernels::serial::norm_omega(tv);
    });
    const double tp = time_best_of(reps, [&] {
      kernels::right_multiply(obs, a, vv, tu);
      const double nu = kernels::norm_omega(tu);
      for (double& x : tu) x /= nu;
      kernels::left_multiply(obs, a, tu, tv);
      kernels::norm_omega(tv);
    });
    report("power_sweep", ts, tp, 0.0);
  }
  return 0;
}
