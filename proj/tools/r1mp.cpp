// Command-line front end: reproducible completion / image-recovery /
// sensing / benchmark runs with machine-readable artifacts.
//
// Exit codes: 0 ok, 2 bad flags, 3 data error, 4 numerical failure.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "r1mp/dataio.hpp"
#include "r1mp/detail/rng.hpp"
#include "r1mp/metrics.hpp"
#include "r1mp/omega_kernels.hpp"
#include "r1mp/sensing.hpp"
#include "r1mp/solvers.hpp"
#include "r1mp/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace r1mp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

json input_stamp(const std::string& path) {
  return json{{"path", path},
              {"bytes", fs::file_size(path)},
              {"fnv1a64", fnv1a64_file(path)}};
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json trace_to_json(const PursuitTrace& trace, const std::string& solver,
                   int n_rows, int n_cols, std::size_t n_observed) {
  json iterations = json::array();
  for (const IterationRecord& rec : trace.records) {
    iterations.push_back(json{{"k", rec.k},
                              {"residual_norm", rec.residual_norm},
                              {"sigma", rec.sigma},
                              {"power_iters", rec.power_iters},
                              {"residual_sigma_ratio_sq", rec.diag_ratio_sq}});
  }
  return json{{"schema_version", 1},
              {"solver", solver},
              {"n_rows", n_rows},
              {"n_cols", n_cols},
              {"n_observed", n_observed},
              {"observed_norm", trace.observed_norm},
              {"final_residual_norm", trace.final_residual_norm},
              {"stop_reason", to_string(trace.stop_reason)},
              {"iterations", iterations}};
}

json timings_json(const PursuitTrace& trace, double solve_seconds,
                  double total_seconds) {
  json per_iter = json::array();
  for (const IterationRecord& rec : trace.records) per_iter.push_back(rec.seconds);
  return json{{"total_seconds", total_seconds},
              {"solve_seconds", solve_seconds},
              {"per_iteration_seconds", per_iter}};
}

void write_model(const FactorModel& model, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path.string());
  char buf[32];
  auto emit = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << buf;
  };
  out << "R1MP-MODEL 1\n";
  out << model.n_rows() << " " << model.n_cols() << " " << model.rank() << "\n";
  for (int i = 0; i < model.rank(); ++i) {
    emit(model.weights()[i]);
    out << "\n";
    const auto& f = model.factors()[i];
    for (std::size_t t = 0; t < f.u.size(); ++t) {
      if (t) out << " ";
      emit(f.u[t]);
    }
    out << "\n";
    for (std::size_t t = 0; t < f.v.size(); ++t) {
      if (t) out << " ";
      emit(f.v[t]);
    }
    out << "\n";
  }
}

json contraction_json(const PursuitTrace& trace, int n_rows, int n_cols) {
  json out{{"bound", contraction_bound(n_rows, n_cols)}};
  if (trace.records.empty()) {
    out["ratios"] = json::array();
    out["max_ratio"] = nullptr;
    return out;
  }
  const ContractionSummary summary = contraction_ratios(trace);
  out["ratios"] = summary.ratios;
  out["max_ratio"] = summary.max_ratio;
  return out;
}

struct PowerFlags {
  int iters = 30;
  double tol = 1e-8;
};

void add_power_flags(CLI::App* cmd, PowerFlags& flags) {
  cmd->add_option("--power-iters", flags.iters, "Power method sweep cap");
  cmd->add_option("--power-tol", flags.tol,
                  "Power method relative-change tolerance");
}

using SolverFn = PursuitResult (*)(const ObservedMatrix&, const SolverConfig&,
                                   const SolverHooks&);

SolverFn solver_by_name(const std::string& name) {
  if (name == "or1mp") return &or1mp;
  if (name == "eor1mp") return &eor1mp;
  if (name == "fr1mp") return &fr1mp;
  throw CLI::ValidationError("--solver", "unknown solver: " + name);
}

ObservedMatrix shift_values(const ObservedMatrix& obs, double delta) {
  std::vector<Triplet> entries;
  entries.reserve(obs.n_observed());
  for (std::size_t t = 0; t < obs.n_observed(); ++t)
    entries.push_back({obs.rows()[t], obs.cols()[t], obs.values()[t] + delta});
  return ObservedMatrix(obs.n_rows(), obs.n_cols(), std::move(entries));
}

double mean_value(const ObservedMatrix& obs) {
  double s = 0.0;
  for (double v : obs.values()) s += v;
  return s / static_cast<double>(obs.n_observed());
}

struct CompletionScores {
  double rmse_unclipped = 0;
  double rmse_clipped = 0;
};

CompletionScores score_on(const ObservedMatrix& test, const FactorModel& model,
                          double center_offset, double clip_lo, double clip_hi) {
  std::vector<std::pair<int, int>> queries;
  queries.reserve(test.n_observed());
  for (std::size_t t = 0; t < test.n_observed(); ++t)
    queries.emplace_back(test.rows()[t], test.cols()[t]);
  std::vector<double> pred = kernels::predict(model, queries);
  for (double& p : pred) p += center_offset;

  CompletionScores scores;
  scores.rmse_unclipped = rmse(pred, test.values());
  for (double& p : pred) p = std::clamp(p, clip_lo, clip_hi);
  scores.rmse_clipped = rmse(pred, test.values());
  return scores;
}

// ---- complete --------------------------------------------------------

struct CompleteArgs {
  std::string input;
  int index_base = 1;
  std::string solver = "or1mp";
  int rank = 10;
  double eps = 0.0;
  double split = 0.0;
  std::uint64_t seed = 0;
  bool center = false;
  bool clip = false;
  PowerFlags power;
  std::string out;
};

int run_complete(const CompleteArgs& args) {
  const auto t_start = Clock::now();
  fs::create_directories(args.out);

  ObservedMatrix full = load_triplets({args.input, args.index_base});
  double value_lo = *std::min_element(full.values().begin(), full.values().end());
  double value_hi = *std::max_element(full.values().begin(), full.values().end());

  std::optional<std::pair<ObservedMatrix, ObservedMatrix>> split_data;
  if (args.split > 0.0)
    split_data = split_train_test(full, args.split, args.seed);
  const ObservedMatrix& train = split_data ? split_data->first : full;

  double offset = 0.0;
  std::optional<ObservedMatrix> centered;
  if (args.center) {
    offset = mean_value(train);
    centered = shift_values(train, -offset);
  }
  const ObservedMatrix& solve_on = centered ? *centered : train;

  SolverConfig cfg;
  cfg.rank_budget = args.rank;
  cfg.eps = args.eps;
  cfg.power.max_iters = args.power.iters;
  cfg.power.rel_tol = args.power.tol;
  cfg.power.seed = args.seed;

  const auto t_solve = Clock::now();
  PursuitResult result = solver_by_name(args.solver)(solve_on, cfg, {});
  const double solve_seconds = seconds_since(t_solve);

  write_model(result.model, fs::path(args.out) / "model.txt");
  write_json(trace_to_json(result.trace, args.solver, train.n_rows(),
                           train.n_cols(), train.n_observed()),
             fs::path(args.out) / "trace.json");

  json report{{"schema_version", 1},
              {"solver", args.solver},
              {"relative_residual",
               result.trace.final_residual_norm /
                   result.trace.observed_norm}};
  if (split_data) {
    const CompletionScores scores = score_on(split_data->second, result.model,
                                             offset, value_lo, value_hi);
    report["rmse"] = args.clip ? scores.rmse_clipped : scores.rmse_unclipped;
    report["rmse_unclipped"] = scores.rmse_unclipped;
    report["rmse_clipped"] = scores.rmse_clipped;
    report["test_entries"] = split_data->second.n_observed();
  } else {
    report["rmse"] = result.trace.final_residual_norm /
                     std::sqrt(static_cast<double>(train.n_observed()));
  }
  report["contraction"] =
      contraction_json(result.trace, train.n_rows(), train.n_cols());
  write_json(report, fs::path(args.out) / "report.json");

  json manifest{
      {"schema_version", 1},
      {"command", "complete"},
      {"flags",
       json{{"input", args.input},
            {"index_base", args.index_base},
            {"solver", args.solver},
            {"rank", args.rank},
            {"eps", args.eps},
            {"split", args.split},
            {"center", args.center},
            {"clip", args.clip},
            {"power_iters", args.power.iters},
            {"power_tol", args.power.tol}}},
      {"seed", args.seed},
      {"inputs", json::array({input_stamp(args.input)})},
      {"library_version", R1MP_VERSION},
      {"threads", omp_get_max_threads()},
      {"timings",
       timings_json(result.trace, solve_seconds, seconds_since(t_start))}};
  write_json(manifest, fs::path(args.out) / "manifest.json");

  std::cout << "solver=" << args.solver
            << " rank=" << result.model.rank()
            << " stop=" << to_string(result.trace.stop_reason)
            << " relative_residual="
            << result.trace.final_residual_norm / result.trace.observed_norm;
  if (report.contains("rmse_unclipped"))
    std::cout << " test_rmse=" << double(report["rmse"]);
  std::cout << "\n";
  return 0;
}

// ---- image -----------------------------------------------------------

struct ImageArgs {
  std::string image;
  double keep = 0.5;
  std::string solver = "or1mp";
  int rank = 50;
  double eps = 0.0;
  std::uint64_t seed = 0;
  PowerFlags power;
  std::string out;
};

int run_image(const ImageArgs& args) {
  const auto t_start = Clock::now();
  fs::create_directories(args.out);

  GrayImage original = load_pgm(args.image);
  ObservedMatrix obs = sample_mask(original, args.keep, args.seed);

  SolverConfig cfg;
  cfg.rank_budget = args.rank;
  cfg.eps = args.eps;
  cfg.power.max_iters = args.power.iters;
  cfg.power.rel_tol = args.power.tol;
  cfg.power.seed = args.seed;

  const auto t_solve = Clock::now();
  PursuitResult result = solver_by_name(args.solver)(obs, cfg, {});
  const double solve_seconds = seconds_since(t_solve);

  GrayImage recovered = render_image(result.model);
  save_pgm(recovered, (fs::path(args.out) / "recovered.pgm").string());

  std::vector<double> rec_values(recovered.pixels.begin(),
                                 recovered.pixels.end());
  const double psnr_db = psnr(rec_values, original);

  write_model(result.model, fs::path(args.out) / "model.txt");
  write_json(trace_to_json(result.trace, args.solver, obs.n_rows(),
                           obs.n_cols(), obs.n_observed()),
             fs::path(args.out) / "trace.json");

  json report{{"schema_version", 1},
              {"solver", args.solver},
              {"psnr", std::isinf(psnr_db) ? json("inf") : json(psnr_db)},
              {"observed_pixels", obs.n_observed()},
              {"relative_residual",
               result.trace.final_residual_norm / result.trace.observed_norm},
              {"contraction",
               contraction_json(result.trace, obs.n_rows(), obs.n_cols())}};
  write_json(report, fs::path(args.out) / "report.json");

  json manifest{
      {"schema_version", 1},
      {"command", "image"},
      {"flags",
       json{{"image", args.image},
            {"keep", args.keep},
            {"solver", args.solver},
            {"rank", args.rank},
            {"eps", args.eps},
            {"power_iters", args.power.iters},
            {"power_tol", args.power.tol}}},
      {"seed", args.seed},
      {"inputs", json::array({input_stamp(args.image)})},
      {"library_version", R1MP_VERSION},
      {"threads", omp_get_max_threads()},
      {"timings",
       timings_json(result.trace, solve_seconds, seconds_since(t_start))}};
  write_json(manifest, fs::path(args.out) / "manifest.json");

  std::cout << "solver=" << args.solver << " rank=" << result.model.rank()
            << " psnr=";
  if (std::isinf(psnr_db))
    std::cout << "inf";
  else
    std::cout << psnr_db;
  std::cout << " dB\n";
  return 0;
}

// ---- sense -----------------------------------------------------------

struct SenseArgs {
  std::vector<int> dims;
  int rank_true = 2;
  int measurements = 0;
  int rank = 8;
  double eps = 0.0;
  std::uint64_t seed = 0;
  PowerFlags power{2000, 1e-10};
  std::string save_op;
  std::string load_op;
  std::string out;
};

int run_sense(const SenseArgs& args) {
  const auto t_start = Clock::now();
  fs::create_directories(args.out);

  std::optional<SensingOperator> op;
  int n = 0, m = 0;
  if (!args.load_op.empty()) {
    op = load_operator(args.load_op);
    n = op->n_rows();
    m = op->n_cols();
  } else {
    if (args.dims.size() != 2)
      throw CLI::ValidationError("--dims", "expected two values: n m");
    n = args.dims[0];
    m = args.dims[1];
    if (args.measurements < 1)
      throw CLI::ValidationError("--measurements", "must be >= 1");
    std::mt19937_64 gen(detail::mix_seed(args.seed, 1));
    Eigen::MatrixXd a(args.measurements, static_cast<long>(n) * m);
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        a(i, j) = detail::normal(gen);
    op.emplace(n, m, std::move(a));
  }
  if (!args.save_op.empty()) save_operator(*op, args.save_op);

  // Random low-rank target from the run seed.
  std::mt19937_64 gen(detail::mix_seed(args.seed, 2));
  Eigen::MatrixXd g1(n, args.rank_true), g2(m, args.rank_true);
  for (Eigen::Index j = 0; j < g1.cols(); ++j)
    for (Eigen::Index i = 0; i < g1.rows(); ++i) g1(i, j) = detail::normal(gen);
  for (Eigen::Index j = 0; j < g2.cols(); ++j)
    for (Eigen::Index i = 0; i < g2.rows(); ++i) g2(i, j) = detail::normal(gen);
  const Eigen::MatrixXd target = g1 * g2.transpose();
  const double target_norm = target.norm();

  const Eigen::VectorXd b = op->apply(target);

  SolverConfig cfg;
  cfg.rank_budget = args.rank;
  cfg.eps = args.eps;
  cfg.power.max_iters = args.power.iters;
  cfg.power.rel_tol = args.power.tol;
  cfg.power.seed = args.seed;

  // Track the recovery-error curve against the known target.
  std::vector<RankOneFactor> factors;
  std::vector<double> errors;
  SensingHooks hooks;
  hooks.on_iteration = [&](const SensingStepInfo& info) {
    factors.push_back(info.factor);
    Eigen::MatrixXd estimate = Eigen::MatrixXd::Zero(n, m);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const Eigen::Map<const Eigen::VectorXd> u(factors[i].u.data(), n);
      const Eigen::Map<const Eigen::VectorXd> v(factors[i].v.data(), m);
      estimate += info.weights[i] * u * v.transpose();
    }
    errors.push_back((estimate - target).norm() / target_norm);
  };

  const auto t_solve = Clock::now();
  PursuitResult result = r1mp4ms(*op, b, cfg, hooks);
  const double solve_seconds = seconds_since(t_solve);

  write_model(result.model, fs::path(args.out) / "model.txt");
  write_json(trace_to_json(result.trace, "r1mp4ms", n, m, b.size()),
             fs::path(args.out) / "trace.json");

  json curve = json::array();
  for (std::size_t i = 0; i < errors.size(); ++i)
    curve.push_back(json{{"k", i + 1},
                         {"recovery_error", errors[i]},
                         {"residual_norm", i < result.trace.records.size()
                                               ? json(result.trace.records[i]
                                                          .residual_norm)
                                               : json(nullptr)}});
  write_json(json{{"schema_version", 1},
                  {"n_rows", n},
                  {"n_cols", m},
                  {"rank_true", args.rank_true},
                  {"measurements", op->measurements()},
                  {"final_recovery_error",
                   errors.empty() ? json(nullptr) : json(errors.back())},
                  {"curve", curve}},
             fs::path(args.out) / "curve.json");

  json inputs = json::array();
  if (!args.load_op.empty()) inputs.push_back(input_stamp(args.load_op));
  json manifest{
      {"schema_version", 1},
      {"command", "sense"},
      {"flags",
       json{{"dims", json::array({n, m})},
            {"rank_true", args.rank_true},
            {"measurements", op->measurements()},
            {"rank", args.rank},
            {"eps", args.eps},
            {"save_op", args.save_op},
            {"load_op", args.load_op},
            {"power_iters", args.power.iters},
            {"power_tol", args.power.tol}}},
      {"seed", args.seed},
      {"inputs", inputs},
      {"library_version", R1MP_VERSION},
      {"threads", omp_get_max_threads()},
      {"timings",
       timings_json(result.trace, solve_seconds, seconds_since(t_start))}};
  write_json(manifest, fs::path(args.out) / "manifest.json");

  std::cout << "sense dims=" << n << "x" << m << " d=" << op->measurements()
            << " rank=" << result.model.rank() << " recovery_error="
            << (errors.empty() ? -1.0 : errors.back()) << "\n";
  return 0;
}

// ---- bench -----------------------------------------------------------

struct BenchArgs {
  std::string input;
  int index_base = 1;
  std::string solvers = "or1mp,eor1mp,fr1mp";
  int rank = 10;
  double eps = 0.0;
  double split = 0.0;
  std::uint64_t seed = 0;
  bool center = false;
  PowerFlags power;
  std::string out;
};

int run_bench(const BenchArgs& args) {
  const auto t_start = Clock::now();
  if (!args.out.empty()) fs::create_directories(args.out);

  ObservedMatrix full = load_triplets({args.input, args.index_base});
  double value_lo = *std::min_element(full.values().begin(), full.values().end());
  double value_hi = *std::max_element(full.values().begin(), full.values().end());

  std::optional<std::pair<ObservedMatrix, ObservedMatrix>> split_data;
  if (args.split > 0.0)
    split_data = split_train_test(full, args.split, args.seed);
  const ObservedMatrix& train = split_data ? split_data->first : full;

  double offset = 0.0;
  std::optional<ObservedMatrix> centered;
  if (args.center) {
    offset = mean_value(train);
    centered = shift_values(train, -offset);
  }
  const ObservedMatrix& solve_on = centered ? *centered : train;

  std::vector<std::string> names;
  {
    std::stringstream ss(args.solvers);
    std::string item;
    while (std::getline(ss, item, ',')) names.push_back(item);
  }

  SolverConfig cfg;
  cfg.rank_budget = args.rank;
  cfg.eps = args.eps;
  cfg.power.max_iters = args.power.iters;
  cfg.power.rel_tol = args.power.tol;
  cfg.power.seed = args.seed;

  json rows = json::array();
  std::printf("%-8s %12s %14s %14s %14s\n", "solver", "seconds", "rmse",
              "rmse_clipped", "final_resid");
  for (const std::string& name : names) {
    SolverFn solver = solver_by_name(name);
    const auto t0 = Clock::now();
    PursuitResult result = solver(solve_on, cfg, {});
    const double secs = seconds_since(t0);

    double score = 0.0, score_clipped = 0.0;
    if (split_data) {
      const CompletionScores s = score_on(split_data->second, result.model,
                                          offset, value_lo, value_hi);
      score = s.rmse_unclipped;
      score_clipped = s.rmse_clipped;
    } else {
      score = result.trace.final_residual_norm /
              std::sqrt(static_cast<double>(train.n_observed()));
      score_clipped = score;
    }

    json diag = json::array();
    for (const auto& rec : result.trace.records)
      diag.push_back(rec.diag_ratio_sq);
    rows.push_back(json{{"solver", name},
                        {"seconds", secs},
                        {"rmse", score},
                        {"rmse_clipped", score_clipped},
                        {"final_residual_norm",
                         result.trace.final_residual_norm},
                        {"stop_reason", to_string(result.trace.stop_reason)},
                        {"residual_sigma_ratio_sq", diag}});
    std::printf("%-8s %12.4f %14.6f %14.6f %14.6g\n", name.c_str(), secs,
                score, score_clipped, result.trace.final_residual_norm);
  }

  if (!args.out.empty()) {
    json bench{{"schema_version", 1},
               {"command", "bench"},
               {"flags",
                json{{"input", args.input},
                     {"index_base", args.index_base},
                     {"solvers", args.solvers},
                     {"rank", args.rank},
                     {"eps", args.eps},
                     {"split", args.split},
                     {"center", args.center},
                     {"power_iters", args.power.iters},
                     {"power_tol", args.power.tol}}},
               {"seed", args.seed},
               {"inputs", json::array({input_stamp(args.input)})},
               {"library_version", R1MP_VERSION},
               {"threads", omp_get_max_threads()},
               {"total_seconds", seconds_since(t_start)},
               {"results", rows}};
    write_json(bench, fs::path(args.out) / "bench.json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-one matrix pursuit: completion, image recovery, sensing"};
  app.require_subcommand(1);

  CompleteArgs complete_args;
  CLI::App* complete = app.add_subcommand(
      "complete", "Complete a rating matrix from a triplet file");
  complete->add_option("--input", complete_args.input, "Triplet text file")
      ->required();
  complete->add_option("--index-base", complete_args.index_base,
                       "Index base of the file (0 or 1)");
  complete->add_option("--solver", complete_args.solver,
                       "or1mp | eor1mp | fr1mp");
  complete->add_option("--rank", complete_args.rank, "Rank budget")->required();
  complete->add_option("--eps", complete_args.eps,
                       "Relative residual stopping tolerance");
  complete->add_option("--split", complete_args.split,
                       "Train fraction for a train/test split");
  complete->add_option("--seed", complete_args.seed, "Run seed");
  complete->add_flag("--center", complete_args.center,
                     "Subtract the training mean before solving");
  complete->add_flag("--clip", complete_args.clip,
                     "Clip predictions into the training value range");
  add_power_flags(complete, complete_args.power);
  complete->add_option("--out", complete_args.out, "Output directory")
      ->required();

  ImageArgs image_args;
  CLI::App* image = app.add_subcommand(
      "image", "Recover an image from a random pixel subset");
  image->add_option("--image", image_args.image, "PGM image (P2 or P5)")
      ->required();
  image->add_option("--keep", image_args.keep, "Observed pixel fraction");
  image->add_option("--solver", image_args.solver, "or1mp | eor1mp | fr1mp");
  image->add_option("--rank", image_args.rank, "Rank budget")->required();
  image->add_option("--eps", image_args.eps, "Relative residual tolerance");
  image->add_option("--seed", image_args.seed, "Run seed");
  add_power_flags(image, image_args.power);
  image->add_option("--out", image_args.out, "Output directory")->required();

  SenseArgs sense_args;
  CLI::App* sense = app.add_subcommand(
      "sense", "Matrix sensing on a generated Gaussian operator");
  sense->add_option("--dims", sense_args.dims,
                    "Target dims: n m")->expected(2);
  sense->add_option("--rank-true", sense_args.rank_true,
                    "True rank of the generated target");
  sense->add_option("--measurements", sense_args.measurements,
                    "Number of linear measurements d");
  sense->add_option("--rank", sense_args.rank, "Pursuit rank budget");
  sense->add_option("--eps", sense_args.eps, "Relative residual tolerance");
  sense->add_option("--seed", sense_args.seed, "Run seed");
  sense->add_option("--save-op", sense_args.save_op,
                    "Write the operator to this file");
  sense->add_option("--load-op", sense_args.load_op,
                    "Read the operator from this file instead of generating");
  add_power_flags(sense, sense_args.power);
  sense->add_option("--out", sense_args.out, "Output directory")->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "Run several solvers side by side on one dataset");
  bench->add_option("--input", bench_args.input, "Triplet text file")
      ->required();
  bench->add_option("--index-base", bench_args.index_base, "Index base");
  bench->add_option("--solvers", bench_args.solvers,
                    "Comma-separated solver list");
  bench->add_option("--rank", bench_args.rank, "Rank budget")->required();
  bench->add_option("--eps", bench_args.eps, "Relative residual tolerance");
  bench->add_option("--split", bench_args.split, "Train fraction");
  bench->add_option("--seed", bench_args.seed, "Run seed");
  bench->add_flag("--center", bench_args.center, "Center on the train mean");
  add_power_flags(bench, bench_args.power);
  bench->add_option("--out", bench_args.out, "Output directory");

  try {
    app.parse(argc, argv);
    if (complete->parsed()) return run_complete(complete_args);
    if (image->parsed()) return run_image(image_args);
    if (sense->parsed()) return run_sense(sense_args);
    if (bench->parsed()) return run_bench(bench_args);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
