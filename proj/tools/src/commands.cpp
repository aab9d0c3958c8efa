#include "qcqp_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "qcqp/error.hpp"
#include "qcqp/instances.hpp"
#include "qcqp/oracle.hpp"

namespace qcqp::cli {
namespace {

constexpr Index kOracleLimit = 20;

bool no_minimizer_error(ErrorCode code) {
  return code == ErrorCode::InfeasibleConstraint || code == ErrorCode::EmptyFeasibleSet;
}

double real_quadratic(const Matrix& a, const Vector& b, double c, const Vector& x) {
  double value = c;
  for (Index i = 0; i < x.size(); ++i) {
    double row = 0.0;
    for (Index j = 0; j < x.size(); ++j) row += a(i, j) * x(j);
    value += x(i) * row + 2.0 * b(i) * x(i);
  }
  return value;
}

double complex_quadratic(const CMatrix& a, const CMatrix& b, double c, const CMatrix& x) {
  double value = c;
  for (Index k = 0; k < x.cols(); ++k) {
    for (Index i = 0; i < x.rows(); ++i) {
      Complex row = 0.0;
      for (Index j = 0; j < x.rows(); ++j) row += a(i, j) * x(j, k);
      value += (std::conj(x(i, k)) * row).real() + 2.0 * (std::conj(b(i, k)) * x(i, k)).real();
    }
  }
  return value;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

Json aggregate(const std::vector<Json>& records) {
  std::size_t valid = 0;
  double max_residual = 0.0;
  std::vector<double> times;
  for (const Json& r : records) {
    if (r.value("valid", false)) ++valid;
    if (r.contains("constraint_residual") && r["constraint_residual"].is_number()) {
      max_residual = std::max(max_residual, r["constraint_residual"].get<double>());
    }
    if (r.contains("wall_time_seconds") && r["wall_time_seconds"].is_number()) {
      times.push_back(r["wall_time_seconds"].get<double>());
    }
  }
  Json out;
  out["count"] = records.size();
  out["valid_count"] = valid;
  out["validity_ratio"] =
      records.empty() ? Json(nullptr) : Json(static_cast<double>(valid) / records.size());
  out["max_residual"] = records.empty() ? Json(nullptr) : Json(max_residual);
  out["median_time"] = io::number(median(times));
  return out;
}

void add_solve_flags(CLI::App& sub, SolveOptions& opts) {
  sub.add_option("--tol-lambda", opts.tol_lambda, "Relative bisection width tolerance")
      ->capture_default_str();
  sub.add_option("--tol-f", opts.tol_f, "Secular residual tolerance")->capture_default_str();
  sub.add_option("--tol-b", opts.tol_b, "Relative hard-case numerator tolerance")
      ->capture_default_str();
  sub.add_option("--max-iter", opts.max_iter, "Bisection iteration budget")->capture_default_str();
  sub.add_option_function<double>(
      "--eps-rank", [&opts](double v) { opts.eps_rank = v; },
      "Numerical rank threshold (default n * machine epsilon)");
}

ProblemKind kind_or_throw(const std::string& name) {
  const auto kind = parse_kind(name);
  if (!kind) throw CLI::ValidationError("kind", "unknown kind '" + name + "'");
  return *kind;
}

}  // namespace

std::string instance_file_name(ProblemKind kind, Index n, std::uint64_t seed) {
  return std::string(to_string(kind)) + "_n" + std::to_string(n) + "_s" + std::to_string(seed) +
         ".json";
}

Json run_record(const QcqpInstance& instance, const SolveReport& report) {
  const Solution& s = report.solution;
  Json j;
  j["kind"] = std::string(to_string(instance.kind));
  j["n"] = instance.n();
  if (instance.is_matrix()) j["n2"] = instance.n2();
  j["seed"] = instance.seed ? Json(*instance.seed) : Json(nullptr);
  j["status"] = std::string(to_string(s.status));
  j["lambda_star"] = io::number(s.lambda_star);
  j["objective"] = io::number(s.objective);
  j["constraint_residual"] = io::number(s.constraint_residual);
  j["kkt_stationarity"] = report.kkt ? io::number(report.kkt->stationarity) : Json(nullptr);
  j["second_order_min_eig"] =
      report.kkt ? io::number(report.kkt->second_order_min_eig) : Json(nullptr);
  if (instance.linear) {
    j["linear_residual"] = report.kkt ? io::number(report.kkt->linear_residual) : Json(nullptr);
  }
  j["valid"] = s.has_minimizer() && s.constraint_residual <= oracle::kValidityBar;
  j["wall_time_seconds"] = report.timings.total_seconds;
  j["iterations"] = s.iterations;
  return j;
}

Json verify_solution(const QcqpInstance& instance, const Solution& solution) {
  Json j;
  j["status"] = std::string(to_string(solution.status));
  double objective = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  double scale = 1.0;
  if (instance.is_matrix()) {
    const ComplexQcqp& p = instance.complex_problem();
    const CMatrix& x = solution.matrix();
    objective = complex_quadratic(p.a0.matrix(), p.b0, p.c0, x);
    residual = std::abs(complex_quadratic(p.a1.matrix(), p.b1, p.c1, x));
    scale = std::max(1.0, std::abs(p.c1) + p.b1.norm() + p.a1.matrix().norm());
  } else {
    const RealQcqp& p = instance.real_problem();
    const Vector& x = solution.vector();
    objective = real_quadratic(p.a0.matrix(), p.b0, p.c0, x);
    residual = std::abs(real_quadratic(p.a1.matrix(), p.b1, p.c1, x));
    scale = std::max(1.0, std::abs(p.c1) + p.b1.norm() + p.a1.matrix().norm());
    if (instance.linear) {
      const LinearEqualities& lin = *instance.linear;
      double worst = 0.0;
      for (Index i = 0; i < lin.rows(); ++i) {
        double row = -lin.b2(i);
        for (Index k = 0; k < x.size(); ++k) row += lin.a2(i, k) * x(k);
        worst = std::max(worst, std::abs(row));
      }
      j["linear_residual"] = io::number(worst);
    }
  }
  const bool usable = solution.has_minimizer() && std::isfinite(residual);
  j["objective"] = io::number(objective);
  j["constraint_residual"] = io::number(residual);
  j["valid"] = usable && residual <= oracle::kValidityBar;
  j["valid_scaled"] = usable && residual <= oracle::kValidityBar * scale;

  if (usable && instance.n() <= kOracleLimit) {
    try {
      const OracleResult best = oracle::solve(instance);
      j["oracle_objective"] = io::number(best.objective);
      j["oracle_gap"] = io::number((objective - best.objective) / (1.0 + std::abs(best.objective)));
    } catch (const Error& e) {
      j["oracle_error"] = e.what();
    }
  }
  return j;
}

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  try {
    std::filesystem::create_directories(args.out_dir);
    Json written = Json::array();
    for (std::size_t k = 0; k < args.count; ++k) {
      GenSpec spec{args.kind, args.n, args.seed + k, args.epsilon};
      const QcqpInstance instance = instances::gen(spec);
      const auto path = args.out_dir / instance_file_name(args.kind, args.n, spec.seed);
      io::write_text(path, io::dump_instance(instance));
      written.push_back(path.string());
    }
    out << written.dump() << "\n";
    return kSuccess;
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << "\n";
    return kError;
  }
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  QcqpInstance instance;
  try {
    instance = io::read_instance(args.instance);
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << "\n";
    return kError;
  }
  try {
    const SolveReport report = solver::solve_with_report(instance, args.options);
    Json j = run_record(instance, report);
    j.update(io::solution_to_json(report.solution));
    const std::string text = args.pretty ? j.dump(2) : j.dump();
    out << text << "\n";
    if (!args.out.empty()) io::write_text(args.out, text + "\n");
    if (args.pretty) {
      err << "status " << j["status"].get<std::string>() << "  objective " << j["objective"]
          << "  lambda " << j["lambda_star"] << "  residual " << j["constraint_residual"]
          << "\n";
    }
    return report.solution.has_minimizer() ? kSuccess : kNoMinimizer;
  } catch (const Error& e) {
    if (no_minimizer_error(e.code())) {
      Json j;
      j["kind"] = std::string(to_string(instance.kind));
      j["n"] = instance.n();
      j["status"] = "infeasible";
      j["error"] = e.what();
      out << (args.pretty ? j.dump(2) : j.dump()) << "\n";
      return kNoMinimizer;
    }
    err << "solve: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << "\n";
    return kError;
  }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const QcqpInstance instance = io::read_instance(args.instance);
    const Solution solution = io::solution_from_json(io::read_json(args.solution), instance);
    const Json j = verify_solution(instance, solution);
    out << (args.pretty ? j.dump(2) : j.dump()) << "\n";
    return kSuccess;
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << "\n";
    return kError;
  }
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  try {
    std::vector<Json> all;
    Json by_size = Json::array();
    for (Index n : args.sizes) {
      std::vector<Json> records;
      for (std::size_t k = 0; k < args.count; ++k) {
        const QcqpInstance instance = instances::gen(GenSpec{args.kind, n, args.seed + k});
        Json record;
        try {
          record = run_record(instance, solver::solve_with_report(instance, args.options));
        } catch (const Error& e) {
          record["kind"] = std::string(to_string(args.kind));
          record["n"] = n;
          record["seed"] = args.seed + k;
          record["status"] = no_minimizer_error(e.code()) ? "infeasible" : "error";
          record["error"] = e.what();
          record["valid"] = false;
        }
        records.push_back(record);
        all.push_back(std::move(record));
      }
      Json row = aggregate(records);
      row["n"] = n;
      by_size.push_back(std::move(row));
    }
    Json report;
    report["kind"] = std::string(to_string(args.kind));
    report["records"] = all;
    report["by_n"] = by_size;
    report["aggregate"] = aggregate(all);
    out << (args.pretty ? report.dump(2) : report.dump()) << "\n";

    if (args.pretty) {
      err << std::left << std::setw(8) << "n" << std::setw(8) << "count" << std::setw(12)
          << "valid" << std::setw(16) << "max_residual" << "median_time_s\n";
      for (const Json& row : by_size) {
        err << std::setw(8) << row["n"].dump() << std::setw(8) << row["count"].dump()
            << std::setw(12) << row["validity_ratio"].dump() << std::setw(16)
            << row["max_residual"].dump() << row["median_time"].dump() << "\n";
      }
    }
    return kSuccess;
  } catch (const std::exception& e) {
    err << "bench: " << e.what() << "\n";
    return kError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global solver for QCQPs with one quadratic equality constraint", "qcqp"};
  app.require_subcommand(1);

  std::string kind_name;
  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write random instances as JSON files");
  gen_cmd->add_option("kind", kind_name, "standard | rank_deficient | indefinite | augmented | matrix")
      ->required();
  gen_cmd->add_option("n", gen.n, "Problem size (N1 for the matrix kind)")->required()
      ->check(CLI::Range(Index{2}, Index{100000}));
  gen_cmd->add_option("count,--count", gen.count, "Number of instances")->capture_default_str();
  gen_cmd->add_option("seed,--seed", gen.seed, "First seed; instance k uses seed + k")
      ->capture_default_str();
  gen_cmd->add_option("--epsilon", gen.epsilon, "Diagonal loading")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->capture_default_str();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  solve_cmd->add_option("instance", solve.instance, "Instance JSON")->required();
  solve_cmd->add_option("--out", solve.out, "Also write the solution JSON here");
  solve_cmd->add_flag("--pretty", solve.pretty, "Indent JSON and print a summary to stderr");
  add_solve_flags(*solve_cmd, solve.options);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a solution against its instance");
  verify_cmd->add_option("instance", verify.instance, "Instance JSON")->required();
  verify_cmd->add_option("solution", verify.solution, "Solution JSON from `solve`")->required();
  verify_cmd->add_flag("--pretty", verify.pretty, "Indent JSON");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Solve generated instances and report metrics");
  bench_cmd->add_option("kind", kind_name, "Instance kind")->required();
  bench_cmd->add_option("sizes,--n", bench.sizes, "Problem sizes, e.g. 5,20,100")
      ->delimiter(',');
  bench_cmd->add_option("--count", bench.count, "Instances per size")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "First seed")->capture_default_str();
  bench_cmd->add_flag("--pretty", bench.pretty, "Indent JSON and print a table to stderr");
  add_solve_flags(*bench_cmd, bench.options);

  try {
    app.parse(argc, argv);
    if (*gen_cmd) {
      gen.kind = kind_or_throw(kind_name);
      return cmd_gen(gen, out, err);
    }
    if (*solve_cmd) return cmd_solve(solve, out, err);
    if (*verify_cmd) return cmd_verify(verify, out, err);
    bench.kind = kind_or_throw(kind_name);
    for (Index n : bench.sizes) {
      if (n < 2) throw CLI::ValidationError("sizes", "every size must be at least 2");
    }
    return cmd_bench(bench, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kError;
  }
}

}  // namespace qcqp::cli
