#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcqp/problem.hpp"
#include "qcqp/solver.hpp"
#include "qcqp_cli/json_io.hpp"

namespace qcqp::cli {

using io::Json;

enum ExitCode : int { kSuccess = 0, kError = 1, kNoMinimizer = 2 };

struct GenArgs {
  ProblemKind kind = ProblemKind::Standard;
  Index n = 0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  std::filesystem::path out_dir = ".";
};

struct SolveArgs {
  std::filesystem::path instance;
  std::filesystem::path out;  // empty: standard output only
  SolveOptions options;
  bool pretty = false;
};

struct VerifyArgs {
  std::filesystem::path instance;
  std::filesystem::path solution;
  bool pretty = false;
};

struct BenchArgs {
  ProblemKind kind = ProblemKind::Standard;
  std::vector<Index> sizes;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  SolveOptions options;
  bool pretty = false;
};

/// File name used by `gen` for one instance.
std::string instance_file_name(ProblemKind kind, Index n, std::uint64_t seed);

/// Per-instance record shared by `solve` and `bench`.
Json run_record(const QcqpInstance& instance, const SolveReport& report);

/// Residuals recomputed from raw instance data with plain loops.
Json verify_solution(const QcqpInstance& instance, const Solution& solution);

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

/// Parse argv and run the selected subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcqp::cli
