#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qcqp/problem.hpp"
#include "qcqp/solver.hpp"

namespace qcqp::io {

using Json = nlohmann::json;

/// Malformed or inconsistent JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrices are row-major nested arrays; complex scalars are [re, im] pairs.
Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const CMatrix& m);
Vector vector_from_json(const Json& j, const std::string& what);
Matrix matrix_from_json(const Json& j, const std::string& what);
CMatrix cmatrix_from_json(const Json& j, const std::string& what);

Json instance_to_json(const QcqpInstance& instance);
QcqpInstance instance_from_json(const Json& j);

/// Solution fields shared by `solve` output and `verify` input.
Json solution_to_json(const Solution& solution);
Solution solution_from_json(const Json& j, const QcqpInstance& instance);

Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

QcqpInstance read_instance(const std::filesystem::path& path);
/// Stable serialization: identical instances give identical bytes.
std::string dump_instance(const QcqpInstance& instance);

/// NaN and infinities become null.
Json number(double v);

}  // namespace qcqp::io
