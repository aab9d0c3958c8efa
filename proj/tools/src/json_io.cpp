#include "qcqp_cli/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qcqp/error.hpp"

namespace qcqp::io {
namespace {

double as_number(const Json& j, const std::string& what) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  return j.get<double>();
}

Complex as_complex(const Json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError(what + ": expected [re, im]");
  return {as_number(j[0], what), as_number(j[1], what)};
}

const Json& field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

void expect_shape(Index rows, Index cols, Index want_rows, Index want_cols, const std::string& what) {
  if (rows != want_rows || cols != want_cols) {
    throw ParseError(what + " is " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", expected " + std::to_string(want_rows) + "x" + std::to_string(want_cols));
  }
}

}  // namespace

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({number(m(i, j).real()), number(m(i, j).imag())}));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = as_number(j[i], what);
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected nested arrays");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ParseError(what + ": ragged rows");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = as_number(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

CMatrix cmatrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected nested arrays");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ParseError(what + ": ragged rows");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = as_complex(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

Json instance_to_json(const QcqpInstance& instance) {
  Json j;
  j["kind"] = std::string(to_string(instance.kind));
  j["n"] = instance.n();
  if (instance.is_matrix()) {
    const ComplexQcqp& p = instance.complex_problem();
    j["n2"] = p.cols();
    j["A0"] = to_json(p.a0.matrix());
    j["b0"] = to_json(p.b0);
    j["c0"] = p.c0;
    j["A1"] = to_json(p.a1.matrix());
    j["b1"] = to_json(p.b1);
    j["c1"] = p.c1;
  } else {
    const RealQcqp& p = instance.real_problem();
    j["A0"] = to_json(p.a0.matrix());
    j["b0"] = to_json(p.b0);
    j["c0"] = p.c0;
    j["A1"] = to_json(p.a1.matrix());
    j["b1"] = to_json(p.b1);
    j["c1"] = p.c1;
    if (instance.linear) {
      j["A2"] = to_json(instance.linear->a2);
      j["b2"] = to_json(instance.linear->b2);
    }
  }
  if (instance.seed) j["seed"] = *instance.seed;
  return j;
}

QcqpInstance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  const Json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) throw ParseError("'kind' must be a string");
  const auto kind = parse_kind(kind_field.get<std::string>());
  if (!kind) throw ParseError("unknown kind '" + kind_field.get<std::string>() + "'");
  const Json& n_field = field(j, "n");
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1) {
    throw ParseError("'n' must be a positive integer");
  }
  const Index n = n_field.get<Index>();

  QcqpInstance out;
  if (*kind == ProblemKind::MatrixComplex) {
    const Json& n2_field = field(j, "n2");
    if (!n2_field.is_number_integer() || n2_field.get<long long>() < 1) {
      throw ParseError("'n2' must be a positive integer");
    }
    const Index n2 = n2_field.get<Index>();
    ComplexQcqp p;
    const CMatrix a0 = cmatrix_from_json(field(j, "A0"), "A0");
    const CMatrix a1 = cmatrix_from_json(field(j, "A1"), "A1");
    p.b0 = cmatrix_from_json(field(j, "b0"), "b0");
    p.b1 = cmatrix_from_json(field(j, "b1"), "b1");
    expect_shape(a0.rows(), a0.cols(), n, n, "A0");
    expect_shape(a1.rows(), a1.cols(), n, n, "A1");
    expect_shape(p.b0.rows(), p.b0.cols(), n, n2, "b0");
    expect_shape(p.b1.rows(), p.b1.cols(), n, n2, "b1");
    p.a0 = HermMatrix(a0);
    p.a1 = HermMatrix(a1);
    p.c0 = as_number(field(j, "c0"), "c0");
    p.c1 = as_number(field(j, "c1"), "c1");
    out = QcqpInstance::matrix(std::move(p));
  } else {
    RealQcqp p;
    const Matrix a0 = matrix_from_json(field(j, "A0"), "A0");
    const Matrix a1 = matrix_from_json(field(j, "A1"), "A1");
    p.b0 = vector_from_json(field(j, "b0"), "b0");
    p.b1 = vector_from_json(field(j, "b1"), "b1");
    expect_shape(a0.rows(), a0.cols(), n, n, "A0");
    expect_shape(a1.rows(), a1.cols(), n, n, "A1");
    expect_shape(p.b0.size(), 1, n, 1, "b0");
    expect_shape(p.b1.size(), 1, n, 1, "b1");
    p.a0 = SymMatrix(a0);
    p.a1 = SymMatrix(a1);
    p.c0 = as_number(field(j, "c0"), "c0");
    p.c1 = as_number(field(j, "c1"), "c1");
    std::optional<LinearEqualities> linear;
    if (j.contains("A2") || j.contains("b2")) {
      Matrix a2 = matrix_from_json(field(j, "A2"), "A2");
      Vector b2 = vector_from_json(field(j, "b2"), "b2");
      if (a2.rows() == 0) a2.resize(0, n);
      expect_shape(a2.rows(), a2.cols(), b2.size(), n, "A2");
      linear = LinearEqualities{std::move(a2), std::move(b2)};
    }
    out = QcqpInstance::real(*kind, std::move(p), std::move(linear));
  }
  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (!s.is_number_unsigned()) throw ParseError("'seed' must be a non-negative integer");
    out.seed = s.get<std::uint64_t>();
  }
  try {
    out.validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return out;
}

Json solution_to_json(const Solution& solution) {
  Json j;
  j["status"] = std::string(to_string(solution.status));
  j["lambda_star"] = number(solution.lambda_star);
  j["objective"] = number(solution.objective);
  j["constraint_residual"] = number(solution.constraint_residual);
  j["iterations"] = solution.iterations;
  j["x"] = solution.is_matrix() ? to_json(solution.matrix()) : to_json(solution.vector());
  if (!solution.diagnostic.empty()) j["diagnostic"] = solution.diagnostic;
  return j;
}

Solution solution_from_json(const Json& j, const QcqpInstance& instance) {
  if (!j.is_object()) throw ParseError("solution must be a JSON object");
  Solution out;
  const std::string status = field(j, "status").get<std::string>();
  bool known = false;
  for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::TrivialC0, SolveStatus::HardCase,
                        SolveStatus::Infeasible, SolveStatus::Unbounded}) {
    if (status == to_string(s)) {
      out.status = s;
      known = true;
    }
  }
  if (!known) throw ParseError("unknown status '" + status + "'");
  out.lambda_star = as_number(field(j, "lambda_star"), "lambda_star");
  if (instance.is_matrix()) {
    CMatrix x = cmatrix_from_json(field(j, "x"), "x");
    expect_shape(x.rows(), x.cols(), instance.n(), instance.n2(), "x");
    out.x = std::move(x);
  } else {
    Vector x = vector_from_json(field(j, "x"), "x");
    expect_shape(x.size(), 1, instance.n(), 1, "x");
    out.x = std::move(x);
  }
  if (j.contains("objective")) out.objective = as_number(j["objective"], "objective");
  if (j.contains("constraint_residual")) {
    out.constraint_residual = as_number(j["constraint_residual"], "constraint_residual");
  }
  return out;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

QcqpInstance read_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(read_json(path));
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump_instance(const QcqpInstance& instance) {
  // max_digits10 round-trips every double exactly.
  return instance_to_json(instance).dump() + "\n";
}

}  // namespace qcqp::io
