#include "grassfactor/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace grassfactor::json_io {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_data(std::string& out, const MatrixDocument& doc) {
  out += "\"data\":[";
  for (int i = 0; i < doc.rows; ++i)
    for (int j = 0; j < doc.cols; ++j) {
      if (i != 0 || j != 0) out += ',';
      Complex v = doc.m(i, j);
      if (doc.field == Field::Real) {
        out += fmt(v.real());
      } else {
        out += '[';
        out += fmt(v.real());
        out += ',';
        out += fmt(v.imag());
        out += ']';
      }
    }
  out += ']';
}

void append_matrix(std::string& out, const MatrixDocument& doc) {
  out += "{\"schema_version\":\"";
  out += kSchemaVersion;
  out += "\",\"field\":\"";
  out += field_name(doc.field);
  out += "\",\"rows\":";
  out += std::to_string(doc.rows);
  out += ",\"cols\":";
  out += std::to_string(doc.cols);
  out += ',';
  append_data(out, doc);
  out += '}';
}

double checked_number(const json& v, const char* where) {
  if (!v.is_number()) throw ParseError(std::string(where) + ": expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(std::string(where) + ": entry is not finite");
  return d;
}

MatrixDocument matrix_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix document: expected an object");
  if (j.value("schema_version", "") != kSchemaVersion)
    throw ParseError("matrix document: unsupported schema_version");
  std::string field = j.value("field", "");
  MatrixDocument doc;
  if (field == "real")
    doc.field = Field::Real;
  else if (field == "complex")
    doc.field = Field::Complex;
  else
    throw ParseError("matrix document: field must be \"real\" or \"complex\"");
  if (!j.contains("rows") || !j.contains("cols") || !j["rows"].is_number_integer() ||
      !j["cols"].is_number_integer())
    throw ParseError("matrix document: rows/cols must be integers");
  doc.rows = j["rows"].get<int>();
  doc.cols = j["cols"].get<int>();
  if (doc.rows <= 0 || doc.cols <= 0 || doc.rows > 100000 || doc.cols > 100000)
    throw ParseError("matrix document: rows/cols out of range");
  if (!j.contains("data") || !j["data"].is_array())
    throw ParseError("matrix document: data must be an array");
  const auto& data = j["data"];
  if (int(data.size()) != doc.rows * doc.cols)
    throw ParseError("matrix document: data length must be rows*cols");
  doc.m.resize(doc.rows, doc.cols);
  int idx = 0;
  for (int i = 0; i < doc.rows; ++i)
    for (int jj = 0; jj < doc.cols; ++jj, ++idx) {
      const auto& v = data[idx];
      if (doc.field == Field::Real) {
        doc.m(i, jj) = checked_number(v, "matrix data");
      } else {
        if (!v.is_array() || v.size() != 2)
          throw ParseError("matrix data: complex entries must be [re, im] pairs");
        doc.m(i, jj) = Complex(checked_number(v[0], "matrix data"),
                               checked_number(v[1], "matrix data"));
      }
    }
  return doc;
}

}  // namespace

MatrixDocument make_matrix_document(Field field, const ComplexMatrix& m) {
  return MatrixDocument{field, int(m.rows()), int(m.cols()), m};
}

MatrixDocument parse_matrix_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("JSON parse failure: ") + e.what());
  }
  return matrix_from_json(j);
}

FactorizationDocument parse_factorization_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("JSON parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("target") || !j.contains("factors") ||
      !j["factors"].is_array())
    throw ParseError("factorization document: missing target/factors");
  FactorizationDocument doc;
  doc.target = matrix_from_json(j["target"]);
  for (const auto& f : j["factors"]) {
    if (!f.is_object() || !f.contains("matrix"))
      throw ParseError("factorization document: malformed factor");
    FactorDocument fd;
    fd.matrix = matrix_from_json(f["matrix"]);
    fd.model = f.value("model", "");
    if (fd.model != "gr" && fd.model != "grsp")
      throw ParseError("factorization document: factor model must be \"gr\" or \"grsp\"");
    if (!f.contains("k") || !f["k"].is_number_integer())
      throw ParseError("factorization document: factor k must be an integer");
    fd.k = f["k"].get<int>();
    doc.factors.push_back(std::move(fd));
  }
  doc.residual = checked_number(j.value("residual", json(0.0)), "residual");
  doc.group = j.value("group", "");
  doc.tool_version = j.value("tool_version", "");
  return doc;
}

std::string serialize(const MatrixDocument& doc) {
  std::string out;
  out.reserve(size_t(doc.rows) * doc.cols * 24 + 128);
  append_matrix(out, doc);
  return out;
}

std::string serialize(const FactorizationDocument& doc) {
  std::string out;
  out += "{\"target\":";
  append_matrix(out, doc.target);
  out += ",\"factors\":[";
  for (size_t i = 0; i < doc.factors.size(); ++i) {
    if (i) out += ',';
    out += "{\"matrix\":";
    append_matrix(out, doc.factors[i].matrix);
    out += ",\"model\":\"";
    out += doc.factors[i].model;
    out += "\",\"k\":";
    out += std::to_string(doc.factors[i].k);
    out += '}';
  }
  out += "],\"residual\":";
  out += fmt(doc.residual);
  out += ",\"group\":\"";
  out += doc.group;
  out += "\",\"tool_version\":\"";
  out += doc.tool_version;
  out += "\"}";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
}

}  // namespace grassfactor::json_io
