#pragma once

#include <string>
#include <vector>

#include "grassfactor/types.hpp"

namespace grassfactor::json_io {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "grassfactor 1.0.0";

// Row-major matrix exchange document. Complex entries are [re, im] pairs.
struct MatrixDocument {
  Field field = Field::Real;
  int rows = 0;
  int cols = 0;
  ComplexMatrix m;
};

struct FactorDocument {
  MatrixDocument matrix;
  std::string model;  // "gr" | "grsp"
  int k = 0;
};

struct FactorizationDocument {
  MatrixDocument target;
  std::vector<FactorDocument> factors;
  double residual = 0;
  std::string group;  // "so" | "so-" | "su" | "su-" | "sp"
  std::string tool_version = kToolVersion;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MatrixDocument make_matrix_document(Field field, const ComplexMatrix& m);

// Parsing throws ParseError on malformed JSON or schema violations.
MatrixDocument parse_matrix_document(const std::string& text);
FactorizationDocument parse_factorization_document(const std::string& text);

// Serialization is byte-deterministic: fixed key order, no whitespace
// variation, numbers printed with up to 17 significant digits.
std::string serialize(const MatrixDocument& doc);
std::string serialize(const FactorizationDocument& doc);

std::string read_file(const std::string& path);   // throws ParseError on I/O failure
void write_file(const std::string& path, const std::string& text);

}  // namespace grassfactor::json_io
