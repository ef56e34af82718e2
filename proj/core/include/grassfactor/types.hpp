#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace grassfactor {

using Real = double;
using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

enum class Field { Real, Complex };

inline const char* field_name(Field f) { return f == Field::Real ? "real" : "complex"; }

// Default tolerance; overridable per call and via GRASSFACTOR_TOL in the CLI.
inline constexpr double kDefaultTol = 1e-9;
// Eigenvalue clustering tolerance for structured decompositions.
inline constexpr double kClusterTol = 1e-8;
// Below this, a 2-plane rotation is indistinguishable from a pair of signs.
inline constexpr double kSignTol = 1e-12;

// Errors that mean "the input fails a validation precondition" (CLI exit 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Errors that mean "valid input outside this routine's scope" (CLI exit 3).
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadDimensions : ValidationError { using ValidationError::ValidationError; };
struct NotOrthogonal : ValidationError { using ValidationError::ValidationError; };
struct NotUnitary : ValidationError { using ValidationError::ValidationError; };
struct NotOrthonormal : ValidationError { using ValidationError::ValidationError; };
struct InvalidPoint : ValidationError { using ValidationError::ValidationError; };
struct BadSignature : ValidationError { using ValidationError::ValidationError; };
struct NotStructured : ValidationError { using ValidationError::ValidationError; };
struct NotMember : ValidationError { using ValidationError::ValidationError; };
struct NotSpecialOrthogonal : ValidationError { using ValidationError::ValidationError; };
struct NotAntiSpecialOrthogonal : ValidationError { using ValidationError::ValidationError; };
struct NotSpecialUnitary : ValidationError { using ValidationError::ValidationError; };
struct NotAntiSpecialUnitary : ValidationError { using ValidationError::ValidationError; };
struct NotSpecialOrAntiSpecial : ValidationError { using ValidationError::ValidationError; };
struct DeterminantMismatch : ValidationError { using ValidationError::ValidationError; };
struct NotSymplectic : ValidationError { using ValidationError::ValidationError; };
struct NotDiagonalSymplectic : ValidationError { using ValidationError::ValidationError; };
struct ConvergenceFailure : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoSolutionFound : UnsupportedError { using UnsupportedError::UnsupportedError; };
struct NonGeneric : UnsupportedError { using UnsupportedError::UnsupportedError; };
struct Unsupported : UnsupportedError { using UnsupportedError::UnsupportedError; };

inline double env_or_default_tol() {
  if (const char* s = std::getenv("GRASSFACTOR_TOL")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s && v > 0) return v;
  }
  return kDefaultTol;
}

}  // namespace grassfactor
